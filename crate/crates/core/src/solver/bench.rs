//! Quality-up benchmark: wall-clock time of the blackbox solver on cyclic
//! n-roots as a function of precision and worker count.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::Result;
use crate::numerics::Precision;
use crate::polynomial::PolySystem;

use super::{cyclic, solve_blackbox, SolverOptions};

/// Solves `s` with `opts` and returns the elapsed seconds together with the
/// number of distinct solutions found.
pub fn time_solve(s: &PolySystem, opts: &SolverOptions) -> Result<(f64, usize)> {
    let clock = Instant::now();
    let report = solve_blackbox(s, opts)?;
    Ok((clock.elapsed().as_secs_f64(), report.solutions.len()))
}

/// Runs the blackbox solver on cyclic 7-roots and returns the elapsed time
/// in seconds.
pub fn qualityup(n_tasks: usize, precision: Precision) -> f64 {
    let s = cyclic(7).expect("cyclic(7) is well formed");
    let opts = SolverOptions { tasks: n_tasks, precision, ..SolverOptions::default() };
    time_solve(&s, &opts).expect("cyclic(7) is square").0
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchTable {
    pub precisions: Vec<Precision>,
    pub tasks: Vec<usize>,
    /// `elapsed[p][t]` in seconds, indexed like `precisions` and `tasks`.
    pub elapsed: Vec<Vec<f64>>,
    /// Distinct solution counts, same indexing.
    pub solutions: Vec<Vec<usize>>,
}

impl BenchTable {
    /// Times every precision and task count on `s` with a fixed seed.
    pub fn run(s: &PolySystem, precisions: &[Precision], tasks: &[usize], seed: u64) -> Result<Self> {
        let mut elapsed = Vec::new();
        let mut solutions = Vec::new();
        for &precision in precisions {
            let mut row = Vec::new();
            let mut counts = Vec::new();
            for &t in tasks {
                let opts = SolverOptions { tasks: t, precision, seed, ..SolverOptions::default() };
                let (secs, n) = time_solve(s, &opts)?;
                row.push(secs);
                counts.push(n);
            }
            elapsed.push(row);
            solutions.push(counts);
        }
        Ok(Self { precisions: precisions.to_vec(), tasks: tasks.to_vec(), elapsed, solutions })
    }

    /// Elapsed time of each precision at the first task count divided by
    /// that of the first precision.
    pub fn overhead_factors(&self) -> Vec<f64> {
        let base = self.elapsed.first().and_then(|r| r.first()).copied().unwrap_or(f64::NAN);
        self.elapsed.iter().map(|r| r.first().copied().unwrap_or(f64::NAN) / base).collect()
    }

    /// Two CSV blocks separated by a blank line: precision against elapsed
    /// time and overhead factor at the first task count, then task counts
    /// against elapsed time per precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("precision");
        for p in &self.precisions {
            let _ = write!(out, ",{}", p.flag());
        }
        out.push_str("\nelapsed performance");
        for r in &self.elapsed {
            let _ = write!(out, ",{:.3}", r.first().copied().unwrap_or(f64::NAN));
        }
        out.push_str("\noverhead factor");
        for f in self.overhead_factors() {
            let _ = write!(out, ",{f:.2}");
        }
        out.push_str("\n\ntasks");
        for t in &self.tasks {
            let _ = write!(out, ",{t}");
        }
        out.push('\n');
        for (p, r) in self.precisions.iter().zip(&self.elapsed) {
            out.push_str(p.flag());
            for e in r {
                let _ = write!(out, ",{e:.3}");
            }
            out.push('\n');
        }
        out
    }
}
