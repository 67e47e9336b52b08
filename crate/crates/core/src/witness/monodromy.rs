//! Monodromy breakup of a witness set into irreducible factors, certified
//! by the linear trace test.

use rand::Rng;

use super::{match_point, move_between, random_hyperplane, Hyperplane, WitnessSet};
use crate::error::{Error, Result};
use crate::numerics::StoredComplex;
use crate::rng;
use crate::solver::SolverOptions;
use crate::tracker::PathStatus;

pub const DEFAULT_MAX_LOOPS: usize = 20;
/// Offset step of the parallel slices in the trace test.
const TRACE_STEP: f64 = 0.25;
/// Relative tolerance on the second difference of a trace.
const TRACE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct FactorPartition {
    /// Witness point indices of each factor, each sorted, ordered by their
    /// smallest index.
    pub blocks: Vec<Vec<usize>>,
    /// Whether every block passed the trace test.
    pub certified: bool,
    /// Loops run, including failed ones.
    pub loops: usize,
    pub failed_loops: usize,
}

impl FactorPartition {
    pub fn degrees(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

/// Per-point values of a fixed linear form at three parallel slices.
struct TraceSamples {
    values: Vec<[StoredComplex; 3]>,
}

impl TraceSamples {
    fn new(w: &WitnessSet, opts: &SolverOptions) -> Result<Self> {
        let mut rng = rng::stream(w.seed, rng::STREAM_SLICES ^ 0x7472_6163_65);
        let form: Vec<StoredComplex> = (0..w.ambient_dim).map(|_| rng::generic_complex(&mut rng)).collect();
        let n = w.embedded.nvars();
        let eval = |x: &[StoredComplex]| -> StoredComplex {
            form.iter().zip(x).fold(StoredComplex::zero(), |acc, (a, v)| acc + *a * *v)
        };
        let starts: Vec<Vec<StoredComplex>> = w.points.iter().map(|p| p.coords.clone()).collect();
        let mut values: Vec<[StoredComplex; 3]> = starts.iter().map(|x| [eval(x), eval(x), eval(x)]).collect();
        for (k, step) in [(1usize, TRACE_STEP), (2, 2.0 * TRACE_STEP)] {
            let mut shifted = w.slices.clone();
            if let Some(first) = shifted.first_mut() {
                first[n] = first[n] + StoredComplex::from_f64(step, 0.0);
            }
            let paths = move_between(w, &w.slices, &shifted, &starts, opts)?;
            for (i, p) in paths.iter().enumerate() {
                if p.status != PathStatus::Converged {
                    return Err(Error::LoopFailure(format!("trace sample path {i} ended with {:?}", p.status)));
                }
                values[i][k] = eval(&p.endpoint.coords);
            }
        }
        Ok(Self { values })
    }

    /// Second difference of the block's trace relative to its size.
    fn residual(&self, block: &[usize]) -> f64 {
        let mut sum = [StoredComplex::zero(); 3];
        for &i in block {
            for k in 0..3 {
                sum[k] = sum[k] + self.values[i][k];
            }
        }
        let second = sum[0] - sum[1].scale_f64(2.0) + sum[2];
        let scale = sum.iter().map(|c| c.abs_f64()).fold(1.0, f64::max);
        second.abs_f64() / scale
    }
}

/// Linear trace test: the sum over `block` of a fixed linear form of the
/// points, sampled on three parallel slices, must be linear in the slice
/// offset. Returns whether it passes and the relative second difference.
pub fn trace_test(w: &WitnessSet, block: &[usize], opts: &SolverOptions) -> Result<(bool, f64)> {
    if let Some(&bad) = block.iter().find(|&&i| i >= w.degree()) {
        return Err(Error::InvalidInput(format!("witness point {bad} out of range (degree {})", w.degree())));
    }
    let samples = TraceSamples::new(w, opts)?;
    let r = samples.residual(block);
    Ok((r <= TRACE_TOL, r))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn blocks(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = self.find(i);
            match root_of[r] {
                Some(b) => out[b].push(i),
                None => {
                    root_of[r] = Some(out.len());
                    out.push(vec![i]);
                }
            }
        }
        out
    }
}

/// One loop old -> A -> B -> old through two random slice systems. Returns
/// the induced permutation of the witness points, or why it failed.
fn run_loop(w: &WitnessSet, rng: &mut rand_xoshiro::SplitMix64, opts: &SolverOptions) -> Result<Vec<usize>> {
    let n = w.embedded.nvars();
    let a: Vec<Hyperplane> = (0..w.set_dim).map(|_| random_hyperplane(n, rng)).collect();
    let b: Vec<Hyperplane> = (0..w.set_dim).map(|_| random_hyperplane(n, rng)).collect();
    let mut points: Vec<Vec<StoredComplex>> = w.points.iter().map(|p| p.coords.clone()).collect();
    for (from, to) in [(&w.slices, &a), (&a, &b), (&b, &w.slices)] {
        let leg = SolverOptions { seed: rng.gen(), ..opts.clone() };
        let paths = move_between(w, from, to, &points, &leg)?;
        if let Some(p) = paths.iter().find(|p| p.status != PathStatus::Converged) {
            return Err(Error::LoopFailure(format!("path {} ended with {:?}", p.start_index, p.status)));
        }
        points = paths.into_iter().map(|p| p.endpoint.coords).collect();
    }
    let mut perm = Vec::with_capacity(points.len());
    let mut seen = vec![false; points.len()];
    for (i, x) in points.iter().enumerate() {
        let j = match_point(w, x).ok_or_else(|| Error::LoopFailure(format!("endpoint of point {i} matches no witness point")))?;
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::LoopFailure(format!("two endpoints match witness point {j}")));
        }
        perm.push(j);
    }
    Ok(perm)
}

/// Groups witness points by the permutations of random monodromy loops
/// until every group passes the trace test or `max_loops` loops have run.
/// Failed loops are counted and retried with fresh slices.
pub fn monodromy_breakup(w: &WitnessSet, max_loops: usize, seed: u64, opts: &SolverOptions) -> Result<FactorPartition> {
    if w.set_dim == 0 {
        return Err(Error::Domain("monodromy needs a positive-dimensional witness set".into()));
    }
    let samples = TraceSamples::new(w, opts)?;
    let mut uf = UnionFind::new(w.degree());
    let mut rng = rng::stream(seed, rng::STREAM_LOOPS);
    let mut loops = 0;
    let mut failed_loops = 0;
    loop {
        let blocks = uf.blocks();
        let certified = blocks.iter().all(|b| samples.residual(b) <= TRACE_TOL);
        if certified || loops >= max_loops {
            return Ok(FactorPartition { blocks, certified, loops, failed_loops });
        }
        loops += 1;
        match run_loop(w, &mut rng, opts) {
            Ok(perm) => {
                for (i, j) in perm.into_iter().enumerate() {
                    uf.union(i, j);
                }
            }
            Err(Error::LoopFailure(_)) => failed_loops += 1,
            Err(e) => return Err(e),
        }
    }
}
