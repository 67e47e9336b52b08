//! Blackbox solving of square systems: total-degree homotopy, parallel path
//! tracking, endpoint clustering and reporting.

pub mod bench;
pub mod families;
mod format;
mod pool;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::homotopy::{make_homotopy, total_degree_start, Homotopy, PathSystem, StartSolutions};
use crate::numerics::{Complex, DoubleDouble, Precision, QuadDouble, Real, StoredComplex};
use crate::polynomial::PolySystem;
use crate::tracker::{PathResult, PathStatus, PathTracker, SolutionRecord, TrackerConfig};

pub use families::cyclic;
pub use format::{format_sci, format_solution, format_solutions, parse_solutions, solution_to_map};
pub use pool::run_indexed;

/// Default clustering tolerance for endpoints, in the infinity norm.
pub const DEDUPE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Worker threads; 0 tracks sequentially on the calling thread.
    pub tasks: usize,
    pub precision: Precision,
    pub seed: u64,
    /// Tracker settings; `None` uses the defaults of the precision.
    pub tracker: Option<TrackerConfig>,
    pub tpower: u32,
    pub verbose: bool,
    /// Reject non-square systems before doing any work.
    pub checkin: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tasks: 0, precision: Precision::D, seed: 0, tracker: None, tpower: 2, verbose: false, checkin: true }
    }
}

impl SolverOptions {
    pub fn tracker_config(&self) -> TrackerConfig {
        self.tracker.unwrap_or_else(|| TrackerConfig::for_precision(self.precision))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub paths: usize,
    pub converged: usize,
    pub diverged: usize,
    /// Paths that ended with MaxSteps or CorrectorFailed.
    pub failed: usize,
    /// Converged paths merged into another path's endpoint.
    pub clustered: usize,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub varnames: Vec<String>,
    pub solutions: Vec<SolutionRecord>,
    pub path_results: Vec<PathResult>,
    pub counts: Counts,
    pub elapsed_seconds: f64,
    pub seed: u64,
    pub options: SolverOptions,
    pub tracker: TrackerConfig,
    pub gamma: StoredComplex,
}

/// Tracks `n` paths of `h` from the start points produced by `start`, at
/// the working precision `R`.
pub fn track_all<R, S>(h: &Homotopy, n: usize, start: S, cfg: &TrackerConfig, tasks: usize) -> Vec<PathResult>
where
    R: Real,
    S: Fn(usize) -> Vec<Complex<R>> + Sync,
{
    let compiled = h.compile::<R>();
    track_compiled(&compiled, n, start, cfg, tasks)
}

pub(crate) fn track_compiled<R, H, S>(sys: &H, n: usize, start: S, cfg: &TrackerConfig, tasks: usize) -> Vec<PathResult>
where
    R: Real,
    H: PathSystem<R>,
    S: Fn(usize) -> Vec<Complex<R>> + Sync,
{
    run_indexed(n, tasks, || PathTracker::new(sys, *cfg), |tracker, i| tracker.track(&start(i), i))
}

/// Tracks `starts` (stored at quad-double) at a runtime-selected precision.
pub fn track_points(
    h: &Homotopy,
    starts: &[Vec<StoredComplex>],
    precision: Precision,
    cfg: &TrackerConfig,
    tasks: usize,
) -> Vec<PathResult> {
    fn conv<R: Real>(p: &[StoredComplex]) -> Vec<Complex<R>> {
        p.iter().map(|c| Complex::from_qd(*c)).collect()
    }
    match precision {
        Precision::D => track_all::<f64, _>(h, starts.len(), |i| conv(&starts[i]), cfg, tasks),
        Precision::DD => track_all::<DoubleDouble, _>(h, starts.len(), |i| conv(&starts[i]), cfg, tasks),
        Precision::QD => track_all::<QuadDouble, _>(h, starts.len(), |i| conv(&starts[i]), cfg, tasks),
    }
}

/// Groups converged endpoints whose infinity-norm distance is at most
/// `tol * max(1, |x|)`. Each cluster is represented by its member with the
/// smallest `err`, with `m` set to the cluster size. Clusters appear in the
/// order of their first member.
pub fn dedupe(solutions: Vec<SolutionRecord>, tol: f64) -> Vec<SolutionRecord> {
    let mut clusters: Vec<(SolutionRecord, SolutionRecord, usize)> = Vec::new();
    for s in solutions {
        let scale = s.norm().max(1.0);
        match clusters.iter_mut().find(|(first, _, _)| first.distance(&s) <= tol * scale) {
            Some((_, best, size)) => {
                *size += 1;
                if s.err < best.err {
                    *best = s;
                }
            }
            None => clusters.push((s.clone(), s, 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, mut best, size)| {
            best.m = size;
            best
        })
        .collect()
}

fn is_real(r: &SolutionRecord) -> bool {
    let scale = r.norm().max(1.0);
    r.coords.iter().all(|c| c.im.to_f64().abs() <= 1e-8 * scale)
}

/// Endpoint records of converged paths with `is_real` and `singular` set,
/// clustered by [`dedupe`].
pub fn postprocess(paths: &[PathResult], tol: f64) -> Vec<SolutionRecord> {
    let converged = paths
        .iter()
        .filter(|p| p.status == PathStatus::Converged)
        .map(|p| {
            let mut r = p.endpoint.clone();
            r.is_real = is_real(&r);
            r.singular = r.rco < 1e-8 || p.suspect_multiple;
            r
        })
        .collect();
    let mut sols = dedupe(converged, tol);
    for s in &mut sols {
        if s.m > 1 {
            s.singular = true;
        }
    }
    sols
}

pub fn count_paths(paths: &[PathResult], distinct: usize) -> Counts {
    let mut c = Counts { paths: paths.len(), ..Counts::default() };
    for p in paths {
        match p.status {
            PathStatus::Converged => c.converged += 1,
            PathStatus::Diverged => c.diverged += 1,
            PathStatus::MaxSteps | PathStatus::CorrectorFailed => c.failed += 1,
        }
    }
    c.clustered = c.converged - distinct;
    c
}

/// Re-tracking rounds for paths that ended on a shared regular root; each
/// round divides the step bounds by four.
const RETRACK_ROUNDS: usize = 2;

/// Tracks the start solutions listed in `idx` (all when `None`); results
/// carry the start index.
fn track_starts(
    h: &Homotopy,
    sols: &StartSolutions,
    idx: Option<&[usize]>,
    precision: Precision,
    cfg: &TrackerConfig,
    tasks: usize,
) -> Vec<PathResult> {
    let n = idx.map_or(sols.count(), <[usize]>::len);
    let at = |k: usize| idx.map_or(k, |v| v[k]);
    let mut out = match precision {
        Precision::D => track_all::<f64, _>(h, n, |k| sols.point(at(k)), cfg, tasks),
        Precision::DD => track_all::<DoubleDouble, _>(h, n, |k| sols.point(at(k)), cfg, tasks),
        Precision::QD => track_all::<QuadDouble, _>(h, n, |k| sols.point(at(k)), cfg, tasks),
    };
    for (k, p) in out.iter_mut().enumerate() {
        p.start_index = at(k);
    }
    out
}

/// Indices of converged paths that share their endpoint with another path
/// although the endpoint is regular. Two paths cannot reach the same
/// regular root, so one of them jumped.
fn crossed_paths(paths: &[PathResult], tol: f64) -> Vec<usize> {
    let regular = |p: &PathResult| p.status == PathStatus::Converged && p.endpoint.rco >= 1e-8 && !p.suspect_multiple;
    let key = |i: usize| paths[i].endpoint.coords.first().map_or(0.0, |c| c.re.to_f64());
    let mut order: Vec<usize> = (0..paths.len()).filter(|&i| regular(&paths[i])).collect();
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let p = &paths[i].endpoint;
        let reach = tol * p.norm().max(1.0);
        for &j in &order[k + 1..] {
            if key(j) - key(i) > reach {
                break;
            }
            if p.distance(&paths[j].endpoint) <= reach {
                out.extend([i, j]);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Solves a square system with a total-degree homotopy.
pub fn solve_blackbox(s: &PolySystem, opts: &SolverOptions) -> Result<SolveReport> {
    let clock = Instant::now();
    if opts.checkin {
        s.check_square()?;
    }
    let cfg = opts.tracker_config();
    cfg.validate()?;
    let (start, sols) = total_degree_start(s, opts.seed)?;
    let h = make_homotopy(s, &start, opts.seed, opts.tpower)?;
    let mut paths = track_starts(&h, &sols, None, opts.precision, &cfg, opts.tasks);
    let mut retrack_cfg = cfg;
    for _ in 0..RETRACK_ROUNDS {
        let idx = crossed_paths(&paths, DEDUPE_TOL);
        if idx.is_empty() {
            break;
        }
        retrack_cfg.max_step /= 4.0;
        retrack_cfg.initial_step = retrack_cfg.initial_step.min(retrack_cfg.max_step);
        retrack_cfg.min_step = retrack_cfg.min_step.min(retrack_cfg.initial_step);
        let again = track_starts(&h, &sols, Some(&idx), opts.precision, &retrack_cfg, opts.tasks);
        for p in again {
            let i = p.start_index;
            paths[i] = p;
        }
    }
    let solutions = postprocess(&paths, DEDUPE_TOL);
    let counts = count_paths(&paths, solutions.len());
    let elapsed_seconds = clock.elapsed().as_secs_f64();
    if opts.verbose {
        eprintln!(
            "tracked {} paths in {:.3}s: {} converged, {} diverged, {} failed, {} distinct solutions",
            counts.paths,
            elapsed_seconds,
            counts.converged,
            counts.diverged,
            counts.failed,
            solutions.len()
        );
    }
    Ok(SolveReport {
        varnames: s.varnames.clone(),
        solutions,
        path_results: paths,
        counts,
        elapsed_seconds,
        seed: opts.seed,
        options: opts.clone(),
        tracker: cfg,
        gamma: h.gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QuadDouble;
    use crate::polynomial::parse_system;

    fn rec(x: f64, err: f64) -> SolutionRecord {
        SolutionRecord {
            t: 1.0,
            m: 1,
            coords: vec![Complex::new(QuadDouble::from_f64(x), QuadDouble::ZERO)],
            err,
            rco: 1.0,
            res: 0.0,
            is_real: true,
            singular: false,
        }
    }

    #[test]
    fn dedupe_cases() {
        let d = dedupe(vec![rec(1.0, 1e-9), rec(1.0 + 1e-12, 1e-14)], 1e-8);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].m, 2);
        assert_eq!(d[0].err, 1e-14);
        assert_eq!(dedupe(vec![rec(1.0, 0.0), rec(-1.0, 0.0)], 1e-8).len(), 2);
        assert!(dedupe(Vec::new(), 1e-8).is_empty());
    }

    #[test]
    fn linear_system_has_one_solution() {
        let s = parse_system("x - 1; y - 2;").unwrap();
        let r = solve_blackbox(&s, &SolverOptions::default()).unwrap();
        assert_eq!(r.solutions.len(), 1);
        let p = r.solutions[0].point::<f64>();
        assert!((p[0] - Complex::new(1.0, 0.0)).abs() < 1e-12);
        assert!((p[1] - Complex::new(2.0, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn not_square_is_rejected() {
        let s = parse_system("x*y - 1;").unwrap();
        assert!(matches!(solve_blackbox(&s, &SolverOptions::default()), Err(crate::Error::NotSquare { .. })));
    }

    #[test]
    fn shared_regular_endpoints_are_flagged() {
        let path = |x: f64, rco: f64, i: usize| PathResult {
            status: PathStatus::Converged,
            endpoint: SolutionRecord { rco, ..rec(x, 1e-12) },
            steps_taken: 10,
            start_index: i,
            suspect_multiple: false,
        };
        let paths = vec![path(1.0, 0.5, 0), path(2.0, 0.5, 1), path(1.0 + 1e-12, 0.5, 2), path(3.0, 1e-12, 3), path(3.0, 1e-12, 4)];
        assert_eq!(crossed_paths(&paths, DEDUPE_TOL), vec![0, 2]);
    }
}
