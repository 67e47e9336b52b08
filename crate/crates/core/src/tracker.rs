//! Predictor-corrector path tracking.
//!
//! Paths run from `t = 0` to `t = 1`. Internally the tracker steps in
//! `s = 1 - t`, so the approach to `t = 1` can continue geometrically to
//! very small `s`: a path that cannot jump to `s = 0` keeps halving its
//! distance until it either settles (a singular endpoint), grows past the
//! divergence bound, or exhausts the step budget.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::PathSystem;
use crate::numerics::{lu_factor, max_norm, Complex, Matrix, Precision, Real, StoredComplex};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub min_step: f64,
    pub max_step: f64,
    pub initial_step: f64,
    /// Relative update size at which the corrector accepts a step along
    /// the path. Endpoints are polished further, to `endgame_tol`.
    pub path_tol: f64,
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    pub max_steps: usize,
    pub divergence_norm: f64,
    pub step_expand: f64,
    pub step_shrink: f64,
    pub endgame_tol: f64,
    /// Distance to `t = 1` below which a bounded path that cannot reach
    /// `t = 1` in one step is polished where it stands.
    pub endgame_floor: f64,
}

impl TrackerConfig {
    pub fn for_precision(p: Precision) -> Self {
        // Steps are accepted at the same tolerance in every precision. A
        // corrector run to 1e-24 along the path converges from too far away
        // and lets paths jump.
        let (corrector_tol, endgame_tol, endgame_floor) = match p {
            Precision::D => (1e-10, 1e-13, 1e-12),
            Precision::DD => (1e-24, 1e-28, 1e-24),
            Precision::QD => (1e-48, 1e-56, 1e-48),
        };
        Self {
            min_step: 1e-8,
            max_step: 0.2,
            initial_step: 0.05,
            path_tol: 1e-10,
            corrector_tol,
            max_corrector_iters: 4,
            max_steps: 2000,
            divergence_norm: 1e8,
            step_expand: 1.5,
            step_shrink: 0.5,
            endgame_tol,
            endgame_floor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.min_step
            && self.min_step <= self.initial_step
            && self.initial_step <= self.max_step
            && self.max_step < 1.0
            && self.step_shrink < 1.0
            && self.step_shrink > 0.0
            && self.step_expand > 1.0
            && self.path_tol > 0.0
            && self.corrector_tol > 0.0
            && self.max_corrector_iters > 0
            && self.divergence_norm > 0.0
            && self.endgame_floor >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("inconsistent tracker configuration {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathStatus {
    Converged,
    Diverged,
    MaxSteps,
    CorrectorFailed,
}

/// An approximate solution with its diagnostics: `err` is the norm of the
/// last Newton update, `rco` an estimate of the inverse condition number of
/// the Jacobian and `res` the residual norm.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionRecord {
    pub t: f64,
    pub m: usize,
    pub coords: Vec<StoredComplex>,
    pub err: f64,
    pub rco: f64,
    pub res: f64,
    pub is_real: bool,
    pub singular: bool,
}

impl SolutionRecord {
    pub fn point<R: Real>(&self) -> Vec<Complex<R>> {
        self.coords.iter().map(|c| Complex::from_qd(*c)).collect()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Infinity-norm distance to another point.
    pub fn distance(&self, other: &SolutionRecord) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (*a - *b).abs_f64())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    pub status: PathStatus,
    pub endpoint: SolutionRecord,
    pub steps_taken: usize,
    pub start_index: usize,
    /// Newton converged only linearly at the end, the signature of a
    /// multiple root.
    pub suspect_multiple: bool,
}

/// Diagnostics of a Newton run at fixed `t`.
#[derive(Clone, Debug)]
pub struct NewtonOutcome<R> {
    pub x: Vec<Complex<R>>,
    pub err: f64,
    pub rco: f64,
    pub res: f64,
    pub iters: usize,
    pub converged: bool,
    pub suspect_multiple: bool,
}

/// Evaluation buffers for one path at a time.
struct Buffers<R: Real, H: PathSystem<R>> {
    scratch: H::Scratch,
    h: Vec<Complex<R>>,
    dt: Vec<Complex<R>>,
    jac: Matrix<R>,
}

impl<R: Real, H: PathSystem<R>> Buffers<R, H> {
    fn new(sys: &H) -> Self {
        let n = sys.dim();
        Self {
            scratch: sys.scratch(),
            h: vec![Complex::zero(); n],
            dt: vec![Complex::zero(); n],
            jac: Matrix::zeros(n, n),
        }
    }
}

fn ts<R: Real>(s: f64) -> (R, R) {
    let sr = R::from_f64(s);
    (R::one() - sr, sr)
}

fn relative(err: f64, norm: f64) -> f64 {
    err / norm.max(1.0)
}

/// Solves `jac * v = -rhs` after scaling every row by a power of two so
/// its largest entry is near one. The scaling is exact and keeps rows of
/// very different degrees from losing accuracy in the elimination.
fn scaled_solve<R: Real>(jac: &mut Matrix<R>, rhs: &[Complex<R>]) -> Option<Vec<Complex<R>>> {
    let n = jac.cols;
    let mut b: Vec<Complex<R>> = rhs.iter().map(|v| -*v).collect();
    for (i, bi) in b.iter_mut().enumerate() {
        let row = &mut jac.data[i * n..(i + 1) * n];
        let big = row.iter().map(|c| c.l1_f64()).fold(0.0, f64::max);
        if big > 0.0 && big.is_finite() {
            let k = big.log2().round() as i32;
            if k != 0 {
                let f = R::from_f64(2f64.powi(-k));
                row.iter_mut().for_each(|c| *c = c.scale(f));
                *bi = bi.scale(f);
            }
        }
    }
    let lu = lu_factor(jac);
    if lu.singular {
        return None;
    }
    Some(lu.solve(&b))
}

/// One Newton update in place. Returns the update norm, or `None` when the
/// Jacobian is singular or the result is not finite.
fn newton_update<R: Real, H: PathSystem<R>>(sys: &H, x: &mut [Complex<R>], s: f64, b: &mut Buffers<R, H>) -> Option<f64> {
    let (t, sr) = ts::<R>(s);
    sys.eval(x, t, sr, &mut b.scratch, &mut b.h, Some(&mut b.jac), None);
    let dx = scaled_solve(&mut b.jac, &b.h)?;
    for (xi, d) in x.iter_mut().zip(&dx) {
        *xi += *d;
    }
    let err = max_norm(&dx);
    (err.is_finite() && x.iter().all(|c| c.is_finite())).then_some(err)
}

/// Residual norm and inverse condition estimate at `(x, s)`.
fn diagnostics<R: Real, H: PathSystem<R>>(sys: &H, x: &[Complex<R>], s: f64, b: &mut Buffers<R, H>) -> (f64, f64) {
    let (t, sr) = ts::<R>(s);
    sys.eval(x, t, sr, &mut b.scratch, &mut b.h, Some(&mut b.jac), None);
    let res = max_norm(&b.h);
    let rco = lu_factor(&b.jac).rcond();
    (res, rco)
}

fn newton_at<R: Real, H: PathSystem<R>>(
    sys: &H,
    x0: &[Complex<R>],
    s: f64,
    tol: f64,
    max_iters: usize,
    b: &mut Buffers<R, H>,
) -> NewtonOutcome<R> {
    let mut x = x0.to_vec();
    let mut errs: Vec<f64> = Vec::with_capacity(max_iters);
    let mut converged = false;
    for _ in 0..max_iters {
        let Some(err) = newton_update(sys, &mut x, s, b) else { break };
        errs.push(err);
        if relative(err, max_norm(&x)) <= tol {
            converged = true;
            break;
        }
    }
    let (res, rco) = diagnostics(sys, &x, s, b);
    let suspect_multiple = !converged
        && errs.len() >= 3
        && errs.windows(2).rev().take(2).all(|w| w[1] > 0.25 * w[0] && w[1] < w[0]);
    NewtonOutcome {
        x,
        err: errs.last().copied().unwrap_or(0.0),
        rco,
        res,
        iters: errs.len(),
        converged,
        suspect_multiple,
    }
}

/// Newton's method on `H(., t)` from `x`, stopping once the update is below
/// `corrector_tol` (relative to `max(1, |x|)`) or after
/// `max_corrector_iters` updates. A singular Jacobian on the first update is
/// an error.
pub fn newton_correct<R: Real, H: PathSystem<R>>(
    sys: &H,
    x: &[Complex<R>],
    t: f64,
    cfg: &TrackerConfig,
) -> Result<NewtonOutcome<R>> {
    let mut b = Buffers::new(sys);
    let out = newton_at(sys, x, 1.0 - t, cfg.corrector_tol, cfg.max_corrector_iters, &mut b);
    if out.iters == 0 {
        return Err(Error::SingularMatrix);
    }
    Ok(out)
}

fn tangent<R: Real, H: PathSystem<R>>(sys: &H, x: &[Complex<R>], s: f64, b: &mut Buffers<R, H>) -> Option<Vec<Complex<R>>> {
    let (t, sr) = ts::<R>(s);
    sys.eval(x, t, sr, &mut b.scratch, &mut b.h, Some(&mut b.jac), Some(&mut b.dt));
    let v = scaled_solve(&mut b.jac, &b.dt)?;
    v.iter().all(|c| c.is_finite()).then_some(v)
}

/// Euler predictor: `x + dt * dx/dt` with `dH/dx * dx/dt = -dH/dt`.
pub fn predict_tangent<R: Real, H: PathSystem<R>>(sys: &H, x: &[Complex<R>], t: f64, dt: f64) -> Result<Vec<Complex<R>>> {
    let mut b = Buffers::new(sys);
    let v = tangent(sys, x, 1.0 - t, &mut b).ok_or(Error::SingularMatrix)?;
    let step = R::from_f64(dt);
    Ok(x.iter().zip(&v).map(|(xi, vi)| *xi + vi.scale(step)).collect())
}

/// Corrector used inside the tracking loop: besides converging within the
/// iteration budget, every update must shrink the previous one by at least
/// half, which keeps the iterate on the path it started near.
fn track_correct<R: Real, H: PathSystem<R>>(
    sys: &H,
    x: &mut Vec<Complex<R>>,
    s: f64,
    cfg: &TrackerConfig,
    b: &mut Buffers<R, H>,
) -> Option<f64> {
    let mut prev = f64::INFINITY;
    for _ in 0..cfg.max_corrector_iters {
        let err = newton_update(sys, x, s, b)?;
        if err > 0.5 * prev {
            return None;
        }
        if relative(err, max_norm(x)) <= cfg.path_tol {
            return Some(err);
        }
        prev = err;
    }
    None
}

fn record<R: Real>(x: &[Complex<R>], t: f64, err: f64, rco: f64, res: f64) -> SolutionRecord {
    SolutionRecord {
        t,
        m: 1,
        coords: x.iter().map(|c| c.to_qd()).collect(),
        err,
        rco,
        res,
        is_real: false,
        singular: false,
    }
}

/// Below this distance to `t = 1`, a path whose norm grew tenfold over the
/// last three decades of `s` is declared divergent without tracking it
/// further.
const EARLY_DIVERGENCE_S: f64 = 1e-4;

fn norm_decades_ago(history: &[(f64, f64)], s: f64) -> Option<f64> {
    history.iter().rev().find(|(hs, _)| *hs >= (1e3 * s).min(1.0)).map(|&(_, n)| n)
}

/// True when the path norm has grown noticeably over the last three decades
/// of `s` (or since the start, for `s > 1e-3`).
fn growing(history: &[(f64, f64)], s: f64, norm: f64) -> bool {
    norm_decades_ago(history, s).is_some_and(|hn| norm > 1.5 * hn && norm > 1.0)
}

/// Tracks one path from `start` at `t = 0` to `t = 1`.
pub fn track_path<R: Real, H: PathSystem<R>>(
    sys: &H,
    start: &[Complex<R>],
    start_index: usize,
    cfg: &TrackerConfig,
) -> PathResult {
    let mut b = Buffers::new(sys);
    track_with(sys, start, start_index, cfg, &mut b)
}

fn track_with<R: Real, H: PathSystem<R>>(
    sys: &H,
    start: &[Complex<R>],
    start_index: usize,
    cfg: &TrackerConfig,
    b: &mut Buffers<R, H>,
) -> PathResult {
    let mut x = start.to_vec();
    let mut s = 1.0f64;
    let mut h = cfg.initial_step;
    let mut steps = 0usize;
    let mut history: Vec<(f64, f64)> = vec![(1.0, max_norm(&x))];
    let finish = |status: PathStatus, x: &[Complex<R>], s: f64, steps: usize, err: f64, b: &mut Buffers<R, H>| {
        let (res, rco) = diagnostics(sys, x, s, b);
        PathResult {
            status,
            endpoint: record(x, 1.0 - s, err, rco, res),
            steps_taken: steps,
            start_index,
            suspect_multiple: false,
        }
    };
    loop {
        let norm = max_norm(&x);
        if !norm.is_finite() || norm > cfg.divergence_norm {
            return finish(PathStatus::Diverged, &x, s, steps, 0.0, b);
        }
        if s == 0.0 {
            break;
        }
        if s < EARLY_DIVERGENCE_S && norm > 10.0 && norm_decades_ago(&history, s).is_some_and(|hn| norm > 10.0 * hn) {
            return finish(PathStatus::Diverged, &x, s, steps, 0.0, b);
        }
        if s < cfg.endgame_floor && !growing(&history, s, norm) {
            break;
        }
        // A path that stalls while its norm keeps growing is heading to
        // infinity.
        let stalled = |status| if growing(&history, s, norm) { PathStatus::Diverged } else { status };
        if steps >= cfg.max_steps {
            return finish(stalled(PathStatus::MaxSteps), &x, s, steps, 0.0, b);
        }
        let step = h.min(cfg.max_step).min(s);
        if step < cfg.min_step * s {
            return finish(stalled(PathStatus::CorrectorFailed), &x, s, steps, 0.0, b);
        }
        steps += 1;
        let s_new = if step >= s { 0.0 } else { s - step };
        let accepted = tangent(sys, &x, s, b).and_then(|v| {
            let dt = R::from_f64(s - s_new);
            let mut y: Vec<Complex<R>> = x.iter().zip(&v).map(|(xi, vi)| *xi + vi.scale(dt)).collect();
            track_correct(sys, &mut y, s_new, cfg, b).map(|_| y)
        });
        match accepted {
            Some(y) => {
                x = y;
                s = s_new;
                history.push((s, max_norm(&x)));
                h = (h * cfg.step_expand).min(cfg.max_step);
            }
            None => h *= cfg.step_shrink,
        }
    }
    // Polish at t = 1.
    let polish = newton_at(sys, &x, 0.0, cfg.endgame_tol, 2 * cfg.max_corrector_iters, b);
    let improved = polish.res.is_finite() && polish.x.iter().all(|c| c.is_finite());
    let (x, err, rco, res, suspect) = if improved {
        (polish.x, polish.err, polish.rco, polish.res, polish.suspect_multiple)
    } else {
        let (res, rco) = diagnostics(sys, &x, 0.0, b);
        (x, 0.0, rco, res, false)
    };
    let norm = max_norm(&x);
    let status = if res <= cfg.corrector_tol && norm <= cfg.divergence_norm {
        PathStatus::Converged
    } else if growing(&history, s.max(f64::MIN_POSITIVE), norm) || norm > cfg.divergence_norm {
        PathStatus::Diverged
    } else {
        PathStatus::CorrectorFailed
    };
    PathResult {
        status,
        endpoint: record(&x, 1.0, err, rco, res),
        steps_taken: steps,
        start_index,
        suspect_multiple: suspect,
    }
}

/// Per-worker tracker state, reusable across paths of the same system.
pub struct PathTracker<'a, R: Real, H: PathSystem<R>> {
    sys: &'a H,
    cfg: TrackerConfig,
    buffers: Buffers<R, H>,
}

impl<'a, R: Real, H: PathSystem<R>> PathTracker<'a, R, H> {
    pub fn new(sys: &'a H, cfg: TrackerConfig) -> Self {
        Self { sys, cfg, buffers: Buffers::new(sys) }
    }

    pub fn track(&mut self, start: &[Complex<R>], start_index: usize) -> PathResult {
        track_with(self.sys, start, start_index, &self.cfg, &mut self.buffers)
    }
}

/// Marks `is_real`, `singular` and the cluster size `m` of a converged
/// endpoint relative to all endpoints.
pub fn classify_endpoint(r: &PathResult, all: &[PathResult], tol_cluster: f64) -> SolutionRecord {
    let mut rec = r.endpoint.clone();
    let scale = rec.norm().max(1.0);
    rec.is_real = rec.coords.iter().all(|c| c.im.to_f64().abs() <= 1e-8 * scale);
    rec.singular = rec.rco < 1e-8 || r.suspect_multiple;
    rec.m = all
        .iter()
        .filter(|o| o.status == PathStatus::Converged)
        .filter(|o| o.endpoint.distance(&rec) <= tol_cluster * scale)
        .count()
        .max(1);
    rec
}
