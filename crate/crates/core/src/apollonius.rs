//! Circles tangent to three given circles. Each sign vector `sigma` fixes
//! the kind of tangency (external for `+1`, internal for `-1`) and gives
//! the system `(x - cx_i)^2 + (y - cy_i)^2 - (r + sigma_i r_i)^2 = 0` in the
//! unknowns `(x, y, r)`. Sessions keep the last input and roots so a small
//! change of the input is re-solved by a coefficient homotopy from the
//! previous roots.

use std::num::NonZeroUsize;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use lru::LruCache;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::coefficient_homotopy;
use crate::numerics::{Complex, Precision, QuadDouble, StoredComplex};
use crate::polynomial::{PolySystem, Polynomial};
use crate::solver::{postprocess, solve_blackbox, track_points, SolverOptions, DEDUPE_TOL};
use crate::tracker::{PathStatus, SolutionRecord};

/// The eight sign vectors, in a fixed order.
pub const SIGNS: [[i8; 3]; 8] = [
    [1, 1, 1],
    [1, 1, -1],
    [1, -1, 1],
    [1, -1, -1],
    [-1, 1, 1],
    [-1, 1, -1],
    [-1, -1, 1],
    [-1, -1, -1],
];

/// Centers are shifted by this generic offset before building the
/// equations, so no linear coefficient vanishes for inputs on the axes and
/// all inputs share one monomial support.
const FRAME: (f64, f64) = (0.318_309_886_183_790_7, 0.577_215_664_901_532_9);

const SEED: u64 = 0x41_504f_4c4c;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApolloniusInput {
    pub circles: [Circle; 3],
}

impl ApolloniusInput {
    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.circles.iter().enumerate() {
            if !(c.cx.is_finite() && c.cy.is_finite() && c.r.is_finite()) {
                return Err(Error::InvalidInput(format!("circle {i} has a non-finite coordinate")));
            }
            if c.r <= 0.0 {
                return Err(Error::InvalidInput(format!("circle {i} has radius {} <= 0", c.r)));
            }
        }
        Ok(())
    }
}

fn q(x: f64) -> StoredComplex {
    Complex::from_real(QuadDouble::from_f64(x))
}

fn build(c: &ApolloniusInput, sigma: [i8; 3], offset: (f64, f64)) -> PolySystem {
    let polys = c
        .circles
        .iter()
        .zip(sigma)
        .map(|(ci, s)| {
            let a = QuadDouble::from_f64(ci.cx) + QuadDouble::from_f64(offset.0);
            let b = QuadDouble::from_f64(ci.cy) + QuadDouble::from_f64(offset.1);
            let rho = QuadDouble::from_f64(ci.r * s as f64);
            let two = QuadDouble::from_f64(2.0);
            let c0 = a * a + b * b - rho * rho;
            let re = |v: QuadDouble| Complex::from_real(v);
            Polynomial::from_terms(
                3,
                vec![
                    (q(1.0), vec![2, 0, 0]),
                    (re(-(two * a)), vec![1, 0, 0]),
                    (q(1.0), vec![0, 2, 0]),
                    (re(-(two * b)), vec![0, 1, 0]),
                    (q(-1.0), vec![0, 0, 2]),
                    (re(-(two * rho)), vec![0, 0, 1]),
                    (re(c0), vec![0, 0, 0]),
                ],
            )
        })
        .collect();
    PolySystem::new(polys, vec!["x".into(), "y".into(), "r".into()]).expect("three variables")
}

/// The tangency system for one sign vector.
pub fn apollonius_system(c: &ApolloniusInput, sigma: [i8; 3]) -> PolySystem {
    build(c, sigma, (0.0, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Converged,
    NoSolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<StoredComplex> for JsonComplex {
    fn from(c: StoredComplex) -> Self {
        let c = c.to_f64();
        Self { re: c.re, im: c.im }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentCircle {
    pub x: JsonComplex,
    pub y: JsonComplex,
    pub r: JsonComplex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApolloniusEntry {
    pub sigma: [i8; 3],
    pub status: EntryStatus,
    pub solution: Option<TangentCircle>,
    pub is_real: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApolloniusOutput {
    pub entries: Vec<ApolloniusEntry>,
    pub session: String,
    pub elapsed_ms: f64,
    /// Sign systems re-solved from the session's previous roots.
    pub warm_started: usize,
}

/// Roots of one sign system, in the shifted frame.
type Roots = Vec<Vec<StoredComplex>>;

#[derive(Clone)]
struct Session {
    input: ApolloniusInput,
    roots: Vec<Roots>,
    entries: Vec<ApolloniusEntry>,
    touched: Instant,
}

fn options() -> SolverOptions {
    SolverOptions { tasks: 0, precision: Precision::D, seed: SEED, ..SolverOptions::default() }
}

fn cold(sys: &PolySystem) -> Result<Vec<SolutionRecord>> {
    Ok(solve_blackbox(sys, &options())?.solutions)
}

fn warm(from: &PolySystem, to: &PolySystem, starts: &Roots) -> Option<Vec<SolutionRecord>> {
    if starts.is_empty() {
        return None;
    }
    let h = coefficient_homotopy(from, to, SEED).ok()?;
    let opts = options();
    let paths = track_points(&h, starts, opts.precision, &opts.tracker_config(), 0);
    if paths.iter().any(|p| p.status != PathStatus::Converged) {
        return None;
    }
    let sols = postprocess(&paths, DEDUPE_TOL);
    (sols.len() == starts.len()).then_some(sols)
}

fn is_real(s: &SolutionRecord) -> bool {
    let scale = s.norm().max(1.0);
    s.coords.iter().all(|c| c.im.to_f64().abs() <= 1e-8 * scale)
}

/// Picks the reported root: real before complex, then positive radius.
fn entry(sigma: [i8; 3], sols: &[SolutionRecord]) -> ApolloniusEntry {
    let best = sols
        .iter()
        .filter(|s| s.rco > 1e-8)
        .min_by_key(|s| (!is_real(s), s.coords[2].re.to_f64() <= 0.0));
    match best {
        Some(s) => {
            let x = s.coords[0] - q(FRAME.0);
            let y = s.coords[1] - q(FRAME.1);
            ApolloniusEntry {
                sigma,
                status: EntryStatus::Converged,
                solution: Some(TangentCircle { x: x.into(), y: y.into(), r: s.coords[2].into() }),
                is_real: is_real(s),
            }
        }
        None => ApolloniusEntry { sigma, status: EntryStatus::NoSolution, solution: None, is_real: false },
    }
}

/// Bounded store of sessions, evicting the least recently used entry and
/// expiring entries older than the time to live.
pub struct SessionCache {
    inner: Mutex<LruCache<String, Session>>,
    ttl: Duration,
}

impl SessionCache {
    pub fn new(capacity: usize, ttl: Duration) -> Self {
        let cap = NonZeroUsize::new(capacity.max(1)).expect("positive capacity");
        Self { inner: Mutex::new(LruCache::new(cap)), ttl }
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, LruCache<String, Session>> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn get(&self, token: &str) -> Option<Session> {
        let mut cache = self.lock();
        let live = cache.get(token).map(|s| s.touched.elapsed() <= self.ttl)?;
        if live {
            cache.get(token).cloned()
        } else {
            cache.pop(token);
            None
        }
    }

    /// Solves all eight sign systems, warm-starting from the session named
    /// by `token` when it exists, and stores the result under the returned
    /// token.
    pub fn solve(&self, input: &ApolloniusInput, token: Option<&str>) -> Result<ApolloniusOutput> {
        let clock = Instant::now();
        input.validate()?;
        let previous = token.and_then(|t| self.get(t));
        let token = match (&previous, token) {
            (Some(_), Some(t)) => t.to_string(),
            _ => uuid::Uuid::new_v4().to_string(),
        };
        if let Some(p) = previous.as_ref().filter(|p| p.input == *input) {
            let mut cache = self.lock();
            cache.put(token.clone(), Session { touched: Instant::now(), ..p.clone() });
            return Ok(ApolloniusOutput {
                entries: p.entries.clone(),
                session: token,
                elapsed_ms: clock.elapsed().as_secs_f64() * 1e3,
                warm_started: SIGNS.len(),
            });
        }
        let mut roots = Vec::with_capacity(SIGNS.len());
        let mut entries = Vec::with_capacity(SIGNS.len());
        let mut warm_started = 0;
        for (k, sigma) in SIGNS.into_iter().enumerate() {
            let sys = build(input, sigma, FRAME);
            let moved = previous.as_ref().and_then(|p| warm(&build(&p.input, sigma, FRAME), &sys, &p.roots[k]));
            let sols = match moved {
                Some(s) => {
                    warm_started += 1;
                    s
                }
                None => cold(&sys)?,
            };
            entries.push(entry(sigma, &sols));
            roots.push(sols.into_iter().filter(|s| s.rco > 1e-8).map(|s| s.coords).collect::<Roots>());
        }
        if entries.iter().all(|e| e.status == EntryStatus::NoSolution) {
            return Err(Error::IllPosed("no sign system has a regular solution".into()));
        }
        let session = Session { input: input.clone(), roots, entries: entries.clone(), touched: Instant::now() };
        self.lock().put(token.clone(), session);
        Ok(ApolloniusOutput { entries, session: token, elapsed_ms: clock.elapsed().as_secs_f64() * 1e3, warm_started })
    }
}

/// Solves without a session.
pub fn apollonius_solve(input: &ApolloniusInput) -> Result<ApolloniusOutput> {
    SessionCache::new(1, Duration::from_secs(1)).solve(input, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(cx: f64, cy: f64) -> Circle {
        Circle { cx, cy, r: 1.0 }
    }

    #[test]
    fn system_shape() {
        let c = ApolloniusInput { circles: [unit(0.0, 0.0), unit(4.0, 0.0), unit(2.0, 3.0)] };
        let s = apollonius_system(&c, [1, 1, 1]);
        assert_eq!(s.degrees(), vec![2, 2, 2]);
        assert_eq!(s.varnames, ["x", "y", "r"]);
    }

    #[test]
    fn identical_circles_are_ill_posed() {
        let c = ApolloniusInput { circles: [unit(1.0, 1.0); 3] };
        assert!(matches!(apollonius_solve(&c), Err(Error::IllPosed(_))));
    }

    #[test]
    fn rejects_bad_radius() {
        let c = ApolloniusInput { circles: [unit(0.0, 0.0), unit(4.0, 0.0), Circle { cx: 2.0, cy: 3.0, r: 0.0 }] };
        assert!(matches!(apollonius_solve(&c), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn repeated_request_is_served_from_the_session() {
        let cache = SessionCache::new(4, Duration::from_secs(60));
        let c = ApolloniusInput { circles: [unit(0.0, 0.0), unit(4.0, 0.0), unit(2.0, 3.0)] };
        let first = cache.solve(&c, None).unwrap();
        let again = cache.solve(&c, Some(&first.session)).unwrap();
        assert_eq!(first.entries, again.entries);
        assert_eq!(first.session, again.session);
        assert_eq!(cache.len(), 1);
    }
}
