//! Witness sets for positive-dimensional solution sets: the system is
//! embedded with slack variables and generic hyperplanes, and the isolated
//! solutions with zero slack are generic points on the top-dimensional
//! part.

mod file;
mod monodromy;

use crate::error::{Error, Result};
use crate::homotopy::make_homotopy;
use crate::numerics::{Complex, StoredComplex};
use crate::polynomial::{PolySystem, Polynomial};
use crate::rng;
use crate::solver::{solve_blackbox, track_points, SolverOptions};
use crate::tracker::{PathResult, PathStatus, SolutionRecord};

pub use file::{format_witness, parse_witness};
pub use monodromy::{monodromy_breakup, trace_test, FactorPartition, DEFAULT_MAX_LOOPS};

/// Slack coordinates above this modulus disqualify a point.
pub const SLACK_TOL: f64 = 1e-8;
/// Two tracked points are the same when closer than this, relative to
/// `max(1, |x|)`.
pub const MATCH_TOL: f64 = 1e-6;

/// A hyperplane `a_0 x_0 + ... + a_{n-1} x_{n-1} + a_n = 0`, stored as its
/// `n + 1` coefficients with the constant last.
pub type Hyperplane = Vec<StoredComplex>;

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSet {
    /// Number of variables of the original system.
    pub ambient_dim: usize,
    pub set_dim: usize,
    /// Original equations with slack terms, followed by one hyperplane per
    /// dimension, in `ambient_dim + set_dim` variables.
    pub embedded: PolySystem,
    pub slices: Vec<Hyperplane>,
    pub points: Vec<SolutionRecord>,
    pub seed: u64,
}

impl WitnessSet {
    pub fn degree(&self) -> usize {
        self.points.len()
    }

    /// The embedded system with its hyperplanes replaced by `slices`.
    pub fn with_slices(&self, slices: &[Hyperplane]) -> Result<PolySystem> {
        let nv = self.embedded.nvars();
        if slices.len() != self.set_dim || slices.iter().any(|h| h.len() != nv + 1) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} hyperplanes with {} coefficients",
                self.set_dim,
                nv + 1
            )));
        }
        let core = self.embedded.len() - self.set_dim;
        let mut polys = self.embedded.polys[..core].to_vec();
        polys.extend(slices.iter().map(|h| hyperplane(h)));
        PolySystem::new(polys, self.embedded.varnames.clone())
    }

    /// Coordinates of a point in the original variables.
    pub fn original_coords<'a>(&self, p: &'a SolutionRecord) -> &'a [StoredComplex] {
        &p.coords[..self.ambient_dim]
    }
}

fn hyperplane(h: &[StoredComplex]) -> Polynomial {
    let n = h.len() - 1;
    let mut terms: Vec<(StoredComplex, Vec<u32>)> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            (h[j], e)
        })
        .collect();
    terms.push((h[n], vec![0; n]));
    Polynomial::from_terms(n, terms)
}

/// A hyperplane with generic coefficients in `n` variables.
pub fn random_hyperplane(n: usize, rng: &mut rand_xoshiro::SplitMix64) -> Hyperplane {
    (0..=n).map(|_| rng::generic_complex(rng)).collect()
}

/// Adds `dim` slack variables `zz1..zz{dim}` and `dim` generic hyperplanes.
///
/// The equations are first brought to exactly `nvars`: missing ones are
/// zero polynomials (so their slack terms force the slacks to vanish on the
/// set), surplus ones are replaced by random combinations. Every equation
/// then gains a random linear combination of the slacks.
pub fn embed(nvars: usize, dim: usize, s: &PolySystem, seed: u64) -> Result<PolySystem> {
    if s.nvars() != nvars {
        return Err(Error::DimensionMismatch { expected: nvars, got: s.nvars() });
    }
    if dim == 0 {
        return Ok(s.clone());
    }
    if dim > nvars {
        return Err(Error::Domain(format!("dimension {dim} exceeds the {nvars} variables")));
    }
    let mut rng = rng::stream(seed, rng::STREAM_EMBED);
    let mut eqs: Vec<Polynomial> = s.polys.iter().take(nvars).cloned().collect();
    for extra in s.polys.iter().skip(nvars) {
        for e in eqs.iter_mut() {
            *e = e.add(&extra.scale(rng::generic_complex(&mut rng)));
        }
    }
    eqs.resize(nvars, Polynomial::zero(nvars));
    let total = nvars + dim;
    let mut polys = Vec::with_capacity(total);
    for e in &eqs {
        let mut p = e.extend_vars(dim);
        for j in 0..dim {
            let c = rng::generic_complex(&mut rng);
            p = p.add(&Polynomial::var(total, nvars + j).scale(c));
        }
        polys.push(p);
    }
    for _ in 0..dim {
        polys.push(hyperplane(&random_hyperplane(total, &mut rng)));
    }
    let mut names = s.varnames.clone();
    for j in 1..=dim {
        let name = format!("zz{j}");
        if names.contains(&name) {
            return Err(Error::InvalidInput(format!("variable name '{name}' is reserved for slack variables")));
        }
        names.push(name);
    }
    PolySystem::new(polys, names)
}

/// The hyperplanes of an embedded system (its last `dim` equations).
pub(crate) fn extract_slices(embedded: &PolySystem, dim: usize) -> Result<Vec<Hyperplane>> {
    let n = embedded.nvars();
    embedded.polys[embedded.len() - dim..]
        .iter()
        .map(|p| {
            let mut h = vec![StoredComplex::zero(); n + 1];
            for t in &p.terms {
                match t.exponents.iter().position(|&e| e > 0) {
                    None => h[n] = t.coeff,
                    Some(j) if t.degree() == 1 => h[j] = t.coeff,
                    Some(_) => return Err(Error::InvalidInput("slice equations must be linear".into())),
                }
            }
            Ok(h)
        })
        .collect()
}

fn slack_free(r: &SolutionRecord, nvars: usize) -> bool {
    r.coords[nvars..].iter().all(|z| z.abs_f64() <= SLACK_TOL)
}

/// Embeds `s` for dimension `dim` and solves the embedding; the witness
/// points are the solutions whose slack coordinates vanish.
pub fn witness_solve(s: &PolySystem, dim: usize, opts: &SolverOptions) -> Result<WitnessSet> {
    let nvars = s.nvars();
    let embedded = embed(nvars, dim, s, opts.seed)?;
    let report = solve_blackbox(&embedded, opts)?;
    let points = report.solutions.into_iter().filter(|r| slack_free(r, nvars)).collect();
    let slices = extract_slices(&embedded, dim)?;
    Ok(WitnessSet { ambient_dim: nvars, set_dim: dim, embedded, slices, points, seed: opts.seed })
}

/// Tracks every witness point from the current slices to `new_slices` with
/// a coefficient homotopy. Results are in witness point order.
pub fn move_slices(w: &WitnessSet, new_slices: &[Hyperplane], opts: &SolverOptions) -> Result<Vec<PathResult>> {
    move_between(w, &w.slices, new_slices, &w.points.iter().map(|p| p.coords.clone()).collect::<Vec<_>>(), opts)
}

/// Tracks `starts` (points on the `from` slices) to the `to` slices.
pub(crate) fn move_between(
    w: &WitnessSet,
    from: &[Hyperplane],
    to: &[Hyperplane],
    starts: &[Vec<StoredComplex>],
    opts: &SolverOptions,
) -> Result<Vec<PathResult>> {
    let start = w.with_slices(from)?;
    let target = w.with_slices(to)?;
    let h = make_homotopy(&target, &start, opts.seed, 1)?;
    let cfg = opts.tracker_config();
    cfg.validate()?;
    Ok(track_points(&h, starts, opts.precision, &cfg, opts.tasks))
}

fn close(a: &[StoredComplex], b: &[StoredComplex]) -> bool {
    let scale = a.iter().map(|c| c.abs_f64()).fold(1.0, f64::max);
    a.iter().zip(b).all(|(x, y)| (*x - *y).abs_f64() <= MATCH_TOL * scale)
}

/// Whether `point` (in the original variables) lies on the set: the slices
/// are moved to generic hyperplanes through the point, and the point is a
/// member when one of the tracked witness points lands on it.
pub fn membership_test(w: &WitnessSet, point: &[StoredComplex], opts: &SolverOptions) -> Result<bool> {
    if point.len() != w.ambient_dim {
        return Err(Error::DimensionMismatch { expected: w.ambient_dim, got: point.len() });
    }
    if w.points.is_empty() {
        return Ok(false);
    }
    let n = w.embedded.nvars();
    let mut rng = rng::stream(opts.seed, rng::STREAM_SLICES);
    let slices: Vec<Hyperplane> = (0..w.set_dim)
        .map(|_| {
            let mut h = random_hyperplane(n, &mut rng);
            let mut c = StoredComplex::zero();
            for (a, x) in h.iter().zip(point) {
                c -= *a * *x;
            }
            h[n] = c;
            h
        })
        .collect();
    let paths = move_slices(w, &slices, opts)?;
    let landed: Vec<&PathResult> = paths.iter().filter(|p| p.status == PathStatus::Converged).collect();
    if landed.is_empty() {
        return Err(Error::LoopFailure("no witness point could be moved to the test slices".into()));
    }
    Ok(landed.iter().any(|p| close(point, w.original_coords(&p.endpoint))))
}

/// Index of the witness point within [`MATCH_TOL`] of `x`, if any.
pub(crate) fn match_point(w: &WitnessSet, x: &[StoredComplex]) -> Option<usize> {
    w.points.iter().position(|p| close(&p.coords, x))
}

/// A point with the given real coordinates.
pub fn real_point(x: &[f64]) -> Vec<StoredComplex> {
    x.iter().map(|&v| Complex::from_f64(v, 0.0)).collect()
}
