//! Artificial-parameter homotopies `H(x,t) = gamma (1-t)^k G(x) + t^k F(x)`
//! with a total-degree start system, and coefficient homotopies between two
//! systems with the same monomial supports.

use crate::error::{Error, Result};
use crate::numerics::{Complex, Matrix, Real, StoredComplex};
use crate::polynomial::{CompiledSystem, PolySystem, Polynomial, Workspace};
use crate::rng;

/// Roots of the start system `x_i^{d_i} = c_i`, enumerated lazily: path
/// `index` takes root `index_i` of variable `i` in mixed radix, with the
/// first variable varying fastest.
#[derive(Clone, Debug)]
pub struct StartSolutions {
    pub degrees: Vec<u32>,
    roots: Vec<Vec<StoredComplex>>,
}

impl StartSolutions {
    /// Number of start points, the product of the degrees.
    pub fn count(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).product()
    }

    pub fn point<R: Real>(&self, index: usize) -> Vec<Complex<R>> {
        let mut rest = index;
        self.roots
            .iter()
            .map(|r| {
                let k = rest % r.len();
                rest /= r.len();
                Complex::from_qd(r[k])
            })
            .collect()
    }

    pub fn iter<R: Real>(&self) -> impl Iterator<Item = Vec<Complex<R>>> + '_ {
        (0..self.count()).map(|i| self.point(i))
    }
}

/// All `d`-th roots of `c`, refined by Newton's method at quad-double.
fn roots_of(c: StoredComplex, d: u32) -> Vec<StoredComplex> {
    let c64 = c.to_f64();
    let modulus = c64.abs().powf(1.0 / d as f64);
    let base = c64.arg() / d as f64;
    (0..d)
        .map(|k| {
            let angle = base + std::f64::consts::TAU * k as f64 / d as f64;
            let mut r = StoredComplex::from_polar_f64(modulus, angle);
            for _ in 0..3 {
                let p = r.powi(d as i32 - 1);
                let f = p * r - c;
                let df = p.scale_f64(d as f64);
                r -= f / df;
            }
            r
        })
        .collect()
}

/// Start system `x_i^{d_i} - c_i` with `d_i` the degree of equation `i` and
/// `c_i` random on the unit circle.
pub fn total_degree_start(target: &PolySystem, seed: u64) -> Result<(PolySystem, StartSolutions)> {
    target.check_square()?;
    let degrees = target.degrees();
    if let Some(index) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::ZeroDegreePolynomial { index });
    }
    let n = target.nvars();
    let mut stream = rng::stream(seed, rng::STREAM_START);
    let mut polys = Vec::with_capacity(n);
    let mut roots = Vec::with_capacity(n);
    for (i, &d) in degrees.iter().enumerate() {
        let c = rng::unit_complex(&mut stream);
        let mut e = vec![0; n];
        e[i] = d;
        polys.push(Polynomial::from_terms(n, vec![(StoredComplex::one(), e), (-c, vec![0; n])]));
        roots.push(roots_of(c, d));
    }
    let start = PolySystem::new(polys, target.varnames.clone())?;
    Ok((start, StartSolutions { degrees, roots }))
}

/// `H(x,t) = gamma (1-t)^k G(x) + t^k F(x)`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub target: PolySystem,
    pub start: PolySystem,
    pub gamma: StoredComplex,
    pub tpower: u32,
}

fn check_shapes(target: &PolySystem, start: &PolySystem) -> Result<()> {
    if target.len() != start.len() || target.nvars() != start.nvars() {
        return Err(Error::ShapeMismatch(format!(
            "target has {}x{}, start has {}x{}",
            target.len(),
            target.nvars(),
            start.len(),
            start.nvars()
        )));
    }
    Ok(())
}

/// Gamma-trick homotopy with `gamma` drawn from `seed`.
pub fn make_homotopy(target: &PolySystem, start: &PolySystem, seed: u64, tpower: u32) -> Result<Homotopy> {
    check_shapes(target, start)?;
    if tpower == 0 {
        return Err(Error::Domain("tpower must be at least 1".into()));
    }
    let gamma = rng::unit_complex(&mut rng::stream(seed, rng::STREAM_GAMMA));
    Ok(Homotopy { target: target.clone(), start: start.clone(), gamma, tpower })
}

/// Linear interpolation of coefficients from `from` (t=0) to `to` (t=1),
/// with the gamma factor on the `from` side.
pub fn coefficient_homotopy(from: &PolySystem, to: &PolySystem, seed: u64) -> Result<Homotopy> {
    check_shapes(to, from)?;
    if let Some(equation) = from.support_mismatch(to) {
        return Err(Error::SupportMismatch { equation });
    }
    make_homotopy(to, from, seed, 1)
}

impl Homotopy {
    pub fn nvars(&self) -> usize {
        self.target.nvars()
    }

    pub fn compile<R: Real>(&self) -> CompiledHomotopy<R> {
        CompiledHomotopy {
            f: CompiledSystem::new(&self.target),
            g: CompiledSystem::new(&self.start),
            gamma: Complex::from_qd(self.gamma),
            k: self.tpower,
        }
    }
}

/// A homotopy the tracker can follow. Implementations evaluate `H`, its
/// Jacobian in `x` and its derivative in `t` at `(x, t)`, where `s = 1 - t`
/// is passed separately so that points near `t = 1` keep full relative
/// accuracy.
pub trait PathSystem<R: Real>: Sync {
    type Scratch: Send;

    fn dim(&self) -> usize;
    fn scratch(&self) -> Self::Scratch;
    #[allow(clippy::too_many_arguments)]
    fn eval(
        &self,
        x: &[Complex<R>],
        t: R,
        s: R,
        scratch: &mut Self::Scratch,
        h: &mut [Complex<R>],
        jac: Option<&mut Matrix<R>>,
        dhdt: Option<&mut [Complex<R>]>,
    );
}

#[derive(Clone, Debug)]
pub struct CompiledHomotopy<R> {
    f: CompiledSystem<R>,
    g: CompiledSystem<R>,
    gamma: Complex<R>,
    k: u32,
}

pub struct HomotopyScratch<R> {
    fws: Workspace<R>,
    gws: Workspace<R>,
    fv: Vec<Complex<R>>,
    gv: Vec<Complex<R>>,
    gj: Matrix<R>,
}

impl<R: Real> PathSystem<R> for CompiledHomotopy<R> {
    type Scratch = HomotopyScratch<R>;

    fn dim(&self) -> usize {
        self.f.nvars()
    }

    fn scratch(&self) -> HomotopyScratch<R> {
        let n = self.f.neqs();
        HomotopyScratch {
            fws: self.f.workspace(),
            gws: self.g.workspace(),
            fv: vec![Complex::zero(); n],
            gv: vec![Complex::zero(); n],
            gj: Matrix::zeros(n, self.f.nvars()),
        }
    }

    fn eval(
        &self,
        x: &[Complex<R>],
        t: R,
        s: R,
        ws: &mut HomotopyScratch<R>,
        h: &mut [Complex<R>],
        mut jac: Option<&mut Matrix<R>>,
        dhdt: Option<&mut [Complex<R>]>,
    ) {
        let k = self.k as i32;
        let tk = t.powi(k);
        let sk = s.powi(k);
        let a = self.gamma.scale(sk);
        let skip_g = s.to_f64() == 0.0 && dhdt.is_none();
        self.f.eval(x, &mut ws.fws, &mut ws.fv, jac.as_deref_mut());
        if !skip_g {
            let gj = if jac.is_some() { Some(&mut ws.gj) } else { None };
            self.g.eval(x, &mut ws.gws, &mut ws.gv, gj);
        }
        for i in 0..h.len() {
            h[i] = ws.fv[i].scale(tk);
            if !skip_g {
                h[i] += a * ws.gv[i];
            }
        }
        if let Some(j) = jac {
            for (idx, entry) in j.data.iter_mut().enumerate() {
                let mut v = entry.scale(tk);
                if !skip_g {
                    v += a * ws.gj.data[idx];
                }
                *entry = v;
            }
        }
        if let Some(d) = dhdt {
            let kf = self.k as f64;
            let df = t.powi(k - 1).mul_f64(kf);
            let dg = self.gamma.scale(s.powi(k - 1).mul_f64(-kf));
            for i in 0..d.len() {
                d[i] = ws.fv[i].scale(df) + dg * ws.gv[i];
            }
        }
    }
}

/// `H`, `dH/dx` and `dH/dt` at `(x, t)`.
pub fn eval_homotopy<R: Real>(
    h: &Homotopy,
    x: &[Complex<R>],
    t: R,
) -> Result<(Vec<Complex<R>>, Matrix<R>, Vec<Complex<R>>)> {
    if x.len() != h.nvars() {
        return Err(Error::DimensionMismatch { expected: h.nvars(), got: x.len() });
    }
    let c = h.compile::<R>();
    let mut ws = c.scratch();
    let n = h.target.len();
    let mut v = vec![Complex::zero(); n];
    let mut j = Matrix::zeros(n, h.nvars());
    let mut d = vec![Complex::zero(); n];
    c.eval(x, t, R::one() - t, &mut ws, &mut v, Some(&mut j), Some(&mut d));
    Ok((v, j, d))
}
