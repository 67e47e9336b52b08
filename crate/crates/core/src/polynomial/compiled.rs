use super::PolySystem;
use crate::numerics::{Complex, Matrix, Real};

#[derive(Clone, Debug)]
struct CompiledTerm<R> {
    coeff: Complex<R>,
    start: usize,
    len: usize,
}

/// A system with coefficients rounded to working precision and terms laid
/// out as flat `(variable, exponent)` lists, for repeated evaluation of
/// values and Jacobians.
#[derive(Clone, Debug)]
pub struct CompiledSystem<R> {
    nvars: usize,
    terms: Vec<CompiledTerm<R>>,
    factors: Vec<(usize, u32)>,
    poly_ranges: Vec<(usize, usize)>,
    power_offsets: Vec<usize>,
    max_exp: Vec<u32>,
    max_factors: usize,
}

/// Per-caller scratch space for [`CompiledSystem::eval`].
#[derive(Clone, Debug)]
pub struct Workspace<R> {
    powers: Vec<Complex<R>>,
    prefix: Vec<Complex<R>>,
}

impl<R: Real> CompiledSystem<R> {
    pub fn new(s: &PolySystem) -> Self {
        let nvars = s.nvars();
        let mut max_exp = vec![0u32; nvars];
        let mut terms = Vec::new();
        let mut factors = Vec::new();
        let mut poly_ranges = Vec::with_capacity(s.len());
        let mut max_factors = 0;
        for p in &s.polys {
            let first = terms.len();
            for t in &p.terms {
                let start = factors.len();
                for (v, &e) in t.exponents.iter().enumerate() {
                    if e > 0 {
                        factors.push((v, e));
                        max_exp[v] = max_exp[v].max(e);
                    }
                }
                let len = factors.len() - start;
                max_factors = max_factors.max(len);
                terms.push(CompiledTerm { coeff: Complex::from_qd(t.coeff), start, len });
            }
            poly_ranges.push((first, terms.len()));
        }
        let mut power_offsets = Vec::with_capacity(nvars + 1);
        let mut off = 0;
        for &m in &max_exp {
            power_offsets.push(off);
            off += m as usize + 1;
        }
        power_offsets.push(off);
        Self { nvars, terms, factors, poly_ranges, power_offsets, max_exp, max_factors }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn neqs(&self) -> usize {
        self.poly_ranges.len()
    }

    pub fn workspace(&self) -> Workspace<R> {
        Workspace {
            powers: vec![Complex::zero(); *self.power_offsets.last().unwrap_or(&0)],
            prefix: vec![Complex::zero(); self.max_factors + 1],
        }
    }

    /// Writes `p_i(x)` into `values` and, when requested, the Jacobian into
    /// `jac` (overwritten).
    pub fn eval(
        &self,
        x: &[Complex<R>],
        ws: &mut Workspace<R>,
        values: &mut [Complex<R>],
        mut jac: Option<&mut Matrix<R>>,
    ) {
        debug_assert_eq!(x.len(), self.nvars);
        for v in 0..self.nvars {
            let off = self.power_offsets[v];
            let mut p = Complex::one();
            ws.powers[off] = p;
            for e in 1..=self.max_exp[v] as usize {
                p *= x[v];
                ws.powers[off + e] = p;
            }
        }
        if let Some(j) = jac.as_deref_mut() {
            j.data.iter_mut().for_each(|c| *c = Complex::zero());
        }
        for (i, &(lo, hi)) in self.poly_ranges.iter().enumerate() {
            let mut acc = Complex::zero();
            for term in &self.terms[lo..hi] {
                let fs = &self.factors[term.start..term.start + term.len];
                ws.prefix[0] = term.coeff;
                for (k, &(v, e)) in fs.iter().enumerate() {
                    ws.prefix[k + 1] = ws.prefix[k] * ws.powers[self.power_offsets[v] + e as usize];
                }
                acc += ws.prefix[term.len];
                if let Some(j) = jac.as_deref_mut() {
                    // Walk back with the running suffix product.
                    let mut suffix = Complex::<R>::one();
                    for (k, &(v, e)) in fs.iter().enumerate().rev() {
                        let base = self.power_offsets[v];
                        let d = ws.powers[base + e as usize - 1].scale_f64(e as f64);
                        j[(i, v)] += ws.prefix[k] * d * suffix;
                        suffix *= ws.powers[base + e as usize];
                    }
                }
            }
            values[i] = acc;
        }
    }
}
