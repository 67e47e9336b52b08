//! Monomial maps solving binomial systems.
//!
//! A binomial `c1 x^a + c2 x^b` vanishes on the torus exactly when
//! `x^(a-b) = -c2/c1`. With `U` unimodular and `A U = H` in column echelon
//! form, the substitution `x = y^(U^T)` turns the system into `y^H = r`:
//! the first `rank` coordinates of `y` are fixed by triangular root
//! extraction and the rest are free parameters.

mod hermite;
mod text;

use crate::error::{Error, Result};
use crate::numerics::{Complex, QuadDouble, StoredComplex};
use crate::polynomial::PolySystem;

use hermite::column_echelon;
pub use text::{format_map, parse_map};

/// `x_j = coeffs[j] * t_1^exponents[j][0] * ... * t_dim^exponents[j][dim-1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMap {
    pub varnames: Vec<String>,
    pub dim: usize,
    pub coeffs: Vec<StoredComplex>,
    pub exponents: Vec<Vec<i64>>,
}

impl MonomialMap {
    /// Largest total parameter degree over the variables.
    pub fn degree(&self) -> i64 {
        self.exponents.iter().map(|e| e.iter().sum::<i64>()).max().unwrap_or(0)
    }

    /// True when some exponent is negative, so the map is only defined for
    /// nonzero parameters.
    pub fn needs_nonzero_parameters(&self) -> bool {
        self.exponents.iter().flatten().any(|&e| e < 0)
    }

    /// The point at parameter values `t`.
    pub fn eval(&self, t: &[StoredComplex]) -> Result<Vec<StoredComplex>> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: t.len() });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&self.exponents)
            .map(|(c, e)| e.iter().zip(t).fold(*c, |acc, (&k, tk)| acc * tk.powi(k as i32)))
            .collect())
    }
}

fn kth_roots(c: StoredComplex, k: i64) -> Vec<StoredComplex> {
    let c64 = c.to_f64();
    let modulus = c64.abs().powf(1.0 / k as f64);
    let base = c64.arg() / k as f64;
    (0..k)
        .map(|j| {
            let mut r = StoredComplex::from_polar_f64(modulus, base + std::f64::consts::TAU * j as f64 / k as f64);
            // Newton at full precision; exact roots such as 1 stay exact.
            for _ in 0..3 {
                let p = r.powi(k as i32 - 1);
                let f = p * r - c;
                if f.abs_f64() == 0.0 {
                    break;
                }
                r -= f / p.scale_f64(k as f64);
            }
            r
        })
        .collect()
}

fn monomial(y: &[StoredComplex], e: &[i64]) -> StoredComplex {
    y.iter().zip(e).fold(StoredComplex::one(), |acc, (v, &k)| acc * v.powi(k as i32))
}

/// Exponent differences and right-hand sides `-c2/c1` of a binomial system.
fn binomial_data(s: &PolySystem) -> Result<(Vec<Vec<i64>>, Vec<StoredComplex>)> {
    let mut rows = Vec::with_capacity(s.len());
    let mut rhs = Vec::with_capacity(s.len());
    for (i, p) in s.polys.iter().enumerate() {
        if p.terms.len() != 2 {
            return Err(Error::NotBinomial { equation: i, terms: p.terms.len() });
        }
        let (a, b) = (&p.terms[0], &p.terms[1]);
        rows.push(a.exponents.iter().zip(&b.exponents).map(|(&x, &y)| x as i64 - y as i64).collect());
        rhs.push(-(b.coeff / a.coeff));
    }
    Ok((rows, rhs))
}

/// Relative tolerance for redundant equations to be consistent.
const CONSISTENCY_TOL: f64 = 1e-8;

/// Maps covering the solutions with all coordinates nonzero.
fn torus_maps(rows: &[Vec<i64>], rhs: &[StoredComplex], varnames: &[String]) -> Result<Vec<MonomialMap>> {
    let n = varnames.len();
    let ech = column_echelon(rows, n)?;
    let rank = ech.pivots.len();
    let kernel = hermite::normalize_kernel(&ech.u, rank);
    // Enumerate the choices of roots for y_0..y_{rank-1}.
    let mut branches: Vec<Vec<StoredComplex>> = vec![Vec::new()];
    for (k, &(row, col)) in ech.pivots.iter().enumerate() {
        debug_assert_eq!(col, k);
        let h = ech.h[row][k];
        let mut next = Vec::new();
        for y in &branches {
            let target = rhs[row] / monomial(y, &ech.h[row][..k]);
            for root in kth_roots(target, h) {
                let mut z = y.clone();
                z.push(root);
                next.push(z);
            }
        }
        branches = next;
    }
    let pivot_rows: Vec<usize> = ech.pivots.iter().map(|p| p.0).collect();
    let consistent = |y: &[StoredComplex]| {
        (0..rows.len()).filter(|i| !pivot_rows.contains(i)).all(|i| {
            let v = monomial(y, &ech.h[i][..rank]);
            (v - rhs[i]).abs_f64() <= CONSISTENCY_TOL * rhs[i].abs_f64().max(1.0)
        })
    };
    Ok(branches
        .into_iter()
        .filter(|y| consistent(y))
        .map(|y| MonomialMap {
            varnames: varnames.to_vec(),
            dim: n - rank,
            coeffs: (0..n).map(|j| monomial(&y, &ech.u[j][..rank])).collect(),
            exponents: kernel.clone(),
        })
        .collect())
}

/// Solves a system of binomials by monomial maps.
///
/// With `puretopdim` only the maps of the solutions with all coordinates
/// nonzero are returned; these all have the top dimension `n - rank`.
/// Otherwise every choice of variables set to zero that satisfies the
/// system is also explored, giving maps with zero coordinates; no attempt
/// is made to drop maps contained in the closure of others.
pub fn solve_binomials(nvars: usize, s: &PolySystem, puretopdim: bool) -> Result<Vec<MonomialMap>> {
    if s.nvars() != nvars {
        return Err(Error::DimensionMismatch { expected: nvars, got: s.nvars() });
    }
    let (rows, rhs) = binomial_data(s)?;
    let mut maps = torus_maps(&rows, &rhs, &s.varnames)?;
    if puretopdim {
        return Ok(maps);
    }
    if nvars > 20 {
        return Err(Error::Domain("zero-coordinate maps are enumerated for at most 20 variables".into()));
    }
    for mask in 1u32..(1u32 << nvars) {
        let zero = |j: usize| mask & (1 << j) != 0;
        let mut keep = Vec::new();
        let mut feasible = true;
        for p in &s.polys {
            let dead: Vec<bool> = p.terms.iter().map(|t| t.exponents.iter().enumerate().any(|(j, &e)| e > 0 && zero(j))).collect();
            match (dead[0], dead[1]) {
                (true, true) => {}
                (false, false) => keep.push(p),
                _ => feasible = false,
            }
        }
        if !feasible {
            continue;
        }
        let free: Vec<usize> = (0..nvars).filter(|&j| !zero(j)).collect();
        let sub_rows: Vec<Vec<i64>> = keep
            .iter()
            .map(|p| free.iter().map(|&j| p.terms[0].exponents[j] as i64 - p.terms[1].exponents[j] as i64).collect())
            .collect();
        let sub_rhs: Vec<StoredComplex> = keep.iter().map(|p| -(p.terms[1].coeff / p.terms[0].coeff)).collect();
        let sub_names: Vec<String> = free.iter().map(|&j| s.varnames[j].clone()).collect();
        for m in torus_maps(&sub_rows, &sub_rhs, &sub_names)? {
            let mut coeffs = vec![StoredComplex::zero(); nvars];
            let mut exponents = vec![vec![0; m.dim]; nvars];
            for (k, &j) in free.iter().enumerate() {
                coeffs[j] = m.coeffs[k];
                exponents[j] = m.exponents[k].clone();
            }
            maps.push(MonomialMap { varnames: s.varnames.clone(), dim: m.dim, coeffs, exponents });
        }
    }
    maps.sort_by(|a, b| b.dim.cmp(&a.dim));
    Ok(maps)
}

/// Python `repr` of a float: shortest round-trip digits, positional for
/// decimal exponents in `[-4, 16)`, otherwise scientific.
pub(crate) fn py_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf".into() } else { "inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if (-4..16).contains(&exp) {
        if exp < 0 {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        } else if digits.len() as i32 <= exp + 1 {
            format!("{digits}{}", "0".repeat((exp + 1) as usize - digits.len()))
        } else {
            let (a, b) = digits.split_at(exp as usize + 1);
            format!("{a}.{b}")
        }
    } else {
        let m = if digits.len() > 1 { format!("{}.{}", &digits[..1], &digits[1..]) } else { digits };
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    };
    format!("{sign}{body}")
}

/// Python `repr` of a complex number, e.g. `(1+0j)`, `(0.5-2j)`, `1j`.
pub(crate) fn py_complex(c: Complex<QuadDouble>) -> String {
    // The leading limb keeps the sign of zero.
    let f = |q: QuadDouble| if q.0[0] == 0.0 { q.0[0] } else { q.to_f64() };
    let (re, im) = (f(c.re), f(c.im));
    let imag = py_float(im);
    if re == 0.0 && !re.is_sign_negative() {
        return format!("{imag}j");
    }
    let imag = if imag.starts_with('-') || im.is_nan() { imag } else { format!("+{imag}") };
    format!("({}{imag}j)", py_float(re))
}
