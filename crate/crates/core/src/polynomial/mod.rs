//! Sparse multivariate polynomials with complex coefficients, the
//! semicolon-terminated text format, evaluation and Jacobians.

mod compiled;
mod format;
mod parse;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::numerics::{Complex, Matrix, QuadDouble, Real, StoredComplex};

pub use compiled::{CompiledSystem, Workspace};
pub use format::{format_coefficient, format_polynomial, format_system};
pub use parse::parse_system;

/// One monomial `coeff * x_0^e_0 * ... * x_{n-1}^e_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: StoredComplex,
    pub exponents: Vec<u32>,
}

impl Term {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// A polynomial as a list of terms with distinct exponent vectors and
/// nonzero coefficients, in insertion order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub nvars: usize,
    pub terms: Vec<Term>,
}

fn is_zero(c: &StoredComplex) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: StoredComplex) -> Self {
        Self::from_terms(nvars, vec![(c, vec![0; nvars])])
    }

    /// The variable `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::from_terms(nvars, vec![(StoredComplex::one(), e)])
    }

    /// Collects terms, merging equal exponent vectors and dropping zeros.
    pub fn from_terms(nvars: usize, terms: Vec<(StoredComplex, Vec<u32>)>) -> Self {
        let mut acc: IndexMap<Vec<u32>, StoredComplex> = IndexMap::new();
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            accumulate(&mut acc, e, c);
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: IndexMap<Vec<u32>, StoredComplex>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !is_zero(c))
            .map(|(exponents, coeff)| Term { coeff, exponents })
            .collect();
        Self { nvars, terms }
    }

    fn to_map(&self) -> IndexMap<Vec<u32>, StoredComplex> {
        self.terms.iter().map(|t| (t.exponents.clone(), t.coeff)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Term::degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut acc = self.to_map();
        for t in &other.terms {
            accumulate(&mut acc, t.exponents.clone(), t.coeff);
        }
        Self::from_map(self.nvars, acc)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-StoredComplex::one()))
    }

    pub fn scale(&self, c: StoredComplex) -> Polynomial {
        let terms = self.terms.iter().map(|t| (t.coeff * c, t.exponents.clone())).collect();
        Self::from_terms(self.nvars, terms)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut acc = IndexMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let e = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
                accumulate(&mut acc, e, a.coeff * b.coeff);
            }
        }
        Self::from_map(self.nvars, acc)
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.nvars, StoredComplex::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Same terms over `nvars + extra` variables (new variables appended).
    pub fn extend_vars(&self, extra: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut e = t.exponents.clone();
                e.resize(self.nvars + extra, 0);
                Term { coeff: t.coeff, exponents: e }
            })
            .collect();
        Polynomial { nvars: self.nvars + extra, terms }
    }

    /// Value at `x`, with coefficients rounded to the precision of `x`.
    pub fn eval<R: Real>(&self, x: &[Complex<R>]) -> Complex<R> {
        let mut acc = Complex::zero();
        for t in &self.terms {
            let mut v = Complex::<R>::from_qd(t.coeff);
            for (xi, &e) in x.iter().zip(&t.exponents) {
                if e > 0 {
                    v *= xi.powi(e as i32);
                }
            }
            acc += v;
        }
        acc
    }
}

pub(crate) fn accumulate(acc: &mut IndexMap<Vec<u32>, StoredComplex>, e: Vec<u32>, c: StoredComplex) {
    match acc.get_mut(&e) {
        Some(slot) => {
            *slot += c;
            if is_zero(slot) {
                acc.shift_remove(&e);
            }
        }
        None => {
            if !is_zero(&c) {
                acc.insert(e, c);
            }
        }
    }
}

/// A list of polynomials over a shared, ordered variable table.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    pub polys: Vec<Polynomial>,
    pub varnames: Vec<String>,
}

impl PolySystem {
    pub fn new(polys: Vec<Polynomial>, varnames: Vec<String>) -> Result<Self> {
        for p in &polys {
            if p.nvars != varnames.len() {
                return Err(Error::DimensionMismatch { expected: varnames.len(), got: p.nvars });
            }
        }
        for (i, name) in varnames.iter().enumerate() {
            if varnames[..i].contains(name) {
                return Err(Error::InvalidInput(format!("duplicate variable name '{name}'")));
            }
        }
        Ok(Self { polys, varnames })
    }

    pub fn nvars(&self) -> usize {
        self.varnames.len()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.polys.len() == self.nvars()
    }

    pub fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { equations: self.len(), variables: self.nvars() })
        }
    }

    /// Total degree of every polynomial.
    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(Polynomial::degree).collect()
    }

    /// Product of the degrees: the number of paths of a total-degree
    /// homotopy.
    pub fn bezout_number(&self) -> u128 {
        self.degrees().iter().map(|&d| d as u128).product()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), got: len });
        }
        Ok(())
    }

    /// Values of all polynomials at `x`, computed at the precision of `x`.
    pub fn evaluate<R: Real>(&self, x: &[Complex<R>]) -> Result<Vec<Complex<R>>> {
        self.check_len(x.len())?;
        let compiled = CompiledSystem::<R>::new(self);
        let mut ws = compiled.workspace();
        let mut out = vec![Complex::zero(); self.len()];
        compiled.eval(x, &mut ws, &mut out, None);
        Ok(out)
    }

    /// Matrix of partial derivatives `d p_i / d x_j` at `x`.
    pub fn jacobian<R: Real>(&self, x: &[Complex<R>]) -> Result<Matrix<R>> {
        self.check_len(x.len())?;
        let compiled = CompiledSystem::<R>::new(self);
        let mut ws = compiled.workspace();
        let mut out = vec![Complex::zero(); self.len()];
        let mut jac = Matrix::zeros(self.len(), self.nvars());
        compiled.eval(x, &mut ws, &mut out, Some(&mut jac));
        Ok(jac)
    }

    /// First equation whose set of exponent vectors differs from the one in
    /// `other`; `None` when the supports agree.
    pub fn support_mismatch(&self, other: &PolySystem) -> Option<usize> {
        if self.len() != other.len() || self.nvars() != other.nvars() {
            return Some(0);
        }
        for (i, (a, b)) in self.polys.iter().zip(&other.polys).enumerate() {
            let mut ea: Vec<&Vec<u32>> = a.terms.iter().map(|t| &t.exponents).collect();
            let mut eb: Vec<&Vec<u32>> = b.terms.iter().map(|t| &t.exponents).collect();
            ea.sort();
            eb.sort();
            if ea != eb {
                return Some(i);
            }
        }
        None
    }
}

/// Complex coefficient from a double pair.
pub fn coeff(re: f64, im: f64) -> StoredComplex {
    Complex::new(QuadDouble::from_f64(re), QuadDouble::from_f64(im))
}
