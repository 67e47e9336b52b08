//! Complex arithmetic at double, double-double and quad-double precision,
//! and the dense linear algebra used by Newton's method.

mod complex;
pub mod dd;
pub mod decimal;
mod linalg;
pub mod qd;

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use complex::Complex;
pub use dd::DoubleDouble;
pub use linalg::{lu_factor, lu_solve, max_norm, LuFactors, Matrix};
pub use qd::QuadDouble;

/// Working precision of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Precision {
    #[serde(rename = "d")]
    D,
    #[serde(rename = "dd")]
    DD,
    #[serde(rename = "qd")]
    QD,
}

impl Precision {
    pub fn limbs(self) -> usize {
        match self {
            Precision::D => 1,
            Precision::DD => 2,
            Precision::QD => 4,
        }
    }

    /// Unit roundoff of the precision level.
    pub fn epsilon(self) -> f64 {
        match self {
            Precision::D => f64::EPSILON,
            Precision::DD => 2f64.powi(-104),
            Precision::QD => 2f64.powi(-208),
        }
    }

    pub fn decimal_digits(self) -> usize {
        match self {
            Precision::D => 16,
            Precision::DD => 32,
            Precision::QD => 64,
        }
    }

    pub fn flag(self) -> &'static str {
        match self {
            Precision::D => "d",
            Precision::DD => "dd",
            Precision::QD => "qd",
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag())
    }
}

impl FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d" => Ok(Precision::D),
            "dd" => Ok(Precision::DD),
            "qd" => Ok(Precision::QD),
            other => Err(format!("unknown precision '{other}' (expected d, dd or qd)")),
        }
    }
}

/// A real scalar at one of the supported precision levels.
pub trait Real:
    Copy
    + Default
    + Send
    + Sync
    + fmt::Debug
    + PartialOrd
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    const PRECISION: Precision;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn from_qd(x: QuadDouble) -> Self;
    fn to_qd(self) -> QuadDouble;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn mul_f64(self, b: f64) -> Self;
    fn is_finite(self) -> bool;

    fn epsilon() -> f64 {
        Self::PRECISION.epsilon()
    }

    /// Integer power by repeated squaring.
    fn powi(self, n: i32) -> Self {
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::D;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn from_qd(x: QuadDouble) -> Self {
        x.0[0]
    }
    #[inline]
    fn to_qd(self) -> QuadDouble {
        QuadDouble::from_f64(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        self * b
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Real for DoubleDouble {
    const PRECISION: Precision = Precision::DD;

    #[inline]
    fn zero() -> Self {
        DoubleDouble::ZERO
    }
    #[inline]
    fn one() -> Self {
        DoubleDouble::ONE
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    #[inline]
    fn from_qd(x: QuadDouble) -> Self {
        x.to_dd()
    }
    #[inline]
    fn to_qd(self) -> QuadDouble {
        QuadDouble::from_dd(self)
    }
    #[inline]
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        DoubleDouble::mul_f64(self, b)
    }
    #[inline]
    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }
    fn powi(self, n: i32) -> Self {
        DoubleDouble::powi(self, n)
    }
}

impl Real for QuadDouble {
    const PRECISION: Precision = Precision::QD;

    fn zero() -> Self {
        QuadDouble::ZERO
    }
    fn one() -> Self {
        QuadDouble::ONE
    }
    fn from_f64(x: f64) -> Self {
        QuadDouble::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        QuadDouble::to_f64(self)
    }
    fn from_qd(x: QuadDouble) -> Self {
        x
    }
    fn to_qd(self) -> QuadDouble {
        self
    }
    fn abs(self) -> Self {
        QuadDouble::abs(self)
    }
    fn sqrt(self) -> Self {
        QuadDouble::sqrt(self)
    }
    fn mul_f64(self, b: f64) -> Self {
        QuadDouble::mul_f64(self, b)
    }
    fn is_finite(self) -> bool {
        QuadDouble::is_finite(self)
    }
    fn powi(self, n: i32) -> Self {
        QuadDouble::powi(self, n)
    }
}

/// Precision-agnostic complex scalar; used for stored coefficients and
/// solution coordinates.
pub type StoredComplex = Complex<QuadDouble>;
