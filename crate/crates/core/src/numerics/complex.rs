use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::{QuadDouble, Real};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Complex<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Self {
        Self { re, im }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(R::zero(), R::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::new(R::one(), R::zero())
    }

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> Self {
        Self::new(R::from_f64(re), R::from_f64(im))
    }

    #[inline]
    pub fn from_real(re: R) -> Self {
        Self::new(re, R::zero())
    }

    /// Point on the unit circle at the given angle (double accuracy).
    pub fn from_polar_f64(modulus: f64, angle: f64) -> Self {
        Self::from_f64(modulus * angle.cos(), modulus * angle.sin())
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    #[inline]
    pub fn scale(self, s: R) -> Self {
        Self::new(self.re * s, self.im * s)
    }

    #[inline]
    pub fn scale_f64(self, s: f64) -> Self {
        Self::new(self.re.mul_f64(s), self.im.mul_f64(s))
    }

    #[inline]
    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    /// `|re| + |im|` at double precision; a cheap magnitude for pivoting.
    #[inline]
    pub fn l1_f64(self) -> f64 {
        self.re.to_f64().abs() + self.im.to_f64().abs()
    }

    /// Modulus at double precision, safe from under- and overflow.
    #[inline]
    pub fn abs_f64(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    /// Modulus at working precision with scaling against underflow.
    pub fn abs(self) -> R {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.to_f64() == 0.0 {
            return R::zero();
        }
        let ratio = small / big;
        big * (R::one() + ratio * ratio).sqrt()
    }

    pub fn recip(self) -> Self {
        let d = self.norm_sqr();
        Self::new(self.re / d, -self.im / d)
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    #[inline]
    pub fn to_f64(self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn to_qd(self) -> Complex<QuadDouble> {
        Complex::new(self.re.to_qd(), self.im.to_qd())
    }

    #[inline]
    pub fn from_qd(c: Complex<QuadDouble>) -> Self {
        Self::new(R::from_qd(c.re), R::from_qd(c.im))
    }

    /// Converts between precision levels through the quad-double form.
    #[inline]
    pub fn cast<S: Real>(self) -> Complex<S> {
        Complex::new(S::from_qd(self.re.to_qd()), S::from_qd(self.im.to_qd()))
    }
}

impl Complex<f64> {
    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        Self::new(self.re + b.re, self.im + b.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        Self::new(self.re - b.re, self.im - b.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        Self::new(self.re * b.re - self.im * b.im, self.re * b.im + self.im * b.re)
    }
}

impl<R: Real> Div for Complex<R> {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        // Smith's scaling keeps intermediate magnitudes moderate.
        if b.re.abs() >= b.im.abs() {
            let r = b.im / b.re;
            let d = b.re + b.im * r;
            Self::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = b.re / b.im;
            let d = b.re * r + b.im;
            Self::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<R: Real> AddAssign for Complex<R> {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl<R: Real> SubAssign for Complex<R> {
    #[inline]
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl<R: Real> MulAssign for Complex<R> {
    #[inline]
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}
