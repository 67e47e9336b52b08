//! Quad-double arithmetic. Values are four non-overlapping doubles, largest
//! first. Every operation gathers its partial terms (exact where it matters),
//! then renormalizes them back into four limbs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::dd::{assign_ops, two_prod, two_sum, DoubleDouble};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct QuadDouble(pub [f64; 4]);

/// Unit in the last place of a finite double (0 for 0).
#[inline]
pub fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() {
        return 0.0;
    }
    if a < f64::MIN_POSITIVE {
        return f64::from_bits(1);
    }
    let pow = f64::from_bits(a.to_bits() & 0x7ff0_0000_0000_0000);
    pow * f64::EPSILON
}

/// True when `|limbs[i+1]| <= ulp(limbs[i]) / 2` for every adjacent pair and
/// no nonzero limb follows a zero limb.
pub fn is_nonoverlapping(limbs: &[f64]) -> bool {
    limbs.windows(2).all(|w| {
        if w[0] == 0.0 {
            w[1] == 0.0
        } else {
            w[1].abs() <= ulp(w[0]) * 0.5
        }
    })
}

fn sort_by_magnitude(terms: &mut [f64]) {
    for i in 1..terms.len() {
        let mut j = i;
        while j > 0 && terms[j - 1].abs() < terms[j].abs() {
            terms.swap(j - 1, j);
            j -= 1;
        }
    }
}

/// Renormalizes an arbitrary list of doubles into four non-overlapping limbs
/// whose sum approximates the exact sum of `terms` to about 2^-212 relative.
pub(crate) fn renormalize(terms: &mut Vec<f64>) -> [f64; 4] {
    if terms.iter().any(|t| !t.is_finite()) {
        let s: f64 = terms.iter().sum();
        return [s, 0.0, 0.0, 0.0];
    }
    for _ in 0..6 {
        terms.retain(|&t| t != 0.0);
        if terms.is_empty() {
            return [0.0; 4];
        }
        sort_by_magnitude(terms);
        // Error-free bottom-up accumulation.
        let n = terms.len();
        let mut s = terms[n - 1];
        for i in (0..n - 1).rev() {
            let (hi, e) = two_sum(terms[i], s);
            terms[i + 1] = e;
            s = hi;
        }
        terms[0] = s;
        // Top-down extraction of the significant components.
        let mut out = Vec::with_capacity(n);
        let mut s = terms[0];
        for &t in &terms[1..] {
            let (hi, e) = two_sum(s, t);
            if e != 0.0 {
                out.push(hi);
                s = e;
            } else {
                s = hi;
            }
        }
        out.push(s);
        out.retain(|&t| t != 0.0);
        let settled = is_nonoverlapping(&out);
        *terms = out;
        if settled {
            break;
        }
    }
    let mut limbs = [0.0; 4];
    for (slot, &t) in limbs.iter_mut().zip(terms.iter()) {
        *slot = t;
    }
    if terms.len() > 4 {
        let tail: f64 = terms[4..].iter().rev().sum();
        limbs[3] += tail;
    }
    settle(&mut limbs);
    limbs
}

/// Pairwise two-sum passes until adjacent limbs satisfy the half-ulp bound.
fn settle(limbs: &mut [f64; 4]) {
    for _ in 0..8 {
        if is_nonoverlapping(limbs) {
            return;
        }
        for i in (0..3).rev() {
            let (s, e) = two_sum(limbs[i], limbs[i + 1]);
            limbs[i] = s;
            limbs[i + 1] = e;
        }
        for i in 0..3 {
            if limbs[i] == 0.0 && limbs[i + 1] != 0.0 {
                limbs.swap(i, i + 1);
            }
        }
    }
}

impl QuadDouble {
    pub const ZERO: Self = Self([0.0; 4]);
    pub const ONE: Self = Self([1.0, 0.0, 0.0, 0.0]);

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self([x, 0.0, 0.0, 0.0])
    }

    #[inline]
    pub const fn from_dd(x: DoubleDouble) -> Self {
        Self([x.hi, x.lo, 0.0, 0.0])
    }

    /// Normalizes arbitrary limbs.
    pub fn from_limbs(limbs: &[f64]) -> Self {
        let mut v = limbs.to_vec();
        Self(renormalize(&mut v))
    }

    #[inline]
    pub fn limbs(&self) -> [f64; 4] {
        self.0
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0[0] + (self.0[1] + (self.0[2] + self.0[3]))
    }

    pub fn to_dd(self) -> DoubleDouble {
        let lo = self.0[1] + (self.0[2] + self.0[3]);
        DoubleDouble::from_sum(self.0[0], lo)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn is_zero(self) -> bool {
        self.0[0] == 0.0
    }

    pub fn abs(self) -> Self {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let mut terms = Vec::with_capacity(8);
        for &a in &self.0 {
            let (p, e) = two_prod(a, b);
            terms.push(p);
            terms.push(e);
        }
        Self(renormalize(&mut terms))
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    /// Square root via Newton iteration on the reciprocal square root.
    pub fn sqrt(self) -> Self {
        if self.0[0] <= 0.0 {
            return if self.0[0] == 0.0 { Self::ZERO } else { Self::from_f64(f64::NAN) };
        }
        let half = self.mul_f64(0.5);
        let mut x = Self::from_f64(1.0 / self.0[0].sqrt());
        for _ in 0..3 {
            let corr = Self::from_f64(0.5) - half * x.sqr();
            x = x + x * corr;
        }
        self * x
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }
}

impl fmt::Debug for QuadDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QD({:e}, {:e}, {:e}, {:e})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for QuadDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::numerics::decimal::format_limbs(&self.0, 64))
    }
}

impl PartialOrd for QuadDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        for i in 0..4 {
            match self.0[i].partial_cmp(&other.0[i])? {
                Ordering::Equal => continue,
                ord => return Some(ord),
            }
        }
        Some(Ordering::Equal)
    }
}

impl Neg for QuadDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl Add for QuadDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let mut terms = Vec::with_capacity(8);
        terms.extend_from_slice(&self.0);
        terms.extend_from_slice(&b.0);
        Self(renormalize(&mut terms))
    }
}

impl Sub for QuadDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for QuadDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = &self.0;
        let b = &b.0;
        let mut terms = Vec::with_capacity(24);
        for i in 0..4 {
            for j in 0..4 - i {
                let (p, e) = two_prod(a[i], b[j]);
                terms.push(p);
                terms.push(e);
            }
        }
        // Order-4 products only contribute below the last limb.
        terms.push(a[1] * b[3] + a[2] * b[2] + a[3] * b[1]);
        Self(renormalize(&mut terms))
    }
}

impl Div for QuadDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let mut q = [0.0; 5];
        let mut r = self;
        for qi in q.iter_mut() {
            *qi = r.0[0] / b.0[0];
            r = r - b.mul_f64(*qi);
        }
        Self::from_limbs(&q)
    }
}

assign_ops!(QuadDouble);
