use super::{Complex, Real};

/// Dense row-major complex matrix.
#[derive(Clone, Debug)]
pub struct Matrix<R> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex<R>>,
}

impl<R: Real> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex<R>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn mul_vec(&self, x: &[Complex<R>]) -> Vec<Complex<R>> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Complex::zero();
                for j in 0..self.cols {
                    acc += self[(i, j)] * x[j];
                }
                acc
            })
            .collect()
    }

    /// Largest row sum of moduli (the infinity norm) at double precision.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].abs_f64()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest column sum of moduli (the 1-norm) at double precision.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs_f64()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = Complex<R>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        &self.data[i * self.cols + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        &mut self.data[i * self.cols + j]
    }
}

/// `PA = LU` with unit lower `L` stored below the diagonal.
#[derive(Clone, Debug)]
pub struct LuFactors<R> {
    lu: Matrix<R>,
    perm: Vec<usize>,
    norm_one: f64,
    /// Set when a pivot fell below `1e3 * eps * ||A||_inf`.
    pub singular: bool,
}

/// Gaussian elimination with partial pivoting.
pub fn lu_factor<R: Real>(a: &Matrix<R>) -> LuFactors<R> {
    assert_eq!(a.rows, a.cols, "LU needs a square matrix");
    let n = a.rows;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let threshold = 1e3 * R::epsilon() * a.norm_inf();
    let norm_one = a.norm_one();
    let mut singular = n > 0 && a.norm_inf() == 0.0;
    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].abs_f64();
        for i in k + 1..n {
            let v = lu[(i, k)].abs_f64();
            if v > best {
                best = v;
                p = i;
            }
        }
        if !(best > threshold) {
            singular = true;
            if best == 0.0 || !best.is_finite() {
                continue;
            }
        }
        if p != k {
            for j in 0..n {
                lu.data.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        let inv = lu[(k, k)].recip();
        for i in k + 1..n {
            let f = lu[(i, k)] * inv;
            lu[(i, k)] = f;
            if f.re.to_f64() == 0.0 && f.im.to_f64() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= f * u;
            }
        }
    }
    LuFactors { lu, perm, norm_one, singular }
}

impl<R: Real> LuFactors<R> {
    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.dim();
        let mut x: Vec<Complex<R>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A^H x = b` using `A^H = U^H L^H P`.
    pub fn solve_adjoint(&self, b: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.dim();
        let mut y = b.to_vec();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = acc / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = acc;
        }
        let mut x = vec![Complex::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }

    /// Estimate of the reciprocal 1-norm condition number (Hager/Higham).
    /// Returns 0 for singular factorizations.
    pub fn rcond(&self) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 1.0;
        }
        if self.singular || self.norm_one == 0.0 {
            return 0.0;
        }
        let mut x = vec![Complex::<R>::from_f64(1.0 / n as f64, 0.0); n];
        let mut estimate = 0.0f64;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x);
            let y_norm: f64 = y.iter().map(|v| v.abs_f64()).sum();
            if !y_norm.is_finite() {
                return 0.0;
            }
            if y_norm <= estimate {
                break;
            }
            estimate = y_norm;
            let xi: Vec<Complex<R>> = y
                .iter()
                .map(|v| {
                    let m = v.abs_f64();
                    if m == 0.0 {
                        Complex::one()
                    } else {
                        v.scale_f64(1.0 / m)
                    }
                })
                .collect();
            let z = self.solve_adjoint(&xi);
            let (j, zmax) = z
                .iter()
                .map(|v| v.abs_f64())
                .enumerate()
                .fold((0, -1.0), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
            let zx: f64 = z
                .iter()
                .zip(&x)
                .map(|(a, b)| (a.conj() * *b).re.to_f64())
                .sum();
            if zmax <= zx || j == last_j {
                break;
            }
            last_j = j;
            x = vec![Complex::zero(); n];
            x[j] = Complex::one();
        }
        // Alternative lower bound from a sign-alternating vector.
        let alt: Vec<Complex<R>> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                Complex::from_f64(s * (1.0 + i as f64 / (n as f64 - 1.0).max(1.0)), 0.0)
            })
            .collect();
        let alt_norm: f64 = self.solve(&alt).iter().map(|v| v.abs_f64()).sum();
        let alt_est = 2.0 * alt_norm / (3.0 * n as f64);
        estimate = estimate.max(alt_est);
        let inv = 1.0 / (estimate * self.norm_one);
        if inv.is_finite() {
            inv.min(1.0)
        } else {
            0.0
        }
    }
}

/// Factors and solves in one call; `None` when the matrix is singular.
pub fn lu_solve<R: Real>(a: &Matrix<R>, b: &[Complex<R>]) -> Option<Vec<Complex<R>>> {
    let f = lu_factor(a);
    if f.singular {
        None
    } else {
        Some(f.solve(b))
    }
}

/// Largest coordinate modulus, computed with scaling so tiny vectors do not
/// underflow to zero.
pub fn max_norm<R: Real>(x: &[Complex<R>]) -> f64 {
    x.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DoubleDouble;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn solves_with_pivoting() {
        let a = Matrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 1.0)],
            vec![c(2.0, 0.0), c(0.5, 0.0)],
        ]);
        let x = vec![c(1.0, -1.0), c(0.25, 3.0)];
        let b = a.mul_vec(&x);
        let got = lu_solve(&a, &b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((*g - *e).abs() < 1e-15);
        }
    }

    #[test]
    fn adjoint_solve_matches_explicit_adjoint() {
        let rows = vec![
            vec![c(1.0, 2.0), c(0.3, 0.0), c(-1.0, 0.5)],
            vec![c(0.0, 1.0), c(4.0, -1.0), c(0.2, 0.2)],
            vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, -3.0)],
        ];
        let a = Matrix::from_rows(&rows);
        let mut ah = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                ah[(i, j)] = a[(j, i)].conj();
            }
        }
        let b = vec![c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.5)];
        let x1 = lu_factor(&a).solve_adjoint(&b);
        let x2 = lu_solve(&ah, &b).unwrap();
        for (p, q) in x1.iter().zip(&x2) {
            assert!((*p - *q).abs() < 1e-13);
        }
    }

    #[test]
    fn detects_singular() {
        let a = Matrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]]);
        let f = lu_factor(&a);
        assert!(f.singular);
        assert_eq!(f.rcond(), 0.0);
    }

    #[test]
    fn rcond_of_diagonal() {
        let mut a = Matrix::<DoubleDouble>::identity(3);
        a[(2, 2)] = Complex::from_f64(1e-6, 0.0);
        let r = lu_factor(&a).rcond();
        assert!((r - 1e-6).abs() < 1e-12, "{r}");
        assert_eq!(lu_factor(&Matrix::<f64>::identity(4)).rcond(), 1.0);
    }

    #[test]
    fn max_norm_of_tiny_vector() {
        let v = vec![c(1e-200, 1e-200), c(0.0, 3e-200)];
        assert_eq!(max_norm(&v), 3e-200);
    }
}
