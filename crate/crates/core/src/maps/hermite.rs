//! Integer column echelon form with a unimodular transform.

use crate::error::{Error, Result};

pub(super) struct Echelon {
    /// `A U`, lower echelon: pivot `k` sits in column `k`.
    pub h: Vec<Vec<i64>>,
    /// Unimodular `n x n` transform, row-major.
    pub u: Vec<Vec<i64>>,
    /// `(row, column)` of every pivot, with positive pivot entries.
    pub pivots: Vec<(usize, usize)>,
}

fn overflow() -> Error {
    Error::Domain("integer overflow in exponent arithmetic".into())
}

/// `col[dst] -= q * col[src]` on both `h` and `u`.
fn axpy(h: &mut [Vec<i64>], u: &mut [Vec<i64>], dst: usize, src: usize, q: i64) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for row in h.iter_mut().chain(u.iter_mut()) {
        row[dst] = row[src].checked_mul(q).and_then(|v| row[dst].checked_sub(v)).ok_or_else(overflow)?;
    }
    Ok(())
}

fn swap_cols(h: &mut [Vec<i64>], u: &mut [Vec<i64>], a: usize, b: usize) {
    if a != b {
        for row in h.iter_mut().chain(u.iter_mut()) {
            row.swap(a, b);
        }
    }
}

fn negate_col(h: &mut [Vec<i64>], u: &mut [Vec<i64>], c: usize) {
    for row in h.iter_mut().chain(u.iter_mut()) {
        row[c] = -row[c];
    }
}

pub(super) fn column_echelon(rows: &[Vec<i64>], n: usize) -> Result<Echelon> {
    let mut h: Vec<Vec<i64>> = rows.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut pivots = Vec::new();
    let mut col = 0;
    for r in 0..h.len() {
        if col == n {
            break;
        }
        loop {
            let Some(best) = (col..n).filter(|&c| h[r][c] != 0).min_by_key(|&c| h[r][c].unsigned_abs()) else {
                break;
            };
            swap_cols(&mut h, &mut u, col, best);
            let p = h[r][col];
            for c in col + 1..n {
                let q = h[r][c].div_euclid(p);
                axpy(&mut h, &mut u, c, col, q)?;
            }
            if (col + 1..n).all(|c| h[r][c] == 0) {
                break;
            }
        }
        if h[r][col] != 0 {
            if h[r][col] < 0 {
                negate_col(&mut h, &mut u, col);
            }
            pivots.push((r, col));
            col += 1;
        }
    }
    Ok(Echelon { h, u, pivots })
}

/// The kernel columns `rank..n` of `u`, as per-variable exponent rows,
/// brought to a reduced echelon form over the parameters with positive
/// pivots so that exponents come out nonnegative whenever that is cheap.
pub(super) fn normalize_kernel(u: &[Vec<i64>], rank: usize) -> Vec<Vec<i64>> {
    let n = u.len();
    let d = n - rank;
    // Basis vectors as rows of k (d x n).
    let mut k: Vec<Vec<i64>> = (0..d).map(|c| (0..n).map(|j| u[j][rank + c]).collect()).collect();
    let mut lead = 0;
    for j in 0..n {
        if lead == d {
            break;
        }
        // Euclid on column j among rows lead..d.
        loop {
            let Some(best) = (lead..d).filter(|&r| k[r][j] != 0).min_by_key(|&r| k[r][j].unsigned_abs()) else {
                break;
            };
            k.swap(lead, best);
            let p = k[lead][j];
            let mut done = true;
            for r in lead + 1..d {
                let q = k[r][j].div_euclid(p);
                let pivot_row = k[lead].clone();
                for (x, y) in k[r].iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
                done &= k[r][j] == 0;
            }
            if done {
                break;
            }
        }
        if lead < d && k[lead][j] != 0 {
            if k[lead][j] < 0 {
                k[lead].iter_mut().for_each(|x| *x = -*x);
            }
            // Reduce the entries above the pivot into [0, pivot).
            let p = k[lead][j];
            let pivot_row = k[lead].clone();
            for r in 0..lead {
                let q = k[r][j].div_euclid(p);
                for (x, y) in k[r].iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
            lead += 1;
        }
    }
    // A row whose entries are all nonpositive is flipped.
    for row in &mut k {
        if row.iter().all(|&x| x <= 0) {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
    (0..n).map(|j| (0..d).map(|c| k[c][j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        a.iter()
            .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn twisted_cubic_kernel() {
        let a = vec![vec![1, 1, -1], vec![2, -1, 0]];
        let e = column_echelon(&a, 3).unwrap();
        assert_eq!(mul(&a, &e.u), e.h);
        assert_eq!(e.pivots, vec![(0, 0), (1, 1)]);
        assert_eq!(normalize_kernel(&e.u, 2), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn dependent_rows() {
        let a = vec![vec![2, 4], vec![1, 2], vec![0, 0]];
        let e = column_echelon(&a, 2).unwrap();
        assert_eq!(mul(&a, &e.u), e.h);
        assert_eq!(e.pivots.len(), 1);
    }
}
