//! Exact rational matrices: Gauss–Jordan solving and inversion over
//! `BigRational`, plus the modular reductions used for discriminant forms.

use alloc::{vec, vec::Vec};
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::IntMat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_int(m: &IntMat) -> Self {
        let mut out = RatMat::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = BigRational::from(m[(i, j)].clone());
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &RatMat) -> RatMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = RatMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(BigRational::is_integer)
    }

    pub fn to_int_mat(&self) -> Option<IntMat> {
        if !self.is_integral() {
            return None;
        }
        let rows = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_integer()).collect())
            .collect();
        Some(IntMat::from_rows(rows).expect("rectangular"))
    }

    /// Solves `self · X = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &RatMat) -> Option<RatMat> {
        assert!(self.rows == self.cols && rhs.rows == self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[(i, col)].is_zero())?;
            a.swap_rows(col, pivot);
            b.swap_rows(col, pivot);
            let inv = a[(col, col)].recip();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &inv;
            }
            for j in 0..b.cols {
                b[(col, j)] = &b[(col, j)] * &inv;
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..n {
                    let t = &f * &a[(col, j)];
                    a[(i, j)] -= t;
                }
                for j in 0..b.cols {
                    let t = &f * &b[(col, j)];
                    b[(i, j)] -= t;
                }
            }
        }
        Some(b)
    }

    pub fn inverse(&self) -> Option<RatMat> {
        self.solve(&RatMat::identity(self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RatMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `y · basis = x` over ℚ for a full-row-rank `basis` (k×n, k ≤ n).
/// Returns `None` when `x` is outside the row span.
pub fn solve_in_row_span(basis: &IntMat, x: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(basis.cols(), x.len());
    let k = basis.rows();
    let n = basis.cols();
    // Gaussian elimination on the transposed system basisᵀ · yᵀ = xᵀ.
    let mut a = RatMat::zeros(n, k + 1);
    for i in 0..n {
        for j in 0..k {
            a[(i, j)] = BigRational::from(basis[(j, i)].clone());
        }
        a[(i, k)] = BigRational::from(x[i].clone());
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].recip();
        for j in 0..=k {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..n {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..=k {
                let t = &f * &a[(r, j)];
                a[(i, j)] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() < k {
        // basis not of full row rank
        return None;
    }
    // consistency: all rows below the pivots must have zero rhs
    for i in r..n {
        if !a[(i, k)].is_zero() {
            return None;
        }
    }
    let mut y = vec![BigRational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        y[c] = a[(row, k)].clone();
    }
    Some(y)
}

/// Integral solution of `y · basis = x`, if one exists.
pub fn solve_in_row_span_integral(basis: &IntMat, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let y = solve_in_row_span(basis, x)?;
    if y.iter().all(BigRational::is_integer) {
        Some(y.iter().map(BigRational::to_integer).collect())
    } else {
        None
    }
}

/// Reduces a rational into the window `(−1, 1]`, i.e. mod 2ℤ.
pub fn reduce_mod_2z(q: &BigRational) -> BigRational {
    let two = BigRational::from(BigInt::from(2));
    let mut t = q - (q / &two).floor() * &two; // [0, 2)
    if t > BigRational::one() {
        t -= two;
    }
    t
}

/// Reduces a rational into `[0, 1)`, i.e. mod ℤ.
pub fn reduce_mod_z(q: &BigRational) -> BigRational {
    q - q.floor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMat;

    #[test]
    fn inverse_roundtrip() {
        let m = RatMat::from_int(&IntMat::from_i64(&[&[2, 1], &[7, 4]]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMat::identity(2));
    }

    #[test]
    fn row_span_solving() {
        let b = IntMat::from_i64(&[&[1, 0, 2], &[0, 3, 1]]);
        let x = [BigInt::from(2), BigInt::from(3), BigInt::from(5)];
        let y = solve_in_row_span_integral(&b, &x).unwrap();
        assert_eq!(y, vec![BigInt::from(2), BigInt::from(1)]);
        let outside = [BigInt::from(0), BigInt::from(0), BigInt::from(1)];
        assert!(solve_in_row_span(&b, &outside).is_none());
    }

    #[test]
    fn mod_reductions() {
        let q = BigRational::new(BigInt::from(15), BigInt::from(8));
        let r = reduce_mod_2z(&q);
        assert_eq!(r, BigRational::new(BigInt::from(-1), BigInt::from(8)));
        let one = reduce_mod_2z(&BigRational::one());
        assert_eq!(one, BigRational::one());
        let z = reduce_mod_z(&BigRational::new(BigInt::from(-3), BigInt::from(4)));
        assert_eq!(z, BigRational::new(BigInt::from(1), BigInt::from(4)));
    }
}
