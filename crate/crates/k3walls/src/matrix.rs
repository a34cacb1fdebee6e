//! Dense matrices over unbounded integers.
//!
//! Provides the normal forms the lattice layer is built on: Smith normal
//! form with both transformation matrices, row-style Hermite normal form,
//! integer kernels and Bareiss determinants.  All arithmetic is exact.

use alloc::{vec, vec::Vec};
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::RaggedRows);
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            data.extend(r);
        }
        Ok(IntMat {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Convenience constructor for literal matrices.  Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMat::from_rows(v).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMat::zeros(self.rows, rhs.cols);
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

    /// `M · v` with `v` a column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn neg(&self) -> IntMat {
        let data = self.data.iter().map(|x| -x).collect();
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn stack(top: &IntMat, bottom: &IntMat) -> IntMat {
        assert_eq!(top.cols, bottom.cols, "stack column mismatch");
        let mut data = top.data.clone();
        data.extend(bottom.data.iter().cloned());
        IntMat {
            rows: top.rows + bottom.rows,
            cols: top.cols,
            data,
        }
    }

    pub fn content(&self) -> BigInt {
        content(&self.data)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c · row[src]`
    fn row_axpy(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = c * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    /// `col[dst] += c · col[src]`
    fn col_axpy(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = c * &self[(i, src)];
            self[(i, dst)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = -&self[(i, j)];
            self[(i, j)] = t;
        }
    }

    /// Exact determinant by the Bareiss fraction-free algorithm.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = &t / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    /// Row-style Hermite normal form: row echelon with positive pivots and
    /// entries above each pivot reduced into `[0, pivot)`.  Zero rows are
    /// collected at the bottom.
    pub fn hermite_normal_form(&self) -> IntMat {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r >= a.rows {
                break;
            }
            loop {
                let pivot = (r..a.rows)
                    .filter(|&i| !a[(i, c)].is_zero())
                    .min_by_key(|&i| a[(i, c)].abs());
                let Some(p) = pivot else { break };
                a.swap_rows(r, p);
                let mut clean = true;
                for i in r + 1..a.rows {
                    if a[(i, c)].is_zero() {
                        continue;
                    }
                    let q = rounded_div(&a[(i, c)], &a[(r, c)]);
                    a.row_axpy(i, r, &-q);
                    if !a[(i, c)].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if a[(r, c)].is_zero() {
                continue;
            }
            if a[(r, c)].is_negative() {
                a.negate_row(r);
            }
            for i in 0..r {
                let q = a[(i, c)].div_floor(&a[(r, c)]);
                a.row_axpy(i, r, &-q);
            }
            r += 1;
        }
        a
    }

    pub fn drop_zero_rows(&self) -> IntMat {
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|x| !x.is_zero()))
            .map(|i| self.row_vec(i))
            .collect();
        let cols = self.cols;
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            data.extend(r);
        }
        IntMat {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn rank(&self) -> usize {
        self.hermite_normal_form().drop_zero_rows().rows
    }

    /// Smith normal form with transformations: `u * self * v = d`, `u` and
    /// `v` unimodular, `d` diagonal with non-negative entries satisfying
    /// `d_i | d_{i+1}`.
    pub fn smith_normal_form(&self) -> SmithNormalForm {
        let mut d = self.clone();
        let mut u = IntMat::identity(self.rows);
        let mut v = IntMat::identity(self.cols);
        loop {
            diagonalize(&mut d, &mut u, &mut v);
            let k = d.rows.min(d.cols);
            for t in 0..k {
                if d[(t, t)].is_negative() {
                    d.negate_row(t);
                    u.negate_row(t);
                }
            }
            let nz = (0..k).take_while(|&t| !d[(t, t)].is_zero()).count();
            let violation =
                (0..nz.saturating_sub(1)).find(|&i| !d[(i + 1, i + 1)].is_multiple_of(&d[(i, i)]));
            match violation {
                Some(i) => {
                    // Pull the next diagonal entry into row i and rerun; the
                    // product of the leading divisors strictly decreases.
                    d.row_axpy(i, i + 1, &BigInt::one());
                    u.row_axpy(i, i + 1, &BigInt::one());
                }
                None => break,
            }
        }
        SmithNormalForm { u, d, v }
    }

    /// Basis of the integer kernel `{x : self · xᵀ = 0}`, rows in Hermite
    /// normal form.
    pub fn kernel(&self) -> IntMat {
        let snf = self.smith_normal_form();
        let k = self.rows.min(self.cols);
        let rank = (0..k).take_while(|&t| !snf.d[(t, t)].is_zero()).count();
        let rows: Vec<Vec<BigInt>> = (rank..self.cols).map(|j| snf.v.col_vec(j)).collect();
        if rows.is_empty() {
            return IntMat::zeros(0, self.cols);
        }
        IntMat::from_rows(rows)
            .expect("kernel rows")
            .hermite_normal_form()
            .drop_zero_rows()
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub struct SmithNormalForm {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        let k = self.d.rows().min(self.d.cols());
        (0..k).take_while(|&t| !self.d[(t, t)].is_zero()).count()
    }

    /// Nonzero diagonal entries `d_1 | d_2 | …`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|t| self.d[(t, t)].clone()).collect()
    }
}

/// One pass of the elimination that makes `d` diagonal, mirroring the row
/// operations on `u` and the column operations on `v`.
fn diagonalize(d: &mut IntMat, u: &mut IntMat, v: &mut IntMat) {
    let mut t = 0;
    while t < d.rows.min(d.cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                if pivot.is_none_or(|p| d[(i, j)].abs() < d[p].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { return };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..d.rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -rounded_div(&d[(i, t)], &d[(t, t)]);
                d.row_axpy(i, t, &q);
                u.row_axpy(i, t, &q);
                if !d[(i, t)].is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            for j in t + 1..d.cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -rounded_div(&d[(t, j)], &d[(t, t)]);
                d.col_axpy(j, t, &q);
                v.col_axpy(j, t, &q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        t += 1;
    }
}

/// Division rounded to nearest, so `|a − q·b| ≤ |b|/2`.
pub fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let babs = b.abs();
    let (mut q, r) = a.div_mod_floor(&babs);
    if &r * 2 > babs {
        q += 1;
    }
    if b.is_negative() {
        -q
    } else {
        q
    }
}

/// Non-negative gcd of all entries; 0 for an all-zero slice.
pub fn content(xs: &[BigInt]) -> BigInt {
    xs.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Extended gcd of a slice: returns `(g, c)` with `Σ c_i x_i = g ≥ 0`.
pub fn xgcd_combination(xs: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(xs.len());
    for x in xs {
        if g.is_zero() {
            if x.is_zero() {
                coeffs.push(BigInt::zero());
            } else {
                let sign = if x.is_negative() {
                    -BigInt::one()
                } else {
                    BigInt::one()
                };
                g = x.abs();
                coeffs.push(sign);
            }
            continue;
        }
        let eg = g.extended_gcd(x);
        // eg.gcd = eg.x·g + eg.y·x
        for c in coeffs.iter_mut() {
            *c *= &eg.x;
        }
        coeffs.push(eg.y.clone());
        g = eg.gcd;
    }
    debug_assert!(!g.is_negative());
    (g, coeffs)
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `v · M` with `v` a row vector.
pub fn vec_mul(v: &[BigInt], m: &IntMat) -> Vec<BigInt> {
    assert_eq!(v.len(), m.rows(), "vector-matrix dimension mismatch");
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| &v[i] * &m[(i, j)]).sum())
        .collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn neg_vec(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

pub fn add_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMat) {
        let snf = m.smith_normal_form();
        assert_eq!(snf.u.det().abs(), BigInt::one());
        assert_eq!(snf.v.det().abs(), BigInt::one());
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d);
        let f = snf.invariant_factors();
        for w in f.windows(2) {
            assert!(
                w[1].is_multiple_of(&w[0]),
                "divisibility chain broken: {f:?}"
            );
        }
    }

    #[test]
    fn snf_diagonal_examples() {
        let m = IntMat::from_i64(&[&[2, 0], &[0, 3]]);
        let snf = m.smith_normal_form();
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        check_snf(&m);

        let m = IntMat::from_i64(&[&[0, 1], &[1, 0]]);
        let snf = m.smith_normal_form();
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::from(1), BigInt::from(1)]
        );
        check_snf(&m);

        // gram of <-30> ⊕ <2>
        let m = IntMat::from_i64(&[&[-30, 0], &[0, 2]]);
        let snf = m.smith_normal_form();
        assert_eq!(
            snf.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(30)]
        );
        check_snf(&m);
    }

    #[test]
    fn snf_rectangular_and_zero() {
        check_snf(&IntMat::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]));
        check_snf(&IntMat::from_i64(&[&[1, 2, 3], &[4, 5, 6]]));
        check_snf(&IntMat::zeros(2, 3));
        check_snf(&IntMat::from_i64(&[&[6, 4], &[8, 10], &[2, 2]]));
    }

    #[test]
    fn kernel_of_linear_form() {
        let m = IntMat::from_i64(&[&[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.rows(), 2);
        for i in 0..k.rows() {
            assert!(dot(k.row(i), &m.row_vec(0)).is_zero());
        }
    }

    #[test]
    fn hnf_canonicalizes() {
        let m = IntMat::from_i64(&[&[2, 0, 0], &[3, 0, 1]]);
        let h = m.hermite_normal_form();
        // pivots positive, entries above reduced
        assert_eq!(
            h,
            IntMat::from_i64(&[&[1, 0, -1], &[0, 0, 2]]).hermite_normal_form()
        );
    }

    #[test]
    fn det_bareiss() {
        let m = IntMat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -2]]);
        assert_eq!(m.det(), BigInt::from(2));
        assert_eq!(IntMat::identity(5).det(), BigInt::one());
        let sing = IntMat::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.det(), BigInt::zero());
    }

    #[test]
    fn xgcd_combination_works() {
        let xs = [BigInt::from(12), BigInt::from(-8), BigInt::from(30)];
        let (g, c) = xgcd_combination(&xs);
        assert_eq!(g, BigInt::from(2));
        let s: BigInt = c.iter().zip(&xs).map(|(a, b)| a * b).sum();
        assert_eq!(s, g);
    }

    #[test]
    fn rounded_div_minimizes_remainder() {
        for a in -25i64..=25 {
            for b in [-7i64, -3, 2, 5, 9] {
                let q = rounded_div(&BigInt::from(a), &BigInt::from(b));
                let r = BigInt::from(a) - &q * BigInt::from(b);
                assert!(r.abs() * 2 <= BigInt::from(b).abs(), "a={a} b={b}");
            }
        }
    }
}
