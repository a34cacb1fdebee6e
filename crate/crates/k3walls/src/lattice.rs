//! Integral lattices presented by symmetric even Gram matrices.
//!
//! A [`GramLattice`] owns a non-degeneracy-checked Gram matrix and exposes
//! the exact lattice-theoretic toolbox: pairings and divisibility,
//! saturation and orthogonal complements (Hermite-canonical bases),
//! discriminant groups with their finite quadratic form, short-vector
//! enumeration on definite lattices, invariant/coinvariant splittings of a
//! finite-order isometry, and the hyperbolic plane spanned by an isotropic
//! class.  Degenerate Gram matrices are rejected by every operation rather
//! than silently quotiented.

use alloc::{format, vec, vec::Vec};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMat};
use crate::rat::{self, RatMat};

/// Default power bound used when detecting finite order of rank-2 isometries.
/// Orders of isometries of rank-2 lattices are tiny; exceeding this bound is
/// a reliable signal of infinite order (a boost).
pub const DEFAULT_ORDER_BOUND: u32 = 60;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GramLattice {
    gram: IntMat,
    det: BigInt,
}

impl GramLattice {
    /// Validates symmetry and evenness of the diagonal.  A zero determinant
    /// is recorded and rejected later by every operation.
    pub fn new(gram: IntMat) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for i in 0..gram.rows() {
            if gram[(i, i)].is_odd() {
                return Err(Error::OddDiagonal { index: i });
            }
        }
        let det = gram.det();
        Ok(GramLattice { gram, det })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        GramLattice::new(IntMat::from_i64(rows))
    }

    /// The hyperbolic plane `U(k)`, with `U = U(1)`.
    pub fn hyperbolic(k: i64) -> Self {
        GramLattice::from_i64(&[&[0, k], &[k, 0]]).expect("U(k) is a valid gram")
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMat {
        &self.gram
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn is_degenerate(&self) -> bool {
        self.det.is_zero()
    }

    fn ensure_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateGram)
        } else {
            Ok(())
        }
    }

    fn check_vec(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.ensure_nondegenerate()?;
        self.check_vec(x)?;
        self.check_vec(y)?;
        Ok(matrix::dot(&self.gram.mul_vec(y), x))
    }

    pub fn square(&self, x: &[BigInt]) -> Result<BigInt> {
        self.pairing(x, x)
    }

    /// Positive generator of the ideal `{(x, w) : x ∈ L}`.
    pub fn divisibility(&self, w: &[BigInt]) -> Result<BigInt> {
        self.ensure_nondegenerate()?;
        self.check_vec(w)?;
        if matrix::is_zero_vec(w) {
            return Err(Error::ZeroVector);
        }
        Ok(matrix::content(&self.gram.mul_vec(w)))
    }

    /// Signature `(n_+, n_−)` computed by exact rational congruence
    /// diagonalization.
    pub fn signature(&self) -> Result<(usize, usize)> {
        self.ensure_nondegenerate()?;
        let n = self.rank();
        let mut a = RatMat::from_int(&self.gram);
        let mut plus = 0;
        let mut minus = 0;
        for i in 0..n {
            if a[(i, i)].is_zero() {
                // Symmetric pivoting: prefer a later nonzero diagonal entry,
                // otherwise mix in a row with a nonzero off-diagonal entry.
                if let Some(j) = (i + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                    for k in 0..n {
                        let t = a[(i, k)].clone();
                        a[(i, k)] = a[(j, k)].clone();
                        a[(j, k)] = t;
                    }
                    for k in 0..n {
                        let t = a[(k, i)].clone();
                        a[(k, i)] = a[(k, j)].clone();
                        a[(k, j)] = t;
                    }
                } else if let Some(j) = (i + 1..n).find(|&j| !a[(i, j)].is_zero()) {
                    for k in 0..n {
                        let t = a[(j, k)].clone();
                        a[(i, k)] += t;
                    }
                    for k in 0..n {
                        let t = a[(k, j)].clone();
                        a[(k, i)] += t;
                    }
                } else {
                    // Row i is zero: impossible for a non-degenerate form.
                    return Err(Error::Internal(format!(
                        "zero row {i} during signature computation of a non-degenerate gram"
                    )));
                }
            }
            let piv = a[(i, i)].clone();
            if piv.is_positive() {
                plus += 1;
            } else {
                minus += 1;
            }
            for j in i + 1..n {
                if a[(j, i)].is_zero() {
                    continue;
                }
                let f = &a[(j, i)] / &piv;
                for k in 0..n {
                    let t = &f * &a[(i, k)];
                    a[(j, k)] -= t;
                }
                for k in 0..n {
                    let t = &f * &a[(k, i)];
                    a[(k, j)] -= t;
                }
            }
        }
        Ok((plus, minus))
    }

    pub fn is_negative_definite(&self) -> Result<bool> {
        Ok(self.signature()? == (0, self.rank()))
    }

    /// Builds a sublattice from basis rows, checking independence.
    pub fn sublattice(&self, rows: Vec<Vec<BigInt>>) -> Result<Sublattice> {
        for r in &rows {
            self.check_vec(r)?;
        }
        Sublattice::from_rows(rows, self.rank())
    }

    /// Gram matrix of a sublattice in its basis.
    pub fn sublattice_gram(&self, s: &Sublattice) -> Result<GramLattice> {
        self.ensure_nondegenerate()?;
        let b = s.basis();
        let g = b.mul(&self.gram).mul(&b.transpose());
        GramLattice::new(g)
    }

    /// Primitive closure: the ℚ-span of `s` intersected with the lattice.
    /// The result has the same rank, with a Hermite-canonical basis.
    pub fn saturate(&self, s: &Sublattice) -> Result<Sublattice> {
        self.ensure_nondegenerate()?;
        if s.basis().cols() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: s.basis().cols(),
            });
        }
        // The ℚ-row-span of B is the double annihilator under the standard
        // dot product, and annihilators of integer matrices are saturated.
        let ann = s.basis().kernel();
        let sat = ann.kernel();
        if sat.rows() != s.rank() {
            return Err(Error::Internal(format!(
                "saturation changed rank: {} -> {}",
                s.rank(),
                sat.rows()
            )));
        }
        Sublattice::from_basis_mat(sat, self.rank())
    }

    /// Basis of `{x ∈ L : (x, s) = 0 for all s ∈ S}`, Hermite-canonical.
    /// A non-primitive input is saturated first; the flag reports whether
    /// that changed anything.
    pub fn orthogonal_complement(&self, s: &Sublattice) -> Result<Complement> {
        self.ensure_nondegenerate()?;
        let sat = self.saturate(s)?;
        let input_hnf = s.basis().hermite_normal_form().drop_zero_rows();
        let had_to_saturate = &input_hnf != sat.basis();
        let m = s.basis().mul(&self.gram);
        let ker = m.kernel();
        let sub = Sublattice::from_basis_mat(ker, self.rank())?;
        Ok(Complement {
            sublattice: sub,
            input_was_saturated: had_to_saturate,
        })
    }

    /// Discriminant group `L∨/L` with invariant factors, generators (as
    /// rational vectors in lattice coordinates), the quadratic form values
    /// `q` mod 2ℤ (reduced into `(−1, 1]`) and pairings mod ℤ (in `[0, 1)`).
    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        self.ensure_nondegenerate()?;
        let snf = self.gram.smith_normal_form();
        let mut orders = Vec::new();
        let mut generators: Vec<Vec<BigRational>> = Vec::new();
        for t in 0..self.rank() {
            let d = &snf.d[(t, t)];
            if d.abs() <= BigInt::one() {
                continue;
            }
            let col = snf.v.col_vec(t);
            let gen = col
                .iter()
                .map(|c| BigRational::new(c.clone(), d.clone()))
                .collect();
            orders.push(d.clone());
            generators.push(gen);
        }
        let g = generators.len();
        let gram_rat = RatMat::from_int(&self.gram);
        let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
            let gy = gram_rat.mul_vec(y);
            x.iter().zip(&gy).map(|(a, b)| a * b).sum()
        };
        let q_values: Vec<BigRational> = generators
            .iter()
            .map(|gen| rat::reduce_mod_2z(&pair(gen, gen)))
            .collect();
        let mut b_values = vec![vec![BigRational::zero(); g]; g];
        for i in 0..g {
            for j in 0..g {
                b_values[i][j] = rat::reduce_mod_z(&pair(&generators[i], &generators[j]));
            }
        }
        Ok(DiscriminantGroup {
            orders,
            generators,
            q_values,
            b_values,
        })
    }

    /// All `x` with `(x,x) = target` on a negative definite lattice, up to
    /// sign (first nonzero coordinate positive), sorted lexicographically.
    pub fn short_vectors(&self, target: &BigInt) -> Result<Vec<Vec<BigInt>>> {
        self.ensure_nondegenerate()?;
        if !target.is_negative() {
            return Err(Error::TargetNotNegative {
                target: target.clone(),
            });
        }
        if !self.is_negative_definite()? {
            return Err(Error::NotNegativeDefinite);
        }
        let n = self.rank();
        // Work with the positive definite form Q = −gram and budget C = −target.
        let q = RatMat::from_int(&self.gram.neg());
        let c = BigRational::from(-target.clone());
        // Completion of squares: Q(x) = Σ d_i (x_i + Σ_{j>i} r_ij x_j)².
        let mut d = vec![BigRational::zero(); n];
        let mut r = RatMat::zeros(n, n);
        let mut work = q.clone();
        for i in 0..n {
            d[i] = work[(i, i)].clone();
            if !d[i].is_positive() {
                return Err(Error::Internal("positive definite pivot failed".into()));
            }
            for j in i + 1..n {
                r[(i, j)] = &work[(i, j)] / &d[i];
            }
            for j in i + 1..n {
                for k in i + 1..n {
                    let t = &d[i] * &r[(i, j)] * &r[(i, k)];
                    work[(j, k)] -= t;
                }
            }
        }
        let mut enumerator = ShortVectorSearch {
            n,
            d: &d,
            r: &r,
            x: vec![BigInt::zero(); n],
            target: &c,
            out: Vec::new(),
        };
        enumerator.descend(n - 1, &c, &BigRational::zero());
        let mut out = enumerator.out;
        // canonical sign, dedupe
        for v in out.iter_mut() {
            if let Some(first) = v.iter().find(|t| !t.is_zero()) {
                if first.is_negative() {
                    *v = matrix::neg_vec(v);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Splits the lattice along a finite-order isometry: the saturated
    /// invariant sublattice `ker(g − id)`, its orthogonal complement (the
    /// coinvariant sublattice) and the exponent of `L/(inv ⊕ coinv)`.
    pub fn invariant_coinvariant(
        &self,
        g: &IntegralIsometry,
        order: u32,
    ) -> Result<InvariantCoinvariant> {
        self.ensure_nondegenerate()?;
        if order == 0 || !g.pow(order).is_identity() {
            return Err(Error::WrongOrder { order });
        }
        let n = self.rank();
        let mut g_minus_id = g.matrix().clone();
        for i in 0..n {
            g_minus_id[(i, i)] -= 1;
        }
        let inv_rows = g_minus_id.kernel();
        let invariant = Sublattice::from_basis_mat(inv_rows, n)?;
        let coinvariant = self.orthogonal_complement(&invariant)?.sublattice;
        let stacked = IntMat::stack(invariant.basis(), coinvariant.basis());
        if stacked.rows() != n {
            return Err(Error::Internal(format!(
                "invariant ⊕ coinvariant has rank {} in a rank-{} lattice",
                stacked.rows(),
                n
            )));
        }
        let snf = stacked.smith_normal_form();
        let factors = snf.invariant_factors();
        let quotient_exponent = factors.last().cloned().unwrap_or_else(BigInt::one);
        Ok(InvariantCoinvariant {
            invariant,
            coinvariant,
            quotient_exponent,
        })
    }

    /// From a nonzero primitive isotropic class `e` of divisibility `m`,
    /// constructs the plane `span{e, f}` with Gram exactly `U(m²)`,
    /// via `f = −k·e + m·f′` where `(e, f′) = m` and `(f′, f′) = 2k`.
    pub fn hyperbolic_from_isotropic(&self, e: &[BigInt]) -> Result<HyperbolicPlane> {
        self.ensure_nondegenerate()?;
        self.check_vec(e)?;
        if matrix::is_zero_vec(e) {
            return Err(Error::ZeroVector);
        }
        let content = matrix::content(e);
        if !content.is_one() {
            return Err(Error::NotPrimitive { content });
        }
        let sq = self.square(e)?;
        if !sq.is_zero() {
            return Err(Error::NotIsotropic { square: sq });
        }
        let pairings = self.gram.mul_vec(e);
        let (m, coeffs) = matrix::xgcd_combination(&pairings);
        let f_prime = coeffs;
        let two_k = self.square(&f_prime)?;
        let k: BigInt = two_k / 2;
        let f: Vec<BigInt> = e
            .iter()
            .zip(&f_prime)
            .map(|(ei, fi)| -&k * ei + &m * fi)
            .collect();
        let plane = Sublattice::from_rows(vec![e.to_vec(), f], self.rank())?;
        let gram = self.sublattice_gram(&plane)?;
        let m2 = &m * &m;
        let expected = IntMat::from_rows(vec![
            vec![BigInt::zero(), m2.clone()],
            vec![m2.clone(), BigInt::zero()],
        ])
        .expect("2x2");
        if gram.gram() != &expected {
            return Err(Error::Internal(format!(
                "hyperbolic plane gram is not U(m²) for m = {m}"
            )));
        }
        Ok(HyperbolicPlane { plane, scale: m })
    }

    /// On a lattice of signature (1,1): decides whether a finite-order
    /// integral isometry squares to the identity (it always does; the check
    /// is the point).  Errors with [`Error::OrderBoundExceeded`] when no
    /// power up to the bound is the identity, which signals infinite order.
    pub fn finite_order_rank2_is_involution(&self, g: &IntegralIsometry) -> Result<bool> {
        self.finite_order_rank2_is_involution_bounded(g, DEFAULT_ORDER_BOUND)
    }

    pub fn finite_order_rank2_is_involution_bounded(
        &self,
        g: &IntegralIsometry,
        bound: u32,
    ) -> Result<bool> {
        self.ensure_nondegenerate()?;
        let (plus, minus) = self.signature()?;
        if self.rank() != 2 || plus != 1 || minus != 1 {
            return Err(Error::NotHyperbolicRank2 {
                rank: self.rank(),
                plus,
                minus,
            });
        }
        let mut p = g.clone();
        let mut order = None;
        for k in 1..=bound {
            if p.is_identity() {
                order = Some(k);
                break;
            }
            p = p.compose(g);
        }
        if order.is_none() {
            return Err(Error::OrderBoundExceeded { bound });
        }
        Ok(g.compose(g).is_identity())
    }

    /// Validated isometry constructor; see [`IntegralIsometry`].
    pub fn isometry(&self, m: IntMat) -> Result<IntegralIsometry> {
        self.ensure_nondegenerate()?;
        if !m.is_square() || m.rows() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: m.rows(),
            });
        }
        if m.transpose().mul(&self.gram).mul(&m) != self.gram {
            return Err(Error::NotAnIsometry);
        }
        Ok(IntegralIsometry { matrix: m })
    }
}

/// Depth-first enumeration over the completed-squares form
/// `Q(x) = Σ d_i (x_i + Σ_{j>i} r_ij x_j)²`, last coordinate outermost.
struct ShortVectorSearch<'a> {
    n: usize,
    d: &'a [BigRational],
    r: &'a RatMat,
    x: Vec<BigInt>,
    target: &'a BigRational,
    out: Vec<Vec<BigInt>>,
}

impl ShortVectorSearch<'_> {
    fn descend(&mut self, i: usize, budget: &BigRational, spent: &BigRational) {
        let center: BigRational = (i + 1..self.n)
            .map(|j| &self.r[(i, j)] * BigRational::from(self.x[j].clone()))
            .sum();
        // integer window: d_i (x_i + center)² ≤ budget
        let bound = budget / &self.d[i];
        let fl = bound.floor().to_integer().sqrt();
        let base = (-&center).floor().to_integer();
        let lo: BigInt = &base - &fl - 1;
        let hi: BigInt = &base + &fl + 2;
        let mut xi = lo;
        while xi <= hi {
            let shifted = BigRational::from(xi.clone()) + &center;
            let term = &self.d[i] * &shifted * &shifted;
            if &term <= budget {
                self.x[i] = xi.clone();
                let new_spent = spent + &term;
                if i == 0 {
                    if &new_spent == self.target && self.x.iter().any(|v| !v.is_zero()) {
                        self.out.push(self.x.clone());
                    }
                } else {
                    let new_budget = budget - &term;
                    self.descend(i - 1, &new_budget, &new_spent);
                }
            }
            xi += 1;
        }
        self.x[i] = BigInt::zero();
    }
}

/// A sublattice given by independent basis rows in parent coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sublattice {
    basis: IntMat,
}

impl Sublattice {
    pub fn from_rows(rows: Vec<Vec<BigInt>>, ambient_rank: usize) -> Result<Self> {
        let basis = IntMat::from_rows(rows)?;
        Sublattice::from_basis_mat(basis, ambient_rank)
    }

    /// Like [`Sublattice::from_rows`] but keeps the column count of an empty
    /// basis matrix intact (the rank-0 sublattice).
    pub fn from_basis_mat(basis: IntMat, ambient_rank: usize) -> Result<Self> {
        if basis.rows() == 0 {
            return Ok(Sublattice {
                basis: IntMat::zeros(0, ambient_rank),
            });
        }
        if basis.cols() != ambient_rank {
            return Err(Error::DimensionMismatch {
                expected: ambient_rank,
                got: basis.cols(),
            });
        }
        if basis.rank() != basis.rows() {
            return Err(Error::DependentRows);
        }
        Ok(Sublattice { basis })
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_rank(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of `x` in this basis, if `x` lies in the sublattice.
    pub fn coordinates_of(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        rat::solve_in_row_span_integral(&self.basis, x).ok_or(Error::NotInSublattice)
    }

    /// Ambient vector with the given basis coordinates.
    pub fn ambient(&self, coords: &[BigInt]) -> Vec<BigInt> {
        matrix::vec_mul(coords, &self.basis)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        rat::solve_in_row_span_integral(&self.basis, x).is_some()
    }
}

pub struct Complement {
    pub sublattice: Sublattice,
    /// Whether the input had to be saturated before taking the complement.
    pub input_was_saturated: bool,
}

/// The finite quadratic form `(L∨/L, q)` of a non-degenerate even lattice.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    orders: Vec<BigInt>,
    generators: Vec<Vec<BigRational>>,
    q_values: Vec<BigRational>,
    b_values: Vec<Vec<BigRational>>,
}

impl DiscriminantGroup {
    /// Invariant factors `d_1 | d_2 | …`, each > 1.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Generators as rational vectors in lattice coordinates.
    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    /// `q(gen_i)` mod 2ℤ, reduced into `(−1, 1]` (dual-basis convention;
    /// no claim is made to match any external table's sign choice).
    pub fn q_values(&self) -> &[BigRational] {
        &self.q_values
    }

    /// `b(gen_i, gen_j)` mod ℤ, reduced into `[0, 1)`.
    pub fn b_values(&self) -> &[Vec<BigRational>] {
        &self.b_values
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn exponent(&self) -> BigInt {
        self.orders.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// All invariant factors in {1, 2}.
    pub fn is_2_elementary(&self) -> bool {
        self.orders.iter().all(|d| *d == BigInt::from(2))
    }

    /// The group is cyclic of the given order.
    pub fn is_cyclic_of_order(&self, n: &BigInt) -> bool {
        match self.orders.len() {
            0 => n.is_one(),
            1 => &self.orders[0] == n,
            _ => false,
        }
    }
}

/// An integral matrix `M` with `Mᵀ · G · M = G`, acting on coordinate
/// columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegralIsometry {
    matrix: IntMat,
}

impl IntegralIsometry {
    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    pub fn identity(n: usize) -> Self {
        IntegralIsometry {
            matrix: IntMat::identity(n),
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &IntegralIsometry) -> IntegralIsometry {
        IntegralIsometry {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn pow(&self, k: u32) -> IntegralIsometry {
        let mut out = IntegralIsometry::identity(self.matrix.rows());
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == IntMat::identity(self.matrix.rows())
    }
}

pub struct InvariantCoinvariant {
    pub invariant: Sublattice,
    pub coinvariant: Sublattice,
    pub quotient_exponent: BigInt,
}

pub struct HyperbolicPlane {
    /// Basis rows `[e, f]`; the Gram in this basis is exactly `U(m²)`.
    pub plane: Sublattice,
    /// `m = div(e)`.
    pub scale: BigInt,
}
