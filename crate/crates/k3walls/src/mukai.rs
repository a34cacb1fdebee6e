//! Mukai vectors over a configurable Néron–Severi lattice, the algebraic
//! Mukai lattice ℤ ⊕ NS ⊕ ℤ, its primitive embedding into the full rank-24
//! Mukai lattice U⁴ ⊕ E₈(−1)², Markman's monodromy criterion for
//! reflections, and induced actions on discriminant groups.
//!
//! Sign convention: `(v, w) = θ_v·θ_w − r_v s_w − r_w s_v`, pinned by the
//! identity `((0,0,1), (r,θ,s)) = −r`.

use alloc::{format, string::String, vec, vec::Vec};
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{GramLattice, IntegralIsometry, Sublattice};
use crate::matrix::{self, IntMat};
use crate::rat::RatMat;

/// The Néron–Severi lattice of the K3 surface together with a distinguished
/// primitive class `D` and its cached divisibility.
#[derive(Clone, Debug)]
pub struct NsData {
    lattice: GramLattice,
    d: Vec<BigInt>,
    d_div: BigInt,
}

impl NsData {
    pub fn new(lattice: GramLattice, d: Vec<BigInt>) -> Result<Self> {
        let (plus, minus) = lattice.signature()?;
        if plus != 1 || minus != lattice.rank() - 1 {
            return Err(Error::BadNsSignature { plus, minus });
        }
        if d.len() != lattice.rank() {
            return Err(Error::DimensionMismatch {
                expected: lattice.rank(),
                got: d.len(),
            });
        }
        let content = matrix::content(&d);
        if !content.is_one() {
            return Err(Error::NotPrimitive { content });
        }
        let d_div = lattice.divisibility(&d)?;
        Ok(NsData { lattice, d, d_div })
    }

    /// Picard rank 1 with `NS = ℤ·D` and `D² = d_squared`.
    pub fn rank_one(d_squared: &BigInt) -> Result<Self> {
        let gram = GramLattice::new(IntMat::from_rows(vec![vec![d_squared.clone()]])?)?;
        NsData::new(gram, vec![BigInt::one()])
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn d(&self) -> &[BigInt] {
        &self.d
    }

    pub fn d_div(&self) -> &BigInt {
        &self.d_div
    }

    pub fn d_squared(&self) -> BigInt {
        self.lattice
            .square(&self.d)
            .expect("D is a valid NS vector")
    }
}

/// A Mukai vector `(r, θ, s)` with `θ` in NS coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MukaiVector {
    pub r: BigInt,
    pub theta: Vec<BigInt>,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: BigInt, theta: Vec<BigInt>, s: BigInt) -> Self {
        MukaiVector { r, theta, s }
    }

    pub fn from_i64(r: i64, theta: &[i64], s: i64) -> Self {
        MukaiVector {
            r: BigInt::from(r),
            theta: theta.iter().map(|&x| BigInt::from(x)).collect(),
            s: BigInt::from(s),
        }
    }

    /// Flat coordinates `(r, θ…, s)` in the algebraic Mukai lattice.
    pub fn coords(&self) -> Vec<BigInt> {
        let mut c = Vec::with_capacity(self.theta.len() + 2);
        c.push(self.r.clone());
        c.extend(self.theta.iter().cloned());
        c.push(self.s.clone());
        c
    }

    pub fn from_coords(coords: &[BigInt]) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: coords.len(),
            });
        }
        Ok(MukaiVector {
            r: coords[0].clone(),
            theta: coords[1..coords.len() - 1].to_vec(),
            s: coords[coords.len() - 1].clone(),
        })
    }

    pub fn ns_rank(&self) -> usize {
        self.theta.len()
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && matrix::is_zero_vec(&self.theta)
    }

    pub fn content(&self) -> BigInt {
        matrix::content(&self.coords())
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn neg(&self) -> MukaiVector {
        MukaiVector {
            r: -&self.r,
            theta: matrix::neg_vec(&self.theta),
            s: -&self.s,
        }
    }

    pub fn add(&self, other: &MukaiVector) -> MukaiVector {
        MukaiVector {
            r: &self.r + &other.r,
            theta: matrix::add_vec(&self.theta, &other.theta),
            s: &self.s + &other.s,
        }
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.r)?;
        for t in &self.theta {
            write!(f, ", {t}")?;
        }
        write!(f, ", {})", self.s)
    }
}

/// The extended Néron–Severi lattice ℤ ⊕ NS ⊕ ℤ with the Mukai pairing,
/// realized by an explicit Gram matrix of rank ρ+2.
#[derive(Clone, Debug)]
pub struct AlgMukaiLattice {
    ns: NsData,
    lattice: GramLattice,
}

impl AlgMukaiLattice {
    pub fn new(ns: NsData) -> Self {
        let rho = ns.rank();
        let n = rho + 2;
        let mut g = IntMat::zeros(n, n);
        g[(0, n - 1)] = -BigInt::one();
        g[(n - 1, 0)] = -BigInt::one();
        for i in 0..rho {
            for j in 0..rho {
                g[(1 + i, 1 + j)] = ns.lattice().gram()[(i, j)].clone();
            }
        }
        let lattice = GramLattice::new(g).expect("Mukai gram is symmetric and even");
        AlgMukaiLattice { ns, lattice }
    }

    pub fn rank_one(d_squared: &BigInt) -> Result<Self> {
        Ok(AlgMukaiLattice::new(NsData::rank_one(d_squared)?))
    }

    pub fn ns(&self) -> &NsData {
        &self.ns
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn check_vector(&self, v: &MukaiVector) -> Result<()> {
        if v.ns_rank() != self.ns.rank() {
            return Err(Error::NsMismatch {
                expected: self.ns.rank(),
                got: v.ns_rank(),
            });
        }
        Ok(())
    }

    pub fn pairing(&self, v: &MukaiVector, w: &MukaiVector) -> Result<BigInt> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        let tt = self.ns.lattice().pairing(&v.theta, &w.theta)?;
        Ok(tt - &v.r * &w.s - &w.r * &v.s)
    }

    pub fn square(&self, v: &MukaiVector) -> Result<BigInt> {
        self.pairing(v, v)
    }

    /// `(0,0,1)`.
    pub fn unit_point(&self) -> MukaiVector {
        MukaiVector::new(
            BigInt::zero(),
            vec![BigInt::zero(); self.ns.rank()],
            BigInt::one(),
        )
    }

    /// The spherical class `(1,0,1)` of the structure sheaf.
    pub fn spherical_class(&self) -> MukaiVector {
        MukaiVector::new(
            BigInt::one(),
            vec![BigInt::zero(); self.ns.rank()],
            BigInt::one(),
        )
    }

    /// The class `e = (r, θ, θ²/r − s)` orthogonal to `v` with `e² = −v²`.
    pub fn compute_e(&self, v: &MukaiVector) -> Result<EClass> {
        self.check_vector(v)?;
        if v.r.is_zero() {
            return Err(Error::RankZero);
        }
        let theta_sq = self.ns.lattice().square(&v.theta)?;
        if !theta_sq.is_multiple_of(&v.r) {
            return Err(Error::NonIntegralE {
                r: v.r.clone(),
                theta_sq,
            });
        }
        let e = MukaiVector::new(v.r.clone(), v.theta.clone(), &theta_sq / &v.r - &v.s);
        let ev = self.pairing(&e, v)?;
        let e_sq = self.square(&e)?;
        let v_sq = self.square(v)?;
        if !ev.is_zero() || e_sq != -&v_sq {
            return Err(Error::Internal(format!(
                "compute_e identities failed: (e,v) = {ev}, e² = {e_sq}, v² = {v_sq}"
            )));
        }
        let primitive = e.is_primitive();
        Ok(EClass { e, primitive })
    }

    /// The decomposition `v = w + t` with `w = v + (0,0,1)`, `t = (0,0,−1)`,
    /// together with its pairing identities.
    pub fn decompose_v_plus_t(&self, v: &MukaiVector) -> Result<VPlusT> {
        self.check_vector(v)?;
        let w = v.add(&self.unit_point());
        let t = self.unit_point().neg();
        let v_sq = self.square(v)?;
        let w_sq = self.square(&w)?;
        let t_sq = self.square(&t)?;
        let w_v = self.pairing(&w, v)?;
        let v_t = self.pairing(v, &t)?;
        if w_sq != &v_sq - 2 * &v.r || !t_sq.is_zero() || w_v != &v_sq - &v.r || v_t != v.r {
            return Err(Error::Internal(format!(
                "v = w + t identities failed for v = {v}"
            )));
        }
        Ok(VPlusT {
            w,
            t,
            v_sq,
            w_sq,
            t_sq,
            w_v,
            v_t,
        })
    }

    /// Reflection `x ↦ x − (2(x,e)/e²)·e`, defined when the image is
    /// integral.
    pub fn reflect(&self, e: &MukaiVector, x: &MukaiVector) -> Result<MukaiVector> {
        let e_sq = self.square(e)?;
        if e_sq.is_zero() {
            return Err(Error::ReflectionSquareZero);
        }
        let num: BigInt = 2 * self.pairing(x, e)?;
        if !num.is_multiple_of(&e_sq) {
            let g = num.gcd(&e_sq);
            return Err(Error::NonIntegralReflection {
                denominator: (&e_sq / g).abs(),
            });
        }
        let c = &num / &e_sq;
        let coords = x.coords();
        let ec = e.coords();
        let out: Vec<BigInt> = coords
            .iter()
            .zip(&ec)
            .map(|(xi, ei)| xi - &c * ei)
            .collect();
        MukaiVector::from_coords(&out)
    }
}

pub struct EClass {
    pub e: MukaiVector,
    pub primitive: bool,
}

pub struct VPlusT {
    pub w: MukaiVector,
    pub t: MukaiVector,
    pub v_sq: BigInt,
    pub w_sq: BigInt,
    pub t_sq: BigInt,
    pub w_v: BigInt,
    pub v_t: BigInt,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_int(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Verdict of Markman's criterion for a reflection `R_e`.
///
/// `MonodromyPlusMinus` covers the degenerate case `n = 2`, where the
/// discriminant group is 2-torsion and `+Id = −Id`; both clauses of the
/// criterion then hold simultaneously.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonodromyVerdict {
    NotMonodromy,
    MonodromyPlus,
    MonodromyMinus,
    MonodromyPlusMinus,
}

impl MonodromyVerdict {
    /// `R_e` is a monodromy operator acting as `+Id` on the discriminant group.
    pub fn is_plus(self) -> bool {
        matches!(
            self,
            MonodromyVerdict::MonodromyPlus | MonodromyVerdict::MonodromyPlusMinus
        )
    }

    /// `R_e` is a monodromy operator acting as `−Id` on the discriminant group.
    pub fn is_minus(self) -> bool {
        matches!(
            self,
            MonodromyVerdict::MonodromyMinus | MonodromyVerdict::MonodromyPlusMinus
        )
    }

    pub fn is_monodromy(self) -> bool {
        !matches!(self, MonodromyVerdict::NotMonodromy)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MonodromyVerdict::NotMonodromy => "not_monodromy",
            MonodromyVerdict::MonodromyPlus => "monodromy_plus",
            MonodromyVerdict::MonodromyMinus => "monodromy_minus",
            MonodromyVerdict::MonodromyPlusMinus => "monodromy_plus_minus",
        }
    }
}

/// Induced action of an isometry on a discriminant group, classified against
/// `±Id`.  `PlusMinusId` is reported when the group has exponent ≤ 2, where
/// the two coincide.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DiscAction {
    PlusId,
    MinusId,
    PlusMinusId,
    Other,
}

impl DiscAction {
    pub fn is_plus_id(self) -> bool {
        matches!(self, DiscAction::PlusId | DiscAction::PlusMinusId)
    }

    pub fn is_minus_id(self) -> bool {
        matches!(self, DiscAction::MinusId | DiscAction::PlusMinusId)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DiscAction::PlusId => "plus_id",
            DiscAction::MinusId => "minus_id",
            DiscAction::PlusMinusId => "plus_minus_id",
            DiscAction::Other => "other",
        }
    }
}

/// The rank-24 Mukai lattice `U⁴ ⊕ E₈(−1)²` with a verified primitive
/// embedding of the algebraic part.
#[derive(Clone, Debug)]
pub struct FullMukaiLattice {
    lattice: GramLattice,
    embedding: IntMat,
    alg: AlgMukaiLattice,
}

/// Gram of the full Mukai lattice: four hyperbolic planes followed by two
/// copies of `E₈(−1)`.
pub fn full_mukai_gram() -> IntMat {
    let mut g = IntMat::zeros(24, 24);
    for b in 0..4 {
        g[(2 * b, 2 * b + 1)] = BigInt::one();
        g[(2 * b + 1, 2 * b)] = BigInt::one();
    }
    // E8 Cartan matrix, Bourbaki numbering, negated.
    let bonds = [(0, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    for copy in 0..2 {
        let off = 8 + 8 * copy;
        for i in 0..8 {
            g[(off + i, off + i)] = BigInt::from(-2);
        }
        for &(a, b) in &bonds {
            g[(off + a, off + b)] = BigInt::one();
            g[(off + b, off + a)] = BigInt::one();
        }
    }
    g
}

impl FullMukaiLattice {
    /// Verifies that `embedding` (24 × ρ+2, columns are images of the
    /// algebraic basis) preserves pairings and has primitive image.
    pub fn new(alg: AlgMukaiLattice, embedding: IntMat) -> Result<Self> {
        let lattice = GramLattice::new(full_mukai_gram()).expect("Mukai gram");
        if embedding.rows() != 24 || embedding.cols() != alg.rank() {
            return Err(Error::DimensionMismatch {
                expected: alg.rank(),
                got: embedding.cols(),
            });
        }
        let pulled = embedding.transpose().mul(lattice.gram()).mul(&embedding);
        if &pulled != alg.lattice().gram() {
            return Err(Error::BadEmbedding);
        }
        let snf = embedding.smith_normal_form();
        if !snf.invariant_factors().iter().all(BigInt::is_one) || snf.rank() != alg.rank() {
            return Err(Error::BadEmbedding);
        }
        Ok(FullMukaiLattice {
            lattice,
            embedding,
            alg,
        })
    }

    /// The standard embedding for Picard rank 1: `(1,0,0)` and `(0,0,1)`
    /// land in the first hyperbolic plane, `D` in the second as `(1, d)`
    /// with `D² = 2d`.
    pub fn rank_one(ns: NsData) -> Result<Self> {
        if ns.rank() != 1 {
            return Err(Error::RankOneOnly { rank: ns.rank() });
        }
        let d2 = ns.d_squared();
        if d2.is_odd() {
            return Err(Error::OddDiagonal { index: 0 });
        }
        let d = &d2 / 2;
        let mut emb = IntMat::zeros(24, 3);
        emb[(0, 0)] = BigInt::one(); // (1,0,0) ↦ e of U₁
        emb[(2, 1)] = BigInt::one(); // D ↦ e + d·f of U₂
        emb[(3, 1)] = d;
        emb[(1, 2)] = -BigInt::one(); // (0,0,1) ↦ −f of U₁
        FullMukaiLattice::new(AlgMukaiLattice::new(ns), emb)
    }

    pub fn alg(&self) -> &AlgMukaiLattice {
        &self.alg
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn embedding(&self) -> &IntMat {
        &self.embedding
    }

    pub fn embed(&self, v: &MukaiVector) -> Result<Vec<BigInt>> {
        self.alg.check_vector(v)?;
        Ok(self.embedding.mul_vec(&v.coords()))
    }

    /// The rank-23 orthogonal complement of `v` with its Gram matrix.
    pub fn vperp(&self, v: &MukaiVector) -> Result<VPerp> {
        let v_full = self.embed(v)?;
        if matrix::is_zero_vec(&v_full) {
            return Err(Error::ZeroVector);
        }
        let pairings = self.lattice.gram().mul_vec(&v_full);
        let row = IntMat::from_rows(vec![pairings])?;
        let basis = Sublattice::from_basis_mat(row.kernel(), 24)?;
        let gram = self.lattice.sublattice_gram(&basis)?;
        Ok(VPerp {
            basis,
            gram,
            v_full,
        })
    }

    /// Divisibility of `e` inside the lattice `v⊥ ⊂ U⁴ ⊕ E₈(−1)²`.
    pub fn divisibility_in_vperp(&self, v: &MukaiVector, e: &MukaiVector) -> Result<BigInt> {
        let ev = self.alg.pairing(e, v)?;
        if !ev.is_zero() {
            return Err(Error::NotOrthogonal { pairing: ev });
        }
        self.divisibility_in_vperp_inner(v, e)
    }

    /// Markman's criterion: for a primitive `e ∈ v⊥` with `e² < 0`, the
    /// reflection `R_e` is a monodromy operator iff `e² = −2` (acting as
    /// `+Id` on the discriminant group) or `e² = 2−2n` with `(n−1)`
    /// dividing `(e,·)` on `v⊥` (acting as `−Id`).
    pub fn markman_monodromy_test(
        &self,
        v: &MukaiVector,
        e: &MukaiVector,
    ) -> Result<MonodromyVerdict> {
        self.alg.check_vector(v)?;
        self.alg.check_vector(e)?;
        let vc = v.content();
        if !vc.is_one() {
            return Err(Error::NotPrimitive { content: vc });
        }
        let v_sq = self.alg.square(v)?;
        if v_sq < BigInt::from(2) {
            return Err(Error::SquareTooSmall { v_sq });
        }
        let n_minus_1: BigInt = &v_sq / 2; // v² = 2n−2
        let ev = self.alg.pairing(e, v)?;
        if !ev.is_zero() {
            return Err(Error::NotOrthogonal { pairing: ev });
        }
        let ec = e.content();
        if !ec.is_one() {
            return Err(Error::NotPrimitive { content: ec });
        }
        let e_sq = self.alg.square(e)?;
        if !e_sq.is_negative() {
            return Err(Error::TargetNotNegative { target: e_sq });
        }
        let plus = e_sq == BigInt::from(-2);
        let minus = if e_sq == -&v_sq {
            let div = self.divisibility_in_vperp_inner(v, e)?;
            div.is_multiple_of(&n_minus_1)
        } else {
            false
        };
        Ok(match (plus, minus) {
            (true, true) => MonodromyVerdict::MonodromyPlusMinus,
            (true, false) => MonodromyVerdict::MonodromyPlus,
            (false, true) => MonodromyVerdict::MonodromyMinus,
            (false, false) => MonodromyVerdict::NotMonodromy,
        })
    }

    fn divisibility_in_vperp_inner(&self, v: &MukaiVector, e: &MukaiVector) -> Result<BigInt> {
        let vp = self.vperp(v)?;
        let e_full = self.embed(e)?;
        let ge = self.lattice.gram().mul_vec(&e_full);
        let pairings = vp.basis.basis().mul_vec(&ge);
        Ok(matrix::content(&pairings))
    }

    /// Restriction of a full-lattice isometry to `v⊥`, as a matrix acting on
    /// coordinate columns in the `vperp` basis.
    pub fn restrict_to_vperp(&self, g: &IntegralIsometry, v: &MukaiVector) -> Result<IntMat> {
        let vp = self.vperp(v)?;
        self.restrict_to_basis(g, &vp)
    }

    fn restrict_to_basis(&self, g: &IntegralIsometry, vp: &VPerp) -> Result<IntMat> {
        let k = vp.basis.rank();
        let mut cols = IntMat::zeros(k, k);
        for i in 0..k {
            let b = vp.basis.basis().row_vec(i);
            let gb = g.apply(&b);
            let pair_with_v = matrix::dot(&self.lattice.gram().mul_vec(&vp.v_full), &gb);
            if !pair_with_v.is_zero() {
                return Err(Error::DoesNotPreserveVPerp);
            }
            let coords = vp
                .basis
                .coordinates_of(&gb)
                .map_err(|_| Error::DoesNotPreserveVPerp)?;
            for (j, c) in coords.into_iter().enumerate() {
                cols[(j, i)] = c; // column i = image of basis vector i
            }
        }
        Ok(cols)
    }

    /// The reflection `R_e` restricted to `v⊥` (coordinate-column action),
    /// or an error when it is not integral there.
    pub fn reflection_in_vperp(&self, v: &MukaiVector, e: &MukaiVector) -> Result<IntMat> {
        let vp = self.vperp(v)?;
        let e_full = self.embed(e)?;
        let e_sq = self.alg.square(e)?;
        if e_sq.is_zero() {
            return Err(Error::ReflectionSquareZero);
        }
        let k = vp.basis.rank();
        let ge = self.lattice.gram().mul_vec(&e_full);
        let mut cols = IntMat::zeros(k, k);
        for i in 0..k {
            let b = vp.basis.basis().row_vec(i);
            let num: BigInt = 2 * matrix::dot(&ge, &b);
            if !num.is_multiple_of(&e_sq) {
                let g = num.gcd(&e_sq);
                return Err(Error::NonIntegralReflection {
                    denominator: (&e_sq / g).abs(),
                });
            }
            let c = &num / &e_sq;
            let image: Vec<BigInt> = b.iter().zip(&e_full).map(|(bi, ei)| bi - &c * ei).collect();
            let coords = vp
                .basis
                .coordinates_of(&image)
                .map_err(|_| Error::DoesNotPreserveVPerp)?;
            for (j, cj) in coords.into_iter().enumerate() {
                cols[(j, i)] = cj;
            }
        }
        Ok(cols)
    }

    /// Unique extension of an isometry `g` of `v⊥` acting as `ε·id` on its
    /// discriminant group to the full Mukai lattice, with `v ↦ ε·v`.
    ///
    /// `g` is given as a coordinate-column action in the `vperp` basis.
    pub fn extend_to_full(
        &self,
        v: &MukaiVector,
        g: &IntMat,
        eps: Sign,
    ) -> Result<IntegralIsometry> {
        let vp = self.vperp(v)?;
        let k = vp.basis.rank();
        if g.rows() != k || g.cols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: g.rows(),
            });
        }
        if &g.transpose().mul(vp.gram.gram()).mul(g) != vp.gram.gram() {
            return Err(Error::NotAnIsometry);
        }
        // The extension recipe needs the discriminant action to be ε·id.
        let disc = vp.gram.discriminant_group()?;
        let g_rat = RatMat::from_int(g);
        let eps_rat = BigRational::from(BigInt::from(eps.as_int()));
        for gen in disc.generators() {
            let image = g_rat.mul_vec(gen);
            let ok = image
                .iter()
                .zip(gen)
                .all(|(a, b)| (a - &eps_rat * b).is_integer());
            if !ok {
                return Err(Error::DiscActionMismatch { eps: eps.as_int() });
            }
        }
        // Reconstruct over ℚ: each standard basis vector splits as
        // x = a + β·v with a ∈ v⊥ ⊗ ℚ; send x ↦ g(a) + ε·β·v.
        let b_rat = RatMat::from_int(vp.basis.basis());
        let gram_rat = RatMat::from_int(self.lattice.gram());
        let bgb = RatMat::from_int(vp.gram.gram());
        let bgb_inv = bgb.inverse().ok_or(Error::DegenerateGram)?;
        let v_sq = BigRational::from(matrix::dot(
            &self.lattice.gram().mul_vec(&vp.v_full),
            &vp.v_full,
        ));
        let v_rat: Vec<BigRational> = vp
            .v_full
            .iter()
            .map(|x| BigRational::from(x.clone()))
            .collect();
        let gv: Vec<BigRational> = self
            .lattice
            .gram()
            .mul_vec(&vp.v_full)
            .into_iter()
            .map(BigRational::from)
            .collect();
        let mut full = RatMat::zeros(24, 24);
        for i in 0..24 {
            let beta = &gv[i] / &v_sq;
            // a = e_i − β v in ambient rationals
            let a: Vec<BigRational> = (0..24)
                .map(|j| {
                    let mut t = -&beta * &v_rat[j];
                    if j == i {
                        t += BigRational::one();
                    }
                    t
                })
                .collect();
            // coordinates of a in the v⊥ basis: y = (a · G · Bᵀ) · (B G Bᵀ)⁻¹
            let ga = gram_rat.mul_vec(&a);
            let mut agb = vec![BigRational::zero(); k];
            for (c, val) in agb.iter_mut().enumerate() {
                *val = (0..24).map(|j| &b_rat[(c, j)] * &ga[j]).sum();
            }
            let mut y = vec![BigRational::zero(); k];
            for (c, val) in y.iter_mut().enumerate() {
                *val = (0..k).map(|j| &agb[j] * &bgb_inv[(j, c)]).sum();
            }
            let gy = g_rat.mul_vec(&y);
            // image of e_i = Σ gy_j · b_j + ε β v
            for col in 0..24 {
                let mut acc = &eps_rat * &beta * &v_rat[col];
                for j in 0..k {
                    acc += &gy[j] * &b_rat[(j, col)];
                }
                full[(col, i)] = acc;
            }
        }
        let int = full.to_int_mat().ok_or_else(|| {
            Error::Internal("extension failed to be integral after ε·id check".into())
        })?;
        let iso = self.lattice.isometry(int)?;
        // v ↦ ε v
        let v_image = iso.apply(&vp.v_full);
        let expect: Vec<BigInt> = vp
            .v_full
            .iter()
            .map(|x| x * BigInt::from(eps.as_int()))
            .collect();
        if v_image != expect {
            return Err(Error::Internal("extension does not send v to ε·v".into()));
        }
        // restriction back to v⊥ must equal the input
        let back = self.restrict_to_basis(&iso, &vp)?;
        if &back != g {
            return Err(Error::Internal(
                "extension does not restrict to the input isometry".into(),
            ));
        }
        Ok(iso)
    }

    /// Classifies the action induced on the discriminant group of `v⊥` by a
    /// full-lattice isometry that preserves `v⊥` setwise.
    pub fn disc_action(&self, g: &IntegralIsometry, v: &MukaiVector) -> Result<DiscAction> {
        let vp = self.vperp(v)?;
        let g_b = self.restrict_to_basis(g, &vp)?;
        let disc = vp.gram.discriminant_group()?;
        if disc.is_trivial() {
            return Ok(DiscAction::PlusMinusId);
        }
        let g_rat = RatMat::from_int(&g_b);
        let mut all_plus = true;
        let mut all_minus = true;
        for gen in disc.generators() {
            let image = g_rat.mul_vec(gen);
            if !image.iter().zip(gen).all(|(a, b)| (a - b).is_integer()) {
                all_plus = false;
            }
            if !image.iter().zip(gen).all(|(a, b)| (a + b).is_integer()) {
                all_minus = false;
            }
        }
        Ok(match (all_plus, all_minus) {
            (true, true) => DiscAction::PlusMinusId,
            (true, false) => DiscAction::PlusId,
            (false, true) => DiscAction::MinusId,
            (false, false) => DiscAction::Other,
        })
    }
}

pub struct VPerp {
    pub basis: Sublattice,
    pub gram: GramLattice,
    pub v_full: Vec<BigInt>,
}

/// Primitive direction and content of a nonzero θ: `θ = c·D` with `D`
/// primitive, sign normalized so the first nonzero coordinate of `D` is
/// positive; `c` carries the sign.
pub fn theta_decompose(theta: &[BigInt]) -> Option<(BigInt, Vec<BigInt>)> {
    if matrix::is_zero_vec(theta) {
        return None;
    }
    let g = matrix::content(theta);
    let mut d: Vec<BigInt> = theta.iter().map(|t| t / &g).collect();
    let mut c = g;
    if let Some(first) = d.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            d = matrix::neg_vec(&d);
            c = -c;
        }
    }
    Some((c, d))
}

pub fn display_vec(v: &[BigInt]) -> String {
    let mut s = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&format!("{x}"));
    }
    s.push(')');
    s
}
