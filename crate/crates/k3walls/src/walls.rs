//! The vertical wall of a Mukai vector and its classification.
//!
//! For `v = (r, θ, s)` with `r > 0` and `v² ≥ 2`, the vertical wall is
//! carried by the rank-2 hyperbolic lattice `H`, the saturation of
//! `⟨v, (0,0,1)⟩` inside the algebraic Mukai lattice.  This module decides:
//!
//! * condition (*): `r | 2c·(D·L)/div(L)` for all `L ∈ NS` together with
//!   `gcd(r,s) ∈ {1,2}` — exactly when the reflection `R_e` in the wall is
//!   a monodromy operator acting as `−Id` on the discriminant group;
//! * the wall type, by exhaustive finite enumeration of the numerical wall
//!   criteria inside `H` (and, over rank-1 NS, by a closed form that the
//!   enumeration cross-checks);
//! * existence of the induced symplectic birational involution;
//! * the Fourier–Mukai reduction sending an isotropic class of `H` to the
//!   `(0,0,1)` slot, which renormalizes any qualifying wall to a vertical
//!   wall of rank 1 or 2.

use alloc::{format, vec, vec::Vec};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{GramLattice, Sublattice};
use crate::matrix::{self, IntMat};
use crate::mukai::{
    theta_decompose, AlgMukaiLattice, DiscAction, FullMukaiLattice, MonodromyVerdict, MukaiVector,
    Sign,
};

/// Default coordinate box for the bounded higher-rank check of (*).
pub const DEFAULT_STAR_BOUND: u32 = 20;

/// The vertical wall data of a Mukai vector.
#[derive(Clone, Debug)]
pub struct VerticalWall {
    /// `θ = c·D` with `D` primitive (`c = 0` and `D` the distinguished NS
    /// class when `θ = 0`).
    pub c: BigInt,
    pub d_class: Vec<BigInt>,
    /// Rank-2 saturation of `⟨v, (0,0,1)⟩`, Hermite-canonical basis rows in
    /// algebraic Mukai coordinates.
    pub basis: Sublattice,
    /// Gram matrix of the wall lattice in that basis; signature (1,1).
    pub gram: GramLattice,
    /// Coordinates of `v` in the wall basis.
    pub v_h: Vec<BigInt>,
    /// Index of `⟨v, (0,0,1)⟩` inside its saturation.
    pub saturation_index: BigInt,
}

impl VerticalWall {
    /// Lifts wall coordinates to an ambient Mukai vector.
    pub fn ambient(&self, h_coords: &[BigInt]) -> Result<MukaiVector> {
        MukaiVector::from_coords(&self.basis.ambient(h_coords))
    }

    /// Wall coordinates of an ambient Mukai vector lying in the wall.
    pub fn h_coords(&self, v: &MukaiVector) -> Result<Vec<BigInt>> {
        self.basis.coordinates_of(&v.coords())
    }
}

pub fn build_vertical(alg: &AlgMukaiLattice, v: &MukaiVector) -> Result<VerticalWall> {
    alg.check_vector(v)?;
    if v.r.is_zero() {
        return Err(Error::RankZero);
    }
    if v.r.is_negative() {
        return Err(Error::RankNegative { r: v.r.clone() });
    }
    let content = v.content();
    if !content.is_one() {
        return Err(Error::NotPrimitive { content });
    }
    let v_sq = alg.square(v)?;
    if v_sq < BigInt::from(2) {
        return Err(Error::SquareTooSmall { v_sq });
    }
    let (c, d_class) = match theta_decompose(&v.theta) {
        Some((c, d)) => (c, d),
        None => (BigInt::zero(), alg.ns().d().to_vec()),
    };
    let unit = alg.unit_point();
    let span = alg.lattice().sublattice(vec![v.coords(), unit.coords()])?;
    let span_gram = alg.lattice().sublattice_gram(&span)?;
    let hw = alg.lattice().saturate(&span)?;
    let gram = alg.lattice().sublattice_gram(&hw)?;
    let (plus, minus) = gram.signature()?;
    if (plus, minus) != (1, 1) {
        return Err(Error::Internal(format!(
            "vertical wall lattice has signature ({plus},{minus})"
        )));
    }
    let v_h = hw
        .coordinates_of(&v.coords())
        .map_err(|_| Error::Internal("v missing from its own wall lattice".into()))?;
    let ratio = span_gram.det() / gram.det();
    let saturation_index = ratio.sqrt();
    if &saturation_index * &saturation_index != ratio {
        return Err(Error::Internal(format!(
            "saturation index² = {ratio} is not a perfect square"
        )));
    }
    Ok(VerticalWall {
        c,
        d_class,
        basis: hw,
        gram,
        v_h,
        saturation_index,
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StarVerdict {
    Yes,
    No,
    /// No counterexample among primitive `L` with coordinates in `[−B, B]`.
    YesUpToBound(u32),
}

impl StarVerdict {
    /// Treats a bounded scan without counterexample as holding.
    pub fn holds(&self) -> bool {
        !matches!(self, StarVerdict::No)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, StarVerdict::YesUpToBound(_))
    }
}

/// Verdict and witness data for condition (*).
#[derive(Clone, Debug)]
pub struct StarReport {
    pub verdict: StarVerdict,
    /// Whether the exact rank-1 reduction `r | 2c ∧ gcd(r,s) ∈ {1,2}` was
    /// used.
    pub rank1_reduction_used: bool,
    pub gcd_rs: BigInt,
    /// A class `L` violating `r | 2c(D·L)/div(L)`, when one was found.
    pub failing_l: Option<Vec<BigInt>>,
    pub c: BigInt,
    pub d_class: Vec<BigInt>,
    /// The implied divisibility `r | c·D²` (a consequence of (*), reported
    /// as a consistency check and used as an exact necessary condition).
    pub r_divides_c_d2: bool,
}

pub fn check_star(alg: &AlgMukaiLattice, v: &MukaiVector) -> Result<StarReport> {
    check_star_bounded(alg, v, DEFAULT_STAR_BOUND)
}

pub fn check_star_bounded(
    alg: &AlgMukaiLattice,
    v: &MukaiVector,
    bound: u32,
) -> Result<StarReport> {
    alg.check_vector(v)?;
    if v.r.is_zero() {
        return Err(Error::RankZero);
    }
    if v.r.is_negative() {
        return Err(Error::RankNegative { r: v.r.clone() });
    }
    let content = v.content();
    if !content.is_one() {
        return Err(Error::NotPrimitive { content });
    }
    let ns = alg.ns().lattice();
    let rho = alg.ns().rank();
    let (c, d_class) = match theta_decompose(&v.theta) {
        Some((c, d)) => (c, d),
        None => (BigInt::zero(), alg.ns().d().to_vec()),
    };
    let gcd_rs = v.r.gcd(&v.s);
    let gcd_ok = gcd_rs == BigInt::one() || gcd_rs == BigInt::from(2);
    let d_sq = ns.square(&d_class)?;
    let r_divides_c_d2 = (&c * &d_sq).is_multiple_of(&v.r);

    if rho == 1 {
        let twice_c: BigInt = 2 * &c;
        let divides = twice_c.is_multiple_of(&v.r);
        let verdict = if divides && gcd_ok {
            StarVerdict::Yes
        } else {
            StarVerdict::No
        };
        let failing_l = if divides { None } else { Some(d_class.clone()) };
        return Ok(StarReport {
            verdict,
            rank1_reduction_used: true,
            gcd_rs,
            failing_l,
            c,
            d_class,
            r_divides_c_d2,
        });
    }

    // Higher rank.  gcd(r,s) and the necessary condition r | cD² are exact;
    // the universally quantified divisibility is scanned over a box.
    if !gcd_ok {
        return Ok(StarReport {
            verdict: StarVerdict::No,
            rank1_reduction_used: false,
            gcd_rs,
            failing_l: None,
            c,
            d_class,
            r_divides_c_d2,
        });
    }
    if c.is_zero() {
        // (*) degenerates to the gcd condition, exactly.
        return Ok(StarReport {
            verdict: StarVerdict::Yes,
            rank1_reduction_used: false,
            gcd_rs,
            failing_l: None,
            c,
            d_class,
            r_divides_c_d2,
        });
    }
    if !r_divides_c_d2 {
        return Ok(StarReport {
            verdict: StarVerdict::No,
            rank1_reduction_used: false,
            gcd_rs,
            failing_l: None,
            c,
            d_class,
            r_divides_c_d2,
        });
    }
    let b = BigInt::from(bound);
    let mut l = vec![-&b; rho];
    let mut failing = None;
    'scan: loop {
        // skip 0, non-primitive and sign-duplicate vectors
        let first_nonzero = l.iter().find(|x| !x.is_zero());
        let skip = match first_nonzero {
            None => true,
            Some(f) => f.is_negative() || !matrix::content(&l).is_one(),
        };
        if !skip {
            let dl = ns.pairing(&d_class, &l)?;
            let div_l = ns.divisibility(&l)?;
            let val: BigInt = 2 * &c * (&dl / &div_l);
            if !val.is_multiple_of(&v.r) {
                failing = Some(l.clone());
                break 'scan;
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == rho {
                break 'scan;
            }
            l[i] += 1;
            if l[i] <= b {
                break;
            }
            l[i] = -&b;
            i += 1;
        }
    }
    let verdict = match &failing {
        Some(_) => StarVerdict::No,
        None => StarVerdict::YesUpToBound(bound),
    };
    Ok(StarReport {
        verdict,
        rank1_reduction_used: false,
        gcd_rs,
        failing_l: failing,
        c,
        d_class,
        r_divides_c_d2,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WallKind {
    Divisorial,
    Flopping,
    FakeOrNoWall,
}

impl WallKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WallKind::Divisorial => "Divisorial",
            WallKind::Flopping => "Flopping",
            WallKind::FakeOrNoWall => "FakeOrNoWall",
        }
    }
}

/// Certifying class(es) for a wall verdict, in wall-basis coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    /// `s ⊥ v`, `s² = −2` (divisorial).
    OrthogonalSpherical { class: Vec<BigInt> },
    /// Isotropic `w` with `(w,v) ∈ {1,2}` (divisorial).
    IsotropicPairing { class: Vec<BigInt>, pairing: BigInt },
    /// `v = a₁ + a₂` with `aᵢ² ≥ 0`, `(aᵢ,v) > 0` (flopping).
    Decomposition { a1: Vec<BigInt>, a2: Vec<BigInt> },
    /// Spherical `s` with `0 < (s,v) ≤ v²/2` (flopping).
    SphericalSmallPairing { class: Vec<BigInt>, pairing: BigInt },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    ClosedForm,
    Enumeration,
}

#[derive(Clone, Debug)]
pub struct WallClassification {
    pub kind: WallKind,
    pub witness: Option<Witness>,
    pub method: Method,
}

impl WallClassification {
    fn checked(
        h: &GramLattice,
        v: &[BigInt],
        kind: WallKind,
        witness: Option<Witness>,
        method: Method,
    ) -> Result<Self> {
        if let Some(w) = &witness {
            validate_witness(h, v, w)?;
        }
        Ok(WallClassification {
            kind,
            witness,
            method,
        })
    }
}

/// Re-verifies the pairing identities a witness asserts.
fn validate_witness(h: &GramLattice, v: &[BigInt], w: &Witness) -> Result<()> {
    let fail = |msg: alloc::string::String| Err(Error::Internal(msg));
    let v_sq = h.square(v)?;
    match w {
        Witness::OrthogonalSpherical { class } => {
            if h.square(class)? != BigInt::from(-2) || !h.pairing(class, v)?.is_zero() {
                return fail(format!("orthogonal spherical witness fails: {class:?}"));
            }
        }
        Witness::IsotropicPairing { class, pairing } => {
            let p = h.pairing(class, v)?;
            if !h.square(class)?.is_zero()
                || &p != pairing
                || (p != BigInt::one() && p != BigInt::from(2))
            {
                return fail(format!("isotropic witness fails: {class:?}"));
            }
        }
        Witness::Decomposition { a1, a2 } => {
            let sum = matrix::add_vec(a1, a2);
            let p1 = h.pairing(a1, v)?;
            let p2 = h.pairing(a2, v)?;
            if &sum[..] != v
                || h.square(a1)?.is_negative()
                || h.square(a2)?.is_negative()
                || !p1.is_positive()
                || !p2.is_positive()
            {
                return fail(format!("decomposition witness fails: {a1:?} + {a2:?}"));
            }
        }
        Witness::SphericalSmallPairing { class, pairing } => {
            let p = h.pairing(class, v)?;
            if h.square(class)? != BigInt::from(-2)
                || &p != pairing
                || !p.is_positive()
                || 2 * &p > v_sq
            {
                return fail(format!("spherical witness fails: {class:?}"));
            }
        }
    }
    Ok(())
}

/// Exact wall-type decision on a rank-2 hyperbolic lattice by finite
/// enumeration.
///
/// Every class decomposes over ℚ as `s = (τ/v²)·v + (p/N)·u` where `u`
/// generates `v⊥ ∩ H`, `τ = (s,v)` and `N = [H : ℤv ⊕ ℤu]`.  Fixing `τ` and
/// the square `s²` pins `p²`, so each criterion reduces to finitely many
/// perfect-square and integrality checks.  Priority: divisorial witnesses
/// (orthogonal spherical, then isotropic of pairing 1, 2), then flopping
/// (spherical in the pairing window, then decompositions).
pub fn classify_enumerative(h: &GramLattice, v: &[BigInt]) -> Result<WallClassification> {
    let (plus, minus) = h.signature()?;
    if h.rank() != 2 || plus != 1 || minus != 1 {
        return Err(Error::NotHyperbolicRank2 {
            rank: h.rank(),
            plus,
            minus,
        });
    }
    if v.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: v.len(),
        });
    }
    let content = matrix::content(v);
    if !content.is_one() {
        return Err(Error::NotPrimitive { content });
    }
    let v_sq = h.square(v)?;
    if v_sq < BigInt::from(2) {
        return Err(Error::SquareTooSmall { v_sq });
    }
    // u spans v⊥ ∩ H
    let gv = h.gram().mul_vec(v);
    let mut u = vec![gv[1].clone(), -&gv[0]];
    let g = matrix::content(&u);
    u = vec![&u[0] / &g, &u[1] / &g];
    if u.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|f| f.is_negative())
    {
        u = matrix::neg_vec(&u);
    }
    let u_sq = h.square(&u)?;
    if !u_sq.is_negative() {
        return Err(Error::Internal("v⊥ ∩ H is not negative definite".into()));
    }
    let n_idx = (&v[0] * &u[1] - &v[1] * &u[0]).abs();
    let ctx = EnumCtx {
        h,
        v,
        u: &u,
        v_sq: &v_sq,
        u_sq: &u_sq,
        n_idx: &n_idx,
    };

    // (a) spherical class orthogonal to v: only ±u qualifies
    if u_sq == BigInt::from(-2) {
        return WallClassification::checked(
            h,
            v,
            WallKind::Divisorial,
            Some(Witness::OrthogonalSpherical { class: u.clone() }),
            Method::Enumeration,
        );
    }
    // (b) isotropic class with (w,v) = 1 or 2
    for tau in 1..=2u32 {
        let tau = BigInt::from(tau);
        if let Some(w) = ctx.classes_with(&tau, &BigInt::zero()).into_iter().next() {
            return WallClassification::checked(
                h,
                v,
                WallKind::Divisorial,
                Some(Witness::IsotropicPairing {
                    class: w,
                    pairing: tau,
                }),
                Method::Enumeration,
            );
        }
    }
    // (c) spherical class with 0 < (s,v) ≤ v²/2
    let half: BigInt = &v_sq / 2;
    let mut tau = BigInt::one();
    while tau <= half {
        if let Some(s) = ctx.classes_with(&tau, &BigInt::from(-2)).into_iter().next() {
            return WallClassification::checked(
                h,
                v,
                WallKind::Flopping,
                Some(Witness::SphericalSmallPairing {
                    class: s,
                    pairing: tau,
                }),
                Method::Enumeration,
            );
        }
        tau += 1;
    }
    // (d) decompositions v = a₁ + a₂ with aᵢ² ≥ 0, (aᵢ,v) > 0
    let mut alpha = BigInt::one();
    while alpha < v_sq {
        if let Some(a1) = ctx.decomposition_part(&alpha)? {
            let a2 = vec![&v[0] - &a1[0], &v[1] - &a1[1]];
            return WallClassification::checked(
                h,
                v,
                WallKind::Flopping,
                Some(Witness::Decomposition { a1, a2 }),
                Method::Enumeration,
            );
        }
        alpha += 1;
    }
    WallClassification::checked(h, v, WallKind::FakeOrNoWall, None, Method::Enumeration)
}

struct EnumCtx<'a> {
    h: &'a GramLattice,
    v: &'a [BigInt],
    u: &'a [BigInt],
    v_sq: &'a BigInt,
    u_sq: &'a BigInt,
    n_idx: &'a BigInt,
}

impl EnumCtx<'_> {
    /// Integral classes with `(s,v) = τ` and `s² = target`, as
    /// `(α·v + p·u)/N`; `p` is pinned up to sign by the square condition.
    fn classes_with(&self, tau: &BigInt, target: &BigInt) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        let alpha_num = self.n_idx * tau;
        if !alpha_num.is_multiple_of(self.v_sq) {
            return out;
        }
        let alpha = &alpha_num / self.v_sq;
        // p² = N²(target·v² − τ²) / (v²·u²)
        let num = self.n_idx * self.n_idx * (target * self.v_sq - tau * tau);
        let den = self.v_sq * self.u_sq;
        if !num.is_multiple_of(&den) {
            return out;
        }
        let p_sq = num / den;
        if p_sq.is_negative() {
            return out;
        }
        let p = p_sq.sqrt();
        if &p * &p != p_sq {
            return out;
        }
        let candidates: &[BigInt] = if p.is_zero() {
            &[BigInt::ZERO]
        } else {
            &[p.clone(), -&p][..]
        };
        let candidates = candidates.to_vec();
        for p in candidates {
            if let Some(s) = self.reconstruct(&alpha, &p) {
                out.push(s);
            }
        }
        out
    }

    /// First valid `a₁` for a decomposition with `(a₁,v) = α`, scanning the
    /// finite window `p² ≤ N²α²/(v²·(−u²))` imposed by `a₁² ≥ 0`.
    fn decomposition_part(&self, alpha: &BigInt) -> Result<Option<Vec<BigInt>>> {
        let alpha_num = self.n_idx * alpha;
        if !alpha_num.is_multiple_of(self.v_sq) {
            return Ok(None);
        }
        let alpha_scaled = &alpha_num / self.v_sq;
        let p_bound_num = self.n_idx * self.n_idx * alpha * alpha;
        let p_bound_den = self.v_sq * (-self.u_sq);
        let p_max = p_bound_num.div_floor(&p_bound_den).sqrt();
        let mut p = -&p_max;
        while p <= p_max {
            if let Some(a1) = self.reconstruct(&alpha_scaled, &p) {
                let a2 = vec![&self.v[0] - &a1[0], &self.v[1] - &a1[1]];
                let a2_sq = self.h.square(&a2)?;
                if !a2_sq.is_negative() {
                    return Ok(Some(a1));
                }
            }
            p += 1;
        }
        Ok(None)
    }

    fn reconstruct(&self, alpha_scaled: &BigInt, p: &BigInt) -> Option<Vec<BigInt>> {
        let raw = [
            alpha_scaled * &self.v[0] + p * &self.u[0],
            alpha_scaled * &self.v[1] + p * &self.u[1],
        ];
        if raw.iter().all(|x| x.is_multiple_of(self.n_idx)) {
            Some(vec![&raw[0] / self.n_idx, &raw[1] / self.n_idx])
        } else {
            None
        }
    }
}

/// Which clause of the divisorial classification fired (rank-1 closed form).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClosedFormCase {
    RankOne,
    RankTwo,
    /// `c = kr`, `s = (D²/2)k²r − m` with `m ∈ {1,2}`.
    SeriesM {
        k: BigInt,
        m: BigInt,
    },
    /// `D² ≡ 0 (mod 4)`, `v = (2a, maD, D²m²a/4 − 1)`, `m` odd.
    SeriesOne {
        a: BigInt,
        m: BigInt,
    },
    /// `D² ≡ 2 (mod 4)`, `v = (2a, maD, (D²m²a−2)/4)`, `a ≥ 3` odd, `m` odd.
    SeriesTwo {
        a: BigInt,
        m: BigInt,
    },
    Flopping,
}

impl ClosedFormCase {
    pub fn label(&self) -> &'static str {
        match self {
            ClosedFormCase::RankOne => "r=1",
            ClosedFormCase::RankTwo => "r=2",
            ClosedFormCase::SeriesM { .. } => "series m",
            ClosedFormCase::SeriesOne { .. } => "series 1",
            ClosedFormCase::SeriesTwo { .. } => "series 2",
            ClosedFormCase::Flopping => "flopping",
        }
    }
}

pub struct ClosedFormResult {
    pub classification: WallClassification,
    pub case: ClosedFormCase,
}

/// Closed-form wall type over rank-1 NS under condition (*): divisorial
/// exactly for `r ∈ {1,2}`, the `m ∈ {1,2}` series when `r | c`, and the
/// two even-rank series when `r ∤ c`; flopping otherwise (never fake).
pub fn classify_vertical_closed_form(
    alg: &AlgMukaiLattice,
    v: &MukaiVector,
) -> Result<ClosedFormResult> {
    let wall = build_vertical(alg, v)?;
    let star = check_star(alg, v)?;
    closed_form_with_wall(alg, v, &wall, &star)
}

fn closed_form_with_wall(
    alg: &AlgMukaiLattice,
    v: &MukaiVector,
    wall: &VerticalWall,
    star: &StarReport,
) -> Result<ClosedFormResult> {
    if alg.ns().rank() != 1 {
        return Err(Error::RankOneOnly {
            rank: alg.ns().rank(),
        });
    }
    if !star.verdict.holds() {
        return Err(Error::StarRequired);
    }
    let r = &v.r;
    let s = &v.s;
    let c = &star.c;
    let d_sq = alg.ns().lattice().square(&star.d_class)?;
    let two = BigInt::from(2);

    let divisorial =
        |case: ClosedFormCase, w: MukaiVector, pairing: BigInt| -> Result<ClosedFormResult> {
            let coords = wall.h_coords(&w).map_err(|_| {
                Error::Internal(format!("closed-form witness {w} outside the wall"))
            })?;
            let classification = WallClassification::checked(
                &wall.gram,
                &wall.v_h,
                WallKind::Divisorial,
                Some(Witness::IsotropicPairing {
                    class: coords,
                    pairing,
                }),
                Method::ClosedForm,
            )?;
            Ok(ClosedFormResult {
                classification,
                case,
            })
        };
    let flopping = || -> Result<ClosedFormResult> {
        // v = (v + (0,0,1)) + (0,0,−1) is a valid decomposition whenever
        // v² ≥ 2r, which (*) forces in every non-divisorial case.
        let w = v.add(&alg.unit_point());
        let t = alg.unit_point().neg();
        let a1 = wall
            .h_coords(&w)
            .map_err(|_| Error::Internal("v + (0,0,1) outside the wall".into()))?;
        let a2 = wall
            .h_coords(&t)
            .map_err(|_| Error::Internal("(0,0,1) outside the wall".into()))?;
        let classification = WallClassification::checked(
            &wall.gram,
            &wall.v_h,
            WallKind::Flopping,
            Some(Witness::Decomposition { a1, a2 }),
            Method::ClosedForm,
        )?;
        Ok(ClosedFormResult {
            classification,
            case: ClosedFormCase::Flopping,
        })
    };

    if r.is_one() || *r == two {
        let w = alg.unit_point().neg();
        let case = if r.is_one() {
            ClosedFormCase::RankOne
        } else {
            ClosedFormCase::RankTwo
        };
        return divisorial(case, w, r.clone());
    }
    if c.is_multiple_of(r) {
        let k = c / r;
        let t_val = (&d_sq / &two) * &k * &k * r;
        let m = &t_val - s;
        if m.is_one() || m == two {
            // witness w = (1, kD, k²D²/2), (w,v) = m
            let theta: Vec<BigInt> = star.d_class.iter().map(|d| &k * d).collect();
            let w = MukaiVector::new(BigInt::one(), theta, &k * &k * (&d_sq / &two));
            return divisorial(ClosedFormCase::SeriesM { k, m: m.clone() }, w, m);
        }
        return flopping();
    }
    // r ∤ c: under (*) r is even and m = 2c/r is odd
    if r.is_odd() {
        return Err(Error::Internal(
            "condition (*) with r ∤ c forces r even".into(),
        ));
    }
    let a = r / &two;
    let m: BigInt = (2 * c) / r;
    if m.is_even() {
        return Err(Error::Internal("r ∤ c forces m = 2c/r odd".into()));
    }
    let d_mod_4 = d_sq.mod_floor(&BigInt::from(4));
    if d_mod_4.is_zero() {
        let expected_s = (&d_sq * &m * &m * &a) / BigInt::from(4) - BigInt::one();
        if s == &expected_s {
            // witness w = (2, mD, m²D²/4), (w,v) = 2
            let theta: Vec<BigInt> = star.d_class.iter().map(|d| &m * d).collect();
            let w = MukaiVector::new(two.clone(), theta, (&m * &m * &d_sq) / BigInt::from(4));
            return divisorial(ClosedFormCase::SeriesOne { a, m }, w, two);
        }
        return flopping();
    }
    // D² ≡ 2 (mod 4)
    if a.is_odd() {
        let num = &d_sq * &m * &m * &a - &two;
        if num.is_multiple_of(&BigInt::from(4)) && s == &(&num / BigInt::from(4)) {
            // witness w = (4, 2mD, (D²/2)m²), (w,v) = 2
            let theta: Vec<BigInt> = star.d_class.iter().map(|d| 2 * &m * d).collect();
            let w = MukaiVector::new(BigInt::from(4), theta, (&d_sq / &two) * &m * &m);
            return divisorial(ClosedFormCase::SeriesTwo { a, m }, w, two);
        }
    }
    flopping()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NoInvolutionReason {
    /// Condition (*) fails: the reflection is not a monodromy operator
    /// acting as −Id.
    StarFails,
    /// The vertical wall is divisorial, so the reflection is exceptional
    /// rather than birational.
    DivisorialWall { case: Option<ClosedFormCase> },
    /// Bounded (*) scan passed but `e` is imprimitive (higher-rank NS only).
    EClassNotPrimitive,
}

/// Complete vertical-wall analysis of a Mukai vector, as produced by
/// [`decide_involution`].
pub struct VerticalAnalysis {
    /// The analyzed vector, after the shift normalization when `r < 0`.
    pub v: MukaiVector,
    /// Whether the input had `r < 0` and was replaced by `−v`.
    pub shift_applied: bool,
    pub wall: VerticalWall,
    pub star: StarReport,
    /// Enumerative classification (exact, any NS rank).
    pub classification: WallClassification,
    /// Closed form, when applicable (rank-1 NS and (*) holds); always
    /// cross-checked against the enumeration.
    pub closed_form: Option<ClosedFormResult>,
    pub e: Option<MukaiVector>,
    pub e_integral: bool,
    pub e_primitive: Option<bool>,
    /// Markman verdict for `R_e`, when a full-lattice embedding is at hand.
    pub monodromy: Option<MonodromyVerdict>,
    /// Discriminant action of the extended reflection, when computable.
    pub disc_action: Option<DiscAction>,
    pub involution: bool,
    pub reason: Option<NoInvolutionReason>,
}

/// Decides whether the reflection in the vertical wall of `v` is induced by
/// a symplectic birational involution: exactly when (*) holds and the wall
/// is flopping.  With a full-lattice embedding available the Markman
/// monodromy verdict and the discriminant action of the extended reflection
/// are computed and cross-checked.
pub fn decide_involution(
    alg: &AlgMukaiLattice,
    v: &MukaiVector,
    full: Option<&FullMukaiLattice>,
) -> Result<VerticalAnalysis> {
    decide_involution_bounded(alg, v, full, DEFAULT_STAR_BOUND)
}

pub fn decide_involution_bounded(
    alg: &AlgMukaiLattice,
    v: &MukaiVector,
    full: Option<&FullMukaiLattice>,
    star_bound: u32,
) -> Result<VerticalAnalysis> {
    // normalize r > 0 by the shift, the standing assumption for walls;
    // v and −v carry the same wall
    let (v_owned, shift_applied) = if v.r.is_negative() {
        (v.neg(), true)
    } else {
        (v.clone(), false)
    };
    let v = &v_owned;
    let wall = build_vertical(alg, v)?;
    let star = check_star_bounded(alg, v, star_bound)?;
    let classification = classify_enumerative(&wall.gram, &wall.v_h)?;
    let closed_form = if alg.ns().rank() == 1 && star.verdict.holds() {
        let cf = closed_form_with_wall(alg, v, &wall, &star)?;
        if cf.classification.kind != classification.kind {
            return Err(Error::Internal(format!(
                "closed form says {} but enumeration says {} for v = {v}",
                cf.classification.kind.as_str(),
                classification.kind.as_str()
            )));
        }
        Some(cf)
    } else {
        None
    };

    let (e, e_integral, e_primitive) = match alg.compute_e(v) {
        Ok(ec) => (Some(ec.e), true, Some(ec.primitive)),
        Err(Error::NonIntegralE { .. }) => (None, false, None),
        Err(other) => return Err(other),
    };

    let star_yes = star.verdict.holds();
    if star_yes && !e_integral {
        return Err(Error::Internal(
            "condition (*) holds but e is not integral; r | cD² should force integrality".into(),
        ));
    }
    if star_yes && classification.kind == WallKind::FakeOrNoWall {
        return Err(Error::Internal(
            "under (*) the vertical wall must be divisorial or flopping".into(),
        ));
    }

    let (involution, reason) = if !star_yes {
        (false, Some(NoInvolutionReason::StarFails))
    } else if classification.kind == WallKind::Divisorial {
        let case = closed_form.as_ref().map(|cf| cf.case.clone());
        (false, Some(NoInvolutionReason::DivisorialWall { case }))
    } else if e_primitive != Some(true) {
        if star.verdict.is_exact() {
            return Err(Error::Internal(
                "exact (*) holds but e is imprimitive, contradicting the divisibility lemma".into(),
            ));
        }
        (false, Some(NoInvolutionReason::EClassNotPrimitive))
    } else {
        (true, None)
    };

    let mut monodromy = None;
    let mut disc_action = None;
    if let (Some(full), Some(e_vec), Some(true)) = (full, e.as_ref(), e_primitive) {
        let verdict = full.markman_monodromy_test(v, e_vec)?;
        if star_yes && !verdict.is_minus() {
            return Err(Error::Internal(format!(
                "(*) holds but the rank-24 divisibility test says {} for v = {v}",
                verdict.as_str()
            )));
        }
        if !star_yes && star.verdict.is_exact() && verdict.is_minus() {
            return Err(Error::Internal(format!(
                "(*) fails exactly but the rank-24 divisibility test says {} for v = {v}",
                verdict.as_str()
            )));
        }
        if verdict.is_minus() {
            let refl = full.reflection_in_vperp(v, e_vec)?;
            let ext = full.extend_to_full(v, &refl, Sign::Minus)?;
            disc_action = Some(full.disc_action(&ext, v)?);
        } else if verdict.is_plus() {
            let refl = full.reflection_in_vperp(v, e_vec)?;
            let ext = full.extend_to_full(v, &refl, Sign::Plus)?;
            disc_action = Some(full.disc_action(&ext, v)?);
        }
        monodromy = Some(verdict);
    }

    Ok(VerticalAnalysis {
        v: v_owned,
        shift_applied,
        wall,
        star,
        classification,
        closed_form,
        e,
        e_integral,
        e_primitive,
        monodromy,
        disc_action,
        involution,
        reason,
    })
}

/// Result of the Fourier–Mukai basis change sending an isotropic class to
/// the `(0,0,1)` slot of the wall lattice.
#[derive(Clone, Debug)]
pub struct FmReduction {
    /// `|(v, w)|`: the rank of the reduced Mukai vector.
    pub r_prime: BigInt,
    /// Rows of the new basis in old wall coordinates (unimodular).
    pub basis_change: IntMat,
    /// The wall Gram matrix in the new basis.
    pub new_gram: GramLattice,
    /// `v` in the new basis.
    pub v_prime: Vec<BigInt>,
    /// `w` in the new basis: always `(0, 1)`.
    pub w_image: Vec<BigInt>,
}

/// Changes basis of the rank-2 wall lattice so that the primitive isotropic
/// class `w` becomes the second basis vector.  Determinant and wall type are
/// invariant under the change.
pub fn fm_reduce(h: &GramLattice, v: &[BigInt], w: &[BigInt]) -> Result<FmReduction> {
    if h.rank() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: h.rank(),
        });
    }
    if v.len() != 2 || w.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: v.len().max(w.len()),
        });
    }
    if matrix::is_zero_vec(w) {
        return Err(Error::ZeroVector);
    }
    let content = matrix::content(w);
    if !content.is_one() {
        return Err(Error::NotPrimitive { content });
    }
    let w_sq = h.square(w)?;
    if !w_sq.is_zero() {
        return Err(Error::NotIsotropic { square: w_sq });
    }
    let vw = h.pairing(v, w)?;
    if vw.is_zero() {
        return Err(Error::ReductionPairingZero);
    }
    // complete w to a unimodular basis (b1, w)
    let eg = w[0].extended_gcd(&w[1]); // eg.x·w0 + eg.y·w1 = 1
    let mut b1 = vec![eg.y.clone(), -&eg.x];
    // normalize b1 by multiples of w: put b1² into [0, |2(b1,w)|)
    let pw = h.pairing(&b1, w)?;
    let step: BigInt = 2 * &pw;
    let b1_sq = h.square(&b1)?;
    let q = b1_sq.div_floor(&step.abs());
    let t = if step.is_negative() { q.clone() } else { -&q };
    b1 = vec![&b1[0] + &t * &w[0], &b1[1] + &t * &w[1]];
    let basis_change = IntMat::from_rows(vec![b1.clone(), w.to_vec()])?;
    let det = basis_change.det();
    if det.abs() != BigInt::one() {
        return Err(Error::Internal("basis completion is not unimodular".into()));
    }
    let new_gram = GramLattice::new(basis_change.mul(h.gram()).mul(&basis_change.transpose()))?;
    if new_gram.det() != h.det() {
        return Err(Error::Internal(
            "reduction changed the wall determinant".into(),
        ));
    }
    let v_prime = crate::rat::solve_in_row_span_integral(&basis_change, v)
        .ok_or_else(|| Error::Internal("v has no integral coordinates in the new basis".into()))?;
    Ok(FmReduction {
        r_prime: vw.abs(),
        basis_change,
        new_gram,
        v_prime,
        w_image: vec![BigInt::zero(), BigInt::one()],
    })
}

#[derive(Clone, Debug)]
pub struct VerticalReduction {
    /// `v + e` before primitivization.
    pub w_raw: Vec<BigInt>,
    /// Its content.
    pub content: BigInt,
    /// The primitive isotropic class actually used.
    pub w: Vec<BigInt>,
    pub fm: FmReduction,
}

/// From `e ⊥ v` with `e² = −v²`, the class `w = v + e` is isotropic; after
/// primitivization it drives [`fm_reduce`], renormalizing the wall to a
/// vertical one.
pub fn reduction_to_vertical(
    h: &GramLattice,
    v: &[BigInt],
    e: &[BigInt],
) -> Result<VerticalReduction> {
    let ev = h.pairing(e, v)?;
    if !ev.is_zero() {
        return Err(Error::NotOrthogonal { pairing: ev });
    }
    let e_sq = h.square(e)?;
    let v_sq = h.square(v)?;
    if e_sq != -&v_sq {
        return Err(Error::SquareIdentityFails { e_sq, v_sq });
    }
    let w_raw = matrix::add_vec(v, e);
    if matrix::is_zero_vec(&w_raw) {
        return Err(Error::ZeroVector);
    }
    let w_sq = h.square(&w_raw)?;
    if !w_sq.is_zero() {
        return Err(Error::Internal("(v+e)² must vanish when e² = −v²".into()));
    }
    let content = matrix::content(&w_raw);
    let w: Vec<BigInt> = w_raw.iter().map(|x| x / &content).collect();
    let fm = fm_reduce(h, v, &w)?;
    Ok(VerticalReduction {
        w_raw,
        content,
        w,
        fm,
    })
}
