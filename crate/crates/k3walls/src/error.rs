//! Error type shared by every layer of the crate.
//!
//! All variants except [`Error::Internal`] report violated preconditions on
//! caller-supplied data.  `Internal` signals a broken invariant of the
//! library itself (a re-verification that failed) and is never the caller's
//! fault.

use alloc::string::String;

use num_bigint::BigInt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix rows have unequal lengths")]
    RaggedRows,

    #[error("matrix must be square")]
    NotSquare,

    #[error("gram matrix must be symmetric")]
    NotSymmetric,

    #[error("lattice must be even: diagonal entry at index {index} is odd")]
    OddDiagonal { index: usize },

    #[error("degenerate gram matrix (determinant 0) is rejected")]
    DegenerateGram,

    #[error("the zero vector is not allowed here")]
    ZeroVector,

    #[error("vector is not primitive (content {content})")]
    NotPrimitive { content: BigInt },

    #[error("vector is not isotropic: square is {square}")]
    NotIsotropic { square: BigInt },

    #[error("lattice is not negative definite")]
    NotNegativeDefinite,

    #[error("target square must be negative, got {target}")]
    TargetNotNegative { target: BigInt },

    #[error("expected a rank-2 lattice of signature (1,1), found rank {rank} of signature ({plus},{minus})")]
    NotHyperbolicRank2 {
        rank: usize,
        plus: usize,
        minus: usize,
    },

    #[error("matrix does not preserve the pairing (not an isometry)")]
    NotAnIsometry,

    #[error("isometry does not have the claimed order {order}")]
    WrongOrder { order: u32 },

    #[error("no power up to {bound} is the identity; the isometry has infinite order or order beyond the bound")]
    OrderBoundExceeded { bound: u32 },

    #[error("basis rows are not linearly independent")]
    DependentRows,

    #[error("vector does not lie in the given sublattice")]
    NotInSublattice,

    #[error("Mukai vector has {got} Néron–Severi coordinates, lattice has rank {expected}")]
    NsMismatch { expected: usize, got: usize },

    #[error("reflection image is not integral (offending denominator {denominator})")]
    NonIntegralReflection { denominator: BigInt },

    #[error("e = (r, θ, θ²/r − s) is not integral: r = {r} does not divide θ² = {theta_sq}")]
    NonIntegralE { r: BigInt, theta_sq: BigInt },

    #[error("rank r must be nonzero; apply a spherical twist or exp(L) to move to r ≠ 0 first")]
    RankZero,

    #[error("rank r = {r} is negative; apply the shift (v ↦ −v) to reach r > 0 first")]
    RankNegative { r: BigInt },

    #[error("v² = {v_sq} < 2 is outside the hyperkähler range: v² = −2 is a rigid (point) moduli space and v² = 0 a K3 partner; wall operations need v² ≥ 2")]
    SquareTooSmall { v_sq: BigInt },

    #[error("expected (e,v) = 0, got {pairing}")]
    NotOrthogonal { pairing: BigInt },

    #[error("expected e² = −v², got e² = {e_sq} and v² = {v_sq}")]
    SquareIdentityFails { e_sq: BigInt, v_sq: BigInt },

    #[error("square must be nonzero to reflect")]
    ReflectionSquareZero,

    #[error("isometry does not act as {eps}·id on the discriminant group, so the extension recipe does not apply")]
    DiscActionMismatch { eps: i8 },

    #[error("isometry does not preserve the orthogonal complement of v")]
    DoesNotPreserveVPerp,

    #[error("operation requires a rank-1 Néron–Severi lattice, got rank {rank}")]
    RankOneOnly { rank: usize },

    #[error("operation requires condition (*) to hold for v")]
    StarRequired,

    #[error("embedding does not preserve pairings or is not primitive")]
    BadEmbedding,

    #[error("Néron–Severi lattice must have signature (1, ρ−1), found ({plus},{minus})")]
    BadNsSignature { plus: usize, minus: usize },

    #[error("cannot parse isometry word: {0}")]
    WordParse(String),

    #[error("(v, w) = 0: the isotropic class pairs to zero with v, so it defines no reduction")]
    ReductionPairingZero,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// `true` for errors reporting bad caller input (CLI exit code 2),
    /// `false` for broken library invariants (CLI exit code 1).
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}
