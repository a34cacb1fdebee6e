//! Exact-arithmetic lattice computations for moduli of sheaves on K3 surfaces.
//!
//! The crate decides, for a Mukai vector `v = (r, θ, s)` over a configurable
//! Néron–Severi lattice, whether the reflection in the vertical wall is a
//! monodromy operator, classifies the wall as divisorial or flopping, and
//! decides whether the reflection is induced by a symplectic birational
//! involution of the moduli space.  Everything is computed over unbounded
//! integers and exact rationals; there is no floating point anywhere.
//!
//! Layers, bottom up:
//!
//! * [`matrix`], [`rat`] — dense `BigInt` / `BigRational` linear algebra:
//!   Smith and Hermite normal forms, kernels, determinants, solving.
//! * [`lattice`] — integral lattices presented by Gram matrices:
//!   divisibility, saturation, orthogonal complements, discriminant groups,
//!   short-vector enumeration, invariant/coinvariant splittings.
//! * [`mukai`] — the algebraic and full (rank 24) Mukai lattices, standard
//!   autoequivalence isometries, Markman's monodromy criterion and
//!   discriminant actions.
//! * [`walls`] — the vertical wall, condition (*), divisorial/flopping
//!   classification and the involution decision.
//!
//! The crate is `no_std` (with `alloc`); IO and file formats live in the
//! companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod lattice;
pub mod matrix;
pub mod mukai;
pub mod rat;
pub mod walls;
pub mod word;

pub use error::{Error, Result};
pub use lattice::{DiscriminantGroup, GramLattice, IntegralIsometry, Sublattice};
pub use matrix::{IntMat, SmithNormalForm};
pub use mukai::{
    AlgMukaiLattice, DiscAction, FullMukaiLattice, MonodromyVerdict, MukaiVector, NsData, Sign,
};
pub use walls::{StarReport, StarVerdict, VerticalWall, WallClassification, WallKind, Witness};
pub use word::{IsometryAtom, IsometryWord};
