//! Words in the standard autoequivalence isometries of the algebraic Mukai
//! lattice: `exp(L)` (tensoring by a line bundle), the shift (global `−id`),
//! the spherical twist (reflection in `(1,0,1)`) and general integral
//! reflections.
//!
//! A word reads like function composition: in both the atom list and the
//! string grammar the **rightmost atom acts first**.  The grammar is
//!
//! ```text
//! word  := atom (';' atom)*
//! atom  := 'shift' | 'twist' | 'exp(' lin ')' | 'refl(' int {',' int} ')'
//! lin   := term (('+'|'-') term)*        e.g.  -4H,  2*H+3*K,  -e2
//! ```
//!
//! with `H`, `K` naming the first two Néron–Severi basis classes and `e0`,
//! `e1`, … available for higher rank.  `refl` takes the ρ+2 Mukai
//! coordinates of the reflection class.  Example: over rank-1 NS with
//! `H² = 4`, the word `exp(-1H);shift;twist;exp(-4H)` sends `(1,0,-28)` to
//! `(4,0,-7)`.

use alloc::string::{String, ToString};
use alloc::{format, vec, vec::Vec};
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMat;
use crate::mukai::{AlgMukaiLattice, MukaiVector};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IsometryAtom {
    /// Cup product with `exp(L) = (1, L, L²/2)`:
    /// `(r, θ, s) ↦ (r, θ + rL, s + L·θ + r·L²/2)`.
    Exp(Vec<BigInt>),
    /// The shift `[−1]`, acting as `−id`.
    Shift,
    /// The spherical twist: reflection in `(1,0,1)`.
    SphericalTwist,
    /// Reflection in an arbitrary class of nonzero square; must be integral
    /// on the whole lattice.
    Reflect(MukaiVector),
}

/// A validated composition of isometry atoms; `atoms[len−1]` acts first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsometryWord {
    atoms: Vec<IsometryAtom>,
}

impl IsometryWord {
    /// Validates every atom against the lattice: `exp` arguments must have
    /// NS rank, `refl` classes a nonzero square.  Integrality of a `refl`
    /// atom is checked where it is applied: reflections like `R_{(3,0,5)}`
    /// are integral on a sublattice only, and a word may legitimately visit
    /// just that sublattice.  Use [`IsometryWord::matrix`] to demand
    /// integrality on the whole lattice.
    pub fn new(alg: &AlgMukaiLattice, atoms: Vec<IsometryAtom>) -> Result<Self> {
        let rho = alg.ns().rank();
        for atom in &atoms {
            match atom {
                IsometryAtom::Exp(l) => {
                    if l.len() != rho {
                        return Err(Error::NsMismatch {
                            expected: rho,
                            got: l.len(),
                        });
                    }
                }
                IsometryAtom::Shift | IsometryAtom::SphericalTwist => {}
                IsometryAtom::Reflect(w) => {
                    alg.check_vector(w)?;
                    let w_sq = alg.square(w)?;
                    if w_sq.is_zero() {
                        return Err(Error::ReflectionSquareZero);
                    }
                }
            }
        }
        Ok(IsometryWord { atoms })
    }

    pub fn parse(alg: &AlgMukaiLattice, input: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        for raw in input.split(';') {
            let tok = raw.trim();
            if tok.is_empty() {
                return Err(Error::WordParse("empty atom".into()));
            }
            atoms.push(parse_atom(alg, tok)?);
        }
        IsometryWord::new(alg, atoms)
    }

    pub fn atoms(&self) -> &[IsometryAtom] {
        &self.atoms
    }

    /// Applies the word to `v`, rightmost atom first.
    pub fn apply(&self, alg: &AlgMukaiLattice, v: &MukaiVector) -> Result<MukaiVector> {
        Ok(self
            .apply_with_trail(alg, v)?
            .pop()
            .expect("trail nonempty"))
    }

    /// All intermediate vectors: `trail[0] = v`, then one entry per atom
    /// applied (right to left), ending with the image.
    pub fn apply_with_trail(
        &self,
        alg: &AlgMukaiLattice,
        v: &MukaiVector,
    ) -> Result<Vec<MukaiVector>> {
        alg.check_vector(v)?;
        let mut trail = Vec::with_capacity(self.atoms.len() + 1);
        trail.push(v.clone());
        let mut current = v.clone();
        for atom in self.atoms.iter().rev() {
            current = apply_atom(alg, atom, &current)?;
            trail.push(current.clone());
        }
        Ok(trail)
    }

    /// Matrix of the whole word on the algebraic Mukai lattice
    /// (coordinate-column action).
    pub fn matrix(&self, alg: &AlgMukaiLattice) -> Result<IntMat> {
        let n = alg.rank();
        let mut m = IntMat::identity(n);
        for atom in &self.atoms {
            m = m.mul(&atom_matrix(alg, atom)?);
        }
        Ok(m)
    }

    /// Verifies `Wᵀ·G·W = G` for the word matrix.
    pub fn preserves_pairing(&self, alg: &AlgMukaiLattice) -> Result<bool> {
        let m = self.matrix(alg)?;
        let g = alg.lattice().gram();
        Ok(&m.transpose().mul(g).mul(&m) == g)
    }
}

impl fmt::Display for IsometryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            match atom {
                IsometryAtom::Exp(l) => write!(f, "exp({})", display_lin(l))?,
                IsometryAtom::Shift => write!(f, "shift")?,
                IsometryAtom::SphericalTwist => write!(f, "twist")?,
                IsometryAtom::Reflect(w) => {
                    write!(f, "refl(")?;
                    for (j, c) in w.coords().iter().enumerate() {
                        if j > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    write!(f, ")")?;
                }
            }
        }
        Ok(())
    }
}

fn apply_atom(alg: &AlgMukaiLattice, atom: &IsometryAtom, v: &MukaiVector) -> Result<MukaiVector> {
    match atom {
        IsometryAtom::Exp(l) => {
            let ns = alg.ns().lattice();
            let l_sq = ns.square(l)?;
            let l_theta = ns.pairing(l, &v.theta)?;
            let theta: Vec<BigInt> = v.theta.iter().zip(l).map(|(t, li)| t + &v.r * li).collect();
            let s = &v.s + l_theta + &v.r * (l_sq / 2);
            Ok(MukaiVector::new(v.r.clone(), theta, s))
        }
        IsometryAtom::Shift => Ok(v.neg()),
        IsometryAtom::SphericalTwist => {
            // R_{(1,0,1)}(x) = x + (x, (1,0,1))·(1,0,1) since (1,0,1)² = −2
            let sph = alg.spherical_class();
            let c = alg.pairing(v, &sph)?;
            let coords: Vec<BigInt> = v
                .coords()
                .iter()
                .zip(&sph.coords())
                .map(|(x, s)| x + &c * s)
                .collect();
            MukaiVector::from_coords(&coords)
        }
        IsometryAtom::Reflect(w) => alg.reflect(w, v),
    }
}

fn atom_matrix(alg: &AlgMukaiLattice, atom: &IsometryAtom) -> Result<IntMat> {
    let n = alg.rank();
    let mut m = IntMat::zeros(n, n);
    for i in 0..n {
        let mut basis = vec![BigInt::zero(); n];
        basis[i] = BigInt::one();
        let b = MukaiVector::from_coords(&basis)?;
        let image = apply_atom(alg, atom, &b)?;
        for (j, c) in image.coords().into_iter().enumerate() {
            m[(j, i)] = c;
        }
    }
    Ok(m)
}

fn parse_atom(alg: &AlgMukaiLattice, tok: &str) -> Result<IsometryAtom> {
    if tok == "shift" {
        return Ok(IsometryAtom::Shift);
    }
    if tok == "twist" {
        return Ok(IsometryAtom::SphericalTwist);
    }
    if let Some(body) = tok.strip_prefix("exp(").and_then(|t| t.strip_suffix(')')) {
        return Ok(IsometryAtom::Exp(parse_lin(body, alg.ns().rank())?));
    }
    if let Some(body) = tok.strip_prefix("refl(").and_then(|t| t.strip_suffix(')')) {
        let coords: Result<Vec<BigInt>> = body.split(',').map(|p| parse_int(p.trim())).collect();
        let coords = coords?;
        if coords.len() != alg.rank() {
            return Err(Error::WordParse(format!(
                "refl needs {} coordinates, got {}",
                alg.rank(),
                coords.len()
            )));
        }
        return Ok(IsometryAtom::Reflect(MukaiVector::from_coords(&coords)?));
    }
    Err(Error::WordParse(format!("unknown atom `{tok}`")))
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>()
        .map_err(|_| Error::WordParse(format!("bad integer `{s}`")))
}

/// Parses a linear combination of NS generators, e.g. `-4H`, `2*H+3*K`, `e2`.
fn parse_lin(body: &str, rank: usize) -> Result<Vec<BigInt>> {
    let mut coords = vec![BigInt::zero(); rank];
    let chars: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::WordParse("empty exp argument".into()));
    }
    let mut i = 0;
    while i < chars.len() {
        let mut sign = BigInt::one();
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let mut digits = String::new();
        while i < chars.len() && chars[i].is_ascii_digit() {
            digits.push(chars[i]);
            i += 1;
        }
        if i < chars.len() && chars[i] == '*' {
            i += 1;
        }
        if i >= chars.len() {
            return Err(Error::WordParse("exp term missing a generator".into()));
        }
        let idx = match chars[i] {
            'H' => {
                i += 1;
                0
            }
            'K' => {
                i += 1;
                1
            }
            'e' => {
                i += 1;
                let mut idx_digits = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    idx_digits.push(chars[i]);
                    i += 1;
                }
                idx_digits
                    .parse::<usize>()
                    .map_err(|_| Error::WordParse("bad generator index".into()))?
            }
            other => {
                return Err(Error::WordParse(format!("unknown generator `{other}`")));
            }
        };
        if idx >= rank {
            return Err(Error::WordParse(format!(
                "generator index {idx} out of range for NS rank {rank}"
            )));
        }
        let coef = if digits.is_empty() {
            BigInt::one()
        } else {
            parse_int(&digits)?
        };
        coords[idx] += sign * coef;
    }
    Ok(coords)
}

fn display_lin(l: &[BigInt]) -> String {
    let names = |i: usize| match i {
        0 => "H".to_string(),
        1 => "K".to_string(),
        i => format!("e{i}"),
    };
    let mut out = String::new();
    for (i, c) in l.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !out.is_empty() && !c.is_negative() {
            out.push('+');
        }
        if c.is_one() {
            out.push_str(&names(i));
        } else if (-c).is_one() {
            out.push('-');
            out.push_str(&names(i));
        } else {
            out.push_str(&format!("{}{}", c, names(i)));
        }
    }
    if out.is_empty() {
        // exp(0) is the identity; keep it parseable
        out.push_str("0H");
    }
    out
}

/// The isometry `φ = exp(−H) ∘ shift ∘ twist ∘ exp(−rH)` relating the
/// Hilbert scheme vector `(1, 0, r(1−rd))` to `(r, 0, 1−rd)` on rank-1 NS.
pub fn hilbert_scheme_word(alg: &AlgMukaiLattice, r: i64) -> Result<IsometryWord> {
    IsometryWord::new(
        alg,
        vec![
            IsometryAtom::Exp(vec![BigInt::from(-1)]),
            IsometryAtom::Shift,
            IsometryAtom::SphericalTwist,
            IsometryAtom::Exp(vec![BigInt::from(-r)]),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg_d2(d2: i64) -> AlgMukaiLattice {
        AlgMukaiLattice::rank_one(&BigInt::from(d2)).unwrap()
    }

    #[test]
    fn exp_inverse_pair_is_identity() {
        let alg = alg_d2(4);
        let word = IsometryWord::parse(&alg, "exp(2H);exp(-2H)").unwrap();
        let v = MukaiVector::from_i64(3, &[1], -5);
        assert_eq!(word.apply(&alg, &v).unwrap(), v);
    }

    #[test]
    fn hilbert_scheme_isometry_example() {
        // r = 4, d = 2 (H² = 4): φ(1,0,−28) = (4,0,−7)
        let alg = alg_d2(4);
        let word = IsometryWord::parse(&alg, "exp(-1H);shift;twist;exp(-4H)").unwrap();
        let v = MukaiVector::from_i64(1, &[0], -28);
        let trail = word.apply_with_trail(&alg, &v).unwrap();
        // the first applied atom is exp(−4H)
        assert_eq!(trail[1], MukaiVector::from_i64(1, &[-4], 4));
        assert_eq!(trail[4], MukaiVector::from_i64(4, &[0], -7));
        assert!(word.preserves_pairing(&alg).unwrap());
    }

    #[test]
    fn reflection_atom() {
        let alg = alg_d2(4);
        let word = IsometryWord::parse(&alg, "refl(3,0,5)").unwrap();
        let v = MukaiVector::from_i64(3, &[0], 5);
        assert_eq!(word.apply(&alg, &v).unwrap(), v.neg());
        // (0, H, 0) is orthogonal to the reflection class, hence fixed
        let h = MukaiVector::from_i64(0, &[1], 0);
        assert_eq!(word.apply(&alg, &h).unwrap(), h);

        // R_{(3,0,5)} is not integral on the whole lattice: applying it off
        // its integrality sublattice reports the denominator, and the word
        // has no integral matrix
        let b = MukaiVector::from_i64(1, &[0], 0);
        assert!(matches!(
            word.apply(&alg, &b),
            Err(Error::NonIntegralReflection { .. })
        ));
        assert!(word.matrix(&alg).is_err());

        // isotropic classes cannot be reflected in
        assert!(matches!(
            IsometryWord::parse(&alg, "refl(1,0,0)"),
            Err(Error::ReflectionSquareZero)
        ));

        // the spherical twist is the always-integral case w² = −2
        let tw = IsometryWord::parse(&alg, "refl(1,0,1)").unwrap();
        assert!(tw.matrix(&alg).is_ok());
    }

    #[test]
    fn shift_and_twist_are_involutions() {
        let alg = alg_d2(6);
        let v = MukaiVector::from_i64(2, &[3], -7);
        for w in ["shift;shift", "twist;twist"] {
            let word = IsometryWord::parse(&alg, w).unwrap();
            assert_eq!(word.apply(&alg, &v).unwrap(), v);
        }
    }

    #[test]
    fn parse_rank_two_lin() {
        let coords = parse_lin("2*H+3*K", 2).unwrap();
        assert_eq!(coords, vec![BigInt::from(2), BigInt::from(3)]);
        let coords = parse_lin("-H+e1", 2).unwrap();
        assert_eq!(coords, vec![BigInt::from(-1), BigInt::from(1)]);
        assert!(parse_lin("Q", 2).is_err());
        assert!(parse_lin("e5", 2).is_err());
    }

    #[test]
    fn display_roundtrip() {
        let alg = alg_d2(4);
        let word = IsometryWord::parse(&alg, "exp(-1H); shift ;twist;refl(3,0,5)").unwrap();
        let shown = word.to_string();
        let reparsed = IsometryWord::parse(&alg, &shown).unwrap();
        assert_eq!(word, reparsed);
    }
}
