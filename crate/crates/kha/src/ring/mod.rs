//! Exact arithmetic on multivariate Laurent polynomials and rational
//! functions over arbitrary-precision rationals.
//!
//! Variables are indexed `x[i,j]` by a quiver vertex `i >= 1` and a slot
//! `j >= 1` within that vertex. All representations are canonical, so
//! structural equality is mathematical equality.

mod gcd;
mod laurent;
mod mono;
mod ratfun;

pub use gcd::gcd_poly;
pub use laurent::LaurentPoly;
pub use mono::Mono;
pub use ratfun::RationalFunction;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical `p/q` rendering with `q > 0`, always including the denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, RingError> {
    let s = s.trim();
    let bad = || RingError::Parse(format!("invalid rational `{s}`"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Errors from ring-level operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A variable `x[i,j]`: vertex `i`, slot `j` (both 1-based).
///
/// The derived order (vertex first, then slot) fixes the canonical variable
/// order used everywhere: exponent vectors, term order, leading terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VarId {
    pub vertex: u32,
    pub slot: u32,
}

impl VarId {
    pub fn new(vertex: u32, slot: u32) -> Self {
        assert!(vertex >= 1 && slot >= 1, "variable indices are 1-based");
        VarId { vertex, slot }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.vertex, self.slot)
    }
}

/// Convenience constructor for `x[i,j]`.
pub fn xvar(vertex: u32, slot: u32) -> VarId {
    VarId::new(vertex, slot)
}

/// A slot permutation acting vertex-by-vertex: for each vertex it permutes
/// slots `1..=len` among themselves. Slots of vertices not listed are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotPerm {
    by_vertex: BTreeMap<u32, Vec<u32>>,
}

impl SlotPerm {
    pub fn identity() -> Self {
        SlotPerm { by_vertex: BTreeMap::new() }
    }

    /// Builds a permutation from `vertex -> images`: slot `j` maps to
    /// `images[j-1]`. Each image list must be a bijection of `1..=len`.
    pub fn new(by_vertex: BTreeMap<u32, Vec<u32>>) -> Result<Self, RingError> {
        for (&v, images) in &by_vertex {
            let len = images.len();
            let mut seen = vec![false; len];
            for &img in images {
                if img == 0 || img as usize > len || seen[img as usize - 1] {
                    return Err(RingError::InvalidPermutation(format!(
                        "images {images:?} at vertex {v} are not a bijection of 1..={len}"
                    )));
                }
                seen[img as usize - 1] = true;
            }
        }
        Ok(SlotPerm { by_vertex })
    }

    /// Single-vertex constructor.
    pub fn on_vertex(vertex: u32, images: Vec<u32>) -> Result<Self, RingError> {
        Self::new(BTreeMap::from([(vertex, images)]))
    }

    /// Image of one variable. Slots beyond the permutation's range are an
    /// error: the permutation must cover every slot it touches.
    pub fn apply(&self, v: VarId) -> Result<VarId, RingError> {
        match self.by_vertex.get(&v.vertex) {
            None => Ok(v),
            Some(images) => match images.get(v.slot as usize - 1) {
                Some(&img) => Ok(VarId::new(v.vertex, img)),
                None => Err(RingError::InvalidPermutation(format!(
                    "slot {} at vertex {} outside permutation of {} slots",
                    v.slot,
                    v.vertex,
                    images.len()
                ))),
            },
        }
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &SlotPerm) -> Result<SlotPerm, RingError> {
        let mut out = BTreeMap::new();
        for (&v, images) in &other.by_vertex {
            let composed: Result<Vec<u32>, _> = images
                .iter()
                .map(|&img| self.apply(VarId::new(v, img)).map(|w| w.slot))
                .collect();
            out.insert(v, composed?);
        }
        for (&v, images) in &self.by_vertex {
            out.entry(v).or_insert_with(|| images.clone());
        }
        SlotPerm::new(out)
    }

    pub fn inverse(&self) -> SlotPerm {
        let by_vertex = self
            .by_vertex
            .iter()
            .map(|(&v, images)| {
                let mut inv = vec![0u32; images.len()];
                for (j, &img) in images.iter().enumerate() {
                    inv[img as usize - 1] = j as u32 + 1;
                }
                (v, inv)
            })
            .collect();
        SlotPerm { by_vertex }
    }
}

/// Normalizes a nonzero integer-coefficient content out of `coeffs`:
/// returns `c` such that dividing every coefficient by `c` leaves integer
/// coefficients with gcd 1 and makes `lead` positive.
pub(crate) fn rational_content(coeffs: &[&Rational], lead: &Rational) -> Rational {
    use num_integer::Integer;
    let mut denom_lcm = BigInt::one();
    for c in coeffs {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut numer_gcd = BigInt::zero();
    for c in coeffs {
        let scaled = c.numer() * (&denom_lcm / c.denom());
        numer_gcd = numer_gcd.gcd(&scaled);
    }
    if numer_gcd.is_zero() {
        return Rational::one();
    }
    let mut content = Rational::new(numer_gcd, denom_lcm);
    if lead.is_negative() {
        content = -content;
    }
    content
}
