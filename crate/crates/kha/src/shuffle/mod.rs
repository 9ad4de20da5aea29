//! Graded pieces of the K-theoretic Hall algebra of the type-A quiver with
//! `n` vertices and arrows `i+1 -> i`.
//!
//! The piece of dimension vector `alpha` is the ring of Laurent polynomials
//! in `x[i,1..alpha^i]` symmetric within each vertex's slots, stored in
//! orbit-sum form: a map from per-vertex weakly decreasing exponent lists to
//! rational coefficients. The multiplication is the directed shuffle
//! product implemented in [`product`].

mod product;

pub use product::{mu_product, pbw_factor, shuffle_mul_oracle, shuffle_mul_sym, symmetrize};

use crate::ring::{format_rational, parse_rational, LaurentPoly, Mono, Rational, VarId};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Errors from shuffle-algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShuffleError {
    #[error("grade mismatch: {0}")]
    GradeMismatch(String),
    #[error("invalid orbit key: {0}")]
    BadOrbit(String),
    #[error("polynomial is not symmetric in its vertex slots: {0}")]
    NotSymmetric(String),
    #[error("symmetrization did not clear denominators: {0}")]
    NonpolynomialSymmetrization(String),
    #[error("variable outside grade: {0}")]
    VarOutsideGrade(String),
    #[error("malformed element: {0}")]
    Malformed(String),
}

/// A dimension vector over the `n` quiver vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    /// `mult * omega_vertex`: concentrated at one vertex (1-based).
    pub fn omega(n: usize, vertex: u32, mult: u32) -> Self {
        assert!(vertex >= 1 && (vertex as usize) <= n);
        let mut v = vec![0; n];
        v[vertex as usize - 1] = mult;
        DimVector(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Entry at a 1-based vertex.
    pub fn entry(&self, vertex: u32) -> u32 {
        self.0[vertex as usize - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &DimVector) -> Result<DimVector, ShuffleError> {
        if self.n() != other.n() {
            return Err(ShuffleError::GradeMismatch(format!(
                "{:?} + {:?}: different vertex counts",
                self.0, other.0
            )));
        }
        Ok(DimVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// An orbit of monomials under the per-vertex symmetric group: for each
/// vertex, the weakly decreasing list of slot exponents (length matching
/// the grade at that vertex).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OrbitKey(pub Vec<Vec<i64>>);

impl OrbitKey {
    pub fn zeros(grade: &DimVector) -> Self {
        OrbitKey(grade.0.iter().map(|&a| vec![0; a as usize]).collect())
    }

    pub fn validate(&self, grade: &DimVector) -> Result<(), ShuffleError> {
        if self.0.len() != grade.n() {
            return Err(ShuffleError::BadOrbit(format!(
                "{:?} has {} vertices, grade {} has {}",
                self.0,
                self.0.len(),
                grade,
                grade.n()
            )));
        }
        for (i, part) in self.0.iter().enumerate() {
            if part.len() != grade.0[i] as usize {
                return Err(ShuffleError::BadOrbit(format!(
                    "vertex {}: {} exponents for grade entry {}",
                    i + 1,
                    part.len(),
                    grade.0[i]
                )));
            }
            if part.windows(2).any(|w| w[0] < w[1]) {
                return Err(ShuffleError::BadOrbit(format!(
                    "vertex {}: exponents {part:?} not weakly decreasing",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// The canonical (sorted-exponent) monomial representing this orbit.
    pub fn canonical_mono(&self) -> Mono {
        Mono::from_pairs(self.0.iter().enumerate().flat_map(|(i, part)| {
            part.iter().enumerate().map(move |(j, &e)| {
                (VarId::new(i as u32 + 1, j as u32 + 1), e)
            })
        }))
    }

    pub fn shift_all(&self, k: i64) -> OrbitKey {
        OrbitKey(
            self.0
                .iter()
                .map(|part| part.iter().map(|&e| e + k).collect())
                .collect(),
        )
    }

    pub fn max_entry(&self) -> Option<i64> {
        self.0.iter().flatten().copied().max()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().flatten().sum()
    }
}

/// A symmetric Laurent polynomial of a fixed grade, as a sum of orbits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymLaurent {
    grade: DimVector,
    terms: BTreeMap<OrbitKey, Rational>,
}

impl SymLaurent {
    pub fn zero(grade: DimVector) -> Self {
        SymLaurent { grade, terms: BTreeMap::new() }
    }

    /// The constant 1 of the given grade (all-zero orbit).
    pub fn one(grade: DimVector) -> Self {
        let key = OrbitKey::zeros(&grade);
        let mut terms = BTreeMap::new();
        terms.insert(key, Rational::one());
        SymLaurent { grade, terms }
    }

    pub fn from_orbit(
        grade: DimVector,
        key: OrbitKey,
        coeff: Rational,
    ) -> Result<Self, ShuffleError> {
        key.validate(&grade)?;
        let mut out = Self::zero(grade);
        out.add_orbit(key, coeff);
        Ok(out)
    }

    pub(crate) fn add_orbit(&mut self, key: OrbitKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn grade(&self) -> &DimVector {
        &self.grade
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OrbitKey, &Rational)> {
        self.terms.iter()
    }

    pub fn num_orbits(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &SymLaurent) -> Result<SymLaurent, ShuffleError> {
        if self.grade != other.grade {
            return Err(ShuffleError::GradeMismatch(format!(
                "{} vs {}",
                self.grade, other.grade
            )));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_orbit(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> SymLaurent {
        if c.is_zero() {
            return SymLaurent::zero(self.grade.clone());
        }
        SymLaurent {
            grade: self.grade.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> SymLaurent {
        self.scale(&-Rational::one())
    }

    /// Expands the orbit sums into an explicit Laurent polynomial in the
    /// slot variables `x[i,1..alpha^i]`.
    pub fn expand(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (key, coeff) in &self.terms {
            let mut orbit_polys = LaurentPoly::one();
            for (i, part) in key.0.iter().enumerate() {
                if part.is_empty() {
                    continue;
                }
                let mut vertex_sum = LaurentPoly::zero();
                for arrangement in distinct_permutations(part) {
                    let mono = Mono::from_pairs(arrangement.iter().enumerate().map(
                        |(j, &e)| (VarId::new(i as u32 + 1, j as u32 + 1), e),
                    ));
                    vertex_sum = vertex_sum.add(&LaurentPoly::monomial(mono, Rational::one()));
                }
                orbit_polys = orbit_polys.mul(&vertex_sum);
            }
            out = out.add(&orbit_polys.scale(coeff));
        }
        out
    }

    /// Reads a symmetric polynomial back into orbit form, verifying that it
    /// really is symmetric within each vertex's slots and uses no variable
    /// outside the grade.
    pub fn collect(grade: DimVector, poly: &LaurentPoly) -> Result<Self, ShuffleError> {
        let mut out = SymLaurent::zero(grade.clone());
        for (mono, coeff) in poly.terms() {
            let mut exps: Vec<Vec<i64>> =
                grade.0.iter().map(|&a| vec![0; a as usize]).collect();
            for (v, e) in mono.iter() {
                let i = v.vertex as usize;
                if i == 0 || i > grade.n() || v.slot == 0 || v.slot > grade.0[i - 1] {
                    return Err(ShuffleError::VarOutsideGrade(format!(
                        "{v} outside grade {grade}"
                    )));
                }
                exps[i - 1][v.slot as usize - 1] = e;
            }
            let sorted: Vec<Vec<i64>> = exps
                .iter()
                .map(|part| {
                    let mut p = part.clone();
                    p.sort_unstable_by(|a, b| b.cmp(a));
                    p
                })
                .collect();
            if sorted == exps {
                out.add_orbit(OrbitKey(sorted), coeff.clone());
            }
        }
        // A symmetric polynomial is exactly the expansion of its canonical
        // representatives; anything else fails here.
        if &out.expand() != poly {
            return Err(ShuffleError::NotSymmetric(format!(
                "{poly} is not invariant under slot permutations of grade {grade}"
            )));
        }
        Ok(out)
    }

    /// The grade-preserving automorphism multiplying by
    /// `(prod of all slot variables)^{-k}`.
    pub fn eta_shift(&self, k: i64) -> SymLaurent {
        SymLaurent {
            grade: self.grade.clone(),
            terms: self
                .terms
                .iter()
                .map(|(key, c)| (key.shift_all(-k), c.clone()))
                .collect(),
        }
    }

    /// Whether every exponent is `<= 0`.
    pub fn in_negative_sector(&self) -> bool {
        self.terms.keys().all(|k| k.max_entry().map_or(true, |m| m <= 0))
    }
}

impl fmt::Display for SymLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expand())
    }
}

/// All distinct arrangements of a multiset of exponents, in descending
/// lexicographic order starting from the sorted-descending arrangement.
pub(crate) fn distinct_permutations(part: &[i64]) -> Vec<Vec<i64>> {
    let mut cur: Vec<i64> = part.to_vec();
    cur.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = vec![cur.clone()];
    // Descending next-permutation: find the rightmost ascent of the
    // reversed order and step; enumerates each arrangement exactly once.
    loop {
        let n = cur.len();
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] > cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] < cur[i]).expect("ascent exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

/// An element of the whole Hall algebra: finitely many graded components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KHAElement {
    n: usize,
    components: BTreeMap<DimVector, SymLaurent>,
}

impl KHAElement {
    pub fn zero(n: usize) -> Self {
        KHAElement { n, components: BTreeMap::new() }
    }

    /// The unit: 1 in grade zero.
    pub fn unit(n: usize) -> Self {
        Self::from_sym(SymLaurent::one(DimVector::zero(n)))
    }

    /// The generator image `x[i,1]^{-r}` in grade `omega_i`.
    pub fn generator(n: usize, vertex: u32, r: i64) -> Self {
        let grade = DimVector::omega(n, vertex, 1);
        let mut key = OrbitKey::zeros(&grade);
        key.0[vertex as usize - 1][0] = -r;
        Self::from_sym(
            SymLaurent::from_orbit(grade, key, Rational::one()).expect("valid orbit"),
        )
    }

    pub fn from_sym(sym: SymLaurent) -> Self {
        let n = sym.grade().n();
        let mut components = BTreeMap::new();
        if !sym.is_zero() {
            components.insert(sym.grade().clone(), sym);
        }
        KHAElement { n, components }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&DimVector, &SymLaurent)> {
        self.components.iter()
    }

    pub fn component(&self, grade: &DimVector) -> Option<&SymLaurent> {
        self.components.get(grade)
    }

    pub fn add(&self, other: &KHAElement) -> Result<KHAElement, ShuffleError> {
        if self.n != other.n {
            return Err(ShuffleError::GradeMismatch(format!(
                "n = {} vs {}",
                self.n, other.n
            )));
        }
        let mut out = self.clone();
        for (grade, sym) in &other.components {
            out.add_component(grade.clone(), sym.clone())?;
        }
        Ok(out)
    }

    fn add_component(&mut self, grade: DimVector, sym: SymLaurent) -> Result<(), ShuffleError> {
        if grade.n() != self.n {
            return Err(ShuffleError::GradeMismatch(format!(
                "component grade {} in element with n = {}",
                grade, self.n
            )));
        }
        match self.components.entry(grade) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !sym.is_zero() {
                    e.insert(sym);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&sym)?;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> KHAElement {
        if c.is_zero() {
            return KHAElement::zero(self.n);
        }
        KHAElement {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|(g, s)| (g.clone(), s.scale(c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> KHAElement {
        self.scale(&-Rational::one())
    }

    /// The shuffle product, extended bilinearly over graded components.
    pub fn shuffle_mul(&self, other: &KHAElement) -> Result<KHAElement, ShuffleError> {
        if self.n != other.n {
            return Err(ShuffleError::GradeMismatch(format!(
                "n = {} vs {}",
                self.n, other.n
            )));
        }
        let mut out = KHAElement::zero(self.n);
        for (_, f) in &self.components {
            for (_, g) in &other.components {
                let prod = shuffle_mul_sym(f, g)?;
                out.add_component(prod.grade().clone(), prod)?;
            }
        }
        Ok(out)
    }

    pub fn eta_shift(&self, k: i64) -> KHAElement {
        KHAElement {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|(g, s)| (g.clone(), s.eta_shift(k)))
                .collect(),
        }
    }

    pub fn in_negative_sector(&self) -> bool {
        self.components.values().all(SymLaurent::in_negative_sector)
    }
}

impl fmt::Display for KHAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (grade, sym) in &self.components {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "grade {grade}: {}", sym.expand())?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct KhaJson {
    n: usize,
    components: Vec<ComponentJson>,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    grade: Vec<u32>,
    terms: Vec<OrbitTermJson>,
}

#[derive(Serialize, Deserialize)]
struct OrbitTermJson {
    coeff: String,
    orbit: Vec<Vec<i64>>,
}

impl KHAElement {
    pub fn to_json(&self) -> serde_json::Value {
        let components = self
            .components
            .iter()
            .map(|(grade, sym)| ComponentJson {
                grade: grade.0.clone(),
                terms: sym
                    .terms()
                    .map(|(key, c)| OrbitTermJson {
                        coeff: format_rational(c),
                        orbit: key.0.clone(),
                    })
                    .collect(),
            })
            .collect();
        serde_json::to_value(KhaJson { n: self.n, components }).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, ShuffleError> {
        let raw: KhaJson = serde_json::from_value(value.clone())
            .map_err(|e| ShuffleError::Malformed(e.to_string()))?;
        let mut out = KHAElement::zero(raw.n);
        for comp in raw.components {
            let grade = DimVector(comp.grade);
            let mut sym = SymLaurent::zero(grade.clone());
            for term in comp.terms {
                let coeff = parse_rational(&term.coeff)
                    .map_err(|e| ShuffleError::Malformed(e.to_string()))?;
                let key = OrbitKey(term.orbit);
                key.validate(&grade)?;
                sym.add_orbit(key, coeff);
            }
            out.add_component(grade, sym)?;
        }
        Ok(out)
    }
}
