//! The positive nil-affine algebra on generators `e[i,r]` (vertex `i`,
//! loop degree `r`), presented by
//!
//! * `e[i,r] e[i,s] = -e[i,s-1] e[i,r+1]`,
//! * `e[i+1,s] e[i,r] = e[i,r] e[i+1,s] - e[i,r+1] e[i+1,s-1]`,
//! * `e[i,r] e[j,s] = e[j,s] e[i,r]` for `|i - j| >= 2`,
//!
//! together with the terminating rewriting system they generate. Normal
//! forms have vertices weakly increasing left to right and, within each
//! vertex, weakly decreasing loop degrees. The same-vertex relation at
//! `s = r + 1` forces `e[i,r] e[i,r+1] = 0`.

use crate::ring::{format_rational, parse_rational, Rational, RingError};
use crate::shuffle::DimVector;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Errors from word-algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UplusError {
    #[error("vertex out of range: {0}")]
    VertexOutOfRange(String),
    #[error("negative total degree: {0}")]
    NegativeDegree(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// One generator `e[i,r]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub vertex: u32,
    pub degree: i64,
}

impl Letter {
    pub fn new(vertex: u32, degree: i64) -> Self {
        assert!(vertex >= 1, "vertices are 1-based");
        Letter { vertex, degree }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{}]", self.vertex, self.degree)
    }
}

/// A word in the generators; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The bigrade (dimension vector over `n` vertices, total loop degree).
    pub fn bigrade(&self, n: usize) -> Result<BiGrade, UplusError> {
        let mut alpha = vec![0u32; n];
        let mut m = 0i64;
        for l in &self.0 {
            if l.vertex == 0 || l.vertex as usize > n {
                return Err(UplusError::VertexOutOfRange(format!(
                    "{l} in a word over {n} vertices"
                )));
            }
            alpha[l.vertex as usize - 1] += 1;
            m += l.degree;
        }
        Ok(BiGrade { alpha: DimVector(alpha), m })
    }

    /// Normal shape: vertices weakly increasing, degrees weakly decreasing
    /// within each same-vertex run.
    pub fn is_normal(&self) -> bool {
        self.0.windows(2).all(|w| {
            w[0].vertex < w[1].vertex
                || (w[0].vertex == w[1].vertex && w[0].degree >= w[1].degree)
        })
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for l in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = UplusError;

    /// Parses the grammar `e[i,r] e[j,s] ...`; the empty string and `1`
    /// denote the unit.
    fn from_str(s: &str) -> Result<Self, UplusError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::one());
        }
        let bad = |tok: &str| UplusError::Parse(format!("invalid letter `{tok}`"));
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let body = tok
                .strip_prefix("e[")
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| bad(tok))?;
            let (i, r) = body.split_once(',').ok_or_else(|| bad(tok))?;
            let vertex: u32 = i.trim().parse().map_err(|_| bad(tok))?;
            let degree: i64 = r.trim().parse().map_err(|_| bad(tok))?;
            if vertex == 0 {
                return Err(bad(tok));
            }
            letters.push(Letter::new(vertex, degree));
        }
        Ok(Word(letters))
    }
}

/// Bigrade of a word: dimension vector and total loop degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BiGrade {
    pub alpha: DimVector,
    pub m: i64,
}

/// Number of vertex inversions: pairs `a < b` with `vertex(a) > vertex(b)`.
pub fn inversions(w: &Word) -> usize {
    let v = &w.0;
    let mut count = 0;
    for a in 0..v.len() {
        for b in (a + 1)..v.len() {
            if v[a].vertex > v[b].vertex {
                count += 1;
            }
        }
    }
    count
}

/// Termination measure: lexicographic (inversions, sum of squared degrees).
/// Every rewrite step strictly decreases it.
pub fn measure(w: &Word) -> (usize, i128) {
    let sq: i128 = w.0.iter().map(|l| (l.degree as i128) * (l.degree as i128)).sum();
    (inversions(w), sq)
}

/// Redex selection strategy. Normal forms are strategy-independent; the
/// tests drive both to witness confluence empirically.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Whether the adjacent pair at `pos` is a redex (same-vertex degree
/// ascent, or a vertex descent).
pub fn is_reducible_at(w: &Word, pos: usize) -> bool {
    let (x, y) = (w.0[pos], w.0[pos + 1]);
    (x.vertex == y.vertex && x.degree < y.degree) || x.vertex > y.vertex
}

/// Position of the first reducible adjacent pair under the strategy.
pub fn find_redex(w: &Word, strategy: Strategy) -> Option<usize> {
    let positions = 0..w.len().saturating_sub(1);
    match strategy {
        Strategy::Leftmost => positions.clone().find(|&a| is_reducible_at(w, a)),
        Strategy::Rightmost => positions.clone().rev().find(|&a| is_reducible_at(w, a)),
    }
}

/// Rewrites the pair at `pos`, returning the replacement combination.
/// Panics if the pair is not reducible; use [`find_redex`] first.
pub fn rewrite_at(w: &Word, pos: usize) -> Vec<(Rational, Word)> {
    let (x, y) = (w.0[pos], w.0[pos + 1]);
    let splice = |pair: &[Letter]| {
        let mut out = w.0[..pos].to_vec();
        out.extend_from_slice(pair);
        out.extend_from_slice(&w.0[pos + 2..]);
        Word(out)
    };
    let one = Rational::from_integer(1.into());
    if x.vertex == y.vertex {
        let (r, s) = (x.degree, y.degree);
        assert!(r < s, "same-vertex redex needs an ascent");
        if s == r + 1 {
            // e[i,r] e[i,r+1] = 0.
            return Vec::new();
        }
        // e[i,r] e[i,s] = -e[i,s-1] e[i,r+1].
        let pair = [Letter::new(x.vertex, s - 1), Letter::new(x.vertex, r + 1)];
        return vec![(-one, splice(&pair))];
    }
    assert!(x.vertex > y.vertex, "cross-vertex redex needs a descent");
    if x.vertex == y.vertex + 1 {
        // e[i+1,s] e[i,r] = e[i,r] e[i+1,s] - e[i,r+1] e[i+1,s-1].
        let (i, s, r) = (y.vertex, x.degree, y.degree);
        let swapped = [Letter::new(i, r), Letter::new(i + 1, s)];
        let corrected = [Letter::new(i, r + 1), Letter::new(i + 1, s - 1)];
        return vec![(one.clone(), splice(&swapped)), (-one, splice(&corrected))];
    }
    // Distant letters commute.
    vec![(one, splice(&[y, x]))]
}

/// A finite rational combination of words.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UElement {
    terms: BTreeMap<Word, Rational>,
}

impl UElement {
    pub fn zero() -> Self {
        UElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_word(Word::one())
    }

    pub fn from_word(w: Word) -> Self {
        Self::from_terms([(Rational::from_integer(1.into()), w)])
    }

    pub fn from_terms<I: IntoIterator<Item = (Rational, Word)>>(iter: I) -> Self {
        let mut out = UElement::zero();
        for (c, w) in iter {
            out.add_term(c, w);
        }
        out
    }

    pub fn add_term(&mut self, c: Rational, w: Word) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &UElement) -> UElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(c.clone(), w.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> UElement {
        if c.is_zero() {
            return UElement::zero();
        }
        UElement {
            terms: self.terms.iter().map(|(w, k)| (w.clone(), k * c)).collect(),
        }
    }

    pub fn neg(&self) -> UElement {
        self.scale(&-Rational::from_integer(1.into()))
    }

    /// Free multiplication (concatenation), before any rewriting.
    pub fn concat_mul(&self, other: &UElement) -> UElement {
        let mut out = UElement::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(c1 * c2, w1.concat(w2));
            }
        }
        out
    }

    /// Shifts every loop degree by `k` (the algebra automorphism `tau_k`).
    pub fn tau_shift(&self, k: i64) -> UElement {
        UElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let shifted =
                        Word(w.0.iter().map(|l| Letter::new(l.vertex, l.degree + k)).collect());
                    (shifted, c.clone())
                })
                .collect(),
        }
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{} * {}", format_rational(c), w)?;
        }
        Ok(())
    }
}

impl FromStr for UElement {
    type Err = UplusError;

    fn from_str(s: &str) -> Result<Self, UplusError> {
        let s = s.trim();
        if s == "0" {
            return Ok(UElement::zero());
        }
        let mut out = UElement::zero();
        for term in s.split(" + ") {
            let (coeff, word) = match term.split_once('*') {
                Some((c, w)) => (
                    parse_rational(c).map_err(|e: RingError| UplusError::Parse(e.to_string()))?,
                    w.parse::<Word>()?,
                ),
                None => {
                    // Either a bare coefficient (unit word) or a bare word.
                    match parse_rational(term) {
                        Ok(c) => (c, Word::one()),
                        Err(_) => (Rational::from_integer(1.into()), term.parse::<Word>()?),
                    }
                }
            };
            out.add_term(coeff, word);
        }
        Ok(out)
    }
}

/// Fully rewrites to the canonical normal form (leftmost strategy).
pub fn normal_form(u: &UElement) -> UElement {
    normal_form_with(u, Strategy::Leftmost)
}

/// Normal form under a chosen redex-selection strategy.
pub fn normal_form_with(u: &UElement, strategy: Strategy) -> UElement {
    let mut out = UElement::zero();
    let mut stack: Vec<(Rational, Word)> =
        u.terms.iter().map(|(w, c)| (c.clone(), w.clone())).collect();
    while let Some((c, w)) = stack.pop() {
        match find_redex(&w, strategy) {
            None => out.add_term(c, w),
            Some(pos) => {
                let before = measure(&w);
                for (k, w2) in rewrite_at(&w, pos) {
                    debug_assert!(measure(&w2) < before, "rewrite must shrink the measure");
                    stack.push((&c * &k, w2));
                }
            }
        }
    }
    out
}

/// All normal words of the bigrade, vertex-major: compositions of `m` over
/// the vertices in descending lexicographic order, then per-vertex
/// partitions (at most `alpha^i` parts, padded with zeros) in descending
/// lexicographic order.
pub fn canonical_basis(g: &BiGrade) -> Result<Vec<Word>, UplusError> {
    if g.m < 0 {
        return Err(UplusError::NegativeDegree(format!(
            "canonical basis needs m >= 0, got {}",
            g.m
        )));
    }
    let n = g.alpha.n();
    let mut out = Vec::new();
    let mut composition = vec![0i64; n];
    compose_rec(g, 0, g.m, &mut composition, &mut out);
    Ok(out)
}

fn compose_rec(g: &BiGrade, vertex: usize, remaining: i64, comp: &mut Vec<i64>, out: &mut Vec<Word>) {
    let n = g.alpha.n();
    if vertex == n {
        if remaining == 0 {
            let per_vertex: Vec<Vec<Vec<i64>>> = (0..n)
                .map(|i| partitions_into(comp[i], g.alpha.0[i] as usize))
                .collect();
            if per_vertex.iter().any(Vec::is_empty) {
                return;
            }
            let mut pick = vec![0usize; n];
            loop {
                let mut letters = Vec::new();
                for i in 0..n {
                    for &d in &per_vertex[i][pick[i]] {
                        letters.push(Letter::new(i as u32 + 1, d));
                    }
                }
                out.push(Word(letters));
                // Advance with the last vertex fastest.
                let mut i = n;
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    pick[i] += 1;
                    if pick[i] < per_vertex[i].len() {
                        break;
                    }
                    pick[i] = 0;
                }
            }
        }
        return;
    }
    // Descending share for the current vertex keeps the enumeration
    // vertex-major with earlier vertices carrying higher degree first.
    for share in (0..=remaining).rev() {
        comp[vertex] = share;
        compose_rec(g, vertex + 1, remaining - share, comp, out);
    }
    comp[vertex] = 0;
}

/// Partitions of `m` into exactly `parts` weakly decreasing entries `>= 0`
/// (i.e. at most `parts` nonzero parts), in descending lexicographic order.
pub(crate) fn partitions_into(m: i64, parts: usize) -> Vec<Vec<i64>> {
    fn rec(m: i64, parts: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 0 {
            if m == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = m.min(max);
        // Smallest feasible first entry: ceil(m / parts).
        let lo = (m + parts as i64 - 1) / parts as i64;
        for first in (lo..=hi).rev() {
            cur.push(first);
            rec(m - first, parts - 1, first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 && parts == 0 {
        return vec![Vec::new()];
    }
    let mut cur = Vec::new();
    rec(m, parts, m, &mut cur, &mut out);
    out
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct UJson {
    terms: Vec<UTermJson>,
}

#[derive(Serialize, Deserialize)]
struct UTermJson {
    coeff: String,
    word: Vec<(u32, i64)>,
}

impl UElement {
    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| UTermJson {
                coeff: format_rational(c),
                word: w.0.iter().map(|l| (l.vertex, l.degree)).collect(),
            })
            .collect();
        serde_json::to_value(UJson { terms }).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, UplusError> {
        let raw: UJson = serde_json::from_value(value.clone())
            .map_err(|e| UplusError::Parse(e.to_string()))?;
        let mut out = UElement::zero();
        for t in raw.terms {
            let coeff =
                parse_rational(&t.coeff).map_err(|e| UplusError::Parse(e.to_string()))?;
            if t.word.iter().any(|&(v, _)| v == 0) {
                return Err(UplusError::VertexOutOfRange("vertex 0 in word".into()));
            }
            out.add_term(coeff, Word(t.word.into_iter().map(|(v, d)| Letter::new(v, d)).collect()));
        }
        Ok(out)
    }
}
