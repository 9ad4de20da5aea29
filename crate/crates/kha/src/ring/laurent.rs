use super::mono::Mono;
use super::{format_rational, parse_rational, rational_content, Rational, RingError, SlotPerm, VarId};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// A multivariate Laurent polynomial with exact rational coefficients.
///
/// Invariant: no stored coefficient is zero, so the term map is a canonical
/// form and derived equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Mono, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        LaurentPoly { terms }
    }

    pub fn var(v: VarId, e: i64) -> Self {
        Self::monomial(Mono::var(v, e), Rational::one())
    }

    pub fn monomial(m: Mono, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Rational)>>(iter: I) -> Self {
        let mut out = LaurentPoly::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&Mono::one()).map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Mono::is_one)
    }

    /// Whether the support is a single monomial (a unit in the Laurent ring).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    /// Graded-lex leading term.
    pub fn leading(&self) -> Option<(&Mono, &Rational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| a.grlex_cmp(b))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> LaurentPoly {
        if m.is_one() {
            return self.clone();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let (small, large) = if self.num_terms() <= other.num_terms() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = LaurentPoly::zero();
        for (m, c) in &small.terms {
            for (n, d) in &large.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Applies a variable map to every monomial. The map must be injective
    /// on the polynomial's variable support; repeated images would silently
    /// merge exponents, so callers pass bijections only.
    pub fn map_vars<F: Fn(VarId) -> VarId>(&self, f: F) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Permutes slots within each vertex: `x[i,j] -> x[i,perm(j)]`.
    pub fn permute_vars(&self, perm: &SlotPerm) -> Result<LaurentPoly, RingError> {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mapped: Result<Vec<(VarId, i64)>, RingError> =
                m.iter().map(|(v, e)| perm.apply(v).map(|w| (w, e))).collect();
            out.add_term(Mono::from_pairs(mapped?), c.clone());
        }
        Ok(out)
    }

    /// The substitution `x -> x^{-1}` on every variable.
    pub fn invert_vars(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.inv(), c.clone())).collect(),
        }
    }

    /// Per-variable minimum exponent over the support, as a monomial.
    /// A variable absent from some term has exponent 0 there, so the
    /// minimum is taken over the full support.
    pub fn min_exponents(&self) -> Mono {
        let pairs = self.vars().into_iter().map(|v| {
            let min = self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0);
            (v, min)
        });
        Mono::from_pairs(pairs)
    }

    /// Factors `self = ordinary * shift` with `ordinary` having minimum
    /// exponent exactly 0 in each of its variables.
    pub fn to_ordinary(&self) -> (LaurentPoly, Mono) {
        if self.is_zero() {
            return (LaurentPoly::zero(), Mono::one());
        }
        let shift = self.min_exponents();
        (self.mul_mono(&shift.inv()), shift)
    }

    /// Exact division: returns `q` with `self = q * d`, or an error when no
    /// such Laurent polynomial exists.
    pub fn exact_div(&self, d: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        if d.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let (mut rem, m_num) = self.to_ordinary();
        let (den, m_den) = d.to_ordinary();
        let (lt_m, lt_c) = den.leading().expect("nonzero divisor");
        let (lt_m, lt_c) = (lt_m.clone(), lt_c.clone());
        let mut quo = LaurentPoly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().expect("nonzero remainder");
            if !lt_m.divides(rm) {
                return Err(RingError::InexactDivision(format!(
                    "leading term {} not divisible by {}",
                    rm, lt_m
                )));
            }
            let t_m = rm.div(&lt_m);
            let t_c = rc / &lt_c;
            quo.add_term(t_m.clone(), t_c.clone());
            rem = rem.sub(&den.mul_mono(&t_m).scale(&t_c));
        }
        Ok(quo.mul_mono(&m_num.div(&m_den)))
    }

    /// Divides out the rational content, returning `(primitive, content)`
    /// with `self = content * primitive`; `primitive` has coprime integer
    /// coefficients and positive graded-lex leading coefficient.
    pub fn primitive_part(&self) -> (LaurentPoly, Rational) {
        if self.is_zero() {
            return (LaurentPoly::zero(), Rational::one());
        }
        let coeffs: Vec<&Rational> = self.terms.values().collect();
        let lead = self.leading().expect("nonzero").1;
        let content = rational_content(&coeffs, lead);
        let inv = Rational::one() / &content;
        (self.scale(&inv), content)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Canonical text grammar: terms joined by ` + `, each term
/// `p/q` or `p/q * x[i,j]^e * ...`, sorted by descending graded-lex
/// exponent vector. The zero polynomial prints as `0`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Mono, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.grlex_cmp(a));
        let mut first = true;
        for (m, c) in terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            if !m.is_one() {
                write!(f, " * {m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, RingError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RingError::Parse("empty polynomial text".into()));
        }
        if s == "0" {
            return Ok(LaurentPoly::zero());
        }
        let mut out = LaurentPoly::zero();
        for term in s.split(" + ") {
            let (m, c) = parse_term(term)?;
            out.add_term(m, c);
        }
        Ok(out)
    }
}

fn parse_term(s: &str) -> Result<(Mono, Rational), RingError> {
    let mut coeff = Rational::one();
    let mut have_coeff = false;
    let mut pairs: Vec<(VarId, i64)> = Vec::new();
    for (idx, factor) in s.split('*').enumerate() {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(RingError::Parse(format!("empty factor in term `{s}`")));
        }
        if factor.starts_with('x') {
            pairs.push(parse_var_power(factor)?);
        } else if idx == 0 && !have_coeff {
            coeff = parse_rational(factor)?;
            have_coeff = true;
        } else {
            return Err(RingError::Parse(format!("unexpected factor `{factor}`")));
        }
    }
    Ok((Mono::from_pairs(pairs), coeff))
}

fn parse_var_power(s: &str) -> Result<(VarId, i64), RingError> {
    let bad = || RingError::Parse(format!("invalid variable factor `{s}`"));
    let rest = s.strip_prefix("x[").ok_or_else(bad)?;
    let (idx, tail) = rest.split_once(']').ok_or_else(bad)?;
    let (i, j) = idx.split_once(',').ok_or_else(bad)?;
    let vertex: u32 = i.trim().parse().map_err(|_| bad())?;
    let slot: u32 = j.trim().parse().map_err(|_| bad())?;
    if vertex == 0 || slot == 0 {
        return Err(bad());
    }
    let exp: i64 = match tail.trim() {
        "" => 1,
        t => t.strip_prefix('^').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?,
    };
    Ok((VarId::new(vertex, slot), exp))
}
