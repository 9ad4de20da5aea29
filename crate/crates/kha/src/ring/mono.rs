use super::VarId;
use std::cmp::Ordering;

/// A Laurent monomial: sparse exponent vector, sorted by variable, with no
/// zero exponents. The derived `Ord` is only a deterministic storage order;
/// the monomial (division) order used by algorithms is [`Mono::grlex_cmp`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono {
    exps: Vec<(VarId, i64)>,
}

impl Mono {
    pub fn one() -> Self {
        Mono { exps: Vec::new() }
    }

    pub fn var(v: VarId, e: i64) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono { exps: vec![(v, e)] }
        }
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, i64)>>(pairs: I) -> Self {
        let mut exps: Vec<(VarId, i64)> = Vec::new();
        for (v, e) in pairs {
            exps.push((v, e));
        }
        exps.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(VarId, i64)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        merged.retain(|&(_, e)| e != 0);
        Mono { exps: merged }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exp(&self, v: VarId) -> i64 {
        match self.exps.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i64)> + '_ {
        self.exps.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        merge_exps(&self.exps, &other.exps, false)
    }

    /// `self / other` as a Laurent monomial (always defined).
    pub fn div(&self, other: &Mono) -> Mono {
        merge_exps(&self.exps, &other.exps, true)
    }

    pub fn inv(&self) -> Mono {
        Mono { exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect() }
    }

    pub fn pow(&self, k: i64) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono { exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect() }
    }

    /// Whether `other / self` has no negative exponents.
    pub fn divides(&self, other: &Mono) -> bool {
        other.div(self).exps.iter().all(|&(_, e)| e >= 0)
    }

    /// Graded-lexicographic order: total degree first, then the exponent
    /// vector read in increasing `VarId` order (missing variables count 0,
    /// larger exponent on the earliest differing variable wins).
    pub fn grlex_cmp(&self, other: &Mono) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut a, mut b) = (self.exps.iter().peekable(), other.exps.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord,
                    },
                    // The side owning the earlier variable has a nonzero
                    // exponent where the other has 0.
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                },
                (Some(&&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&&(_, eb))) => return 0.cmp(&eb),
            }
        }
    }

    /// Applies a variable map; the map must be injective on this monomial's
    /// support (enforced by `from_pairs` merging: callers pass bijections).
    pub fn map_vars<F: Fn(VarId) -> VarId>(&self, f: F) -> Mono {
        Mono::from_pairs(self.exps.iter().map(|&(v, e)| (f(v), e)))
    }
}

fn merge_exps(a: &[(VarId, i64)], b: &[(VarId, i64)], negate_b: bool) -> Mono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let pick_a = match (a.get(i), b.get(j)) {
            (Some(&(va, _)), Some(&(vb, _))) => {
                if va == vb {
                    let eb = if negate_b { -b[j].1 } else { b[j].1 };
                    let e = a[i].1 + eb;
                    if e != 0 {
                        out.push((va, e));
                    }
                    i += 1;
                    j += 1;
                    continue;
                }
                va < vb
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if pick_a {
            out.push(a[i]);
            i += 1;
        } else {
            let eb = if negate_b { -b[j].1 } else { b[j].1 };
            out.push((b[j].0, eb));
            j += 1;
        }
    }
    Mono { exps: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::xvar;

    #[test]
    fn mul_div_roundtrip() {
        let m = Mono::from_pairs([(xvar(1, 1), 2), (xvar(2, 1), -1)]);
        let n = Mono::from_pairs([(xvar(1, 1), -2), (xvar(1, 2), 5)]);
        assert_eq!(m.mul(&n).div(&n), m);
        assert_eq!(m.mul(&m.inv()), Mono::one());
        assert_eq!(m.exp(xvar(2, 1)), -1);
        assert_eq!(m.exp(xvar(3, 1)), 0);
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let x = |e| Mono::var(xvar(1, 1), e);
        let y = |e| Mono::var(xvar(1, 2), e);
        assert_eq!(x(2).grlex_cmp(&y(1)), Ordering::Greater);
        assert_eq!(x(1).grlex_cmp(&y(1)), Ordering::Greater);
        assert_eq!(x(-1).grlex_cmp(&Mono::one()), Ordering::Less);
        assert_eq!(
            x(1).mul(&y(1)).grlex_cmp(&x(2)),
            Ordering::Less,
            "x*y < x^2 in lex tie-break"
        );
    }

    #[test]
    fn divides_is_ordinary_divisibility() {
        let m = Mono::from_pairs([(xvar(1, 1), 1), (xvar(1, 2), 1)]);
        let n = Mono::from_pairs([(xvar(1, 1), 2), (xvar(1, 2), 1)]);
        assert!(m.divides(&n));
        assert!(!n.divides(&m));
    }
}
