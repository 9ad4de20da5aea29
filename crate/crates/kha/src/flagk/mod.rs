//! Torus fixed-point model of the Grothendieck groups of `n`-step partial
//! flag varieties `Fl_k(C^N)` with the operators `E_{i,r} 1_k` acting on
//! them, plus the Euler pairing used to form adjoints.
//!
//! `K(Fl_k)` localized at the maximal torus has the coordinate-flag fixed
//! points as a basis; classes are stored as vectors of fixed-point
//! restrictions with entries in the field of rational functions in the
//! torus characters `t_1, ..., t_N`. A fixed point is an ordered set
//! partition of `{1, ..., N}` into `n` blocks with block `i` of size
//! `k_i`. Everything is exact: no specialization of the `t` variables.
//!
//! Conventions fixed here once:
//! * cotangent class at a fixed point: `prod (1 - t_a/t_b)` over pairs
//!   `a in B_u, b in B_v` with `u < v`;
//! * Euler pairing `<a, b> = sum_p dual(a_p) b_p / lambda_p`, where `dual`
//!   inverts every variable (so `<O, O> = 1` on any flag variety);
//! * the homological shift `[1]` is multiplication by `-1`, turning exact
//!   triangles `A -> B -> C` into `[B] = [A] + [C]`.

mod action;
mod sod;

pub use action::{verify_action, ActionCheck, ActionParams, ActionReport};
pub use sod::{e_lambda, sod_check, young_diagrams, SodReport, YoungDiagram, YoungTuple};

use crate::ring::{LaurentPoly, Mono, Rational, RationalFunction, VarId};
use num_traits::One;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

/// Errors from the flag-variety layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlagError {
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("operator shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("adjunction identity failed: {0}")]
    Adjunction(String),
}

/// The torus character `t_a`, stored as the slot-`a` variable of vertex 1
/// (the flag model never mixes these with shuffle variables).
pub fn tvar(a: u32) -> VarId {
    VarId::new(1, a)
}

/// A weight: `n` integer parts. Valid as a flag dimension vector iff all
/// parts are non-negative and sum to `N`; operators step outside this set
/// and land on zero spaces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Composition(pub Vec<i64>);

impl Composition {
    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_valid(&self, big_n: u32) -> bool {
        self.0.iter().all(|&k| k >= 0) && self.total() == i64::from(big_n)
    }

    /// `k - alpha_i` (the target of `E_i`): block `i` grows, `i+1` shrinks.
    pub fn sub_alpha(&self, i: u32) -> Composition {
        let mut v = self.0.clone();
        v[i as usize - 1] += 1;
        v[i as usize] -= 1;
        Composition(v)
    }

    /// `k + alpha_i` (the source weight whose `E_i`-image is `k`).
    pub fn add_alpha(&self, i: u32) -> Composition {
        let mut v = self.0.clone();
        v[i as usize - 1] -= 1;
        v[i as usize] += 1;
        Composition(v)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, k) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// A torus-fixed coordinate flag: ordered set partition of `{1, ..., N}`,
/// block `i` (ascending within itself) spanning the `i`-th graded piece.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FixedPoint {
    pub blocks: Vec<Vec<u32>>,
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, b) in self.blocks.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (jdx, a) in b.iter().enumerate() {
                if jdx > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

/// All fixed points of `Fl_k(C^N)` in a fixed deterministic order
/// (lexicographic by block contents, first block outermost). Weights
/// outside the valid range give the empty list (the zero space).
pub fn fixed_points(k: &Composition, big_n: u32) -> Vec<FixedPoint> {
    if !k.is_valid(big_n) {
        return Vec::new();
    }
    fn rec(sizes: &[i64], pool: &[u32], blocks: &mut Vec<Vec<u32>>, out: &mut Vec<FixedPoint>) {
        match sizes {
            [] => out.push(FixedPoint { blocks: blocks.clone() }),
            [s, rest @ ..] => {
                for choice in combinations(pool, *s as usize) {
                    let remaining: Vec<u32> =
                        pool.iter().copied().filter(|a| !choice.contains(a)).collect();
                    blocks.push(choice);
                    rec(rest, &remaining, blocks, out);
                    blocks.pop();
                }
            }
        }
    }
    let pool: Vec<u32> = (1..=big_n).collect();
    let mut out = Vec::new();
    rec(&k.0, &pool, &mut Vec::new(), &mut out);
    out
}

/// Size-`s` subsets of an (ascending) pool, in lexicographic order.
fn combinations(pool: &[u32], s: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(pool: &[u32], s: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for idx in start..pool.len() {
            cur.push(pool[idx]);
            rec(pool, s, idx + 1, cur, out);
            cur.pop();
        }
    }
    rec(pool, s, 0, &mut Vec::new(), &mut out);
    out
}

/// `lambda_{-1}` of the cotangent space at the fixed point with the given
/// block list: `prod (1 - t_a/t_b)` over `a in B_u`, `b in B_v`, `u < v`.
/// The formula applies to any block list, including the refined ones of
/// the Hecke correspondences.
pub fn lambda_cotangent(blocks: &[Vec<u32>]) -> LaurentPoly {
    let mut out = LaurentPoly::one();
    for u in 0..blocks.len() {
        for v in (u + 1)..blocks.len() {
            for &a in &blocks[u] {
                for &b in &blocks[v] {
                    let ratio = Mono::from_pairs([(tvar(a), 1), (tvar(b), -1)]);
                    out = out.mul(
                        &LaurentPoly::one().sub(&LaurentPoly::monomial(ratio, Rational::one())),
                    );
                }
            }
        }
    }
    out
}

/// A linear map `K(source) -> K(target)` in fixed-point coordinates:
/// rows indexed by the target's fixed points, columns by the source's.
#[derive(Clone, PartialEq, Debug)]
pub struct KOperator {
    pub source: Composition,
    pub target: Composition,
    // Explicit dimensions: a zero space on either side leaves no row (or
    // column) to infer the other extent from.
    rows: usize,
    cols: usize,
    entries: Vec<Vec<RationalFunction>>,
}

impl KOperator {
    pub fn zero(source: Composition, target: Composition, rows: usize, cols: usize) -> Self {
        KOperator {
            source,
            target,
            rows,
            cols,
            entries: vec![vec![RationalFunction::zero(); cols]; rows],
        }
    }

    pub fn identity(k: Composition, dim: usize) -> Self {
        let mut op = KOperator::zero(k.clone(), k, dim, dim);
        for d in 0..dim {
            op.entries[d][d] = RationalFunction::one();
        }
        op
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &RationalFunction {
        &self.entries[row][col]
    }

    pub(crate) fn set_entry(&mut self, row: usize, col: usize, value: RationalFunction) {
        self.entries[row][col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(RationalFunction::is_zero)
    }

    /// An identity includes every operator between zero spaces.
    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.rows() == self.cols()
            && self.entries.iter().enumerate().all(|(r, row)| {
                row.iter().enumerate().all(|(c, e)| {
                    if r == c {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn nonzero_entries(&self) -> usize {
        self.entries.iter().flatten().filter(|e| !e.is_zero()).count()
    }

    pub fn add(&self, other: &KOperator) -> Result<KOperator, FlagError> {
        if self.source != other.source
            || self.target != other.target
            || self.rows() != other.rows()
            || self.cols() != other.cols()
        {
            return Err(FlagError::ShapeMismatch(format!(
                "add: {} -> {} vs {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        let mut out = self.clone();
        for (r, row) in other.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                out.entries[r][c] = out.entries[r][c].add(e);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> KOperator {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &KOperator) -> Result<KOperator, FlagError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> KOperator {
        let mut out = self.clone();
        let c = RationalFunction::constant(c.clone());
        for row in &mut out.entries {
            for e in row.iter_mut() {
                *e = e.mul(&c);
            }
        }
        out
    }

    /// `self . first`: apply `first`, then `self`.
    pub fn compose(&self, first: &KOperator) -> Result<KOperator, FlagError> {
        if self.source != first.target || self.cols() != first.rows() {
            return Err(FlagError::ShapeMismatch(format!(
                "compose: {} -> {} after {} -> {}",
                self.source, self.target, first.source, first.target
            )));
        }
        let mut out =
            KOperator::zero(first.source.clone(), self.target.clone(), self.rows(), first.cols());
        for r in 0..self.rows() {
            for c in 0..first.cols() {
                let mut acc = RationalFunction::zero();
                for mid in 0..self.cols() {
                    let term = self.entries[r][mid].mul(&first.entries[mid][c]);
                    acc = acc.add(&term);
                }
                out.entries[r][c] = acc;
            }
        }
        Ok(out)
    }

    /// Applies the operator to a restriction vector.
    pub fn apply(&self, v: &[RationalFunction]) -> Result<Vec<RationalFunction>, FlagError> {
        if v.len() != self.cols() {
            return Err(FlagError::ShapeMismatch(format!(
                "apply: vector of length {} to operator with {} columns",
                v.len(),
                self.cols()
            )));
        }
        Ok((0..self.rows())
            .map(|r| {
                let mut acc = RationalFunction::zero();
                for (c, x) in v.iter().enumerate() {
                    acc = acc.add(&self.entries[r][c].mul(x));
                }
                acc
            })
            .collect())
    }
}

/// Shared context: the flag parameters and memoized fixed-point sets,
/// localization weights, operators, and adjoints.
pub struct FlagCtx {
    n: usize,
    big_n: u32,
    fp_cache: RefCell<BTreeMap<Composition, Rc<Vec<FixedPoint>>>>,
    lam_cache: RefCell<BTreeMap<Vec<Vec<u32>>, Rc<RationalFunction>>>,
    op_cache: RefCell<BTreeMap<(u32, i64, Composition), Rc<KOperator>>>,
    adj_cache: RefCell<BTreeMap<(u32, i64, Composition, Side), Rc<KOperator>>>,
}

/// Which adjoint of an operator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl FlagCtx {
    pub fn new(n: usize, big_n: u32) -> Self {
        assert!(n >= 1, "need at least one flag step");
        FlagCtx {
            n,
            big_n,
            fp_cache: RefCell::new(BTreeMap::new()),
            lam_cache: RefCell::new(BTreeMap::new()),
            op_cache: RefCell::new(BTreeMap::new()),
            adj_cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_n(&self) -> u32 {
        self.big_n
    }

    /// All valid weights, lexicographically.
    pub fn weights(&self) -> Vec<Composition> {
        fn rec(parts: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Composition>) {
            if parts == 1 {
                cur.push(left);
                out.push(Composition(cur.clone()));
                cur.pop();
                return;
            }
            for first in 0..=left {
                cur.push(first);
                rec(parts - 1, left - first, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.n, i64::from(self.big_n), &mut Vec::new(), &mut out);
        out
    }

    pub fn fixed_points(&self, k: &Composition) -> Rc<Vec<FixedPoint>> {
        if let Some(hit) = self.fp_cache.borrow().get(k) {
            return hit.clone();
        }
        let fresh = Rc::new(fixed_points(k, self.big_n));
        self.fp_cache.borrow_mut().insert(k.clone(), fresh.clone());
        fresh
    }

    pub fn dim(&self, k: &Composition) -> usize {
        self.fixed_points(k).len()
    }

    /// Memoized `lambda_{-1}(T*)` for an arbitrary block list.
    pub fn lambda(&self, blocks: &[Vec<u32>]) -> Rc<RationalFunction> {
        if let Some(hit) = self.lam_cache.borrow().get(blocks) {
            return hit.clone();
        }
        let fresh = Rc::new(RationalFunction::from_poly(lambda_cotangent(blocks)));
        self.lam_cache.borrow_mut().insert(blocks.to_vec(), fresh.clone());
        fresh
    }

    /// Gram matrix of the Euler pairing in fixed-point coordinates:
    /// diagonal with `1/lambda_p` at the point `p`.
    pub fn euler_gram(&self, k: &Composition) -> Vec<Vec<RationalFunction>> {
        let fps = self.fixed_points(k);
        let dim = fps.len();
        let mut gram = vec![vec![RationalFunction::zero(); dim]; dim];
        for (d, p) in fps.iter().enumerate() {
            gram[d][d] = self.lambda(&p.blocks).inv().expect("lambda is nonzero");
        }
        gram
    }

    /// `<a, b> = sum_p dual(a_p) b_p / lambda_p` over the fixed points of
    /// `Fl_k`; the restriction vectors must match the fixed-point count.
    pub fn euler_pair(
        &self,
        k: &Composition,
        a: &[RationalFunction],
        b: &[RationalFunction],
    ) -> Result<RationalFunction, FlagError> {
        let fps = self.fixed_points(k);
        if a.len() != fps.len() || b.len() != fps.len() {
            return Err(FlagError::ShapeMismatch(format!(
                "pairing over {} needs vectors of length {}",
                k,
                fps.len()
            )));
        }
        let mut acc = RationalFunction::zero();
        for (idx, p) in fps.iter().enumerate() {
            let lam = self.lambda(&p.blocks);
            let term = a[idx]
                .dual()
                .mul(&b[idx])
                .mul(&lam.inv().expect("lambda is nonzero"));
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    pub(crate) fn cached_op(&self, key: (u32, i64, Composition)) -> Option<Rc<KOperator>> {
        self.op_cache.borrow().get(&key).cloned()
    }

    pub(crate) fn store_op(&self, key: (u32, i64, Composition), op: KOperator) -> Rc<KOperator> {
        let rc = Rc::new(op);
        self.op_cache.borrow_mut().insert(key, rc.clone());
        rc
    }

    pub(crate) fn cached_adj(
        &self,
        key: (u32, i64, Composition, Side),
    ) -> Option<Rc<KOperator>> {
        self.adj_cache.borrow().get(&key).cloned()
    }

    pub(crate) fn store_adj(
        &self,
        key: (u32, i64, Composition, Side),
        op: KOperator,
    ) -> Rc<KOperator> {
        let rc = Rc::new(op);
        self.adj_cache.borrow_mut().insert(key, rc.clone());
        rc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat_int, SlotPerm};

    fn comp(v: &[i64]) -> Composition {
        Composition(v.to_vec())
    }

    #[test]
    fn fixed_point_enumeration() {
        let fps = fixed_points(&comp(&[1, 1]), 2);
        assert_eq!(fps.len(), 2);
        assert_eq!(fps[0].blocks, vec![vec![1], vec![2]]);
        assert_eq!(fps[1].blocks, vec![vec![2], vec![1]]);
        assert_eq!(fixed_points(&comp(&[2, 2]), 4).len(), 6);
        assert_eq!(fixed_points(&comp(&[0, 3]), 3).len(), 1);
        assert_eq!(fixed_points(&comp(&[1, 1, 2]), 4).len(), 12);
        // Out-of-range weights give the zero space.
        assert!(fixed_points(&comp(&[-1, 3]), 2).is_empty());
        assert!(fixed_points(&comp(&[1, 2]), 2).is_empty());
    }

    #[test]
    fn lambda_on_projective_line() {
        // At ({1},{2}): cotangent weight t1/t2.
        let lam = lambda_cotangent(&[vec![1], vec![2]]);
        let expect = LaurentPoly::one().sub(&LaurentPoly::monomial(
            Mono::from_pairs([(tvar(1), 1), (tvar(2), -1)]),
            Rational::one(),
        ));
        assert_eq!(lam, expect);
        // A point has trivial cotangent class.
        assert!(lambda_cotangent(&[vec![], vec![1, 2]]).is_one());
    }

    #[test]
    fn euler_characteristic_of_structure_sheaf_is_one() {
        // chi(O) = sum 1/lambda_p = 1 on every flag variety.
        for (k, big_n) in [
            (comp(&[1, 1]), 2u32),
            (comp(&[2, 1]), 3),
            (comp(&[1, 1, 1]), 3),
            (comp(&[2, 2]), 4),
        ] {
            let ctx = FlagCtx::new(k.n(), big_n);
            let ones = vec![RationalFunction::one(); ctx.dim(&k)];
            let chi = ctx.euler_pair(&k, &ones, &ones).unwrap();
            assert!(chi.is_one(), "chi(O) on {k} was {chi}");
        }
    }

    #[test]
    fn euler_pairings_on_p1_match_closed_forms() {
        let ctx = FlagCtx::new(2, 2);
        let k = comp(&[1, 1]);
        let ones = vec![RationalFunction::one(); 2];
        // V1 restricts to t_a at the point whose first block is {a}.
        let v1 = vec![
            RationalFunction::from_poly(LaurentPoly::var(tvar(1), 1)),
            RationalFunction::from_poly(LaurentPoly::var(tvar(2), 1)),
        ];
        // <V1, V1> = sum 1/lambda = 1.
        assert!(ctx.euler_pair(&k, &v1, &v1).unwrap().is_one());
        // chi(V1) = <O, V1> = 0 (O(-1) has no cohomology).
        assert!(ctx.euler_pair(&k, &ones, &v1).unwrap().is_zero());
        // <V1, O> = t1^{-1} + t2^{-1}.
        let expect = RationalFunction::from_poly(
            LaurentPoly::var(tvar(1), -1).add(&LaurentPoly::var(tvar(2), -1)),
        );
        assert_eq!(ctx.euler_pair(&k, &v1, &ones).unwrap(), expect);
    }

    #[test]
    fn global_pairings_are_symmetric_laurent_polynomials() {
        let ctx = FlagCtx::new(3, 3);
        let k = comp(&[1, 1, 1]);
        let ones = vec![RationalFunction::one(); ctx.dim(&k)];
        let chi = ctx.euler_pair(&k, &ones, &ones).unwrap();
        assert!(chi.as_laurent().is_some());
        // Invariance under a transposition of torus characters.
        let swap = SlotPerm::on_vertex(1, vec![2, 1, 3]).unwrap();
        assert_eq!(chi.permute_vars(&swap).unwrap(), chi);
    }

    #[test]
    fn operator_shapes_and_identity_laws() {
        let k = comp(&[1, 1]);
        let id = KOperator::identity(k.clone(), 2);
        assert!(id.is_identity());
        assert!(!id.is_zero());
        let z = KOperator::zero(k.clone(), comp(&[2, 0]), 1, 2);
        assert!(z.is_zero());
        assert_eq!(z.nonzero_entries(), 0);
        let zz = z.compose(&id).unwrap();
        assert!(zz.is_zero());
        assert_eq!(zz.rows(), 1);
        assert_eq!(zz.cols(), 2);
        assert!(id.compose(&z).is_err());
        // Identity on a zero space is the empty matrix.
        assert!(KOperator::identity(comp(&[-1, 3]), 0).is_identity());
        // Extents survive passage through a zero space: 2x0 after 0x2 is 2x2.
        let to_zero = KOperator::zero(k.clone(), comp(&[-1, 3]), 0, 2);
        let from_zero = KOperator::zero(comp(&[-1, 3]), k.clone(), 2, 0);
        let through = from_zero.compose(&to_zero).unwrap();
        assert_eq!((through.rows(), through.cols()), (2, 2));
        assert!(through.is_zero());
        let scaled = id.scale(&rat_int(3));
        assert_eq!(scaled.entry(0, 0), &RationalFunction::constant(rat_int(3)));
    }

    #[test]
    fn weights_enumeration_counts_compositions() {
        let ctx = FlagCtx::new(3, 3);
        let ws = ctx.weights();
        assert_eq!(ws.len(), 10);
        assert!(ws.iter().all(|k| k.is_valid(3)));
        assert_eq!(ws[0], comp(&[0, 0, 3]));
        let total: usize = ws.iter().map(|k| ctx.dim(k)).sum();
        // sum of multinomials = 3^3.
        assert_eq!(total, 27);
    }
}
