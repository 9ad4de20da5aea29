//! Young-diagram indexed block collections in `K(Fl_k)` and the
//! semiorthogonal-decomposition checks.
//!
//! For each tuple `(lambda(1), ..., lambda(n-1))` with
//! `lambda(i) in P(k_{i+1}, b_i)`, `b_i = k_1 + ... + k_i`, the block
//! embedding from the highest weight `eta = (0, ..., 0, N)` is
//!
//! ```text
//! E_lambda 1_eta = E_{1,lambda(1)} E_{2,lambda(2)} ... E_{n-1,lambda(n-1)} 1_eta
//! ```
//!
//! where the stage `E_{i,lambda(i)}` strings `b_i` operators
//! `E_{i,lambda(i)_1} ... E_{i,lambda(i)_{b_i}}` (parts padded with zeros,
//! the last and smallest applied first). `K(eta)` is one-dimensional, so
//! fully-faithfulness is the scalar identity `[E^R_lambda E_lambda] = 1`
//! and semiorthogonality is `[E^R_lambda E_lambda'] = 0` for
//! `lambda <_pl lambda'`.

use super::{Composition, FlagCtx, FlagError, KOperator, Side};
use serde::Serialize;

/// A Young diagram: weakly decreasing positive row lengths, trailing zero
/// rows stripped. The derived order is the first-row-difference
/// lexicographic order `<_l` (on stripped rows it coincides with the
/// zero-padded comparison).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct YoungDiagram(pub Vec<i64>);

impl YoungDiagram {
    /// Row lengths padded with zeros to exactly `rows` entries.
    pub fn padded(&self, rows: usize) -> Vec<i64> {
        assert!(self.0.len() <= rows, "diagram has more than {rows} rows");
        let mut out = self.0.clone();
        out.resize(rows, 0);
        out
    }
}

/// The set `P(a, b)`: diagrams with first row at most `a` and at most `b`
/// rows, enumerated ascending in `<_l`.
pub fn young_diagrams(a: i64, b: i64) -> Vec<YoungDiagram> {
    if a <= 0 || b <= 0 {
        return vec![YoungDiagram(Vec::new())];
    }
    let mut out = vec![YoungDiagram(Vec::new())];
    for first in 1..=a {
        for rest in young_diagrams(first, b - 1) {
            let mut rows = vec![first];
            rows.extend(rest.0);
            out.push(YoungDiagram(rows));
        }
    }
    out
}

/// A tuple `(lambda(1), ..., lambda(n-1))` indexing one block.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct YoungTuple(pub Vec<YoungDiagram>);

impl YoungTuple {
    /// Strictly below in the product of the lexicographic orders: no
    /// component above, at least one strictly below.
    pub fn plex_less(&self, other: &Self) -> bool {
        assert_eq!(self.0.len(), other.0.len(), "tuples index different flags");
        self != other && self.0.iter().zip(&other.0).all(|(x, y)| x <= y)
    }
}

/// The operator `[E_lambda 1_eta] : K(eta) -> K(k)`.
pub fn e_lambda(ctx: &FlagCtx, k: &Composition, tuple: &YoungTuple) -> Result<KOperator, FlagError> {
    let n = ctx.n();
    if k.n() != n || !k.is_valid(ctx.big_n()) {
        return Err(FlagError::InvalidComposition(format!("{k} is not a weight for N = {}", ctx.big_n())));
    }
    assert_eq!(tuple.0.len(), n - 1, "one diagram per generator index");
    let mut eta = vec![0; n];
    eta[n - 1] = i64::from(ctx.big_n());
    let eta = Composition(eta);
    let mut op = KOperator::identity(eta.clone(), ctx.dim(&eta));
    let mut w = eta;
    for i in (1..n).rev() {
        let b_i: i64 = k.0[..i].iter().sum();
        let parts = tuple.0[i - 1].padded(b_i as usize);
        for &r in parts.iter().rev() {
            op = ctx.operator_e(i as u32, r, &w).compose(&op)?;
            w = w.sub_alpha(i as u32);
        }
    }
    assert_eq!(&w, k, "stage lengths must add up to the target weight");
    Ok(op)
}

/// Result of the block-collection checks at one weight.
#[derive(Debug, Clone, Serialize)]
pub struct SodReport {
    pub n: usize,
    pub big_n: u32,
    pub k: Vec<i64>,
    pub blocks: usize,
    pub rank: usize,
    pub fullness: bool,
    pub ff_failures: usize,
    pub so_failures: usize,
    pub pairs_checked: usize,
    pub gram_lower_triangular: bool,
    pub tuples: Vec<YoungTuple>,
    pub pass: bool,
}

/// Checks, over all index tuples for the weight `k`:
/// fully-faithfulness `[E^R_lambda E_lambda] = 1`, semiorthogonality
/// `[E^R_lambda E_lambda'] = 0` for `lambda <_pl lambda'`, and that the
/// block count matches the rank of `K(Fl_k)`.
pub fn sod_check(ctx: &FlagCtx, k: &Composition) -> Result<SodReport, FlagError> {
    let n = ctx.n();
    if k.n() != n || !k.is_valid(ctx.big_n()) {
        return Err(FlagError::InvalidComposition(format!("{k} is not a weight for N = {}", ctx.big_n())));
    }
    // Tuples in ascending tuple-lex order (a linear extension of <_pl):
    // the stage-1 diagram is the outermost digit.
    let mut tuples = vec![YoungTuple(Vec::new())];
    for i in 1..n {
        let b_i: i64 = k.0[..i].iter().sum();
        let stage = young_diagrams(k.0[i], b_i);
        let mut extended = Vec::with_capacity(tuples.len() * stage.len());
        for t in &tuples {
            for d in &stage {
                let mut longer = t.clone();
                longer.0.push(d.clone());
                extended.push(longer);
            }
        }
        tuples = extended;
    }
    tuples.sort();
    let embeddings = tuples
        .iter()
        .map(|t| e_lambda(ctx, k, t))
        .collect::<Result<Vec<_>, _>>()?;
    let adjoints = embeddings
        .iter()
        .map(|e| ctx.adjoint(e, Side::Right))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ff_failures = 0;
    let mut so_failures = 0;
    let mut pairs_checked = 0;
    for (row, adj) in adjoints.iter().enumerate() {
        for (col, emb) in embeddings.iter().enumerate() {
            let gram = adj.compose(emb)?;
            if row == col {
                if !gram.is_identity() {
                    ff_failures += 1;
                }
            } else if tuples[row].plex_less(&tuples[col]) {
                pairs_checked += 1;
                if !gram.is_zero() {
                    so_failures += 1;
                }
            }
        }
    }
    let blocks = tuples.len();
    let rank = ctx.dim(k);
    let fullness = blocks == rank;
    let gram_lower_triangular = ff_failures == 0 && so_failures == 0;
    let pass = gram_lower_triangular && fullness;
    Ok(SodReport {
        n,
        big_n: ctx.big_n(),
        k: k.0.clone(),
        blocks,
        rank,
        fullness,
        ff_failures,
        so_failures,
        pairs_checked,
        gram_lower_triangular,
        tuples,
        pass,
    })
}
