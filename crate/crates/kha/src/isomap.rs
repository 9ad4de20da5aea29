//! The homomorphism `phi` sending `e[i,r]` to `x[i,1]^(-r)`, extended
//! multiplicatively along the shuffle product. The module verifies the
//! defining relations under `phi`, counts graded dimensions by the
//! partition formula, and certifies bijectivity bigrade by bigrade via
//! exact matrix rank: in bigrade `(alpha, m)` the canonical words, the
//! partition-count formula, and the orbit keys of the target's negative
//! sector (per-vertex nonpositive exponents summing to `-m`) must all
//! agree, with the `phi`-images of the canonical words of full rank.
//!
//! Grading convention: the word side carries the loop degree `m = sum r`;
//! on the shuffle side this is total exponent `-m`. The reports keep the
//! word-side `m` and convert only when touching exponents.

use crate::ring::Rational;
use crate::shuffle::{DimVector, KHAElement, OrbitKey, ShuffleError};
use crate::uplus::{self, BiGrade, UElement, UplusError, Word};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Errors from the verification layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsoError {
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error(transparent)]
    Word(#[from] UplusError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
}

/// Image of a single word: the shuffle product of its letter images.
pub fn phi_word(n: usize, w: &Word) -> Result<KHAElement, IsoError> {
    w.bigrade(n)?;
    let mut acc = KHAElement::unit(n);
    for l in &w.0 {
        acc = acc.shuffle_mul(&KHAElement::generator(n, l.vertex, l.degree))?;
    }
    Ok(acc)
}

/// Linear extension of [`phi_word`].
pub fn phi(n: usize, u: &UElement) -> Result<KHAElement, IsoError> {
    let mut out = KHAElement::zero(n);
    for (w, c) in u.terms() {
        out = out.add(&phi_word(n, w)?.scale(c))?;
    }
    Ok(out)
}

/// One relation instance checked under `phi`.
#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub family: String,
    pub i: u32,
    pub j: u32,
    pub r: i64,
    pub s: i64,
    pub pass: bool,
    /// Orbit terms left in the defect; 0 exactly when the check passes.
    pub residual_orbits: usize,
}

/// Relation suite for all vertices of the `n`-vertex quiver over a degree
/// window.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub n: usize,
    pub window: (i64, i64),
    pub checks: Vec<RelationCheck>,
    pub pass: bool,
}

/// Checks the three defining relation families (plus the explicit
/// adjacent-degree vanishing) under `phi` for all `r, s` in the window.
pub fn verify_relations(n: usize, window: (i64, i64)) -> Result<RelationReport, IsoError> {
    let (lo, hi) = window;
    let gen = |i: u32, r: i64| KHAElement::generator(n, i, r);
    let mut checks = Vec::new();
    let mut push = |family: &str, i: u32, j: u32, r: i64, s: i64, defect: KHAElement| {
        let residual_orbits = defect
            .components()
            .map(|(_, sym)| sym.num_orbits())
            .sum::<usize>();
        checks.push(RelationCheck {
            family: family.to_string(),
            i,
            j,
            r,
            s,
            pass: defect.is_zero(),
            residual_orbits,
        });
    };
    for i in 1..=n as u32 {
        for r in lo..=hi {
            // e[i,r] e[i,r+1] = 0.
            let zero = gen(i, r).shuffle_mul(&gen(i, r + 1))?;
            push("same-vertex-zero", i, i, r, r + 1, zero);
            for s in lo..=hi {
                // e[i,r] e[i,s] + e[i,s-1] e[i,r+1] = 0.
                let defect = gen(i, r)
                    .shuffle_mul(&gen(i, s))?
                    .add(&gen(i, s - 1).shuffle_mul(&gen(i, r + 1))?)?;
                push("same-vertex", i, i, r, s, defect);
                // e[i+1,s] e[i,r] = e[i,r] e[i+1,s] - e[i,r+1] e[i+1,s-1].
                if (i as usize) < n {
                    let lhs = gen(i + 1, s).shuffle_mul(&gen(i, r))?;
                    let rhs = gen(i, r)
                        .shuffle_mul(&gen(i + 1, s))?
                        .add(&gen(i, r + 1).shuffle_mul(&gen(i + 1, s - 1))?.neg())?;
                    push("adjacent", i, i + 1, r, s, lhs.add(&rhs.neg())?);
                }
                // Distant generators commute.
                for j in (i + 2)..=(n as u32) {
                    let defect = gen(i, r)
                        .shuffle_mul(&gen(j, s))?
                        .add(&gen(j, s).shuffle_mul(&gen(i, r))?.neg())?;
                    push("distant", i, j, r, s, defect);
                }
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(RelationReport { n, window, checks, pass })
}

/// `p_d(m)`: partitions of `m` into at most `d` parts, by the bounded-part
/// recurrence (conjugation: parts of size at most `d`).
pub fn partition_count(d: u32, m: i64) -> u64 {
    if m < 0 {
        return 0;
    }
    let m = m as usize;
    let mut dp = vec![0u64; m + 1];
    dp[0] = 1;
    for part in 1..=(d as usize).min(m) {
        for t in part..=m {
            dp[t] += dp[t - part];
        }
    }
    dp[m]
}

/// Dimension of the bigraded piece: the sum over compositions
/// `m = m_1 + ... + m_n` of `prod_i p_{alpha^i}(m_i)`.
pub fn sector_dimension(g: &BiGrade) -> u64 {
    fn rec(alpha: &[u32], m: i64) -> u64 {
        match alpha {
            [] => u64::from(m == 0),
            [d, rest @ ..] => (0..=m).map(|mi| partition_count(*d, mi) * rec(rest, m - mi)).sum(),
        }
    }
    if g.m < 0 {
        return 0;
    }
    rec(&g.alpha.0, g.m)
}

/// All orbit keys of the negative-sector component of grade `alpha` with
/// total exponent `-m`: per vertex, a weakly decreasing tuple of
/// nonpositive integers, negatives of a partition of `m_i` into at most
/// `alpha^i` parts.
pub fn negative_orbit_keys(alpha: &DimVector, m: i64) -> Vec<OrbitKey> {
    fn rec(alpha: &[u32], m: i64, rows: &mut Vec<Vec<i64>>, out: &mut Vec<OrbitKey>) {
        match alpha {
            [] => {
                if m == 0 {
                    out.push(OrbitKey(rows.clone()));
                }
            }
            [d, rest @ ..] => {
                for mi in 0..=m {
                    for part in uplus::partitions_into(mi, *d as usize) {
                        // Negate and reverse: weakly decreasing nonpositive.
                        let row: Vec<i64> = part.iter().rev().map(|&p| -p).collect();
                        rows.push(row);
                        rec(rest, m - mi, rows, out);
                        rows.pop();
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    if m < 0 {
        return out;
    }
    let mut rows = Vec::new();
    rec(&alpha.0, m, &mut rows, &mut out);
    out
}

/// Size limits for rank certification.
#[derive(Debug, Clone, Copy)]
pub struct RankCaps {
    pub max_alpha_sum: u32,
    pub max_m: i64,
}

impl Default for RankCaps {
    fn default() -> Self {
        RankCaps { max_alpha_sum: 4, max_m: 6 }
    }
}

/// Rank certificate for one bigrade.
#[derive(Debug, Clone, Serialize)]
pub struct DimReport {
    pub alpha: Vec<u32>,
    pub m: i64,
    /// Canonical words of the bigrade (enumeration route).
    pub basis_size: usize,
    /// Partition-count formula (recurrence route).
    pub formula_dim: u64,
    /// Rank of the `phi`-images in orbit coordinates (analytic route).
    pub phi_rank: usize,
    pub pass: bool,
}

/// Computes `phi` of every canonical word of the bigrade, expands in orbit
/// coordinates, and takes the exact rank over the rationals. Passing means
/// the three routes agree, and since the orbit coordinates are exactly the
/// negative-sector keys (their count is checked against the formula too),
/// agreement certifies bijectivity onto the bigraded piece.
pub fn graded_rank(g: &BiGrade, caps: &RankCaps) -> Result<DimReport, IsoError> {
    if g.alpha.total() > caps.max_alpha_sum {
        return Err(IsoError::ResourceCap(format!(
            "|alpha| = {} exceeds cap {}",
            g.alpha.total(),
            caps.max_alpha_sum
        )));
    }
    if g.m > caps.max_m {
        return Err(IsoError::ResourceCap(format!(
            "m = {} exceeds cap {}",
            g.m, caps.max_m
        )));
    }
    let n = g.alpha.n();
    let basis = uplus::canonical_basis(g)?;
    let keys = negative_orbit_keys(&g.alpha, g.m);
    let col: BTreeMap<&OrbitKey, usize> =
        keys.iter().enumerate().map(|(idx, k)| (k, idx)).collect();
    let mut rows = Vec::with_capacity(basis.len());
    let mut in_sector = true;
    for w in &basis {
        let image = phi_word(n, w)?;
        let mut row = vec![Rational::zero(); keys.len()];
        for (grade, sym) in image.components() {
            if grade != &g.alpha {
                in_sector = false;
                continue;
            }
            for (key, c) in sym.terms() {
                match col.get(key) {
                    Some(&idx) => row[idx] = c.clone(),
                    None => in_sector = false,
                }
            }
        }
        rows.push(row);
    }
    let phi_rank = rational_rank(rows);
    let basis_size = basis.len();
    let formula_dim = sector_dimension(g);
    let pass = in_sector
        && basis_size as u64 == formula_dim
        && keys.len() as u64 == formula_dim
        && phi_rank as u64 == formula_dim;
    Ok(DimReport { alpha: g.alpha.0.clone(), m: g.m, basis_size, formula_dim, phi_rank, pass })
}

/// Exact rank over the rationals: clear denominators per row, then
/// fraction-free (Bareiss) elimination over the integers.
fn rational_rank(rows: Vec<Vec<Rational>>) -> usize {
    let int_rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
        })
        .collect();
    bareiss_rank(int_rows)
}

fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut row = 0;
    for colidx in 0..ncols {
        if row >= nrows {
            break;
        }
        let Some(pivot) = (row..nrows).find(|&p| !a[p][colidx].is_zero()) else {
            continue;
        };
        a.swap(row, pivot);
        for p in (row + 1)..nrows {
            for c in (colidx + 1)..ncols {
                // Sylvester's identity keeps this division exact.
                let t = &a[row][colidx] * &a[p][c] - &a[p][colidx] * &a[row][c];
                a[p][c] = t / &prev;
            }
            a[p][colidx] = BigInt::zero();
        }
        prev = a[row][colidx].clone();
        row += 1;
        rank += 1;
    }
    rank
}

/// Seeded check that `phi . tau_k = eta_k . phi` on random elements.
#[derive(Debug, Clone, Serialize)]
pub struct IntertwineReport {
    pub n: usize,
    pub k: i64,
    pub samples: usize,
    pub failures: usize,
    pub pass: bool,
}

pub fn intertwine_check(
    n: usize,
    k: i64,
    samples: usize,
    seed: u64,
) -> Result<IntertwineReport, IsoError> {
    let mut rng = crate::sampling::rng_from_seed(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let u = crate::sampling::random_uelement(&mut rng, n, 3, 3, -3..=3);
        let lhs = phi(n, &u.tau_shift(k))?;
        let rhs = phi(n, &u)?.eta_shift(k);
        if lhs != rhs {
            failures += 1;
        }
    }
    Ok(IntertwineReport { n, k, samples, failures, pass: failures == 0 })
}

/// Seeded check that rewriting is invisible to `phi`:
/// `phi(normal_form(u)) = phi(u)`.
#[derive(Debug, Clone, Serialize)]
pub struct SoundnessReport {
    pub n: usize,
    pub samples: usize,
    pub failures: usize,
    pub pass: bool,
}

pub fn soundness_check(n: usize, samples: usize, seed: u64) -> Result<SoundnessReport, IsoError> {
    let mut rng = crate::sampling::rng_from_seed(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let u = crate::sampling::random_uelement(&mut rng, n, 2, 4, -3..=3);
        if phi(n, &uplus::normal_form(&u))? != phi(n, &u)? {
            failures += 1;
        }
    }
    Ok(SoundnessReport { n, samples, failures, pass: failures == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat_int;
    use crate::shuffle::SymLaurent;

    fn grade(alpha: &[u32], m: i64) -> BiGrade {
        BiGrade { alpha: DimVector(alpha.to_vec()), m }
    }

    #[test]
    fn phi_on_letters_and_units() {
        let w: Word = "e[2,3]".parse().unwrap();
        assert_eq!(phi_word(2, &w).unwrap(), KHAElement::generator(2, 2, 3));
        assert_eq!(phi_word(2, &Word::one()).unwrap(), KHAElement::unit(2));
        assert!(phi_word(1, &w).is_err());
    }

    #[test]
    fn phi_kills_degree_ascent() {
        let w: Word = "e[1,0] e[1,1]".parse().unwrap();
        assert!(phi_word(1, &w).unwrap().is_zero());
    }

    #[test]
    fn phi_respects_grading_with_sign_flip() {
        let w: Word = "e[1,2] e[2,0] e[1,1]".parse().unwrap();
        let g = w.bigrade(2).unwrap();
        let image = phi_word(2, &w).unwrap();
        for (grade, sym) in image.components() {
            assert_eq!(grade, &g.alpha);
            for (key, _) in sym.terms() {
                assert_eq!(key.total_degree(), -g.m);
            }
        }
    }

    #[test]
    fn relation_suite_passes_and_is_not_vacuous() {
        let report = verify_relations(2, (-2, 2)).unwrap();
        assert!(report.pass);
        assert!(report.checks.len() > 50);
        // The adjacent correction term is genuinely needed: without it the
        // straightening identity fails.
        let lhs = KHAElement::generator(2, 2, 0)
            .shuffle_mul(&KHAElement::generator(2, 1, 0))
            .unwrap();
        let swapped = KHAElement::generator(2, 1, 0)
            .shuffle_mul(&KHAElement::generator(2, 2, 0))
            .unwrap();
        assert!(!lhs.add(&swapped.neg()).unwrap().is_zero());
    }

    #[test]
    fn relation_suite_covers_distant_pairs() {
        let report = verify_relations(4, (0, 1)).unwrap();
        assert!(report.pass);
        assert!(report.checks.iter().any(|c| c.family == "distant" && c.i == 1 && c.j == 3));
    }

    #[test]
    fn partition_count_matches_enumeration() {
        assert_eq!(partition_count(2, 3), 2);
        assert_eq!(partition_count(0, 0), 1);
        assert_eq!(partition_count(0, 5), 0);
        for d in 0..=5u32 {
            assert_eq!(partition_count(d, 0), 1);
            for m in 0..=8i64 {
                let brute = uplus::partitions_into(m, d as usize).len() as u64;
                assert_eq!(partition_count(d, m), brute, "d={d} m={m}");
            }
        }
    }

    #[test]
    fn sector_dimension_examples_and_enumeration() {
        assert_eq!(sector_dimension(&grade(&[2], 3)), 2);
        assert_eq!(sector_dimension(&grade(&[1, 1], 2)), 3);
        assert_eq!(sector_dimension(&grade(&[3, 2], 0)), 1);
        for m in 0..=5 {
            for alpha in [vec![2u32], vec![1, 1], vec![2, 1], vec![1, 1, 1]] {
                let g = grade(&alpha, m);
                let words = uplus::canonical_basis(&g).unwrap();
                assert_eq!(words.len() as u64, sector_dimension(&g), "{g:?}");
                assert_eq!(
                    negative_orbit_keys(&g.alpha, g.m).len() as u64,
                    sector_dimension(&g),
                    "{g:?}"
                );
            }
        }
    }

    #[test]
    fn bareiss_rank_on_known_matrices() {
        let m = |rows: &[&[i64]]| {
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect::<Vec<Vec<BigInt>>>()
        };
        assert_eq!(bareiss_rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(bareiss_rank(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(bareiss_rank(m(&[&[0, 1, 0], &[0, 0, 2], &[0, 3, 7]])), 2);
        // Fractions clear per row.
        let rows = vec![
            vec![crate::ring::rat(1, 2), rat_int(1)],
            vec![rat_int(1), rat_int(2)],
        ];
        assert_eq!(rational_rank(rows), 1);
    }

    #[test]
    fn graded_rank_examples() {
        let caps = RankCaps::default();
        let r = graded_rank(&grade(&[2], 3), &caps).unwrap();
        assert!(r.pass);
        assert_eq!((r.basis_size, r.formula_dim, r.phi_rank), (2, 2, 2));
        for m in 0..=3 {
            let r = graded_rank(&grade(&[1], m), &caps).unwrap();
            assert!(r.pass);
            assert_eq!(r.phi_rank, 1);
        }
        let r = graded_rank(&grade(&[1, 1], 1), &caps).unwrap();
        assert!(r.pass);
        assert_eq!(r.phi_rank, 2);
        let r = graded_rank(&grade(&[2, 1], 2), &caps).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn graded_rank_respects_caps() {
        let caps = RankCaps { max_alpha_sum: 2, max_m: 3 };
        assert!(matches!(
            graded_rank(&grade(&[2, 1], 1), &caps),
            Err(IsoError::ResourceCap(_))
        ));
        assert!(matches!(
            graded_rank(&grade(&[1], 4), &caps),
            Err(IsoError::ResourceCap(_))
        ));
    }

    #[test]
    fn intertwining_with_tau() {
        for k in [-3i64, 0, 1, 2] {
            let report = intertwine_check(2, k, 6, 11).unwrap();
            assert!(report.pass, "k = {k}");
        }
    }

    #[test]
    fn rewriting_is_invisible_to_phi() {
        let report = soundness_check(2, 10, 5).unwrap();
        assert!(report.pass);
        let report = soundness_check(3, 6, 7).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn phi_image_spans_negative_sector_keys() {
        // Surjectivity accounting at a small bigrade: each negative-sector
        // key is hit by the span because rank equals key count.
        let g = grade(&[2, 1], 2);
        let keys = negative_orbit_keys(&g.alpha, g.m);
        let report = graded_rank(&g, &RankCaps::default()).unwrap();
        assert_eq!(keys.len(), report.phi_rank);
        // And the keys really are negative-sector keys of total degree -m.
        for key in &keys {
            assert!(key.max_entry().map_or(true, |e| e <= 0));
            assert_eq!(key.total_degree(), -g.m);
            let sym = SymLaurent::from_orbit(g.alpha.clone(), key.clone(), rat_int(1)).unwrap();
            assert!(sym.in_negative_sector());
        }
    }
}
