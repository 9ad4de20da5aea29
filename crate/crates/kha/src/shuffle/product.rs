//! The directed shuffle product and symmetrization operators.
//!
//! For grades `alpha`, `beta` with sum `gamma`, the product of symmetric
//! elements `f`, `g` is the symmetrization of `f * g * K`, where the kernel
//! `K` has, for every f-variable `x[i,u]` and g-variable `x[i',w]`:
//!
//! * a factor `1/(1 - x[i,u]/x[i,w])` when `i = i'` (same vertex);
//! * a factor `(1 - x[i,u]/x[i-1,w])` when `i' = i - 1` (one quiver arrow
//!   from `i` to `i-1`);
//! * nothing otherwise.
//!
//! The implementation enumerates the minimal coset representatives of
//! `S_gamma / (S_alpha x S_beta)` per vertex (slot shuffles), sums every
//! term over the common denominator `prod_{i, p<q} (x[i,q] - x[i,p])`, and
//! clears it with one exact division. The full-group symmetrization with
//! the `1/(|S_alpha| |S_beta|)` prefactor is kept available through
//! [`symmetrize`] as an independent route used by the test oracles.

use super::{DimVector, ShuffleError, SymLaurent};
use crate::ring::{LaurentPoly, Mono, Rational, RationalFunction, SlotPerm, VarId};
use itertools::Itertools;
use num_traits::One;
use std::collections::BTreeMap;

/// Shuffle product of two graded symmetric elements.
pub fn shuffle_mul_sym(f: &SymLaurent, g: &SymLaurent) -> Result<SymLaurent, ShuffleError> {
    let alpha = f.grade();
    let beta = g.grade();
    let gamma = alpha.add(beta)?;
    if f.is_zero() || g.is_zero() {
        return Ok(SymLaurent::zero(gamma));
    }
    let n = gamma.n();

    let f_poly = f.expand();
    let g_poly = g
        .expand()
        .map_vars(|v| VarId::new(v.vertex, v.slot + alpha.entry(v.vertex)));
    let fg = f_poly.mul(&g_poly);

    // Per vertex, every way to place the f-slots among the gamma slots.
    let placements: Vec<Vec<Vec<u32>>> = (1..=n as u32)
        .map(|i| {
            (1..=gamma.entry(i))
                .combinations(alpha.entry(i) as usize)
                .collect()
        })
        .collect();

    let mut total = LaurentPoly::zero();
    let mut odometer = vec![0usize; n];
    loop {
        let sets: Vec<&[u32]> = odometer
            .iter()
            .enumerate()
            .map(|(i, &k)| placements[i][k].as_slice())
            .collect();
        total = total.add(&shuffle_term(&fg, alpha, &gamma, &sets));
        if !advance(&mut odometer, &placements) {
            break;
        }
    }

    let v = vandermonde(&gamma);
    let quotient = total
        .exact_div(&v)
        .expect("shuffle numerator is divisible by the slot Vandermonde");
    Ok(SymLaurent::collect(gamma, &quotient)
        .expect("shuffle product is symmetric in each vertex's slots"))
}

fn advance(odometer: &mut [usize], placements: &[Vec<Vec<u32>>]) -> bool {
    for (pos, count) in odometer.iter_mut().zip(placements.iter().map(Vec::len)) {
        *pos += 1;
        if *pos < count {
            return true;
        }
        *pos = 0;
    }
    false
}

/// One coset term: the permuted integrand times the kernel numerator, the
/// complementary Vandermonde factors, and the orientation sign, so that the
/// sum of all terms is exactly (shuffle product) * Vandermonde.
fn shuffle_term(
    fg: &LaurentPoly,
    alpha: &DimVector,
    gamma: &DimVector,
    sets: &[&[u32]],
) -> LaurentPoly {
    let n = gamma.n();
    let mut var_map: BTreeMap<VarId, VarId> = BTreeMap::new();
    let mut in_set: Vec<Vec<bool>> = Vec::with_capacity(n);
    for i in 1..=n as u32 {
        let c = gamma.entry(i);
        let a = alpha.entry(i);
        let set = sets[i as usize - 1];
        let mut membership = vec![false; c as usize];
        for &s in set {
            membership[s as usize - 1] = true;
        }
        let complement: Vec<u32> =
            (1..=c).filter(|&s| !membership[s as usize - 1]).collect();
        for (j, &s) in set.iter().enumerate() {
            var_map.insert(VarId::new(i, j as u32 + 1), VarId::new(i, s));
        }
        for (j, &s) in complement.iter().enumerate() {
            var_map.insert(VarId::new(i, a + j as u32 + 1), VarId::new(i, s));
        }
        in_set.push(membership);
    }

    let mut term = fg.map_vars(|v| var_map[&v]);

    // Arrow factors: f-variable at vertex i against g-variable at vertex
    // i-1 contributes (1 - x[i,u]/x[i-1,w]).
    for i in 2..=n as u32 {
        let below = gamma.entry(i - 1);
        for &u in sets[i as usize - 1] {
            for w in 1..=below {
                if in_set[i as usize - 2][w as usize - 1] {
                    continue;
                }
                let ratio = Mono::from_pairs([
                    (VarId::new(i, u), 1),
                    (VarId::new(i - 1, w), -1),
                ]);
                let factor =
                    LaurentPoly::one().sub(&LaurentPoly::monomial(ratio, Rational::one()));
                term = term.mul(&factor);
            }
        }
    }

    // Same-vertex factors x[i,w]/(x[i,w] - x[i,u]) for u in S, w outside:
    // numerator monomial, orientation sign, and the non-split Vandermonde
    // cofactor that lifts the term onto the common denominator.
    let mut numer = Mono::one();
    let mut negate = false;
    let mut cofactor = LaurentPoly::one();
    for i in 1..=n as u32 {
        let c = gamma.entry(i);
        let a = alpha.entry(i) as i64;
        let membership = &in_set[i as usize - 1];
        for w in 1..=c {
            if !membership[w as usize - 1] && a != 0 {
                numer = numer.mul(&Mono::var(VarId::new(i, w), a));
            }
        }
        for p in 1..=c {
            for q in (p + 1)..=c {
                let (pin, qin) = (membership[p as usize - 1], membership[q as usize - 1]);
                if pin == qin {
                    let diff = LaurentPoly::var(VarId::new(i, q), 1)
                        .sub(&LaurentPoly::var(VarId::new(i, p), 1));
                    cofactor = cofactor.mul(&diff);
                } else if qin {
                    negate = !negate;
                }
            }
        }
    }

    let mut out = term.mul_mono(&numer).mul(&cofactor);
    if negate {
        out = out.neg();
    }
    out
}

/// `prod_i prod_{p<q} (x[i,q] - x[i,p])` over the grade's slots.
fn vandermonde(gamma: &DimVector) -> LaurentPoly {
    let mut v = LaurentPoly::one();
    for i in 1..=gamma.n() as u32 {
        let c = gamma.entry(i);
        for p in 1..=c {
            for q in (p + 1)..=c {
                let diff = LaurentPoly::var(VarId::new(i, q), 1)
                    .sub(&LaurentPoly::var(VarId::new(i, p), 1));
                v = v.mul(&diff);
            }
        }
    }
    v
}

/// Full-group symmetrization `sum_{sigma in S_alpha} sigma . f` (no
/// prefactor). Fails when the sum is not a Laurent polynomial or when `f`
/// uses variables outside the grade.
pub fn symmetrize(f: &RationalFunction, grade: &DimVector) -> Result<SymLaurent, ShuffleError> {
    let mut vars = f.num().vars();
    vars.extend(f.den().vars());
    for v in &vars {
        if v.vertex == 0
            || v.vertex as usize > grade.n()
            || v.slot == 0
            || v.slot > grade.entry(v.vertex)
        {
            return Err(ShuffleError::VarOutsideGrade(format!(
                "{v} outside grade {grade}"
            )));
        }
    }

    let groups: Vec<Vec<Vec<u32>>> = grade
        .0
        .iter()
        .map(|&a| (1..=a).permutations(a as usize).collect())
        .collect();
    // Group images by their canonical denominator: kernel-type integrands
    // keep one denominator across the whole orbit, so the numerators add as
    // plain polynomials and only the final combination pays for a reduction.
    let mut buckets: Vec<(LaurentPoly, LaurentPoly)> = Vec::new();
    let mut odometer = vec![0usize; grade.n()];
    loop {
        let by_vertex: BTreeMap<u32, Vec<u32>> = odometer
            .iter()
            .enumerate()
            .map(|(i, &k)| (i as u32 + 1, groups[i][k].clone()))
            .collect();
        let perm = SlotPerm::new(by_vertex).expect("permutations are bijections");
        let image = f.permute_vars(&perm).expect("slots validated above");
        match buckets.iter_mut().find(|(den, _)| den == image.den()) {
            Some((_, num)) => *num = num.add(image.num()),
            None => buckets.push((image.den().clone(), image.num().clone())),
        }
        if !advance_counts(&mut odometer, &groups) {
            break;
        }
    }
    // Combine buckets over an unreduced common denominator: the orbit sum of a
    // kernel integrand is a Laurent polynomial, so one exact division at the
    // end replaces per-step gcd reductions (which blow up on fat numerators).
    let mut num = LaurentPoly::zero();
    let mut den = LaurentPoly::one();
    for (bden, bnum) in buckets {
        num = num.mul(&bden).add(&bnum.mul(&den));
        den = den.mul(&bden);
    }
    match num.exact_div(&den) {
        Ok(poly) => SymLaurent::collect(grade.clone(), &poly),
        Err(_) => Err(ShuffleError::NonpolynomialSymmetrization(format!(
            "({num}) / ({den})"
        ))),
    }
}

fn advance_counts(odometer: &mut [usize], groups: &[Vec<Vec<u32>>]) -> bool {
    for (pos, count) in odometer.iter_mut().zip(groups.iter().map(Vec::len)) {
        *pos += 1;
        if *pos < count {
            return true;
        }
        *pos = 0;
    }
    false
}

/// The multiplication map from one single-vertex factor per vertex: parts
/// `g_1, ..., g_n` with `g_i` supported on vertex `i`, multiplied left to
/// right by the shuffle product.
pub fn mu_product(parts: &[SymLaurent]) -> Result<SymLaurent, ShuffleError> {
    if parts.is_empty() {
        return Err(ShuffleError::Malformed("mu_product of no parts".into()));
    }
    let n = parts[0].grade().n();
    if parts.len() != n {
        return Err(ShuffleError::Malformed(format!(
            "expected one part per vertex ({n}), got {}",
            parts.len()
        )));
    }
    for (idx, p) in parts.iter().enumerate() {
        if p.grade().n() != n {
            return Err(ShuffleError::GradeMismatch(format!(
                "part {} has {} vertices, expected {n}",
                idx + 1,
                p.grade().n()
            )));
        }
        for (j, &entry) in p.grade().0.iter().enumerate() {
            if j != idx && entry != 0 {
                return Err(ShuffleError::Malformed(format!(
                    "part {} must be supported on vertex {} only, grade is {}",
                    idx + 1,
                    idx + 1,
                    p.grade()
                )));
            }
        }
    }
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = shuffle_mul_sym(&acc, p)?;
    }
    Ok(acc)
}

/// Decomposes an orbit sum into per-vertex factors: each orbit splits as a
/// product of single-vertex monomial-symmetric functions, so applying
/// [`mu_product`] to every summand and adding recovers the input.
pub fn pbw_factor(f: &SymLaurent) -> Vec<(Rational, Vec<SymLaurent>)> {
    let n = f.grade().n();
    f.terms()
        .map(|(key, c)| {
            let parts = (0..n)
                .map(|i| {
                    let mut entries = vec![0u32; n];
                    entries[i] = f.grade().0[i];
                    let grade_i = DimVector(entries);
                    let mut k = super::OrbitKey::zeros(&grade_i);
                    k.0[i] = key.0[i].clone();
                    SymLaurent::from_orbit(grade_i, k, Rational::one())
                        .expect("orbit key restriction stays valid")
                })
                .collect();
            (c.clone(), parts)
        })
        .collect()
}

/// Reference shuffle product by full-group symmetrization: symmetrizes
/// `f * shifted(g) * kernel` as a rational function and applies the
/// `1/(|S_alpha| |S_beta|)` prefactor. Factorially slower than
/// [`shuffle_mul_sym`]; kept as an independent route for cross-checks.
pub fn shuffle_mul_oracle(f: &SymLaurent, g: &SymLaurent) -> Result<SymLaurent, ShuffleError> {
    let alpha = f.grade();
    let beta = g.grade();
    let gamma = alpha.add(beta)?;
    let n = gamma.n();
    let f_poly = f.expand();
    let g_poly = g
        .expand()
        .map_vars(|v| VarId::new(v.vertex, v.slot + alpha.entry(v.vertex)));
    let mut integrand = RationalFunction::from_poly(f_poly.mul(&g_poly));
    for i in 1..=n as u32 {
        let a = alpha.entry(i);
        let c = gamma.entry(i);
        // Same-vertex kernel 1/(1 - x[i,u]/x[i,w]).
        for u in 1..=a {
            for w in (a + 1)..=c {
                let ratio =
                    Mono::from_pairs([(VarId::new(i, u), 1), (VarId::new(i, w), -1)]);
                let den =
                    LaurentPoly::one().sub(&LaurentPoly::monomial(ratio, Rational::one()));
                integrand = integrand
                    .mul(&RationalFunction::new(LaurentPoly::one(), den).expect("1 - x/y != 0"));
            }
        }
        // Arrow kernel (1 - x[i,u]/x[i-1,w]).
        if i >= 2 {
            let a_below = alpha.entry(i - 1);
            let c_below = gamma.entry(i - 1);
            for u in 1..=a {
                for w in (a_below + 1)..=c_below {
                    let ratio =
                        Mono::from_pairs([(VarId::new(i, u), 1), (VarId::new(i - 1, w), -1)]);
                    let factor =
                        LaurentPoly::one().sub(&LaurentPoly::monomial(ratio, Rational::one()));
                    integrand = integrand.mul(&RationalFunction::from_poly(factor));
                }
            }
        }
    }
    let sym = symmetrize(&integrand, &gamma)?;
    let mut prefactor = Rational::one();
    for i in 0..n {
        prefactor *= Rational::from_integer((factorial(alpha.0[i]) * factorial(beta.0[i])).into());
    }
    Ok(sym.scale(&(Rational::one() / prefactor)))
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product::<i64>().max(1)
}
