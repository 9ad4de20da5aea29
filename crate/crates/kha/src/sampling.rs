//! Seeded random generators for the verification suites. Everything is
//! driven by an explicit [`rand::Rng`]; use [`rng_from_seed`] for
//! reproducible runs.

use crate::ring::{LaurentPoly, Mono, Rational, SlotPerm, VarId};
use crate::shuffle::{DimVector, OrbitKey, SymLaurent};
use crate::uplus::{Letter, UElement, Word};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::RangeInclusive;

/// The deterministic generator used throughout; one seed fixes a run.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero rational with small numerator and denominator.
pub fn random_coeff<R: Rng>(rng: &mut R) -> Rational {
    let mut numer: i64 = 0;
    while numer == 0 {
        numer = rng.gen_range(-6..=6);
    }
    let denom: i64 = rng.gen_range(1..=4);
    crate::ring::rat(numer, denom)
}

pub fn random_letter<R: Rng>(rng: &mut R, n: usize, degrees: RangeInclusive<i64>) -> Letter {
    Letter::new(rng.gen_range(1..=n as u32), rng.gen_range(degrees))
}

/// A word of the given length with uniform letters.
pub fn random_word<R: Rng>(
    rng: &mut R,
    n: usize,
    len: usize,
    degrees: RangeInclusive<i64>,
) -> Word {
    Word((0..len).map(|_| random_letter(rng, n, degrees.clone())).collect())
}

/// A combination of up to `max_terms` random words (possibly fewer after
/// cancellation), each of length up to `max_len`.
pub fn random_uelement<R: Rng>(
    rng: &mut R,
    n: usize,
    max_terms: usize,
    max_len: usize,
    degrees: RangeInclusive<i64>,
) -> UElement {
    let terms = rng.gen_range(1..=max_terms);
    UElement::from_terms((0..terms).map(|_| {
        let len = rng.gen_range(0..=max_len);
        (random_coeff(rng), random_word(rng, n, len, degrees.clone()))
    }))
}

/// A Laurent polynomial supported on the given variables.
pub fn random_laurent<R: Rng>(
    rng: &mut R,
    vars: &[VarId],
    max_terms: usize,
    exponents: RangeInclusive<i64>,
) -> LaurentPoly {
    let terms = rng.gen_range(1..=max_terms);
    let mut out = LaurentPoly::zero();
    for _ in 0..terms {
        let mono = Mono::from_pairs(
            vars.iter().map(|&v| (v, rng.gen_range(exponents.clone()))),
        );
        out = out.add(&LaurentPoly::monomial(mono, random_coeff(rng)));
    }
    out
}

/// A valid orbit key for the grade: per-vertex weakly decreasing exponents.
pub fn random_orbit_key<R: Rng>(
    rng: &mut R,
    grade: &DimVector,
    exponents: RangeInclusive<i64>,
) -> OrbitKey {
    let rows = grade
        .0
        .iter()
        .map(|&a| {
            let mut row: Vec<i64> =
                (0..a).map(|_| rng.gen_range(exponents.clone())).collect();
            row.sort_unstable_by(|p, q| q.cmp(p));
            row
        })
        .collect();
    OrbitKey(rows)
}

/// A symmetric element of the grade with up to `max_orbits` orbit terms.
pub fn random_symlaurent<R: Rng>(
    rng: &mut R,
    grade: &DimVector,
    max_orbits: usize,
    exponents: RangeInclusive<i64>,
) -> SymLaurent {
    let orbits = rng.gen_range(1..=max_orbits);
    let mut out = SymLaurent::zero(grade.clone());
    for _ in 0..orbits {
        let key = random_orbit_key(rng, grade, exponents.clone());
        let term = SymLaurent::from_orbit(grade.clone(), key, random_coeff(rng))
            .expect("sampled keys are valid");
        out = out.add(&term).expect("same grade");
    }
    out
}

/// A uniform per-vertex slot permutation for the grade.
pub fn random_slot_perm<R: Rng>(rng: &mut R, grade: &DimVector) -> SlotPerm {
    let by_vertex = grade
        .0
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut slots: Vec<u32> = (1..=a).collect();
            slots.shuffle(rng);
            (i as u32 + 1, slots)
        })
        .collect();
    SlotPerm::new(by_vertex).expect("shuffled identities are bijections")
}
