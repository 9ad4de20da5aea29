//! Multivariate polynomial GCD by primitive pseudo-remainder sequences.
//!
//! Laurent inputs are handled by stripping the monomial unit first, so the
//! result is the GCD of the ordinary parts, normalized to coprime integer
//! coefficients with positive graded-lex leading coefficient. Monomials and
//! rational scalars are units and never appear in the result.

use super::laurent::LaurentPoly;
use super::mono::Mono;
use super::VarId;
use std::collections::BTreeMap;

/// GCD of two Laurent polynomials up to units, in normalized form.
/// `gcd(0, p)` is the normalized ordinary part of `p`; `gcd(0, 0) = 0`.
pub fn gcd_poly(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (a, _) = a.to_ordinary();
    let (b, _) = b.to_ordinary();
    gcd_ordinary(&a, &b)
}

fn gcd_ordinary(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.primitive_part().0;
    }
    if b.is_zero() {
        return a.primitive_part().0;
    }
    if a.is_constant() || b.is_constant() {
        return LaurentPoly::one();
    }
    let z = *a
        .vars()
        .union(&b.vars())
        .max()
        .expect("nonconstant operands have variables");
    let (ca, pa) = content_and_primitive(a, z);
    let (cb, pb) = content_and_primitive(b, z);
    let unit_content = gcd_ordinary(&ca, &cb);
    let g = if pa.is_constant() || pb.is_constant() {
        LaurentPoly::one()
    } else {
        primitive_prs(pa, pb, z)
    };
    g.mul(&unit_content).primitive_part().0
}

/// Splits `p` as `content * primitive` with respect to the main variable
/// `z`: the content is the GCD of the coefficients of the powers of `z`.
fn content_and_primitive(p: &LaurentPoly, z: VarId) -> (LaurentPoly, LaurentPoly) {
    let coeffs = univariate(p, z);
    let mut content = LaurentPoly::zero();
    for c in coeffs.values() {
        content = gcd_ordinary(&content, c);
        if content.is_one() {
            break;
        }
    }
    let primitive = p.exact_div(&content).expect("content divides");
    (content, primitive)
}

/// Coefficients of `p` as a polynomial in `z`.
fn univariate(p: &LaurentPoly, z: VarId) -> BTreeMap<i64, LaurentPoly> {
    let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let d = m.exp(z);
        let rest = m.div(&Mono::var(z, d));
        let entry = out.entry(d).or_insert_with(LaurentPoly::zero);
        *entry = entry.add(&LaurentPoly::monomial(rest, c.clone()));
    }
    out
}

fn degree_in(p: &LaurentPoly, z: VarId) -> i64 {
    p.terms().map(|(m, _)| m.exp(z)).max().unwrap_or(0)
}

fn leading_coeff_in(p: &LaurentPoly, z: VarId) -> LaurentPoly {
    let d = degree_in(p, z);
    univariate(p, z).remove(&d).unwrap_or_else(LaurentPoly::zero)
}

/// Primitive PRS on `z`-primitive inputs; returns the normalized GCD.
fn primitive_prs(mut a: LaurentPoly, mut b: LaurentPoly, z: VarId) -> LaurentPoly {
    if degree_in(&a, z) < degree_in(&b, z) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, z);
        if r.is_zero() {
            return b.primitive_part().0;
        }
        if degree_in(&r, z) == 0 {
            // A z-free remainder means the z-primitive parts are coprime.
            return LaurentPoly::one();
        }
        a = b;
        b = content_and_primitive(&r, z).1.primitive_part().0;
    }
}

/// Pseudo-remainder of `a` by `b` in `z`: repeatedly cancels the leading
/// `z`-term after scaling by `lc_z(b)`, so the division stays fraction-free
/// over the coefficient ring.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly, z: VarId) -> LaurentPoly {
    let db = degree_in(b, z);
    let lcb = leading_coeff_in(b, z);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = degree_in(&r, z);
        if dr < db {
            break;
        }
        let lcr = leading_coeff_in(&r, z);
        let shift = Mono::var(z, dr - db);
        r = r.mul(&lcb).sub(&b.mul(&lcr).mul_mono(&shift));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::xvar;

    fn x(e: i64) -> LaurentPoly {
        LaurentPoly::var(xvar(1, 1), e)
    }

    fn y(e: i64) -> LaurentPoly {
        LaurentPoly::var(xvar(1, 2), e)
    }

    #[test]
    fn gcd_of_common_factor_products() {
        // gcd((x-y)(x+y), (x-y)^2) = x - y.
        let d = x(1).sub(&y(1));
        let a = d.mul(&x(1).add(&y(1)));
        let b = d.mul(&d);
        assert_eq!(gcd_ordinary(&a, &b), d);
        // Same pair through the Laurent entry point after a unit shift.
        let am = a.mul_mono(&Mono::var(xvar(1, 1), -3));
        assert_eq!(gcd_poly(&am, &b), d);
    }

    #[test]
    fn coprime_gives_one() {
        let a = x(1).add(&LaurentPoly::one());
        let b = y(1).add(&LaurentPoly::one());
        assert!(gcd_ordinary(&a, &b).is_one());
        assert!(gcd_ordinary(&a, &LaurentPoly::constant(crate::ring::rat_int(7))).is_one());
    }

    #[test]
    fn content_is_extracted_across_variables() {
        // gcd(x*y, y^2) = y even though the main variable is x.
        let a = x(1).mul(&y(1));
        let b = y(2);
        assert_eq!(gcd_ordinary(&a, &b), y(1));
    }

    #[test]
    fn zero_cases() {
        assert!(gcd_poly(&LaurentPoly::zero(), &LaurentPoly::zero()).is_zero());
        let p = x(1).sub(&y(1)).scale(&crate::ring::rat(-2, 3));
        // gcd(0, p) normalizes p.
        assert_eq!(gcd_poly(&LaurentPoly::zero(), &p), x(1).sub(&y(1)));
    }

    #[test]
    fn three_variable_factor() {
        let z = LaurentPoly::var(xvar(2, 1), 1);
        let f = x(1).add(&y(1)).add(&z);
        let a = f.mul(&x(1).sub(&z)).mul(&f);
        let b = f.mul(&y(2).add(&z));
        assert_eq!(gcd_ordinary(&a, &b), f);
    }
}
