use super::gcd::gcd_poly;
use super::laurent::LaurentPoly;
use super::{Rational, RingError, SlotPerm};
use num_traits::One;
use std::fmt;

/// A rational function `num/den` in canonical reduced form:
///
/// * `den` is nonzero, `gcd(num, den)` is a unit;
/// * `den` is an ordinary polynomial with minimum exponent 0 in each of its
///   variables, coprime integer coefficients, and positive graded-lex
///   leading coefficient (so `den == 1` exactly when the value is a Laurent
///   polynomial);
/// * zero is `0/1`.
///
/// Structural equality is therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (num_ord, num_shift) = num.to_ordinary();
        let (den_ord, den_shift) = den.to_ordinary();
        let g = gcd_poly(&num_ord, &den_ord);
        let (num_red, den_red) = if g.is_one() {
            (num_ord, den_ord)
        } else {
            (
                num_ord.exact_div(&g).expect("gcd divides num"),
                den_ord.exact_div(&g).expect("gcd divides den"),
            )
        };
        let num_full = num_red.mul_mono(&num_shift.div(&den_shift));
        Ok(Self::from_reduced(num_full, den_red))
    }

    /// Assembles from a coprime pair, performing only unit normalization.
    fn from_reduced(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let (den_ord, den_shift) = den.to_ordinary();
        let (den_norm, content) = den_ord.primitive_part();
        let scale = Rational::one() / content;
        let num = num.mul_mono(&den_shift.inv()).scale(&scale);
        RationalFunction { num, den: den_norm }
    }

    pub fn zero() -> Self {
        RationalFunction { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        RationalFunction { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { num: p, den: LaurentPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a Laurent polynomial, when the denominator is trivial.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Knuth's reduced addition: with gcd(a,b) = gcd(c,d) = 1 and
        // r = gcd(b,d), the sum is t / (b * d/r) and only gcd(t, r) can
        // still cancel.
        let r = gcd_poly(&self.den, &other.den);
        let (b_r, d_r) = if r.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.exact_div(&r).expect("gcd divides"),
                other.den.exact_div(&r).expect("gcd divides"),
            )
        };
        let t = self.num.mul(&d_r).add(&other.num.mul(&b_r));
        if t.is_zero() {
            return Self::zero();
        }
        let g = gcd_poly(&t, &r);
        if g.is_one() {
            Self::from_reduced(t, self.den.mul(&d_r))
        } else {
            let t = t.exact_div(&g).expect("gcd divides");
            let b_g = self.den.exact_div(&g).expect("gcd divides den");
            Self::from_reduced(t, b_g.mul(&d_r))
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // Cross-cancellation keeps the gcd calls on small operands and
        // leaves the product already reduced.
        let g1 = gcd_poly(&self.num, &other.den);
        let g2 = gcd_poly(&other.num, &self.den);
        let a = divide_out(&self.num, &g1);
        let c = divide_out(&other.num, &g2);
        let b = divide_out(&self.den, &g2);
        let d = divide_out(&other.den, &g1);
        Self::from_reduced(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<Self, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(Self::from_reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, RingError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunction::from_reduced(self.num.scale(c), self.den.clone())
    }

    /// The substitution `x -> x^{-1}` applied to every variable.
    pub fn dual(&self) -> Self {
        Self::from_reduced(self.num.invert_vars(), self.den.invert_vars())
    }

    pub fn permute_vars(&self, perm: &SlotPerm) -> Result<Self, RingError> {
        Ok(Self::from_reduced(
            self.num.permute_vars(perm)?,
            self.den.permute_vars(perm)?,
        ))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

fn divide_out(p: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    if g.is_one() {
        p.clone()
    } else {
        p.exact_div(g).expect("gcd divides")
    }
}
