//! Rational functions in one variable over the rationals, ordered by
//! behaviour at +infinity: the sign of f = num/den is the sign of the
//! leading-coefficient ratio. The canonical form keeps the denominator
//! monic and coprime to the numerator, so equality is structural.

use super::poly::Poly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// Canonicalizes; panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        let lead = den.leading().unwrap().recip();
        num = num.mul_scalar(&lead);
        den = den.mul_scalar(&lead);
        RatFun { num, den }
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn var() -> Self {
        RatFun {
            num: Poly::var(),
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Option<RatFun> {
        if self.is_zero() {
            None
        } else {
            Some(RatFun::new(self.den.clone(), self.num.clone()))
        }
    }

    /// Sign under the order where the variable is infinitely large positive.
    pub fn sign(&self) -> i32 {
        self.num.sign() * self.den.sign()
    }

    /// Leading-coefficient ratio: the rational c with f ~ c*s^d at infinity.
    /// Zero for the zero function.
    pub fn content(&self) -> BigRational {
        match self.num.leading() {
            None => BigRational::zero(),
            Some(l) => l / self.den.leading().unwrap(),
        }
    }

    /// Substitute the variable by `a*var + b`.
    pub fn substitute_affine(&self, a: &BigRational, b: &BigRational) -> RatFun {
        RatFun::new(
            self.num.substitute_affine(a, b),
            self.den.substitute_affine(a, b),
        )
    }

    /// Substitute the variable by `2^k * var`.
    pub fn scale_arg_pow2(&self, k: i64) -> RatFun {
        RatFun::new(self.num.scale_arg_pow2(k), self.den.scale_arg_pow2(k))
    }

    /// Integer-cleared presentation: both polynomials with integer
    /// coefficients, jointly reduced, denominator leading coefficient
    /// positive. Unique given the canonical in-memory form.
    pub fn cleared(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut lcm = BigInt::one();
        for c in self.num.coeffs().iter().chain(self.den.coeffs()) {
            lcm = lcm.lcm(c.denom());
        }
        let scale = |p: &Poly| -> Vec<BigInt> {
            p.coeffs()
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect()
        };
        let mut num = scale(&self.num);
        let mut den = scale(&self.den);
        let mut g = BigInt::zero();
        for c in num.iter().chain(den.iter()) {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            for c in den.iter_mut() {
                *c /= &g;
            }
        }
        if den.last().map_or(false, |l| l.is_negative()) {
            for c in num.iter_mut() {
                *c = -c.clone();
            }
            for c in den.iter_mut() {
                *c = -c.clone();
            }
        }
        (num, den)
    }

    /// Inverse of `cleared`; fails on a zero denominator.
    pub fn from_cleared(num: Vec<BigInt>, den: Vec<BigInt>) -> Option<RatFun> {
        let lift = |v: Vec<BigInt>| {
            Poly::from_coeffs(v.into_iter().map(BigRational::from_integer).collect())
        };
        let den = lift(den);
        if den.is_zero() {
            return None;
        }
        Some(RatFun::new(lift(num), den))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| q(c, 1)).collect())
    }

    #[test]
    fn canonical_form_reduces_and_makes_den_monic() {
        // (2s^2 - 2) / (4s + 4) = (s - 1)/2 over the common factor s + 1
        let f = RatFun::new(poly(&[-2, 0, 2]), poly(&[4, 4]));
        assert_eq!(f.num(), &Poly::from_coeffs(vec![q(-1, 2), q(1, 2)]));
        assert!(f.den().is_one());
    }

    #[test]
    fn sign_is_behaviour_at_infinity() {
        // 3 - s is eventually negative
        let f = RatFun::new(poly(&[3, -1]), poly(&[1]));
        assert_eq!(f.sign(), -1);
        // (s + 1)/(s^2) is eventually positive but small
        let g = RatFun::new(poly(&[1, 1]), poly(&[0, 0, 1]));
        assert_eq!(g.sign(), 1);
        assert_eq!(RatFun::zero().sign(), 0);
        // s - 10^6 is still positive in this order
        let h = RatFun::new(poly(&[-1_000_000, 1]), poly(&[1]));
        assert_eq!(h.sign(), 1);
    }

    #[test]
    fn field_arithmetic() {
        let s = RatFun::var();
        let f = s.add(&RatFun::one()); // s + 1
        let g = f.inv().unwrap();
        assert!(f.mul(&g).is_one());
        assert!(f.sub(&f).is_zero());
        assert!(RatFun::zero().inv().is_none());
    }

    #[test]
    fn content_is_leading_ratio() {
        // (6s^2 + 1) / (2s) -> 6/2 = 3
        let f = RatFun::new(poly(&[1, 0, 6]), poly(&[0, 2]));
        assert_eq!(f.content(), q(3, 1));
        assert_eq!(RatFun::constant(q(5, 7)).content(), q(5, 7));
    }

    #[test]
    fn cleared_roundtrip_and_uniqueness() {
        let f = RatFun::new(
            Poly::from_coeffs(vec![q(1, 2), q(1, 3)]),
            Poly::from_coeffs(vec![q(1, 1), q(1, 6)]),
        );
        let (num, den) = f.cleared();
        // (1/2 + s/3) over (1 + s/6) clears to (3 + 2s, 6 + s), joint content 1
        assert_eq!(num, vec![BigInt::from(3), BigInt::from(2)]);
        assert_eq!(den, vec![BigInt::from(6), BigInt::from(1)]);
        let back = RatFun::from_cleared(num, den).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn affine_substitution_is_multiplicative() {
        let s = RatFun::var();
        let f = s.add(&RatFun::constant(q(1, 1)));
        let g = s.mul(&s).sub(&RatFun::one());
        let a = q(2, 1);
        let b = q(-1, 1);
        let lhs = f.mul(&g).substitute_affine(&a, &b);
        let rhs = f.substitute_affine(&a, &b).mul(&g.substitute_affine(&a, &b));
        assert_eq!(lhs, rhs);
    }
}
