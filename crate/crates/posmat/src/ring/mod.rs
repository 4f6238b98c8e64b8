//! Exact scalar arithmetic over the supported linearly ordered rings.
//!
//! Four rings are provided, each with 1/2 and a linear order compatible
//! with the operations:
//!
//! * `Q`: the rationals;
//! * `Dyadic`: rationals with a power-of-two denominator;
//! * `RatFun`: rational functions in s, with s infinitely large positive;
//! * `Skew`: twisted Laurent polynomials over `RatFun` where t*f(s) =
//!   f(2s)*t, with t infinitesimally small against s. Noncommutative.
//!
//! Every element is kept in a canonical form, so `==` decides equality.

mod poly;
mod ratfun;
mod skew;

pub use poly::{pow2, Poly};
pub use ratfun::RatFun;
pub use skew::SkewLaurent;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingId {
    Q,
    Dyadic,
    RatFun,
    Skew,
}

impl RingId {
    pub const ALL: [RingId; 4] = [RingId::Q, RingId::Dyadic, RingId::RatFun, RingId::Skew];
    pub const COMMUTATIVE: [RingId; 3] = [RingId::Q, RingId::Dyadic, RingId::RatFun];

    pub fn is_commutative(self) -> bool {
        self != RingId::Skew
    }

    pub fn name(self) -> &'static str {
        match self {
            RingId::Q => "Q",
            RingId::Dyadic => "DYADIC",
            RingId::RatFun => "RATFUN",
            RingId::Skew => "SKEW",
        }
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RingId {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, RingError> {
        match s {
            "Q" => Ok(RingId::Q),
            "DYADIC" => Ok(RingId::Dyadic),
            "RATFUN" => Ok(RingId::RatFun),
            "SKEW" => Ok(RingId::Skew),
            other => Err(RingError::Invalid(format!("unknown ring {:?}", other))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("ring mismatch in {op}: {lhs} vs {rhs}")]
    RingMismatch {
        op: &'static str,
        lhs: RingId,
        rhs: RingId,
    },
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("unsupported over {ring}: {what}")]
    Unsupported { ring: RingId, what: &'static str },
    #[error("invalid element: {0}")]
    Invalid(String),
}

/// A dyadic rational num * 2^exp with num odd or zero (zero keeps exp 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    num: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mut num: BigInt, mut exp: i64) -> Self {
        if num.is_zero() {
            return Dyadic {
                num: BigInt::zero(),
                exp: 0,
            };
        }
        let tz = num.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            num >>= tz;
            exp += tz as i64;
        }
        Dyadic { num, exp }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.num.clone()) * pow2(self.exp)
    }

    /// None if the reduced denominator is not a power of two.
    pub fn from_rational(q: &BigRational) -> Option<Dyadic> {
        let den = q.denom();
        if den.is_zero() {
            return None;
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz) != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(q.numer().clone(), -(tz as i64)))
    }
}

/// A scalar from one of the supported rings. The variant is the ring tag;
/// payloads are canonical, so derived equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingElement {
    Q(BigRational),
    Dyadic(Dyadic),
    RatFun(RatFun),
    Skew(SkewLaurent),
}

impl RingElement {
    pub fn ring(&self) -> RingId {
        match self {
            RingElement::Q(_) => RingId::Q,
            RingElement::Dyadic(_) => RingId::Dyadic,
            RingElement::RatFun(_) => RingId::RatFun,
            RingElement::Skew(_) => RingId::Skew,
        }
    }

    pub fn zero(ring: RingId) -> Self {
        match ring {
            RingId::Q => RingElement::Q(BigRational::zero()),
            RingId::Dyadic => RingElement::Dyadic(Dyadic::new(BigInt::zero(), 0)),
            RingId::RatFun => RingElement::RatFun(RatFun::zero()),
            RingId::Skew => RingElement::Skew(SkewLaurent::zero()),
        }
    }

    pub fn one(ring: RingId) -> Self {
        RingElement::from_int(ring, 1)
    }

    pub fn from_int(ring: RingId, v: i64) -> Self {
        let q = BigRational::from_integer(BigInt::from(v));
        RingElement::from_rational(ring, &q)
            .expect("integers embed into every supported ring")
    }

    /// Embed a rational constant; fails for non-dyadic values in DYADIC.
    pub fn from_rational(ring: RingId, q: &BigRational) -> Result<Self, RingError> {
        match ring {
            RingId::Q => Ok(RingElement::Q(q.clone())),
            RingId::Dyadic => Dyadic::from_rational(q)
                .map(RingElement::Dyadic)
                .ok_or_else(|| {
                    RingError::Invalid(format!("{} is not dyadic", q))
                }),
            RingId::RatFun => Ok(RingElement::RatFun(RatFun::constant(q.clone()))),
            RingId::Skew => Ok(RingElement::Skew(SkewLaurent::constant(RatFun::constant(
                q.clone(),
            )))),
        }
    }

    pub fn from_ratio(ring: RingId, num: i64, den: i64) -> Result<Self, RingError> {
        if den == 0 {
            return Err(RingError::Invalid("zero denominator".into()));
        }
        RingElement::from_rational(
            ring,
            &BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    pub fn half(ring: RingId) -> Self {
        RingElement::from_ratio(ring, 1, 2).expect("1/2 exists in every supported ring")
    }

    /// The variable s (RATFUN and SKEW only).
    pub fn var_s(ring: RingId) -> Result<Self, RingError> {
        match ring {
            RingId::RatFun => Ok(RingElement::RatFun(RatFun::var())),
            RingId::Skew => Ok(RingElement::Skew(SkewLaurent::var_s())),
            _ => Err(RingError::Unsupported {
                ring,
                what: "variable s",
            }),
        }
    }

    /// The twist variable t (SKEW only).
    pub fn var_t(ring: RingId) -> Result<Self, RingError> {
        match ring {
            RingId::Skew => Ok(RingElement::Skew(SkewLaurent::var_t())),
            _ => Err(RingError::Unsupported {
                ring,
                what: "variable t",
            }),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Q(a) => a.is_zero(),
            RingElement::Dyadic(a) => a.num.is_zero(),
            RingElement::RatFun(a) => a.is_zero(),
            RingElement::Skew(a) => a.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RingElement::Q(a) => a.is_one(),
            RingElement::Dyadic(a) => a.num.is_one() && a.exp == 0,
            RingElement::RatFun(a) => a.is_one(),
            RingElement::Skew(a) => a.is_one(),
        }
    }

    fn mismatch(op: &'static str, lhs: &RingElement, rhs: &RingElement) -> RingError {
        RingError::RingMismatch {
            op,
            lhs: lhs.ring(),
            rhs: rhs.ring(),
        }
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        match (self, other) {
            (RingElement::Q(a), RingElement::Q(b)) => Ok(RingElement::Q(a + b)),
            (RingElement::Dyadic(a), RingElement::Dyadic(b)) => {
                let m = a.exp.min(b.exp);
                let an = &a.num << (a.exp - m) as u64;
                let bn = &b.num << (b.exp - m) as u64;
                Ok(RingElement::Dyadic(Dyadic::new(an + bn, m)))
            }
            (RingElement::RatFun(a), RingElement::RatFun(b)) => {
                Ok(RingElement::RatFun(a.add(b)))
            }
            (RingElement::Skew(a), RingElement::Skew(b)) => Ok(RingElement::Skew(a.add(b))),
            _ => Err(RingElement::mismatch("add", self, other)),
        }
    }

    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement, RingError> {
        match (self, other) {
            (RingElement::Q(a), RingElement::Q(b)) => Ok(RingElement::Q(a * b)),
            (RingElement::Dyadic(a), RingElement::Dyadic(b)) => Ok(RingElement::Dyadic(
                Dyadic::new(&a.num * &b.num, a.exp + b.exp),
            )),
            (RingElement::RatFun(a), RingElement::RatFun(b)) => {
                Ok(RingElement::RatFun(a.mul(b)))
            }
            (RingElement::Skew(a), RingElement::Skew(b)) => Ok(RingElement::Skew(a.mul(b))),
            _ => Err(RingElement::mismatch("mul", self, other)),
        }
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.checked_add(&other.neg()).map_err(|e| match e {
            RingError::RingMismatch { lhs, rhs, .. } => RingError::RingMismatch {
                op: "sub",
                lhs,
                rhs,
            },
            other => other,
        })
    }

    pub fn neg(&self) -> RingElement {
        match self {
            RingElement::Q(a) => RingElement::Q(-a.clone()),
            RingElement::Dyadic(a) => RingElement::Dyadic(Dyadic {
                num: -a.num.clone(),
                exp: if a.num.is_zero() { 0 } else { a.exp },
            }),
            RingElement::RatFun(a) => RingElement::RatFun(a.neg()),
            RingElement::Skew(a) => RingElement::Skew(a.neg()),
        }
    }

    /// Sign in the ring's linear order: -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        match self {
            RingElement::Q(a) => {
                if a.is_zero() {
                    0
                } else if a.is_positive() {
                    1
                } else {
                    -1
                }
            }
            RingElement::Dyadic(a) => match a.num.sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
            },
            RingElement::RatFun(a) => a.sign(),
            RingElement::Skew(a) => a.sign(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.sign() >= 0
    }

    /// Order comparison via the sign of the difference.
    pub fn cmp_order(&self, other: &RingElement) -> Result<Ordering, RingError> {
        Ok(match self.checked_sub(other)?.sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn is_unit(&self) -> bool {
        self.try_invert().is_ok()
    }

    /// Two-sided inverse; `NotAUnit` if none exists in the ring.
    pub fn try_invert(&self) -> Result<RingElement, RingError> {
        let fail = || RingError::NotAUnit(self.to_string());
        match self {
            RingElement::Q(a) => {
                if a.is_zero() {
                    Err(fail())
                } else {
                    Ok(RingElement::Q(a.recip()))
                }
            }
            RingElement::Dyadic(a) => {
                // Units are exactly +-2^k.
                if a.num == BigInt::one() {
                    Ok(RingElement::Dyadic(Dyadic::new(BigInt::one(), -a.exp)))
                } else if a.num == -BigInt::one() {
                    Ok(RingElement::Dyadic(Dyadic::new(-BigInt::one(), -a.exp)))
                } else {
                    Err(fail())
                }
            }
            RingElement::RatFun(a) => a.inv().map(RingElement::RatFun).ok_or_else(fail),
            RingElement::Skew(a) => a.inv().map(RingElement::Skew).ok_or_else(fail),
        }
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, k: i64) -> Result<RingElement, RingError> {
        let base = if k < 0 {
            self.try_invert()?
        } else {
            self.clone()
        };
        let mut acc = RingElement::one(self.ring());
        for _ in 0..k.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    /// Whether the element commutes with the whole ring. Over SKEW this is
    /// decided by probing against s and t, which generate enough of the
    /// ring to pin the center to the constant rationals.
    pub fn is_central(&self) -> bool {
        match self {
            RingElement::Skew(a) => a.is_central(),
            _ => true,
        }
    }

    /// The rational value, when the element is a constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            RingElement::Q(a) => Some(a.clone()),
            RingElement::Dyadic(a) => Some(a.to_rational()),
            RingElement::RatFun(a) => a.as_constant(),
            RingElement::Skew(a) => a.as_ratfun_constant().and_then(|c| c.as_constant()),
        }
    }

    /// Growth content: the rational factor describing the element's size at
    /// infinity. For constants this is the value itself; for a rational
    /// function it is the leading-coefficient ratio. Unsupported over SKEW.
    pub fn content(&self) -> Result<BigRational, RingError> {
        match self {
            RingElement::Q(a) => Ok(a.clone()),
            RingElement::Dyadic(a) => Ok(a.to_rational()),
            RingElement::RatFun(a) => Ok(a.content()),
            RingElement::Skew(_) => Err(RingError::Unsupported {
                ring: RingId::Skew,
                what: "content",
            }),
        }
    }

    pub fn abs(&self) -> RingElement {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("{}", e))
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::neg(self)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Q(a) => write!(f, "{}", a),
            RingElement::Dyadic(a) => write!(f, "{}", a.to_rational()),
            RingElement::RatFun(a) => write!(f, "{}", a),
            RingElement::Skew(a) => write!(f, "{}", a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(ring: RingId, n: i64, d: i64) -> RingElement {
        RingElement::from_ratio(ring, n, d).unwrap()
    }

    #[test]
    fn dyadic_canonical_form() {
        let a = Dyadic::new(BigInt::from(12), 0); // 12 = 3 * 2^2
        assert_eq!(a.num, BigInt::from(3));
        assert_eq!(a.exp, 2);
        let z = Dyadic::new(BigInt::zero(), 5);
        assert_eq!(z.exp, 0);
        assert!(Dyadic::from_rational(&BigRational::new(1.into(), 3.into())).is_none());
        let h = Dyadic::from_rational(&BigRational::new(5.into(), 8.into())).unwrap();
        assert_eq!((h.num.clone(), h.exp), (BigInt::from(5), -3));
    }

    #[test]
    fn dyadic_units_are_signed_powers_of_two() {
        assert!(el(RingId::Dyadic, 2, 1).try_invert().is_ok());
        assert!(el(RingId::Dyadic, 1, 4).try_invert().is_ok());
        assert!(el(RingId::Dyadic, -8, 1).try_invert().is_ok());
        assert_eq!(
            el(RingId::Dyadic, 3, 1).try_invert(),
            Err(RingError::NotAUnit("3".into()))
        );
        assert!(el(RingId::Dyadic, 3, 2).try_invert().is_err());
        // inverse of 2 is 1/2
        assert_eq!(
            el(RingId::Dyadic, 2, 1).try_invert().unwrap(),
            el(RingId::Dyadic, 1, 2)
        );
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = el(RingId::Q, 1, 1);
        let b = el(RingId::Dyadic, 1, 1);
        assert_eq!(
            a.checked_add(&b),
            Err(RingError::RingMismatch {
                op: "add",
                lhs: RingId::Q,
                rhs: RingId::Dyadic
            })
        );
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn signs_and_order() {
        assert_eq!(el(RingId::Q, -3, 4).sign(), -1);
        assert_eq!(RingElement::zero(RingId::Dyadic).sign(), 0);
        // s - 1000000 is positive: s dominates any rational
        let s = RingElement::var_s(RingId::RatFun).unwrap();
        let big = el(RingId::RatFun, 1_000_000, 1);
        assert_eq!(s.checked_sub(&big).unwrap().sign(), 1);
        assert_eq!(
            s.cmp_order(&big).unwrap(),
            Ordering::Greater
        );
        // in SKEW, t is below every positive rational: 1/2 - t > 0
        let t = RingElement::var_t(RingId::Skew).unwrap();
        let half = RingElement::half(RingId::Skew);
        assert_eq!(half.checked_sub(&t).unwrap().sign(), 1);
    }

    #[test]
    fn skew_inverse_of_st() {
        // (s*t)^(-1) = (2/s)*t^(-1), checked two-sided
        let s = RingElement::var_s(RingId::Skew).unwrap();
        let t = RingElement::var_t(RingId::Skew).unwrap();
        let st = s.checked_mul(&t).unwrap();
        let inv = st.try_invert().unwrap();
        assert!(st.checked_mul(&inv).unwrap().is_one());
        assert!(inv.checked_mul(&st).unwrap().is_one());
        let two_over_s = el(RingId::Skew, 2, 1)
            .checked_mul(&s.try_invert().unwrap())
            .unwrap();
        let expected = two_over_s.checked_mul(&t.try_invert().unwrap()).unwrap();
        assert_eq!(inv, expected);
    }

    #[test]
    fn centrality() {
        assert!(el(RingId::Q, 7, 3).is_central());
        assert!(el(RingId::Skew, 3, 2).is_central());
        assert!(!RingElement::var_s(RingId::Skew).unwrap().is_central());
        assert!(!RingElement::var_t(RingId::Skew).unwrap().is_central());
        // RATFUN is commutative, so even s is central there
        assert!(RingElement::var_s(RingId::RatFun).unwrap().is_central());
    }

    #[test]
    fn pow_with_negative_exponent() {
        let two = el(RingId::Dyadic, 2, 1);
        assert_eq!(two.pow(-3).unwrap(), el(RingId::Dyadic, 1, 8));
        assert!(el(RingId::Dyadic, 3, 1).pow(-1).is_err());
        assert_eq!(el(RingId::Q, 3, 2).pow(2).unwrap(), el(RingId::Q, 9, 4));
    }

    #[test]
    fn content_of_ratfun_is_leading_ratio() {
        let s = RingElement::var_s(RingId::RatFun).unwrap();
        let two = el(RingId::RatFun, 2, 1);
        let f = two.checked_mul(&s).unwrap(); // 2s
        assert_eq!(f.content().unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(
            el(RingId::Q, 5, 3).content().unwrap(),
            BigRational::new(5.into(), 3.into())
        );
        assert!(RingElement::var_t(RingId::Skew).unwrap().content().is_err());
    }

    #[test]
    fn half_exists_everywhere() {
        for ring in RingId::ALL {
            let h = RingElement::half(ring);
            let two = RingElement::from_int(ring, 2);
            assert!(h.checked_mul(&two).unwrap().is_one());
        }
    }
}
