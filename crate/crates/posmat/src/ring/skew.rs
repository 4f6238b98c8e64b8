//! Twisted Laurent polynomials over the rational functions: elements are
//! finite sums of f(s)*t^k with the commutation rule t*f(s) = f(2s)*t.
//! Only integer powers of t occur, so the twist never leaves the ring.
//!
//! The order takes s infinitely large and t infinitesimally small against
//! it: the sign of an element is the sign of its coefficient at the lowest
//! t-degree. Units are exactly the single-term elements f*t^k with f != 0.

use super::ratfun::RatFun;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewLaurent {
    /// t-degree -> coefficient; no zero coefficients are stored.
    terms: BTreeMap<i64, RatFun>,
}

impl SkewLaurent {
    pub fn zero() -> Self {
        SkewLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        SkewLaurent::term(0, RatFun::one())
    }

    pub fn constant(c: RatFun) -> Self {
        SkewLaurent::term(0, c)
    }

    pub fn var_s() -> Self {
        SkewLaurent::term(0, RatFun::var())
    }

    pub fn var_t() -> Self {
        SkewLaurent::term(1, RatFun::one())
    }

    pub fn term(tdeg: i64, coef: RatFun) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(tdeg, coef);
        }
        SkewLaurent { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RatFun)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }

    /// The coefficient if this is a single term, with its t-degree.
    pub fn as_monomial(&self) -> Option<(i64, &RatFun)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, v)| (*k, v))
        } else {
            None
        }
    }

    /// Constant rational functions sitting at t^0.
    pub fn as_ratfun_constant(&self) -> Option<RatFun> {
        if self.is_zero() {
            return Some(RatFun::zero());
        }
        match self.as_monomial() {
            Some((0, c)) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &SkewLaurent) -> SkewLaurent {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(RatFun::zero);
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        SkewLaurent { terms }
    }

    pub fn neg(&self) -> SkewLaurent {
        SkewLaurent {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &SkewLaurent) -> SkewLaurent {
        self.add(&other.neg())
    }

    /// (f t^i)(g t^j) = f * sigma^i(g) t^(i+j) with sigma^i(g)(s) = g(2^i s).
    pub fn mul(&self, other: &SkewLaurent) -> SkewLaurent {
        let mut out: BTreeMap<i64, RatFun> = BTreeMap::new();
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                let c = f.mul(&g.scale_arg_pow2(*i));
                let k = i + j;
                let entry = out.entry(k).or_insert_with(RatFun::zero);
                *entry = entry.add(&c);
                if entry.is_zero() {
                    out.remove(&k);
                }
            }
        }
        SkewLaurent { terms: out }
    }

    /// Inverse of f t^k is sigma^(-k)(f^(-1)) t^(-k); multi-term elements
    /// and zero are not units.
    pub fn inv(&self) -> Option<SkewLaurent> {
        let (k, f) = self.as_monomial()?;
        let finv = f.inv()?;
        Some(SkewLaurent::term(-k, finv.scale_arg_pow2(-k)))
    }

    /// Sign of the coefficient at the lowest t-degree.
    pub fn sign(&self) -> i32 {
        match self.terms.iter().next() {
            None => 0,
            Some((_, c)) => c.sign(),
        }
    }

    /// Ring map s -> a*s (t fixed), applied coefficient-wise. An affine
    /// shift in s does not commute with the twist, so only b = 0 yields a
    /// homomorphism here.
    pub fn substitute_s_scale(&self, a: &num_rational::BigRational) -> SkewLaurent {
        let zero = num_rational::BigRational::from_integer(0.into());
        SkewLaurent {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.substitute_affine(a, &zero)))
                .collect(),
        }
    }

    pub fn pow(&self, k: u64) -> SkewLaurent {
        let mut acc = SkewLaurent::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Center probe: commuting with both s and t pins the element to the
    /// constant rationals, so two products decide centrality.
    pub fn is_central(&self) -> bool {
        let s = SkewLaurent::var_s();
        let t = SkewLaurent::var_t();
        self.mul(&s) == s.mul(self) && self.mul(&t) == t.mul(self)
    }
}

impl fmt::Display for SkewLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*t", c)?,
                _ => write!(f, "({})*t^{}", c, k)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rf_const(n: i64, d: i64) -> RatFun {
        RatFun::constant(q(n, d))
    }

    #[test]
    fn twist_moves_scaling_across_t() {
        // t * s = (2s) * t
        let s = SkewLaurent::var_s();
        let t = SkewLaurent::var_t();
        let lhs = t.mul(&s);
        let rhs = SkewLaurent::term(1, RatFun::var().mul(&rf_const(2, 1)));
        assert_eq!(lhs, rhs);
        // s * t keeps the coefficient untouched
        assert_eq!(s.mul(&t), SkewLaurent::term(1, RatFun::var()));
        assert_ne!(t.mul(&s), s.mul(&t));
    }

    #[test]
    fn multiplication_is_associative_on_mixed_terms() {
        let s = SkewLaurent::var_s();
        let t = SkewLaurent::var_t();
        let a = s.add(&t);
        let b = t.add(&SkewLaurent::one());
        let c = s.mul(&t).add(&SkewLaurent::constant(rf_const(1, 2)));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn monomial_inverse_two_sided() {
        // (s t)^(-1) = sigma^(-1)(1/s) t^(-1) = (2/s) t^(-1)
        let st = SkewLaurent::term(1, RatFun::var());
        let inv = st.inv().unwrap();
        let expected = SkewLaurent::term(-1, RatFun::var().inv().unwrap().mul(&rf_const(2, 1)));
        assert_eq!(inv, expected);
        assert!(st.mul(&inv).is_one());
        assert!(inv.mul(&st).is_one());
    }

    #[test]
    fn multi_term_elements_are_not_units() {
        let x = SkewLaurent::var_s().add(&SkewLaurent::var_t());
        assert!(x.inv().is_none());
        assert!(SkewLaurent::zero().inv().is_none());
    }

    #[test]
    fn sign_reads_lowest_t_degree() {
        // s*t - 1: lowest term is -1 at t^0, so negative overall
        let x = SkewLaurent::term(1, RatFun::var()).sub(&SkewLaurent::one());
        assert_eq!(x.sign(), -1);
        // t^(-1) - 1000: lowest term is t^(-1) with coefficient 1
        let y = SkewLaurent::term(-1, RatFun::one())
            .sub(&SkewLaurent::constant(rf_const(1000, 1)));
        assert_eq!(y.sign(), 1);
        assert_eq!(SkewLaurent::zero().sign(), 0);
    }

    #[test]
    fn center_is_the_constant_rationals() {
        assert!(SkewLaurent::constant(rf_const(3, 2)).is_central());
        assert!(SkewLaurent::zero().is_central());
        assert!(!SkewLaurent::var_s().is_central());
        assert!(!SkewLaurent::var_t().is_central());
        assert!(!SkewLaurent::term(1, RatFun::var()).is_central());
    }

    #[test]
    fn inverse_roundtrip_on_scaled_monomials() {
        // (3/2 s^2 t^(-2))^(-1), checked by multiplying back on both sides
        let x = SkewLaurent::term(-2, RatFun::var().mul(&RatFun::var()).mul(&rf_const(3, 2)));
        let inv = x.inv().unwrap();
        assert!(x.mul(&inv).is_one());
        assert!(inv.mul(&x).is_one());
    }
}
