//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored in ascending degree order with trailing zeros
//! stripped; the zero polynomial is the empty vector. These back the
//! rational-function scalars, so every operation here is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    /// Ascending-degree coefficients; trailing zeros are stripped.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            out.push(a + b);
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn mul_scalar(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, den: &Poly) -> (Poly, Poly) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let dd = den.degree().unwrap();
        let lead_inv = den.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() < den.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = &rem[k] * &lead_inv;
            if !c.is_zero() {
                quo[k - dd] = c.clone();
                for (i, b) in den.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    let sub = &c * b;
                    rem[idx] -= sub;
                }
            }
        }
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, den: &Poly) -> Poly {
        let (q, r) = self.divrem(den);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scaled so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.mul_scalar(&l.recip()),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitute the variable by `a*var + b`.
    pub fn substitute_affine(&self, a: &BigRational, b: &BigRational) -> Poly {
        let arg = Poly::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&arg).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Substitute the variable by `2^k * var` (k may be negative).
    pub fn scale_arg_pow2(&self, k: i64) -> Poly {
        let factor = pow2(k);
        let mut scale = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &scale);
            scale *= &factor;
        }
        Poly::from_coeffs(out)
    }

    pub fn sign(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some(l) => {
                if l.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// 2^k as an exact rational, k of either sign.
pub fn pow2(k: i64) -> BigRational {
    let mag = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_mag = mag.is_one();
            if k == 0 || !unit_mag {
                write!(f, "{}", mag)?;
            }
            if k > 0 {
                if !unit_mag {
                    write!(f, "*")?;
                }
                if k == 1 {
                    write!(f, "s")?;
                } else {
                    write!(f, "s^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| q(c, 1)).collect())
    }

    #[test]
    fn trailing_zeros_stripped() {
        let a = Poly::from_coeffs(vec![q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(a.degree(), Some(0));
        assert!(Poly::from_coeffs(vec![q(0, 1)]).is_zero());
    }

    #[test]
    fn mul_and_divrem_roundtrip() {
        let a = p(&[1, 2, 3]);
        let b = p(&[-1, 1]);
        let prod = a.mul(&b);
        let (quo, rem) = prod.divrem(&b);
        assert!(rem.is_zero());
        assert_eq!(quo, a);
    }

    #[test]
    fn divrem_with_remainder() {
        // s^2 + 1 = (s + 1)(s - 1) + 2
        let (quo, rem) = p(&[1, 0, 1]).divrem(&p(&[1, 1]));
        assert_eq!(quo, p(&[-1, 1]));
        assert_eq!(rem, p(&[2]));
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let g = p(&[1, 1]); // s + 1
        let a = g.mul(&p(&[2, 2])); // 2(s+1)^2
        let b = g.mul(&p(&[3]));
        assert_eq!(a.gcd(&b), g);
        assert!(Poly::zero().gcd(&Poly::zero()).is_zero());
    }

    #[test]
    fn affine_substitution() {
        // f = s^2, f(2s + 1) = 4s^2 + 4s + 1
        let f = p(&[0, 0, 1]);
        assert_eq!(f.substitute_affine(&q(2, 1), &q(1, 1)), p(&[1, 4, 4]));
    }

    #[test]
    fn pow2_argument_scaling() {
        // f = s^2 + s, f(2s) = 4s^2 + 2s, then f(s/2) recovers f
        let f = p(&[0, 1, 1]);
        let g = f.scale_arg_pow2(1);
        assert_eq!(g, p(&[0, 2, 4]));
        assert_eq!(g.scale_arg_pow2(-1), f);
    }

    #[test]
    fn eval_matches_horner() {
        let f = p(&[1, -2, 3]);
        // 3*4 - 2*2 + 1 = 9
        assert_eq!(f.eval(&q(2, 1)), q(9, 1));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[1, -2, 3]).to_string(), "3*s^2 - 2*s + 1");
        assert_eq!(p(&[0, 1]).to_string(), "s");
        assert_eq!(
            Poly::from_coeffs(vec![q(-1, 2), q(1, 1)]).to_string(),
            "s - 1/2"
        );
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
