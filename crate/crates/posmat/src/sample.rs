//! Fixed sample pools and seeded random generators.
//!
//! The pools are deliberately small, fixed constants: deterministic tests
//! and the decomposition pipeline both read from them, and the pipeline's
//! consistency checks rely on the pools being closed under the specific
//! sums and products they test (2 = 1+1, 3 = 1+2, 3/2 = 1+1/2, 1 = 2*(1/2),
//! 5 = 2+3, and s+1, 2s, s*t for the rings with variables).

use crate::ring::{RingElement, RingId};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

fn r(ring: RingId, n: i64, d: i64) -> RingElement {
    RingElement::from_ratio(ring, n, d).expect("pool constant exists in ring")
}

fn rational_pool(ring: RingId) -> Vec<RingElement> {
    vec![
        r(ring, 1, 1),
        r(ring, 2, 1),
        r(ring, 1, 2),
        r(ring, 3, 1),
        r(ring, 3, 2),
        r(ring, 5, 1),
    ]
}

/// Nonnegative sample pool: rational constants, zero, and the ring's
/// variables in simple combinations.
pub fn positive_pool(ring: RingId) -> Vec<RingElement> {
    let mut pool = rational_pool(ring);
    pool.push(RingElement::zero(ring));
    match ring {
        RingId::RatFun => {
            let s = RingElement::var_s(ring).unwrap();
            let one = RingElement::one(ring);
            let two = r(ring, 2, 1);
            pool.push(s.clone());
            pool.push(s.checked_add(&one).unwrap());
            pool.push(two.checked_mul(&s).unwrap());
        }
        RingId::Skew => {
            let s = RingElement::var_s(ring).unwrap();
            let t = RingElement::var_t(ring).unwrap();
            pool.push(s.clone());
            pool.push(t.clone());
            pool.push(s.checked_mul(&t).unwrap());
        }
        _ => {}
    }
    pool
}

/// The positive units of the sample pool (drops zero and non-units).
pub fn unit_pool(ring: RingId) -> Vec<RingElement> {
    positive_pool(ring)
        .into_iter()
        .filter(|e| !e.is_zero() && e.is_unit())
        .collect()
}

/// Parameters for off-diagonal generators in random words.
pub fn elem_param_pool(ring: RingId) -> Vec<RingElement> {
    let mut pool = vec![r(ring, 1, 1), r(ring, 2, 1), r(ring, 1, 2), r(ring, 3, 2)];
    match ring {
        RingId::RatFun => {
            let s = RingElement::var_s(ring).unwrap();
            pool.push(s.clone());
            pool.push(s.checked_add(&RingElement::one(ring)).unwrap());
        }
        RingId::Skew => {
            pool.push(RingElement::var_s(ring).unwrap());
            pool.push(RingElement::var_t(ring).unwrap());
        }
        _ => {}
    }
    pool
}

/// Diagonal entries for random words: the unit part of the word pool.
pub fn diag_unit_pool(ring: RingId) -> Vec<RingElement> {
    elem_param_pool(ring)
        .into_iter()
        .filter(|e| e.is_unit())
        .collect()
}

pub fn pick<'a, R: Rng>(pool: &'a [RingElement], rng: &mut R) -> &'a RingElement {
    &pool[rng.gen_range(0..pool.len())]
}

/// An arbitrary ring element (any sign, zero included) for axiom suites.
pub fn random_element<R: Rng>(ring: RingId, rng: &mut R) -> RingElement {
    match ring {
        RingId::Q => {
            let num = rng.gen_range(-12i64..=12);
            let den = rng.gen_range(1i64..=8);
            RingElement::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
        }
        RingId::Dyadic => {
            let num = rng.gen_range(-15i64..=15);
            let exp = rng.gen_range(-3i64..=3);
            let q = BigRational::from_integer(BigInt::from(num)) * crate::ring::pow2(exp);
            RingElement::from_rational(ring, &q).unwrap()
        }
        RingId::RatFun => RingElement::RatFun(random_ratfun(rng, 2)),
        RingId::Skew => {
            let mut acc = crate::ring::SkewLaurent::zero();
            for _ in 0..rng.gen_range(0..=2usize) {
                let tdeg = rng.gen_range(-2i64..=2);
                let coef = random_ratfun(rng, 1);
                acc = acc.add(&crate::ring::SkewLaurent::term(tdeg, coef));
            }
            RingElement::Skew(acc)
        }
    }
}

/// c * s^j as a rational function, for j of either sign.
fn s_power_monomial(c: BigRational, j: i64) -> crate::ring::RatFun {
    use crate::ring::{Poly, RatFun};
    use num_traits::{One, Zero};
    let mono = |k: usize, v: BigRational| {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(v);
        Poly::from_coeffs(coeffs)
    };
    if j >= 0 {
        RatFun::new(mono(j as usize, c), Poly::one())
    } else {
        RatFun::new(Poly::constant(c), mono(j.unsigned_abs() as usize, BigRational::one()))
    }
}

fn random_ratfun<R: Rng>(rng: &mut R, max_deg: usize) -> crate::ring::RatFun {
    use crate::ring::Poly;
    fn poly<R: Rng>(rng: &mut R, deg: usize) -> Poly {
        Poly::from_coeffs(
            (0..=deg)
                .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-4i64..=4))))
                .collect(),
        )
    }
    let num_deg = rng.gen_range(0..=max_deg);
    let den_deg = rng.gen_range(0..=1);
    let num = poly(rng, num_deg);
    let mut den = poly(rng, den_deg);
    if den.is_zero() {
        den = Poly::one();
    }
    crate::ring::RatFun::new(num, den)
}

/// A strictly positive element.
pub fn random_positive<R: Rng>(ring: RingId, rng: &mut R) -> RingElement {
    loop {
        let e = random_element(ring, rng);
        if e.sign() > 0 {
            return e;
        }
    }
}

/// A positive unit (diagonal material).
pub fn random_positive_unit<R: Rng>(ring: RingId, rng: &mut R) -> RingElement {
    match ring {
        RingId::Dyadic => {
            let exp = rng.gen_range(-4i64..=4);
            RingElement::from_rational(
                ring,
                &crate::ring::pow2(exp),
            )
            .unwrap()
        }
        RingId::Skew => {
            // c * s^j * t^k with c a positive rational; conjugation by such
            // a unit rescales s and t by rational factors, so entry maps
            // seen through these diagonals stay in the recognizable catalog
            let tdeg = rng.gen_range(-2i64..=2);
            let spow = rng.gen_range(-2i64..=2);
            let num = [1i64, 2, 3, 5][rng.gen_range(0..4)];
            let den = [1i64, 2, 3][rng.gen_range(0..3)];
            let c = BigRational::new(BigInt::from(num), BigInt::from(den));
            RingElement::Skew(crate::ring::SkewLaurent::term(
                tdeg,
                s_power_monomial(c, spow),
            ))
        }
        _ => loop {
            let e = random_element(ring, rng);
            if e.sign() > 0 && e.is_unit() {
                return e;
            }
        },
    }
}
