//! A walk through the four coefficient rings: exact arithmetic, the linear
//! order, units, and what sits in the center.
//!
//! Run with `cargo run -p posmat --example ring_tour`.

use posmat::{RingElement, RingId};

fn main() {
    for ring in RingId::ALL {
        println!("== {} ==", ring.name());

        // every ring contains 1/2, so averages of distinct elements exist
        let half = RingElement::half(ring);
        let two = RingElement::from_int(ring, 2);
        assert!(half.checked_mul(&two).unwrap().is_one());
        println!("  1/2 * 2 = 1");

        let a = RingElement::from_int(ring, 3);
        let b = RingElement::from_int(ring, -7);
        let sum = a.checked_add(&b).unwrap();
        let prod = a.checked_mul(&b).unwrap();
        println!("  3 + (-7) = {},  3 * (-7) = {}", sum, prod);

        // trichotomy: exactly one of x > 0, x = 0, x < 0
        for x in [&sum, &prod, &RingElement::zero(ring)] {
            let flags = [x.is_positive(), x.is_zero(), x.neg().is_positive()];
            assert_eq!(flags.iter().filter(|f| **f).count(), 1);
        }
        println!("  trichotomy holds on the samples above");

        match ring {
            RingId::Q => {
                let q = RingElement::from_ratio(ring, -3, 4).unwrap();
                assert!(q.is_unit());
                println!("  -3/4 is a unit, inverse {}", q.try_invert().unwrap());
            }
            RingId::Dyadic => {
                // units are exactly +-2^k, so 3 has no inverse here
                let three = RingElement::from_int(ring, 3);
                assert!(!three.is_unit());
                let eighth = RingElement::from_ratio(ring, 1, 8).unwrap();
                assert!(eighth.is_unit());
                println!("  1/8 is a unit, 3 is not");
            }
            RingId::RatFun => {
                // s is infinitely large: s - n > 0 for every integer n
                let s = RingElement::var_s(ring).unwrap();
                let big = s.checked_sub(&RingElement::from_int(ring, 1_000_000)).unwrap();
                assert!(big.is_positive());
                println!("  s - 10^6 > 0, sign comes from leading coefficients");
                let inv = s.try_invert().unwrap();
                println!("  s^-1 = {}", inv);
            }
            RingId::Skew => {
                // the twist: t * f(s) = f(2s) * t
                let s = RingElement::var_s(ring).unwrap();
                let t = RingElement::var_t(ring).unwrap();
                let ts = t.checked_mul(&s).unwrap();
                let st = s.checked_mul(&t).unwrap();
                assert_eq!(ts, st.checked_mul(&two).unwrap());
                println!("  t * s = 2s * t  (the twist law)");
                assert!(s.is_central() == false && t.is_central() == false);
                assert!(RingElement::from_ratio(ring, 5, 3).unwrap().is_central());
                println!("  center = constant rationals; s and t are not central");
                // units are single terms f * t^k
                assert!(st.is_unit());
                assert!(!s.checked_add(&t).unwrap().is_unit());
                println!("  s*t is a unit, s + t is not");
            }
        }
        println!();
    }
    println!("all ring checks passed");
}
