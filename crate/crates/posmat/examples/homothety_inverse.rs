//! Central homotheties X -> gamma(content |det X|) * X scale a matrix by a
//! central positive unit read off its determinant content. Certified
//! tables stay invertible as maps on the whole matrix semigroup: the
//! inverse is again a homothety precisely when I + n*Gamma is unimodular
//! over the touched primes.
//!
//! Run with `cargo run -p posmat --example homothety_inverse`.

use num_bigint::BigInt;
use num_rational::BigRational;
use posmat::words::random_word;
use posmat::{CentralHomDescriptor, RingId};
use std::collections::BTreeMap;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn main() {
    let ring = RingId::Q;
    let n = 3;

    // gamma(2) = 3: matrices whose det has 2-content k pick up a factor 3^k
    let omega = CentralHomDescriptor::new(ring, BTreeMap::from([(2, q(3, 1))])).unwrap();
    assert!(omega.is_certified_invertible(n).unwrap());
    println!("gamma(2) = 3 is certified invertible at n = {}", n);

    for seed in 0..5 {
        let x = random_word(n, ring, 6, seed).eval();
        let lam = omega.lambda_of(&x).unwrap();
        let y = omega.apply(&x).unwrap();
        println!("  word {}: scale factor {}", seed, lam);

        // multiplicative: Omega(XY) = Omega(X) Omega(Y), the scale factors
        // multiply because content is additive under det
        let z = random_word(n, ring, 6, seed + 100).eval();
        assert_eq!(
            omega.apply(&(&x * &z)).unwrap(),
            &omega.apply(&x).unwrap() * &omega.apply(&z).unwrap()
        );

        // and the certified inverse really undoes it
        assert_eq!(omega.invert_apply(n, &y).unwrap(), x);
    }
    println!("multiplicativity and inversion hold on random words");

    // gamma(2) = 2 fails the certificate at n = 3: the map sends matrices
    // of det 2-content k to content 4k, so content 1 is never hit and the
    // map cannot be onto
    let bad = CentralHomDescriptor::new(ring, BTreeMap::from([(2, q(2, 1))])).unwrap();
    assert!(!bad.is_certified_invertible(n).unwrap());
    println!("gamma(2) = 2 is not certified at n = 3");

    // the trivial table is the identity map
    let triv = CentralHomDescriptor::trivial(ring);
    assert!(triv.is_trivial());
    let x = random_word(n, ring, 5, 7).eval();
    assert_eq!(triv.apply(&x).unwrap(), x);
    println!("trivial table acts as the identity");
}
