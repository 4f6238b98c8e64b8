//! Involutions among nonnegative invertible matrices are monomial with a
//! permutation part of order at most two and paired diagonal units:
//! t_i * t_sigma(i) = 1. The classifier extracts that data or says why not.
//!
//! Run with `cargo run -p posmat --example involutions`.

use posmat::{Matrix, MonomialMatrix, Permutation, RingElement, RingId};

fn q(n: i64, d: i64) -> RingElement {
    RingElement::from_ratio(RingId::Q, n, d).unwrap()
}

fn main() {
    // swap rows 1,2 with weights u and u^-1, fix row 3 with weight 1
    let m = MonomialMatrix::new(
        vec![q(5, 1), q(1, 5), q(1, 1)],
        Permutation::transposition(3, 0, 1),
    )
    .unwrap()
    .to_matrix();
    assert!((&m * &m).is_identity());
    println!("an involution:\n{}", m);

    let data = m.involution_classify().unwrap();
    println!("sigma = {}", data.sigma);
    println!(
        "t = {:?}",
        data.t.iter().map(|x| x.to_string()).collect::<Vec<_>>()
    );
    assert_eq!(data.to_matrix(), m);

    // paired weights are forced: breaking t_1 * t_2 = 1 breaks M^2 = I
    let bad = MonomialMatrix::new(
        vec![q(5, 1), q(1, 4), q(1, 1)],
        Permutation::transposition(3, 0, 1),
    )
    .unwrap()
    .to_matrix();
    assert!(!(&bad * &bad).is_identity());
    let err = bad.involution_classify().unwrap_err();
    println!("\nbroken pairing rejected: {}", err);

    // a 3-cycle squares to the other 3-cycle, never the identity
    let cyc = Matrix::permutation(RingId::Q, &Permutation::cycle(3, &[0, 1, 2]));
    let err = cyc.involution_classify().unwrap_err();
    println!("3-cycle rejected: {}", err);

    // works the same over the skew ring, where the weights need not commute
    let s = RingElement::var_s(RingId::Skew).unwrap();
    let m = MonomialMatrix::new(
        vec![
            s.clone(),
            s.try_invert().unwrap(),
            RingElement::one(RingId::Skew),
        ],
        Permutation::transposition(3, 0, 1),
    )
    .unwrap()
    .to_matrix();
    assert!((&m * &m).is_identity());
    let data = m.involution_classify().unwrap();
    println!("\nskew involution with weights s, s^-1: sigma = {}", data.sigma);

    println!("\nall involution checks passed");
}
