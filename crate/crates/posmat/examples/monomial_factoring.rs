//! Invertible-with-nonnegative-inverse matrices are exactly the monomial
//! ones: one nonzero entry per row and column, each a unit. This example
//! recognizes one, factors it into generators, and checks the inverse.
//!
//! Run with `cargo run -p posmat --example monomial_factoring`.

use posmat::words::factor_monomial;
use posmat::{Matrix, MonomialMatrix, Permutation, RingElement, RingId};

fn q(n: i64, d: i64) -> RingElement {
    RingElement::from_ratio(RingId::Q, n, d).unwrap()
}

fn main() {
    // diag(2, 1/4, 8) followed by the cycle 1 -> 2 -> 3 -> 1
    let m = MonomialMatrix::new(
        vec![q(2, 1), q(1, 4), q(8, 1)],
        Permutation::cycle(3, &[0, 1, 2]),
    )
    .unwrap();
    let dense = m.to_matrix();
    println!("monomial matrix:\n{}", dense);

    let recognized = dense.monomial_recognize().unwrap();
    assert_eq!(recognized, m);
    println!("recognized: diag {:?} perm {}", m.diag().iter().map(|d| d.to_string()).collect::<Vec<_>>(), m.perm());

    // both the matrix and its inverse stay nonnegative
    let inv = dense.inverse().unwrap().expect("units on the diagonal");
    assert!(dense.is_nonnegative() && inv.is_nonnegative());
    assert!((&dense * &inv).is_identity());
    println!("inverse is nonnegative too:\n{}", inv);

    // the factor word evaluates back to the same matrix
    let word = factor_monomial(&m);
    println!("factor word has {} generators", word.len());
    assert_eq!(word.eval(), dense);
    assert!(word.is_monomial_word());

    // a transvection is invertible but its inverse has a negative entry,
    // so it is not monomial
    let b = Matrix::transvection(RingId::Q, 3, 0, 1, &q(1, 1));
    assert!(b.monomial_recognize().is_err());
    let binv = b.inverse().unwrap().unwrap();
    assert!(!binv.is_nonnegative());
    println!("\nB_12(1) is invertible but not monomial; its inverse:\n{}", binv);

    println!("\nall monomial checks passed");
}
