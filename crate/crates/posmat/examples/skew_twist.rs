//! Decomposition over the skew Laurent ring, where conjugation by a
//! noncentral unit like s is invisible on permutation matrices yet moves
//! entries: it rescales s-parts and halves the coefficient of t. The
//! pipeline notices the remnant while fitting the entry map and folds it
//! back into the monomial conjugator.
//!
//! Run with `cargo run -p posmat --example skew_twist`.

use posmat::automorphism::oracle_from_parts;
use posmat::words::random_word;
use posmat::{
    decompose, Matrix, MonomialMatrix, OraclePart, Permutation, PipelineConfig, RingElement,
    RingId,
};

fn main() {
    let ring = RingId::Skew;
    let n = 3;
    let s = RingElement::var_s(ring).unwrap();
    let t = RingElement::var_t(ring).unwrap();

    // conjugation by diag(s, s, s) fixes every monomial with rational
    // weights but not the transvection B_12(t): s t s^-1 = t/2
    let beta = MonomialMatrix::of_diagonal(vec![s.clone(); n]).unwrap();
    let b12_t = Matrix::transvection(ring, n, 0, 1, &t);
    let image = beta.conjugate(&b12_t);
    let half_t = &RingElement::half(ring) * &t;
    assert_eq!(image, Matrix::transvection(ring, n, 0, 1, &half_t));
    println!("diag(s,s,s) B_12(t) diag(s,s,s)^-1 = B_12(t/2)");
    let cyc = Matrix::permutation(ring, &Permutation::cycle(3, &[0, 1, 2]));
    assert_eq!(beta.conjugate(&cyc), cyc);
    println!("the same conjugation fixes every permutation matrix");

    // an oracle made of that invisible conjugation plus a visible one
    let visible = MonomialMatrix::new(
        vec![
            RingElement::from_int(ring, 2),
            RingElement::one(ring),
            RingElement::one(ring),
        ],
        Permutation::transposition(3, 0, 1),
    )
    .unwrap();
    let oracle = oracle_from_parts(
        n,
        ring,
        vec![
            OraclePart::Inner(beta.clone()),
            OraclePart::Inner(visible.clone()),
        ],
    )
    .unwrap();

    let config = PipelineConfig {
        word_count: 25,
        seed: 4,
        ..PipelineConfig::default()
    };
    let report = decompose(&oracle, &config);
    assert!(report.verdict.is_ok(), "verdict: {:?}", report.verdict);
    let triple = report.triple.as_ref().unwrap();

    println!("verdict OK after {} queries", report.query_count);
    // the permutation-stage beta probe sees nothing (scalar conjugation
    // fixes monomials with equal weights), so the remnant surfaces later,
    // during the entry-map fit, and is folded into the conjugator diagonal
    assert_eq!(report.trace.beta, Some(RingElement::one(ring)));
    println!("conjugator perm: {}", triple.m.perm());
    println!(
        "conjugator diag: {:?}",
        triple
            .m
            .diag()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
    );
    assert!(triple.m.diag().iter().all(|d| d.as_rational().is_none()));
    assert!(triple.c.is_identity());
    assert!(triple.lambda.is_trivial());

    // the triple reproduces the oracle on random words, including the
    // halving of t coefficients
    let ground = MonomialMatrix::mul(&beta, &visible);
    for seed in 0..15 {
        let w = random_word(n, ring, 7, seed).eval();
        assert_eq!(triple.apply(&w).unwrap(), ground.conjugate(&w));
    }
    println!("triple matches the two-layer conjugation on 15 random words");
}
