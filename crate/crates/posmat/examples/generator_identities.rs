//! Words in the generators: permutations S_sigma, transvections B_ij(x)
//! with x >= 0, and unit diagonals. Evaluation is a homomorphism, diagonal
//! conjugation rescales transvection parameters, and equivalence chains
//! certify monomial rewrites step by step.
//!
//! Run with `cargo run -p posmat --example generator_identities`.

use posmat::words::{random_word, Generator, GeneratorWord, PEquivChain, PEquivStep};
use posmat::{Matrix, Permutation, RingElement, RingId};

fn q(n: i64, d: i64) -> RingElement {
    RingElement::from_ratio(RingId::Q, n, d).unwrap()
}

fn main() {
    // eval(v ++ w) = eval(v) * eval(w)
    let v = random_word(4, RingId::Q, 5, 11);
    let w = random_word(4, RingId::Q, 3, 12);
    assert_eq!(v.concat(&w).unwrap().eval(), &v.eval() * &w.eval());
    println!("eval is a homomorphism on concatenation");

    // diag(2,1,1) B_12(1) diag(2,1,1)^-1 = B_12(2)
    let conj = GeneratorWord::new(
        3,
        RingId::Q,
        vec![
            Generator::Diag(vec![q(2, 1), q(1, 1), q(1, 1)]),
            Generator::Elem { i: 0, j: 1, x: q(1, 1) },
            Generator::Diag(vec![q(1, 2), q(1, 1), q(1, 1)]),
        ],
    )
    .unwrap();
    let b12_2 = Matrix::transvection(RingId::Q, 3, 0, 1, &q(2, 1));
    assert_eq!(conj.eval(), b12_2);
    println!("diagonal conjugation: diag(2,1,1) B_12(1) diag(1/2,1,1) = B_12(2)");

    // negative transvection parameters never enter a word
    let bad = GeneratorWord::new(
        3,
        RingId::Q,
        vec![Generator::Elem { i: 0, j: 1, x: q(-1, 1) }],
    );
    println!("negative parameter rejected: {}", bad.unwrap_err());

    // a two-step chain moving B_12(1) to B_32(2) through monomial frames
    let sigma = Permutation::transposition(3, 0, 2);
    let step1 = PEquivStep {
        p: GeneratorWord::new(
            3,
            RingId::Q,
            vec![Generator::Diag(vec![q(2, 1), q(1, 1), q(1, 1)])],
        )
        .unwrap(),
        p_tilde: GeneratorWord::new(
            3,
            RingId::Q,
            vec![Generator::Diag(vec![q(1, 2), q(1, 1), q(1, 1)])],
        )
        .unwrap(),
        q: GeneratorWord::empty(3, RingId::Q),
        q_tilde: GeneratorWord::empty(3, RingId::Q),
        a: Matrix::transvection(RingId::Q, 3, 0, 1, &q(1, 1)),
        a_next: b12_2.clone(),
    };
    let perm_word = GeneratorWord::new(3, RingId::Q, vec![Generator::Perm(sigma.clone())]).unwrap();
    let step2 = PEquivStep {
        p: perm_word.clone(),
        p_tilde: perm_word.clone(),
        q: GeneratorWord::empty(3, RingId::Q),
        q_tilde: GeneratorWord::empty(3, RingId::Q),
        a: b12_2,
        a_next: Matrix::transvection(RingId::Q, 3, 2, 1, &q(2, 1)),
    };
    let chain = PEquivChain { steps: vec![step1, step2] };
    assert_eq!(chain.verify().unwrap(), true);
    println!("two-step equivalence chain verifies: B_12(1) ~ B_12(2) ~ B_32(2)");

    // tampering with a middle matrix breaks the shared-frame condition
    let mut broken = chain.clone();
    broken.steps[1].a = Matrix::identity(RingId::Q, 3);
    assert_eq!(broken.verify().unwrap(), false);
    println!("tampered chain fails verification");

    println!("\nall word checks passed");
}
