//! Words in the standard generators of the nonnegative semigroup:
//! permutation matrices, positive-unit diagonals, and elementary
//! transvections I + x*E_(i,j) with x nonnegative.
//!
//! A word evaluates to the product of its generators in sequence order.
//! Words over the monomial generators only (no transvections) describe
//! elements of the invertible part; chains of those witness the
//! equivalence moves used when transporting maps across the semigroup.

use crate::matrix::{Matrix, MatrixError, MonomialMatrix};
use crate::perm::Permutation;
use crate::ring::{RingElement, RingError, RingId};
use crate::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("generator shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// One generator of the semigroup. Indices are 0-based in memory (the
/// external format is 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Perm(Permutation),
    Elem {
        i: usize,
        j: usize,
        x: RingElement,
    },
    Diag(Vec<RingElement>),
}

impl Generator {
    fn validate(&self, n: usize, ring: RingId) -> Result<(), WordError> {
        match self {
            Generator::Perm(p) => {
                if p.len() != n {
                    return Err(WordError::Shape(format!(
                        "permutation of {} points in a word of size {}",
                        p.len(),
                        n
                    )));
                }
            }
            Generator::Elem { i, j, x } => {
                if *i >= n || *j >= n || i == j {
                    return Err(WordError::Shape(format!(
                        "elementary position ({}, {}) out of range for n = {}",
                        i + 1,
                        j + 1,
                        n
                    )));
                }
                if x.ring() != ring {
                    return Err(WordError::Ring(RingError::RingMismatch {
                        op: "word generator",
                        lhs: ring,
                        rhs: x.ring(),
                    }));
                }
                if x.sign() < 0 {
                    return Err(WordError::Shape(format!(
                        "elementary parameter {} is negative",
                        x
                    )));
                }
            }
            Generator::Diag(d) => {
                if d.len() != n {
                    return Err(WordError::Shape(format!(
                        "diagonal of {} entries in a word of size {}",
                        d.len(),
                        n
                    )));
                }
                for e in d {
                    if e.ring() != ring {
                        return Err(WordError::Ring(RingError::RingMismatch {
                            op: "word generator",
                            lhs: ring,
                            rhs: e.ring(),
                        }));
                    }
                    if e.sign() <= 0 || !e.is_unit() {
                        return Err(WordError::Shape(format!(
                            "diagonal entry {} is not a positive unit",
                            e
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self, n: usize, ring: RingId) -> Matrix {
        match self {
            Generator::Perm(p) => Matrix::permutation(ring, p),
            Generator::Elem { i, j, x } => Matrix::transvection(ring, n, *i, *j, x),
            Generator::Diag(d) => Matrix::diagonal(d.clone()),
        }
    }

    pub fn is_monomial(&self) -> bool {
        !matches!(self, Generator::Elem { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorWord {
    n: usize,
    ring: RingId,
    seq: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new(n: usize, ring: RingId, seq: Vec<Generator>) -> Result<Self, WordError> {
        if n == 0 {
            return Err(WordError::Shape("empty dimension".into()));
        }
        for g in &seq {
            g.validate(n, ring)?;
        }
        Ok(GeneratorWord { n, ring, seq })
    }

    pub fn empty(n: usize, ring: RingId) -> Self {
        GeneratorWord {
            n,
            ring,
            seq: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn seq(&self) -> &[Generator] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// No transvections: the word stays inside the invertible part.
    pub fn is_monomial_word(&self) -> bool {
        self.seq.iter().all(Generator::is_monomial)
    }

    /// Product of the generators, in order.
    pub fn eval(&self) -> Matrix {
        let mut acc = Matrix::identity(self.ring, self.n);
        for g in &self.seq {
            acc = &acc * &g.to_matrix(self.n, self.ring);
        }
        acc
    }

    pub fn concat(&self, other: &GeneratorWord) -> Result<GeneratorWord, WordError> {
        if self.n != other.n {
            return Err(WordError::Shape(format!(
                "concat of words with n = {} and n = {}",
                self.n, other.n
            )));
        }
        if self.ring != other.ring {
            return Err(WordError::Ring(RingError::RingMismatch {
                op: "concat",
                lhs: self.ring,
                rhs: other.ring,
            }));
        }
        let mut seq = self.seq.clone();
        seq.extend(other.seq.iter().cloned());
        Ok(GeneratorWord {
            n: self.n,
            ring: self.ring,
            seq,
        })
    }
}

/// The two-generator word (diagonal, then permutation) denoting a
/// monomial matrix.
pub fn factor_monomial(m: &MonomialMatrix) -> GeneratorWord {
    GeneratorWord {
        n: m.n(),
        ring: m.ring(),
        seq: vec![
            Generator::Diag(m.diag().to_vec()),
            Generator::Perm(m.perm().clone()),
        ],
    }
}

/// Seeded random word mixing all three generator kinds, with parameters
/// drawn from the fixed sample pools.
pub fn random_word(n: usize, ring: RingId, length: usize, seed: u64) -> GeneratorWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_word_with(&mut rng, n, ring, length)
}

pub fn random_word_with<R: Rng>(
    rng: &mut R,
    n: usize,
    ring: RingId,
    length: usize,
) -> GeneratorWord {
    let elems = sample::elem_param_pool(ring);
    let units = sample::diag_unit_pool(ring);
    let seq = (0..length)
        .map(|_| random_generator(rng, n, &elems, &units))
        .collect();
    GeneratorWord { n, ring, seq }
}

/// Random word over the monomial generators only.
pub fn random_monomial_word<R: Rng>(
    rng: &mut R,
    n: usize,
    ring: RingId,
    length: usize,
) -> GeneratorWord {
    let units = sample::diag_unit_pool(ring);
    let seq = (0..length)
        .map(|_| match rng.gen_range(0..2) {
            0 => Generator::Perm(Permutation::random(n, rng)),
            _ => Generator::Diag((0..n).map(|_| sample::pick(&units, rng).clone()).collect()),
        })
        .collect();
    GeneratorWord { n, ring, seq }
}

/// Random word guaranteed to evaluate outside the invertible part: at
/// least one transvection with strictly positive parameter. Nonnegative
/// entries cannot cancel, so the extra entry never disappears again.
pub fn random_nonmonomial_word<R: Rng>(
    rng: &mut R,
    n: usize,
    ring: RingId,
    length: usize,
) -> GeneratorWord {
    let mut w = random_word_with(rng, n, ring, length.max(1));
    let has_positive_elem = w
        .seq
        .iter()
        .any(|g| matches!(g, Generator::Elem { x, .. } if x.sign() > 0));
    if !has_positive_elem {
        let elems = sample::elem_param_pool(ring);
        let mut x = sample::pick(&elems, rng).clone();
        while x.sign() == 0 {
            x = sample::pick(&elems, rng).clone();
        }
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let pos = rng.gen_range(0..=w.seq.len());
        w.seq.insert(pos, Generator::Elem { i, j, x });
    }
    w
}

fn random_generator<R: Rng>(
    rng: &mut R,
    n: usize,
    elems: &[RingElement],
    units: &[RingElement],
) -> Generator {
    match rng.gen_range(0..3) {
        0 => Generator::Perm(Permutation::random(n, rng)),
        1 => {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            Generator::Elem {
                i,
                j,
                x: sample::pick(elems, rng).clone(),
            }
        }
        _ => Generator::Diag((0..n).map(|_| sample::pick(units, rng).clone()).collect()),
    }
}

/// One move of the monomial-equivalence relation: P * A * P~ = Q * A' * Q~
/// with all four outer words monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PEquivStep {
    pub p: GeneratorWord,
    pub p_tilde: GeneratorWord,
    pub q: GeneratorWord,
    pub q_tilde: GeneratorWord,
    pub a: Matrix,
    pub a_next: Matrix,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PEquivChain {
    pub steps: Vec<PEquivStep>,
}

impl PEquivChain {
    /// Checks every step equation exactly, that the outer words are
    /// monomial words, and that consecutive steps share their middle
    /// matrix. Errors only on malformed shapes; a false verdict means some
    /// equation fails.
    pub fn verify(&self) -> Result<bool, MatrixError> {
        for pair in self.steps.windows(2) {
            if pair[0].a_next != pair[1].a {
                return Ok(false);
            }
        }
        for step in &self.steps {
            for w in [&step.p, &step.p_tilde, &step.q, &step.q_tilde] {
                if !w.is_monomial_word() {
                    return Ok(false);
                }
            }
            let lhs = step
                .p
                .eval()
                .checked_mul(&step.a)?
                .checked_mul(&step.p_tilde.eval())?;
            let rhs = step
                .q
                .eval()
                .checked_mul(&step.a_next)?
                .checked_mul(&step.q_tilde.eval())?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
