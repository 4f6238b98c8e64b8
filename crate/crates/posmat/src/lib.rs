//! Invertible matrices with nonnegative entries over linearly ordered
//! rings, their generator words, and the decomposition of semigroup
//! automorphisms into inner, ring-map and homothety parts.

pub mod automorphism;
pub mod decompose;
pub mod json;
pub mod matrix;
pub mod perm;
pub mod ring;
pub mod sample;
pub mod suites;
pub mod words;

pub use automorphism::{
    AutomorphismError, AutomorphismOracle, CentralHomDescriptor, OraclePart,
    RingMapDescriptor, RingMapVariant, StandardTriple,
};
pub use decompose::{
    decompose, CCounterexample, DecompositionReport, NormalizationTrace, NormalizedOracle,
    PipelineConfig, Rejection, ResidualCheck, Verdict,
};
pub use matrix::{InvolutionData, Matrix, MatrixError, MonomialMatrix};
pub use perm::Permutation;
pub use ring::{RingElement, RingError, RingId};
pub use suites::{run_suite, SuiteConfig, SuiteError, SuiteReport, SUITE_IDS};
pub use words::{Generator, GeneratorWord, PEquivChain, PEquivStep, WordError};
