//! Exact optimal quantizers for a nonhomogeneous two-map Cantor distribution.
//!
//! The measure under study is the self-similar probability
//! `P = 1/4·P∘S1⁻¹ + 3/4·P∘S2⁻¹` with `S1(x) = x/4` and `S2(x) = x/2 + 1/2`.
//! The crate computes, in exact rational arithmetic:
//!
//! - optimal n-point codebooks and the n-th quantization errors, by greedy
//!   splitting of the maximal-weight cylinder ([`engine`]);
//! - the number of distinct optimal sets per stage and the genealogy graph
//!   connecting consecutive stages ([`engine`]);
//! - certified two-sided distortion bounds for arbitrary codebooks via
//!   adaptive cylinder refinement ([`distortion`]);
//! - an independent brute-force check: discretize the measure, solve the
//!   discrete n-means problem exactly by dynamic programming, and compare
//!   against the engine within a provable bracket ([`oracle`]).

pub mod cli;
pub mod distortion;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod rational;
pub mod word_measure;

pub use error::Error;
pub use rational::Rational;
pub use word_measure::Word;
