//! Fourier analysis of unimodular circle maps.
//!
//! Sampled maps and their coefficients ([`spectrum`]), topological degree
//! from winding and from the spectrum ([`degree`]), fractional Sobolev and
//! BMO norms ([`norms`]), the scaled kernels behind the two-sided bounds
//! ([`kernels`]), the smoothing and outer-factor pipeline ([`pipeline`]),
//! Blaschke products and the counterexample family ([`blaschke`]), and the
//! seeded suites that tie them together ([`suite`]).

pub mod blaschke;
pub mod degree;
pub mod error;
pub mod io;
pub mod kernels;
pub mod maps;
pub mod norms;
pub mod pipeline;
pub mod quadrature;
pub mod report;
pub mod spectrum;
pub mod suite;

pub use error::{Error, Result};
pub use report::{Check, VerificationReport};
pub use spectrum::{CircleSamples, FourierCoeffs, UnimodularSamples};
pub use suite::{run_suite, SuiteConfig, SuiteName};
