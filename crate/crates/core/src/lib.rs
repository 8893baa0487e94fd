//! Sampling and Gabor-frame numerics for shift-invariant spaces generated by
//! totally positive windows of Gaussian type.
//!
//! The modules follow the data flow of a typical analysis: evaluate a window
//! ([`generator`]), describe a sampling set ([`pointset`]), assemble truncated
//! pre-Gramians and their extremal singular values ([`pregramian`]), relate them
//! to the Zak transform ([`zak`]) and to Gabor frame bounds ([`gabor`]), recover
//! or interpolate functions ([`reconstruct`]), and audit zero sets ([`analytic`]).

pub mod analytic;
pub mod coeffs;
pub mod error;
pub mod gabor;
pub mod generator;
pub(crate) mod linalg;
pub mod pointset;
pub mod pregramian;
pub mod reconstruct;
pub mod special;
pub mod zak;

pub use coeffs::CoeffSeq;
pub use error::{Error, Result};
pub use generator::{AccuracyCert, Generator, GeneratorSpec};
pub use pointset::{DensityEstimate, PointSet, Provenance};

/// Library version embedded in CLI outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
