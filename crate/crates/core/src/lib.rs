//! Analysis toolkit for vectorial Boolean functions F: F_2^n -> F_2^n.
//!
//! The crate computes Walsh spectra over 2^{2n} points, exclude
//! multiplicities of function graphs as Sidon sets, the derived
//! CCZ-invariants and Hamming-distance lower bounds between APN functions,
//! ortho-derivatives of quadratic APN functions, and binary Kloosterman
//! sums, for dimensions 2 <= n <= 16.

pub mod catalog;
pub mod error;
pub mod exclude;
pub mod field;
pub mod spectral;
pub mod theory;
pub mod vbf;

pub use error::{Error, Result};
pub use exclude::{ExcludeHistogram, ExcludeSpectrum, PiInvariant, SidonSet};
pub use field::{FieldElement, FieldSpec};
pub use spectral::{PlateauProfile, WalshSpectrum};
pub use theory::{BoundReport, KloostermanTable, OrthoDerivative};
pub use vbf::{BooleanFunc, DifferenceTables, VectorialFunc};
