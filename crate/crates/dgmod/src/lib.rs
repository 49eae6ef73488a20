//! Exact-arithmetic homological algebra for finite-dimensional DG algebras
//! and DG modules over `Q` or a prime field: homology, semi-free
//! resolutions, Ext/Tor and Betti/Bass numbers, Yoneda extensions with Baer
//! sums, tangent spaces to module varieties with GL-orbit censuses over
//! finite fields, and a scanner that witnesses the finiteness of the set of
//! semidualizing objects at small scale.
//!
//! Everything is dense linear algebra over an exact field; there is no
//! floating point and no randomness outside explicitly seeded tests.
//!
//! Start with the runnable examples (`cargo run --example homology`, etc.)
//! or the `dgmod` command-line tool.

pub mod algebra;
pub mod cli;
pub mod complex;
pub mod error;
pub mod instances;
pub mod json;
pub mod matrix;
pub mod module;
pub mod moduli;
pub mod resolution;
pub mod scalar;
pub mod yoneda;

pub use algebra::{koszul, AlgebraMorphism, DGAlgebra};
pub use complex::{Complex, GradedSpace, HomologyWindow};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use module::{free_module, DGModule, DGModuleMorphism, SemifreeModule};
pub use scalar::{FieldSpec, Scalar};
