//! Quantum-group deformed angular momentum, harmonics and central-potential
//! spectra.
//!
//! The crate is organised bottom-up. [`kernel`] holds scalar q-arithmetic,
//! [`rep`] builds the algebra as matrices on the irreducible blocks, [`func`]
//! realizes it on functions of `(x0, phi)`, [`harm`] constructs the deformed
//! spherical harmonics, [`integrate`] provides the Jackson integral and Gram
//! matrices, and [`schrod`] solves the resulting radial problems.
//! [`verify`] ties them together into one relation suite.

pub mod error;
pub mod func;
pub mod harm;
pub mod integrate;
pub mod jet;
pub mod kernel;
pub mod rep;
pub mod report;
pub mod schrod;
pub mod verify;

pub use error::{QError, Result};
pub use harm::HarmonicSpec;
pub use integrate::{GramReport, QuadratureRule};
pub use kernel::Deformation;
pub use rep::{AlgebraMatrices, OperatorMatrix};
pub use report::{CheckKind, Comparison, RelationCheck, VerificationReport, SCHEMA_VERSION};
pub use schrod::{Potential, SpectrumMode, SpectrumRow, SpectrumTable};
pub use verify::run_verification;
