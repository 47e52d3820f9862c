//! # obsergo
//!
//! Ergotropy and observational ergotropy of finite-dimensional quantum
//! states under coarse-grained measurements.
//!
//! - [`numerics`]: dense complex matrices and a Jacobi Hermitian eigensolver.
//! - [`quantum`]: density matrices, Hamiltonians, dephasing, seeded sampling.
//! - [`measurement`]: POVMs, classical post-processing, coarse-grained states.
//! - [`ergotropy`]: passive energy, ergotropy, observational ergotropy and the
//!   incoherent/coherent split.
//! - [`majorization`]: majorization order and bistochastic matrices.
//! - [`verifier`]: seeded Monte-Carlo audits of the monotonicity and
//!   optimality relations between these quantities.
//! - [`cli`]: the `obsergo` command-line front end and the JSON instance format.
//!
//! ```
//! use obsergo::{ergotropy, DensityMatrix, Hamiltonian};
//!
//! let rho = DensityMatrix::from_populations(&[0.25, 0.75]).unwrap();
//! let h = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
//! assert!((ergotropy::ergotropy(&rho, &h).unwrap() - 0.5).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

pub mod cli;
pub mod ergotropy;
pub mod error;
pub mod majorization;
pub mod measurement;
pub mod numerics;
pub mod quantum;
pub mod verifier;

pub use error::{Error, Result};
pub use ergotropy::WorkReport;
pub use majorization::ProbVector;
pub use measurement::{FineGrainedMeasurement, Povm, StochasticMatrix};
pub use numerics::{eig_hermitian, ComplexMatrix, EigenDecomposition};
pub use quantum::{DensityMatrix, Hamiltonian, RandomSource};
pub use num_complex::Complex64;
