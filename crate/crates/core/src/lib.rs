//! Point spectrum, eigenvalue counts and singularity classes of self-adjoint
//! operators under finite-rank singular perturbations
//! `Ã⁻¹ = A⁻¹ + Σ_k b_k⁻¹ (·, e_k) e_k`.
//!
//! Each channel `k` reduces to the scalar secular equation `s_k(E) = b_k`
//! over the spectral measure of `e_k`; see [`secular`].

pub mod bessel;
pub mod cli;
pub mod error;
pub mod exec;
pub mod measure;
pub mod model_circle;
pub mod model_interval;
pub mod perturbation;
pub mod quadrature;
pub mod report;
pub mod secular;

pub use error::{Error, Result};
pub use measure::{ExtendedReal, MeasureKind, SpectralMeasure};
pub use quadrature::QuadratureConfig;
pub use secular::{SecularRoot, SecularWindow, SolverConfig};
