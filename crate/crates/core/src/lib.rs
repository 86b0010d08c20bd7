//! Legendre-Galerkin eigensolver for Sturm-Liouville problems
//! `-y'' + q y = λ y` on (-1, 1) whose potential may blow up at both ends
//! like `(1-x)^{-β}(1+x)^{-γ}` with `β, γ < 1`.
//!
//! The pipeline is [`assembly::assemble`] → [`eigen::solve_pencil`] →
//! [`correction::corrected_eigenvalue`]; [`harness`] drives sweeps over `N`.

pub mod assembly;
pub mod basis;
pub mod chebyshev;
pub mod correction;
pub mod eigen;
pub mod error;
pub mod harness;
pub mod moments;
pub mod potential;
pub mod quadrature;
pub mod special;

pub use faer;

pub use assembly::{assemble, GalerkinSystem, Pentadiagonal};
pub use basis::{Basis, BasisCoefficients, BoundaryConditions, EndpointFlags, EndpointValues};
pub use correction::{corrected_eigenvalue, CorrectionReport};
pub use eigen::{solve_pencil, EigenPair};
pub use error::{Error, Result};
pub use moments::ExponentPair;
pub use potential::{Expr, PotentialTerm, Problem, Source};
