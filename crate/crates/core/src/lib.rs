//! Euler-angle coordinates on qubit and qutrit density matrices, the Bures
//! measure in those coordinates, and quadrature / sampling over the state
//! space.
//!
//! A state is `ρ′ = U·diag(λ)·U†` with `λ` written as squared sphere
//! components and `U` an Euler product of Pauli (n = 2) or Gell-Mann
//! (n = 3) exponentials. The Bures density is the Hall eigenvalue density
//! times the truncated Haar density on `SU(n)/U(1)^{n−1}`.
//!
//! ```
//! use bures_core::{density_from_params, DensityMatrixParams, NormalizationMode, bures_joint_density};
//!
//! let p = DensityMatrixParams::from_coordinates(2, &[0.3, 1.0, 0.6]).unwrap();
//! let rho = density_from_params(&p);
//! assert!((rho.trace().re - 1.0).abs() < 1e-14);
//! let d = bures_joint_density(&p, NormalizationMode::Raw);
//! assert!(d.value > 0.0);
//! ```

pub mod error;
pub mod euler;
pub mod functionals;
pub mod generators;
pub mod integrate;
pub mod invariants;
pub mod linalg;
pub mod measure;
pub mod quadrature;
pub mod sample;
pub mod stats;

pub use error::{BuresError, Result};
pub use euler::{
    coordinate_names, coset_unitary, density_from_params, diag_eigenvalues, euler_unitary,
    params_from_density_2, CosetAngles, DensityMatrixParams, EigenvalueAngles, InverseParams,
};
pub use functionals::{purity, von_neumann_entropy, FunctionalId};
pub use generators::{gell_mann, pauli, GeneratorSet};
pub use integrate::{integrate, Estimate, QuadratureSpec, Rule};
pub use linalg::{
    dagger, eig_hermitian, expm_i_generator, matmul, trace, ComplexSquareMatrix,
    HermitianEigenResult, C64,
};
pub use measure::{
    bures_joint_density, eigenvalue_jacobian, haar_coset_density, hall_density,
    normalization_constant, AngleBox, MeasureValue, NormalizationMode,
};
pub use sample::{
    default_envelope_grid, estimate_envelope, monte_carlo, sample, McEstimate, SamplerSpec,
};
