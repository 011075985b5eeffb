//! Spectral functionals of density matrices.

use std::fmt;
use std::str::FromStr;

use crate::error::{BuresError, Result};
use crate::euler::validate_density_matrix;
use crate::linalg::ComplexSquareMatrix;

/// Validation tolerance for functional inputs.
pub const DENSITY_TOL: f64 = 1e-10;

fn spectrum(rho: &ComplexSquareMatrix) -> Result<Vec<f64>> {
    let eig = validate_density_matrix(rho, DENSITY_TOL)?;
    Ok(eig.eigenvalues().iter().map(|&l| l.max(0.0)).collect())
}

/// `−Σ λ ln λ` with `0 ln 0 = 0`.
pub fn entropy_of_spectrum(lambdas: &[f64]) -> f64 {
    lambdas
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy `−Tr ρ ln ρ` (natural log).
pub fn von_neumann_entropy(rho: &ComplexSquareMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&spectrum(rho)?))
}

/// `Tr ρ²`.
pub fn purity(rho: &ComplexSquareMatrix) -> Result<f64> {
    validate_density_matrix(rho, DENSITY_TOL)?;
    Ok((*rho * *rho).trace().re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionalId {
    VonNeumannEntropy,
    Purity,
    /// `Tr ρ^k = Σ λ^k`. `k = 0` is accepted as the constant functional.
    EigenvalueMoment(u32),
}

impl FunctionalId {
    /// Value from a (nonnegative) spectrum.
    pub fn of_spectrum(&self, lambdas: &[f64]) -> f64 {
        match *self {
            FunctionalId::VonNeumannEntropy => entropy_of_spectrum(lambdas),
            FunctionalId::Purity => lambdas.iter().map(|l| l * l).sum(),
            FunctionalId::EigenvalueMoment(0) => 1.0,
            FunctionalId::EigenvalueMoment(k) => lambdas.iter().map(|l| l.powi(k as i32)).sum(),
        }
    }

    pub fn evaluate(&self, rho: &ComplexSquareMatrix) -> Result<f64> {
        match self {
            FunctionalId::Purity => purity(rho),
            _ => Ok(self.of_spectrum(&spectrum(rho)?)),
        }
    }

    /// Every functional here depends on ρ only through its spectrum.
    pub fn is_spectral(&self) -> bool {
        true
    }
}

impl fmt::Display for FunctionalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalId::VonNeumannEntropy => write!(f, "entropy"),
            FunctionalId::Purity => write!(f, "purity"),
            FunctionalId::EigenvalueMoment(k) => write!(f, "moment:{k}"),
        }
    }
}

impl FromStr for FunctionalId {
    type Err = BuresError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(FunctionalId::VonNeumannEntropy),
            "purity" => Ok(FunctionalId::Purity),
            _ => s
                .strip_prefix("moment:")
                .and_then(|k| k.parse().ok())
                .map(FunctionalId::EigenvalueMoment)
                .ok_or_else(|| BuresError::InvalidSpec(format!("unknown functional '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn entropy_examples() {
        let half = ComplexSquareMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap();
        assert!((von_neumann_entropy(&half).unwrap() - 2f64.ln()).abs() < 1e-15);

        let pure = ComplexSquareMatrix::from_rows(&[
            [C64::new(0.5, 0.0), C64::new(0.0, -0.5)],
            [C64::new(0.0, 0.5), C64::new(0.5, 0.0)],
        ])
        .unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-14);

        let d = ComplexSquareMatrix::from_real_diagonal(&[0.75, 0.25]).unwrap();
        let expected = -(0.75f64 * 0.75f64.ln()) - 0.25 * 0.25f64.ln();
        assert!((von_neumann_entropy(&d).unwrap() - expected).abs() < 1e-15);
        assert!((von_neumann_entropy(&d).unwrap() - 0.562_335).abs() < 1e-6);
    }

    #[test]
    fn purity_examples() {
        let third = ComplexSquareMatrix::from_real_diagonal(&[1. / 3., 1. / 3., 1. / 3.]).unwrap();
        assert!((purity(&third).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let pure = ComplexSquareMatrix::from_real_diagonal(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(purity(&pure).unwrap(), 1.0);
        let d = ComplexSquareMatrix::from_real_diagonal(&[0.75, 0.25]).unwrap();
        assert_eq!(purity(&d).unwrap(), 0.625);
    }

    #[test]
    fn invalid_input_is_rejected() {
        let bad = ComplexSquareMatrix::from_real_diagonal(&[0.9, 0.9]).unwrap();
        assert!(von_neumann_entropy(&bad).is_err());
        assert!(purity(&bad).is_err());
    }

    #[test]
    fn parse_and_display() {
        for s in ["entropy", "purity", "moment:0", "moment:3"] {
            assert_eq!(s.parse::<FunctionalId>().unwrap().to_string(), s);
        }
        assert!("moment:x".parse::<FunctionalId>().is_err());
        assert!("energy".parse::<FunctionalId>().is_err());
    }

    #[test]
    fn moments() {
        let l = [0.5, 0.3, 0.2];
        assert_eq!(FunctionalId::EigenvalueMoment(0).of_spectrum(&l), 1.0);
        assert!((FunctionalId::EigenvalueMoment(1).of_spectrum(&l) - 1.0).abs() < 1e-15);
        assert_eq!(
            FunctionalId::EigenvalueMoment(2).of_spectrum(&l),
            FunctionalId::Purity.of_spectrum(&l)
        );
    }
}
