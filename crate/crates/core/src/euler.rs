//! Euler-angle coordinates on 2- and 3-state density matrices.
//!
//! A density matrix is written as `U·diag(λ)·U†`, where the eigenvalues
//! `λ` are squared components of a point on a sphere (trigonometric
//! simplex coordinates) and `U` is an Euler-angle product of one-parameter
//! subgroups of SU(2) or SU(3). The rightmost diagonal factors commute
//! with `diag(λ)` and drop out, leaving exactly `n² − 1` coordinates.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{BuresError, Result};
use crate::generators::spectral;
use crate::linalg::{eig_hermitian, ComplexSquareMatrix, HermitianEigenResult};

/// Upper end of the θ₂ range, `arccos(1/√3)`.
pub const THETA2_MAX: f64 = 0.955_316_618_124_509_3;

/// Inclusive coordinate range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleRange {
    pub name: &'static str,
    pub lower: f64,
    pub upper: f64,
}

impl AngleRange {
    const fn new(name: &'static str, upper: f64) -> Self {
        Self {
            name,
            lower: 0.0,
            upper,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn check(&self, value: f64) -> Result<()> {
        if value >= self.lower && value <= self.upper {
            Ok(())
        } else {
            Err(BuresError::OutOfRange {
                name: self.name,
                value,
                lower: self.lower,
                upper: self.upper,
            })
        }
    }
}

const EIGEN_RANGES_2: [AngleRange; 1] = [AngleRange::new("theta", FRAC_PI_4)];
const EIGEN_RANGES_3: [AngleRange; 2] = [
    AngleRange::new("theta1", FRAC_PI_4),
    AngleRange::new("theta2", THETA2_MAX),
];
const COSET_RANGES_2: [AngleRange; 2] = [
    AngleRange::new("alpha", PI),
    AngleRange::new("beta", FRAC_PI_2),
];
const COSET_RANGES_3: [AngleRange; 6] = [
    AngleRange::new("alpha", PI),
    AngleRange::new("beta", FRAC_PI_2),
    AngleRange::new("gamma", PI),
    AngleRange::new("theta_big", FRAC_PI_2),
    AngleRange::new("a", PI),
    AngleRange::new("b", FRAC_PI_2),
];

fn check_n(n: usize) -> Result<()> {
    match n {
        2 | 3 => Ok(()),
        _ => Err(BuresError::UnsupportedDimension(n)),
    }
}

pub fn eigen_ranges(n: usize) -> Result<&'static [AngleRange]> {
    check_n(n)?;
    Ok(if n == 2 {
        &EIGEN_RANGES_2
    } else {
        &EIGEN_RANGES_3
    })
}

pub fn coset_ranges(n: usize) -> Result<&'static [AngleRange]> {
    check_n(n)?;
    Ok(if n == 2 {
        &COSET_RANGES_2
    } else {
        &COSET_RANGES_3
    })
}

/// All `n² − 1` ranges, eigenvalue angles first.
pub fn coordinate_ranges(n: usize) -> Result<Vec<AngleRange>> {
    let mut all = eigen_ranges(n)?.to_vec();
    all.extend_from_slice(coset_ranges(n)?);
    Ok(all)
}

fn check_all(ranges: &[AngleRange], values: &[f64]) -> Result<()> {
    if ranges.len() != values.len() {
        return Err(BuresError::WrongAngleCount {
            expected: ranges.len(),
            got: values.len(),
        });
    }
    ranges.iter().zip(values).try_for_each(|(r, &v)| r.check(v))
}

/// θ for `n = 2`; (θ₁, θ₂) for `n = 3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenvalueAngles {
    n: usize,
    angles: [f64; 2],
}

impl EigenvalueAngles {
    pub fn new(n: usize, angles: &[f64]) -> Result<Self> {
        check_all(eigen_ranges(n)?, angles)?;
        let mut a = [0.0; 2];
        a[..angles.len()].copy_from_slice(angles);
        Ok(Self { n, angles: a })
    }

    pub fn qubit(theta: f64) -> Result<Self> {
        Self::new(2, &[theta])
    }

    pub fn qutrit(theta1: f64, theta2: f64) -> Result<Self> {
        Self::new(3, &[theta1, theta2])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles[..self.n - 1]
    }
}

/// (α, β) for `n = 2`; (α, β, γ, θ, a, b) for `n = 3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosetAngles {
    n: usize,
    angles: [f64; 6],
}

impl CosetAngles {
    pub fn new(n: usize, angles: &[f64]) -> Result<Self> {
        check_all(coset_ranges(n)?, angles)?;
        let mut a = [0.0; 6];
        a[..angles.len()].copy_from_slice(angles);
        Ok(Self { n, angles: a })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            angles: [0.0; 6],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles[..coset_len(self.n)]
    }
}

fn coset_len(n: usize) -> usize {
    n * n - n
}

/// Full `n² − 1` coordinate: eigenvalue angles plus coset angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrixParams {
    pub eigen: EigenvalueAngles,
    pub coset: CosetAngles,
}

impl DensityMatrixParams {
    pub fn new(eigen: EigenvalueAngles, coset: CosetAngles) -> Result<Self> {
        if eigen.n != coset.n {
            return Err(BuresError::DimensionMismatch {
                left: eigen.n,
                right: coset.n,
            });
        }
        Ok(Self { eigen, coset })
    }

    /// Splits a flat coordinate vector in [`coordinate_names`] order.
    pub fn from_coordinates(n: usize, coords: &[f64]) -> Result<Self> {
        check_n(n)?;
        let expected = n * n - 1;
        if coords.len() != expected {
            return Err(BuresError::WrongAngleCount {
                expected,
                got: coords.len(),
            });
        }
        let (e, c) = coords.split_at(n - 1);
        Self::new(EigenvalueAngles::new(n, e)?, CosetAngles::new(n, c)?)
    }

    pub fn n(&self) -> usize {
        self.eigen.n
    }

    pub fn coordinates(&self) -> Vec<f64> {
        let mut v = self.eigen.angles().to_vec();
        v.extend_from_slice(self.coset.angles());
        v
    }
}

/// Coordinate names, eigenvalue angles first.
pub fn coordinate_names(n: usize) -> Result<Vec<&'static str>> {
    Ok(coordinate_ranges(n)?.iter().map(|r| r.name).collect())
}

/// Generator index (1-based) of each factor of the full Euler product, in
/// left-to-right order, with the scale applied to its angle.
const EULER_FACTORS_2: [(usize, f64); 3] = [(3, 1.0), (2, 1.0), (3, 1.0)];
const EULER_FACTORS_3: [(usize, f64); 8] = [
    (3, 1.0),
    (2, 1.0),
    (3, 1.0),
    (5, 1.0),
    (3, 1.0),
    (2, 1.0),
    (3, 1.0),
    // λ₈ enters as exp(iλ₈·φ/√3).
    (8, 0.577_350_269_189_625_8),
];

/// Generator indices of the factors that survive truncation.
pub(crate) fn coset_factor_generators(n: usize) -> &'static [usize] {
    if n == 2 {
        &[3, 2]
    } else {
        &[3, 2, 3, 5, 3, 2]
    }
}

/// `exp(i·T_k·angle)` for the n-dimensional generator set.
pub(crate) fn factor(n: usize, generator: usize, angle: f64) -> ComplexSquareMatrix {
    spectral(n, generator).exp_i(angle)
}

/// λ_i in printed order: `(cos²θ, sin²θ)` or
/// `(cos²θ₁ sin²θ₂, sin²θ₁ sin²θ₂, cos²θ₂)`.
pub fn diag_eigenvalues(eigen: &EigenvalueAngles) -> Vec<f64> {
    match eigen.n {
        2 => {
            let (s, c) = eigen.angles[0].sin_cos();
            vec![c * c, s * s]
        }
        _ => {
            let (s1, c1) = eigen.angles[0].sin_cos();
            let (s2, c2) = eigen.angles[1].sin_cos();
            vec![c1 * c1 * s2 * s2, s1 * s1 * s2 * s2, c2 * c2]
        }
    }
}

/// Full special-unitary Euler product: 3 angles (α, β, γ) for `n = 2`,
/// 8 angles (α, β, γ, θ, a, b, c, φ) for `n = 3`. No range checks.
pub fn euler_unitary(n: usize, full_angles: &[f64]) -> Result<ComplexSquareMatrix> {
    check_n(n)?;
    let factors: &[(usize, f64)] = if n == 2 {
        &EULER_FACTORS_2
    } else {
        &EULER_FACTORS_3
    };
    if full_angles.len() != factors.len() {
        return Err(BuresError::WrongAngleCount {
            expected: factors.len(),
            got: full_angles.len(),
        });
    }
    let mut u = ComplexSquareMatrix::identity(n)?;
    for (&(g, scale), &angle) in factors.iter().zip(full_angles) {
        u = u * factor(n, g, scale * angle);
    }
    Ok(u)
}

/// Euler product with the dropped (rightmost diagonal) factors removed.
pub fn coset_unitary(coset: &CosetAngles) -> ComplexSquareMatrix {
    let n = coset.n;
    coset_factor_generators(n).iter().zip(coset.angles()).fold(
        ComplexSquareMatrix::identity(n).expect("n checked"),
        |u, (&g, &angle)| u * factor(n, g, angle),
    )
}

/// `ρ′ = U·diag(λ)·U†`.
pub fn density_from_params(p: &DensityMatrixParams) -> ComplexSquareMatrix {
    let u = coset_unitary(&p.coset);
    let d =
        ComplexSquareMatrix::from_real_diagonal(&diag_eigenvalues(&p.eigen)).expect("n checked");
    u * d * u.dagger()
}

/// Checks Hermiticity, unit trace and positivity to `tol`; returns the
/// eigendecomposition on success.
pub fn validate_density_matrix(
    rho: &ComplexSquareMatrix,
    tol: f64,
) -> Result<HermitianEigenResult> {
    let herm = rho.hermiticity_deviation();
    if herm > tol {
        return Err(BuresError::NotDensityMatrix(format!(
            "Hermiticity deviation {herm:e}"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(BuresError::NotDensityMatrix(format!("trace {tr}")));
    }
    let eig = eig_hermitian(rho)?;
    let min = eig.eigenvalues()[rho.dim() - 1];
    if min < -tol {
        return Err(BuresError::NotDensityMatrix(format!(
            "negative eigenvalue {min:e}"
        )));
    }
    Ok(eig)
}

/// Tolerance of the n = 2 inverse map's input checks and degeneracy flag.
pub const INVERSE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseParams {
    pub params: DensityMatrixParams,
    /// Eigenvalues within [`INVERSE_TOL`]; the coset angles are then zero.
    pub degenerate: bool,
}

/// Recovers (θ, α, β) from a 2x2 density matrix.
pub fn params_from_density_2(rho: &ComplexSquareMatrix) -> Result<InverseParams> {
    if rho.dim() != 2 {
        return Err(BuresError::DimensionMismatch {
            left: 2,
            right: rho.dim(),
        });
    }
    let eig = validate_density_matrix(rho, INVERSE_TOL)?;
    let (l1, l2) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let degenerate = (l1 - l2).abs() <= INVERSE_TOL;
    // cos²θ = λ_max ∈ [1/2, 1] after renormalizing the trace.
    let lmax = (l1 / (l1 + l2)).clamp(0.5, 1.0);
    let theta = lmax.sqrt().acos().clamp(0.0, FRAC_PI_4);
    let eigen = EigenvalueAngles::qubit(theta)?;
    if degenerate {
        return Ok(InverseParams {
            params: DensityMatrixParams::new(eigen, CosetAngles::zeros(2)?)?,
            degenerate,
        });
    }
    // Leading eigenvector is e^{iφ}(e^{iα} cos β, −e^{−iα} sin β).
    let v1 = eig.eigenvectors[(0, 0)];
    let v2 = eig.eigenvectors[(1, 0)];
    let beta = v1.norm().clamp(0.0, 1.0).acos().clamp(0.0, FRAC_PI_2);
    let alpha = if v1.norm() < 1e-14 || v2.norm() < 1e-14 {
        0.0
    } else {
        // α is defined modulo π: exp(iσ₃π) = −I leaves ρ unchanged.
        let a = 0.5 * (v1.arg() - (-v2).arg());
        let a = a.rem_euclid(PI);
        if a > PI - 1e-15 {
            0.0
        } else {
            a
        }
    };
    Ok(InverseParams {
        params: DensityMatrixParams::new(eigen, CosetAngles::new(2, &[alpha, beta])?)?,
        degenerate,
    })
}
