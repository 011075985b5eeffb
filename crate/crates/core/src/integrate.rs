//! Tensor-product quadrature of functionals against the Bures measure.
//!
//! The angle box is rectangular, so a product of 1-D rules covers it
//! directly. The RAW density is `eigen_factor(θ) · haar(x)`; for spectral
//! functionals the integrand factorizes the same way, and the tensor sum
//! splits into an eigen-angle sum times a coset-angle sum with no change
//! in the rule.

use crate::error::{BuresError, Result};
use crate::euler::{density_from_params, CosetAngles, DensityMatrixParams, EigenvalueAngles};
use crate::functionals::FunctionalId;
use crate::linalg::{eig_hermitian, ComplexSquareMatrix};
use crate::measure::{
    bures_raw_density, coset_volume, eigen_factor, haar_coset_density, normalization_constant,
    AngleBox,
};
pub use crate::quadrature::Rule;
use crate::quadrature::{rule_on_interval, TensorGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadratureSpec {
    pub points_per_axis: usize,
    pub rule: Rule,
}

impl QuadratureSpec {
    pub fn new(points_per_axis: usize, rule: Rule) -> Self {
        Self {
            points_per_axis,
            rule,
        }
    }

    pub fn gauss_legendre(points_per_axis: usize) -> Self {
        Self::new(points_per_axis, Rule::GaussLegendre)
    }

    /// Half resolution, used for the error estimate.
    pub fn coarse(&self) -> Self {
        Self::new((self.points_per_axis / 2).max(2), self.rule)
    }

    fn validate(&self) -> Result<()> {
        if self.points_per_axis < 2 {
            return Err(BuresError::InvalidSpec(format!(
                "points per axis must be at least 2, got {}",
                self.points_per_axis
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::gauss_legendre(32)
    }
}

/// A quadrature value with the difference to the half-resolution rule as
/// its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub points_per_axis: usize,
    pub coarse_points_per_axis: usize,
}

pub fn grid_for(angle_box: &AngleBox, spec: &QuadratureSpec) -> Result<TensorGrid> {
    spec.validate()?;
    let axes = angle_box
        .ranges()
        .iter()
        .map(|r| rule_on_interval(spec.rule, spec.points_per_axis, r.lower, r.upper))
        .collect::<Result<Vec<_>>>()?;
    Ok(TensorGrid::new(axes))
}

/// `Σ w · f(θ) · eigen_factor(θ)` over the eigen-angle box.
pub fn eigen_integral<F>(n: usize, spec: &QuadratureSpec, f: F) -> Result<f64>
where
    F: Fn(&EigenvalueAngles) -> f64 + Sync,
{
    let grid = grid_for(&AngleBox::eigen(n)?, spec)?;
    Ok(grid.sum(|x| {
        let e = EigenvalueAngles::new(n, x).expect("node inside box");
        let w = eigen_factor(&e);
        if w == 0.0 {
            0.0
        } else {
            w * f(&e)
        }
    }))
}

/// `Σ w · haar(x)` over the coset box.
///
/// The Haar density does not depend on the leftmost angle α (left
/// invariance of `U†dU`), so that axis contributes its width exactly and
/// the sum runs over the remaining axes.
pub fn coset_integral(n: usize, spec: &QuadratureSpec) -> Result<f64> {
    let coset = AngleBox::coset(n)?;
    let (alpha, rest) = coset.ranges().split_first().expect("coset box has angles");
    spec.validate()?;
    let axes = rest
        .iter()
        .map(|r| rule_on_interval(spec.rule, spec.points_per_axis, r.lower, r.upper))
        .collect::<Result<Vec<_>>>()?;
    let sum = TensorGrid::new(axes).sum(|x| {
        let mut angles = [0.0; 6];
        angles[0] = alpha.lower;
        angles[1..=x.len()].copy_from_slice(x);
        haar_coset_density(&CosetAngles::new(n, &angles[..=x.len()]).expect("node inside box"))
    });
    Ok(alpha.width() * sum)
}

/// Integral of the RAW density over the full box at one resolution.
pub fn raw_volume(n: usize, spec: &QuadratureSpec) -> Result<f64> {
    Ok(eigen_integral(n, spec, |_| 1.0)? * coset_integral(n, spec)?)
}

/// RAW volume with a two-resolution error estimate.
pub fn volume(n: usize, spec: &QuadratureSpec) -> Result<Estimate> {
    let fine = raw_volume(n, spec)?;
    let coarse_spec = spec.coarse();
    let coarse = raw_volume(n, &coarse_spec)?;
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs(),
        points_per_axis: spec.points_per_axis,
        coarse_points_per_axis: coarse_spec.points_per_axis,
    })
}

/// Full-dimensional tensor sum of `f(params, ρ′) · normalized density`.
/// Visits `points_per_axis^(n²−1)` nodes.
pub fn integrate_full<F>(n: usize, spec: &QuadratureSpec, f: F) -> Result<f64>
where
    F: Fn(&DensityMatrixParams, &ComplexSquareMatrix) -> f64 + Sync,
{
    let grid = grid_for(&AngleBox::full(n)?, spec)?;
    let z = normalization_constant(n);
    let sum = grid.sum(|x| {
        let p = DensityMatrixParams::from_coordinates(n, x).expect("node inside box");
        let density = bures_raw_density(&p);
        if density == 0.0 {
            return 0.0;
        }
        density * f(&p, &density_from_params(&p))
    });
    Ok(sum / z)
}

fn functional_of_density(f: FunctionalId, rho: &ComplexSquareMatrix) -> f64 {
    let eig = eig_hermitian(rho).expect("density matrices are Hermitian");
    let lambdas: Vec<f64> = eig.eigenvalues().iter().map(|&l| l.max(0.0)).collect();
    f.of_spectrum(&lambdas)
}

/// Full-dimensional quadrature of a functional, evaluated on `ρ′` at every
/// node, with a two-resolution error estimate.
pub fn integrate_functional_full(
    n: usize,
    f: FunctionalId,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let at = |s: &QuadratureSpec| integrate_full(n, s, |_, rho| functional_of_density(f, rho));
    let fine = at(spec)?;
    let coarse_spec = spec.coarse();
    let coarse = at(&coarse_spec)?;
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs(),
        points_per_axis: spec.points_per_axis,
        coarse_points_per_axis: coarse_spec.points_per_axis,
    })
}

fn factorized(n: usize, f: FunctionalId, spec: &QuadratureSpec) -> Result<f64> {
    let eigen = eigen_integral(n, spec, |e| {
        f.of_spectrum(&crate::euler::diag_eigenvalues(e))
    })?;
    Ok(eigen * coset_volume(n) / normalization_constant(n))
}

/// Expectation of `f` under the normalized Bures measure.
///
/// For n = 2 this runs the full 3-D tensor rule. For n = 3 the 8-D tensor
/// sum is evaluated in its factorized form, which is exact for spectral
/// functionals; the coset factor is the cached coset volume.
pub fn integrate(n: usize, f: FunctionalId, spec: &QuadratureSpec) -> Result<Estimate> {
    spec.validate()?;
    match n {
        2 => integrate_functional_full(n, f, spec),
        3 if f.is_spectral() => {
            let fine = factorized(n, f, spec)?;
            let coarse_spec = spec.coarse();
            let coarse = factorized(n, f, &coarse_spec)?;
            Ok(Estimate {
                value: fine,
                error: (fine - coarse).abs(),
                points_per_axis: spec.points_per_axis,
                coarse_points_per_axis: coarse_spec.points_per_axis,
            })
        }
        3 => integrate_functional_full(n, f, spec),
        _ => Err(BuresError::UnsupportedDimension(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn qubit_volume_is_pi_squared() {
        for points in [32, 64] {
            let v = raw_volume(2, &QuadratureSpec::gauss_legendre(points)).unwrap();
            assert!((v - PI * PI).abs() < 1e-8, "{points}: {v}");
        }
        let a = raw_volume(2, &QuadratureSpec::gauss_legendre(32)).unwrap();
        let b = raw_volume(2, &QuadratureSpec::gauss_legendre(64)).unwrap();
        assert!((a - b).abs() < 1e-6);
    }

    #[test]
    fn constant_functional_integrates_to_one() {
        let e = integrate(
            2,
            FunctionalId::EigenvalueMoment(0),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((e.value - 1.0).abs() < 1e-6);
        let e = integrate(
            3,
            FunctionalId::EigenvalueMoment(0),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((e.value - 1.0).abs() < 1e-6);
    }

    /// 1-D reference: spectral functionals only see θ, with weight
    /// `8 cos² 2θ / π` on `[0, π/4]`.
    fn reference_1d(g: impl Fn(f64) -> f64) -> f64 {
        let axis = rule_on_interval(Rule::GaussLegendre, 400, 0.0, FRAC_PI_4).unwrap();
        axis.integrate(|t| g(t) * 8.0 * (2.0 * t).cos().powi(2) / PI)
    }

    #[test]
    fn qubit_purity_matches_1d_reference() {
        let reference = reference_1d(|t| t.cos().powi(4) + t.sin().powi(4));
        assert!((reference - 0.875).abs() < 1e-12);
        let e = integrate(2, FunctionalId::Purity, &QuadratureSpec::default()).unwrap();
        assert!((e.value - reference).abs() < 1e-6, "{}", e.value);
    }

    #[test]
    fn qubit_entropy_stable_across_resolutions() {
        let a = integrate(
            2,
            FunctionalId::VonNeumannEntropy,
            &QuadratureSpec::gauss_legendre(32),
        )
        .unwrap();
        let b = integrate(
            2,
            FunctionalId::VonNeumannEntropy,
            &QuadratureSpec::gauss_legendre(64),
        )
        .unwrap();
        assert!((a.value - b.value).abs() < 1e-5);
        // High-precision scripted value of the 1-D integral.
        assert!(
            (b.value - 0.219_627_694_453_223_95).abs() < 1e-7,
            "{}",
            b.value
        );
    }

    #[test]
    fn qutrit_factorized_matches_full_tensor_at_low_resolution() {
        let spec = QuadratureSpec::gauss_legendre(4);
        for f in [FunctionalId::Purity, FunctionalId::VonNeumannEntropy] {
            let full = integrate_functional_full(3, f, &spec).unwrap().value;
            let eigen = eigen_integral(3, &spec, |e| {
                f.of_spectrum(&crate::euler::diag_eigenvalues(e))
            })
            .unwrap();
            let fact = eigen * coset_integral(3, &spec).unwrap() / normalization_constant(3);
            assert!(
                (full - fact).abs() < 1e-12 * fact.abs().max(1.0),
                "{f}: {full} vs {fact}"
            );
        }
    }

    #[test]
    fn qutrit_expectations_regression() {
        // High-precision scripted values of the 2-D eigen-angle integrals.
        let spec = QuadratureSpec::gauss_legendre(48);
        let e = integrate(3, FunctionalId::Purity, &spec).unwrap();
        assert!(
            (e.value - 0.684_443_199_321_444_6).abs() < 1e-8,
            "{}",
            e.value
        );
        let e = integrate(3, FunctionalId::VonNeumannEntropy, &spec).unwrap();
        assert!(
            (e.value - 0.523_048_468_775_404_7).abs() < 1e-6,
            "{}",
            e.value
        );
    }

    #[test]
    fn linearity() {
        let spec = QuadratureSpec::gauss_legendre(16);
        let p = integrate(2, FunctionalId::Purity, &spec).unwrap().value;
        let s = integrate(2, FunctionalId::VonNeumannEntropy, &spec)
            .unwrap()
            .value;
        let combo = integrate_full(2, &spec, |_, rho| {
            let eig = eig_hermitian(rho).unwrap();
            let l: Vec<f64> = eig.eigenvalues().iter().map(|&x| x.max(0.0)).collect();
            2.0 * FunctionalId::Purity.of_spectrum(&l)
                - 3.0 * FunctionalId::VonNeumannEntropy.of_spectrum(&l)
        })
        .unwrap();
        assert!((combo - (2.0 * p - 3.0 * s)).abs() < 1e-12);
    }

    #[test]
    fn simpson_rule_agrees() {
        let spec = QuadratureSpec::new(65, Rule::CompositeSimpson);
        let e = integrate(2, FunctionalId::Purity, &spec).unwrap();
        assert!((e.value - 0.875).abs() < 1e-6, "{}", e.value);
    }

    #[test]
    fn invalid_spec() {
        assert!(integrate(2, FunctionalId::Purity, &QuadratureSpec::gauss_legendre(1)).is_err());
        assert!(integrate(4, FunctionalId::Purity, &QuadratureSpec::default()).is_err());
    }
}
