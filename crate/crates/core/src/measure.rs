//! Bures measure density in Euler-angle coordinates.
//!
//! The density is a product of three factors: the Hall eigenvalue density,
//! the Jacobian from eigenvalues to the trigonometric simplex angles, and
//! the truncated Haar density on the coset space `G/H`. The last one is
//! computed from the Maurer–Cartan form `U†dU` rather than transcribed from
//! a closed form.

use std::sync::OnceLock;

use crate::error::{BuresError, Result};
use crate::euler::{
    coordinate_ranges, coset_factor_generators, coset_ranges, diag_eigenvalues, eigen_ranges,
    factor, AngleRange, CosetAngles, DensityMatrixParams, EigenvalueAngles,
};
use crate::generators::spectral;
use crate::integrate::{self, QuadratureSpec, Rule};
use crate::linalg::{real_det, ComplexSquareMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormalizationMode {
    Raw,
    Normalized,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub mode: NormalizationMode,
    pub n: usize,
}

/// The rectangular coordinate domain.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleBox {
    n: usize,
    ranges: Vec<AngleRange>,
}

impl AngleBox {
    /// The full `n² − 1` dimensional box.
    pub fn full(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            ranges: coordinate_ranges(n)?,
        })
    }

    pub fn eigen(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            ranges: eigen_ranges(n)?.to_vec(),
        })
    }

    pub fn coset(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            ranges: coset_ranges(n)?.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranges(&self) -> &[AngleRange] {
        &self.ranges
    }

    pub fn dimension(&self) -> usize {
        self.ranges.len()
    }

    pub fn volume(&self) -> f64 {
        self.ranges.iter().map(AngleRange::width).product()
    }
}

/// Value of the Hall density. At a zero eigenvalue the `1/√λ` factor
/// diverges; the value is then `+∞` and `boundary_singular` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HallDensity {
    pub value: f64,
    pub boundary_singular: bool,
}

/// `(λ₁…λ_n)^{−1/2} · ∏_{j<k} 4(λ_j − λ_k)²/(λ_j + λ_k)`.
pub fn hall_density(lambdas: &[f64]) -> Result<HallDensity> {
    if !(2..=3).contains(&lambdas.len()) {
        return Err(BuresError::UnsupportedDimension(lambdas.len()));
    }
    let sum: f64 = lambdas.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(BuresError::NotDensityMatrix(format!(
            "eigenvalues sum to {sum}"
        )));
    }
    if let Some(&neg) = lambdas.iter().find(|&&l| l < 0.0 || l.is_nan()) {
        return Err(BuresError::NotDensityMatrix(format!(
            "negative eigenvalue {neg}"
        )));
    }
    if lambdas.contains(&0.0) {
        return Ok(HallDensity {
            value: f64::INFINITY,
            boundary_singular: true,
        });
    }
    let mut value = 1.0 / lambdas.iter().product::<f64>().sqrt();
    for j in 0..lambdas.len() {
        for k in (j + 1)..lambdas.len() {
            let d = lambdas[j] - lambdas[k];
            value *= 4.0 * d * d / (lambdas[j] + lambdas[k]);
        }
    }
    Ok(HallDensity {
        value,
        boundary_singular: false,
    })
}

/// `|det ∂(λ₁..λ_{n−1})/∂(angles)|`: `sin 2θ`, or `sin 2θ₁ · sin²θ₂ · sin 2θ₂`.
pub fn eigenvalue_jacobian(eigen: &EigenvalueAngles) -> f64 {
    let a = eigen.angles();
    match eigen.n() {
        2 => (2.0 * a[0]).sin().abs(),
        _ => {
            let s2 = a[1].sin();
            ((2.0 * a[0]).sin() * s2 * s2 * (2.0 * a[1]).sin()).abs()
        }
    }
}

/// Hall density times the eigenvalue Jacobian, composed analytically so
/// the `1/√λ` divergence cancels against the Jacobian zero:
///
/// * n = 2: `8 cos² 2θ`
/// * n = 3: `4 sin θ₂ · 4 sin²θ₂ cos² 2θ₁ · ∏_{i=1,2} 4(λ_i − λ₃)²/(λ_i + λ₃)`
///
/// On the box `λ₃ = cos²θ₂ ≥ 1/3`, so the remaining denominators never vanish.
pub fn eigen_factor(eigen: &EigenvalueAngles) -> f64 {
    let a = eigen.angles();
    match eigen.n() {
        2 => {
            let c = (2.0 * a[0]).cos();
            8.0 * c * c
        }
        _ => {
            let l = diag_eigenvalues(eigen);
            let s2 = a[1].sin();
            let c1 = (2.0 * a[0]).cos();
            let mut v = 4.0 * s2 * 4.0 * s2 * s2 * c1 * c1;
            for &li in &l[..2] {
                let d = li - l[2];
                v *= 4.0 * d * d / (li + l[2]);
            }
            v
        }
    }
}

#[inline]
fn trace_product(a: &ComplexSquareMatrix, b: &ComplexSquareMatrix) -> C64 {
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Maurer–Cartan coefficient matrix `c_{k,a} = ½ Tr(−i U† ∂_k U · T_a)`,
/// rows indexed by the coset angles, columns by the coset generators.
pub fn maurer_cartan_coefficients(coset: &CosetAngles) -> Vec<Vec<f64>> {
    let n = coset.n();
    let gens = coset_factor_generators(n);
    let angles = coset.angles();
    let m = gens.len();

    let factors: Vec<ComplexSquareMatrix> = gens
        .iter()
        .zip(angles)
        .map(|(&g, &x)| factor(n, g, x))
        .collect();
    let id = ComplexSquareMatrix::identity(n).expect("n checked");
    let mut prefix = Vec::with_capacity(m + 1);
    prefix.push(id);
    for f in &factors {
        let last = *prefix.last().expect("non-empty");
        prefix.push(last * *f);
    }
    let mut suffix = vec![id; m + 1];
    for k in (0..m).rev() {
        suffix[k] = factors[k] * suffix[k + 1];
    }
    let u_dag = prefix[m].dagger();
    let minus_i = C64::new(0.0, -1.0);
    let i = C64::new(0.0, 1.0);

    let coset_gens: Vec<&ComplexSquareMatrix> = coset_generator_indices(n)
        .iter()
        .map(|&a| spectral(n, a).generator())
        .collect();

    (0..m)
        .map(|k| {
            // ∂_k U: the k-th factor exp(iG x) replaced by iG·exp(iG x).
            let g = spectral(n, gens[k]).generator();
            let d_factor = g.scale(i) * factors[k];
            let du = prefix[k] * d_factor * suffix[k + 1];
            let a = (u_dag * du).scale(minus_i);
            coset_gens
                .iter()
                .map(|t| 0.5 * trace_product(&a, t).re)
                .collect()
        })
        .collect()
}

pub(crate) fn coset_generator_indices(n: usize) -> &'static [usize] {
    if n == 2 {
        &[1, 2]
    } else {
        &[1, 2, 4, 5, 6, 7]
    }
}

pub(crate) fn coefficient_det(rows: &[Vec<f64>]) -> f64 {
    match rows.len() {
        2 => real_det([[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]]),
        _ => {
            let mut a = [[0.0; 6]; 6];
            for (dst, src) in a.iter_mut().zip(rows) {
                dst.copy_from_slice(&src[..6]);
            }
            real_det(a)
        }
    }
}

/// Truncated Haar density on `G/H`: `|det c|` of the Maurer–Cartan
/// coefficients.
pub fn haar_coset_density(coset: &CosetAngles) -> f64 {
    coefficient_det(&maurer_cartan_coefficients(coset)).abs()
}

/// Unnormalized Bures density: eigen factor times Haar coset density.
pub fn bures_raw_density(p: &DensityMatrixParams) -> f64 {
    eigen_factor(&p.eigen) * haar_coset_density(&p.coset)
}

pub fn bures_joint_density(p: &DensityMatrixParams, mode: NormalizationMode) -> MeasureValue {
    let raw = bures_raw_density(p);
    let value = match mode {
        NormalizationMode::Raw => raw,
        NormalizationMode::Normalized => raw / normalization_constant(p.n()),
    };
    MeasureValue {
        value,
        mode,
        n: p.n(),
    }
}

/// Gauss–Legendre points per axis for the cached constants.
pub const NORMALIZATION_EIGEN_POINTS: usize = 64;
pub const NORMALIZATION_COSET_POINTS_2: usize = 64;
pub const NORMALIZATION_COSET_POINTS_3: usize = 12;

static NORMALIZATION: [OnceLock<f64>; 2] = [OnceLock::new(), OnceLock::new()];
static COSET_VOLUME: [OnceLock<f64>; 2] = [OnceLock::new(), OnceLock::new()];

fn cache_slot(n: usize) -> usize {
    assert!(n == 2 || n == 3, "n must be 2 or 3, got {n}");
    n - 2
}

/// Integral of the coset density over the coset box, cached.
pub fn coset_volume(n: usize) -> f64 {
    *COSET_VOLUME[cache_slot(n)].get_or_init(|| {
        let points = if n == 2 {
            NORMALIZATION_COSET_POINTS_2
        } else {
            NORMALIZATION_COSET_POINTS_3
        };
        integrate::coset_integral(n, &QuadratureSpec::new(points, Rule::GaussLegendre))
            .expect("valid spec")
    })
}

/// Integral of the RAW Bures density over the angle box, cached after the
/// first call.
///
/// Panics unless `n` is 2 or 3.
pub fn normalization_constant(n: usize) -> f64 {
    *NORMALIZATION[cache_slot(n)].get_or_init(|| {
        let eigen = integrate::eigen_integral(
            n,
            &QuadratureSpec::new(NORMALIZATION_EIGEN_POINTS, Rule::GaussLegendre),
            |_| 1.0,
        )
        .expect("valid spec");
        eigen * coset_volume(n)
    })
}
