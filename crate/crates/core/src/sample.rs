//! Rejection sampling from the normalized Bures density.
//!
//! Proposals are uniform on the angle box and are accepted with
//! probability `p(x)/M`, where `p` is the normalized density and `M` the
//! envelope constant. Draw `i` uses its own ChaCha stream keyed by
//! `(seed, i)`, so the output does not depend on how indices are spread
//! over worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{BuresError, Result};
use crate::euler::{
    density_from_params, AngleRange, CosetAngles, DensityMatrixParams, EigenvalueAngles,
};
use crate::functionals::FunctionalId;
use crate::linalg::eig_hermitian;
use crate::measure::{
    bures_raw_density, coset_volume, eigen_factor, haar_coset_density, normalization_constant,
    AngleBox,
};
use crate::quadrature::NeumaierSum;

/// Multiplier applied to the grid maximum.
pub const ENVELOPE_SAFETY: f64 = 1.5;

pub const DEFAULT_BATCH_SIZE: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerSpec {
    pub seed: u64,
    /// Upper bound `M` on the normalized density.
    pub envelope_constant: f64,
    pub batch_size: usize,
}

impl SamplerSpec {
    pub fn new(seed: u64, envelope_constant: f64) -> Self {
        Self {
            seed,
            envelope_constant,
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }

    /// Spec for the Bures target with the envelope estimated on
    /// [`default_envelope_grid`] points per axis.
    pub fn for_bures(n: usize, seed: u64) -> Result<Self> {
        Ok(Self::new(
            seed,
            estimate_envelope(n, default_envelope_grid(n)?)?,
        ))
    }

    fn validate(&self) -> Result<()> {
        if !(self.envelope_constant.is_finite() && self.envelope_constant > 0.0) {
            return Err(BuresError::InvalidSpec(format!(
                "envelope constant must be positive, got {}",
                self.envelope_constant
            )));
        }
        if self.batch_size == 0 {
            return Err(BuresError::InvalidSpec(
                "batch size must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A normalized density on a box.
pub trait Target: Sync {
    fn ranges(&self) -> &[AngleRange];
    fn density(&self, x: &[f64]) -> f64;
}

/// Normalized Bures density on the full angle box.
#[derive(Clone, Debug)]
pub struct BuresTarget {
    n: usize,
    angle_box: AngleBox,
    z: f64,
}

impl BuresTarget {
    pub fn new(n: usize) -> Result<Self> {
        let angle_box = AngleBox::full(n)?;
        Ok(Self {
            n,
            angle_box,
            z: normalization_constant(n),
        })
    }
}

impl Target for BuresTarget {
    fn ranges(&self) -> &[AngleRange] {
        self.angle_box.ranges()
    }

    fn density(&self, x: &[f64]) -> f64 {
        let p = DensityMatrixParams::from_coordinates(self.n, x).expect("point inside box");
        bures_raw_density(&p) / self.z
    }
}

/// Normalized truncated Haar density on the coset box.
#[derive(Clone, Debug)]
pub struct CosetTarget {
    n: usize,
    angle_box: AngleBox,
    z: f64,
}

impl CosetTarget {
    pub fn new(n: usize) -> Result<Self> {
        let angle_box = AngleBox::coset(n)?;
        Ok(Self {
            n,
            angle_box,
            z: coset_volume(n),
        })
    }
}

impl Target for CosetTarget {
    fn ranges(&self) -> &[AngleRange] {
        self.angle_box.ranges()
    }

    fn density(&self, x: &[f64]) -> f64 {
        haar_coset_density(&CosetAngles::new(self.n, x).expect("point inside box")) / self.z
    }
}

/// Maximum of `f` over the uniform grid with `points` nodes per axis,
/// endpoints included.
fn grid_max<F>(ranges: &[AngleRange], points: usize, f: F) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let d = ranges.len();
    let total = points.pow(d as u32);
    (0..total)
        .into_par_iter()
        .map_init(
            || vec![0.0; d],
            |x, index| {
                let mut rem = index;
                for (k, r) in ranges.iter().enumerate().rev() {
                    let i = rem % points;
                    rem /= points;
                    x[k] = r.lower + r.width() * i as f64 / (points - 1) as f64;
                }
                f(x)
            },
        )
        .reduce(|| 0.0, f64::max)
}

/// Envelope grid resolution: 32 per axis for n = 2, 8 per axis over the
/// six coset angles for n = 3.
pub fn default_envelope_grid(n: usize) -> Result<usize> {
    match n {
        2 => Ok(32),
        3 => Ok(8),
        _ => Err(BuresError::UnsupportedDimension(n)),
    }
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < 8 {
        return Err(BuresError::InvalidSpec(format!(
            "envelope grid needs at least 8 points per axis, got {grid_points}"
        )));
    }
    Ok(())
}

fn eigen_grid_max(n: usize, grid_points: usize) -> Result<f64> {
    Ok(grid_max(AngleBox::eigen(n)?.ranges(), grid_points, |x| {
        eigen_factor(&EigenvalueAngles::new(n, x).expect("grid inside box"))
    }))
}

/// The Haar density does not depend on the leftmost angle, which is
/// pinned to its lower bound.
fn coset_grid_max(n: usize, grid_points: usize) -> Result<f64> {
    let coset = AngleBox::coset(n)?;
    let (alpha, rest) = coset.ranges().split_first().expect("coset box has angles");
    Ok(grid_max(rest, grid_points, |x| {
        let mut angles = [0.0; 6];
        angles[0] = alpha.lower;
        angles[1..=x.len()].copy_from_slice(x);
        haar_coset_density(&CosetAngles::new(n, &angles[..=x.len()]).expect("grid inside box"))
    }))
}

/// Grid maximum of the normalized Bures density times [`ENVELOPE_SAFETY`].
///
/// The density is a product of an eigen-angle factor and a coset factor,
/// so the maximum over the product grid is the product of the two grid
/// maxima.
pub fn estimate_envelope(n: usize, grid_points: usize) -> Result<f64> {
    check_grid(grid_points)?;
    let max = eigen_grid_max(n, grid_points)? * coset_grid_max(n, grid_points)?;
    Ok(ENVELOPE_SAFETY * max / normalization_constant(n))
}

/// Envelope for the normalized coset density alone.
pub fn estimate_coset_envelope(n: usize, grid_points: usize) -> Result<f64> {
    check_grid(grid_points)?;
    Ok(ENVELOPE_SAFETY * coset_grid_max(n, grid_points)? / coset_volume(n))
}

/// One accepted point and the number of proposals it took.
#[derive(Clone, Debug, PartialEq)]
pub struct Draw {
    pub point: Vec<f64>,
    pub proposals: u64,
}

fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug)]
pub struct RejectionSampler<T> {
    target: T,
    spec: SamplerSpec,
}

impl<T: Target> RejectionSampler<T> {
    pub fn new(target: T, spec: SamplerSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { target, spec })
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    pub fn spec(&self) -> &SamplerSpec {
        &self.spec
    }

    /// Draw number `index`; depends only on `(seed, index)`.
    pub fn draw(&self, index: u64) -> Result<Draw> {
        let mut rng = stream_rng(self.spec.seed, index);
        let ranges = self.target.ranges();
        let envelope = self.spec.envelope_constant;
        let mut point = vec![0.0; ranges.len()];
        let mut proposals = 0u64;
        loop {
            proposals += 1;
            for (x, r) in point.iter_mut().zip(ranges) {
                *x = r.lower + r.width() * rng.gen::<f64>();
            }
            let density = self.target.density(&point);
            if density > envelope {
                return Err(BuresError::EnvelopeViolation { density, envelope });
            }
            if rng.gen::<f64>() * envelope < density {
                return Ok(Draw { point, proposals });
            }
        }
    }

    /// Draws `0..count` in order, computing each batch in parallel.
    pub fn stream(&self, count: u64) -> DrawStream<'_, T> {
        DrawStream {
            sampler: self,
            next: 0,
            count,
            buffer: Vec::new().into_iter(),
        }
    }

    pub fn collect(&self, count: u64) -> Result<Vec<Draw>> {
        self.stream(count).collect()
    }
}

pub struct DrawStream<'a, T> {
    sampler: &'a RejectionSampler<T>,
    next: u64,
    count: u64,
    buffer: std::vec::IntoIter<Result<Draw>>,
}

impl<T: Target> Iterator for DrawStream<'_, T> {
    type Item = Result<Draw>;

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(d) = self.buffer.next() {
            return Some(d);
        }
        if self.next >= self.count {
            return None;
        }
        let end = (self.next + self.sampler.spec.batch_size as u64).min(self.count);
        let batch: Vec<Result<Draw>> = (self.next..end)
            .into_par_iter()
            .map(|i| self.sampler.draw(i))
            .collect();
        self.next = end;
        self.buffer = batch.into_iter();
        self.buffer.next()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.buffer.len() + (self.count - self.next) as usize;
        (left, Some(left))
    }
}

pub type BuresSampler = RejectionSampler<BuresTarget>;
pub type CosetSampler = RejectionSampler<CosetTarget>;

impl BuresSampler {
    pub fn bures(n: usize, spec: SamplerSpec) -> Result<Self> {
        Self::new(BuresTarget::new(n)?, spec)
    }

    pub fn n(&self) -> usize {
        self.target.n
    }

    /// Stream of sampled coordinates.
    pub fn params(&self, count: u64) -> impl Iterator<Item = Result<DensityMatrixParams>> + '_ {
        let n = self.target.n;
        self.stream(count)
            .map(move |d| d.and_then(|d| DensityMatrixParams::from_coordinates(n, &d.point)))
    }
}

impl CosetSampler {
    pub fn coset(n: usize, spec: SamplerSpec) -> Result<Self> {
        Self::new(CosetTarget::new(n)?, spec)
    }

    pub fn angles(&self, count: u64) -> impl Iterator<Item = Result<CosetAngles>> + '_ {
        let n = self.target.n;
        self.stream(count)
            .map(move |d| d.and_then(|d| CosetAngles::new(n, &d.point)))
    }
}

/// A point drawn uniformly from the full angle box.
pub fn uniform_params<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrixParams> {
    let coords: Vec<f64> = AngleBox::full(n)?
        .ranges()
        .iter()
        .map(|r| r.lower + r.width() * rng.gen::<f64>())
        .collect();
    DensityMatrixParams::from_coordinates(n, &coords)
}

/// `count` i.i.d. draws from the normalized Bures density.
pub fn sample(n: usize, count: u64, spec: &SamplerSpec) -> Result<Vec<DensityMatrixParams>> {
    BuresSampler::bures(n, *spec)?.params(count).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub acceptance_rate: f64,
}

/// Monte Carlo mean of `f(ρ′)` over `count` Bures draws.
pub fn monte_carlo(
    n: usize,
    f: FunctionalId,
    count: u64,
    spec: &SamplerSpec,
) -> Result<McEstimate> {
    if count < 2 {
        return Err(BuresError::InvalidSpec(format!(
            "Monte Carlo needs at least 2 samples, got {count}"
        )));
    }
    let sampler = BuresSampler::bures(n, *spec)?;
    let mut sum = NeumaierSum::default();
    let mut sum_sq = NeumaierSum::default();
    let mut proposals = 0u64;
    for draw in sampler.stream(count) {
        let draw = draw?;
        proposals += draw.proposals;
        let p = DensityMatrixParams::from_coordinates(n, &draw.point)?;
        let eig = eig_hermitian(&density_from_params(&p))?;
        let l: Vec<f64> = eig.eigenvalues().iter().map(|&x| x.max(0.0)).collect();
        let v = f.of_spectrum(&l);
        sum.add(v);
        sum_sq.add(v * v);
    }
    let m = count as f64;
    let mean = sum.value() / m;
    let var = ((sum_sq.value() - m * mean * mean) / (m - 1.0)).max(0.0);
    Ok(McEstimate {
        mean,
        std_error: (var / m).sqrt(),
        samples: count,
        acceptance_rate: m / proposals as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn qubit_envelope_near_analytic_supremum() {
        // sup of 8 cos²2θ sin 2β / π² is 8/π², at θ = 0, β = π/4.
        let sup = 8.0 / (PI * PI);
        for g in [16, 17, 33] {
            let m = estimate_envelope(2, g).unwrap() / ENVELOPE_SAFETY;
            assert!(m <= sup * (1.0 + 1e-12));
            assert!(m >= 0.98 * sup, "g={g}: {m} vs {sup}");
        }
        let a = estimate_envelope(2, 16).unwrap();
        let b = estimate_envelope(2, 32).unwrap();
        assert!((a - b).abs() / b < 0.05);
        assert!(estimate_envelope(2, 7).is_err());
    }

    #[test]
    fn same_seed_same_stream() {
        let spec = SamplerSpec::new(7, estimate_envelope(2, 16).unwrap());
        let a = sample(2, 50, &spec).unwrap();
        let b = sample(2, 50, &spec).unwrap();
        assert_eq!(a, b);
        let other = sample(2, 50, &SamplerSpec { seed: 8, ..spec }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn prefix_property_and_batch_independence() {
        let env = estimate_envelope(2, 16).unwrap();
        let a = sample(
            2,
            30,
            &SamplerSpec {
                batch_size: 7,
                ..SamplerSpec::new(3, env)
            },
        )
        .unwrap();
        let b = sample(2, 10, &SamplerSpec::new(3, env)).unwrap();
        assert_eq!(&a[..10], &b[..]);
    }

    #[test]
    fn envelope_violation_aborts() {
        let spec = SamplerSpec::new(1, 1e-3);
        let err = sample(2, 10, &spec).unwrap_err();
        assert!(matches!(err, BuresError::EnvelopeViolation { .. }));
    }

    #[test]
    fn invalid_specs() {
        assert!(sample(2, 1, &SamplerSpec::new(1, 0.0)).is_err());
        assert!(sample(
            2,
            1,
            &SamplerSpec {
                batch_size: 0,
                ..SamplerSpec::new(1, 1.0)
            }
        )
        .is_err());
        assert!(sample(2, 0, &SamplerSpec::new(1, 1.0)).unwrap().is_empty());
    }

    #[test]
    fn qubit_acceptance_rate_above_one_percent() {
        let spec = SamplerSpec::new(11, estimate_envelope(2, 32).unwrap());
        let mc = monte_carlo(2, FunctionalId::Purity, 2000, &spec).unwrap();
        assert!(mc.acceptance_rate > 0.01);
        assert!(mc.mean > 0.5 && mc.mean <= 1.0);
    }

    #[test]
    fn qutrit_samples_are_in_box() {
        let spec = SamplerSpec::new(5, estimate_envelope(3, 8).unwrap());
        let draws = sample(3, 20, &spec).unwrap();
        assert_eq!(draws.len(), 20);
        for p in draws {
            assert_eq!(p.coordinates().len(), 8);
        }
    }
}
