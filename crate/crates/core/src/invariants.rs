//! Executable invariant suite, shared by the `check` command and tests.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::euler::{
    coset_unitary, density_from_params, diag_eigenvalues, euler_unitary, params_from_density_2,
    CosetAngles, DensityMatrixParams, INVERSE_TOL,
};
use crate::functionals::FunctionalId;
use crate::generators::GeneratorSet;
use crate::integrate::{self, QuadratureSpec};
use crate::linalg::{eig_hermitian, expm_i_generator, ComplexSquareMatrix, C64};
use crate::measure::{
    bures_joint_density, haar_coset_density, normalization_constant, NormalizationMode,
};
use crate::quadrature::{rule_on_interval, Rule};
use crate::sample::{
    estimate_coset_envelope, estimate_envelope, sample, uniform_params, CosetSampler, SamplerSpec,
};
use crate::stats::{ks_critical_1pct, ks_statistic};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

/// One measured invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seconds: f64,
}

impl CheckResult {
    fn new(name: &'static str, deviation: f64, tolerance: f64, start: Instant) -> Self {
        Self {
            name,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
            seconds: start.elapsed().as_secs_f64(),
        }
    }
}

/// Generator tables under test; swapped out by fault-injection fixtures.
#[derive(Clone, Debug)]
pub struct CheckContext {
    pub pauli: GeneratorSet,
    pub gell_mann: GeneratorSet,
}

impl CheckContext {
    pub fn standard() -> Result<Self> {
        Ok(Self {
            pauli: GeneratorSet::for_dim(2)?,
            gell_mann: GeneratorSet::for_dim(3)?,
        })
    }

    /// Perturbs one entry of λ_k (1-based).
    pub fn corrupt_gell_mann(&mut self, k: usize) -> Result<()> {
        let g = self.gell_mann.get_mut(k)?;
        // Keep it Hermitian and traceless so only orthogonality breaks.
        g[(0, 1)] += C64::new(1e-3, 0.0);
        g[(1, 0)] += C64::new(1e-3, 0.0);
        Ok(())
    }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x6275_7265_735f_6368 ^ tag)
}

fn max_over<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

pub fn generator_orthogonality(ctx: &CheckContext) -> CheckResult {
    let t = Instant::now();
    let dev = ctx
        .pauli
        .orthogonality_deviation()
        .max(ctx.gell_mann.orthogonality_deviation());
    CheckResult::new("generator-orthogonality", dev, 1e-14, t)
}

pub fn generator_hermiticity(ctx: &CheckContext) -> CheckResult {
    let t = Instant::now();
    let dev = ctx
        .pauli
        .hermiticity_deviation()
        .max(ctx.gell_mann.hermiticity_deviation())
        .max(ctx.pauli.trace_deviation())
        .max(ctx.gell_mann.trace_deviation());
    CheckResult::new("generator-hermitian-traceless", dev, 1e-15, t)
}

pub fn cartan_commutation(ctx: &CheckContext) -> CheckResult {
    let t = Instant::now();
    let dev = ctx
        .pauli
        .cartan_commutator_norm()
        .max(ctx.gell_mann.cartan_commutator_norm())
        .max(ctx.gell_mann.cartan_off_diagonal());
    CheckResult::new("cartan-commutation", dev, 1e-14, t)
}

pub fn expm_group_law() -> CheckResult {
    let t = Instant::now();
    let mut r = rng(1);
    let mut dev: f64 = 0.0;
    for n in [2, 3] {
        let set = GeneratorSet::for_dim(n).expect("n");
        let id = ComplexSquareMatrix::identity(n).expect("n");
        for (_, g) in set.iter() {
            let (s, u) = (r.gen_range(-PI..PI), r.gen_range(-PI..PI));
            let a = expm_i_generator(g, s).expect("hermitian");
            let b = expm_i_generator(g, u).expect("hermitian");
            let ab = expm_i_generator(g, s + u).expect("hermitian");
            dev = dev
                .max((a * a.dagger()).distance(&id))
                .max((a * b).distance(&ab))
                .max((a.det() - C64::new(1.0, 0.0)).norm());
        }
    }
    CheckResult::new("expm-unitary-group-law", dev, 1e-13, t)
}

pub fn special_unitarity(points: usize) -> CheckResult {
    let t = Instant::now();
    let mut r = rng(2);
    let mut dev: f64 = 0.0;
    for _ in 0..points {
        let a2: Vec<f64> = (0..3).map(|_| r.gen_range(0.0..2.0 * PI)).collect();
        let a3: Vec<f64> = (0..8).map(|_| r.gen_range(0.0..2.0 * PI)).collect();
        for (n, a) in [(2, a2), (3, a3)] {
            let u = euler_unitary(n, &a).expect("angle count");
            let id = ComplexSquareMatrix::identity(n).expect("n");
            dev = dev
                .max((u.det() - C64::new(1.0, 0.0)).norm())
                .max((u * u.dagger()).distance(&id));
        }
    }
    CheckResult::new("euler-special-unitary", dev, 1e-13, t)
}

/// Hermiticity, trace, positivity and spectrum of `ρ′` at random points.
pub fn density_validity(points: usize) -> Vec<CheckResult> {
    let t = Instant::now();
    let mut r = rng(3);
    let (mut herm, mut tr, mut neg, mut spec): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for n in [2, 3] {
        for _ in 0..points {
            let p = uniform_params(n, &mut r).expect("n");
            let rho = density_from_params(&p);
            herm = herm.max(rho.hermiticity_deviation());
            tr = tr.max((rho.trace() - C64::new(1.0, 0.0)).norm());
            let eig = eig_hermitian(&rho).expect("hermitian");
            neg = neg.max(-eig.eigenvalues()[n - 1]);
            let mut expected = diag_eigenvalues(&p.eigen);
            expected.sort_by(|a, b| b.total_cmp(a));
            spec = spec.max(max_over(
                eig.eigenvalues()
                    .iter()
                    .zip(&expected)
                    .map(|(a, b)| (a - b).abs()),
            ));
        }
    }
    vec![
        CheckResult::new("density-hermitian", herm, 1e-13, t),
        CheckResult::new("density-unit-trace", tr, 1e-13, t),
        CheckResult::new("density-psd", neg, 1e-12, t),
        CheckResult::new("density-spectrum", spec, 1e-12, t),
    ]
}

/// `ρ′` built from the full Euler product does not depend on the dropped
/// angles (γ for n = 2; c, φ for n = 3).
pub fn dropped_angle_invariance(base_points: usize, grid: usize) -> CheckResult {
    let t = Instant::now();
    let mut r = rng(4);
    let mut dev: f64 = 0.0;
    let grid_value = |i: usize, upper: f64| upper * i as f64 / (grid - 1) as f64;
    for n in [2usize, 3] {
        let dropped: &[usize] = if n == 2 { &[2] } else { &[6, 7] };
        for _ in 0..base_points {
            let p = uniform_params(n, &mut r).expect("n");
            let d =
                ComplexSquareMatrix::from_real_diagonal(&diag_eigenvalues(&p.eigen)).expect("n");
            let mut full = p.coset.angles().to_vec();
            full.resize(if n == 2 { 3 } else { 8 }, 0.0);
            let reference = density_from_params(&p);
            for &slot in dropped {
                for i in 0..grid {
                    let mut angles = full.clone();
                    angles[slot] = grid_value(i, 2.0 * PI);
                    let u = euler_unitary(n, &angles).expect("count");
                    dev = dev.max((u * d * u.dagger()).distance(&reference));
                }
            }
        }
    }
    CheckResult::new("dropped-angle-invariance", dev, 1e-13, t)
}

pub fn haar_qubit_closed_form(grid: usize) -> CheckResult {
    let t = Instant::now();
    let mut dev: f64 = 0.0;
    for i in 0..grid {
        for j in 0..grid {
            let alpha = PI * i as f64 / (grid - 1) as f64;
            let beta = FRAC_PI_2 * j as f64 / (grid - 1) as f64;
            let d = haar_coset_density(&CosetAngles::new(2, &[alpha, beta]).expect("range"));
            dev = dev.max((d - (2.0 * beta).sin()).abs());
        }
    }
    CheckResult::new("haar-qubit-sin2beta", dev, 1e-10, t)
}

pub fn haar_alpha_independence(base_points: usize) -> CheckResult {
    let t = Instant::now();
    let mut r = rng(5);
    let mut dev: f64 = 0.0;
    for n in [2, 3] {
        for _ in 0..base_points {
            let p = uniform_params(n, &mut r).expect("n");
            let reference = haar_coset_density(&p.coset);
            for i in 0..20 {
                let mut x = p.coset.angles().to_vec();
                x[0] = PI * i as f64 / 19.0;
                let d = haar_coset_density(&CosetAngles::new(n, &x).expect("range"));
                dev = dev.max((d - reference).abs());
            }
        }
    }
    CheckResult::new("haar-alpha-independence", dev, 1e-10, t)
}

pub fn bures_qubit_closed_form(points: usize) -> CheckResult {
    let t = Instant::now();
    let mut r = rng(6);
    let mut dev: f64 = 0.0;
    for _ in 0..points {
        let p = uniform_params(2, &mut r).expect("n");
        let c = p.coordinates();
        let expected = 8.0 * (2.0 * c[0]).cos().powi(2) * (2.0 * c[2]).sin();
        let v = bures_joint_density(&p, NormalizationMode::Raw).value;
        dev = dev.max((v - expected).abs());
    }
    CheckResult::new("bures-qubit-closed-form", dev, 1e-10, t)
}

pub fn qubit_normalization() -> CheckResult {
    let t = Instant::now();
    let a = integrate::raw_volume(2, &QuadratureSpec::gauss_legendre(64)).expect("spec");
    let b = integrate::raw_volume(2, &QuadratureSpec::gauss_legendre(32)).expect("spec");
    let dev = (a - PI * PI)
        .abs()
        .max((a - b).abs())
        .max((normalization_constant(2) - a).abs());
    CheckResult::new("normalization-qubit-pi-squared", dev, 1e-6, t)
}

pub fn inverse_round_trip(points: usize) -> Vec<CheckResult> {
    let t = Instant::now();
    let mut r = rng(7);
    let mut err: f64 = 0.0;
    let mut flag_mismatch = 0.0;
    for i in 0..points {
        let mut p = uniform_params(2, &mut r).expect("n");
        // Every tenth point sits on or near the degenerate shell.
        if i % 10 == 0 {
            let c = p.coordinates();
            let theta = FRAC_PI_4 - [0.0, 1e-13, 1e-11, 1e-9, 1e-6][i / 10 % 5];
            p = DensityMatrixParams::from_coordinates(2, &[theta, c[1], c[2]]).expect("range");
        }
        let rho = density_from_params(&p);
        let inv = params_from_density_2(&rho).expect("valid density");
        err = err.max(density_from_params(&inv.params).distance(&rho));
        let eig = eig_hermitian(&rho).expect("hermitian");
        let degenerate = (eig.eigenvalues()[0] - eig.eigenvalues()[1]).abs() <= INVERSE_TOL;
        if degenerate != inv.degenerate {
            flag_mismatch += 1.0;
        }
    }
    vec![
        CheckResult::new("inverse-round-trip", err, 1e-10, t),
        CheckResult::new("inverse-degenerate-flag", flag_mismatch, 0.0, t),
    ]
}

pub fn sampler_determinism(count: u64) -> CheckResult {
    let t = Instant::now();
    let mut mismatches = 0.0;
    for n in [2, 3] {
        let grid = if n == 2 { 16 } else { 8 };
        let spec = SamplerSpec::new(7, estimate_envelope(n, grid).expect("grid"));
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool")
                .install(|| sample(n, count, &spec))
        };
        let (a, b) = (run(1), run(4));
        let bits = |v: &Result<Vec<DensityMatrixParams>>| -> Vec<u64> {
            v.as_ref()
                .expect("sampling")
                .iter()
                .flat_map(|p| p.coordinates())
                .map(f64::to_bits)
                .collect()
        };
        if bits(&a) != bits(&b) {
            mismatches += 1.0;
        }
    }
    CheckResult::new("sampler-determinism", mismatches, 0.0, t)
}

/// Haar pushforward of the first column of the coset unitary: `|U₁₁|²` is
/// uniform for n = 2, `(|U₁₁|², |U₂₁|², |U₃₁|²)` is Dirichlet(1,1,1) for
/// n = 3. Reports the worst KS statistic divided by its 1% critical value.
pub fn pushforward_column(count: u64) -> CheckResult {
    let t = Instant::now();
    let crit = ks_critical_1pct(count as usize);
    let column = |n: usize, seed: u64| -> Vec<Vec<f64>> {
        let spec = SamplerSpec::new(seed, estimate_coset_envelope(n, 16).expect("grid"));
        let sampler = CosetSampler::coset(n, spec).expect("sampler");
        sampler
            .angles(count)
            .map(|c| {
                let u = coset_unitary(&c.expect("draw"));
                (0..n).map(|i| u[(i, 0)].norm_sqr()).collect()
            })
            .collect()
    };
    let qubit = column(2, 21);
    let u11: Vec<f64> = qubit.iter().map(|c| c[0]).collect();
    let mut worst = ks_statistic(&u11, |x| x.clamp(0.0, 1.0));

    let qutrit = column(3, 22);
    let beta12 = |x: f64| 1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(2);
    for i in 0..3 {
        let xs: Vec<f64> = qutrit.iter().map(|c| c[i]).collect();
        worst = worst.max(ks_statistic(&xs, beta12));
    }
    // Given x₁, x₂/(1 − x₁) is uniform.
    let ratio: Vec<f64> = qutrit
        .iter()
        .filter(|c| c[0] < 1.0)
        .map(|c| c[1] / (1.0 - c[0]))
        .collect();
    worst = worst.max(ks_statistic(&ratio, |x| x.clamp(0.0, 1.0)));
    CheckResult::new("haar-pushforward-column-ks", worst / crit, 1.0, t)
}

/// KS test of the sampled θ marginal against `(4θ + sin 4θ)/π`.
pub fn theta_marginal(count: u64) -> CheckResult {
    let t = Instant::now();
    let spec = SamplerSpec::new(23, estimate_envelope(2, 32).expect("grid"));
    let thetas: Vec<f64> = sample(2, count, &spec)
        .expect("sampling")
        .iter()
        .map(|p| p.eigen.angles()[0])
        .collect();
    let d = ks_statistic(&thetas, |x| (4.0 * x + (4.0 * x).sin()) / PI);
    CheckResult::new(
        "qubit-theta-marginal-ks",
        d / ks_critical_1pct(count as usize),
        1.0,
        t,
    )
}

pub fn qutrit_normalization_resolutions() -> CheckResult {
    let t = Instant::now();
    let a = integrate::raw_volume(3, &QuadratureSpec::gauss_legendre(10)).expect("spec");
    let b = integrate::raw_volume(3, &QuadratureSpec::gauss_legendre(12)).expect("spec");
    CheckResult::new(
        "normalization-qutrit-resolutions",
        (a - b).abs() / b,
        1e-4,
        t,
    )
}

pub fn qubit_purity_reference() -> CheckResult {
    let t = Instant::now();
    let axis = rule_on_interval(Rule::GaussLegendre, 400, 0.0, FRAC_PI_4).expect("rule");
    let reference = axis
        .integrate(|x| (x.cos().powi(4) + x.sin().powi(4)) * 8.0 * (2.0 * x).cos().powi(2) / PI);
    let q =
        integrate::integrate(2, FunctionalId::Purity, &QuadratureSpec::default()).expect("spec");
    CheckResult::new(
        "integrate-purity-1d-reference",
        (q.value - reference).abs(),
        1e-6,
        t,
    )
}

pub fn run_suite(suite: Suite, ctx: &CheckContext) -> Vec<CheckResult> {
    let mut out = vec![
        generator_orthogonality(ctx),
        generator_hermiticity(ctx),
        cartan_commutation(ctx),
        expm_group_law(),
        special_unitarity(200),
    ];
    out.extend(density_validity(1000));
    out.push(dropped_angle_invariance(20, 20));
    out.push(haar_qubit_closed_form(50));
    out.push(haar_alpha_independence(10));
    out.push(bures_qubit_closed_form(100));
    out.push(qubit_normalization());
    out.extend(inverse_round_trip(1000));
    out.push(sampler_determinism(64));
    out.push(qubit_purity_reference());
    if suite == Suite::Full {
        out.push(pushforward_column(100_000));
        out.push(theta_marginal(100_000));
        out.push(qutrit_normalization_resolutions());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_generator_fails_orthogonality() {
        let mut ctx = CheckContext::standard().unwrap();
        assert!(generator_orthogonality(&ctx).passed);
        ctx.corrupt_gell_mann(5).unwrap();
        let r = generator_orthogonality(&ctx);
        assert!(!r.passed);
        assert_eq!(r.name, "generator-orthogonality");
        assert!(generator_hermiticity(&ctx).passed);
    }

    #[test]
    fn cheap_checks_pass() {
        let ctx = CheckContext::standard().unwrap();
        for r in [
            generator_orthogonality(&ctx),
            generator_hermiticity(&ctx),
            cartan_commutation(&ctx),
            expm_group_law(),
            special_unitarity(20),
            dropped_angle_invariance(3, 5),
            haar_qubit_closed_form(10),
            bures_qubit_closed_form(10),
        ] {
            assert!(r.passed, "{r:?}");
        }
        for r in density_validity(50)
            .into_iter()
            .chain(inverse_round_trip(100))
        {
            assert!(r.passed, "{r:?}");
        }
    }
}
