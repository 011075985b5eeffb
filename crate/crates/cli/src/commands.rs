//! Command implementations. Each returns what it printed so tests can
//! drive them without spawning the binary.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use bures_core::invariants::{run_suite, CheckContext, Suite};
use bures_core::sample::BuresSampler;
use bures_core::{
    bures_joint_density, coordinate_names, density_from_params, eig_hermitian, integrate,
    monte_carlo, BuresError, DensityMatrixParams, FunctionalId, NormalizationMode, QuadratureSpec,
    Rule, SamplerSpec,
};

use crate::args::{
    CheckArgs, DensityArgs, Format, IntegrateArgs, Method, Mode, ReportFormat, RuleArg, SampleArgs,
    SuiteArg, VolumeArgs,
};
use crate::output::{
    csv_header, csv_row, format_f64, matrix_pairs, to_json_string, CheckEntry, OutputRecord,
    Payload, Resolution, SampleEntry,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters; exit code 2.
    Usage(String),
    /// Invariant or numerical failure; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<BuresError> for CliError {
    fn from(e: BuresError) -> Self {
        match e {
            BuresError::EnvelopeViolation { .. }
            | BuresError::NotHermitian { .. }
            | BuresError::NotDensityMatrix(_) => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("write failed: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(format!("serialization failed: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(format!("csv output failed: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parse `name=value` pairs into a complete coordinate vector.
pub fn parse_params(n: usize, pairs: &[String]) -> CliResult<DensityMatrixParams> {
    let names = coordinate_names(n)?;
    let mut given: HashMap<&str, f64> = HashMap::new();
    for pair in pairs {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter '{pair}' is not name=value")))?;
        let key = key.trim();
        let name =
            names.iter().copied().find(|&nm| nm == key).ok_or_else(|| {
                CliError::Usage(format!("unexpected parameter '{key}' for n = {n}"))
            })?;
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Usage(format!("parameter '{key}' has non-numeric value '{value}'"))
        })?;
        if given.insert(name, value).is_some() {
            return Err(CliError::Usage(format!("parameter '{key}' given twice")));
        }
    }
    let coords = names
        .iter()
        .map(|&nm| {
            given
                .get(nm)
                .copied()
                .ok_or_else(|| CliError::Usage(format!("missing parameter '{nm}'")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    Ok(DensityMatrixParams::from_coordinates(n, &coords)?)
}

fn emit<W: Write>(out: &mut W, record: &OutputRecord) -> CliResult<()> {
    writeln!(out, "{}", to_json_string(record)?)?;
    Ok(())
}

pub fn density<W: Write>(args: &DensityArgs, out: &mut W) -> CliResult<()> {
    let p = parse_params(args.n, &args.params)?;
    let rho = density_from_params(&p);
    let eig = eig_hermitian(&rho)?;
    let mode = match args.mode {
        Mode::Raw => NormalizationMode::Raw,
        Mode::Normalized => NormalizationMode::Normalized,
    };
    let payload = Payload::Matrix {
        mode: match args.mode {
            Mode::Raw => "raw",
            Mode::Normalized => "normalized",
        }
        .into(),
        matrix: matrix_pairs(&rho),
        eigenvalues: eig.eigenvalues().to_vec(),
        density: bures_joint_density(&p, mode).value,
    };
    emit(
        out,
        &OutputRecord::new(args.n, "density", payload).with_params(&p),
    )
}

pub fn sample<W: Write>(args: &SampleArgs, out: &mut W) -> CliResult<()> {
    let spec = SamplerSpec::for_bures(args.n, args.seed)?;
    let sampler = BuresSampler::bures(args.n, spec)?;
    match args.format {
        Format::Json => {
            let samples = sampler
                .params(args.count)
                .map(|p| {
                    let p = p?;
                    Ok(SampleEntry::new(&p, &density_from_params(&p)))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let payload = Payload::Samples {
                seed: args.seed,
                count: args.count,
                samples,
            };
            emit(out, &OutputRecord::new(args.n, "sample", payload))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(csv_header(args.n))?;
            for p in sampler.params(args.count) {
                let p = p?;
                w.write_record(csv_row(&p, &density_from_params(&p)))?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

pub fn integrate_cmd<W: Write>(args: &IntegrateArgs, out: &mut W) -> CliResult<()> {
    let f: FunctionalId = args.functional.parse()?;
    let payload = match args.method {
        Method::Quadrature => {
            let (rule, rule_name) = match args.rule {
                RuleArg::GaussLegendre => (Rule::GaussLegendre, "gauss-legendre"),
                RuleArg::Simpson => (Rule::CompositeSimpson, "simpson"),
            };
            let est = integrate(args.n, f, &QuadratureSpec::new(args.points, rule))?;
            Payload::Scalar {
                quantity: f.to_string(),
                method: "quadrature".into(),
                value: est.value,
                error: est.error,
                resolution: Resolution::Quadrature {
                    rule: rule_name.into(),
                    points_per_axis: est.points_per_axis,
                    coarse_points_per_axis: est.coarse_points_per_axis,
                },
            }
        }
        Method::Mc => {
            let spec = SamplerSpec::for_bures(args.n, args.seed)?;
            let est = monte_carlo(args.n, f, args.samples, &spec)?;
            Payload::Scalar {
                quantity: f.to_string(),
                method: "mc".into(),
                value: est.mean,
                error: est.std_error,
                resolution: Resolution::MonteCarlo {
                    samples: est.samples,
                    seed: args.seed,
                    acceptance_rate: est.acceptance_rate,
                },
            }
        }
    };
    emit(out, &OutputRecord::new(args.n, "integrate", payload))
}

/// Default volume resolution per dimension.
pub fn default_volume_points(n: usize) -> usize {
    if n == 2 {
        64
    } else {
        10
    }
}

pub fn volume<W: Write>(args: &VolumeArgs, out: &mut W) -> CliResult<()> {
    let points = args.points.unwrap_or_else(|| default_volume_points(args.n));
    let est = bures_core::integrate::volume(args.n, &QuadratureSpec::gauss_legendre(points))?;
    let payload = Payload::Scalar {
        quantity: "raw-normalization".into(),
        method: "quadrature".into(),
        value: est.value,
        error: est.error,
        resolution: Resolution::Quadrature {
            rule: "gauss-legendre".into(),
            points_per_axis: est.points_per_axis,
            coarse_points_per_axis: est.coarse_points_per_axis,
        },
    };
    emit(out, &OutputRecord::new(args.n, "volume", payload))
}

/// Runs the suite and prints the report; `Ok(false)` when an invariant
/// failed.
pub fn check<W: Write>(args: &CheckArgs, out: &mut W) -> CliResult<bool> {
    let mut ctx = CheckContext::standard()?;
    if let Some(k) = args.corrupt_generator {
        ctx.corrupt_gell_mann(k)?;
    }
    let (suite, suite_name) = match args.suite {
        SuiteArg::Fast => (Suite::Fast, "fast"),
        SuiteArg::Full => (Suite::Full, "full"),
    };
    let results = run_suite(suite, &ctx);
    let passed = results.iter().all(|r| r.passed);
    match args.format {
        ReportFormat::Text => {
            for r in &results {
                writeln!(
                    out,
                    "{:<4}  {:<36}  deviation {:>24}  tolerance {:>24}  {:>8.3}s",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    format_f64(r.deviation),
                    format_f64(r.tolerance),
                    r.seconds
                )?;
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            writeln!(out, "{} checks, {} failed", results.len(), failed)?;
        }
        ReportFormat::Json => {
            let checks = results
                .iter()
                .map(|r| CheckEntry {
                    name: r.name.to_string(),
                    passed: r.passed,
                    deviation: r.deviation,
                    tolerance: r.tolerance,
                    seconds: r.seconds,
                })
                .collect();
            let payload = Payload::Report {
                suite: suite_name.into(),
                passed,
                checks,
            };
            // Both dimensions are exercised; the record reports the larger.
            emit(out, &OutputRecord::new(3, "check", payload))?;
        }
    }
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn params_parse_in_any_order() {
        let p = parse_params(2, &strings(&["beta=0.5", "theta=0.1", "alpha=2"])).unwrap();
        assert_eq!(p.coordinates(), vec![0.1, 2.0, 0.5]);
    }

    #[test]
    fn params_errors_name_the_parameter() {
        let cases: [(&[&str], &str); 5] = [
            (&["theta=0.1", "alpha=0"], "beta"),
            (&["theta=0.1", "alpha=0", "beta=0", "gamma=0"], "gamma"),
            (&["theta=0.9", "alpha=0", "beta=0"], "theta"),
            (&["theta=x", "alpha=0", "beta=0"], "theta"),
            (&["theta=0.1", "theta=0.1", "alpha=0", "beta=0"], "theta"),
        ];
        for (pairs, name) in cases {
            let e = parse_params(2, &strings(pairs)).unwrap_err();
            assert_eq!(e.exit_code(), 2);
            assert!(e.to_string().contains(name), "{e}");
        }
    }
}
