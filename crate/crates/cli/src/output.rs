//! Output records and their serialization.
//!
//! Every float is written in scientific notation with 17 significant
//! digits, so parsing a record and writing it again reproduces the same
//! bytes. Non-finite values are written as `null`.

use std::io::{self, Write};

use bures_core::{ComplexSquareMatrix, DensityMatrixParams};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// JSON formatter printing `f64` as `{:.16e}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_f64(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serialize with [`Sig17`], no trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Parse and re-serialize.
pub fn reserialize(json: &str) -> serde_json::Result<String> {
    let v: Value = serde_json::from_str(json)?;
    to_json_string(&v)
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub n: usize,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<Map<String, Value>>,
    pub payload: Payload,
}

impl OutputRecord {
    pub fn new(n: usize, command: &'static str, payload: Payload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n,
            command,
            params: None,
            payload,
        }
    }

    pub fn with_params(mut self, p: &DensityMatrixParams) -> Self {
        self.params = Some(params_object(p));
        self
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Matrix {
        mode: String,
        matrix: Vec<[f64; 2]>,
        eigenvalues: Vec<f64>,
        density: f64,
    },
    Samples {
        seed: u64,
        count: u64,
        samples: Vec<SampleEntry>,
    },
    Scalar {
        quantity: String,
        method: String,
        value: f64,
        error: f64,
        resolution: Resolution,
    },
    Report {
        suite: String,
        passed: bool,
        checks: Vec<CheckEntry>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleEntry {
    pub params: Map<String, Value>,
    pub matrix: Vec<[f64; 2]>,
}

impl SampleEntry {
    pub fn new(p: &DensityMatrixParams, rho: &ComplexSquareMatrix) -> Self {
        Self {
            params: params_object(p),
            matrix: matrix_pairs(rho),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Resolution {
    Quadrature {
        rule: String,
        points_per_axis: usize,
        coarse_points_per_axis: usize,
    },
    MonteCarlo {
        samples: u64,
        seed: u64,
        acceptance_rate: f64,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
    pub seconds: f64,
}

/// Row-major `[re, im]` pairs.
pub fn matrix_pairs(rho: &ComplexSquareMatrix) -> Vec<[f64; 2]> {
    rho.to_row_major().iter().map(|z| [z.re, z.im]).collect()
}

/// Coordinates keyed by name, in canonical order.
pub fn params_object(p: &DensityMatrixParams) -> Map<String, Value> {
    let names = bures_core::coordinate_names(p.n()).expect("params carry a supported n");
    names
        .into_iter()
        .zip(p.coordinates())
        .map(|(k, v)| (k.to_string(), Value::from(v)))
        .collect()
}

/// CSV header: angle names, then `rho_i_j_re`, `rho_i_j_im` row-major.
pub fn csv_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = bures_core::coordinate_names(n)
        .expect("supported n")
        .into_iter()
        .map(String::from)
        .collect();
    for i in 0..n {
        for j in 0..n {
            h.push(format!("rho_{i}_{j}_re"));
            h.push(format!("rho_{i}_{j}_im"));
        }
    }
    h
}

pub fn csv_row(p: &DensityMatrixParams, rho: &ComplexSquareMatrix) -> Vec<String> {
    p.coordinates()
        .into_iter()
        .chain(matrix_pairs(rho).into_iter().flatten())
        .map(format_f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(format_f64(-0.0), "-0.0000000000000000e0");
        for x in [
            std::f64::consts::PI,
            1e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(
            to_json_string(&[f64::NAN, f64::INFINITY]).unwrap(),
            "[null,null]"
        );
    }

    #[test]
    fn record_round_trip() {
        let p = DensityMatrixParams::from_coordinates(2, &[0.3, 1.1, 0.2]).unwrap();
        let rho = bures_core::density_from_params(&p);
        let rec = OutputRecord::new(
            2,
            "density",
            Payload::Matrix {
                mode: "raw".into(),
                matrix: matrix_pairs(&rho),
                eigenvalues: vec![0.9, 0.1],
                density: 1.0 / 3.0,
            },
        )
        .with_params(&p);
        let s = to_json_string(&rec).unwrap();
        assert_eq!(reserialize(&s).unwrap(), s);
        assert!(
            s.starts_with(r#"{"schema_version":"1","n":2,"command":"density","params":{"theta""#)
        );
    }

    #[test]
    fn header_width() {
        assert_eq!(csv_header(2).len(), 3 + 8);
        assert_eq!(csv_header(3).len(), 8 + 18);
        assert_eq!(csv_header(3)[8], "rho_0_0_re");
    }
}
