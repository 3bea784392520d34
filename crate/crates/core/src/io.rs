//! File formats.
//!
//! * filter JSON: `{ "offset": int, "coeffs": [[re, im], ...] }`
//! * wavelet system JSON: `{ "scaling": filter, "wavelet": filter,
//!   "provenance": { "phase": [re, im], "shift": int, "normalized_support": bool },
//!   "system_id": string }`
//! * decomposition JSON: `{ "levels": n, "approx": [[re, im], ...],
//!   "details": [[[re, im], ...], ...], "system_id": string }`, details coarsest first
//! * signal CSV `re,im`; Fourier samples CSV `xi,re,im`; sampled function CSV
//!   `x,re,im` with a sidecar `{ "support_start": int, "scale_log2": int }`
//!
//! Floats are written with 17 significant digits so output is reproducible
//! byte for byte.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cascade::SampledFunction;
use crate::filters::{FilterError, Provenance, ScalingFilter, WaveletSystem};
use crate::fourier::{FourierError, FourierSamples};
use crate::scalar::Scalar;
use crate::transform::{Decomposition, Signal};
use crate::trig::TrigPolynomial;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("format: {0}")]
    Format(String),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
}

pub type Pair = [f64; 2];

fn to_pair<T: Scalar>(c: &Complex<T>) -> Pair {
    [c.re.as_f64(), c.im.as_f64()]
}

fn from_pair<T: Scalar>(p: &Pair) -> Complex<T> {
    Complex::new(T::lit(p[0]), T::lit(p[1]))
}

/// Formats a float with 17 significant digits; non-finite values become `null`
/// in JSON and the literal text in CSV. Negative zero is written as zero.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        format!("{:.16e}", 0.0)
    } else if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_float(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with fixed 17-digit floats.
pub fn to_json_string<S: Serialize + ?Sized>(value: &S) -> Result<String, IoError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterFile {
    pub offset: i64,
    pub coeffs: Vec<Pair>,
}

impl FilterFile {
    pub fn from_taps<T: Scalar>(taps: &TrigPolynomial<T>) -> Self {
        Self {
            offset: taps.offset(),
            coeffs: taps.coeffs().iter().map(to_pair).collect(),
        }
    }

    pub fn to_taps<T: Scalar>(&self) -> TrigPolynomial<T> {
        TrigPolynomial::new(self.offset, self.coeffs.iter().map(from_pair).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceFile {
    pub phase: Pair,
    pub shift: i64,
    pub normalized_support: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub scaling: FilterFile,
    pub wavelet: FilterFile,
    pub provenance: ProvenanceFile,
    pub system_id: String,
}

impl SystemFile {
    pub fn from_system<T: Scalar>(system: &WaveletSystem<T>) -> Self {
        let p = system.provenance();
        Self {
            scaling: FilterFile::from_taps(system.scaling().taps()),
            wavelet: FilterFile::from_taps(system.wavelet()),
            provenance: ProvenanceFile {
                phase: to_pair(&p.phase),
                shift: p.shift,
                normalized_support: p.normalized_support,
            },
            system_id: system.id(),
        }
    }

    pub fn to_system<T: Scalar>(&self, norm_tol: T) -> Result<WaveletSystem<T>, FilterError> {
        let scaling = ScalingFilter::from_taps(self.scaling.to_taps(), norm_tol)?;
        WaveletSystem::from_parts(
            scaling,
            self.wavelet.to_taps(),
            Provenance {
                phase: from_pair(&self.provenance.phase),
                shift: self.provenance.shift,
                normalized_support: self.provenance.normalized_support,
            },
            norm_tol,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub levels: usize,
    pub approx: Vec<Pair>,
    pub details: Vec<Vec<Pair>>,
    pub system_id: String,
}

impl DecompositionFile {
    pub fn from_decomposition<T: Scalar>(d: &Decomposition<T>) -> Self {
        Self {
            levels: d.levels,
            approx: d.approx.iter().map(to_pair).collect(),
            details: d
                .details
                .iter()
                .map(|band| band.iter().map(to_pair).collect())
                .collect(),
            system_id: d.system_id.clone(),
        }
    }

    pub fn to_decomposition<T: Scalar>(&self) -> Decomposition<T> {
        Decomposition {
            levels: self.levels,
            approx: self.approx.iter().map(from_pair).collect(),
            details: self
                .details
                .iter()
                .map(|band| band.iter().map(from_pair).collect())
                .collect(),
            system_id: self.system_id.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledSidecar {
    pub support_start: i64,
    pub scale_log2: u32,
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    let mut s = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|source| IoError::Io {
            path: path.to_owned(),
            source,
        })?;
    Ok(s)
}

fn write_string(path: &Path, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|source| IoError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D, IoError> {
    Ok(serde_json::from_str(&read_to_string(path)?)?)
}

pub fn write_json<S: Serialize + ?Sized>(path: &Path, value: &S) -> Result<(), IoError> {
    let mut s = to_json_string(value)?;
    s.push('\n');
    write_string(path, &s)
}

/// Reads and validates a scaling filter.
pub fn read_filter<T: Scalar>(path: &Path, norm_tol: T) -> Result<ScalingFilter<T>, IoError> {
    let file: FilterFile = read_json(path)?;
    Ok(ScalingFilter::from_taps(file.to_taps(), norm_tol)?)
}

/// Reads a coefficient sequence without the normalization gate.
pub fn read_taps<T: Scalar>(path: &Path) -> Result<TrigPolynomial<T>, IoError> {
    let file: FilterFile = read_json(path)?;
    Ok(file.to_taps())
}

fn csv_rows(text: &str, header: &[&str]) -> Result<Vec<Vec<f64>>, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(IoError::Format(format!(
            "expected header {}, found {}",
            header.join(","),
            found.join(",")
        )));
    }
    reader
        .records()
        .enumerate()
        .map(|(line, rec)| {
            let rec = rec?;
            rec.iter()
                .map(|field| {
                    field
                        .parse::<f64>()
                        .map_err(|e| IoError::Format(format!("row {}: {field:?}: {e}", line + 1)))
                })
                .collect()
        })
        .collect()
}

fn csv_text(header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<String, IoError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row.into_iter().map(format_float))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| IoError::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

pub fn signal_to_csv<T: Scalar>(signal: &Signal<T>) -> Result<String, IoError> {
    csv_text(
        &["re", "im"],
        signal.values().iter().map(|c| to_pair(c).to_vec()),
    )
}

pub fn signal_from_csv<T: Scalar>(text: &str) -> Result<Signal<T>, IoError> {
    let rows = csv_rows(text, &["re", "im"])?;
    Ok(Signal::new(
        rows.iter()
            .map(|r| Complex::new(T::lit(r[0]), T::lit(r[1])))
            .collect(),
    ))
}

pub fn read_signal<T: Scalar>(path: &Path) -> Result<Signal<T>, IoError> {
    signal_from_csv(&read_to_string(path)?)
}

pub fn write_signal<T: Scalar>(path: &Path, signal: &Signal<T>) -> Result<(), IoError> {
    write_string(path, &signal_to_csv(signal)?)
}

pub fn samples_to_csv<T: Scalar>(samples: &FourierSamples<T>) -> Result<String, IoError> {
    csv_text(
        &["xi", "re", "im"],
        samples
            .values()
            .iter()
            .enumerate()
            .map(|(i, c)| vec![samples.xi(i).as_f64(), c.re.as_f64(), c.im.as_f64()]),
    )
}

/// Parses Fourier samples. The step is taken from the first two rows and
/// must be `1/n`; every row must sit on that grid.
pub fn samples_from_csv<T: Scalar>(text: &str) -> Result<FourierSamples<T>, IoError> {
    let rows = csv_rows(text, &["xi", "re", "im"])?;
    if rows.len() < 2 {
        return Err(IoError::Format("need at least two samples".to_owned()));
    }
    let start = rows[0][0];
    let step = rows[1][0] - start;
    let per_unit = (1.0 / step).round();
    let step_exact = if per_unit >= 1.0 && ((1.0 / step) - per_unit).abs() <= 1e-6 * per_unit {
        1.0 / per_unit
    } else {
        step
    };
    let values: Vec<Complex<T>> = rows
        .iter()
        .map(|r| Complex::new(T::lit(r[1]), T::lit(r[2])))
        .collect();
    let samples = FourierSamples::new(T::lit(start), T::lit(step_exact), values)?;
    for (i, r) in rows.iter().enumerate() {
        if (samples.xi(i).as_f64() - r[0]).abs() > 1e-9 * (1.0 + r[0].abs()) {
            return Err(IoError::Format(format!(
                "row {}: xi = {} is off the uniform grid",
                i + 1,
                r[0]
            )));
        }
    }
    Ok(samples)
}

pub fn read_samples<T: Scalar>(path: &Path) -> Result<FourierSamples<T>, IoError> {
    samples_from_csv(&read_to_string(path)?)
}

pub fn write_samples<T: Scalar>(path: &Path, samples: &FourierSamples<T>) -> Result<(), IoError> {
    write_string(path, &samples_to_csv(samples)?)
}

pub fn sampled_to_csv<T: Scalar>(f: &SampledFunction<T>) -> Result<String, IoError> {
    csv_text(
        &["x", "re", "im"],
        f.values()
            .iter()
            .enumerate()
            .map(|(i, c)| vec![f.x(i).as_f64(), c.re.as_f64(), c.im.as_f64()]),
    )
}

pub fn sampled_from_csv<T: Scalar>(
    text: &str,
    sidecar: SampledSidecar,
) -> Result<SampledFunction<T>, IoError> {
    let rows = csv_rows(text, &["x", "re", "im"])?;
    let f = SampledFunction::new(
        sidecar.support_start,
        sidecar.scale_log2,
        rows.iter()
            .map(|r| Complex::new(T::lit(r[1]), T::lit(r[2])))
            .collect(),
    );
    for (i, r) in rows.iter().enumerate() {
        if f.x(i).as_f64() != r[0] {
            return Err(IoError::Format(format!(
                "row {}: x = {} does not match the sidecar grid",
                i + 1,
                r[0]
            )));
        }
    }
    Ok(f)
}

/// Sidecar path for a sampled-function CSV: `phi.csv` → `phi.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn read_sampled<T: Scalar>(path: &Path) -> Result<SampledFunction<T>, IoError> {
    let sidecar: SampledSidecar = read_json(&sidecar_path(path))?;
    sampled_from_csv(&read_to_string(path)?, sidecar)
}

/// Writes the CSV and its sidecar next to it.
pub fn write_sampled<T: Scalar>(path: &Path, f: &SampledFunction<T>) -> Result<(), IoError> {
    write_string(path, &sampled_to_csv(f)?)?;
    write_json(
        &sidecar_path(path),
        &SampledSidecar {
            support_start: f.support_start(),
            scale_log2: f.scale_log2(),
        },
    )
}
