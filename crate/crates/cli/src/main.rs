//! `wavemra` command-line front end.
//!
//! Reports go to stdout as JSON, data artifacts to the files named by
//! `--out`. Exit status: 0 on success or a passing check, 1 when a check ran
//! to completion and failed, 2 on usage or input errors.

use std::error::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wavemra::cascade::{DEFAULT_CASCADE_TOL, DEFAULT_MAX_ITERS};
use wavemra::filters::{DEFAULT_CHECK_TOL, DEFAULT_GRID, DEFAULT_NORM_TOL};
use wavemra::fourier::{DEFAULT_DEPTH, DEFAULT_WINDOW};
use wavemra::io::{self, DecompositionFile, SystemFile};
use wavemra::{
    analyze, cascade_scaling, cross_gram, derive_wavelet, gram_report, lemma1_periodization_check,
    realize_wavelet, sample_phi_hat, sample_psi_hat, smith_barnwell_check, support_check,
    synthesize, translate_gram, two_scale_residual, CascadeError, CheckReport, FourierSamples64,
    ScalingFilter64, Signal64, WaveletSystem64,
};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "wavemra",
    version,
    about = "Orthonormal wavelet construction, checks and transforms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the wavelet filter of a scaling filter and write the system JSON.
    Derive {
        /// Scaling filter JSON.
        filter: PathBuf,
        /// Move the wavelet filter to start at index 0 (1 for odd offsets)
        /// with a nonnegative leading coefficient.
        #[arg(long)]
        normalize_support: bool,
        #[arg(long, default_value_t = DEFAULT_NORM_TOL)]
        norm_tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one of the numerical checks and print its report.
    Check {
        #[command(subcommand)]
        check: Check,
    },
    /// Approximate the scaling function on a dyadic grid.
    Cascade {
        filter: PathBuf,
        /// Grid spacing is 2^-scale.
        #[arg(long, default_value_t = 8)]
        scale: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        iters: usize,
        #[arg(long, default_value_t = DEFAULT_CASCADE_TOL)]
        tol: f64,
        /// Samples CSV; the grid sidecar is written next to it as .json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the wavelet on the grid of a cascade result.
    RealizeWavelet {
        /// Scaling function CSV written by `cascade`.
        #[arg(long)]
        phi: PathBuf,
        #[command(flatten)]
        system: SystemSource,
        #[arg(long)]
        out: PathBuf,
    },
    /// Multi-level periodic analysis of a signal CSV.
    Dwt {
        signal: PathBuf,
        #[command(flatten)]
        system: SystemSource,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthesis from a decomposition JSON.
    Idwt {
        decomposition: PathBuf,
        #[command(flatten)]
        system: SystemSource,
        #[arg(long)]
        out: PathBuf,
        /// Signal CSV to compare the reconstruction against.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Largest accepted difference from the reference.
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum Check {
    /// |m0(ξ)|² + |m0(ξ+½)|² = 1 on a uniform grid.
    SmithBarnwell {
        #[command(flatten)]
        input: FilterInput,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
    },
    /// Σ_k |ĝ(ξ+k)|² = 1 over the sampled window.
    Lemma1 {
        #[command(flatten)]
        input: SpectrumInput,
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
    },
    /// Measure of the sampled support of ĝ is at least 1.
    Support {
        #[command(flatten)]
        input: SpectrumInput,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
    },
    /// Gram sequence of cascade-realized functions against δ (or 0 for `cross`).
    Gram {
        #[command(flatten)]
        input: FilterInput,
        #[arg(long, value_enum, default_value_t = GramKind::Phi)]
        function: GramKind,
        #[arg(long, default_value_t = 8)]
        scale: u32,
        /// Shifts -n..=n are compared.
        #[arg(long, default_value_t = 3)]
        shifts: i64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        iters: usize,
        #[arg(long, default_value_t = DEFAULT_CASCADE_TOL)]
        cascade_tol: f64,
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GramKind {
    Phi,
    Psi,
    Cross,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spectrum {
    Phi,
    Psi,
}

#[derive(Args)]
struct FilterInput {
    /// Filter JSON (same as --filter).
    #[arg(value_name = "FILTER")]
    path: Option<PathBuf>,
    #[arg(long, conflicts_with = "path")]
    filter: Option<PathBuf>,
}

impl FilterInput {
    fn path(&self) -> Result<&Path> {
        self.path
            .as_deref()
            .or(self.filter.as_deref())
            .ok_or_else(|| "a filter file is required".into())
    }
}

#[derive(Args)]
struct SpectrumInput {
    /// Filter JSON (same as --filter).
    #[arg(value_name = "FILTER")]
    path: Option<PathBuf>,
    #[arg(long, conflicts_with = "path")]
    filter: Option<PathBuf>,
    /// Fourier samples CSV (`xi,re,im`) instead of a filter.
    #[arg(long, conflicts_with_all = ["path", "filter"])]
    samples: Option<PathBuf>,
    /// Which transform to sample from a filter.
    #[arg(long, value_enum, default_value_t = Spectrum::Phi)]
    function: Spectrum,
    /// Half-width of the sample window [-window, window).
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: f64,
    /// Samples per unit interval.
    #[arg(long, default_value_t = 64)]
    per_unit: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: u32,
}

impl SpectrumInput {
    fn samples(&self) -> Result<FourierSamples64> {
        if let Some(path) = &self.samples {
            return Ok(io::read_samples(path)?);
        }
        let path = self
            .path
            .as_deref()
            .or(self.filter.as_deref())
            .ok_or("a filter file or --samples is required")?;
        if !self.window.is_finite() || self.window <= 0.0 || self.per_unit == 0 || self.depth == 0 {
            return Err("--window, --per-unit and --depth must be positive".into());
        }
        let filter: ScalingFilter64 = io::read_filter(path, DEFAULT_NORM_TOL)?;
        let step = 1.0 / self.per_unit as f64;
        let count = (2.0 * self.window * self.per_unit as f64).round() as usize;
        Ok(match self.function {
            Spectrum::Phi => sample_phi_hat(&filter, -self.window, step, count, self.depth)?,
            Spectrum::Psi => {
                let system = derive_wavelet(&filter, false)?;
                sample_psi_hat(&system, -self.window, step, count, self.depth)?
            }
        })
    }
}

#[derive(Args)]
struct SystemSource {
    /// Wavelet system JSON written by `derive`.
    #[arg(long, required_unless_present = "filter", conflicts_with = "filter")]
    system: Option<PathBuf>,
    /// Scaling filter JSON; the wavelet is derived on the fly.
    #[arg(long)]
    filter: Option<PathBuf>,
    /// With --filter, derive with support normalization.
    #[arg(long, requires = "filter")]
    normalize_support: bool,
}

impl SystemSource {
    fn load(&self) -> Result<WaveletSystem64> {
        match (&self.system, &self.filter) {
            (Some(path), _) => {
                let file: SystemFile = io::read_json(path)?;
                Ok(file.to_system(DEFAULT_NORM_TOL)?)
            }
            (None, Some(path)) => {
                let filter = io::read_filter(path, DEFAULT_NORM_TOL)?;
                Ok(derive_wavelet(&filter, self.normalize_support)?)
            }
            (None, None) => Err("--system or --filter is required".into()),
        }
    }
}

/// A report plus whether it counts as a pass.
struct Outcome {
    json: String,
    pass: bool,
}

impl Outcome {
    fn ok<S: Serialize>(report: &S) -> Result<Self> {
        Ok(Self {
            json: io::to_json_string(report)?,
            pass: true,
        })
    }

    fn check(report: &CheckReport) -> Result<Self> {
        Ok(Self {
            json: io::to_json_string(report)?,
            pass: report.pass,
        })
    }
}

#[derive(Serialize)]
struct DeriveReport {
    system_id: String,
    wavelet_offset: i64,
    wavelet_len: usize,
    phase: [f64; 2],
    shift: i64,
    normalized_support: bool,
}

#[derive(Serialize)]
struct CascadeReport {
    converged: bool,
    iterations: usize,
    change: f64,
    residual: f64,
    support_start: i64,
    scale_log2: u32,
    samples: usize,
}

#[derive(Serialize)]
struct RealizeReport {
    system_id: String,
    support_start: i64,
    scale_log2: u32,
    samples: usize,
    discrete_norm: f64,
}

#[derive(Serialize)]
struct DwtReport {
    system_id: String,
    levels: usize,
    signal_len: usize,
    signal_energy: f64,
    approx_energy: f64,
    /// Coarsest first, like the bands themselves.
    detail_energies: Vec<f64>,
}

#[derive(Serialize)]
struct IdwtReport {
    system_id: String,
    signal_len: usize,
    energy: f64,
    max_diff: Option<f64>,
    pass: Option<bool>,
}

fn band_energy(band: &[wavemra::Complex64]) -> f64 {
    band.iter().map(|c| c.norm_sqr()).sum()
}

fn derive(filter: &Path, normalize: bool, norm_tol: f64, out: &Path) -> Result<Outcome> {
    let filter: ScalingFilter64 = io::read_filter(filter, norm_tol)?;
    let system = derive_wavelet(&filter, normalize)?;
    io::write_json(out, &SystemFile::from_system(&system))?;
    let p = system.provenance();
    Outcome::ok(&DeriveReport {
        system_id: system.id(),
        wavelet_offset: system.wavelet().offset(),
        wavelet_len: system.wavelet().len(),
        phase: [p.phase.re, p.phase.im],
        shift: p.shift,
        normalized_support: p.normalized_support,
    })
}

fn check(check: &Check) -> Result<Outcome> {
    match check {
        Check::SmithBarnwell { input, grid, tol } => {
            let taps = io::read_taps::<f64>(input.path()?)?;
            Outcome::check(&smith_barnwell_check(&taps, *grid, *tol)?)
        }
        Check::Lemma1 { input, tol } => {
            let samples = input.samples()?;
            let mut report = lemma1_periodization_check(&samples, *tol)?;
            if input.samples.is_none() {
                report = report.with_param("depth", input.depth as f64);
            }
            Outcome::check(&report)
        }
        Check::Support {
            input,
            threshold,
            tol,
        } => {
            let samples = input.samples()?;
            Outcome::check(&support_check(&samples, *threshold, *tol))
        }
        Check::Gram {
            input,
            function,
            scale,
            shifts,
            iters,
            cascade_tol,
            tol,
        } => {
            if *shifts < 0 {
                return Err("--shifts must be nonnegative".into());
            }
            let filter: ScalingFilter64 = io::read_filter(input.path()?, DEFAULT_NORM_TOL)?;
            let phi = cascade_scaling(&filter, *scale, *iters, *cascade_tol)?.function;
            let range = -*shifts..=*shifts;
            let (gram, delta) = match function {
                GramKind::Phi => (translate_gram(&phi, range.clone()), true),
                GramKind::Psi | GramKind::Cross => {
                    let system = derive_wavelet(&filter, true)?;
                    let psi = realize_wavelet(&phi, &system)?;
                    match function {
                        GramKind::Psi => (translate_gram(&psi, range.clone()), true),
                        _ => (cross_gram(&psi, &phi, range.clone())?, false),
                    }
                }
            };
            Outcome::check(
                &gram_report(&gram, range, delta, *tol).with_param("scale_log2", *scale as f64),
            )
        }
    }
}

fn cascade(filter: &Path, scale: u32, iters: usize, tol: f64, out: &Path) -> Result<Outcome> {
    let filter: ScalingFilter64 = io::read_filter(filter, DEFAULT_NORM_TOL)?;
    let (function, iterations, change, converged) =
        match cascade_scaling(&filter, scale, iters, tol) {
            Ok(out) => (out.function, out.iterations, out.change, true),
            Err(CascadeError::NoConvergence {
                last,
                residual,
                iterations,
            }) => (*last, iterations, residual, false),
            Err(e) => return Err(e.into()),
        };
    io::write_sampled(out, &function)?;
    let report = CascadeReport {
        converged,
        iterations,
        change,
        residual: two_scale_residual(&function, filter.taps()),
        support_start: function.support_start(),
        scale_log2: function.scale_log2(),
        samples: function.len(),
    };
    Ok(Outcome {
        json: io::to_json_string(&report)?,
        pass: converged,
    })
}

fn realize(phi: &Path, source: &SystemSource, out: &Path) -> Result<Outcome> {
    let system = source.load()?;
    let phi = io::read_sampled::<f64>(phi)?;
    let psi = realize_wavelet(&phi, &system)?;
    io::write_sampled(out, &psi)?;
    Outcome::ok(&RealizeReport {
        system_id: system.id(),
        support_start: psi.support_start(),
        scale_log2: psi.scale_log2(),
        samples: psi.len(),
        discrete_norm: psi.discrete_norm(),
    })
}

fn dwt(signal: &Path, source: &SystemSource, levels: usize, out: &Path) -> Result<Outcome> {
    let system = source.load()?;
    let signal: Signal64 = io::read_signal(signal)?;
    let decomposition = analyze(&signal, &system, levels)?;
    io::write_json(out, &DecompositionFile::from_decomposition(&decomposition))?;
    Outcome::ok(&DwtReport {
        system_id: decomposition.system_id.clone(),
        levels,
        signal_len: signal.len(),
        signal_energy: signal.energy(),
        approx_energy: band_energy(&decomposition.approx),
        detail_energies: decomposition
            .details
            .iter()
            .map(|d| band_energy(d))
            .collect(),
    })
}

fn idwt(
    decomposition: &Path,
    source: &SystemSource,
    out: &Path,
    reference: Option<&Path>,
    tol: f64,
) -> Result<Outcome> {
    let system = source.load()?;
    let file: DecompositionFile = io::read_json(decomposition)?;
    if file.system_id != system.id() {
        return Err(format!(
            "decomposition was made with {} but the system is {}",
            file.system_id,
            system.id()
        )
        .into());
    }
    let signal = synthesize(&file.to_decomposition::<f64>(), &system)?;
    io::write_signal(out, &signal)?;
    let max_diff = match reference {
        Some(path) => {
            let reference: Signal64 = io::read_signal(path)?;
            if reference.len() != signal.len() {
                return Err(format!(
                    "reference has {} samples, reconstruction has {}",
                    reference.len(),
                    signal.len()
                )
                .into());
            }
            Some(
                reference
                    .values()
                    .iter()
                    .zip(signal.values())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max),
            )
        }
        None => None,
    };
    let pass = max_diff.map(|d| d <= tol);
    let report = IdwtReport {
        system_id: system.id(),
        signal_len: signal.len(),
        energy: signal.energy(),
        max_diff,
        pass,
    };
    Ok(Outcome {
        json: io::to_json_string(&report)?,
        pass: pass.unwrap_or(true),
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Derive {
            filter,
            normalize_support,
            norm_tol,
            out,
        } => derive(filter, *normalize_support, *norm_tol, out),
        Command::Check { check: c } => check(c),
        Command::Cascade {
            filter,
            scale,
            iters,
            tol,
            out,
        } => cascade(filter, *scale, *iters, *tol, out),
        Command::RealizeWavelet { phi, system, out } => realize(phi, system, out),
        Command::Dwt {
            signal,
            system,
            levels,
            out,
        } => dwt(signal, system, *levels, out),
        Command::Idwt {
            decomposition,
            system,
            out,
            reference,
            tol,
        } => idwt(decomposition, system, out, reference.as_deref(), *tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.json);
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
