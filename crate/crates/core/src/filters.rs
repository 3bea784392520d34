//! Filter algebra: scaling filters, the low-pass symbol `m₀`, the
//! Smith–Barnwell identity, and construction of the wavelet filter.
//!
//! Conventions. The Fourier transform is `f̂(ξ) = ∫ f(x) e^{-2πixξ} dx`.
//! A scaling filter `α` encodes the two-scale relation
//! `φ(x) = √2 Σ_k α_k φ(2x − k)`, whose transform is `φ̂(2ξ) = m₀(ξ) φ̂(ξ)` with
//!
//! ```text
//! m₀(ξ) = (1/√2) Σ_k α_k e^{-2πikξ}.
//! ```
//!
//! Wavelet filter. Write `ψ(x) = √2 Σ_k β_k φ(2x − k)`, so that
//! `ψ̂(2ξ) = G(ξ) φ̂(ξ)` with `G(ξ) = (1/√2) Σ_k β_k e^{-2πikξ}`. The wavelet
//! symbol is `G(ξ) = e^{2πiξ} conj(m₀(ξ + 1/2))`. Expanding,
//!
//! ```text
//! e^{2πiξ} conj(m₀(ξ + 1/2)) = (1/√2) Σ_n conj(α_n) e^{2πin(ξ+1/2)} e^{2πiξ}
//!                            = (1/√2) Σ_n (−1)^n conj(α_n) e^{2πi(n+1)ξ},
//! ```
//!
//! and matching the coefficient of `e^{-2πikξ}` means `k = −n − 1`, hence
//!
//! ```text
//! β_k = (−1)^{k+1} conj(α_{−k−1}).
//! ```
//!
//! Any other orthonormal wavelet in `W₀` has symbol `ν(2ξ) G(ξ)` with `ν`
//! 1-periodic and unimodular. For `ν(ξ) = c e^{-2πiMξ}` this multiplies `β` by
//! `c` and moves it by `2M` indices, which realizes `c ψ(x − M)`.

use num_complex::Complex;
use thiserror::Error;

use crate::report::{CheckReport, MaxTracker};
use crate::scalar::Scalar;
use crate::trig::TrigPolynomial;

/// Tolerance for the normalization invariants of filters.
pub const DEFAULT_NORM_TOL: f64 = 1e-10;
/// Tolerance for grid checks of the Smith–Barnwell identity.
pub const DEFAULT_CHECK_TOL: f64 = 1e-10;
/// Uniform grid size on `[0, 1)` used by the symbol checks.
pub const DEFAULT_GRID: usize = 4096;

/// [`DEFAULT_CHECK_TOL`], widened to a few hundred ulps for types coarser
/// than `f64`.
pub fn default_check_tol<T: Scalar>() -> T {
    T::lit(DEFAULT_CHECK_TOL).max(T::epsilon() * T::lit(256.0))
}

/// Which filter normalization failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    /// `Σ α_k = √2`
    Sum,
    /// `Σ |α_k|² = 1`
    Energy,
    /// `Σ β_k = 0`
    WaveletSum,
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Invariant::Sum => f.write_str("sum of coefficients equals sqrt(2)"),
            Invariant::Energy => f.write_str("sum of squared moduli equals 1"),
            Invariant::WaveletSum => f.write_str("wavelet coefficients sum to 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("filter has no coefficients")]
    EmptyFilter,
    #[error("normalization violated ({invariant}): off by {deviation:e}")]
    NormalizationViolation {
        invariant: Invariant,
        deviation: f64,
    },
    #[error("filter fails the Smith-Barnwell identity: max deviation {max_deviation:e} at xi = {argmax_xi}")]
    FilterNotQmf { max_deviation: f64, argmax_xi: f64 },
    #[error("modulation is not unimodular: max ||nu| - 1| = {max_deviation:e}")]
    NotUnimodular { max_deviation: f64 },
    #[error("only monomial modulations c*e^(-2*pi*i*M*xi) preserve finite support; got {terms} nonzero terms")]
    UnsupportedModulation { terms: usize },
    #[error("wavelet filter does not match the scaling filter and provenance: max deviation {max_deviation:e}")]
    InconsistentWavelet { max_deviation: f64 },
    #[error("grid needs at least 2 points, got {0}")]
    InvalidGrid(usize),
}

/// A validated scaling filter `α`: trimmed, `Σ α = √2`, `Σ |α|² = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFilter<T> {
    taps: TrigPolynomial<T>,
}

impl<T: Scalar> ScalingFilter<T> {
    pub fn new(offset: i64, coeffs: Vec<Complex<T>>, norm_tol: T) -> Result<Self, FilterError> {
        Self::from_taps(TrigPolynomial::new(offset, coeffs), norm_tol)
    }

    pub fn from_real(offset: i64, coeffs: &[T], norm_tol: T) -> Result<Self, FilterError> {
        Self::from_taps(TrigPolynomial::from_real(offset, coeffs), norm_tol)
    }

    pub fn from_taps(taps: TrigPolynomial<T>, norm_tol: T) -> Result<Self, FilterError> {
        if taps.is_empty() {
            return Err(FilterError::EmptyFilter);
        }
        let taps = taps.trimmed();
        if taps.is_empty() {
            return Err(FilterError::NormalizationViolation {
                invariant: Invariant::Sum,
                deviation: T::SQRT_2().as_f64(),
            });
        }
        let sum_dev = (taps.sum() - Complex::new(T::SQRT_2(), T::zero())).norm();
        if !(sum_dev <= norm_tol) {
            return Err(FilterError::NormalizationViolation {
                invariant: Invariant::Sum,
                deviation: sum_dev.as_f64(),
            });
        }
        let energy_dev = (taps.energy() - T::one()).abs();
        if !(energy_dev <= norm_tol) {
            return Err(FilterError::NormalizationViolation {
                invariant: Invariant::Energy,
                deviation: energy_dev.as_f64(),
            });
        }
        Ok(Self { taps })
    }

    /// `α = (1/√2, 1/√2)` at offset 0; `φ = χ_{[0,1)}`.
    pub fn haar() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            taps: TrigPolynomial::from_real(0, &[h, h]),
        }
    }

    /// Four-tap Daubechies filter with two vanishing moments,
    /// `α = (1+√3, 3+√3, 3−√3, 1−√3) / (4√2)` at offset 0.
    pub fn daubechies4() -> Self {
        let s3 = T::lit(3.0).sqrt();
        let one = T::one();
        let three = T::lit(3.0);
        let denom = T::lit(4.0) * T::SQRT_2();
        Self {
            taps: TrigPolynomial::from_real(
                0,
                &[
                    (one + s3) / denom,
                    (three + s3) / denom,
                    (three - s3) / denom,
                    (one - s3) / denom,
                ],
            ),
        }
    }

    pub fn taps(&self) -> &TrigPolynomial<T> {
        &self.taps
    }

    pub fn offset(&self) -> i64 {
        self.taps.offset()
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        self.taps.coeffs()
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// The low-pass symbol `m₀(ξ)`.
    pub fn m0(&self, xi: T) -> Complex<T> {
        eval_m0(&self.taps, xi)
    }
}

impl<T> AsRef<TrigPolynomial<T>> for ScalingFilter<T> {
    fn as_ref(&self) -> &TrigPolynomial<T> {
        &self.taps
    }
}

/// `m₀(ξ) = (1/√2) Σ_k α_k e^{-2πikξ}` for any coefficient sequence.
pub fn eval_m0<T: Scalar>(taps: &TrigPolynomial<T>, xi: T) -> Complex<T> {
    taps.eval(xi) / T::SQRT_2()
}

fn grid_point<T: Scalar>(i: usize, grid_points: usize) -> T {
    T::from_usize_lossy(i) / T::from_usize_lossy(grid_points)
}

/// Checks `|m₀(ξ)|² + |m₀(ξ + 1/2)|² = 1` on `ξ_i = i / grid_points`.
///
/// Accepts any coefficient sequence, including ones that would fail the
/// `ScalingFilter` normalization gate.
pub fn smith_barnwell_check<T: Scalar>(
    taps: &TrigPolynomial<T>,
    grid_points: usize,
    tol: T,
) -> Result<CheckReport, FilterError> {
    if grid_points < 2 {
        return Err(FilterError::InvalidGrid(grid_points));
    }
    let half = T::lit(0.5);
    let mut worst = MaxTracker::new();
    for i in 0..grid_points {
        let xi: T = grid_point(i, grid_points);
        let d = eval_m0(taps, xi).norm_sqr() + eval_m0(taps, xi + half).norm_sqr() - T::one();
        worst.observe(d.abs().as_f64(), xi.as_f64());
    }
    Ok(CheckReport::new(worst.value, worst.at, tol.as_f64())
        .with_param("grid_points", grid_points as f64))
}

/// Record of the unimodular modulation `ν(ξ) = phase · e^{-2πi·shift·ξ}`
/// applied on top of the raw wavelet filter.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance<T> {
    pub phase: Complex<T>,
    pub shift: i64,
    pub normalized_support: bool,
}

impl<T: Scalar> Provenance<T> {
    pub fn identity() -> Self {
        Self {
            phase: Complex::new(T::one(), T::zero()),
            shift: 0,
            normalized_support: false,
        }
    }
}

/// A scaling filter together with an orthonormal wavelet filter for it.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveletSystem<T> {
    scaling: ScalingFilter<T>,
    wavelet: TrigPolynomial<T>,
    provenance: Provenance<T>,
}

impl<T: Scalar> WaveletSystem<T> {
    /// Reassembles a system, e.g. from a file. The wavelet filter must have
    /// unit energy, zero sum, and equal the modulated raw wavelet filter of
    /// `scaling` within `norm_tol`.
    pub fn from_parts(
        scaling: ScalingFilter<T>,
        wavelet: TrigPolynomial<T>,
        provenance: Provenance<T>,
        norm_tol: T,
    ) -> Result<Self, FilterError> {
        let wavelet = wavelet.trimmed();
        if wavelet.is_empty() {
            return Err(FilterError::EmptyFilter);
        }
        let energy_dev = (wavelet.energy() - T::one()).abs();
        if !(energy_dev <= norm_tol) {
            return Err(FilterError::NormalizationViolation {
                invariant: Invariant::Energy,
                deviation: energy_dev.as_f64(),
            });
        }
        let sum_dev = wavelet.sum().norm();
        if !(sum_dev <= norm_tol) {
            return Err(FilterError::NormalizationViolation {
                invariant: Invariant::WaveletSum,
                deviation: sum_dev.as_f64(),
            });
        }
        let expected = raw_wavelet_taps(&scaling.taps)
            .scaled(provenance.phase)
            .shifted(2 * provenance.shift);
        let lo = expected.offset().min(wavelet.offset());
        let hi = expected.end().max(wavelet.end());
        let mismatch = (lo..hi)
            .map(|k| (expected.coeff(k) - wavelet.coeff(k)).norm())
            .fold(T::zero(), T::max);
        if !(mismatch <= norm_tol) {
            return Err(FilterError::InconsistentWavelet {
                max_deviation: mismatch.as_f64(),
            });
        }
        Ok(Self {
            scaling,
            wavelet,
            provenance,
        })
    }

    pub fn scaling(&self) -> &ScalingFilter<T> {
        &self.scaling
    }

    pub fn wavelet(&self) -> &TrigPolynomial<T> {
        &self.wavelet
    }

    pub fn provenance(&self) -> &Provenance<T> {
        &self.provenance
    }

    /// The wavelet symbol `G(ξ) = (1/√2) Σ_k β_k e^{-2πikξ}`.
    pub fn g(&self, xi: T) -> Complex<T> {
        eval_m0(&self.wavelet, xi)
    }

    /// Short textual identity used to tag decompositions.
    pub fn id(&self) -> String {
        let p = &self.provenance;
        format!(
            "taps{}@{};nu=({:+.6},{:+.6})*e^(-2pi*i*{}*xi)",
            self.scaling.len(),
            self.scaling.offset(),
            p.phase.re.as_f64(),
            p.phase.im.as_f64(),
            p.shift
        )
    }
}

fn raw_wavelet_taps<T: Scalar>(taps: &TrigPolynomial<T>) -> TrigPolynomial<T> {
    // β_k = (−1)^{k+1} conj(α_{−k−1}); k runs from −end to −offset−1.
    let start = -taps.end();
    let coeffs = (start..-taps.offset())
        .map(|k| {
            let c = taps.coeff(-k - 1).conj();
            if (k + 1).rem_euclid(2) == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    TrigPolynomial::new(start, coeffs)
}

/// Builds the wavelet filter `β_k = (−1)^{k+1} conj(α_{−k−1})`.
///
/// With `normalize_support`, additionally applies `ν(ξ) = ±e^{-2πiMξ}` so the
/// wavelet filter starts at index 0 (index 1 when the scaling filter has an odd
/// offset, since only even index moves are admissible) and its first
/// coefficient has nonnegative real part.
pub fn derive_wavelet<T: Scalar>(
    filter: &ScalingFilter<T>,
    normalize_support: bool,
) -> Result<WaveletSystem<T>, FilterError> {
    let report = smith_barnwell_check(&filter.taps, DEFAULT_GRID, default_check_tol::<T>())?;
    if !report.pass {
        return Err(FilterError::FilterNotQmf {
            max_deviation: report.max_deviation,
            argmax_xi: report.argmax_xi,
        });
    }
    let raw = raw_wavelet_taps(&filter.taps);
    let mut provenance = Provenance::identity();
    let wavelet = if normalize_support {
        let start = raw.offset();
        let target = start.rem_euclid(2);
        let shift = (target - start) / 2;
        let moved = raw.shifted(2 * shift);
        let sign = if moved.coeffs()[0].re < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        provenance = Provenance {
            phase: Complex::new(sign, T::zero()),
            shift,
            normalized_support: true,
        };
        moved.scaled(provenance.phase)
    } else {
        raw
    };
    Ok(WaveletSystem {
        scaling: filter.clone(),
        wavelet,
        provenance,
    })
}

/// Replaces `ψ̂` by `ν ψ̂`.
///
/// `ν` must be unimodular on the grid `i / grid_points` within `tol` and a
/// single term `c e^{-2πiMξ}`; the wavelet filter is then multiplied by `c`
/// and moved by `2M` indices.
pub fn modulate<T: Scalar>(
    system: &WaveletSystem<T>,
    nu: &TrigPolynomial<T>,
    grid_points: usize,
    tol: T,
) -> Result<WaveletSystem<T>, FilterError> {
    if grid_points < 2 {
        return Err(FilterError::InvalidGrid(grid_points));
    }
    let max_deviation = (0..grid_points)
        .map(|i| (nu.eval(grid_point(i, grid_points)).norm() - T::one()).abs())
        .fold(T::zero(), |a, b| if b > a || b.is_nan() { b } else { a });
    if !(max_deviation <= tol) {
        return Err(FilterError::NotUnimodular {
            max_deviation: max_deviation.as_f64(),
        });
    }
    let nu = nu.trimmed();
    if nu.len() != 1 {
        return Err(FilterError::UnsupportedModulation { terms: nu.len() });
    }
    let c = nu.coeffs()[0];
    let shift = nu.offset();
    Ok(WaveletSystem {
        scaling: system.scaling.clone(),
        wavelet: system.wavelet.scaled(c).shifted(2 * shift),
        provenance: Provenance {
            phase: system.provenance.phase * c,
            shift: system.provenance.shift + shift,
            normalized_support: system.provenance.normalized_support,
        },
    })
}

/// Checks that the modulation matrix
/// `[[m₀(ξ), m₀(ξ+½)], [G(ξ), G(ξ+½)]]` is unitary on the grid: both rows
/// have unit norm and are orthogonal.
pub fn unitarity_check<T: Scalar>(
    system: &WaveletSystem<T>,
    grid_points: usize,
    tol: T,
) -> Result<CheckReport, FilterError> {
    if grid_points < 2 {
        return Err(FilterError::InvalidGrid(grid_points));
    }
    let half = T::lit(0.5);
    let mut worst = MaxTracker::new();
    for i in 0..grid_points {
        let xi: T = grid_point(i, grid_points);
        let (a, b) = (system.scaling.m0(xi), system.scaling.m0(xi + half));
        let (g, gh) = (system.g(xi), system.g(xi + half));
        let low = a.norm_sqr() + b.norm_sqr() - T::one();
        let high = g.norm_sqr() + gh.norm_sqr() - T::one();
        let column = a.norm_sqr() + g.norm_sqr() - T::one();
        let cross = (a * g.conj() + b * gh.conj()).norm();
        for d in [low.abs(), high.abs(), column.abs(), cross] {
            worst.observe(d.as_f64(), xi.as_f64());
        }
    }
    Ok(CheckReport::new(worst.value, worst.at, tol.as_f64())
        .with_param("grid_points", grid_points as f64))
}
