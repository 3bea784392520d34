//! Fourier-side numerics on sampled data: the truncated infinite product for
//! `φ̂`, periodization sums `Σ_k |ĝ(ξ + k)|²`, and support measure estimates.
//!
//! Statements that hold almost everywhere are checked at every grid point.
//! Grids must have `1/step ∈ ℤ`, so integer translates of a grid point are
//! grid points and no interpolation is ever needed.

use num_complex::Complex;
use thiserror::Error;

use crate::filters::{ScalingFilter, WaveletSystem};
use crate::report::{CheckReport, MaxTracker};
use crate::scalar::{frac, Scalar};

/// Product depth used when callers have no preference.
pub const DEFAULT_DEPTH: u32 = 20;
/// Half-width of the default sampling window `[-32, 32]`.
pub const DEFAULT_WINDOW: f64 = 32.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FourierError {
    #[error("step {0} is not 1/n for a positive integer n")]
    StepNotUnitDivisor(f64),
    #[error("samples cover [{start}, {end}), which does not contain [-1, 1)")]
    WindowTooSmall { start: f64, end: f64 },
    #[error("no samples")]
    Empty,
}

/// `values[i] ≈ ĝ(window_start + i·step)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSamples<T> {
    window_start: T,
    per_unit: usize,
    values: Vec<Complex<T>>,
}

fn per_unit_of<T: Scalar>(step: T) -> Result<usize, FourierError> {
    let bad = || FourierError::StepNotUnitDivisor(step.as_f64());
    if !(step > T::zero()) || !step.is_finite() {
        return Err(bad());
    }
    let inv = T::one() / step;
    let n = inv.round();
    if n < T::one() || (inv - n).abs() > n * T::lit(1e-9).max(T::epsilon() * T::lit(8.0)) {
        return Err(bad());
    }
    n.to_usize().ok_or_else(bad)
}

impl<T: Scalar> FourierSamples<T> {
    pub fn new(window_start: T, step: T, values: Vec<Complex<T>>) -> Result<Self, FourierError> {
        let per_unit = per_unit_of(step)?;
        if values.is_empty() {
            return Err(FourierError::Empty);
        }
        Ok(Self {
            window_start,
            per_unit,
            values,
        })
    }

    /// Samples `g` on `window_start + i/per_unit`, `i < count`.
    pub fn from_fn(
        window_start: T,
        step: T,
        count: usize,
        mut g: impl FnMut(T) -> Complex<T>,
    ) -> Result<Self, FourierError> {
        let per_unit = per_unit_of(step)?;
        if count == 0 {
            return Err(FourierError::Empty);
        }
        let values = (0..count)
            .map(|i| g(grid_xi(window_start, per_unit, i)))
            .collect();
        Ok(Self {
            window_start,
            per_unit,
            values,
        })
    }

    pub fn window_start(&self) -> T {
        self.window_start
    }

    pub fn window_end(&self) -> T {
        self.xi(self.values.len() - 1)
    }

    pub fn step(&self) -> T {
        T::one() / T::from_usize_lossy(self.per_unit)
    }

    /// Grid points per unit length, `1/step`.
    pub fn per_unit(&self) -> usize {
        self.per_unit
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn xi(&self, i: usize) -> T {
        grid_xi(self.window_start, self.per_unit, i)
    }

    /// Pointwise product with a grid function, e.g. a unimodular phase.
    pub fn map_with_xi(&self, mut f: impl FnMut(T, Complex<T>) -> Complex<T>) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.xi(i), v))
            .collect();
        Self {
            window_start: self.window_start,
            per_unit: self.per_unit,
            values,
        }
    }

    /// Rectangle-rule estimate of `‖ĝ‖²` over the window.
    pub fn norm_sqr(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr()).sum::<T>() * self.step()
    }
}

fn grid_xi<T: Scalar>(start: T, per_unit: usize, i: usize) -> T {
    start + T::from_usize_lossy(i) / T::from_usize_lossy(per_unit)
}

/// `φ̂(ξ) ≈ Π_{j=1}^{depth} m₀(ξ / 2^j)`, normalized by `φ̂(0) = 1`.
pub fn phi_hat_product<T: Scalar>(filter: &ScalingFilter<T>, xi: T, depth: u32) -> Complex<T> {
    let two = T::lit(2.0);
    let mut arg = xi;
    let mut acc = Complex::new(T::one(), T::zero());
    for _ in 0..depth {
        arg /= two;
        acc *= filter.m0(arg);
    }
    acc
}

/// `ψ̂(ξ) = G(ξ/2) φ̂(ξ/2)` with `φ̂` from the depth-truncated product.
pub fn psi_hat_product<T: Scalar>(system: &WaveletSystem<T>, xi: T, depth: u32) -> Complex<T> {
    let half = xi / T::lit(2.0);
    system.g(half) * phi_hat_product(system.scaling(), half, depth)
}

pub fn sample_phi_hat<T: Scalar>(
    filter: &ScalingFilter<T>,
    window_start: T,
    step: T,
    count: usize,
    depth: u32,
) -> Result<FourierSamples<T>, FourierError> {
    FourierSamples::from_fn(window_start, step, count, |xi| {
        phi_hat_product(filter, xi, depth)
    })
}

pub fn sample_psi_hat<T: Scalar>(
    system: &WaveletSystem<T>,
    window_start: T,
    step: T,
    count: usize,
    depth: u32,
) -> Result<FourierSamples<T>, FourierError> {
    FourierSamples::from_fn(window_start, step, count, |xi| {
        psi_hat_product(system, xi, depth)
    })
}

/// Checks `Σ_k |ĝ(ξ + k)|² = 1` for every residue `ξ ∈ [0, 1)` on the grid,
/// summing over all translates inside the window.
///
/// The reported `truncation_width` is the smallest number of translates that
/// contributed to any residue.
pub fn lemma1_periodization_check<T: Scalar>(
    samples: &FourierSamples<T>,
    tol: T,
) -> Result<CheckReport, FourierError> {
    let start = samples.window_start();
    let end = samples.window_end();
    // samples cover [start, start + len·step)
    let covered = start + samples.step() * T::from_usize_lossy(samples.len());
    let slack = samples.step() * T::lit(1e-6);
    if start > -T::one() + slack || covered < T::one() - slack {
        return Err(FourierError::WindowTooSmall {
            start: start.as_f64(),
            end: covered.as_f64(),
        });
    }
    let n = samples.per_unit();
    let mut sums = vec![T::zero(); n];
    let mut counts = vec![0usize; n];
    for (i, v) in samples.values().iter().enumerate() {
        sums[i % n] += v.norm_sqr();
        counts[i % n] += 1;
    }
    let mut worst = MaxTracker::new();
    for (r, s) in sums.iter().enumerate() {
        let xi = frac(samples.xi(r));
        worst.observe((*s - T::one()).abs().as_f64(), xi.as_f64());
    }
    let width = counts.iter().copied().min().unwrap_or(0);
    Ok(CheckReport::new(worst.value, worst.at, tol.as_f64())
        .with_param("window_start", start.as_f64())
        .with_param("window_end", end.as_f64())
        .with_param("step", samples.step().as_f64())
        .with_param("truncation_width", width as f64))
}

/// `step · #{i : |values[i]| > threshold}`, the grid estimate of the
/// measure of `supp ĝ` inside the window.
pub fn support_measure<T: Scalar>(samples: &FourierSamples<T>, threshold: T) -> T {
    let count = samples
        .values()
        .iter()
        .filter(|v| v.norm() > threshold)
        .count();
    samples.step() * T::from_usize_lossy(count)
}

/// Necessary condition for orthonormal translates: support measure at least
/// `1 − tol`. The deviation reported is the shortfall `max(0, 1 − measure)`.
pub fn support_check<T: Scalar>(samples: &FourierSamples<T>, threshold: T, tol: T) -> CheckReport {
    let measure = support_measure(samples, threshold);
    let shortfall = (T::one() - measure).max(T::zero());
    CheckReport::new(
        shortfall.as_f64(),
        samples.window_start().as_f64(),
        tol.as_f64(),
    )
    .with_param("measure", measure.as_f64())
    .with_param("threshold", threshold.as_f64())
    .with_param("step", samples.step().as_f64())
}
