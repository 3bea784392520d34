//! Time-domain realization of `φ` and `ψ` on dyadic grids.
//!
//! The cascade iterates `f ← √2 Σ_k α_k f(2· − k)` on the grid
//! `support_start + i·2^{-s}`. Since `2x − k` of a grid point is again a grid
//! point, every iterate is exact grid data and the fixed point is the vector of
//! point values of `φ` at the dyadic points.
//!
//! Inner products use the rectangle rule with spacing `2^{-s}`.

use std::ops::RangeInclusive;

use num_complex::Complex;
use thiserror::Error;

use crate::filters::{
    default_check_tol, smith_barnwell_check, ScalingFilter, WaveletSystem, DEFAULT_GRID,
};
use crate::report::{CheckReport, MaxTracker};
use crate::scalar::Scalar;
use crate::trig::TrigPolynomial;

/// Iteration cap used when callers have no preference.
pub const DEFAULT_MAX_ITERS: usize = 200;
/// Sup-norm change at which the cascade stops by default.
pub const DEFAULT_CASCADE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CascadeError<T: std::fmt::Debug> {
    #[error("filter fails the Smith-Barnwell identity (max deviation {max_deviation:e})")]
    NotQmf { max_deviation: f64 },
    #[error("scale_log2 must be at least 1")]
    InvalidScale,
    #[error("at least one iteration is required")]
    InvalidIterations,
    #[error("filter with {0} tap(s) has a degenerate support; the iteration collapses to a spike")]
    DegenerateSupport(usize),
    #[error("no convergence after {iterations} iterations (last sup change {residual:e})")]
    NoConvergence {
        last: Box<SampledFunction<T>>,
        residual: f64,
        iterations: usize,
    },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

/// `values[i] ≈ f(support_start + i·2^{-scale_log2})`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction<T> {
    support_start: i64,
    scale_log2: u32,
    values: Vec<Complex<T>>,
}

impl<T: Scalar> SampledFunction<T> {
    pub fn new(support_start: i64, scale_log2: u32, values: Vec<Complex<T>>) -> Self {
        Self {
            support_start,
            scale_log2,
            values,
        }
    }

    pub fn support_start(&self) -> i64 {
        self.support_start
    }

    pub fn scale_log2(&self) -> u32 {
        self.scale_log2
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

    /// Grid points per unit length.
    pub fn per_unit(&self) -> usize {
        1usize << self.scale_log2
    }

    pub fn spacing(&self) -> T {
        T::one() / T::from_usize_lossy(self.per_unit())
    }

    pub fn x(&self, i: usize) -> T {
        T::from_i64_lossy(self.support_start) + T::from_usize_lossy(i) * self.spacing()
    }

    /// Value at grid index `j` relative to `support_start`, zero off the grid.
    fn at(&self, j: i64) -> Complex<T> {
        if j < 0 || j >= self.values.len() as i64 {
            Complex::new(T::zero(), T::zero())
        } else {
            self.values[j as usize]
        }
    }

    /// `(h Σ |v|²)^{1/2}`.
    pub fn discrete_norm(&self) -> T {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<T>() * self.spacing()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeOutput<T> {
    pub function: SampledFunction<T>,
    pub iterations: usize,
    /// Sup-norm change of the final iteration.
    pub change: f64,
}

/// One application of `f ↦ √2 Σ_k c_k f(2· − k)` on the support grid of `f`,
/// which must start at the filter offset.
fn refine<T: Scalar>(f: &SampledFunction<T>, taps: &TrigPolynomial<T>) -> Vec<Complex<T>> {
    let per_unit = f.per_unit() as i64;
    let offset = taps.offset();
    (0..f.len() as i64)
        .map(|i| {
            taps.iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (k, c)| {
                    acc + c * f.at((offset - k) * per_unit + 2 * i)
                })
                * T::SQRT_2()
        })
        .collect()
}

fn sup_distance<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).norm())
        .fold(T::zero(), |m, d| if d > m || d.is_nan() { d } else { m })
}

/// Cascade on an arbitrary coefficient sequence that passes the
/// Smith–Barnwell check. The support is `[offset, offset + len − 1]` and the
/// first iterate is the box `χ_{[offset, offset+1)}`.
pub fn cascade_taps<T: Scalar>(
    taps: &TrigPolynomial<T>,
    scale_log2: u32,
    max_iters: usize,
    tol: T,
) -> Result<CascadeOutput<T>, CascadeError<T>> {
    if scale_log2 < 1 {
        return Err(CascadeError::InvalidScale);
    }
    if max_iters < 1 {
        return Err(CascadeError::InvalidIterations);
    }
    let taps = taps.trimmed();
    if taps.len() < 2 {
        return Err(CascadeError::DegenerateSupport(taps.len()));
    }
    let report = smith_barnwell_check(&taps, DEFAULT_GRID, default_check_tol::<T>())
        .expect("default grid is valid");
    if !report.pass {
        return Err(CascadeError::NotQmf {
            max_deviation: report.max_deviation,
        });
    }

    let per_unit = 1usize << scale_log2;
    let len = (taps.len() - 1) * per_unit + 1;
    let mut values = vec![Complex::new(T::zero(), T::zero()); len];
    values[..per_unit].fill(Complex::new(T::one(), T::zero()));
    let mut current = SampledFunction::new(taps.offset(), scale_log2, values);

    let mut change = T::infinity();
    for iteration in 1..=max_iters {
        let next = refine(&current, &taps);
        change = sup_distance(&next, &current.values);
        current.values = next;
        if change <= tol {
            return Ok(CascadeOutput {
                function: current,
                iterations: iteration,
                change: change.as_f64(),
            });
        }
    }
    Err(CascadeError::NoConvergence {
        last: Box::new(current),
        residual: change.as_f64(),
        iterations: max_iters,
    })
}

/// Approximates `φ` on the grid with spacing `2^{-scale_log2}`.
pub fn cascade_scaling<T: Scalar>(
    filter: &ScalingFilter<T>,
    scale_log2: u32,
    max_iters: usize,
    tol: T,
) -> Result<CascadeOutput<T>, CascadeError<T>> {
    cascade_taps(filter.taps(), scale_log2, max_iters, tol)
}

/// `max_i |φ(x_i) − √2 Σ_k α_k φ(2x_i − k)|` on the grid of `phi`.
pub fn two_scale_residual<T: Scalar>(phi: &SampledFunction<T>, taps: &TrigPolynomial<T>) -> T {
    sup_distance(&refine(phi, taps), phi.values())
}

fn check_phi_grid<T: Scalar>(
    phi: &SampledFunction<T>,
    filter: &ScalingFilter<T>,
) -> Result<(), CascadeError<T>> {
    if phi.scale_log2() < 1 {
        return Err(CascadeError::GridMismatch(
            "scale_log2 must be at least 1".to_owned(),
        ));
    }
    if phi.support_start() != filter.offset() {
        return Err(CascadeError::GridMismatch(format!(
            "phi starts at {} but the scaling filter at {}",
            phi.support_start(),
            filter.offset()
        )));
    }
    let expected = (filter.len() - 1) * phi.per_unit() + 1;
    if phi.len() != expected {
        return Err(CascadeError::GridMismatch(format!(
            "phi has {} samples, expected {expected}",
            phi.len()
        )));
    }
    Ok(())
}

/// `ψ(x) = √2 Σ_k β_k φ(2x − k)` on the grid of `phi`, over the support
/// `[⌊(a+b)/2⌋, ⌈(a+b+n+m−2)/2⌉]` where `a, n` and `b, m` are the offsets and
/// lengths of the scaling and wavelet filters.
pub fn realize_wavelet<T: Scalar>(
    phi: &SampledFunction<T>,
    system: &WaveletSystem<T>,
) -> Result<SampledFunction<T>, CascadeError<T>> {
    let scaling = system.scaling();
    check_phi_grid(phi, scaling)?;
    let beta = system.wavelet();
    let a = scaling.offset();
    let lo = a + beta.offset();
    let hi = lo + scaling.len() as i64 + beta.len() as i64 - 2;
    let start = lo.div_euclid(2);
    let end = -((-hi).div_euclid(2));
    let per_unit = phi.per_unit() as i64;
    let len = ((end - start) * per_unit + 1) as usize;
    let values = (0..len as i64)
        .map(|i| {
            beta.iter()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (k, c)| {
                    acc + c * phi.at((2 * start - k - a) * per_unit + 2 * i)
                })
                * T::SQRT_2()
        })
        .collect();
    Ok(SampledFunction::new(start, phi.scale_log2(), values))
}

/// `G[k] = ⟨f, g(· − k)⟩ = h Σ_x f(x) conj(g(x − k))` for each `k` in `shifts`.
pub fn cross_gram<T: Scalar>(
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
    shifts: RangeInclusive<i64>,
) -> Result<Vec<Complex<T>>, CascadeError<T>> {
    if f.scale_log2() != g.scale_log2() {
        return Err(CascadeError::GridMismatch(format!(
            "scales differ: {} vs {}",
            f.scale_log2(),
            g.scale_log2()
        )));
    }
    let per_unit = f.per_unit() as i64;
    let h = f.spacing();
    Ok(shifts
        .map(|k| {
            let lag = (f.support_start() - g.support_start() - k) * per_unit;
            f.values()
                .iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (i, v)| {
                    acc + *v * g.at(i as i64 + lag).conj()
                })
                * h
        })
        .collect())
}

/// Gram sequence of `f` against its own integer translates.
pub fn translate_gram<T: Scalar>(
    f: &SampledFunction<T>,
    shifts: RangeInclusive<i64>,
) -> Vec<Complex<T>> {
    cross_gram(f, f, shifts).expect("same grid")
}

/// Compares a Gram sequence against `δ_{k,0}` (or against zero when
/// `expect_delta` is false); `argmax_xi` carries the worst shift.
pub fn gram_report<T: Scalar>(
    gram: &[Complex<T>],
    shifts: RangeInclusive<i64>,
    expect_delta: bool,
    tol: T,
) -> CheckReport {
    let mut worst = MaxTracker::new();
    let first = *shifts.start();
    for (k, g) in shifts.zip(gram) {
        let target = if expect_delta && k == 0 {
            T::one()
        } else {
            T::zero()
        };
        worst.observe(
            (*g - Complex::new(target, T::zero())).norm().as_f64(),
            k as f64,
        );
    }
    CheckReport::new(worst.value, worst.at, tol.as_f64())
        .with_param("shift_min", first as f64)
        .with_param("shift_max", (first + gram.len() as i64 - 1) as f64)
}
