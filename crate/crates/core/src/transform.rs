//! Periodic orthogonal wavelet transform.
//!
//! One analysis step splits coefficients of `V_{j+1}` into `V_j ⊕ W_j`:
//!
//! ```text
//! a[k] = Σ_n conj(α_{n−2k}) s[n]      d[k] = Σ_n conj(β_{n−2k}) s[n]
//! ```
//!
//! with indices taken modulo the signal length. Synthesis is the adjoint,
//! `s[n] = Σ_k α_{n−2k} a[k] + β_{n−2k} d[k]`. For a filter pair from
//! [`derive_wavelet`](crate::filters::derive_wavelet) the step is unitary for
//! every even length, so energy is preserved exactly up to rounding.

use num_complex::Complex;
use thiserror::Error;

use crate::filters::WaveletSystem;
use crate::scalar::Scalar;
use crate::trig::TrigPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("signal length {0} is not even and positive")]
    OddLength(usize),
    #[error("approximation and detail bands differ in length ({approx} vs {detail})")]
    LengthMismatch { approx: usize, detail: usize },
    #[error("{levels} level(s) need a length divisible by 2^{levels}, got {len}")]
    TooManyLevels { levels: usize, len: usize },
    #[error("signal length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),
}

/// Coefficients of a function in `V_L` with respect to `{2^{L/2} φ(2^L x − k)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal<T> {
    values: Vec<Complex<T>>,
}

impl<T: Scalar> Signal<T> {
    pub fn new(values: Vec<Complex<T>>) -> Self {
        Self { values }
    }

    pub fn from_real(values: &[T]) -> Self {
        Self::new(values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn energy(&self) -> T {
        energy(&self.values)
    }
}

pub(crate) fn energy<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Approximation band plus detail bands stored coarsest first.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<T> {
    pub levels: usize,
    pub approx: Vec<Complex<T>>,
    pub details: Vec<Vec<Complex<T>>>,
    pub system_id: String,
}

impl<T: Scalar> Decomposition<T> {
    /// Length of the signal this decomposition reconstructs to.
    pub fn signal_len(&self) -> usize {
        self.approx.len() << self.levels
    }

    pub fn energy(&self) -> T {
        energy(&self.approx) + self.details.iter().map(|d| energy(d)).sum::<T>()
    }

    fn validate(&self) -> Result<(), TransformError> {
        let bad = |msg: String| Err(TransformError::MalformedDecomposition(msg));
        if self.levels == 0 {
            return bad("levels must be at least 1".to_owned());
        }
        if self.details.len() != self.levels {
            return bad(format!(
                "{} detail bands for {} levels",
                self.details.len(),
                self.levels
            ));
        }
        if self.approx.is_empty() {
            return bad("empty approximation band".to_owned());
        }
        let mut expected = self.approx.len();
        for (j, d) in self.details.iter().enumerate() {
            if d.len() != expected {
                return bad(format!(
                    "detail band {j} has length {}, expected {expected}",
                    d.len()
                ));
            }
            expected *= 2;
        }
        Ok(())
    }
}

fn zero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn analyze_band<T: Scalar>(s: &[Complex<T>], taps: &TrigPolynomial<T>) -> Vec<Complex<T>> {
    let n = s.len() as i64;
    (0..n / 2)
        .map(|k| {
            taps.iter().fold(zero(), |acc, (t, c)| {
                acc + c.conj() * s[(t + 2 * k).rem_euclid(n) as usize]
            })
        })
        .collect()
}

fn synthesize_band<T: Scalar>(
    out: &mut [Complex<T>],
    band: &[Complex<T>],
    taps: &TrigPolynomial<T>,
) {
    let n = out.len() as i64;
    for (k, &b) in band.iter().enumerate() {
        for (t, c) in taps.iter() {
            out[(t + 2 * k as i64).rem_euclid(n) as usize] += c * b;
        }
    }
}

/// Approximation and detail halves of one split.
pub type Bands<T> = (Vec<Complex<T>>, Vec<Complex<T>>);

/// One orthogonal split of `signal` into approximation and detail halves.
pub fn analyze_once<T: Scalar>(
    signal: &[Complex<T>],
    system: &WaveletSystem<T>,
) -> Result<Bands<T>, TransformError> {
    if signal.is_empty() || !signal.len().is_multiple_of(2) {
        return Err(TransformError::OddLength(signal.len()));
    }
    Ok((
        analyze_band(signal, system.scaling().taps()),
        analyze_band(signal, system.wavelet()),
    ))
}

/// Inverse of [`analyze_once`].
pub fn synthesize_once<T: Scalar>(
    approx: &[Complex<T>],
    detail: &[Complex<T>],
    system: &WaveletSystem<T>,
) -> Result<Vec<Complex<T>>, TransformError> {
    if approx.len() != detail.len() {
        return Err(TransformError::LengthMismatch {
            approx: approx.len(),
            detail: detail.len(),
        });
    }
    let mut out = vec![zero(); 2 * approx.len()];
    if out.is_empty() {
        return Ok(out);
    }
    synthesize_band(&mut out, approx, system.scaling().taps());
    synthesize_band(&mut out, detail, system.wavelet());
    Ok(out)
}

/// `levels`-fold decomposition of a power-of-two length signal.
pub fn analyze<T: Scalar>(
    signal: &Signal<T>,
    system: &WaveletSystem<T>,
    levels: usize,
) -> Result<Decomposition<T>, TransformError> {
    let len = signal.len();
    if levels == 0 {
        return Err(TransformError::MalformedDecomposition(
            "levels must be at least 1".to_owned(),
        ));
    }
    if levels >= usize::BITS as usize || len == 0 || !len.is_multiple_of(1usize << levels) {
        return Err(TransformError::TooManyLevels { levels, len });
    }
    if !len.is_power_of_two() {
        return Err(TransformError::NotPowerOfTwo(len));
    }
    let mut details = Vec::with_capacity(levels);
    let mut current = signal.values().to_vec();
    for _ in 0..levels {
        let (a, d) = analyze_once(&current, system)?;
        details.push(d);
        current = a;
    }
    details.reverse();
    Ok(Decomposition {
        levels,
        approx: current,
        details,
        system_id: system.id(),
    })
}

/// Inverse of [`analyze`].
pub fn synthesize<T: Scalar>(
    decomp: &Decomposition<T>,
    system: &WaveletSystem<T>,
) -> Result<Signal<T>, TransformError> {
    decomp.validate()?;
    let mut current = decomp.approx.clone();
    for d in &decomp.details {
        current = synthesize_once(&current, d, system)?;
    }
    Ok(Signal::new(current))
}
