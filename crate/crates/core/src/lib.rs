//! Orthonormal wavelets from a multiresolution analysis.
//!
//! Starting from a scaling filter `α` (the two-scale coefficients of `φ`), this
//! crate builds the wavelet filter, verifies the orthonormality conditions on
//! grids (Smith–Barnwell identity, periodization of `|ĝ|²`, support measure),
//! realizes `φ` and `ψ` on dyadic grids with the cascade iteration, and runs the
//! periodic multi-level analysis/synthesis.
//!
//! Everything is generic over the real scalar ([`Scalar`]); `f64` aliases are
//! provided for the common case and `f32` aliases for reduced precision.
//!
//! ```
//! use wavemra::{derive_wavelet, analyze, synthesize, ScalingFilter64, Signal64};
//!
//! let system = derive_wavelet(&ScalingFilter64::daubechies4(), true).unwrap();
//! let signal = Signal64::from_real(&[1.0, 4.0, -2.0, 0.5, 3.0, 3.0, -1.0, 0.0]);
//! let decomposition = analyze(&signal, &system, 2).unwrap();
//! let back = synthesize(&decomposition, &system).unwrap();
//! assert!(back.values().iter().zip(signal.values()).all(|(a, b)| (a - b).norm() < 1e-12));
//! ```

// `!(x <= tol)` is deliberate throughout: NaN must fail every gate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cascade;
pub mod filters;
pub mod fourier;
pub mod io;
pub mod report;
pub mod scalar;
pub mod transform;
pub mod trig;

pub use num_complex::Complex;

pub use cascade::{
    cascade_scaling, cascade_taps, cross_gram, gram_report, realize_wavelet, translate_gram,
    two_scale_residual, CascadeError, CascadeOutput, SampledFunction,
};
pub use filters::{
    default_check_tol, derive_wavelet, eval_m0, modulate, smith_barnwell_check, unitarity_check,
    FilterError, Invariant, Provenance, ScalingFilter, WaveletSystem,
};
pub use fourier::{
    lemma1_periodization_check, phi_hat_product, psi_hat_product, sample_phi_hat, sample_psi_hat,
    support_check, support_measure, FourierError, FourierSamples,
};
pub use report::CheckReport;
pub use scalar::Scalar;
pub use transform::{
    analyze, analyze_once, synthesize, synthesize_once, Decomposition, Signal, TransformError,
};
pub use trig::TrigPolynomial;

pub type Complex64 = Complex<f64>;
pub type TrigPolynomial64 = TrigPolynomial<f64>;
pub type ScalingFilter64 = ScalingFilter<f64>;
pub type WaveletSystem64 = WaveletSystem<f64>;
pub type FourierSamples64 = FourierSamples<f64>;
pub type SampledFunction64 = SampledFunction<f64>;
pub type Signal64 = Signal<f64>;
pub type Decomposition64 = Decomposition<f64>;

pub type Complex32 = Complex<f32>;
pub type TrigPolynomial32 = TrigPolynomial<f32>;
pub type ScalingFilter32 = ScalingFilter<f32>;
pub type WaveletSystem32 = WaveletSystem<f32>;
pub type FourierSamples32 = FourierSamples<f32>;
pub type SampledFunction32 = SampledFunction<f32>;
pub type Signal32 = Signal<f32>;
pub type Decomposition32 = Decomposition<f32>;
