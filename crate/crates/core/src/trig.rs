//! Finite Fourier series on the unit circle.

use num_complex::Complex;

use crate::scalar::{frac, unit_phase, Scalar};

/// `t(ξ) = Σ_k c_k e^{-2πikξ}` with `c_k` stored from index `offset`.
///
/// The same layout carries filter coefficient sequences: a scaling filter's
/// taps are the Fourier coefficients of `√2·m₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial<T> {
    offset: i64,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> TrigPolynomial<T> {
    pub fn new(offset: i64, coeffs: Vec<Complex<T>>) -> Self {
        Self { offset, coeffs }
    }

    pub fn from_real(offset: i64, coeffs: &[T]) -> Self {
        Self::new(
            offset,
            coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect(),
        )
    }

    /// The constant `c`.
    pub fn constant(c: Complex<T>) -> Self {
        Self::new(0, vec![c])
    }

    /// `c·e^{-2πiMξ}`.
    pub fn monomial(c: Complex<T>, shift: i64) -> Self {
        Self::new(shift, vec![c])
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index one past the last stored coefficient.
    pub fn end(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    /// Coefficient at absolute index `k`, zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex<T> {
        let rel = k - self.offset;
        if rel < 0 || rel >= self.coeffs.len() as i64 {
            Complex::new(T::zero(), T::zero())
        } else {
            self.coeffs[rel as usize]
        }
    }

    /// `(index, coefficient)` pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(j, &c)| (self.offset + j as i64, c))
    }

    /// Evaluates `t(ξ)`.
    ///
    /// `ξ` is reduced modulo 1 before any phase is formed and every phase
    /// `kξ` is reduced again, so `eval(ξ)` and `eval(ξ + 1)` agree bit for bit
    /// whenever `ξ + 1` is itself exact (dyadic grids, for instance).
    pub fn eval(&self, xi: T) -> Complex<T> {
        let r = frac(xi);
        self.iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (k, c)| {
                acc + c * unit_phase(frac(T::from_i64_lossy(k) * r))
            })
    }

    /// `Σ_k c_k`, i.e. `t(0)`.
    pub fn sum(&self) -> Complex<T> {
        self.coeffs
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc + c)
    }

    /// `Σ_k |c_k|²`.
    pub fn energy(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Drops exactly-zero coefficients at both ends. An all-zero sequence
    /// becomes empty.
    pub fn trimmed(&self) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let Some(first) = self.coeffs.iter().position(|&c| c != zero) else {
            return Self::new(self.offset, Vec::new());
        };
        let last = self.coeffs.iter().rposition(|&c| c != zero).unwrap();
        Self::new(
            self.offset + first as i64,
            self.coeffs[first..=last].to_vec(),
        )
    }

    /// Same coefficients re-indexed from `offset + by`.
    pub fn shifted(&self, by: i64) -> Self {
        Self::new(self.offset + by, self.coeffs.clone())
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self::new(self.offset, self.coeffs.iter().map(|&x| x * c).collect())
    }

    /// Whether every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == T::zero())
    }

    /// Coefficients converted to another scalar type.
    pub fn cast<U: Scalar>(&self) -> TrigPolynomial<U> {
        TrigPolynomial::new(
            self.offset,
            self.coeffs
                .iter()
                .map(|c| Complex::new(U::lit(c.re.as_f64()), U::lit(c.im.as_f64())))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn monomial_has_unit_modulus() {
        let nu = TrigPolynomial::monomial(c(0.0, 1.0), 3);
        for i in 0..64 {
            let v = nu.eval(i as f64 / 64.0);
            assert!((v.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn shift_monomial_values() {
        // e^{-2πiξ} at ξ = 1/4 is -i
        let nu = TrigPolynomial::monomial(c(1.0, 0.0), 1);
        let v = nu.eval(0.25);
        assert!((v - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn trimming_drops_zero_ends() {
        let t = TrigPolynomial::new(
            -2,
            vec![
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 0.0),
            ],
        );
        let tr = t.trimmed();
        assert_eq!(tr.offset(), -1);
        assert_eq!(tr.len(), 3);
        assert_eq!(tr.trimmed(), tr);

        let zero = TrigPolynomial::new(4, vec![c(0.0, 0.0); 3]).trimmed();
        assert!(zero.is_empty());
    }

    #[test]
    fn eval_is_periodic_on_dyadic_points() {
        let t = TrigPolynomial::new(
            -3,
            vec![c(0.3, -0.1), c(1.0, 0.2), c(-0.7, 0.0), c(0.05, 0.5)],
        );
        for n in -200..200 {
            let xi = n as f64 / 256.0;
            assert_eq!(t.eval(xi), t.eval(xi + 1.0));
        }
    }

    #[test]
    fn coeff_outside_range_is_zero() {
        let t = TrigPolynomial::from_real(2, &[1.0, 2.0]);
        assert_eq!(t.coeff(1), c(0.0, 0.0));
        assert_eq!(t.coeff(3), c(2.0, 0.0));
        assert_eq!(t.end(), 4);
    }
}
