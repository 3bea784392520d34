#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavemra::{Complex64, ScalingFilter64, TrigPolynomial64};

type Mat = [[Complex64; 2]; 2];

fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn adjoint(a: &Mat) -> Mat {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn random_unitary(rng: &mut impl Rng, complex: bool) -> Mat {
    let theta: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let (c, s) = (theta.cos(), theta.sin());
    if !complex {
        return [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ];
    }
    let mut phase = || {
        Complex64::from_polar(
            1.0,
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        )
    };
    let (p, q, r) = (phase(), phase(), phase());
    [[p * c, -(q * s)], [r * q.conj() * p * s, r * c]]
}

/// Random orthonormal scaling filter of length `2(stages + 1)` from a
/// paraunitary lattice `E(w) = U_K Λ(w) ⋯ Λ(w) U_0`, `Λ = diag(1, w)`, where
/// `U_0` is chosen so that `E(1)` has first row `(1, 1)/√2`, i.e. `Σα = √2`.
pub fn random_qmf_taps(
    rng: &mut impl Rng,
    stages: usize,
    complex: bool,
    offset: i64,
) -> TrigPolynomial64 {
    let upper: Vec<Mat> = (0..stages).map(|_| random_unitary(rng, complex)).collect();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let target: Mat = [
        [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
    ];
    let mut prod = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    for u in upper.iter().rev() {
        prod = mul(&prod, u);
    }
    // prod = U_K ⋯ U_1
    let u0 = mul(&adjoint(&prod), &target);

    // polyphase entries as polynomials in w, first row only is needed but the
    // delay acts on the second row, so carry both rows
    let zero = Complex64::new(0.0, 0.0);
    let mut e: [[Vec<Complex64>; 2]; 2] = [
        [vec![u0[0][0]], vec![u0[0][1]]],
        [vec![u0[1][0]], vec![u0[1][1]]],
    ];
    for u in &upper {
        // delay second row
        for poly in &mut e[1] {
            poly.insert(0, zero);
        }
        for poly in &mut e[0] {
            poly.push(zero);
        }
        let mut next: [[Vec<Complex64>; 2]; 2] = Default::default();
        for i in 0..2 {
            for col in 0..2 {
                next[i][col] = e[0][col]
                    .iter()
                    .zip(&e[1][col])
                    .map(|(a, b)| u[i][0] * a + u[i][1] * b)
                    .collect();
            }
        }
        e = next;
    }
    let mut taps = Vec::with_capacity(2 * e[0][0].len());
    for (even, odd) in e[0][0].iter().zip(&e[0][1]) {
        taps.push(*even);
        taps.push(*odd);
    }
    TrigPolynomial64::new(offset, taps).trimmed()
}

pub fn random_qmf(seed: u64, stages: usize, complex: bool) -> ScalingFilter64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = rng.gen_range(-3..=3);
    let taps = random_qmf_taps(&mut rng, stages, complex, offset);
    ScalingFilter64::from_taps(taps, 1e-10).expect("lattice filter is normalized")
}

pub fn random_signal(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// Largest entrywise modulus difference.
pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn energy(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}
