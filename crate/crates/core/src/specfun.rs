//! Complex special functions: Gamma, the B-function of homogeneous
//! harmonic extensions, Knapp-Stein normalization constants and the
//! K-spectrum eigenvalue formula.
//!
//! All evaluations are pointwise; near a pole they return
//! [`Error::Pole`] with a [`PoleReport`] instead of a huge value.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, PoleReport, Result};

/// Distance below which an argument counts as sitting on a pole.
pub const POLE_THRESHOLD: f64 = 1e-10;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Induction data `(mu, delta, n)` of a degenerate principal series
/// representation, with `N = 2n` and `m = n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub mu: Complex64,
    pub delta: i64,
    n: u32,
}

impl Parameter {
    pub fn new(mu: Complex64, delta: i64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        Ok(Self { mu, delta, n })
    }

    pub fn real(mu: f64, delta: i64, n: u32) -> Result<Self> {
        Self::new(Complex64::new(mu, 0.0), delta, n)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Complex dimension of the ambient space, `2n`.
    pub fn big_n(&self) -> u32 {
        2 * self.n
    }

    /// Rank of the Heisenberg factor, `n - 1`.
    pub fn m(&self) -> u32 {
        self.n - 1
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.delta)
    }

    /// The contragredient parameter `(-mu, -delta)`.
    pub fn opposite(&self) -> Self {
        Self { mu: -self.mu, delta: -self.delta, n: self.n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// `i^k` for any integer `k`, by lookup on `k mod 4`.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `(-i)^k`, again by table lookup.
pub fn minus_i_pow(k: i64) -> Complex64 {
    i_pow(-k)
}

/// Nearest pole of Gamma (a nonpositive integer) and the distance to it.
pub fn gamma_pole_report(z: Complex64) -> PoleReport {
    let k = z.re.round().min(0.0);
    let nearest = Complex64::new(k, 0.0);
    let distance = (z - nearest).norm();
    PoleReport { is_pole: distance < POLE_THRESHOLD, nearest_pole: nearest, distance }
}

fn lanczos(z: Complex64) -> Complex64 {
    // valid for Re z >= 0.5
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * x
}

/// Complex Gamma function.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    let report = gamma_pole_report(z);
    if report.is_pole {
        return Err(Error::Pole(report));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * lanczos(1.0 - z)))
    } else {
        Ok(lanczos(z))
    }
}

/// `1/Gamma(z)`, entire; exactly zero on the poles of Gamma.
pub fn reciprocal_gamma(z: Complex64) -> Complex64 {
    if gamma_pole_report(z).is_pole {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        (PI * z).sin() * lanczos(1.0 - z) / PI
    } else {
        1.0 / lanczos(z)
    }
}

/// Real Gamma on the positive axis and off the poles.
pub fn gamma_real(x: f64) -> Result<f64> {
    complex_gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}

fn pi_pow(e: Complex64) -> Complex64 {
    (e * PI.ln()).exp()
}

/// `B_{dim}(lambda, k) = pi^{-lambda-N} i^{-k} Gamma(N + (k+lambda)/2) / Gamma((k-lambda)/2)`
/// with `dim = 2N`: the scalar by which the conjugate Fourier transform acts on
/// the degree-`lambda` homogeneous extension of a degree-`k` harmonic polynomial.
pub fn b_function(lambda: Complex64, k: u32, dim: u32) -> Result<Complex64> {
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::InvalidParameter(format!("dimension {dim} must be even and positive")));
    }
    let big_n = f64::from(dim / 2);
    let kf = f64::from(k);
    let num_arg = big_n + (kf + lambda) / 2.0;
    let num = complex_gamma(num_arg)?;
    let den = reciprocal_gamma((kf - lambda) / 2.0);
    if den == Complex64::new(0.0, 0.0) {
        return Ok(den);
    }
    Ok(pi_pow(-lambda - big_n) * i_pow(-i64::from(k)) * num * den)
}

/// Knapp-Stein normalization constant `C_N(mu, delta)`; depends on `delta` only
/// through its parity.
pub fn ks_normalization(mu: Complex64, parity: Parity, big_n: u32) -> Result<Complex64> {
    if big_n == 0 || big_n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("N = {big_n} must be even and positive")));
    }
    let s = mu + f64::from(big_n);
    let prefactor = pi_pow(s - 0.5);
    match parity {
        Parity::Even => {
            let num = complex_gamma((1.0 - s) / 2.0)?;
            Ok(2.0 * prefactor * num * reciprocal_gamma(s / 2.0))
        }
        Parity::Odd => {
            let num = complex_gamma((2.0 - s) / 2.0)?;
            Ok(Complex64::new(0.0, -2.0) * prefactor * num * reciprocal_gamma((1.0 + s) / 2.0))
        }
    }
}

/// Whether `(l, l2)` labels a K-type of the series with character index `delta`.
pub fn admissible(delta: i64, l: u32, l2: u32) -> bool {
    let diff = i64::from(l) - i64::from(l2);
    l >= l2 && diff >= delta.abs() && (diff - delta).rem_euclid(2) == 0
}

/// Scalar by which the normalized intertwiner (composed with the Weyl
/// identification) acts on the K-type `V^{l,l2}`.
pub fn ks_eigenvalue(param: &Parameter, l: u32, l2: u32) -> Result<Complex64> {
    if !admissible(param.delta, l, l2) {
        return Err(Error::Admissibility { l, l2, delta: param.delta });
    }
    let k = l + l2;
    let half = (f64::from(k) + param.mu) / 2.0;
    let n = f64::from(param.n());
    let num = complex_gamma(half + n)?;
    let den = reciprocal_gamma((f64::from(k) - param.mu) / 2.0 + n);
    Ok(pi_pow(-param.mu) * minus_i_pow(-i64::from(k)) * num * den)
}
