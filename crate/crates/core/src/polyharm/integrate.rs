use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{b_function, complex_gamma, gamma_real, i_pow};

use super::harmonic::laplacian;
use super::poly::SparsePoly;
use super::twist::twist_eps;

/// Integral of `x^a` over the unit sphere of `R^d`. Missing trailing
/// exponents count as zero.
pub fn sphere_moment(exps: &[u32], d: usize) -> f64 {
    assert!(exps.len() <= d, "more exponents than dimensions");
    if exps.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let mut num = 1.0;
    let mut total = 0.0;
    for i in 0..d {
        let h = (f64::from(exps.get(i).copied().unwrap_or(0)) + 1.0) / 2.0;
        num *= gamma_real(h).expect("half-integer gamma");
        total += h;
    }
    2.0 * num / gamma_real(total).expect("positive gamma argument")
}

/// Integral of a polynomial over the unit sphere of `R^arity`.
pub fn sphere_integral(p: &SparsePoly) -> Complex64 {
    p.terms().map(|(e, c)| c * sphere_moment(e, p.arity())).sum()
}

/// The homogeneous function `p_lambda` with `p_lambda(r X) = r^lambda p(X)` for `|X| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousExtension {
    base: SparsePoly,
    exponent: Complex64,
}

impl HomogeneousExtension {
    pub fn new(base: SparsePoly, exponent: Complex64) -> Result<Self> {
        if !base.is_homogeneous() {
            return Err(Error::InvalidParameter("base polynomial must be homogeneous".into()));
        }
        Ok(Self { base, exponent })
    }

    pub fn base(&self) -> &SparsePoly {
        &self.base
    }

    pub fn exponent(&self) -> Complex64 {
        self.exponent
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r == 0.0 {
            return Err(Error::Singular("homogeneous extension at the origin".into()));
        }
        let unit: Vec<f64> = x.iter().map(|v| v / r).collect();
        Ok(self.base.eval(&unit) * Complex64::new(r, 0.0).powc(self.exponent))
    }
}

/// `int_0^inf r^{s-1} e^{-pi r^2} dr = pi^{-s/2} Gamma(s/2) / 2`.
fn radial_gaussian(s: Complex64) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(Error::Divergence(format!("radial integral with exponent {s} diverges at 0")));
    }
    let g = complex_gamma(s / 2.0)?;
    Ok(0.5 * (-s / 2.0 * PI.ln()).exp() * g)
}

/// Bilinear pairing `int p_lambda(x) q(x) e^{-pi |x|^2} dx`, in closed form.
pub fn pair_with_gaussian(pl: &HomogeneousExtension, q: &SparsePoly) -> Result<Complex64> {
    let d = pl.base.arity();
    if q.arity() != d {
        return Err(Error::ArityMismatch { expected: d, got: q.arity() });
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (deg, qj) in q.homogeneous_components() {
        let s = pl.exponent + f64::from(deg) + d as f64;
        let radial = radial_gaussian(s)?;
        total += sphere_integral(&(&pl.base * &qj)) * radial;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FepsCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

fn harmonic_degree(p: &SparsePoly, name: &str) -> Result<u32> {
    let k = p
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidParameter(format!("{name} must be nonzero and homogeneous")))?;
    if !laplacian(p).is_zero() {
        return Err(Error::InvalidParameter(format!("{name} is not harmonic")));
    }
    Ok(k)
}

/// Tests `F_eps p_lambda = B(lambda, k) p^eps_{-lambda-2N}` against the test
/// function `q e^{-pi r^2}`, moving the transform onto the Gaussian side where
/// `F_eps(q e^{-pi r^2}) = i^{-l} q^eps e^{-pi r^2}`.
pub fn verify_feps_identity(p: &SparsePoly, lambda: Complex64, q: &SparsePoly) -> Result<FepsCheck> {
    let d = p.arity();
    if d % 2 != 0 {
        return Err(Error::InvalidParameter(format!("dimension {d} must be even")));
    }
    if q.arity() != d {
        return Err(Error::ArityMismatch { expected: d, got: q.arity() });
    }
    let big_n = d / 2;
    let k = harmonic_degree(p, "p")?;
    let l = harmonic_degree(q, "q")?;

    let q_eps = twist_eps(q, big_n)?;
    let lhs = i_pow(-i64::from(l)) * pair_with_gaussian(&HomogeneousExtension::new(p.clone(), lambda)?, &q_eps)?;

    let p_eps = twist_eps(p, big_n)?;
    let dual = HomogeneousExtension::new(p_eps, -lambda - d as f64)?;
    let rhs = b_function(lambda, k, d as u32)? * pair_with_gaussian(&dual, q)?;

    let residual = (lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1.0);
    Ok(FepsCheck { lhs, rhs, residual })
}
