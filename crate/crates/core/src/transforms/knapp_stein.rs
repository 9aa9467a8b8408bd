//! Monte Carlo evaluation of the Knapp-Stein integral over the unit sphere.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyharm::{eps_apply, j_apply, sphere_moment, SparsePoly};
use crate::specfun::{b_function, ks_normalization, Parameter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Uniform points on the sphere. Unbiased, but the variance is infinite
    /// once `mu + N >= 1/2`.
    Uniform,
    /// Samples the height `t = <X, u>` with density proportional to
    /// `|t|^{-(mu+N)}` and averages over the reflections `X -> -X` and
    /// `V -> -V`; finite variance on the whole strip.
    Adapted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub points: u64,
    pub seed: u64,
    pub scheme: Scheme,
    /// Largest number of points the estimator may draw.
    pub budget: u64,
    /// Relative standard error to reach, doubling `points` up to `budget`.
    pub target_rel_se: Option<f64>,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { points: 1_000_000, seed: 0xC0FFEE, scheme: Scheme::Adapted, budget: 100_000_000, target_rel_se: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadEstimate {
    pub value: Complex64,
    /// Standard error of the real and imaginary parts combined.
    pub std_error: f64,
    pub points: u64,
}

fn check_strip(param: &Parameter) -> Result<f64> {
    if param.mu.im != 0.0 {
        return Err(Error::InvalidParameter("sphere quadrature needs real mu".into()));
    }
    let s = param.mu.re + f64::from(param.big_n());
    if !(0.0 < s && s < 1.0) {
        return Err(Error::Divergence(format!("mu = {} is outside the strip (-N, 1-N)", param.mu.re)));
    }
    Ok(s)
}

fn unit(v: &[f64]) -> Result<Vec<f64>> {
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("zero vector".into()));
    }
    Ok(v.iter().map(|x| x / r).collect())
}

/// The vector `u` with `Re omega(X, Y) = <X, u>` in real coordinates.
pub fn kernel_direction(y: &[f64]) -> Result<Vec<f64>> {
    Ok(eps_apply(&j_apply(y)?))
}

/// Running estimate built from independent batches.
#[derive(Default)]
struct Batches {
    n: u64,
    weighted_sum: Complex64,
    /// Sum over batches of `n_b^2 Var(mean_b)`.
    weighted_var: f64,
}

impl Batches {
    fn push(&mut self, n: u64, mean: Complex64, var_of_mean: f64) {
        self.n += n;
        self.weighted_sum += mean * n as f64;
        self.weighted_var += (n as f64).powi(2) * var_of_mean;
    }

    fn mean(&self) -> Complex64 {
        self.weighted_sum / self.n as f64
    }

    fn std_error(&self) -> f64 {
        self.weighted_var.sqrt() / self.n as f64
    }
}

fn sq(z: Complex64) -> f64 {
    z.norm_sqr()
}

/// Uniform point on the unit sphere of `u`-perp, written into `v`.
fn perpendicular_direction(u: &[f64], v: &mut [f64], rng: &mut ChaCha8Rng) {
    for vi in v.iter_mut() {
        *vi = rng.sample(StandardNormal);
    }
    let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
    v.iter_mut().zip(u).for_each(|(vi, ui)| *vi -= dot * ui);
    let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter_mut().for_each(|vi| *vi /= r);
}

/// One batch of the uniform scheme: sample mean and its variance.
fn uniform_batch(h: &SparsePoly, u: &[f64], s: f64, odd: bool, points: u64, rng: &mut ChaCha8Rng) -> (Complex64, f64) {
    let d = u.len();
    let area = sphere_moment(&[], d);
    let mut x = vec![0.0; d];
    let (mut mean, mut m2) = (Complex64::default(), 0.0);
    for i in 1..=points {
        for xi in x.iter_mut() {
            *xi = rng.sample(StandardNormal);
        }
        let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        x.iter_mut().for_each(|xi| *xi /= r);
        let t: f64 = x.iter().zip(u).map(|(a, b)| a * b).sum();
        let mut k = t.abs().powf(-s);
        if odd && t < 0.0 {
            k = -k;
        }
        let value = h.eval(&x) * (k * area);
        let delta = value - mean;
        mean += delta / i as f64;
        m2 += delta.re * (value - mean).re + delta.im * (value - mean).im;
    }
    let var = if points > 1 { m2 / (points - 1) as f64 / points as f64 } else { f64::INFINITY };
    (mean, var)
}

/// One batch of the adapted scheme. The height `t = w^beta` has density
/// `(1 - s) t^{-s}` on `(0, 1)`; `w` is stratified into `points / 2` cells with
/// two draws each, which also yields the variance of the batch mean.
fn adapted_batch(h: &SparsePoly, u: &[f64], s: f64, odd: bool, points: u64, rng: &mut ChaCha8Rng) -> (Complex64, f64) {
    let d = u.len();
    let beta = 1.0 / (1.0 - s);
    let area = sphere_moment(&[], d - 1);
    let sign = if odd { -1.0 } else { 1.0 };
    let cells = (points / 2).max(1);
    let mut v = vec![0.0; d];
    let mut x = vec![0.0; d];
    let mut sample = |w: f64, rng: &mut ChaCha8Rng| {
        perpendicular_direction(u, &mut v, rng);
        let t = w.powf(beta);
        let c = (1.0 - t * t).max(0.0).sqrt();
        let mut sum = Complex64::default();
        for (fu, fv) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            for i in 0..d {
                x[i] = fu * t * u[i] + fv * c * v[i];
            }
            let value = h.eval(&x);
            sum += if fu < 0.0 { value * sign } else { value };
        }
        sum * (0.5 * beta * (1.0 - t * t).powf((d as f64 - 3.0) / 2.0) * area)
    };
    let (mut total, mut var) = (Complex64::default(), 0.0);
    for j in 0..cells {
        let a = sample((j as f64 + 1.0 - rng.gen::<f64>()) / cells as f64, rng);
        let b = sample((j as f64 + 1.0 - rng.gen::<f64>()) / cells as f64, rng);
        total += a + b;
        var += sq(a - b) / 4.0;
    }
    let n = cells as f64;
    (total / (2.0 * n), var / (n * n))
}

/// Estimates `int_S h(X) |Re omega(X, Y)|^{-mu-N} sgn(Re omega(X, Y))^delta dsigma(X)`
/// for real `mu` in `(-N, 1-N)`.
pub fn ks_integral(h: &SparsePoly, param: &Parameter, y: &[f64], quad: &QuadConfig) -> Result<QuadEstimate> {
    let s = check_strip(param)?;
    let d = 2 * param.big_n() as usize;
    if h.arity() != d || y.len() != d {
        return Err(Error::ArityMismatch { expected: d, got: if h.arity() != d { h.arity() } else { y.len() } });
    }
    if quad.points < 2 || quad.points > quad.budget {
        return Err(Error::Budget(format!("{} points requested, budget {}", quad.points, quad.budget)));
    }
    let u = unit(&kernel_direction(&unit(y)?)?)?;
    let odd = param.delta.rem_euclid(2) == 1;
    let mut rng = ChaCha8Rng::seed_from_u64(quad.seed);
    let mut acc = Batches::default();
    let mut batch = quad.points;
    loop {
        let (mean, var) = match quad.scheme {
            Scheme::Uniform => uniform_batch(h, &u, s, odd, batch, &mut rng),
            Scheme::Adapted => adapted_batch(h, &u, s, odd, batch, &mut rng),
        };
        acc.push(batch, mean, var);
        let se = acc.std_error();
        match quad.target_rel_se {
            Some(target) if se > target * acc.mean().norm() => {
                if acc.n + 2 > quad.budget {
                    return Err(Error::Budget(format!("standard error {se:e} above target after {} points", acc.n)));
                }
                batch = acc.n.min(quad.budget - acc.n);
            }
            _ => break,
        }
    }
    Ok(QuadEstimate { value: acc.mean(), std_error: acc.std_error(), points: acc.n })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizationReport {
    pub estimate: QuadEstimate,
    /// Closed form with `p` evaluated at `J eps Y`.
    pub expected_j_eps: Complex64,
    /// Closed form with `p` evaluated at `eps J Y`.
    pub expected_eps_j: Complex64,
    /// `|estimate - expected| / std_error` for each orientation.
    pub z_j_eps: f64,
    pub z_eps_j: f64,
    /// `|estimate + expected| / std_error`, the better orientation with the
    /// sign of the closed form reversed.
    pub z_negated: f64,
    /// `|estimate - expected| / |expected|` for the better orientation
    /// (absolute difference when the expected value vanishes).
    pub residual: f64,
    pub matched: &'static str,
}

/// Compares `ks_integral(p)` with `C_N(mu, delta) B(mu - N, k) p(twisted Y)` for
/// both orders of the twists and reports which one the quadrature supports.
pub fn verify_knapp_stein_normalization(
    p: &SparsePoly,
    param: &Parameter,
    y: &[f64],
    quad: &QuadConfig,
) -> Result<NormalizationReport> {
    let k = p.homogeneous_degree().ok_or_else(|| Error::InvalidParameter("p must be homogeneous".into()))?;
    let big_n = param.big_n();
    let estimate = ks_integral(p, param, y, quad)?;
    let y = unit(y)?;
    let factor = ks_normalization(param.mu, param.parity(), big_n)? * b_function(param.mu - f64::from(big_n), k, 2 * big_n)?;
    let expected_j_eps = factor * p.eval(&j_apply(&eps_apply(&y))?);
    let expected_eps_j = factor * p.eval(&eps_apply(&j_apply(&y)?));
    let z = |e: Complex64| (estimate.value - e).norm() / estimate.std_error.max(f64::MIN_POSITIVE);
    let (z_j_eps, z_eps_j) = (z(expected_j_eps), z(expected_eps_j));
    let z_negated = z(-expected_j_eps).min(z(-expected_eps_j));
    let (best, matched) = if z_j_eps <= z_eps_j { (expected_j_eps, "J eps") } else { (expected_eps_j, "eps J") };
    let diff = (estimate.value - best).norm();
    let residual = if best.norm() > 0.0 { diff / best.norm() } else { diff };
    Ok(NormalizationReport { estimate, expected_j_eps, expected_eps_j, z_j_eps, z_eps_j, z_negated, residual, matched })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyharm::harmonic_basis;

    fn quad(points: u64) -> QuadConfig {
        QuadConfig { points, ..QuadConfig::default() }
    }

    #[test]
    fn odd_kernel_kills_even_function() {
        let p = Parameter::real(-1.7, 1, 1).unwrap();
        let one = SparsePoly::one(4);
        let e = ks_integral(&one, &p, &[1.0, 0.0, 0.0, 0.0], &quad(10_000)).unwrap();
        assert_eq!(e.value, Complex64::default());
    }

    #[test]
    fn constant_case_matches_closed_form() {
        for &mu in &[-1.9, -1.7, -1.3] {
            let p = Parameter::real(mu, 0, 1).unwrap();
            let one = SparsePoly::one(4);
            let r = verify_knapp_stein_normalization(&one, &p, &[0.3, -0.2, 0.9, 0.1], &quad(200_000)).unwrap();
            assert!(r.z_j_eps < 4.0, "mu={mu}: {r:?}");
        }
    }

    #[test]
    fn strip_and_budget_enforced() {
        let one = SparsePoly::one(4);
        let p = Parameter::real(-0.5, 0, 1).unwrap();
        assert!(matches!(ks_integral(&one, &p, &[1.0, 0.0, 0.0, 0.0], &quad(10)), Err(Error::Divergence(_))));
        let p = Parameter::real(-1.5, 0, 1).unwrap();
        let q = QuadConfig { points: 10, budget: 5, ..QuadConfig::default() };
        assert!(matches!(ks_integral(&one, &p, &[1.0, 0.0, 0.0, 0.0], &q), Err(Error::Budget(_))));
        let q = QuadConfig { points: 100, budget: 400, target_rel_se: Some(1e-9), ..QuadConfig::default() };
        assert!(matches!(ks_integral(&one, &p, &[1.0, 0.0, 0.0, 0.0], &q), Err(Error::Budget(_))));
    }

    #[test]
    fn uniform_scheme_agrees_where_variance_is_finite() {
        // mu + N = 0.2 < 1/2: the uniform estimator has finite variance.
        let p = Parameter::real(-1.8, 0, 1).unwrap();
        let one = SparsePoly::one(4);
        let y = [0.0, 1.0, 0.0, 0.0];
        let a = ks_integral(&one, &p, &y, &QuadConfig { scheme: Scheme::Uniform, ..quad(400_000) }).unwrap();
        let b = ks_integral(&one, &p, &y, &quad(400_000)).unwrap();
        let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        assert!((a.value - b.value).norm() < 4.0 * se, "{a:?} {b:?}");
    }

    #[test]
    fn funk_hecke_values() {
        // lambda_k = 4 pi int_{-1}^{1} |t|^{-0.3} sgn(t)^k U_k(t)/(k+1) sqrt(1-t^2) dt,
        // evaluated with mpmath at mu = -1.7, N = 2.
        let table = [(1, 10.29824437), (2, -2.431337276), (3, -2.848450569)];
        let y = [0.3, -0.2, 0.9, 0.1];
        let u = unit(&kernel_direction(&unit(&y).unwrap()).unwrap()).unwrap();
        for (k, lambda) in table {
            let p = Parameter::real(-1.7, i64::from(k % 2), 1).unwrap();
            for h in harmonic_basis(4, k).unwrap().iter().take(2) {
                let e = ks_integral(h, &p, &y, &quad(400_000)).unwrap();
                let want = h.eval(&u) * lambda;
                assert!((e.value - want).norm() < 4.0 * e.std_error, "k={k}: {e:?} vs {want}");
            }
        }
    }
}
