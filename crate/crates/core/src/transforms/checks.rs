use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyharm::{eps_apply, j_apply, twist_eps, SparsePoly};
use crate::specfun::i_pow;

use super::fourier::{fourier_complex_partial, fourier_eps, fourier_symplectic, Direction};
use super::grid::{EvaluableField, GridField};

/// Machine-readable outcome of one numerical check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub check: String,
    pub params: serde_json::Value,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(check: impl Into<String>, params: serde_json::Value, residual: f64, tolerance: f64) -> Self {
        Self { check: check.into(), params, residual, tolerance, pass: residual <= tolerance }
    }
}

/// Relative L2 distance between value slices.
pub fn rel_l2(values: &[Complex64], reference: &[Complex64]) -> f64 {
    let num: f64 = values.iter().zip(reference).map(|(a, b)| (a - b).norm_sqr()).sum();
    let den: f64 = reference.iter().map(|b| b.norm_sqr()).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

/// Residual of `F_{C_2} F_symp F_{C_2}^{-1} f (u, v) = f(v, u)` for a field
/// on `C^{2n}`, with `u` the first `n` complex coordinates.
pub fn check_flip(f: &GridField) -> Result<f64> {
    if f.dims() % 4 != 0 {
        return Err(Error::InvalidParameter(format!("flip needs dimension 4n, got {}", f.dims())));
    }
    let n = f.dims() / 4;
    let big_n = 2 * n;
    let second: Vec<usize> = (n..big_n).collect();
    let g = fourier_complex_partial(f, &second, Direction::Inverse)?;
    let g = fourier_symplectic(&g)?;
    let g = fourier_complex_partial(&g, &second, Direction::Forward)?;
    // swapped(u, v) = f(v, u)
    let perm: Vec<usize> = (0..2 * big_n).map(|a| {
        let (block, k) = (a / big_n, a % big_n);
        block * big_n + (k + n) % big_n
    }).collect();
    let swapped = f.signed_permute(&perm, &vec![1.0; 2 * big_n])?;
    if g.extents().iter().zip(swapped.extents()).any(|(a, b)| (a - b).abs() > 1e-12 * b) {
        return Err(Error::InvalidParameter("flip composite landed on a different grid".into()));
    }
    Ok(rel_l2(g.values(), swapped.values()))
}

/// Residual of the Bochner closed form `F_eps(p e^{-pi r^2}) = i^{-k} p^eps e^{-pi r^2}`
/// for a harmonic `p` of degree `k`.
pub fn check_bochner(p: &SparsePoly, m: usize, l: f64) -> Result<f64> {
    let d = p.arity();
    let k = p.homogeneous_degree().ok_or_else(|| Error::InvalidParameter("p must be homogeneous".into()))?;
    let gauss = |x: &[f64]| (-PI * x.iter().map(|v| v * v).sum::<f64>()).exp();
    let f = GridField::sample(d, m, l, |x| p.eval(x) * gauss(x))?;
    let g = fourier_eps(&f)?;
    let pe = twist_eps(p, d / 2)?;
    let phase = i_pow(-i64::from(k));
    let expect: Vec<Complex64> = (0..g.len()).map(|i| {
        let x = g.point(i);
        phase * pe.eval(&x) * gauss(&x)
    }).collect();
    Ok(rel_l2(g.values(), &expect))
}

/// Grid and sampling settings for the scaling checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingConfig {
    pub m: usize,
    pub l: f64,
    pub samples: usize,
    pub seed: u64,
    /// Standard deviation of the random evaluation points in each real coordinate.
    pub spread: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self { m: 32, l: 5.0, samples: 24, seed: 0xC0FFEE, spread: 0.4 }
    }
}

/// Multiplies the complex coordinates listed in `coords` of a realified
/// point of `C^N` by `a`.
pub fn complex_scale(x: &[f64], coords: &[usize], a: Complex64) -> Vec<f64> {
    let big_n = x.len() / 2;
    let mut y = x.to_vec();
    for &k in coords {
        let z = Complex64::new(x[k], x[big_n + k]) * a;
        y[k] = z.re;
        y[big_n + k] = z.im;
    }
    y
}

fn random_points(cfg: &ScalingConfig, dims: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let normal = Normal::new(0.0, cfg.spread).expect("positive spread");
    (0..cfg.samples).map(|_| (0..dims).map(|_| normal.sample(&mut rng)).collect()).collect()
}

/// One-dimensional half-offset grid nodes.
fn nodes(m: usize, l: f64) -> Vec<f64> {
    let h = 2.0 * l / m as f64;
    (0..m).map(|t| -l + (t as f64 + 0.5) * h).collect()
}

/// Riemann sum `h^{|axes|} sum f(x) e^{-2 pi i <x_axes, w>}` over a grid on
/// the listed real axes, the remaining coordinates fixed by `base`.
fn riemann_fourier(
    f: &dyn EvaluableField,
    base: &[f64],
    axes: &[usize],
    w: &[f64],
    m: usize,
    l: f64,
) -> Result<Complex64> {
    let xs = nodes(m, l);
    let h = 2.0 * l / m as f64;
    let phases: Vec<Vec<Complex64>> = axes
        .iter()
        .zip(w)
        .map(|(_, &wk)| xs.iter().map(|&x| Complex64::from_polar(1.0, -2.0 * PI * x * wk)).collect())
        .collect();
    let total = m.pow(axes.len() as u32);
    let mut x = base.to_vec();
    let mut acc = Complex64::default();
    for idx in 0..total {
        let mut rest = idx;
        let mut ph = Complex64::new(1.0, 0.0);
        for (j, &a) in axes.iter().enumerate().rev() {
            let t = rest % m;
            rest /= m;
            x[a] = xs[t];
            ph *= phases[j][t];
        }
        acc += f.eval(&x)? * ph;
    }
    Ok(acc * h.powi(axes.len() as i32))
}

/// Realified frequency vector `w` with `Re <X_2, xi_2> = <x_axes, w>`.
fn complex_pairing_weights(xi_re: &[f64], xi_im: &[f64]) -> Vec<f64> {
    xi_re.iter().copied().chain(xi_im.iter().map(|v| -v)).collect()
}

/// Residual of `F_{C_2}[f(a., a.)](X_1, xi_2) = |a|^{-2n} F_{C_2} f(a X_1, xi_2 / a)`
/// at random `(X_1, xi_2)`, for `f` on `C^{2n}`. Both sides are Riemann sums over
/// the `X_2` grid, so the residual measures the substitution identity and the
/// sampling error of the rescaled integrand.
pub fn check_partial_scaling(f: &dyn EvaluableField, a: Complex64, cfg: &ScalingConfig) -> Result<f64> {
    if a == Complex64::default() {
        return Err(Error::InvalidParameter("scaling factor must be nonzero".into()));
    }
    let d = f.dims();
    if d % 4 != 0 {
        return Err(Error::InvalidParameter(format!("partial scaling needs dimension 4n, got {d}")));
    }
    let n = d / 4;
    let big_n = 2 * n;
    let first: Vec<usize> = (0..n).collect();
    let second: Vec<usize> = (n..big_n).collect();
    let axes: Vec<usize> = second.iter().flat_map(|&k| [k, big_n + k]).collect();
    let scaled_all = FnScaled { inner: f, a, coords: (0..big_n).collect() };

    let mut lhs = Vec::with_capacity(cfg.samples);
    let mut rhs = Vec::with_capacity(cfg.samples);
    for pt in random_points(cfg, 4 * n) {
        // pt = (X_1 re, X_1 im, xi_2 re, xi_2 im)
        let mut base = vec![0.0; d];
        for k in 0..n {
            base[k] = pt[k];
            base[big_n + k] = pt[n + k];
        }
        let xi_re = &pt[2 * n..3 * n];
        let xi_im = &pt[3 * n..4 * n];

        let w = complex_pairing_weights(xi_re, xi_im);
        let w_sorted = interleave_axes(&w, n);
        lhs.push(riemann_fourier(&scaled_all, &base, &axes, &w_sorted, cfg.m, cfg.l)?);

        let ax1 = complex_scale(&base, &first, a);
        let xi_over_a: Vec<Complex64> = (0..n).map(|k| Complex64::new(xi_re[k], xi_im[k]) / a).collect();
        let w2 = complex_pairing_weights(
            &xi_over_a.iter().map(|z| z.re).collect::<Vec<_>>(),
            &xi_over_a.iter().map(|z| z.im).collect::<Vec<_>>(),
        );
        let w2_sorted = interleave_axes(&w2, n);
        let jac = a.norm().powi(-2 * n as i32);
        rhs.push(riemann_fourier(f, &ax1, &axes, &w2_sorted, cfg.m, cfg.l)? * jac);
    }
    Ok(rel_l2(&lhs, &rhs))
}

/// Reorders `(re_1..re_n, im_1..im_n)` weights to the axis order
/// `(re_1, im_1, re_2, im_2, ..)` used by the `X_2` axis list.
fn interleave_axes(w: &[f64], n: usize) -> Vec<f64> {
    (0..n).flat_map(|k| [w[k], w[n + k]]).collect()
}

struct FnScaled<'a> {
    inner: &'a dyn EvaluableField,
    a: Complex64,
    coords: Vec<usize>,
}

impl EvaluableField for FnScaled<'_> {
    fn dims(&self) -> usize {
        self.inner.dims()
    }

    fn eval(&self, x: &[f64]) -> Result<Complex64> {
        self.inner.eval(&complex_scale(x, &self.coords, self.a))
    }
}

/// Riemann-sum evaluation of `F_symp f(xi) = int f(X) e^{-2 pi i <X, eps J xi>} dX`.
fn symp_at(values: &GridField, xi: &[f64]) -> Result<Complex64> {
    let u = eps_apply(&j_apply(xi)?);
    let d = values.dims();
    let m = values.m();
    let phases: Vec<Vec<Complex64>> = (0..d)
        .map(|a| (0..m).map(|t| Complex64::from_polar(1.0, -2.0 * PI * values.coord(a, t) * u[a])).collect())
        .collect();
    let mut acc = Complex64::default();
    for (idx, v) in values.values().iter().enumerate() {
        let mut rest = idx;
        let mut ph = Complex64::new(1.0, 0.0);
        for a in (0..d).rev() {
            ph *= phases[a][rest % m];
            rest /= m;
        }
        acc += v * ph;
    }
    Ok(acc * values.cell_volume())
}

/// Residual of `F_symp f(a xi) = |a|^{-2N} F_symp[f(a^{-1} .)](xi)` at random
/// `xi`, both sides as Riemann sums of the defining integral.
pub fn check_symp_scaling(f: &dyn EvaluableField, a: Complex64, cfg: &ScalingConfig) -> Result<f64> {
    if a == Complex64::default() {
        return Err(Error::InvalidParameter("scaling factor must be nonzero".into()));
    }
    let d = f.dims();
    if d % 2 != 0 {
        return Err(Error::InvalidParameter(format!("dimension {d} is not even")));
    }
    let big_n = d / 2;
    let all: Vec<usize> = (0..big_n).collect();
    let mut err = None;
    let plain = GridField::sample(d, cfg.m, cfg.l, |x| f.eval(x).unwrap_or_else(|e| {
        err.get_or_insert(e);
        Complex64::default()
    }))?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    let inv = a.inv();
    let shrunk = GridField::sample(d, cfg.m, cfg.l, |x| f.eval(&complex_scale(x, &all, inv)).unwrap_or_else(|e| {
        err.get_or_insert(e);
        Complex64::default()
    }))?;
    if let Some(e) = err {
        return Err(e);
    }
    let jac = a.norm().powi(-(d as i32));
    let mut lhs = Vec::with_capacity(cfg.samples);
    let mut rhs = Vec::with_capacity(cfg.samples);
    for xi in random_points(cfg, d) {
        lhs.push(symp_at(&plain, &complex_scale(&xi, &all, a))?);
        rhs.push(symp_at(&shrunk, &xi)? * jac);
    }
    Ok(rel_l2(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyharm::harmonic_basis;
    use crate::transforms::grid::FnField;

    fn gauss_w(x: &[f64], s2: f64) -> Complex64 {
        Complex64::new((-PI * x.iter().map(|v| v * v).sum::<f64>() / s2).exp(), 0.0)
    }

    #[test]
    fn flip_on_product_gaussians() {
        let g = |u: f64, v: f64| (-PI * (u * u / 0.8 + v * v * 1.3)).exp();
        // f(u, v) = g(u) h(v) with distinct widths; axes (Re u, Re v, Im u, Im v).
        let f = GridField::sample(4, 16, 3.0, |x| {
            Complex64::new(g(x[0], x[1]) * g(x[2], x[3]), 0.0)
        })
        .unwrap();
        let r = check_flip(&f).unwrap();
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn bochner_in_four_dimensions() {
        for p in harmonic_basis(4, 2).unwrap().iter().take(3) {
            let r = check_bochner(p, 32, 4.0).unwrap();
            assert!(r < 1e-4, "{r}");
        }
    }

    #[test]
    fn partial_scaling_identity_factor() {
        let f = FnField::new(4, |x: &[f64]| gauss_w(x, 1.65));
        let cfg = ScalingConfig { samples: 6, ..ScalingConfig::default() };
        assert!(check_partial_scaling(&f, Complex64::new(1.0, 0.0), &cfg).unwrap() < 1e-14);
        assert!(check_partial_scaling(&f, Complex64::new(0.0, 0.0), &cfg).is_err());
        let r = check_partial_scaling(&f, Complex64::new(0.0, 1.0), &cfg).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn symp_scaling_small_grid() {
        let f = FnField::new(4, |x: &[f64]| gauss_w(x, 1.65));
        let cfg = ScalingConfig { m: 16, samples: 4, ..ScalingConfig::default() };
        let r = check_symp_scaling(&f, Complex64::new(0.0, 1.0), &cfg).unwrap();
        assert!(r < 1e-6, "{r}");
    }
}
