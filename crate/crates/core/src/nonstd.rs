//! The non-standard model on `L^2(C^{2m+1})`.
//!
//! Points of `C^{2m+1}` are `(s, X1, X2)` with `X1, X2` in `C^m`, realified as
//! `(Re s, Re X1, Re X2, Im s, Im X1, Im X2)`. A function `f` on `C^N`, `N = 2m + 2`,
//! restricts to the Heisenberg slice through `F(t, X1, X2) = f(1, X1, 2t, X2)`,
//! and `alpha_map` follows this with the partial transform in `(t, X2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyharm::SparsePoly;
use crate::specfun::Parameter;
use crate::transforms::{fourier_complex_partial, rel_l2, Direction, EvaluableField, GridField, Space};

/// A point `(s, X1, X2)` of `C^{2m+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergCoords {
    pub s: Complex64,
    pub x1: Vec<Complex64>,
    pub x2: Vec<Complex64>,
}

impl HeisenbergCoords {
    pub fn new(s: Complex64, x1: Vec<Complex64>, x2: Vec<Complex64>) -> Result<Self> {
        if x1.len() != x2.len() {
            return Err(Error::ArityMismatch { expected: x1.len(), got: x2.len() });
        }
        Ok(Self { s, x1, x2 })
    }

    pub fn m(&self) -> usize {
        self.x1.len()
    }

    fn complex_coords(&self) -> impl Iterator<Item = Complex64> + '_ {
        std::iter::once(self.s).chain(self.x1.iter().copied()).chain(self.x2.iter().copied())
    }

    pub fn to_real(&self) -> Vec<f64> {
        let re = self.complex_coords().map(|z| z.re);
        let im = self.complex_coords().map(|z| z.im);
        re.chain(im).collect()
    }

    pub fn from_real(y: &[f64]) -> Result<Self> {
        let m = heisenberg_m(y.len())?;
        let k = 2 * m + 1;
        let z = |j: usize| Complex64::new(y[j], y[k + j]);
        Ok(Self { s: z(0), x1: (1..=m).map(z).collect(), x2: (m + 1..k).map(z).collect() })
    }

    /// The point `(s, (2/s) X2, (s/2) X1)` at which the algebraic intertwiner
    /// samples its argument. The map is an involution.
    pub fn swap(&self) -> Result<Self> {
        if self.s == Complex64::default() {
            return Err(Error::Singular("the swap is undefined at s = 0".into()));
        }
        let a = 2.0 / self.s;
        let b = self.s / 2.0;
        Ok(Self { s: self.s, x1: self.x2.iter().map(|z| z * a).collect(), x2: self.x1.iter().map(|z| z * b).collect() })
    }
}

/// `m` for a realified point of `C^{2m+1}` with `dims` real coordinates.
pub fn heisenberg_m(dims: usize) -> Result<usize> {
    if dims < 2 || dims % 4 != 2 {
        return Err(Error::InvalidParameter(format!("{dims} is not the real dimension of C^(2m+1)")));
    }
    Ok((dims - 2) / 4)
}

/// Pullback of a field on `C^N` to the Heisenberg slice.
pub struct HeisenbergRestriction<'a> {
    f: &'a dyn EvaluableField,
    m: usize,
}

/// `F(t, X1, X2) = f(1, X1, 2t, X2)` for `f` on `C^{2m+2}`.
pub fn restrict_to_heisenberg(f: &dyn EvaluableField, m: usize) -> Result<HeisenbergRestriction<'_>> {
    let big_n = 2 * m + 2;
    if f.dims() != 2 * big_n {
        return Err(Error::ArityMismatch { expected: 2 * big_n, got: f.dims() });
    }
    if let Some(domain) = f.domain() {
        let (lo, hi) = domain[0];
        let (lo_im, hi_im) = domain[big_n];
        if !(lo <= 1.0 && 1.0 <= hi && lo_im <= 0.0 && 0.0 <= hi_im) {
            return Err(Error::Domain("the slice z_1 = 1 is outside the field's domain".into()));
        }
    }
    Ok(HeisenbergRestriction { f, m })
}

impl EvaluableField for HeisenbergRestriction<'_> {
    fn dims(&self) -> usize {
        4 * self.m + 2
    }

    fn eval(&self, y: &[f64]) -> Result<Complex64> {
        let m = self.m;
        let (n, big_n, k) = (m + 1, 2 * m + 2, 2 * m + 1);
        if y.len() != k * 2 {
            return Err(Error::ArityMismatch { expected: 2 * k, got: y.len() });
        }
        let mut x = vec![0.0; 2 * big_n];
        x[0] = 1.0;
        x[n] = 2.0 * y[0];
        x[big_n + n] = 2.0 * y[k];
        for j in 0..m {
            x[1 + j] = y[1 + j];
            x[big_n + 1 + j] = y[k + 1 + j];
            x[n + 1 + j] = y[1 + m + j];
            x[big_n + n + 1 + j] = y[k + 1 + m + j];
        }
        self.f.eval(&x)
    }
}

/// Points per axis and half-width of a uniform grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub m: usize,
    pub l: f64,
}

/// Samples `f` on a uniform grid, surfacing the first evaluation error.
pub fn sample_field(f: &dyn EvaluableField, grid: &GridConfig) -> Result<GridField> {
    let mut err = None;
    let g = GridField::sample(f.dims(), grid.m, grid.l, |x| {
        f.eval(x).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Complex64::default()
        })
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(g),
    }
}

/// `H(tau, X1, xi2) = int F(t, X1, X2) e^{-2 pi i Re(t tau + <X2, xi2>)} dX2 dt` on a grid.
pub fn alpha_map(f: &dyn EvaluableField, m: usize, grid: &GridConfig) -> Result<GridField> {
    let restricted = restrict_to_heisenberg(f, m)?;
    let g = sample_field(&restricted, grid)?;
    let coords: Vec<usize> = std::iter::once(0).chain(m + 1..2 * m + 1).collect();
    fourier_complex_partial(&g, &coords, Direction::Forward)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HfcReport {
    /// Relative residual of `H = c F_{C_2} f(1, X1, tau/2, xi2)` with `c = 1/4`.
    pub quarter: f64,
    /// The same with `c = 1/2`.
    pub half: f64,
}

/// Compares `alpha_map(f)` with the partial transform of `f` on the slice,
/// evaluated at `tau / 2`, for the two candidate constants.
pub fn check_hfc(f: &dyn EvaluableField, m: usize, grid: &GridConfig) -> Result<HfcReport> {
    let h = alpha_map(f, m, grid)?;
    let k = 2 * m + 1;
    // u = 2t lives on a grid twice as wide, so its dual nodes are tau / 2.
    let mut extents = vec![grid.l; 2 * k];
    extents[0] = 2.0 * grid.l;
    extents[k] = 2.0 * grid.l;
    let slice = SliceField { f, m };
    let mut err = None;
    let g = GridField::sample_with(grid.m, extents, vec![Space::Position; 2 * k], |y| {
        slice.eval(y).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Complex64::default()
        })
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let coords: Vec<usize> = std::iter::once(0).chain(m + 1..k).collect();
    let full = fourier_complex_partial(&g, &coords, Direction::Forward)?;
    let scaled = |c: f64| full.values().iter().map(|v| v * c).collect::<Vec<_>>();
    Ok(HfcReport { quarter: rel_l2(h.values(), &scaled(0.25)), half: rel_l2(h.values(), &scaled(0.5)) })
}

/// `(u, X1, X2) -> f(1, X1, u, X2)`.
struct SliceField<'a> {
    f: &'a dyn EvaluableField,
    m: usize,
}

impl SliceField<'_> {
    fn eval(&self, y: &[f64]) -> Result<Complex64> {
        let k = 2 * self.m + 1;
        let mut half = y.to_vec();
        half[0] /= 2.0;
        half[k] /= 2.0;
        HeisenbergRestriction { f: self.f, m: self.m }.eval(&half)
    }
}

/// `T H(s, X1, X2) = |s/2|^{-mu} [s]^{-delta} H(s, (2/s) X2, (s/2) X1)` with
/// `[s] = s / |s|`.
pub struct AlgebraicIntertwiner<'a> {
    h: &'a dyn EvaluableField,
    mu: Complex64,
    delta: i64,
}

pub fn algebraic_intertwiner<'a>(h: &'a dyn EvaluableField, param: &Parameter) -> Result<AlgebraicIntertwiner<'a>> {
    let expected = 4 * param.m() as usize + 2;
    if h.dims() != expected {
        return Err(Error::ArityMismatch { expected, got: h.dims() });
    }
    Ok(AlgebraicIntertwiner { h, mu: param.mu, delta: param.delta })
}

/// The scalar `|s/2|^{-mu} [s]^{-delta}`.
pub fn intertwiner_factor(s: Complex64, mu: Complex64, delta: i64) -> Result<Complex64> {
    let r = s.norm();
    if r == 0.0 {
        return Err(Error::Singular("the algebraic intertwiner is singular at s = 0".into()));
    }
    let phase = (s / r).powi(-i32::try_from(delta).map_err(|_| Error::InvalidParameter("delta out of range".into()))?);
    Ok((-mu * (r / 2.0).ln()).exp() * phase)
}

impl EvaluableField for AlgebraicIntertwiner<'_> {
    fn dims(&self) -> usize {
        self.h.dims()
    }

    fn eval(&self, y: &[f64]) -> Result<Complex64> {
        let p = HeisenbergCoords::from_real(y)?;
        let factor = intertwiner_factor(p.s, self.mu, self.delta)?;
        Ok(factor * self.h.eval(&p.swap()?.to_real())?)
    }
}

/// `H_+` or `H_-`, i.e. `(H +- T_{0,0} H) / 2`.
pub struct Projection<'a> {
    h: &'a dyn EvaluableField,
    sign: f64,
}

impl EvaluableField for Projection<'_> {
    fn dims(&self) -> usize {
        self.h.dims()
    }

    fn eval(&self, y: &[f64]) -> Result<Complex64> {
        let p = HeisenbergCoords::from_real(y)?;
        let swapped = self.h.eval(&p.swap()?.to_real())?;
        Ok((self.h.eval(y)? + swapped * self.sign) * 0.5)
    }
}

/// The eigen-projections `(H_+, H_-)` of `T_{0,0}`.
pub fn project_pm(h: &dyn EvaluableField) -> Result<(Projection<'_>, Projection<'_>)> {
    heisenberg_m(h.dims())?;
    Ok((Projection { h, sign: 1.0 }, Projection { h, sign: -1.0 }))
}

fn grid_points(dims: usize, grid: &GridConfig) -> Result<impl Iterator<Item = Vec<f64>>> {
    let len = grid.m.checked_pow(dims as u32).ok_or_else(|| Error::Budget("grid too large".into()))?;
    let h = 2.0 * grid.l / grid.m as f64;
    let (m, l) = (grid.m, grid.l);
    Ok((0..len).map(move |mut idx| {
        let mut x = vec![0.0; dims];
        for xi in x.iter_mut().rev() {
            *xi = -l + ((idx % m) as f64 + 0.5) * h;
            idx /= m;
        }
        x
    }))
}

/// Riemann-sum `L^2` norm of `f` over a grid, without storing the samples.
pub fn discrete_l2_norm(f: &dyn EvaluableField, grid: &GridConfig) -> Result<f64> {
    let cell = (2.0 * grid.l / grid.m as f64).powi(f.dims() as i32);
    let mut acc = 0.0;
    for x in grid_points(f.dims(), grid)? {
        acc += f.eval(&x)?.norm_sqr();
    }
    Ok((acc * cell).sqrt())
}

/// `| ||T H|| / ||H|| - 1 |` in the discrete norm.
pub fn check_l2_preservation(h: &dyn EvaluableField, param: &Parameter, grid: &GridConfig) -> Result<f64> {
    let t = algebraic_intertwiner(h, param)?;
    Ok((discrete_l2_norm(&t, grid)? / discrete_l2_norm(h, grid)? - 1.0).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    /// `max |H_+ + H_- - H| / max |H|`.
    pub completeness: f64,
    /// `max |T_{0,0} H_+ - H_+|` and `max |T_{0,0} H_- + H_-|`, relative to `max |H|`.
    pub eigen_plus: f64,
    pub eigen_minus: f64,
    /// `|<H_+, H_->| / ||H||^2` in the counting inner product.
    pub orthogonality: f64,
}

/// Checks the projections on the grid points together with their images under
/// the swap. That set is invariant under the swap, so the counting inner
/// product sees `T_{0,0}` as a unitary involution.
pub fn check_projections(h: &dyn EvaluableField, grid: &GridConfig) -> Result<ProjectionReport> {
    let (plus, minus) = project_pm(h)?;
    let t00 = Parameter::real(0.0, 0, heisenberg_m(h.dims())? as u32 + 1)?;
    let t_plus = algebraic_intertwiner(&plus, &t00)?;
    let t_minus = algebraic_intertwiner(&minus, &t00)?;
    let (mut scale, mut complete, mut ep, mut em) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut inner, mut norm) = (Complex64::default(), 0.0);
    for x in grid_points(h.dims(), grid)? {
        let image = HeisenbergCoords::from_real(&x)?.swap()?.to_real();
        for y in [&x, &image] {
            let (v, a, b) = (h.eval(y)?, plus.eval(y)?, minus.eval(y)?);
            scale = scale.max(v.norm());
            complete = complete.max((a + b - v).norm());
            ep = ep.max((t_plus.eval(y)? - a).norm());
            em = em.max((t_minus.eval(y)? + b).norm());
            inner += a * b.conj();
            norm += v.norm_sqr();
        }
    }
    Ok(ProjectionReport {
        completeness: complete / scale,
        eigen_plus: ep / scale,
        eigen_minus: em / scale,
        orthogonality: inner.norm() / norm,
    })
}

/// Grids for the two-path diagram check at `n = 1`.
///
/// The fine grid has `fine_m` points of spacing `2 fine_l / fine_m` in `z_2`;
/// its dual spacing is `1 / (2 fine_l)`. The `z_1` grid takes every `stride`-th
/// dual node (`stride` odd), `coarse_m` per axis, so both paths land on the same
/// `tau` nodes without interpolation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramConfig {
    pub fine_m: usize,
    pub fine_l: f64,
    pub stride: usize,
    pub coarse_m: usize,
    pub epsilons: Vec<f64>,
    /// Residuals are taken over `annulus[0] <= |tau| <= annulus[1]`.
    pub annulus: [f64; 2],
    pub tolerance: f64,
}

impl Default for DiagramConfig {
    fn default() -> Self {
        Self {
            fine_m: 256,
            fine_l: 16.0,
            stride: 3,
            coarse_m: 32,
            epsilons: vec![0.1, 0.05, 0.025, 0.0125],
            annulus: [0.5, 2.4],
            tolerance: 5e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramReport {
    pub n: u32,
    pub mu: f64,
    pub delta: i64,
    pub epsilons: Vec<f64>,
    /// Residuals with `T_{mu,delta}` as stated.
    pub residuals: Vec<f64>,
    /// Richardson limit `2 H(eps/2) - H(eps)` over the last pair of epsilons.
    pub extrapolated: f64,
    /// The same with the exponents reversed, i.e. `T_{-mu,-delta}`.
    pub residuals_reversed: Vec<f64>,
    pub extrapolated_reversed: f64,
    /// `"stated"` or `"reversed"`, whichever extrapolates closer to zero.
    pub matched: &'static str,
    /// Whether the matched residuals decrease as epsilon decreases.
    pub monotone: bool,
    pub pass: bool,
}

/// `f_eps(X) = |X|^{mu - N - k} p(X) e^{-2 pi eps |X|}`.
struct Regularized<'a> {
    p: &'a SparsePoly,
    power: f64,
    eps: f64,
}

impl Regularized<'_> {
    fn eval(&self, x: &[f64]) -> Complex64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.p.eval(x) * (r.powf(self.power) * (-2.0 * PI * self.eps * r).exp())
    }
}

impl EvaluableField for Regularized<'_> {
    fn dims(&self) -> usize {
        self.p.arity()
    }

    fn eval(&self, x: &[f64]) -> Result<Complex64> {
        Ok(Regularized::eval(self, x))
    }
}

/// Checks `p(e^{i theta} X) = e^{i delta theta} p(X)` at a fixed point.
fn check_circle_weight(p: &SparsePoly, delta: i64) -> Result<()> {
    let x = [0.37, -0.81, 0.52, 0.23];
    let (c, s) = (0.7f64.cos(), 0.7f64.sin());
    let rotated = [c * x[0] - s * x[2], c * x[1] - s * x[3], s * x[0] + c * x[2], s * x[1] + c * x[3]];
    let want = p.eval(&x) * Complex64::from_polar(1.0, 0.7 * delta as f64);
    let got = p.eval(&rotated);
    if (got - want).norm() > 1e-10 * (1.0 + want.norm()) {
        return Err(Error::InvalidParameter(format!("p does not transform by e^(i {delta} theta) under X -> e^(i theta) X")));
    }
    Ok(())
}

struct TwoPaths {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    taus: Vec<Complex64>,
}

/// Path A: `alpha(F_symp f)` through the transforms. Path B: `alpha(f)`, to which
/// the intertwiner factor is applied afterwards. Both restricted to the annulus.
fn two_paths(p: &SparsePoly, mu: f64, eps: f64, cfg: &DiagramConfig) -> Result<TwoPaths> {
    let k = p.homogeneous_degree().ok_or_else(|| Error::InvalidParameter("p must be homogeneous".into()))?;
    let f = Regularized { p, power: mu - 2.0 - f64::from(k), eps };
    let dxi = 1.0 / (2.0 * cfg.fine_l);
    let l1 = cfg.coarse_m as f64 * cfg.stride as f64 * dxi / 2.0;

    // I(z1) = F_{C_2} f(z1, 1), a Riemann sum over the fine z2 grid.
    let h2 = 2.0 * cfg.fine_l / cfg.fine_m as f64;
    let nodes: Vec<f64> = (0..cfg.fine_m).map(|t| -cfg.fine_l + (t as f64 + 0.5) * h2).collect();
    let phase: Vec<Complex64> = nodes.iter().map(|&x| Complex64::from_polar(h2 * h2, -2.0 * PI * x)).collect();
    let i_grid = GridField::sample(2, cfg.coarse_m, l1, |z1| {
        let mut acc = Complex64::default();
        let mut x = [z1[0], 0.0, z1[1], 0.0];
        for (re, ph) in nodes.iter().zip(&phase) {
            x[1] = *re;
            let mut line = Complex64::default();
            for im in &nodes {
                x[3] = *im;
                line += f.eval(&x);
            }
            acc += line * ph;
        }
        acc
    })?;
    // F_symp f(1, 2t) = F_{C^2} f(J(1, 2t)) = F_{C^2} f(-2t, 1) = (F_C I)(-2t).
    let i_hat = fourier_complex_partial(&i_grid, &[0], Direction::Forward)?;
    let reflected: Vec<Complex64> = i_hat.values().iter().rev().copied().collect();
    let half = i_hat.extents()[0] / 2.0;
    let g = GridField::new(cfg.coarse_m, vec![half; 2], vec![Space::Position; 2], reflected)?;
    let path_a = fourier_complex_partial(&g, &[0], Direction::Forward)?;

    let path_b = alpha_map(&f, 0, &GridConfig { m: cfg.fine_m, l: cfg.fine_l / 2.0 })?;

    let offset = (cfg.fine_m - 1 - cfg.stride * (cfg.coarse_m - 1)) / 2;
    let mut out = TwoPaths { a: Vec::new(), b: Vec::new(), taus: Vec::new() };
    for idx in 0..path_a.len() {
        let pa = path_a.point(idx);
        let tau = Complex64::new(pa[0], pa[1]);
        if tau.norm() < cfg.annulus[0] || tau.norm() > cfg.annulus[1] {
            continue;
        }
        let mi = path_a.multi_index(idx);
        let fine = path_b.index_of(&[offset + cfg.stride * mi[0], offset + cfg.stride * mi[1]]);
        let pb = path_b.point(fine);
        debug_assert!((pb[0] - pa[0]).abs() < 1e-9 && (pb[1] - pa[1]).abs() < 1e-9);
        out.a.push(path_a.values()[idx]);
        out.b.push(path_b.values()[fine]);
        out.taus.push(tau);
    }
    Ok(out)
}

fn residual_with(paths: &[TwoPaths], mu: f64, delta: i64, which: usize) -> Result<f64> {
    let p = &paths[which];
    let b = p
        .b
        .iter()
        .zip(&p.taus)
        .map(|(v, &tau)| Ok(intertwiner_factor(tau, Complex64::new(mu, 0.0), delta)? * v))
        .collect::<Result<Vec<_>>>()?;
    Ok(rel_l2(&b, &p.a))
}

fn extrapolated_with(paths: &[TwoPaths], mu: f64, delta: i64) -> Result<f64> {
    let (coarse, fine) = (&paths[paths.len() - 2], &paths[paths.len() - 1]);
    let richardson = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
        x.iter().zip(y).map(|(c, f)| f * 2.0 - c).collect()
    };
    let a = richardson(&coarse.a, &fine.a);
    let b_c: Vec<Complex64> = coarse.b.iter().zip(&coarse.taus).map(|(v, &t)| Ok(intertwiner_factor(t, Complex64::new(mu, 0.0), delta)? * v)).collect::<Result<_>>()?;
    let b_f: Vec<Complex64> = fine.b.iter().zip(&fine.taus).map(|(v, &t)| Ok(intertwiner_factor(t, Complex64::new(mu, 0.0), delta)? * v)).collect::<Result<_>>()?;
    Ok(rel_l2(&richardson(&b_c, &b_f), &a))
}

/// Two-path check of `alpha_{mu,delta} F_symp f = T alpha_{-mu,-delta} f` on the
/// regularized `f_eps`, for `n = 1` and `f` homogeneous of degree `mu - N` with
/// circle weight `delta`. Both signs of the exponents of `T` are reported.
pub fn verify_diagram(p: &SparsePoly, param: &Parameter, cfg: &DiagramConfig) -> Result<DiagramReport> {
    if param.n() != 1 {
        return Err(Error::Unsupported(format!("diagram check implemented for n = 1 only, got n = {}", param.n())));
    }
    if param.mu.im != 0.0 {
        return Err(Error::InvalidParameter("diagram check needs real mu".into()));
    }
    let mu = param.mu.re;
    let big_n = f64::from(param.big_n());
    if !(-big_n < mu && mu < 1.0 - big_n) {
        return Err(Error::Divergence(format!("mu = {mu} is outside the strip (-N, 1-N)")));
    }
    if p.arity() != 4 {
        return Err(Error::ArityMismatch { expected: 4, got: p.arity() });
    }
    check_circle_weight(p, param.delta)?;
    if cfg.stride % 2 == 0 || cfg.coarse_m % 2 != 0 || cfg.stride * cfg.coarse_m > cfg.fine_m {
        return Err(Error::InvalidParameter("need odd stride, even coarse_m and stride * coarse_m <= fine_m".into()));
    }
    if cfg.epsilons.len() < 2 || cfg.epsilons.windows(2).any(|w| (w[1] - w[0] / 2.0).abs() > 1e-12 * w[0]) {
        return Err(Error::InvalidParameter("epsilons must halve at each step".into()));
    }
    let paths = cfg.epsilons.iter().map(|&e| two_paths(p, mu, e, cfg)).collect::<Result<Vec<_>>>()?;
    if paths[0].a.is_empty() {
        return Err(Error::InvalidParameter("annulus contains no grid nodes".into()));
    }
    let series = |m: f64, d: i64| (0..paths.len()).map(|j| residual_with(&paths, m, d, j)).collect::<Result<Vec<_>>>();
    let residuals = series(mu, param.delta)?;
    let residuals_reversed = series(-mu, -param.delta)?;
    let extrapolated = extrapolated_with(&paths, mu, param.delta)?;
    let extrapolated_reversed = extrapolated_with(&paths, -mu, -param.delta)?;
    let (matched, best, limit) = if extrapolated <= extrapolated_reversed {
        ("stated", &residuals, extrapolated)
    } else {
        ("reversed", &residuals_reversed, extrapolated_reversed)
    };
    let monotone = best.windows(2).all(|w| w[1] <= w[0]);
    Ok(DiagramReport {
        n: param.n(),
        mu,
        delta: param.delta,
        epsilons: cfg.epsilons.clone(),
        pass: monotone && limit <= cfg.tolerance,
        residuals,
        extrapolated,
        residuals_reversed,
        extrapolated_reversed,
        matched,
        monotone,
    })
}
