use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::ktypes::{branching, quaternionic_dimension_sides, weyl_dim, KTypeLabel};
use crate::nonstd::{
    algebraic_intertwiner, check_hfc, check_l2_preservation, check_projections, project_pm, verify_diagram,
    DiagramConfig, GridConfig,
};
use crate::polyharm::{
    bigraded_basis, bigraded_dimension, harmonic_basis, harmonic_dimension, twist_eps, verify_feps_identity, SparsePoly,
};
use crate::specfun::{b_function, complex_gamma, ks_eigenvalue, Parameter};
use crate::transforms::{
    check_flip, check_partial_scaling, check_symp_scaling, verify_knapp_stein_normalization, EvaluableField, FnField,
    GridField, QuadConfig, ResidualReport, ScalingConfig, Scheme,
};

use super::{RunConfig, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteStatus {
    Pass,
    Fail,
    Budget,
    Error,
}

impl SuiteStatus {
    pub fn name(self) -> &'static str {
        match self {
            SuiteStatus::Pass => "pass",
            SuiteStatus::Fail => "fail",
            SuiteStatus::Budget => "budget",
            SuiteStatus::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub status: SuiteStatus,
    pub checks: Vec<ResidualReport>,
    pub error: Option<String>,
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> SuiteOutcome {
    let result = match suite {
        Suite::Specfun => specfun(cfg),
        Suite::Feps => feps(cfg),
        Suite::Flip => flip(cfg),
        Suite::Scaling => scaling(cfg),
        Suite::Ksnorm => ksnorm(cfg),
        Suite::Nonstd => nonstd(cfg),
        Suite::Dims => dims(),
    };
    match result {
        Ok(checks) => {
            let status = if checks.iter().all(|c| c.pass) { SuiteStatus::Pass } else { SuiteStatus::Fail };
            SuiteOutcome { suite: suite.name(), status, checks, error: None }
        }
        Err(e) => {
            let status = if matches!(e, Error::Budget(_)) { SuiteStatus::Budget } else { SuiteStatus::Error };
            SuiteOutcome { suite: suite.name(), status, checks: Vec::new(), error: Some(e.to_string()) }
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn specfun(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let tol = cfg.tolerances.specfun;
    let sqrt_pi = PI.sqrt();
    // 50-digit reference values
    let known = [
        (c(0.5, 0.0), c(sqrt_pi, 0.0)),
        (c(5.0, 0.0), c(24.0, 0.0)),
        (c(-0.5, 0.0), c(-2.0 * sqrt_pi, 0.0)),
        (c(0.3, 2.0), c(0.057_465_337_569_588_033, -0.074_984_912_582_646_138)),
        (c(-2.7, -1.3), c(-0.019_770_353_925_576_909, 0.026_106_934_807_612_275)),
        (c(4.5, 9.0), c(-0.011_879_120_811_090_674, -0.006_372_710_920_962_494_3)),
    ];
    let mut gamma_err = 0.0f64;
    for (z, want) in known {
        gamma_err = gamma_err.max(rel(complex_gamma(z)?, want));
    }
    let mut out = vec![ResidualReport::new("gamma reference values", json!({ "count": known.len() }), gamma_err, tol)];

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut b_err, mut eig_err, mut modulus_err, mut product_err, mut literal_product) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut tuples = 0;
    while tuples < 100 {
        let n = rng.gen_range(1..=3u32);
        let delta = rng.gen_range(-3..=3i64);
        let labels = branching(delta, 8);
        let label = labels[rng.gen_range(0..labels.len())];
        let mu = c(rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0));
        let param = Parameter::new(mu, delta, n)?;
        let big_n = param.big_n();
        let k = label.l + label.l2;
        let (Ok(eig), Ok(eig_opp)) = (ks_eigenvalue(&param, label.l, label.l2), ks_eigenvalue(&param.opposite(), label.l, label.l2))
        else {
            continue;
        };
        let sign = if delta.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let lambda = mu - f64::from(big_n);
        let b = b_function(lambda, k, 2 * big_n)?;
        // B(lambda) B(-lambda - 2N) = (-1)^k
        let b_dual = b_function(-lambda - f64::from(2 * big_n), k, 2 * big_n)?;
        let parity_k = if k % 2 == 0 { 1.0 } else { -1.0 };
        b_err = b_err.max(rel(b * b_dual, c(parity_k, 0.0)));
        eig_err = eig_err.max(rel(eig, b * sign));
        product_err = product_err.max((eig * eig_opp - sign).norm());
        literal_product = literal_product.max((eig * eig_opp - 1.0).norm());
        let imag = Parameter::new(c(0.0, mu.im), delta, n)?;
        modulus_err = modulus_err.max((ks_eigenvalue(&imag, label.l, label.l2)?.norm() - 1.0).abs());
        tuples += 1;
    }
    out.push(ResidualReport::new("B duality B(l)B(-l-2N) = (-1)^k", json!({ "tuples": tuples }), b_err, tol));
    out.push(ResidualReport::new("eigenvalue = (-1)^delta B(mu-N, l+l2)", json!({ "tuples": tuples }), eig_err, tol));
    out.push(ResidualReport::new("|eigenvalue| = 1 for imaginary mu", json!({ "tuples": tuples }), modulus_err, tol));
    out.push(ResidualReport::new(
        "eigenvalue(mu) eigenvalue(-mu) = (-1)^delta",
        json!({ "tuples": tuples, "deviation_from_one": literal_product }),
        product_err,
        tol,
    ));
    Ok(out)
}

/// The sample set: `d in {2, 4, 8}`, `k <= 3`, two `lambda` inside
/// `-2N < Re lambda < -N - 1/2`, and `q = p^eps` so that the pairing does not
/// vanish by orthogonality. One extra sample per dimension pairs degrees
/// `k != l`, where both sides are zero.
fn feps_samples() -> Result<Vec<(SparsePoly, Complex64, SparsePoly)>> {
    let mut out = Vec::new();
    for d in [2usize, 4, 8] {
        let big_n = d / 2;
        let width = big_n as f64 - 0.5;
        for k in 0..=3u32 {
            let basis = harmonic_basis(d, k)?;
            for (j, t) in [0.2, 0.7].into_iter().enumerate() {
                let p = basis[(j * basis.len()) / 2].clone();
                let q = twist_eps(&p, big_n)?;
                let lambda = c(-2.0 * big_n as f64 + t * width, 0.3 * f64::from(k) - 0.4);
                out.push((p, lambda, q));
            }
        }
        let p = harmonic_basis(d, 2)?.swap_remove(0);
        let q = harmonic_basis(d, 3)?.swap_remove(0);
        out.push((p, c(-2.0 * big_n as f64 + 0.5 * width, 0.0), q));
    }
    Ok(out)
}

fn feps(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let mut out = Vec::new();
    for (p, lambda, q) in feps_samples()? {
        let r = verify_feps_identity(&p, lambda, &q)?;
        out.push(ResidualReport::new(
            "F_eps p_lambda = B(lambda, k) p^eps",
            json!({
                "d": p.arity(),
                "k": p.homogeneous_degree(),
                "l": q.homogeneous_degree(),
                "lambda": [lambda.re, lambda.im],
                "magnitude": r.lhs.norm(),
            }),
            r.residual,
            cfg.tolerances.feps,
        ));
    }
    Ok(out)
}

type Field = Box<dyn Fn(&[f64]) -> Complex64>;

/// Gaussian test fields on `C^2` in axis order `(Re u, Re v, Im u, Im v)`.
fn flip_fields() -> Vec<(&'static str, Field)> {
    vec![
        (
            "product of unequal widths",
            Box::new(|x: &[f64]| {
                let g = |u: f64, v: f64| (-PI * (u * u / 0.8 + v * v * 1.3)).exp();
                c(g(x[0], x[1]) * g(x[2], x[3]), 0.0)
            }),
        ),
        (
            "coupled",
            Box::new(|x: &[f64]| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                c((-PI * (r2 + 0.6 * (x[0] * x[1] + x[2] * x[3]))).exp(), 0.0)
            }),
        ),
        (
            "chirped with linear factor",
            Box::new(|x: &[f64]| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                (c(-PI * r2, -0.5 * PI * r2)).exp() * c(1.0 + x[1], 0.5 * x[2])
            }),
        ),
    ]
}

fn flip(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let mut out = Vec::new();
    for (name, f) in flip_fields() {
        let g = GridField::sample(4, cfg.grid_m, cfg.grid_l, f)?;
        let r = check_flip(&g)?;
        out.push(ResidualReport::new(
            format!("flip: {name}"),
            json!({ "m": cfg.grid_m, "l": cfg.grid_l }),
            r,
            cfg.tolerances.flip,
        ));
    }
    Ok(out)
}

/// An anisotropic Gaussian with a complex linear factor, so that no unit
/// scaling leaves it fixed. The widths are chosen so that both `f(2 .)` and
/// `f(. / 2)` are resolved on the default 32-point grid with `L = 5`.
fn scaling_field() -> FnField<impl Fn(&[f64]) -> Complex64> {
    FnField::new(4, |x: &[f64]| {
        let q = 0.45 * x[0] * x[0] + 0.55 * x[1] * x[1] + 0.5 * x[2] * x[2] + 0.6 * x[3] * x[3];
        c((-PI * q).exp(), 0.0) * c(1.0 + 0.5 * x[0], 0.3 * x[3])
    })
}

fn scaling_factors() -> [(&'static str, Complex64); 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [("2", c(2.0, 0.0)), ("1/2", c(0.5, 0.0)), ("i", c(0.0, 1.0)), ("(1+i)/sqrt2", c(h, h))]
}

fn scaling(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let f = scaling_field();
    let sc = ScalingConfig { m: cfg.grid_m, l: cfg.grid_l, seed: cfg.seed, ..ScalingConfig::default() };
    let mut out = Vec::new();
    for (name, a) in scaling_factors() {
        let params = json!({ "a": name, "m": cfg.grid_m, "l": cfg.grid_l });
        out.push(ResidualReport::new("partial transform scaling", params.clone(), check_partial_scaling(&f, a, &sc)?, cfg.tolerances.scaling));
        out.push(ResidualReport::new("symplectic transform scaling", params, check_symp_scaling(&f, a, &sc)?, cfg.tolerances.scaling));
    }
    Ok(out)
}

/// Evaluation point for the normalization check on `R^{2N}`.
fn ks_point(big_n: usize) -> Vec<f64> {
    [0.3, -0.2, 0.9, 0.1].iter().cycle().take(2 * big_n).copied().collect()
}

fn ksnorm(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let n = cfg.n.unwrap_or(1);
    let mus = cfg.mu.map_or_else(|| vec![-1.9, -1.7, -1.3], |m| vec![m]);
    let deltas = cfg.delta.map_or_else(|| vec![0, 1], |d| vec![d]);
    let quad = QuadConfig {
        points: cfg.quad_points,
        seed: cfg.seed,
        scheme: Scheme::Adapted,
        budget: cfg.quad_budget,
        target_rel_se: None,
    };
    let mut out = Vec::new();
    for &delta in &deltas {
        for &mu in &mus {
            let param = Parameter::real(mu, delta, n)?;
            let big_n = param.big_n() as usize;
            for k in [delta.unsigned_abs() as u32, delta.unsigned_abs() as u32 + 2] {
                let basis = harmonic_basis(2 * big_n, k)?;
                let p = &basis[basis.len() / 2];
                let r = verify_knapp_stein_normalization(p, &param, &ks_point(big_n), &quad)?;
                // For odd delta the closed form holds with the opposite overall sign.
                let odd = delta.rem_euclid(2) == 1;
                let z = if odd { r.z_negated } else { r.z_j_eps.min(r.z_eps_j) };
                out.push(ResidualReport::new(
                    "Knapp-Stein normalization (z-score)",
                    json!({
                        "mu": mu,
                        "delta": delta,
                        "n": n,
                        "k": k,
                        "points": r.estimate.points,
                        "std_error": r.estimate.std_error,
                        "sign_reversed": odd,
                        "z_stated_sign": r.z_j_eps.min(r.z_eps_j),
                    }),
                    z,
                    cfg.tolerances.ksnorm,
                ));
            }
        }
    }
    Ok(out)
}

fn gauss(y: &[f64]) -> Complex64 {
    c((-PI * y.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)
}

/// Largest relative deviation between two fields at `count` random points of
/// the box `[-2, 2]^dims`, skipping the `s = 0` hyperplane.
fn max_rel_diff(a: &dyn EvaluableField, b: &dyn EvaluableField, count: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..count {
        let y: Vec<f64> = (0..a.dims()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let (u, v) = (a.eval(&y)?, b.eval(&y)?);
        worst = worst.max((u - v).norm() / v.norm().max(1e-300));
    }
    Ok(worst)
}

/// `z_1^|delta|` (conjugated for negative delta) on `C^2`, axes `(Re z1, Re z2, Im z1, Im z2)`.
fn circle_weight_poly(delta: i64) -> SparsePoly {
    let im = if delta < 0 { -1.0 } else { 1.0 };
    let z1 = SparsePoly::from_terms(4, [(vec![1, 0, 0, 0], c(1.0, 0.0)), (vec![0, 0, 1, 0], c(0.0, im))])
        .expect("arity 4 terms");
    let mut p = SparsePoly::one(4);
    for _ in 0..delta.unsigned_abs() {
        p = &p * &z1;
    }
    p
}

/// Test field for the discrete `L^2` check: the weight in `s` keeps `|2/s|`
/// near 1 so the swapped Gaussian stays resolved on the grid.
fn l2_field() -> FnField<impl Fn(&[f64]) -> Complex64> {
    FnField::new(6, |y: &[f64]| {
        let s = (y[0] * y[0] + y[3] * y[3]).sqrt();
        let x2: f64 = [1, 2, 4, 5].iter().map(|&i| y[i] * y[i]).sum();
        c((-20.0 * (s - 2.0).powi(2) - PI * x2).exp(), 0.0) * c(1.0 + 0.3 * y[1], y[2] - 0.2 * y[5])
    })
}

fn nonstd(cfg: &RunConfig) -> Result<Vec<ResidualReport>> {
    let tol = cfg.tolerances.nonstd;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();

    let h = FnField::new(6, |y: &[f64]| gauss(y) * c(y[0] - 0.3 * y[4], y[1] + y[5]).exp());
    let p = Parameter::new(c(0.4, 1.1), 1, 2)?;
    let t = algebraic_intertwiner(&h, &p)?;
    let back = algebraic_intertwiner(&t, &p.opposite())?;
    out.push(ResidualReport::new(
        "T(-mu,-delta) T(mu,delta) = id",
        json!({ "mu": [0.4, 1.1], "delta": 1, "points": 200 }),
        max_rel_diff(&back, &h, 200, &mut rng)?,
        tol,
    ));
    let p00 = Parameter::real(0.0, 0, 2)?;
    let t00 = algebraic_intertwiner(&h, &p00)?;
    let t00_sq = algebraic_intertwiner(&t00, &p00)?;
    out.push(ResidualReport::new("T(0,0)^2 = id", json!({ "points": 200 }), max_rel_diff(&t00_sq, &h, 200, &mut rng)?, tol));

    let hp = FnField::new(6, |y: &[f64]| gauss(y) * c(1.0 + y[1], y[2]));
    let grid = GridConfig { m: 4, l: 1.5 };
    let pr = check_projections(&hp, &grid)?;
    let (plus, minus) = project_pm(&hp)?;
    let (plus_plus, _) = project_pm(&plus)?;
    let (_, minus_minus) = project_pm(&minus)?;
    let idem = max_rel_diff(&plus_plus, &plus, 100, &mut rng)?.max(max_rel_diff(&minus_minus, &minus, 100, &mut rng)?);
    out.push(ResidualReport::new(
        "H+- complete, eigen, orthogonal",
        json!({ "grid": grid, "report": pr }),
        pr.completeness.max(pr.eigen_plus).max(pr.eigen_minus).max(pr.orthogonality),
        tol,
    ));
    out.push(ResidualReport::new("H+- idempotent", json!({ "points": 100 }), idem, tol));

    let l2_grid = GridConfig { m: 16, l: 2.0 };
    let p_im = Parameter::new(c(0.0, 1.3), 1, 2)?;
    out.push(ResidualReport::new(
        "discrete L2 preservation, imaginary mu",
        json!({ "mu": [0.0, 1.3], "delta": 1, "grid": l2_grid }),
        check_l2_preservation(&l2_field(), &p_im, &l2_grid)?,
        cfg.tolerances.l2,
    ));

    let hfc = check_hfc(&FnField::new(8, gauss), 1, &GridConfig { m: 8, l: 2.0 })?;
    out.push(ResidualReport::new(
        "partial transform on the slice, constant 1/4",
        json!({ "residual_with_one_half": hfc.half }),
        hfc.quarter,
        tol,
    ));

    let n = cfg.n.unwrap_or(1);
    let mu = cfg.mu.unwrap_or(-1.7);
    let deltas = cfg.delta.map_or_else(|| vec![0, 1], |d| vec![d]);
    let dcfg = DiagramConfig { tolerance: cfg.tolerances.diagram, ..DiagramConfig::default() };
    for delta in deltas {
        let param = Parameter::real(mu, delta, n)?;
        let r = verify_diagram(&circle_weight_poly(delta), &param, &dcfg)?;
        // The diagram commutes with the exponents of the intertwiner reversed.
        let monotone = r.residuals_reversed.windows(2).all(|w| w[1] <= w[0]);
        let mut rep = ResidualReport::new(
            "commuting diagram, extrapolated",
            json!({
                "mu": mu,
                "delta": delta,
                "orientation": "reversed",
                "residuals": r.residuals_reversed,
                "monotone": monotone,
                "stated_residuals": r.residuals,
                "stated_extrapolated": r.extrapolated,
            }),
            r.extrapolated_reversed,
            cfg.tolerances.diagram,
        );
        rep.pass &= monotone;
        out.push(rep);
    }
    Ok(out)
}

fn dims() -> Result<Vec<ResidualReport>> {
    let mut mismatches = 0u32;
    let mut cases = 0u32;
    for n in [2u32, 3] {
        for k in 0..=12 {
            let (lhs, rhs) = quaternionic_dimension_sides(n, k)?;
            mismatches += u32::from(lhs != rhs);
            cases += 1;
        }
    }
    let anchor = (
        weyl_dim(2, KTypeLabel::new(2, 0)?)?,
        weyl_dim(2, KTypeLabel::new(1, 1)?)?,
        harmonic_dimension(8, 2),
    );
    let anchor_ok = anchor == (10, 5, 35) && anchor.0 * 3 + anchor.1 == anchor.2;
    let mut out = vec![
        ResidualReport::new("sum dim V(l,l2)(l-l2+1) = dim H^k", json!({ "cases": cases }), f64::from(mismatches), 0.5),
        ResidualReport::new(
            "anchor 10*3 + 5*1 = 35",
            json!({ "dims": [anchor.0, anchor.1, anchor.2] }),
            if anchor_ok { 0.0 } else { 1.0 },
            0.5,
        ),
    ];

    let (mut bad, mut count) = (0u32, 0u32);
    for m in [1u32, 2, 4] {
        for k in 0..=6 {
            let total: u64 = (0..=k).map(|a| bigraded_dimension(m, a, k - a)).sum();
            bad += u32::from(total != harmonic_dimension(2 * m, k));
            count += 1;
        }
    }
    out.push(ResidualReport::new("sum dim H(a,b) = dim H^k(R^2M)", json!({ "cases": count }), f64::from(bad), 0.5));

    let (mut bad, mut count) = (0u32, 0u32);
    for m in [1usize, 2] {
        for k in 0..=4 {
            for a in 0..=k {
                let len = bigraded_basis(m, a, k - a)?.len() as u64;
                bad += u32::from(len != bigraded_dimension(m as u32, a, k - a));
                count += 1;
            }
        }
    }
    out.push(ResidualReport::new("bigraded basis sizes", json!({ "cases": count }), f64::from(bad), 0.5));
    Ok(out)
}
