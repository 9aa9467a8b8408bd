//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line for
//! its literal statement. Where the literal statement is false, the corrected
//! relation is asserted instead, so the test fails only on a real regression.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sympseries::cli;
use sympseries::ktypes::{branching, quaternionic_dimension_sides, weyl_dim, KTypeLabel};
use sympseries::nonstd::{
    algebraic_intertwiner, check_l2_preservation, check_projections, project_pm, verify_diagram, DiagramConfig,
    GridConfig,
};
use sympseries::polyharm::{
    bigraded_dimension, harmonic_basis, harmonic_dimension, twist_eps, verify_feps_identity, SparsePoly,
};
use sympseries::specfun::{b_function, ks_eigenvalue};
use sympseries::transforms::{
    check_flip, check_partial_scaling, check_symp_scaling, verify_knapp_stein_normalization, EvaluableField, FnField,
    GridField, QuadConfig, ScalingConfig,
};
use sympseries::Parameter;

const SEED: u64 = 0xC0FFEE;

// Tolerances and budgets of the criteria.
const FEPS_TOL: f64 = 1e-10;
const FEPS_TIME: Duration = Duration::from_secs(10);
const KS_POINTS: u64 = 10_000_000;
const KS_SIGMAS: f64 = 3.0;
const KS_TIME: Duration = Duration::from_secs(120);
const FLIP_TOL: f64 = 1e-3;
const FLIP_TIME: Duration = Duration::from_secs(60);
const SCALING_TOL: f64 = 1e-3;
const SPECTRUM_TOL: f64 = 1e-12;
const EXACT_TOL: f64 = 1e-13;
const PROJECTION_TOL: f64 = 1e-10;
const L2_TOL: f64 = 1e-6;
const DIAGRAM_TOL: f64 = 5e-2;
const DIAGRAM_TIME: Duration = Duration::from_secs(300);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn line(n: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    // Written past the test harness capture so the lines land in the log.
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n}: {verdict}  {detail}");
    let _ = out.flush();
}

fn criterion_1() -> bool {
    let start = Instant::now();
    let (mut worst, mut count, mut nonzero) = (0.0f64, 0, 0);
    for d in [2usize, 4, 8] {
        let big_n = d / 2;
        let lo = -2.0 * big_n as f64;
        let hi = -(big_n as f64) - 0.5;
        for k in 0..=3u32 {
            let basis = harmonic_basis(d, k).unwrap();
            for (j, t) in [0.15, 0.5, 0.85].into_iter().enumerate() {
                let p = &basis[(j * basis.len()) / 3];
                let lambda = c(lo + t * (hi - lo), 0.25 * f64::from(k) - 0.3);
                let q = twist_eps(p, big_n).unwrap();
                let r = verify_feps_identity(p, lambda, &q).unwrap();
                worst = worst.max(r.residual);
                count += 1;
                nonzero += usize::from(r.lhs.norm() > 1e-3);
            }
            // a different degree on the test side: both sides vanish
            let l = 3 - k;
            if l != k {
                let q = harmonic_basis(d, l).unwrap().swap_remove(0);
                let r = verify_feps_identity(&basis[0], c(lo + 0.4 * (hi - lo), 0.1), &q).unwrap();
                worst = worst.max(r.residual);
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = count >= 20 && worst <= FEPS_TOL && elapsed < FEPS_TIME;
    line(1, pass, &format!("{count} samples ({nonzero} non-vanishing), max residual {worst:.2e}, {elapsed:.1?}"));
    pass
}

fn criterion_2() -> bool {
    let start = Instant::now();
    let y = [0.3, -0.2, 0.9, 0.1];
    let quad = QuadConfig { points: KS_POINTS, seed: SEED, budget: KS_POINTS, ..QuadConfig::default() };
    let (mut worst_stated, mut worst_corrected) = (0.0f64, 0.0f64);
    let mut odd_stated = f64::INFINITY;
    for delta in [0i64, 1] {
        for mu in [-1.9, -1.7, -1.3] {
            let param = Parameter::real(mu, delta, 1).unwrap();
            for k in [delta as u32, delta as u32 + 2] {
                let basis = harmonic_basis(4, k).unwrap();
                let r = verify_knapp_stein_normalization(&basis[basis.len() / 2], &param, &y, &quad).unwrap();
                assert_eq!(r.estimate.points, KS_POINTS);
                let stated = r.z_j_eps.min(r.z_eps_j);
                worst_stated = worst_stated.max(stated);
                let corrected = if delta == 1 { r.z_negated } else { stated };
                worst_corrected = worst_corrected.max(corrected);
                if delta == 1 {
                    odd_stated = odd_stated.min(stated);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_stated <= KS_SIGMAS && elapsed < KS_TIME;
    line(
        2,
        pass,
        &format!(
            "max z with the stated C_N {worst_stated:.3} (odd delta min {odd_stated:.3e}); \
             with the sign of C_N reversed for odd delta max z {worst_corrected:.3}; {elapsed:.1?}"
        ),
    );
    worst_corrected <= KS_SIGMAS && elapsed < KS_TIME
}

fn criterion_3() -> bool {
    let start = Instant::now();
    let widths: [(f64, f64); 3] = [(0.8, 1.3), (1.0, 1.0), (1.5, 0.6)];
    let mut worst = 0.0f64;
    let mut count = 0;
    for &(a, b) in &widths {
        for (cross, chirp) in [(0.0, 0.0), (0.5, 0.0), (0.3, 0.4)] {
            // axes (Re u, Re v, Im u, Im v)
            let f = GridField::sample(4, 32, 5.0, |x| {
                let q = (x[0] * x[0] + x[2] * x[2]) / a + (x[1] * x[1] + x[3] * x[3]) * b + cross * (x[0] * x[1] + x[2] * x[3]);
                c(-PI * q, -PI * chirp * q).exp() * c(1.0 + 0.4 * x[0], 0.3 * x[3])
            })
            .unwrap();
            worst = worst.max(check_flip(&f).unwrap());
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= FLIP_TOL && elapsed < FLIP_TIME;
    line(3, pass, &format!("{count} Gaussians on a 32^4 grid, L = 5, max residual {worst:.2e}, {elapsed:.1?}"));
    pass
}

fn criterion_4() -> bool {
    let f = FnField::new(4, |x: &[f64]| {
        let q = 0.45 * x[0] * x[0] + 0.55 * x[1] * x[1] + 0.5 * x[2] * x[2] + 0.6 * x[3] * x[3];
        c((-PI * q).exp(), 0.0) * c(1.0 + 0.5 * x[0], 0.3 * x[3])
    });
    let cfg = ScalingConfig { m: 32, l: 5.0, seed: SEED, ..ScalingConfig::default() };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (mut partial, mut symp) = (0.0f64, 0.0f64);
    for a in [c(2.0, 0.0), c(0.5, 0.0), c(0.0, 1.0), c(h, h)] {
        partial = partial.max(check_partial_scaling(&f, a, &cfg).unwrap());
        symp = symp.max(check_symp_scaling(&f, a, &cfg).unwrap());
    }
    let pass = partial <= SCALING_TOL && symp <= SCALING_TOL;
    line(4, pass, &format!("a in {{2, 1/2, i, (1+i)/sqrt2}}: partial {partial:.2e}, symplectic {symp:.2e}"));
    pass
}

fn criterion_5() -> bool {
    let mut bad = Vec::new();
    for n in [2u32, 3] {
        for k in 0..=12 {
            let (lhs, rhs) = quaternionic_dimension_sides(n, k).unwrap();
            if lhs != rhs {
                bad.push(format!("(n={n}, k={k}): {lhs} != {rhs}"));
            }
        }
    }
    let v20 = weyl_dim(2, KTypeLabel::new(2, 0).unwrap()).unwrap();
    let v11 = weyl_dim(2, KTypeLabel::new(1, 1).unwrap()).unwrap();
    let anchor = (v20, v11, harmonic_dimension(8, 2));
    if anchor != (10, 5, 35) || v20 * 3 + v11 != 35 {
        bad.push(format!("anchor {anchor:?}"));
    }
    for m in [1u32, 2, 4] {
        for k in 0..=6 {
            let total: u64 = (0..=k).map(|a| bigraded_dimension(m, a, k - a)).sum();
            if total != harmonic_dimension(2 * m, k) {
                bad.push(format!("bigraded (M={m}, k={k})"));
            }
        }
    }
    let pass = bad.is_empty();
    line(5, pass, &format!("anchor {v20}*3 + {v11}*1 = {}; mismatches {bad:?}", anchor.2));
    pass
}

fn criterion_6() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut identity, mut modulus, mut literal, mut signed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut tuples = 0;
    while tuples < 100 {
        let n = rng.gen_range(1..=3u32);
        let delta = rng.gen_range(-3..=3i64);
        let labels = branching(delta, 10);
        let label = labels[rng.gen_range(0..labels.len())];
        let mu = c(rng.gen_range(-4.0..4.0), rng.gen_range(-3.0..3.0));
        let param = Parameter::new(mu, delta, n).unwrap();
        let (Ok(eig), Ok(opp)) = (
            ks_eigenvalue(&param, label.l, label.l2),
            ks_eigenvalue(&param.opposite(), label.l, label.l2),
        ) else {
            continue;
        };
        let big_n = param.big_n();
        let sign = if delta.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let b = b_function(mu - f64::from(big_n), label.l + label.l2, 2 * big_n).unwrap();
        identity = identity.max((eig - b * sign).norm() / b.norm());
        let imag = Parameter::new(c(0.0, mu.im), delta, n).unwrap();
        modulus = modulus.max((ks_eigenvalue(&imag, label.l, label.l2).unwrap().norm() - 1.0).abs());
        literal = literal.max((eig * opp - 1.0).norm());
        signed = signed.max((eig * opp - sign).norm());
        tuples += 1;
    }
    let pass = identity <= SPECTRUM_TOL && modulus <= SPECTRUM_TOL && literal <= SPECTRUM_TOL;
    line(
        6,
        pass,
        &format!(
            "{tuples} tuples: identity {identity:.2e}, |eig| - 1 {modulus:.2e}, \
             eig(mu) eig(-mu) - 1 up to {literal:.2e}; eig(mu) eig(-mu) - (-1)^delta {signed:.2e}"
        ),
    );
    identity <= SPECTRUM_TOL && modulus <= SPECTRUM_TOL && signed <= SPECTRUM_TOL
}

fn gauss(y: &[f64]) -> Complex64 {
    c((-PI * y.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)
}

fn max_rel(a: &dyn EvaluableField, b: &dyn EvaluableField, rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..300 {
        let y: Vec<f64> = (0..a.dims()).map(|_| rng.gen_range(-2.5..2.5)).collect();
        let (u, v) = (a.eval(&y).unwrap(), b.eval(&y).unwrap());
        worst = worst.max((u - v).norm() / v.norm());
    }
    worst
}

fn criterion_7() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let h = FnField::new(6, |y: &[f64]| gauss(y) * c(y[0] - 0.3 * y[4], y[1] + y[5]).exp());
    let mut inverse = 0.0f64;
    for (mu, delta) in [(c(0.4, 1.1), 1), (c(-1.7, 0.0), 0), (c(0.0, 2.3), -2)] {
        let p = Parameter::new(mu, delta, 2).unwrap();
        let t = algebraic_intertwiner(&h, &p).unwrap();
        let back = algebraic_intertwiner(&t, &p.opposite()).unwrap();
        inverse = inverse.max(max_rel(&back, &h, &mut rng));
    }
    let p00 = Parameter::real(0.0, 0, 2).unwrap();
    let t00 = algebraic_intertwiner(&h, &p00).unwrap();
    let square = max_rel(&algebraic_intertwiner(&t00, &p00).unwrap(), &h, &mut rng);

    let hp = FnField::new(6, |y: &[f64]| gauss(y) * c(1.0 + y[1], y[2] - 0.5 * y[3]));
    let pr = check_projections(&hp, &GridConfig { m: 4, l: 1.5 }).unwrap();
    let (plus, minus) = project_pm(&hp).unwrap();
    let idem = max_rel(&project_pm(&plus).unwrap().0, &plus, &mut rng)
        .max(max_rel(&project_pm(&minus).unwrap().1, &minus, &mut rng));
    let proj = pr.completeness.max(pr.eigen_plus).max(pr.eigen_minus).max(pr.orthogonality).max(idem);

    let field = FnField::new(6, |y: &[f64]| {
        let s = (y[0] * y[0] + y[3] * y[3]).sqrt();
        let x2: f64 = [1, 2, 4, 5].iter().map(|&i| y[i] * y[i]).sum();
        c((-20.0 * (s - 2.0).powi(2) - PI * x2).exp(), 0.0) * c(1.0 + 0.3 * y[1], y[2] - 0.2 * y[5])
    });
    let grid = GridConfig { m: 16, l: 2.0 };
    let mut l2 = 0.0f64;
    for (t, delta) in [(1.3, 1), (-0.6, 0)] {
        let p = Parameter::new(c(0.0, t), delta, 2).unwrap();
        l2 = l2.max(check_l2_preservation(&field, &p, &grid).unwrap());
    }
    let pass = inverse <= EXACT_TOL && square <= EXACT_TOL && proj <= PROJECTION_TOL && l2 <= L2_TOL;
    line(
        7,
        pass,
        &format!("T^-1 T - id {inverse:.2e}, T00^2 - id {square:.2e}, projections {proj:.2e}, L2 (m=1, M=16) {l2:.2e}"),
    );
    pass
}

fn criterion_8() -> bool {
    let start = Instant::now();
    let cfg = DiagramConfig { tolerance: DIAGRAM_TOL, ..DiagramConfig::default() };
    let z1 = SparsePoly::from_terms(4, [(vec![1, 0, 0, 0], c(1.0, 0.0)), (vec![0, 0, 1, 0], c(0.0, 1.0))]).unwrap();
    let (mut stated_ok, mut reversed_ok) = (true, true);
    let mut parts = Vec::new();
    for (delta, p) in [(0i64, SparsePoly::one(4)), (1, z1)] {
        let r = verify_diagram(&p, &Parameter::real(-1.7, delta, 1).unwrap(), &cfg).unwrap();
        let mono = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0]);
        stated_ok &= r.extrapolated <= DIAGRAM_TOL && mono(&r.residuals);
        reversed_ok &= r.extrapolated_reversed <= DIAGRAM_TOL && mono(&r.residuals_reversed);
        parts.push(format!(
            "delta={delta}: stated {:.3} -> {:.3}, reversed {:.3?} -> {:.2e}",
            r.residuals.last().unwrap(),
            r.extrapolated,
            r.residuals_reversed,
            r.extrapolated_reversed
        ));
    }
    let elapsed = start.elapsed();
    line(8, stated_ok && elapsed < DIAGRAM_TIME, &format!("{}; {elapsed:.1?}", parts.join("; ")));
    reversed_ok && elapsed < DIAGRAM_TIME
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("sympseries").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn criterion_9() -> bool {
    // (l2, l) positions of the markers in the reference figure
    let reference: BTreeSet<(u32, u32)> = [
        (1, 1), (1, 3), (1, 5), (3, 3), (3, 5), (5, 5),
        (0, 0), (0, 2), (0, 4), (2, 2), (2, 4), (4, 4),
    ]
    .into_iter()
    .collect();
    let (code, csv) = run_cli(&["figure", "--l-max", "5", "--format", "csv"]);
    let emitted: BTreeSet<(u32, u32)> = csv
        .lines()
        .skip(1)
        .map(|row| {
            let f: Vec<u32> = row.split(',').take(2).map(|v| v.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .collect();
    let rows = csv.lines().count() - 1;
    let (svg_code, svg) = run_cli(&["figure", "--l-max", "5"]);
    let shapes = svg.matches("class=\"plus\"").count() + svg.matches("class=\"minus\"").count();

    let (rep_code, rep) = run_cli(&["report-discrepancy", "--l-max", "8"]);
    let report: serde_json::Value = serde_json::from_str(&rep).unwrap();
    let agree = |l: u64, l2: u64| {
        report["rows"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["l"] == l && r["l2"] == l2)
            .map(|r| r["agree"].as_bool().unwrap())
    };
    let flagged = agree(1, 1) == Some(false) && agree(2, 0) == Some(false) && agree(0, 0) == Some(true);
    let figure_opposite =
        report["rows"].as_array().unwrap().iter().all(|r| r["figure_agree"] == false);
    let pass = code == 0
        && svg_code == 0
        && rep_code == 0
        && rows == 12
        && emitted == reference
        && shapes >= 12
        && flagged;
    line(
        9,
        pass,
        &format!(
            "{rows} markers, positions match: {}; (1,1),(2,0) flagged: {flagged}; {} disagreeing rows up to l=8; \
             reference marker classes opposite to computed signs on every row: {figure_opposite}",
            emitted == reference,
            report["disagreements"]
        ),
    );
    pass
}

#[test]
fn acceptance() {
    let results = [
        (1, criterion_1()),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7()),
        (8, criterion_8()),
        (9, criterion_9()),
    ];
    let broken: Vec<u32> = results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    assert!(broken.is_empty(), "criteria {broken:?} regressed");
}
