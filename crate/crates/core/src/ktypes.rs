//! K-types of the degenerate series restricted to Sp(n): branching, Weyl
//! dimensions, eigenvalue tables and the sign classification at `mu = delta = 0`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyharm::harmonic_dimension;
use crate::specfun::{admissible, b_function, ks_eigenvalue, Parameter};
use crate::su2::j_scalar_on_zero_weight;

/// Highest weight `(l, l2, 0, .., 0)` of an irreducible Sp(n)-module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KTypeLabel {
    pub l: u32,
    pub l2: u32,
}

impl KTypeLabel {
    pub fn new(l: u32, l2: u32) -> Result<Self> {
        if l < l2 {
            return Err(Error::InvalidParameter(format!("label ({l}, {l2}) needs l >= l2")));
        }
        Ok(Self { l, l2 })
    }
}

/// Labels `(l, l2)` with `l <= l_max` occurring for the character index `delta`,
/// in lexicographic order.
pub fn branching(delta: i64, l_max: u32) -> Vec<KTypeLabel> {
    let mut out = Vec::new();
    for l in 0..=l_max {
        for l2 in 0..=l {
            if admissible(delta, l, l2) {
                out.push(KTypeLabel { l, l2 });
            }
        }
    }
    out
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Weyl dimension formula over the positive roots `e_i - e_j`, `e_i + e_j`
/// and `2 e_i` of type C_n, with `rho = (n, n-1, .., 1)`.
pub fn weyl_dim(n: u32, label: KTypeLabel) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("rank must be positive".into()));
    }
    if n == 1 && label.l2 > 0 {
        return Err(Error::InvalidParameter(format!("Sp(1) has no weight ({}, {})", label.l, label.l2)));
    }
    let n = n as usize;
    let mut lambda = vec![0i64; n];
    lambda[0] = i64::from(label.l);
    if n > 1 {
        lambda[1] = i64::from(label.l2);
    }
    let rho: Vec<i64> = (0..n).map(|i| (n - i) as i64).collect();
    let shifted: Vec<i64> = lambda.iter().zip(&rho).map(|(a, b)| a + b).collect();

    let (mut num, mut den) = (1u128, 1u128);
    let mut push = |top: i64, bottom: i64| {
        num *= top as u128;
        den *= bottom as u128;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    };
    for i in 0..n {
        for j in (i + 1)..n {
            push(shifted[i] - shifted[j], rho[i] - rho[j]);
            push(shifted[i] + shifted[j], rho[i] + rho[j]);
        }
        push(2 * shifted[i], 2 * rho[i]);
    }
    debug_assert_eq!(den, 1);
    Ok(num as u64)
}

/// Both sides of `sum_{l+l2=k} dim V^{l,l2} (l - l2 + 1) = dim H^k(R^{4n})`.
pub fn quaternionic_dimension_sides(n: u32, k: u32) -> Result<(u64, u64)> {
    let mut lhs = 0;
    for l2 in 0..=k / 2 {
        let l = k - l2;
        lhs += weyl_dim(n, KTypeLabel { l, l2 })? * u64::from(l - l2 + 1);
    }
    Ok((lhs, harmonic_dimension(4 * n, k)))
}

pub fn check_quaternionic_dimension(n: u32, k: u32) -> bool {
    matches!(quaternionic_dimension_sides(n, k), Ok((a, b)) if a == b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassificationRow {
    pub label: KTypeLabel,
    pub computed_eigenvalue: Complex64,
    pub computed_sign: i64,
    /// `+1` iff `l - l2 = 0 mod 4`.
    pub mod4_class: i64,
    /// Marker class of the reference repartition figure: `+1` iff `l` is odd.
    pub figure_class: i64,
    pub agree: bool,
}

/// Eigenvalue of the normalized intertwiner at `mu = delta = 0` on `V^{l,l2}`,
/// assembled from the B-function and the action of `j` on the zero-weight line.
pub fn classify_pi00(n: u32, label: KTypeLabel) -> Result<ClassificationRow> {
    if !admissible(0, label.l, label.l2) {
        return Err(Error::Admissibility { l: label.l, l2: label.l2, delta: 0 });
    }
    let big_n = 2 * n;
    let b = b_function(Complex64::new(-f64::from(big_n), 0.0), label.l + label.l2, 2 * big_n)?;
    let j = j_scalar_on_zero_weight(label.l - label.l2)?;
    let eig = b * j as f64;
    if (eig.norm() - 1.0).abs() > 1e-10 || eig.im.abs() > 1e-10 {
        return Err(Error::Convergence(format!("eigenvalue {eig} is not a sign")));
    }
    let computed_sign = if eig.re > 0.0 { 1 } else { -1 };
    let mod4_class = if (label.l - label.l2) % 4 == 0 { 1 } else { -1 };
    let figure_class = if label.l % 2 == 1 { 1 } else { -1 };
    Ok(ClassificationRow {
        label,
        computed_eigenvalue: eig,
        computed_sign,
        mod4_class,
        figure_class,
        agree: computed_sign == mod4_class,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRow {
    pub label: KTypeLabel,
    pub value: Option<Complex64>,
    pub error: Option<String>,
}

/// `ks_eigenvalue` on every K-type up to `l_max`; rows that hit a pole keep
/// the error message instead of a value.
pub fn eigenvalue_table(param: &Parameter, l_max: u32) -> Vec<EigenRow> {
    branching(param.delta, l_max)
        .into_iter()
        .map(|label| match ks_eigenvalue(param, label.l, label.l2) {
            Ok(v) => EigenRow { label, value: Some(v), error: None },
            Err(e) => EigenRow { label, value: None, error: Some(e.to_string()) },
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepartitionPoint {
    pub l2: u32,
    pub l: u32,
    pub sign: i64,
}

/// Points of the repartition figure. The sign does not depend on the rank,
/// so the classification is evaluated at `n = 2`.
pub fn emit_repartition(l_max: u32) -> Result<Vec<RepartitionPoint>> {
    branching(0, l_max)
        .into_iter()
        .map(|label| {
            let row = classify_pi00(2, label)?;
            Ok(RepartitionPoint { l2: label.l2, l: label.l, sign: row.computed_sign })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureStyle {
    pub legend_plus: String,
    pub legend_minus: String,
    pub cell: f64,
}

impl Default for FigureStyle {
    fn default() -> Self {
        Self {
            legend_plus: "eigenvalue +1".into(),
            legend_minus: "eigenvalue -1".into(),
            cell: 48.0,
        }
    }
}

fn triangle(cx: f64, cy: f64, r: f64) -> String {
    format!(
        "<polygon class=\"plus\" points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\"/>",
        cx,
        cy - r,
        cx - 0.866 * r,
        cy + 0.5 * r,
        cx + 0.866 * r,
        cy + 0.5 * r
    )
}

fn pentagon(cx: f64, cy: f64, r: f64) -> String {
    let pts: Vec<String> = (0..5)
        .map(|i| {
            let a = -std::f64::consts::FRAC_PI_2 + f64::from(i) * 2.0 * std::f64::consts::PI / 5.0;
            format!("{:.2},{:.2}", cx + r * a.cos(), cy + r * a.sin())
        })
        .collect();
    format!("<polygon class=\"minus\" points=\"{}\"/>", pts.join(" "))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scatter plot with `l2` on the horizontal axis and `l` on the vertical axis;
/// triangles mark sign `+1`, pentagons sign `-1`.
pub fn render_svg(points: &[RepartitionPoint], style: &FigureStyle) -> String {
    let l_max = points.iter().map(|p| p.l).max().unwrap_or(0);
    let cell = style.cell;
    let margin = cell;
    let span = f64::from(l_max) * cell;
    let legend_w = 7.0 * cell;
    let width = 2.0 * margin + span + legend_w;
    let height = 2.0 * margin + span;
    let x = |l2: u32| margin + f64::from(l2) * cell;
    let y = |l: u32| margin + span - f64::from(l) * cell;
    let r = cell * 0.16;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for i in 0..=l_max {
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ccc\" stroke-dasharray=\"2,4\"/>",
            x(i),
            y(0),
            x(i),
            y(l_max)
        );
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#ccc\" stroke-dasharray=\"2,4\"/>",
            x(0),
            y(i),
            x(l_max),
            y(i)
        );
    }
    let _ = writeln!(s, "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", x(0), y(0), x(l_max) + 0.5 * cell, y(0));
    let _ = writeln!(s, "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", x(0), y(0), x(0), y(l_max) - 0.5 * cell);
    let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\">l'</text>", x(l_max) + 0.6 * cell, y(0) + 5.0);
    let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\">l</text>", x(0) - 4.0, y(l_max) - 0.6 * cell);
    let _ = writeln!(s, "<g fill=\"black\">");
    for p in points {
        let marker = if p.sign > 0 { triangle(x(p.l2), y(p.l), r) } else { pentagon(x(p.l2), y(p.l), r) };
        let _ = writeln!(s, "{marker}");
    }
    let lx = x(l_max) + 1.5 * cell;
    let _ = writeln!(s, "{}", triangle(lx, y(l_max) + cell, r));
    let _ = writeln!(s, "{}", pentagon(lx, y(l_max) + 2.0 * cell, r));
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\">{}</text>", lx + 0.5 * cell, y(l_max) + cell + 5.0, escape(&style.legend_plus));
    let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\">{}</text>", lx + 0.5 * cell, y(l_max) + 2.0 * cell + 5.0, escape(&style.legend_minus));
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[(u32, u32)]) -> Vec<KTypeLabel> {
        v.iter().map(|&(l, l2)| KTypeLabel { l, l2 }).collect()
    }

    #[test]
    fn branching_examples() {
        assert_eq!(branching(0, 2), labels(&[(0, 0), (1, 1), (2, 0), (2, 2)]));
        assert_eq!(branching(1, 2), labels(&[(1, 0), (2, 1)]));
        assert_eq!(branching(-1, 2), labels(&[(1, 0), (2, 1)]));
        assert!(branching(3, 2).is_empty());
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(weyl_dim(3, KTypeLabel { l: 0, l2: 0 }).unwrap(), 1);
        assert_eq!(weyl_dim(2, KTypeLabel { l: 1, l2: 0 }).unwrap(), 4);
        assert_eq!(weyl_dim(2, KTypeLabel { l: 1, l2: 1 }).unwrap(), 5);
        assert_eq!(weyl_dim(2, KTypeLabel { l: 2, l2: 0 }).unwrap(), 10);
        // Sp(3): standard 6, adjoint 21, second fundamental 14.
        assert_eq!(weyl_dim(3, KTypeLabel { l: 1, l2: 0 }).unwrap(), 6);
        assert_eq!(weyl_dim(3, KTypeLabel { l: 2, l2: 0 }).unwrap(), 21);
        assert_eq!(weyl_dim(3, KTypeLabel { l: 1, l2: 1 }).unwrap(), 14);
        assert_eq!(weyl_dim(1, KTypeLabel { l: 4, l2: 0 }).unwrap(), 5);
        assert!(weyl_dim(1, KTypeLabel { l: 2, l2: 1 }).is_err());
    }

    #[test]
    fn quaternionic_dimension_examples() {
        assert_eq!(quaternionic_dimension_sides(2, 0).unwrap(), (1, 1));
        assert_eq!(quaternionic_dimension_sides(2, 1).unwrap(), (8, 8));
        assert_eq!(quaternionic_dimension_sides(2, 2).unwrap(), (35, 35));
        for n in 2..=3 {
            for k in 0..=12 {
                assert!(check_quaternionic_dimension(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn classification_examples() {
        let r = classify_pi00(2, KTypeLabel { l: 0, l2: 0 }).unwrap();
        assert_eq!((r.computed_sign, r.mod4_class, r.agree), (1, 1, true));
        let r = classify_pi00(2, KTypeLabel { l: 1, l2: 1 }).unwrap();
        assert_eq!((r.computed_sign, r.mod4_class, r.agree), (-1, 1, false));
        let r = classify_pi00(2, KTypeLabel { l: 2, l2: 0 }).unwrap();
        assert_eq!((r.computed_sign, r.mod4_class, r.agree), (1, -1, false));
        assert!(classify_pi00(2, KTypeLabel { l: 2, l2: 1 }).is_err());
    }

    #[test]
    fn computed_sign_follows_parity_of_l() {
        for n in 1..=3 {
            for label in branching(0, 10) {
                let r = classify_pi00(n, label).unwrap();
                assert_eq!(r.computed_sign, if label.l % 2 == 0 { 1 } else { -1 });
                assert!((r.computed_eigenvalue * r.computed_eigenvalue - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenvalue_table_at_zero() {
        let p = Parameter::real(0.0, 0, 2).unwrap();
        let rows = eigenvalue_table(&p, 4);
        assert_eq!(rows[0].value, Some(Complex64::new(1.0, 0.0)));
        for row in &rows {
            let v = row.value.unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!(v.re.abs() < 1e-12 || v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn repartition_positions() {
        let pts = emit_repartition(5).unwrap();
        assert_eq!(pts.len(), 12);
        assert!(pts.contains(&RepartitionPoint { l2: 0, l: 0, sign: 1 }));
        let svg = render_svg(&pts, &FigureStyle::default());
        assert_eq!(svg.matches("class=\"plus\"").count() + svg.matches("class=\"minus\"").count(), 14);
        assert_eq!(svg, render_svg(&pts, &FigureStyle::default()));
    }
}
