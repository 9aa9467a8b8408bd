//! The representation of SU(2) on binary forms.
//!
//! Convention: `(g . p)(v) = p(g^{-1} v)`, and the monomial `x^a y^{j-a}` has
//! weight `(j - a) - a`, so the torus element `diag(e^{i t}, e^{-i t})` acts
//! on a weight-`w` vector by `e^{i w t}`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyharm::binomial;

pub type Mat2 = [[Complex64; 2]; 2];

const UNITARY_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity() -> Mat2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

/// Representative `[[0, 1], [-1, 0]]` of the nontrivial Weyl element; it is
/// also the image of the quaternion `j`.
pub fn weyl_element() -> Mat2 {
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]]
}

pub fn torus(theta: f64) -> Mat2 {
    [[Complex64::from_polar(1.0, theta), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, -theta)]]
}

/// Image of a unit quaternion `'1'`, `'i'`, `'j'` or `'k'` in SU(2).
pub fn quaternion_unit(unit: char) -> Result<Mat2> {
    let z = c(0.0, 0.0);
    Ok(match unit {
        '1' => identity(),
        'i' => [[c(0.0, 1.0), z], [z, c(0.0, -1.0)]],
        'j' => weyl_element(),
        'k' => [[z, c(0.0, 1.0)], [c(0.0, 1.0), z]],
        other => return Err(Error::InvalidParameter(format!("unknown quaternion unit {other:?}"))),
    })
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn adjoint(g: &Mat2) -> Mat2 {
    [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]]
}

fn check_su2(g: &Mat2) -> Result<()> {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let prod = mat_mul(g, &adjoint(g));
    let id = identity();
    let off: f64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (prod[i][j] - id[i][j]).norm()).sum();
    if off > UNITARY_TOL || (det - c(1.0, 0.0)).norm() > UNITARY_TOL {
        return Err(Error::InvalidParameter("matrix is not in SU(2)".into()));
    }
    Ok(())
}

/// Binary form of degree `j`; `coeffs[a]` multiplies `x^a y^{j-a}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm {
    coeffs: Vec<Complex64>,
}

impl BinaryForm {
    pub fn zero(degree: u32) -> Self {
        Self { coeffs: vec![c(0.0, 0.0); degree as usize + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("a binary form needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// `x^a y^{degree - a}`.
    pub fn monomial(degree: u32, a: u32) -> Result<Self> {
        if a > degree {
            return Err(Error::InvalidParameter(format!("exponent {a} exceeds degree {degree}")));
        }
        let mut p = Self::zero(degree);
        p.coeffs[a as usize] = c(1.0, 0.0);
        Ok(p)
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Weight of the monomial `x^a y^{j-a}`.
    pub fn weight_of(degree: u32, a: u32) -> i64 {
        i64::from(degree) - 2 * i64::from(a)
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        let j = self.degree();
        self.coeffs.iter().enumerate().map(|(a, ca)| ca * x.powu(a as u32) * y.powu(j - a as u32)).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// `(g . p)(v) = p(g^{-1} v)` for `g` in SU(2).
pub fn act(g: &Mat2, p: &BinaryForm) -> Result<BinaryForm> {
    check_su2(g)?;
    Ok(act_unchecked(&adjoint(g), p))
}

/// Substitutes `(x, y) -> (h00 x + h01 y, h10 x + h11 y)`.
fn act_unchecked(h: &Mat2, p: &BinaryForm) -> BinaryForm {
    let j = p.degree() as usize;
    // Expand (h00 x + h01 y)^a and (h10 x + h11 y)^b as coefficient vectors in powers of x.
    let expand = |u: Complex64, v: Complex64, e: usize| -> Vec<Complex64> {
        (0..=e).map(|i| u.powu(i as u32) * v.powu((e - i) as u32) * binomial(e as i64, i as i64) as f64).collect()
    };
    let mut out = vec![c(0.0, 0.0); j + 1];
    for (a, ca) in p.coeffs.iter().enumerate() {
        if *ca == c(0.0, 0.0) {
            continue;
        }
        let first = expand(h[0][0], h[0][1], a);
        let second = expand(h[1][0], h[1][1], j - a);
        for (s, fs) in first.iter().enumerate() {
            for (t, ft) in second.iter().enumerate() {
                out[s + t] += ca * fs * ft;
            }
        }
    }
    BinaryForm { coeffs: out }
}

/// Splits `p` into its weight components, one entry for every weight
/// `-j, -j+2, .., j` (zero components included).
pub fn weight_decompose(p: &BinaryForm) -> BTreeMap<i64, BinaryForm> {
    let j = p.degree();
    (0..=j)
        .map(|a| {
            let mut comp = BinaryForm::zero(j);
            comp.coeffs[a as usize] = p.coeffs[a as usize];
            (BinaryForm::weight_of(j, a), comp)
        })
        .collect()
}

/// The Weyl-element identification; swaps the weight lines `w` and `-w`.
pub fn iota_w(p: &BinaryForm) -> BinaryForm {
    act(&weyl_element(), p).expect("Weyl element lies in SU(2)")
}

/// Scalar by which the quaternion `j` acts on the zero-weight line of the
/// degree-`j_deg` representation, read off from `act`.
pub fn j_scalar_on_zero_weight(j_deg: u32) -> Result<i64> {
    if j_deg % 2 != 0 {
        return Err(Error::InvalidParameter(format!("degree {j_deg} has no zero-weight vector")));
    }
    let v = BinaryForm::monomial(j_deg, j_deg / 2)?;
    let image = act(&quaternion_unit('j')?, &v)?;
    let s = image.coeffs[(j_deg / 2) as usize];
    let rest = image.max_abs_diff(&BinaryForm { coeffs: v.coeffs.iter().map(|x| x * s).collect() });
    if rest > 1e-12 || (s.norm() - 1.0).abs() > 1e-12 || s.im.abs() > 1e-12 {
        return Err(Error::Convergence(format!("zero-weight line not preserved by j: scalar {s}")));
    }
    Ok(if s.re > 0.0 { 1 } else { -1 })
}
