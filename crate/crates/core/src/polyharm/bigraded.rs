use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::harmonic::{binomial, check_budget, monomials};
use super::poly::SparsePoly;

type Key = (Vec<u32>, Vec<u32>);

/// Polynomial in `z in C^M` and `zbar`, stored by (holomorphic, antiholomorphic)
/// exponent pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct BigradedPoly {
    arity: usize,
    terms: BTreeMap<Key, Complex64>,
}

impl BigradedPoly {
    pub fn zero(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    pub fn monomial(a: Vec<u32>, b: Vec<u32>, c: Complex64) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::ArityMismatch { expected: a.len(), got: b.len() });
        }
        let mut p = Self::zero(a.len());
        p.add_term(a, b, c);
        Ok(p)
    }

    pub fn add_term(&mut self, a: Vec<u32>, b: Vec<u32>, c: Complex64) {
        debug_assert!(a.len() == self.arity && b.len() == self.arity);
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let key = (a, b);
        let v = *self.terms.get(&key).unwrap_or(&Complex64::new(0.0, 0.0)) + c;
        if v == Complex64::new(0.0, 0.0) {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(alpha, beta)` when every term has the same bidegree.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|(a, b)| (a.iter().sum::<u32>(), b.iter().sum::<u32>()));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|((a, b), c)| {
                let mut m = *c;
                for i in 0..self.arity {
                    m *= z[i].powu(a[i]) * z[i].conj().powu(b[i]);
                }
                m
            })
            .sum()
    }

    /// `sum_i d^2 / (dz_i dzbar_i)`, a quarter of the real Laplacian.
    pub fn complex_laplacian(&self) -> Self {
        self.laplacian_from(0)
    }

    fn laplacian_from(&self, first: usize) -> Self {
        let mut out = Self::zero(self.arity);
        for ((a, b), c) in &self.terms {
            for i in first..self.arity {
                if a[i] > 0 && b[i] > 0 {
                    let (mut a2, mut b2) = (a.clone(), b.clone());
                    a2[i] -= 1;
                    b2[i] -= 1;
                    out.add_term(a2, b2, c * f64::from(a[i] * b[i]));
                }
            }
        }
        out
    }

    /// Expands `z_i = x_i + i y_i` into a real polynomial on `R^{2M}` with
    /// coordinates `(x_1..x_M, y_1..y_M)`.
    pub fn to_real(&self) -> SparsePoly {
        let m = self.arity;
        let d = 2 * m;
        let mut z = Vec::with_capacity(m);
        let mut zb = Vec::with_capacity(m);
        for i in 0..m {
            let x = SparsePoly::variable(d, i);
            let iy = SparsePoly::variable(d, m + i).scale(Complex64::new(0.0, 1.0));
            z.push(&x + &iy);
            zb.push(&x - &iy);
        }
        let mut out = SparsePoly::zero(d);
        for ((a, b), c) in &self.terms {
            let mut t = SparsePoly::constant(d, *c);
            for i in 0..m {
                for _ in 0..a[i] {
                    t = &t * &z[i];
                }
                for _ in 0..b[i] {
                    t = &t * &zb[i];
                }
            }
            out = &out + &t;
        }
        out
    }
}

/// `dim H^{alpha,beta}(C^M)`.
pub fn bigraded_dimension(m: u32, alpha: u32, beta: u32) -> u64 {
    let (m, a, b) = (i64::from(m), i64::from(alpha), i64::from(beta));
    binomial(m + a - 1, a) * binomial(m + b - 1, b) - binomial(m + a - 2, a - 1) * binomial(m + b - 2, b - 1)
}

/// Integer-coefficient basis of harmonic polynomials of bidegree `(alpha, beta)`.
///
/// One element per monomial `z^a zbar^b` with `min(a_1, b_1) = 0`:
/// `sum_j c_j z_1^{a_1+j} zbar_1^{b_1+j} L^j(z'^{a'} zbar'^{b'})` with
/// `c_j = -c_{j-1} / ((a_1+j)(b_1+j))` and `L` the complex Laplacian in the
/// remaining variables, rescaled to integers.
pub fn bigraded_basis(m: usize, alpha: u32, beta: u32) -> Result<Vec<BigradedPoly>> {
    if m == 0 {
        return Err(Error::InvalidParameter("complex dimension must be positive".into()));
    }
    let count = binomial(m as i64 + i64::from(alpha) - 1, i64::from(alpha))
        * binomial(m as i64 + i64::from(beta) - 1, i64::from(beta));
    check_budget(count, "bigraded basis")?;
    let holo = monomials(m, alpha);
    let anti = monomials(m, beta);
    let mut basis = Vec::new();
    for a in &holo {
        for b in &anti {
            let (a1, b1) = (a[0], b[0]);
            if a1.min(b1) > 0 {
                continue;
            }
            let (mut ta, mut tb) = (a.clone(), b.clone());
            ta[0] = 0;
            tb[0] = 0;
            let mut powers = vec![BigradedPoly::monomial(ta, tb, Complex64::new(1.0, 0.0))?];
            loop {
                let next = powers.last().unwrap().laplacian_from(1);
                if next.is_zero() {
                    break;
                }
                powers.push(next);
            }
            let top = (powers.len() - 1) as u32;
            let mut h = BigradedPoly::zero(m);
            for (j, q) in powers.iter().enumerate() {
                let j = j as u32;
                let mut coeff: f64 = ((j + 1)..=top).map(|i| f64::from((a1 + i) * (b1 + i))).product();
                if j % 2 == 1 {
                    coeff = -coeff;
                }
                for ((qa, qb), c) in q.terms() {
                    let (mut ea, mut eb) = (qa.clone(), qb.clone());
                    ea[0] = a1 + j;
                    eb[0] = b1 + j;
                    h.add_term(ea, eb, c * coeff);
                }
            }
            basis.push(h);
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyharm::harmonic::{harmonic_dimension, laplacian};

    #[test]
    fn small_cases() {
        let b = bigraded_basis(1, 1, 0).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0], BigradedPoly::monomial(vec![1], vec![0], Complex64::new(1.0, 0.0)).unwrap());
        assert_eq!(bigraded_basis(2, 1, 1).unwrap().len(), 3);
        // z zbar is not harmonic on C^1.
        assert!(bigraded_basis(1, 1, 1).unwrap().is_empty());
    }

    #[test]
    fn sums_match_real_dimension() {
        for m in [1u32, 2, 4] {
            for k in 0..=6 {
                let total: u64 = (0..=k).map(|a| bigraded_dimension(m, a, k - a)).sum();
                assert_eq!(total, harmonic_dimension(2 * m, k), "M={m} k={k}");
            }
        }
    }

    #[test]
    fn basis_elements_are_harmonic_in_both_senses() {
        for m in 1..=3 {
            for alpha in 0..=3 {
                for beta in 0..=3 {
                    let b = bigraded_basis(m, alpha, beta).unwrap();
                    assert_eq!(b.len() as u64, bigraded_dimension(m as u32, alpha, beta));
                    for h in &b {
                        assert!(h.complex_laplacian().is_zero());
                        assert_eq!(h.bidegree(), Some((alpha, beta)));
                        let r = h.to_real();
                        assert!(laplacian(&r).terms().all(|(_, c)| c.norm() < 1e-9));
                    }
                }
            }
        }
    }

    #[test]
    fn realification_evaluates_consistently() {
        let p = BigradedPoly::monomial(vec![2, 0], vec![0, 1], Complex64::new(0.5, -1.0)).unwrap();
        let z = [Complex64::new(0.3, -0.7), Complex64::new(1.1, 0.4)];
        let x = [z[0].re, z[1].re, z[0].im, z[1].im];
        assert!((p.eval(&z) - p.to_real().eval(&x)).norm() < 1e-14);
    }
}
