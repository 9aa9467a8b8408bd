use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sparse multivariate polynomial with complex coefficients over `R^arity`.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration
/// order (and therefore every derived basis) is deterministic. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct SparsePoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl SparsePoly {
    pub fn zero(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Complex64) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Complex64::new(1.0, 0.0))
    }

    /// The coordinate function `x_i`.
    pub fn variable(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::monomial(e, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(exps: Vec<u32>, c: Complex64) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, got: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// `|x|^2 = sum x_i^2`.
    pub fn radius_squared(arity: usize) -> Self {
        let mut p = Self::zero(arity);
        for i in 0..arity {
            let mut e = vec![0; arity];
            e[i] = 2;
            p.add_term(e, Complex64::new(1.0, 0.0));
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Complex64) {
        debug_assert_eq!(exps.len(), self.arity);
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Complex64 {
        self.terms.get(exps).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Splits into homogeneous components, keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, SparsePoly> {
        let mut out: BTreeMap<u32, SparsePoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.iter().sum();
            out.entry(d).or_insert_with(|| SparsePoly::zero(self.arity)).add_term(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut p = Self::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * s);
        }
        p
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.arity);
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 = e.iter().zip(x).map(|(&a, &xi)| xi.powi(a as i32)).product();
                c * m
            })
            .sum()
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.arity);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.add_term(e2, c * f64::from(e[i]));
            }
        }
        p
    }

    /// Precomposition with a signed coordinate permutation:
    /// `x_k -> signs[k] * x_{perm[k]}`.
    pub fn substitute_signed_permutation(&self, perm: &[usize], signs: &[f64]) -> Result<Self> {
        if perm.len() != self.arity || signs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: perm.len() });
        }
        let mut p = Self::zero(self.arity);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; self.arity];
            let mut s = 1.0;
            for k in 0..self.arity {
                e2[perm[k]] += e[k];
                if e[k] % 2 == 1 {
                    s *= signs[k];
                }
            }
            p.add_term(e2, c * s);
        }
        Ok(p)
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.arity, other.arity, "polynomial arity mismatch");
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_arity(rhs);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), *c);
        }
        p
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_arity(rhs);
        let mut p = SparsePoly::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| if a == 1 { format!("x{i}") } else { format!("x{i}^{a}") })
                    .collect();
                format!("({c})*{}", if mono.is_empty() { "1".into() } else { mono.join("*") })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exps: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    arity: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr { exps: e.clone(), re: c.re, im: c.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        SparsePoly::from_terms(
            repr.arity,
            repr.terms.into_iter().map(|t| (t.exps, Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = SparsePoly::variable(2, 0);
        let z = &x - &x;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn product_and_eval() {
        let x = SparsePoly::variable(2, 0);
        let y = SparsePoly::variable(2, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.homogeneous_degree(), Some(2));
        assert_eq!(p.eval(&[3.0, 2.0]), c(5.0));
        assert_eq!(p.coeff(&[1, 1]), c(0.0));
    }

    #[test]
    fn homogeneous_split() {
        let p = &SparsePoly::one(3) + &SparsePoly::radius_squared(3);
        assert!(!p.is_homogeneous());
        let comps = p.homogeneous_components();
        assert_eq!(comps.keys().copied().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn arity_checked_on_construction() {
        assert!(SparsePoly::from_terms(2, vec![(vec![1, 0, 0], c(1.0))]).is_err());
    }

    #[test]
    fn json_shape() {
        let p = SparsePoly::monomial(vec![2, 0], Complex64::new(1.0, -2.0));
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["arity"], 2);
        assert_eq!(v["terms"][0]["exps"], serde_json::json!([2, 0]));
        assert_eq!(v["terms"][0]["im"], -2.0);
        let back: SparsePoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }
}
