use num_complex::Complex64;

use crate::error::{Error, Result};

use super::poly::SparsePoly;

/// Largest number of degree-`k` monomials a basis construction may touch.
pub const MONOMIAL_BUDGET: u64 = 200_000;

/// Binomial coefficient, zero when `k < 0` or `n < k`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `dim H^k(R^d) = C(d+k-1, k) - C(d+k-3, k-2)`.
pub fn harmonic_dimension(d: u32, k: u32) -> u64 {
    let (d, k) = (i64::from(d), i64::from(k));
    binomial(d + k - 1, k) - binomial(d + k - 3, k - 2)
}

pub fn laplacian(p: &SparsePoly) -> SparsePoly {
    laplacian_from(p, 0)
}

/// Laplacian in the variables `x_first, .., x_{d-1}`.
fn laplacian_from(p: &SparsePoly, first: usize) -> SparsePoly {
    let mut out = SparsePoly::zero(p.arity());
    for (e, c) in p.terms() {
        for i in first..p.arity() {
            if e[i] >= 2 {
                let mut e2 = e.clone();
                e2[i] -= 2;
                out.add_term(e2, c * f64::from(e[i] * (e[i] - 1)));
            }
        }
    }
    out
}

/// All exponent vectors of length `d` and total degree `k`, in
/// lexicographically decreasing order.
pub fn monomials(d: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(d: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == d {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=k).rev() {
            prefix.push(a);
            rec(d, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(d, k, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

pub(crate) fn check_budget(count: u64, what: &str) -> Result<()> {
    if count > MONOMIAL_BUDGET {
        return Err(Error::Budget(format!("{what} needs {count} monomials, budget is {MONOMIAL_BUDGET}")));
    }
    Ok(())
}

/// Integer-coefficient basis of `H^k(R^d)`.
///
/// There is one element per monomial `x^a` with `a_1 <= 1`, namely
/// `sum_j (-1)^j a_1!/(a_1+2j)! x_1^{a_1+2j} L^j(x'^{a'})` where `L` is the
/// Laplacian in the remaining variables, rescaled to clear denominators.
/// This is the reduced-echelon nullspace of the Laplacian on degree-`k`
/// monomials when monomials with `a_1 >= 2` are taken as pivots.
pub fn harmonic_basis(d: usize, k: u32) -> Result<Vec<SparsePoly>> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    check_budget(binomial(d as i64 + i64::from(k) - 1, i64::from(k)), "harmonic basis")?;
    let mut basis = Vec::new();
    for a in monomials(d, k) {
        let a1 = a[0];
        if a1 > 1 {
            continue;
        }
        let mut tail = a.clone();
        tail[0] = 0;
        let mut powers = vec![SparsePoly::monomial(tail, Complex64::new(1.0, 0.0))];
        loop {
            let next = laplacian_from(powers.last().unwrap(), 1);
            if next.is_zero() {
                break;
            }
            powers.push(next);
        }
        let top = (powers.len() - 1) as u32;
        let mut h = SparsePoly::zero(d);
        for (j, q) in powers.iter().enumerate() {
            let j = j as u32;
            // (a1+2*top)! / (a1+2j)!
            let mut coeff: f64 = ((a1 + 2 * j + 1)..=(a1 + 2 * top)).map(f64::from).product();
            if j % 2 == 1 {
                coeff = -coeff;
            }
            for (e, c) in q.terms() {
                let mut e2 = e.clone();
                e2[0] = a1 + 2 * j;
                h.add_term(e2, c * coeff);
            }
        }
        basis.push(h);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_examples() {
        let x = SparsePoly::monomial(vec![2, 0], Complex64::new(1.0, 0.0));
        assert_eq!(laplacian(&x), SparsePoly::constant(2, Complex64::new(2.0, 0.0)));
        let y = SparsePoly::monomial(vec![0, 2], Complex64::new(1.0, 0.0));
        assert!(laplacian(&(&x - &y)).is_zero());
        for d in 1..6 {
            let r2 = SparsePoly::radius_squared(d);
            assert_eq!(laplacian(&r2), SparsePoly::constant(d, Complex64::new(2.0 * d as f64, 0.0)));
        }
    }

    #[test]
    fn dimension_formula_small_cases() {
        assert_eq!(harmonic_dimension(2, 1), 2);
        assert_eq!(harmonic_dimension(2, 7), 2);
        assert_eq!(harmonic_dimension(4, 2), 9);
        assert_eq!(harmonic_dimension(8, 2), 35);
        assert_eq!(harmonic_dimension(3, 3), 7);
    }

    #[test]
    fn basis_counts_and_harmonicity() {
        for &d in &[1usize, 2, 3, 4, 8] {
            for k in 0..=5 {
                let b = harmonic_basis(d, k).unwrap();
                assert_eq!(b.len() as u64, harmonic_dimension(d as u32, k), "d={d} k={k}");
                for h in &b {
                    assert!(laplacian(h).is_zero());
                    assert_eq!(h.homogeneous_degree(), Some(k));
                }
            }
        }
    }

    #[test]
    fn basis_in_two_variables() {
        let b = harmonic_basis(2, 2).unwrap();
        // x y and x^2 - y^2 (scaled): leading monomials x y and y^2.
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].coeff(&[1, 1]), Complex64::new(1.0, 0.0));
        assert_eq!(b[1].coeff(&[0, 2]), Complex64::new(2.0, 0.0));
        assert_eq!(b[1].coeff(&[2, 0]), Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(harmonic_basis(30, 12), Err(Error::Budget(_))));
    }
}
