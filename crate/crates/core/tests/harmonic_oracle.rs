//! Exact rational nullspace of the Laplacian, computed by plain Gaussian
//! elimination, against the closed-form harmonic basis.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use sympseries::polyharm::{harmonic_basis, harmonic_dimension, monomials};

type Q = BigRational;

fn int(v: i64) -> Q {
    Q::from_integer(v.into())
}

/// Reduced row echelon form with pivots taken in column order; zero rows dropped.
fn rref(mut rows: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[r].clone();
                for (v, pv) in rows[i].iter_mut().zip(&pivot) {
                    *v = &*v - &(&f * pv);
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn laplacian_nullspace(d: usize, k: u32) -> Vec<Vec<Q>> {
    let cols = monomials(d, k);
    if k < 2 {
        return (0..cols.len()).map(|i| (0..cols.len()).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
    }
    let targets = monomials(d, k - 2);
    let row_of: HashMap<Vec<u32>, usize> = targets.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut a = vec![vec![Q::zero(); cols.len()]; targets.len()];
    for (j, m) in cols.iter().enumerate() {
        for i in 0..d {
            if m[i] >= 2 {
                let mut t = m.clone();
                t[i] -= 2;
                a[row_of[&t]][j] += int(i64::from(m[i] * (m[i] - 1)));
            }
        }
    }
    let reduced = rref(a);
    let pivots: Vec<usize> =
        reduced.iter().map(|row| row.iter().position(|v| !v.is_zero()).unwrap()).collect();
    let mut basis = Vec::new();
    for free in (0..cols.len()).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols.len()];
        v[free] = Q::one();
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

fn closed_form_rows(d: usize, k: u32) -> Vec<Vec<Q>> {
    let cols = monomials(d, k);
    harmonic_basis(d, k)
        .unwrap()
        .iter()
        .map(|p| {
            cols.iter()
                .map(|m| {
                    let c = p.coeff(m);
                    assert_eq!(c.im, 0.0);
                    assert_eq!(c.re.fract(), 0.0, "non-integer coefficient {c}");
                    int(c.re as i64)
                })
                .collect()
        })
        .collect()
}

#[test]
fn closed_form_basis_spans_the_exact_nullspace() {
    let cases = [(2, 0..=6), (3, 0..=5), (4, 0..=4), (5, 0..=3), (8, 0..=3)];
    for (d, ks) in cases {
        for k in ks {
            let exact = laplacian_nullspace(d, k);
            let ours = closed_form_rows(d, k);
            assert_eq!(ours.len() as u64, harmonic_dimension(d as u32, k), "(d={d}, k={k})");
            assert_eq!(exact.len(), ours.len(), "(d={d}, k={k})");
            assert_eq!(rref(ours), rref(exact), "(d={d}, k={k})");
        }
    }
}
