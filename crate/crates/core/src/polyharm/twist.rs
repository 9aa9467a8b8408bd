//! Coordinate twists on `R^{2N} = C^N`.
//!
//! Realification convention: a point `Z in C^N` is stored as
//! `(Re z_1, .., Re z_N, Im z_1, .., Im z_N)`. With this ordering `eps` is
//! complex conjugation and the complex matrix `J = [[0, -I_n], [I_n, 0]]`
//! (with `N = 2n`) acts blockwise as `diag(J, J)`. Because `J` has real
//! entries it commutes with conjugation, so `J eps = eps J` on `R^{2N}`.

use crate::error::{Error, Result};

use super::poly::SparsePoly;

fn check_arity(arity: usize, big_n: usize) -> Result<()> {
    if arity != 2 * big_n {
        return Err(Error::ArityMismatch { expected: 2 * big_n, got: arity });
    }
    Ok(())
}

/// `eps X`: negates the imaginary block.
pub fn eps_apply(x: &[f64]) -> Vec<f64> {
    let big_n = x.len() / 2;
    x.iter().enumerate().map(|(i, &v)| if i < big_n { v } else { -v }).collect()
}

/// Signed permutation `(perm, signs)` with `(J X)_k = signs[k] * X[perm[k]]`.
pub fn j_permutation(big_n: usize) -> Result<(Vec<usize>, Vec<f64>)> {
    if big_n == 0 || big_n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("J needs an even complex dimension, got {big_n}")));
    }
    let n = big_n / 2;
    let mut perm = vec![0; 2 * big_n];
    let mut signs = vec![0.0; 2 * big_n];
    for block in 0..2 {
        let off = block * big_n;
        for k in 0..big_n {
            if k < n {
                perm[off + k] = off + n + k;
                signs[off + k] = -1.0;
            } else {
                perm[off + k] = off + k - n;
                signs[off + k] = 1.0;
            }
        }
    }
    Ok((perm, signs))
}

/// `J X` in real coordinates.
pub fn j_apply(x: &[f64]) -> Result<Vec<f64>> {
    if x.len() % 2 != 0 {
        return Err(Error::ArityMismatch { expected: x.len() + 1, got: x.len() });
    }
    let (perm, signs) = j_permutation(x.len() / 2)?;
    Ok(perm.iter().zip(&signs).map(|(&p, &s)| s * x[p]).collect())
}

/// `p^eps = p(eps .)`.
pub fn twist_eps(p: &SparsePoly, big_n: usize) -> Result<SparsePoly> {
    check_arity(p.arity(), big_n)?;
    let perm: Vec<usize> = (0..2 * big_n).collect();
    let signs: Vec<f64> = (0..2 * big_n).map(|i| if i < big_n { 1.0 } else { -1.0 }).collect();
    p.substitute_signed_permutation(&perm, &signs)
}

/// `p^J = p(J .)`.
pub fn twist_j(p: &SparsePoly, big_n: usize) -> Result<SparsePoly> {
    check_arity(p.arity(), big_n)?;
    let (perm, signs) = j_permutation(big_n)?;
    p.substitute_signed_permutation(&perm, &signs)
}
