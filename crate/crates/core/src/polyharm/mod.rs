//! Polynomials on `R^d` and `C^M`: Laplacians, harmonic bases, coordinate
//! twists, exact sphere moments and Gaussian pairings.

mod bigraded;
mod harmonic;
mod integrate;
mod poly;
mod twist;

pub use bigraded::{bigraded_basis, bigraded_dimension, BigradedPoly};
pub use harmonic::{binomial, harmonic_basis, harmonic_dimension, laplacian, monomials, MONOMIAL_BUDGET};
pub use integrate::{
    pair_with_gaussian, sphere_integral, sphere_moment, verify_feps_identity, FepsCheck, HomogeneousExtension,
};
pub use poly::SparsePoly;
pub use twist::{eps_apply, j_apply, j_permutation, twist_eps, twist_j};
