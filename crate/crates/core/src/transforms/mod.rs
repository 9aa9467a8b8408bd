//! Grid Fourier transforms, their covariance checks and the Knapp-Stein
//! sphere quadrature.

mod checks;
mod fourier;
mod grid;
mod knapp_stein;

pub use fourier::{
    fourier_complex_partial, fourier_continuous, fourier_eps, fourier_partial, fourier_symplectic,
    inverse_fourier_continuous, inverse_fourier_partial, transform_axes, Direction,
};
pub use grid::{EvaluableField, FnField, GridField, Space};
pub use checks::{
    check_bochner, check_flip, check_partial_scaling, check_symp_scaling, complex_scale, rel_l2,
    ResidualReport, ScalingConfig,
};
pub use knapp_stein::{
    kernel_direction, ks_integral, verify_knapp_stein_normalization, NormalizationReport, QuadConfig,
    QuadEstimate, Scheme,
};
