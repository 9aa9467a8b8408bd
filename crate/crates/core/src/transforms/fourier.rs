//! Continuous Fourier transforms approximated on half-offset grids.
//!
//! Along an axis with half-width `L` and `M` points, positions are
//! `x_t = (t - c) h` with `h = 2L/M`, `c = M/2 - 1/2`, and the frequencies are
//! `xi_s = (s - c) / (2L)`. Then `x_t xi_s = (t - c)(s - c)/M`, so
//! `h sum_t f_t e^{-2 pi i x_t xi_s}` is a DFT between two phase ramps. The
//! frequency axis is again a half-offset grid, of half-width `M/(4L)`, and
//! applying the transform twice returns to the original grid; round trips,
//! Parseval and the signed-permutation identities hold exactly up to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::polyharm::j_permutation;

use super::grid::{GridField, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `e^{-2 pi i <x, xi>}`.
    Forward,
    /// Kernel `e^{+2 pi i <x, xi>}`.
    Inverse,
}

fn check_axes(f: &GridField, axes: &[usize]) -> Result<()> {
    let mut seen = vec![false; f.dims()];
    for &a in axes {
        if a >= f.dims() || std::mem::replace(&mut seen[a], true) {
            return Err(Error::InvalidParameter(format!("invalid axis set {axes:?} for a {}-dimensional grid", f.dims())));
        }
    }
    Ok(())
}

/// Applies the one-dimensional transform along each axis in `axes`, with no
/// check of the space tags; each transformed axis gets the dual extent and tag.
pub fn transform_axes(f: &GridField, axes: &[usize], dir: Direction) -> Result<GridField> {
    check_axes(f, axes)?;
    let m = f.m();
    let mf = m as f64;
    let c = mf / 2.0 - 0.5;
    let sign = match dir {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    let mut planner = FftPlanner::<f64>::new();
    let fft = match dir {
        Direction::Forward => planner.plan_fft_forward(m),
        Direction::Inverse => planner.plan_fft_inverse(m),
    };
    // Phase ramps are the same for every axis; only the spacing differs.
    let pre: Vec<Complex64> = (0..m).map(|t| Complex64::from_polar(1.0, sign * 2.0 * PI * c * t as f64 / mf)).collect();
    let global = Complex64::from_polar(1.0, -sign * 2.0 * PI * c * c / mf);

    let mut out = f.clone();
    let len = out.len();
    let mut line = vec![Complex64::default(); m];
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for &axis in axes {
        let h = out.spacing(axis);
        let post: Vec<Complex64> = pre.iter().map(|p| p * global * h).collect();
        let stride = out.stride(axis);
        let block = stride * m;
        let values = out.values_mut();
        for outer in (0..len).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for t in 0..m {
                    line[t] = values[base + t * stride] * pre[t];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for s in 0..m {
                    values[base + s * stride] = line[s] * post[s];
                }
            }
        }
        let dual = mf / (4.0 * out.extents()[axis]);
        let tag = out.tags()[axis].dual();
        out.set_axis(axis, dual, tag);
    }
    Ok(out)
}

fn require_tags(f: &GridField, axes: &[usize], tag: Space) -> Result<()> {
    for &a in axes {
        if a < f.dims() && f.tags()[a] != tag {
            return Err(Error::SpaceTag(format!("axis {a} is {:?}, expected {tag:?}", f.tags()[a])));
        }
    }
    Ok(())
}

fn all_axes(f: &GridField) -> Vec<usize> {
    (0..f.dims()).collect()
}

/// `F f(xi) = int f(x) e^{-2 pi i <x, xi>} dx` on every axis.
pub fn fourier_continuous(f: &GridField) -> Result<GridField> {
    let axes = all_axes(f);
    require_tags(f, &axes, Space::Position)?;
    transform_axes(f, &axes, Direction::Forward)
}

pub fn inverse_fourier_continuous(f: &GridField) -> Result<GridField> {
    let axes = all_axes(f);
    require_tags(f, &axes, Space::Frequency)?;
    transform_axes(f, &axes, Direction::Inverse)
}

/// Real partial transform along `axes`.
pub fn fourier_partial(f: &GridField, axes: &[usize]) -> Result<GridField> {
    require_tags(f, axes, Space::Position)?;
    transform_axes(f, axes, Direction::Forward)
}

pub fn inverse_fourier_partial(f: &GridField, axes: &[usize]) -> Result<GridField> {
    require_tags(f, axes, Space::Frequency)?;
    transform_axes(f, axes, Direction::Inverse)
}

fn check_even(f: &GridField) -> Result<usize> {
    if f.dims() % 2 != 0 {
        return Err(Error::InvalidParameter(format!("dimension {} is not even", f.dims())));
    }
    Ok(f.dims() / 2)
}

/// Precomposition with `eps` on the given complex coordinates, i.e. reversal
/// of their imaginary axes.
fn conjugate_coords(f: &GridField, coords: &[usize]) -> Result<GridField> {
    let big_n = check_even(f)?;
    let d = f.dims();
    let perm: Vec<usize> = (0..d).collect();
    let mut signs = vec![1.0; d];
    for &k in coords {
        signs[big_n + k] = -1.0;
    }
    f.signed_permute(&perm, &signs)
}

/// `F_eps f = (F f)^eps`, the complex Fourier transform of `C^N` in real coordinates.
pub fn fourier_eps(f: &GridField) -> Result<GridField> {
    let big_n = check_even(f)?;
    let g = fourier_continuous(f)?;
    conjugate_coords(&g, &(0..big_n).collect::<Vec<_>>())
}

/// Partial complex transform `int f(.., X_k, ..) e^{-2 pi i Re <X_k, xi_k>} dX_k`
/// over the complex coordinates `coords`, or its inverse. Space tags are not
/// checked, since the transform is used here as an operator on functions.
pub fn fourier_complex_partial(f: &GridField, coords: &[usize], dir: Direction) -> Result<GridField> {
    let big_n = check_even(f)?;
    if coords.iter().any(|&k| k >= big_n) {
        return Err(Error::InvalidParameter(format!("complex coordinates {coords:?} out of range")));
    }
    let axes: Vec<usize> = coords.iter().flat_map(|&k| [k, big_n + k]).collect();
    match dir {
        Direction::Forward => conjugate_coords(&transform_axes(f, &axes, dir)?, coords),
        Direction::Inverse => transform_axes(&conjugate_coords(f, coords)?, &axes, dir),
    }
}

/// `F_symp f(xi) = F_{C^N} f(J xi)`. As an operator on functions of `C^N`
/// it ignores space tags; the transformed axes swap extents under `J`.
pub fn fourier_symplectic(f: &GridField) -> Result<GridField> {
    let big_n = check_even(f)?;
    let g = fourier_complex_partial(f, &(0..big_n).collect::<Vec<_>>(), Direction::Forward)?;
    let (perm, signs) = j_permutation(big_n)?;
    g.signed_permute(&perm, &signs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(x: &[f64]) -> Complex64 {
        Complex64::new((-PI * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)
    }

    fn max_err(g: &GridField, f: impl Fn(&[f64]) -> Complex64) -> f64 {
        (0..g.len()).map(|i| (g.values()[i] - f(&g.point(i))).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn gaussian_self_dual() {
        let f = GridField::sample(2, 64, 6.0, gauss).unwrap();
        let g = fourier_continuous(&f).unwrap();
        assert_eq!(g.tags(), &[Space::Frequency, Space::Frequency]);
        let expect = GridField::sample_with(64, g.extents().to_vec(), g.tags().to_vec(), gauss).unwrap();
        assert!(g.rel_l2_diff(&expect).unwrap() < 1e-6);
    }

    #[test]
    fn shift_theorem() {
        let a = 0.7;
        let f = GridField::sample(1, 64, 6.0, |x| gauss(&[x[0] - a])).unwrap();
        let g = fourier_continuous(&f).unwrap();
        let err = max_err(&g, |xi| gauss(xi) * Complex64::from_polar(1.0, -2.0 * PI * a * xi[0]));
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn round_trip_and_parseval() {
        let f = GridField::sample(3, 16, 3.0, |x| Complex64::new(x[0].sin() + x[1], x[2] * x[0])).unwrap();
        let g = fourier_continuous(&f).unwrap();
        assert!((g.l2_norm() - f.l2_norm()).abs() < 1e-10 * f.l2_norm());
        let back = inverse_fourier_continuous(&g).unwrap();
        assert!(back.rel_l2_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn tag_mismatch() {
        let f = GridField::sample(2, 8, 2.0, gauss).unwrap();
        let g = fourier_continuous(&f).unwrap();
        assert!(matches!(fourier_continuous(&g), Err(Error::SpaceTag(_))));
        assert!(matches!(inverse_fourier_continuous(&f), Err(Error::SpaceTag(_))));
        assert!(fourier_partial(&f, &[0, 0]).is_err());
        assert!(fourier_partial(&f, &[2]).is_err());
    }

    #[test]
    fn partial_transforms_compose() {
        let f = GridField::sample(3, 16, 3.0, |x| gauss(x) * Complex64::new(1.0 + x[0], x[1] - x[2])).unwrap();
        let full = fourier_continuous(&f).unwrap();
        let split = fourier_partial(&fourier_partial(&f, &[0, 2]).unwrap(), &[1]).unwrap();
        assert!(split.rel_l2_diff(&full).unwrap() < 1e-12);
        assert_eq!(fourier_partial(&f, &[]).unwrap(), f);
    }

    #[test]
    fn symplectic_is_an_involution() {
        let f = GridField::sample(4, 16, 3.0, |x| gauss(&[x[0] - 0.3, x[1], 1.2 * x[2], x[3] + 0.1]) * Complex64::new(1.0, x[1])).unwrap();
        let g = fourier_symplectic(&fourier_symplectic(&f).unwrap()).unwrap();
        assert_eq!(g.extents(), f.extents());
        let err = g.values().iter().zip(f.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
        // L = sqrt(M)/2 makes the grid self-dual.
        let radial = GridField::sample(4, 16, 2.0, gauss).unwrap();
        let s = fourier_symplectic(&radial).unwrap();
        assert_eq!(s.extents(), radial.extents());
        let err = s.values().iter().zip(radial.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn feps_matches_direct_quadrature() {
        // Tiny 8^4 grid: compare against the defining Riemann sum.
        let f = GridField::sample(4, 8, 2.0, |x| gauss(x) * Complex64::new(1.0 + x[0] * x[3], x[2])).unwrap();
        let g = fourier_symplectic(&f).unwrap();
        let vol = f.cell_volume();
        let mut worst: f64 = 0.0;
        for idx in [0usize, 5, 77, 1000, 4095] {
            let xi = g.point(idx);
            let jxi = crate::polyharm::j_apply(&xi).unwrap();
            let u = crate::polyharm::eps_apply(&jxi);
            let direct: Complex64 = (0..f.len())
                .map(|i| {
                    let x = f.point(i);
                    let ph: f64 = x.iter().zip(&u).map(|(a, b)| a * b).sum();
                    f.values()[i] * Complex64::from_polar(vol, -2.0 * PI * ph)
                })
                .sum();
            worst = worst.max((direct - g.values()[idx]).norm());
        }
        assert!(worst < 1e-12, "{worst}");
    }
}
