use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether an axis carries position or frequency samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    Position,
    Frequency,
}

impl Space {
    pub fn dual(self) -> Self {
        match self {
            Space::Position => Space::Frequency,
            Space::Frequency => Space::Position,
        }
    }
}

/// Anything that can be evaluated at a point of `R^dims`.
pub trait EvaluableField {
    fn dims(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Result<Complex64>;
    /// Box outside which evaluation fails, if any.
    fn domain(&self) -> Option<Vec<(f64, f64)>> {
        None
    }
}

/// A closure viewed as a field.
pub struct FnField<F> {
    dims: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Complex64> FnField<F> {
    pub fn new(dims: usize, f: F) -> Self {
        Self { dims, f }
    }
}

impl<F: Fn(&[f64]) -> Complex64> EvaluableField for FnField<F> {
    fn dims(&self) -> usize {
        self.dims
    }

    fn eval(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.dims {
            return Err(Error::ArityMismatch { expected: self.dims, got: x.len() });
        }
        Ok((self.f)(x))
    }
}

/// Complex samples on a half-offset uniform grid: along an axis of half-width
/// `L` with `M` points the samples sit at `-L + (t + 1/2) 2L/M`, so no sample
/// lies on a coordinate hyperplane. The last axis varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    m: usize,
    extents: Vec<f64>,
    tags: Vec<Space>,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn new(m: usize, extents: Vec<f64>, tags: Vec<Space>, values: Vec<Complex64>) -> Result<Self> {
        if !m.is_power_of_two() || m < 2 {
            return Err(Error::InvalidParameter(format!("points per axis {m} must be a power of two >= 2")));
        }
        if extents.is_empty() || extents.len() != tags.len() {
            return Err(Error::InvalidParameter("one extent and one tag per axis".into()));
        }
        if extents.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::InvalidParameter("extents must be positive".into()));
        }
        let len = m.checked_pow(extents.len() as u32).ok_or_else(|| Error::Budget("grid too large".into()))?;
        if values.len() != len {
            return Err(Error::ArityMismatch { expected: len, got: values.len() });
        }
        Ok(Self { m, extents, tags, values })
    }

    /// Samples `f` on a position grid with the same half-width on every axis.
    pub fn sample<F: FnMut(&[f64]) -> Complex64>(dims: usize, m: usize, l: f64, f: F) -> Result<Self> {
        Self::sample_with(m, vec![l; dims], vec![Space::Position; dims], f)
    }

    pub fn sample_with<F: FnMut(&[f64]) -> Complex64>(
        m: usize,
        extents: Vec<f64>,
        tags: Vec<Space>,
        mut f: F,
    ) -> Result<Self> {
        let dims = extents.len();
        let len = m.checked_pow(dims as u32).ok_or_else(|| Error::Budget("grid too large".into()))?;
        let mut g = Self::new(m, extents, tags, vec![Complex64::default(); len])?;
        let mut x = vec![0.0; dims];
        for idx in 0..len {
            g.point_into(idx, &mut x);
            g.values[idx] = f(&x);
        }
        Ok(g)
    }

    pub fn dims(&self) -> usize {
        self.extents.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn tags(&self) -> &[Space] {
        &self.tags
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn set_axis(&mut self, axis: usize, extent: f64, tag: Space) {
        self.extents[axis] = extent;
        self.tags[axis] = tag;
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.extents[axis] / self.m as f64
    }

    pub fn coord(&self, axis: usize, t: usize) -> f64 {
        -self.extents[axis] + (t as f64 + 0.5) * self.spacing(axis)
    }

    /// Stride of `axis` in the flat value array.
    pub fn stride(&self, axis: usize) -> usize {
        self.m.pow((self.dims() - 1 - axis) as u32)
    }

    pub fn index_of(&self, multi: &[usize]) -> usize {
        multi.iter().fold(0, |acc, &t| acc * self.m + t)
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims()];
        for a in (0..self.dims()).rev() {
            out[a] = idx % self.m;
            idx /= self.m;
        }
        out
    }

    pub fn point_into(&self, mut idx: usize, x: &mut [f64]) {
        for a in (0..self.dims()).rev() {
            x[a] = self.coord(a, idx % self.m);
            idx /= self.m;
        }
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dims()];
        self.point_into(idx, &mut x);
        x
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dims()).map(|a| self.spacing(a)).product()
    }

    /// Discrete approximation of the continuous L2 norm.
    pub fn l2_norm(&self) -> f64 {
        (self.cell_volume() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Discrete approximation of `int f conj(g)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grid(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum::<Complex64>() * self.cell_volume())
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.dims() != other.dims() {
            return Err(Error::ArityMismatch { expected: self.len(), got: other.len() });
        }
        for a in 0..self.dims() {
            if self.tags[a] != other.tags[a] {
                return Err(Error::SpaceTag(format!("axis {a}: {:?} vs {:?}", self.tags[a], other.tags[a])));
            }
            if (self.extents[a] - other.extents[a]).abs() > 1e-12 * self.extents[a] {
                return Err(Error::InvalidParameter(format!("axis {a} extents differ")));
            }
        }
        Ok(())
    }

    /// `||self - other|| / ||other||` on a common grid.
    pub fn rel_l2_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        let num: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = other.values.iter().map(|b| b.norm_sqr()).sum();
        Ok((num / den.max(f64::MIN_POSITIVE)).sqrt())
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        let mut g = self.clone();
        g.values.iter_mut().for_each(|v| *v = f(*v));
        g
    }

    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &Self, f: F) -> Result<Self> {
        self.check_same_grid(other)?;
        let mut g = self.clone();
        g.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a = f(*a, *b));
        Ok(g)
    }

    /// Reindexes by a signed axis permutation: the output at `xi` is the input
    /// at the point with coordinates `signs[k] * xi[perm[k]]`. Negation is an
    /// index reversal because every axis is symmetric about 0; output axis
    /// `perm[k]` inherits the extent and tag of input axis `k`.
    pub fn signed_permute(&self, perm: &[usize], signs: &[f64]) -> Result<Self> {
        let d = self.dims();
        if perm.len() != d || signs.len() != d {
            return Err(Error::ArityMismatch { expected: d, got: perm.len() });
        }
        let mut seen = vec![false; d];
        for &p in perm {
            if p >= d || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
        }
        let mut out = self.clone();
        for k in 0..d {
            out.extents[perm[k]] = self.extents[k];
            out.tags[perm[k]] = self.tags[k];
        }
        let mut src = vec![0; d];
        for idx in 0..self.len() {
            let s = out.multi_index(idx);
            for k in 0..d {
                let t = s[perm[k]];
                src[k] = if signs[k] > 0.0 { t } else { self.m - 1 - t };
            }
            out.values[idx] = self.values[self.index_of(&src)];
        }
        Ok(out)
    }

    /// Flat binary layout: `dims` (u64 LE), `M` (u64 LE), `L` (f64 LE), then
    /// the samples in row-major order as little-endian `(re, im)` f64 pairs.
    /// All axes must share one half-width; tags are not stored and read back
    /// as position.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let l = self.extents[0];
        if self.extents.iter().any(|e| (e - l).abs() > 0.0) {
            return Err(Error::InvalidParameter("binary layout needs a common extent".into()));
        }
        w.write_all(&(self.dims() as u64).to_le_bytes())?;
        w.write_all(&(self.m as u64).to_le_bytes())?;
        w.write_all(&l.to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        let dims = u64::from_le_bytes(b) as usize;
        r.read_exact(&mut b)?;
        let m = u64::from_le_bytes(b) as usize;
        r.read_exact(&mut b)?;
        let l = f64::from_le_bytes(b);
        if dims == 0 || dims > 16 {
            return Err(Error::InvalidParameter(format!("unsupported dimension {dims}")));
        }
        let len = m.checked_pow(dims as u32).ok_or_else(|| Error::Budget("grid too large".into()))?;
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            r.read_exact(&mut b)?;
            let re = f64::from_le_bytes(b);
            r.read_exact(&mut b)?;
            values.push(Complex64::new(re, f64::from_le_bytes(b)));
        }
        Self::new(m, vec![l; dims], vec![Space::Position; dims], values)
    }
}

impl EvaluableField for GridField {
    fn dims(&self) -> usize {
        self.extents.len()
    }

    /// Multilinear interpolation between the sample points.
    fn eval(&self, x: &[f64]) -> Result<Complex64> {
        let d = self.dims();
        if x.len() != d {
            return Err(Error::ArityMismatch { expected: d, got: x.len() });
        }
        let mut base = vec![0usize; d];
        let mut frac = vec![0.0; d];
        for a in 0..d {
            let u = (x[a] - self.coord(a, 0)) / self.spacing(a);
            if !(0.0..=(self.m - 1) as f64).contains(&u) {
                return Err(Error::Domain(format!("coordinate {} = {} outside the sampled box", a, x[a])));
            }
            let t = (u.floor() as usize).min(self.m - 2);
            base[a] = t;
            frac[a] = u - t as f64;
        }
        let mut acc = Complex64::default();
        let mut corner = vec![0usize; d];
        for mask in 0..(1usize << d) {
            let mut w = 1.0;
            for a in 0..d {
                let bit = (mask >> a) & 1;
                corner[a] = base[a] + bit;
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
            }
            if w != 0.0 {
                acc += self.values[self.index_of(&corner)] * w;
            }
        }
        Ok(acc)
    }

    fn domain(&self) -> Option<Vec<(f64, f64)>> {
        Some((0..self.dims()).map(|a| (self.coord(a, 0), self.coord(a, self.m - 1))).collect())
    }
}
