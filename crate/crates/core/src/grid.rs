//! Uniform periodic grids and complex scalar fields sampled on them.
//!
//! Values are stored row-major with axis 0 slowest. For a 1D grid the
//! coordinate of sample `i` is `(i h, 0, 0)`.
//!
//! Binary field layout (all little-endian):
//!
//! ```text
//! u64 dims
//! u64 points            (repeated `dims` times, one per axis)
//! f64 spacing
//! f64 time_stamp
//! f64 re, f64 im        (repeated points^dims times, row-major)
//! ```

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dims: usize,
    points: usize,
    spacing: f64,
}

impl Grid {
    /// Grid of `points` samples per axis covering `length` per axis.
    pub fn new(dims: usize, points: usize, length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid(format!("grid length must be > 0, got {length}")));
        }
        Self::with_spacing(dims, points, length / points as f64)
    }

    pub fn with_spacing(dims: usize, points: usize, spacing: f64) -> Result<Self> {
        if dims != 1 && dims != 3 {
            return Err(Error::invalid(format!("grid dims must be 1 or 3, got {dims}")));
        }
        if points < MIN_POINTS {
            return Err(Error::InsufficientResolution { points, required: MIN_POINTS });
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::invalid(format!("grid spacing must be > 0, got {spacing}")));
        }
        points
            .checked_pow(dims as u32)
            .ok_or_else(|| Error::invalid("grid too large"))?;
        Ok(Self { dims, points, spacing })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn length(&self) -> f64 {
        self.spacing * self.points as f64
    }

    /// Total sample count, points^dims.
    pub fn len(&self) -> usize {
        self.points.pow(self.dims as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Per-axis indices of a flat index; unused axes are 0.
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let n = self.points;
        match self.dims {
            1 => [flat, 0, 0],
            _ => [flat / (n * n), (flat / n) % n, flat % n],
        }
    }

    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        let n = self.points;
        match self.dims {
            1 => idx[0],
            _ => (idx[0] * n + idx[1]) * n + idx[2],
        }
    }

    pub fn coords(&self, flat: usize) -> Vec3 {
        let m = self.multi_index(flat);
        let h = self.spacing;
        [m[0] as f64 * h, m[1] as f64 * h, m[2] as f64 * h]
    }

    /// Flat index of the neighbour `offset` steps along `axis`, wrapping periodically.
    pub fn shifted(&self, flat: usize, axis: usize, offset: isize) -> usize {
        debug_assert!(axis < self.dims);
        let mut m = self.multi_index(flat);
        let n = self.points as isize;
        m[axis] = (m[axis] as isize + offset).rem_euclid(n) as usize;
        self.flat_index(m)
    }

    /// Whether every neighbour within `width` steps along every axis lies
    /// inside the grid without wrapping.
    pub fn is_interior(&self, flat: usize, width: usize) -> bool {
        let m = self.multi_index(flat);
        (0..self.dims).all(|a| m[a] >= width && m[a] + width < self.points)
    }

    /// Volume element h^dims used for discrete inner products.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dims as i32)
    }
}

/// Which samples a grid-wide check looks at. `Interior` drops points whose
/// one-step stencil would wrap around, for fields that are not periodic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    #[default]
    Full,
    Interior,
}

impl Region {
    pub fn contains(self, grid: &Grid, flat: usize) -> bool {
        match self {
            Region::Full => true,
            Region::Interior => grid.is_interior(flat, 1),
        }
    }
}

/// Complex samples on a [`Grid`] at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<Complex64>,
    time: f64,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<Complex64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "field has {} values, grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values, time })
    }

    pub fn zeros(grid: Grid, time: f64) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            time,
        }
    }

    pub fn from_fn(grid: Grid, time: f64, mut f: impl FnMut(Vec3) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        Self { grid, values, time }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, time: f64) {
        self.time = time;
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            time: self.time,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete L2 norm, sqrt(sum |psi|^2 h^dims).
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// max |self - other|; grids must match.
    pub fn max_abs_diff(&self, other: &ScalarField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::invalid("fields live on different grids"));
        }
        Ok(())
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Format(e.to_string());
        w.write_all(&(self.grid.dims as u64).to_le_bytes()).map_err(io)?;
        for _ in 0..self.grid.dims {
            w.write_all(&(self.grid.points as u64).to_le_bytes()).map_err(io)?;
        }
        w.write_all(&self.grid.spacing.to_le_bytes()).map_err(io)?;
        w.write_all(&self.time.to_le_bytes()).map_err(io)?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes()).map_err(io)?;
            w.write_all(&v.im.to_le_bytes()).map_err(io)?;
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * (4 + 2 * self.values.len()));
        self.write_binary(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        fn word<R: Read>(r: &mut R) -> Result<[u8; 8]> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b).map_err(|e| Error::Format(e.to_string()))?;
            Ok(b)
        }
        let dims = u64::from_le_bytes(word(&mut r)?);
        if dims != 1 && dims != 3 {
            return Err(Error::Format(format!("unsupported dims {dims}")));
        }
        let mut axes = Vec::with_capacity(dims as usize);
        for _ in 0..dims {
            axes.push(u64::from_le_bytes(word(&mut r)?));
        }
        if axes.iter().any(|&p| p != axes[0]) {
            return Err(Error::Format(format!("non-uniform points per axis {axes:?}")));
        }
        let points = usize::try_from(axes[0]).map_err(|_| Error::Format("points overflow".into()))?;
        let spacing = f64::from_le_bytes(word(&mut r)?);
        let time = f64::from_le_bytes(word(&mut r)?);
        let grid = Grid::with_spacing(dims as usize, points, spacing)
            .map_err(|e| Error::Format(e.to_string()))?;
        let mut values = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            let re = f64::from_le_bytes(word(&mut r)?);
            let im = f64::from_le_bytes(word(&mut r)?);
            values.push(Complex64::new(re, im));
        }
        let mut trailing = [0u8; 1];
        match r.read(&mut trailing) {
            Ok(0) => {}
            Ok(_) => return Err(Error::Format("trailing bytes after field data".into())),
            Err(e) => return Err(Error::Format(e.to_string())),
        }
        Ok(Self { grid, values, time })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Self::read_binary(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_validation() {
        assert!(matches!(
            Grid::new(1, 4, 1.0),
            Err(Error::InsufficientResolution { points: 4, required: 8 })
        ));
        assert!(Grid::new(2, 16, 1.0).is_err());
        assert!(Grid::new(1, 16, 0.0).is_err());
        let g = Grid::new(3, 8, 2.0).unwrap();
        assert_eq!(g.len(), 512);
        assert_eq!(g.spacing(), 0.25);
    }

    #[test]
    fn index_round_trip_and_wrap() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        for flat in [0, 7, 8, 63, 64, 300, 511] {
            assert_eq!(g.flat_index(g.multi_index(flat)), flat);
        }
        let corner = g.flat_index([0, 0, 0]);
        assert_eq!(g.multi_index(g.shifted(corner, 1, -1)), [0, 7, 0]);
        assert_eq!(g.multi_index(g.shifted(corner, 2, 9)), [0, 0, 1]);
        assert!(!g.is_interior(corner, 1));
        assert!(g.is_interior(g.flat_index([1, 1, 1]), 1));
    }

    #[test]
    fn norm_of_unit_plane_wave() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let f = ScalarField::from_fn(g, 0.0, |r| Complex64::cis(3.0 * r[0]));
        assert!((f.l2_norm() - (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!((f.max_abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn binary_layout_header() {
        let g = Grid::with_spacing(3, 8, 0.5).unwrap();
        let f = ScalarField::from_fn(g, 1.25, |r| Complex64::new(r[0], -r[2]));
        let bytes = f.to_bytes();
        assert_eq!(bytes.len(), 8 * (1 + 3 + 2) + 16 * 512);
        assert_eq!(u64::from_le_bytes(bytes[0..8].try_into().unwrap()), 3);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 8);
        assert_eq!(f64::from_le_bytes(bytes[32..40].try_into().unwrap()), 0.5);
        assert_eq!(f64::from_le_bytes(bytes[40..48].try_into().unwrap()), 1.25);
        // sample (0,0,1): x = 0, z = 0.5
        let off = 48 + 16;
        assert_eq!(f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap()), 0.0);
        assert_eq!(f64::from_le_bytes(bytes[off + 8..off + 16].try_into().unwrap()), -0.5);
    }

    #[test]
    fn binary_rejects_truncated_and_trailing() {
        let g = Grid::new(1, 8, 1.0).unwrap();
        let f = ScalarField::zeros(g, 0.0);
        let mut bytes = f.to_bytes();
        assert!(ScalarField::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        bytes.push(0);
        assert!(ScalarField::from_bytes(&bytes).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn binary_round_trip_is_byte_exact(
                vals in proptest::collection::vec((any::<f64>(), any::<f64>()), 8),
                spacing in 1e-6f64..1e3,
                time in -1e6f64..1e6,
            ) {
                let g = Grid::with_spacing(1, 8, spacing).unwrap();
                let f = ScalarField::new(g, vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect(), time).unwrap();
                let bytes = f.to_bytes();
                let back = ScalarField::from_bytes(&bytes).unwrap();
                prop_assert_eq!(back.to_bytes(), bytes);
            }
        }
    }
}
