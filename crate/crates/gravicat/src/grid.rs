//! Uniform periodic grids in 1D and 3D.
//!
//! Coordinate convention: the box is centered on the origin and sample
//! points sit at half-cell offsets, x_i = (i + 1/2 − n/2)·dx. With an even
//! number of points the map x → −x is exactly i → n−1−i on the lattice, so
//! parity is an exact grid symmetry. File headers record this convention.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
    box_length: f64,
}

impl Grid {
    /// A 1D grid with `n` points (power of two, ≥ 16) over a box of the
    /// given length.
    pub fn new_1d(n: usize, box_length: f64) -> Result<Self> {
        Self::new(1, n, box_length)
    }

    /// A cubic 3D grid with `n` points per axis.
    pub fn new_3d(n: usize, box_length: f64) -> Result<Self> {
        Self::new(3, n, box_length)
    }

    fn new(dim: usize, n: usize, box_length: f64) -> Result<Self> {
        if dim != 1 && dim != 3 {
            return Err(Error::Parameter(format!("dim must be 1 or 3, got {dim}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "n_points must be a power of two >= 16, got {n}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::Parameter(format!(
                "box_length must be finite and positive, got {box_length}"
            )));
        }
        Ok(Grid { dim, n, box_length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of grid points (n in 1D, n³ in 3D).
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Volume element dx^dim.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of index `i` along one axis (half-cell offset).
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 + 0.5 - self.n as f64 / 2.0) * self.spacing()
    }

    /// All axis coordinates.
    pub fn axis_coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    /// Angular wavenumber for FFT bin `j` along one axis. The Nyquist bin
    /// is mapped to −n/2 · 2π/L; callers squaring k never see the sign.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as i64;
        let j = j as i64;
        let signed = if j < n / 2 { j } else { j - n };
        2.0 * std::f64::consts::PI * signed as f64 / self.box_length
    }

    /// Flat index of (i, j, k) in row-major order (k fastest).
    pub fn index_3d(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self == other
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{}D n={} L={} vs {}D n={} L={}",
                self.dim, self.n, self.box_length, other.dim, other.n, other.box_length
            )))
        }
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim == expected {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected,
                got: self.dim,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_construction() {
        assert!(Grid::new_1d(12, 10.0).is_err());
        assert!(Grid::new_1d(100, 10.0).is_err()); // not a power of two
        assert!(Grid::new_1d(64, -1.0).is_err());
        assert!(Grid::new(2, 64, 10.0).is_err());
    }

    #[test]
    fn half_cell_offset_is_parity_exact() {
        let g = Grid::new_1d(64, 16.0).unwrap();
        for i in 0..64 {
            let x = g.coord(i);
            let xr = g.coord(63 - i);
            assert_eq!(x, -xr);
        }
        // no sample exactly at the origin
        assert!(g.axis_coords().iter().all(|&x| x != 0.0));
    }

    #[test]
    fn wavenumbers_cover_both_signs() {
        let g = Grid::new_1d(16, 8.0).unwrap();
        let dk = 2.0 * std::f64::consts::PI / 8.0;
        assert_eq!(g.wavenumber(0), 0.0);
        assert!((g.wavenumber(1) - dk).abs() < 1e-15);
        assert!((g.wavenumber(15) + dk).abs() < 1e-15);
        assert!((g.wavenumber(8) + 8.0 * dk).abs() < 1e-15);
    }
}
