//! State-dependent potentials: the 3D Newtonian self-potential, its
//! softened 1D analogue, and the contractive (Jánossy) potential.
//!
//! Newton potentials are evaluated by zero-padded spectral convolution
//! (box doubled per axis) against the open-boundary kernel, so an isolated
//! source feels no periodic images. The 3D 1/r kernel is point-sampled
//! except for the singular cell, which carries the analytic average of 1/r
//! over one cell; the 1D kernel uses the analytic cell average everywhere
//! (its antiderivative is asinh).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::Params;
use crate::spectral;
use crate::wavefunction::WaveFunction;

/// Which state-dependent potential drives the evolution. `None` is the
/// linear limit (identically zero potential).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StateDependentPotential {
    None,
    Newton3d,
    Newton1dSoft { softening: f64 },
    /// Contractive ½α²(x − ⟨x⟩)² with stiffness taken from `Params::alpha`.
    Janossy,
}

impl StateDependentPotential {
    /// Evaluate the potential sourced by `psi`. Newton values are per unit
    /// mass (the Hamiltonian couples them as M·Φ); the contractive values
    /// are energies.
    pub fn evaluate(&self, psi: &WaveFunction, params: &Params) -> Result<PotentialField> {
        match self {
            StateDependentPotential::None => Ok(PotentialField {
                grid: *psi.grid(),
                values: vec![0.0; psi.grid().len()],
            }),
            StateDependentPotential::Newton3d => newton_potential_3d(psi, params),
            StateDependentPotential::Newton1dSoft { softening } => {
                newton_potential_1d(psi, params, *softening)
            }
            StateDependentPotential::Janossy => janossy_potential(psi, params),
        }
    }

    /// Factor turning stored values into energies: M for Newton kinds
    /// (Eq. of motion couples MΦ), 1 otherwise.
    pub fn energy_coupling(&self, params: &Params) -> f64 {
        match self {
            StateDependentPotential::Newton3d | StateDependentPotential::Newton1dSoft { .. } => {
                params.mass
            }
            _ => 1.0,
        }
    }

    /// The self-consistent Newton term enters the energy functional with a
    /// factor ½; external-style potentials enter in full.
    pub fn self_energy_factor(&self) -> f64 {
        match self {
            StateDependentPotential::Newton3d | StateDependentPotential::Newton1dSoft { .. } => 0.5,
            _ => 1.0,
        }
    }

    pub fn is_gravitational(&self) -> bool {
        matches!(
            self,
            StateDependentPotential::Newton3d | StateDependentPotential::Newton1dSoft { .. }
        )
    }
}

/// A real potential sampled on a grid.
#[derive(Debug, Clone)]
pub struct PotentialField {
    grid: Grid,
    values: Vec<f64>,
}

impl PotentialField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Φ(x) = −GM ∫ |ψ(r)|² / |x−r| d³r on a 3D grid.
pub fn newton_potential_3d(psi: &WaveFunction, params: &Params) -> Result<PotentialField> {
    psi.grid().check_dim(3)?;
    let grid = *psi.grid();
    let kernel = kernel_hat_3d(&grid);
    let conv = convolve_open_3d(&psi.density(), &grid, &kernel);
    let scale = -params.gravity * params.mass * grid.cell_volume();
    Ok(PotentialField {
        grid,
        values: conv.into_iter().map(|v| v * scale).collect(),
    })
}

/// Φ(x) = −GM ∫ |ψ(y)|² / √((x−y)² + a²) dy on a 1D grid.
pub fn newton_potential_1d(psi: &WaveFunction, params: &Params, softening: f64) -> Result<PotentialField> {
    psi.grid().check_dim(1)?;
    if !(softening.is_finite() && softening > 0.0) {
        return Err(Error::Parameter(format!(
            "softening length must be positive, got {softening}"
        )));
    }
    let grid = *psi.grid();
    let kernel = kernel_hat_1d(&grid, softening);
    let conv = convolve_open_1d(&psi.density(), &grid, &kernel);
    let scale = -params.gravity * params.mass * grid.cell_volume();
    Ok(PotentialField {
        grid,
        values: conv.into_iter().map(|v| v * scale).collect(),
    })
}

/// V(x) = ½ α² (x − ⟨x⟩_ψ)² on a 1D grid.
pub fn janossy_potential(psi: &WaveFunction, params: &Params) -> Result<PotentialField> {
    psi.grid().check_dim(1)?;
    let grid = *psi.grid();
    let center = psi.expectation_x()[0];
    let a2 = params.alpha * params.alpha;
    let values = (0..grid.n())
        .map(|i| {
            let d = grid.coord(i) - center;
            0.5 * a2 * d * d
        })
        .collect();
    Ok(PotentialField { grid, values })
}

// ---------------------------------------------------------------------------
// open-boundary convolution plumbing

type KernelCache = Mutex<HashMap<(usize, u64, u64), Arc<Vec<Complex64>>>>;

fn kernel_cache() -> &'static KernelCache {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Signed displacement (in cells) for padded bin `m` out of `2n`.
fn wrapped_index(m: usize, n: usize) -> i64 {
    let m = m as i64;
    let n = n as i64;
    if m <= n {
        m
    } else {
        m - 2 * n
    }
}

/// Signed displacement coordinate for padded bin `m` out of `2n`.
fn wrapped_displacement(m: usize, n: usize, dx: f64) -> f64 {
    wrapped_index(m, n) as f64 * dx
}

fn kernel_hat_1d(grid: &Grid, softening: f64) -> Arc<Vec<Complex64>> {
    let key = (grid.n(), grid.box_length().to_bits(), softening.to_bits());
    if let Some(k) = kernel_cache().lock().unwrap().get(&key) {
        return k.clone();
    }
    let n = grid.n();
    let dx = grid.spacing();
    let mut kernel = vec![Complex64::ZERO; 2 * n];
    for (m, v) in kernel.iter_mut().enumerate() {
        let d = wrapped_displacement(m, n, dx);
        // cell average of (u² + a²)^(−1/2): antiderivative asinh(u/a)
        let hi = ((d + 0.5 * dx) / softening).asinh();
        let lo = ((d - 0.5 * dx) / softening).asinh();
        *v = Complex64::new((hi - lo) / dx, 0.0);
    }
    spectral::forward_1d(&mut kernel);
    let arc = Arc::new(kernel);
    kernel_cache().lock().unwrap().insert(key, arc.clone());
    arc
}

fn kernel_hat_3d(grid: &Grid) -> Arc<Vec<Complex64>> {
    let key = (grid.n(), grid.box_length().to_bits(), 0u64);
    if let Some(k) = kernel_cache().lock().unwrap().get(&key) {
        return k.clone();
    }
    let n = grid.n();
    let dx = grid.spacing();
    let np = 2 * n;
    // Exact cell averages of 1/r everywhere, assembled from the closed-form
    // box integral F⁺ on the positive-octant corner lattice. Corner
    // coordinates are half-integers, so F⁺ is never evaluated at zero.
    let table: Vec<f64> = {
        let m = n + 1;
        let mut t = vec![0.0; m * m * m];
        for (idx, v) in t.iter_mut().enumerate() {
            let i = idx / (m * m);
            let j = (idx / m) % m;
            let k = idx % m;
            let x = (i as f64 + 0.5) * dx;
            let y = (j as f64 + 0.5) * dx;
            let z = (k as f64 + 0.5) * dx;
            *v = inv_r_box_antiderivative(x, y, z);
        }
        t
    };
    let m = n + 1;
    // signed 1D corner lookup: corner coordinate (q ± ½)dx for cell
    // displacement q; returns (sign, |corner|-index)
    let corner = |q: i64, hi: bool| -> (f64, usize) {
        let half_steps = 2 * q + if hi { 1 } else { -1 }; // corner = half_steps·dx/2
        let sign = if half_steps > 0 { 1.0 } else { -1.0 };
        ((if hi { 1.0 } else { -1.0 }) * sign, (half_steps.abs() as usize - 1) / 2)
    };
    let inv_vol = 1.0 / (dx * dx * dx);
    let mut kernel = vec![Complex64::ZERO; np * np * np];
    for i in 0..np {
        let qx = wrapped_index(i, n);
        for j in 0..np {
            let qy = wrapped_index(j, n);
            for k in 0..np {
                let qz = wrapped_index(k, n);
                let mut acc = 0.0;
                for hix in [false, true] {
                    let (sx, px) = corner(qx, hix);
                    for hiy in [false, true] {
                        let (sy, py) = corner(qy, hiy);
                        for hiz in [false, true] {
                            let (sz, pz) = corner(qz, hiz);
                            acc += sx * sy * sz * table[(px * m + py) * m + pz];
                        }
                    }
                }
                kernel[(i * np + j) * np + k] = Complex64::new(acc * inv_vol, 0.0);
            }
        }
    }
    // A cell-averaged kernel against point-sampled density underestimates
    // the convolution by (π/6)dx²·ρ(x): the midpoint error is
    // −(dx²/24)∫K∇²ρ and K is the Coulomb Green function. The term is
    // purely local, removed exactly by one self-cell adjustment.
    kernel[0] += Complex64::new(std::f64::consts::PI / (6.0 * dx), 0.0);
    spectral::forward_3d(&mut kernel, np);
    let arc = Arc::new(kernel);
    kernel_cache().lock().unwrap().insert(key, arc.clone());
    arc
}

/// ∫∫∫ over [0,x]×[0,y]×[0,z] of 1/r, for strictly positive x, y, z.
fn inv_r_box_antiderivative(x: f64, y: f64, z: f64) -> f64 {
    fn f(x: f64, y: f64, z: f64) -> f64 {
        let r = (x * x + y * y + z * z).sqrt();
        let mut acc = 0.0;
        if x != 0.0 && y != 0.0 {
            acc += x * y * (z + r).ln();
        }
        if y != 0.0 && z != 0.0 {
            acc += y * z * (x + r).ln();
        }
        if z != 0.0 && x != 0.0 {
            acc += z * x * (y + r).ln();
        }
        if x != 0.0 {
            acc -= 0.5 * x * x * (y * z / (x * r)).atan();
        }
        if y != 0.0 {
            acc -= 0.5 * y * y * (z * x / (y * r)).atan();
        }
        if z != 0.0 {
            acc -= 0.5 * z * z * (x * y / (z * r)).atan();
        }
        acc
    }
    f(x, y, z) - f(x, y, 0.0) - f(x, 0.0, z) - f(0.0, y, z)
}

fn convolve_open_1d(density: &[f64], grid: &Grid, kernel_hat: &[Complex64]) -> Vec<f64> {
    let n = grid.n();
    let mut padded = vec![Complex64::ZERO; 2 * n];
    for (p, d) in padded.iter_mut().zip(density) {
        *p = Complex64::new(*d, 0.0);
    }
    spectral::forward_1d(&mut padded);
    for (p, k) in padded.iter_mut().zip(kernel_hat) {
        *p *= k;
    }
    spectral::inverse_1d(&mut padded);
    padded[..n].iter().map(|v| v.re).collect()
}

fn convolve_open_3d(density: &[f64], grid: &Grid, kernel_hat: &[Complex64]) -> Vec<f64> {
    let n = grid.n();
    let np = 2 * n;
    let mut padded = vec![Complex64::ZERO; np * np * np];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                padded[(i * np + j) * np + k] =
                    Complex64::new(density[(i * n + j) * n + k], 0.0);
            }
        }
    }
    spectral::forward_3d(&mut padded, np);
    for (p, k) in padded.iter_mut().zip(kernel_hat) {
        *p *= k;
    }
    spectral::inverse_3d(&mut padded, np);
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[(i * n + j) * n + k] = padded[(i * np + j) * np + k].re;
            }
        }
    }
    out
}

/// Average of 1/|r| over a cube of side `h` centered on the origin
/// (the singular cell of the 3D kernel).
pub fn inv_r_cell_average(h: f64) -> f64 {
    let a = h / 2.0;
    8.0 * inv_r_box_antiderivative(a, a, a) / (h * h * h)
}
