//! FFT plumbing: cached plans, in-place 1D/3D transforms.
//!
//! Conventions: `forward` is the plain DFT, `inverse` carries the 1/N
//! factor, so inverse(forward(x)) == x up to roundoff and phase-only
//! multipliers in k-space preserve the L² norm exactly.
//!
//! Determinism: plans depend only on the transform size and the transforms
//! themselves are sequential per line. Rayon is used only across
//! independent lines of 3D transforms (disjoint writes, no reductions), so
//! identical inputs give bit-identical outputs for a fixed build.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (n, matches!(direction, FftDirection::Forward));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(key)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            planner.plan_fft(n, direction)
        })
        .clone()
}

/// In-place forward DFT of a 1D signal.
pub fn forward_1d(data: &mut [Complex64]) {
    let fft = plan(data.len(), FftDirection::Forward);
    let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
}

/// In-place inverse DFT of a 1D signal, normalized by 1/n.
pub fn inverse_1d(data: &mut [Complex64]) {
    let n = data.len();
    let fft = plan(n, FftDirection::Inverse);
    let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
    fft.process_with_scratch(data, &mut scratch);
    let scale = 1.0 / n as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// In-place forward DFT of an n×n×n row-major cube.
pub fn forward_3d(data: &mut [Complex64], n: usize) {
    transform_3d(data, n, FftDirection::Forward);
}

/// In-place inverse DFT of an n×n×n cube, normalized by 1/n³.
pub fn inverse_3d(data: &mut [Complex64], n: usize) {
    transform_3d(data, n, FftDirection::Inverse);
    let scale = 1.0 / (n * n * n) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

fn transform_3d(data: &mut [Complex64], n: usize, direction: FftDirection) {
    assert_eq!(data.len(), n * n * n, "cube length mismatch");
    let fft = plan(n, direction);

    // Axis 2 (contiguous lines), parallel over i-planes.
    data.par_chunks_mut(n * n).for_each(|plane| {
        let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
        for line in plane.chunks_mut(n) {
            fft.process_with_scratch(line, &mut scratch);
        }
    });

    // Axis 1 (stride-n lines within each i-plane), parallel over i-planes.
    data.par_chunks_mut(n * n).for_each(|plane| {
        let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
        let mut line = vec![Complex64::ZERO; n];
        for k in 0..n {
            for (j, v) in line.iter_mut().enumerate() {
                *v = plane[j * n + k];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (j, v) in line.iter().enumerate() {
                plane[j * n + k] = *v;
            }
        }
    });

    // Axis 0 (stride-n² lines). Sequential: lines span all planes.
    let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::ZERO; n];
    let n2 = n * n;
    for jk in 0..n2 {
        for (i, v) in line.iter_mut().enumerate() {
            *v = data[i * n2 + jk];
        }
        fft.process_with_scratch(&mut line, &mut scratch);
        for (i, v) in line.iter().enumerate() {
            data[i * n2 + jk] = *v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_signal(len: usize, seed: u64) -> Vec<Complex64> {
        // small deterministic LCG; plenty for round-trip checks
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        (0..len).map(|_| Complex64::new(next(), next())).collect()
    }

    #[test]
    fn round_trip_1d_is_identity() {
        let orig = random_signal(256, 7);
        let mut data = orig.clone();
        forward_1d(&mut data);
        inverse_1d(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip_3d_is_identity() {
        let n = 16;
        let orig = random_signal(n * n * n, 13);
        let mut data = orig.clone();
        forward_3d(&mut data, n);
        inverse_3d(&mut data, n);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn forward_3d_matches_direct_dft_on_tiny_cube() {
        // 4³ direct triple-loop DFT as an independent reference
        let n = 4;
        let orig = random_signal(n * n * n, 3);
        let mut data = orig.clone();
        forward_3d(&mut data, n);
        let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = Complex64::ZERO;
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                let phase = -2.0 * std::f64::consts::PI
                                    * ((a * i + b * j + c * k) as f64)
                                    / n as f64;
                                acc += orig[idx(i, j, k)] * Complex64::from_polar(1.0, phase);
                            }
                        }
                    }
                    assert!((acc - data[idx(a, b, c)]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn parseval_holds_to_1e12() {
        let n = 32;
        let orig = random_signal(n * n * n, 21);
        let mut data = orig.clone();
        let before: f64 = orig.iter().map(|v| v.norm_sqr()).sum();
        forward_3d(&mut data, n);
        let after: f64 = data.iter().map(|v| v.norm_sqr()).sum::<f64>() / (n * n * n) as f64;
        assert!((before - after).abs() / before < 1e-12);
    }
}
