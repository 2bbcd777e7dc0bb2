//! Potential solvers against independent references: direct O(N²)
//! summation, the closed-form Gaussian-density potential, and the
//! point-mass limit.

mod common;

use gravicat::*;
use num_complex::Complex64;

#[test]
fn spectral_matches_direct_summation_1d() {
    let grid = Grid::new_1d(128, 30.0).unwrap();
    let params = Params::dimensionless(1.0).unwrap();
    // a lopsided two-bump state so nothing cancels by symmetry
    let psi = WaveFunction::from_fn(grid, |x| {
        Complex64::new(
            (-0.5 * ((x[0] + 4.0) / 1.3).powi(2)).exp()
                + 0.6 * (-0.5 * ((x[0] - 6.0) / 0.9).powi(2)).exp(),
            0.0,
        )
    })
    .unwrap();
    let a = 0.7;
    let spectral = potentials::newton_potential_1d(&psi, &params, a).unwrap();
    let direct = common::direct_potential_1d(&psi, params.gravity, params.mass, a);
    for (s, d) in spectral.values().iter().zip(&direct) {
        assert!(
            (s - d).abs() / d.abs() < 1e-6,
            "spectral {s} vs direct {d}"
        );
    }
}

#[test]
fn spectral_matches_direct_summation_3d() {
    let grid = Grid::new_3d(16, 10.0).unwrap();
    let params = Params::dimensionless(1.0).unwrap();
    // uniform state: worst case for image/padding errors
    let psi = WaveFunction::from_fn(grid, |_| Complex64::ONE).unwrap();
    let spectral = potentials::newton_potential_3d(&psi, &params).unwrap();
    let direct = common::direct_potential_3d(&psi, params.gravity, params.mass);
    let mut worst = 0.0f64;
    for (s, d) in spectral.values().iter().zip(&direct) {
        worst = worst.max((s - d).abs() / d.abs());
    }
    assert!(worst < 1e-6, "worst relative deviation {worst:.2e}");
    // min/max spread agrees too
    let min_s = spectral.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let max_s = spectral.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_d = direct.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_d = direct.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(((max_s - min_s) - (max_d - min_d)).abs() / (max_d - min_d) < 1e-6);
}

#[test]
fn gaussian_density_potential_matches_closed_form() {
    // Φ(r) = −(GM/r)·erf(r/(σ√2)) for an isotropic Gaussian density of
    // std σ, independently validated by radial quadrature
    let grid = Grid::new_3d(64, 24.0).unwrap();
    let params = Params::dimensionless(1.0).unwrap();
    let sigma = 1.5; // density std; wavefunction width is σ√2
    let psi = WaveFunction::gaussian_3d(grid, [0.0; 3], sigma * 2.0f64.sqrt()).unwrap();
    let field = potentials::newton_potential_3d(&psi, &params).unwrap();
    let n = grid.n();
    for i in 0..n {
        let x = grid.coord(i);
        let r = x.abs();
        if r < sigma || r > 4.0 * sigma {
            continue;
        }
        // sample along the x axis at the two central transverse cells
        let j = n / 2;
        let idx = grid.index_3d(i, j, j);
        let y0 = grid.coord(j);
        let rr = (x * x + 2.0 * y0 * y0).sqrt();
        let expected = common::gaussian_potential_quadrature(rr, sigma, params.gravity, params.mass);
        let got = field.values()[idx];
        assert!(
            (got - expected).abs() / expected.abs() < 0.01,
            "r = {rr:.3}: {got:.6} vs quadrature {expected:.6}"
        );
    }
}

#[test]
fn point_mass_limit_3d() {
    // density concentrated in one cell: Φ ≈ −GM/|x| beyond a few cells
    let grid = Grid::new_3d(32, 16.0).unwrap();
    let params = Params::dimensionless(1.0).unwrap();
    let mut amps = vec![Complex64::ZERO; grid.len()];
    let c = grid.n() / 2;
    let center_idx = grid.index_3d(c, c, c);
    amps[center_idx] = Complex64::ONE;
    let psi = WaveFunction::from_amplitudes(grid, amps).unwrap();
    let field = potentials::newton_potential_3d(&psi, &params).unwrap();
    let x0 = grid.coord(c);
    let dx = grid.spacing();
    let n = grid.n();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = ((grid.coord(i) - x0).powi(2)
                    + (grid.coord(j) - x0).powi(2)
                    + (grid.coord(k) - x0).powi(2))
                .sqrt();
                if r < 3.0 * dx || r > 6.0 {
                    continue;
                }
                let got = field.values()[grid.index_3d(i, j, k)];
                let expected = -params.gravity * params.mass / r;
                assert!(
                    (got - expected).abs() / expected.abs() < 0.01,
                    "r = {r:.3}: {got} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn newton_potential_is_translation_covariant() {
    let grid = Grid::new_1d(256, 40.0).unwrap();
    let params = Params::dimensionless(1.0).unwrap();
    let psi = WaveFunction::gaussian_1d(grid, 0.0, 1.1).unwrap();
    let cells = 23i64;
    let shifted = psi
        .translated(cells as f64 * grid.spacing(), 0)
        .unwrap();
    let base = potentials::newton_potential_1d(&psi, &params, 0.5).unwrap();
    let moved = potentials::newton_potential_1d(&shifted, &params, 0.5).unwrap();
    let n = grid.n() as i64;
    for i in 0..n {
        let j = ((i - cells) % n + n) % n;
        let a = moved.values()[i as usize];
        let b = base.values()[j as usize];
        // the shifted source sits away from the padding edge, so the open
        // convolution values transport exactly up to roundoff
        if (i - cells
            - if i - cells < 0 { -n } else { 0 })
            .abs()
            < n - 40
        {
            assert!(
                (a - b).abs() <= 1e-12 * b.abs().max(1e-3),
                "i={i}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn potential_scales_in_coupling_and_amplitude() {
    let grid = Grid::new_1d(256, 40.0).unwrap();
    let psi = WaveFunction::gaussian_1d(grid, 0.5, 1.0).unwrap();
    let p1 = Params::dimensionless(1.0).unwrap();
    let base = potentials::newton_potential_1d(&psi, &p1, 1.0).unwrap();
    // linear in G (via a fake dimensionless-parameter change through mass:
    // Φ ∝ G·M for fixed density)
    let p2 = p1.with_mass(2.0).unwrap();
    let doubled = potentials::newton_potential_1d(&psi, &p2, 1.0).unwrap();
    for (a, b) in doubled.values().iter().zip(base.values()) {
        assert!((a - 2.0 * b).abs() <= 1e-12 * b.abs().max(1e-9));
    }
    // quadratic in the amplitude scale before renormalization
    let scaled_amps: Vec<Complex64> = psi.amplitudes().iter().map(|a| a * 3.0).collect();
    let scaled = WaveFunction::from_raw_parts(grid, scaled_amps).unwrap();
    let nine = potentials::newton_potential_1d(&scaled, &p1, 1.0).unwrap();
    for (a, b) in nine.values().iter().zip(base.values()) {
        assert!((a - 9.0 * b).abs() <= 1e-11 * b.abs().max(1e-9));
    }
}

#[test]
fn contractive_ground_state_width_oracle() {
    // self-consistent contractive ground state matches the oscillator
    // Gaussian with Mω² = α² for several stiffnesses and masses
    for &(mass, alpha) in &[(1.0f64, 1.0f64), (2.0, 0.7), (0.5, 1.6)] {
        let grid = Grid::new_1d(512, 30.0).unwrap();
        let params = Params::dimensionless(mass)
            .unwrap()
            .with_alpha(alpha)
            .unwrap();
        let guess = WaveFunction::gaussian_1d(grid, 0.0, 1.1).unwrap();
        let sol = relax_imaginary(&guess, &params, &StateDependentPotential::Janossy, 1e-10)
            .unwrap();
        let var_expected = params.hbar / (2.0 * mass.sqrt() * alpha);
        let var_got = sol.state.axis_std(0).powi(2);
        assert!(
            (var_got - var_expected).abs() / var_expected < 1e-5,
            "M={mass} α={alpha}: variance {var_got} vs {var_expected}"
        );
    }
}
