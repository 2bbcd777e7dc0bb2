//! Property tests for the field layer: sesquilinearity, Parseval,
//! snapshot round trips, and trace-distance structure on random small
//! ensembles, checked against the dense-matrix oracle.

mod common;

use gravicat::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn small_grid() -> Grid {
    Grid::new_1d(32, 12.0).unwrap()
}

/// Random normalized band-limited state on the 32-point grid: a handful
/// of low-wavenumber modes, as physical states are (nothing at Nyquist).
fn arb_state() -> impl Strategy<Value = WaveFunction> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9).prop_filter_map(
        "state must have nonzero norm",
        |modes| {
            let grid = small_grid();
            let n = grid.n();
            let amps: Vec<Complex64> = (0..n)
                .map(|i| {
                    let x = grid.coord(i);
                    let mut acc = Complex64::ZERO;
                    for (m, (re, im)) in modes.iter().enumerate() {
                        let k = 2.0 * std::f64::consts::PI * (m as f64 - 4.0)
                            / grid.box_length();
                        acc += Complex64::new(*re, *im) * Complex64::from_polar(1.0, k * x);
                    }
                    acc
                })
                .collect();
            WaveFunction::from_amplitudes(grid, amps).ok()
        },
    )
}

/// Random ensemble of up to 3 members with normalized weights.
fn arb_ensemble() -> impl Strategy<Value = PureEnsemble> {
    (
        proptest::collection::vec(arb_state(), 1..=3),
        proptest::collection::vec(0.05f64..1.0, 3),
    )
        .prop_map(|(states, raw_w)| {
            let k = states.len();
            let total: f64 = raw_w[..k].iter().sum();
            let members: Vec<(f64, WaveFunction)> = states
                .into_iter()
                .zip(raw_w.iter().map(|w| w / total))
                .map(|(s, w)| (w, s))
                .collect();
            // exact unit sum after normalization up to roundoff; nudge the
            // first weight to absorb it
            let mut members = members;
            let sum: f64 = members.iter().map(|(w, _)| w).sum();
            members[0].0 += 1.0 - sum;
            PureEnsemble::new(members).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_is_sesquilinear_and_bounded(a in arb_state(), b in arb_state(),
                                         re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let lambda = Complex64::new(re, im);
        let ab = a.inner(&b).unwrap();
        // conjugate symmetry
        let ba = b.inner(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
        // linearity in the second slot: ⟨a|λb⟩ = λ⟨a|b⟩ (checked via a
        // manually scaled unnormalized state)
        let scaled = WaveFunction::from_raw_parts(
            *b.grid(),
            b.amplitudes().iter().map(|x| lambda * x).collect(),
        ).unwrap();
        let asb = a.inner(&scaled).unwrap();
        prop_assert!((asb - lambda * ab).norm() < 1e-12);
        // Cauchy-Schwarz for normalized states
        prop_assert!(ab.norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn spectrum_preserves_norm(a in arb_state()) {
        let spec = a.spectrum();
        let n = a.grid().len() as f64;
        let direct: f64 = a.amplitudes().iter().map(|x| x.norm_sqr()).sum();
        let via_spec: f64 = spec.iter().map(|x| x.norm_sqr()).sum::<f64>() / n;
        prop_assert!((direct - via_spec).abs() / direct < 1e-12);
    }

    #[test]
    fn trace_distance_matches_dense_oracle(e1 in arb_ensemble(), e2 in arb_ensemble()) {
        let fast = gram_trace_distance(&e1, &e2).unwrap();
        let dense = common::dense_trace_distance(&e1, &e2);
        prop_assert!((fast - dense).abs() < 1e-8,
            "gram {fast} vs dense {dense}");
    }

    #[test]
    fn trace_distance_is_metric_like(e1 in arb_ensemble(), e2 in arb_ensemble(), e3 in arb_ensemble()) {
        let d12 = gram_trace_distance(&e1, &e2).unwrap();
        let d21 = gram_trace_distance(&e2, &e1).unwrap();
        prop_assert!((d12 - d21).abs() < 1e-10);
        prop_assert!((0.0..=1.0).contains(&d12));
        let d13 = gram_trace_distance(&e1, &e3).unwrap();
        let d23 = gram_trace_distance(&e2, &e3).unwrap();
        prop_assert!(d13 <= d12 + d23 + 1e-9);
        // identity of indiscernibles (same ensemble)
        let d11 = gram_trace_distance(&e1, &e1).unwrap();
        prop_assert!(d11 < 1e-10);
    }

    #[test]
    fn snapshot_round_trip_is_bit_exact(a in arb_state()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.wf");
        gravicat::io::write_wavefunction(&path, &a, UnitSystem::Dimensionless).unwrap();
        let (back, _) = gravicat::io::read_wavefunction(&path).unwrap();
        for (x, y) in a.amplitudes().iter().zip(back.amplitudes()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn translation_composes_and_preserves_norm(a in arb_state(),
                                               d1 in -3.0f64..3.0, d2 in -3.0f64..3.0) {
        let t1 = a.translated(d1, 0).unwrap();
        let t12 = t1.translated(d2, 0).unwrap();
        let direct = a.translated(d1 + d2, 0).unwrap();
        let dv = a.grid().cell_volume();
        let err: f64 = t12.amplitudes().iter().zip(direct.amplitudes())
            .map(|(x, y)| (x - y).norm_sqr() * dv).sum::<f64>().sqrt();
        prop_assert!(err < 1e-9, "composition error {err}");
        prop_assert!((t12.norm() - 1.0).abs() < 1e-9);
    }
}
