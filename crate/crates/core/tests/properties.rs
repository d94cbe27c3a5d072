use mqi::gates::{memory_trace, remote_entanglement, scattering_operator};
use mqi::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn amps(gamma: f64, gf: f64, gb: f64, delta: f64) -> ScatteringAmplitudes {
    amplitudes(&SystemParams::new(gamma, gf, gb).unwrap(), Detuning::new(delta).unwrap())
}

fn unit_pair() -> impl Strategy<Value = PolarizationState> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
        .prop_map(|(a, b, c, d)| {
            let n = (a * a + b * b + c * c + d * d).sqrt();
            PolarizationState::new(Complex64::new(a / n, b / n), Complex64::new(c / n, d / n)).unwrap()
        })
}

proptest! {
    #[test]
    fn lossless_scattering_is_unitary(cap in 1e-3f64..1e3, delta in -1e4f64..1e4) {
        let a = amps(0.0, cap, cap, delta);
        prop_assert!((a.r.norm_sqr() + a.t.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(scattering_operator(&a).unitarity_defect() < 1e-12);
    }

    #[test]
    fn missing_flux_is_nondirectional_emission(
        gamma in 0.0f64..20.0, gf in 0.0f64..100.0, gb in 0.0f64..100.0, delta in -500.0f64..500.0,
    ) {
        let a = amps(gamma, gf, gb, delta);
        let missing = 1.0 - a.r.norm_sqr() - a.t.norm_sqr();
        prop_assert!(missing >= -1e-12);
        prop_assert!((missing - gamma * a.phi_e.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn outputs_follow_from_the_excitation(
        gamma in 0.0f64..20.0, gf in 0.0f64..100.0, gb in 0.0f64..100.0, delta in -500.0f64..500.0,
    ) {
        let a = amps(gamma, gf, gb, delta);
        let i = Complex64::i();
        prop_assert!((a.r - (-i * gb.sqrt() * a.phi_e)).norm() < 1e-12);
        prop_assert!((a.t - (1.0 - i * gf.sqrt() * a.phi_e)).norm() < 1e-12);
    }

    #[test]
    fn lossless_amplitudes_conjugate_under_detuning_flip(cap in 1e-2f64..1e2, delta in -1e3f64..1e3) {
        let (up, down) = (amps(0.0, cap, cap, delta), amps(0.0, cap, cap, -delta));
        prop_assert!((up.t - down.t.conj()).norm() < 1e-12);
        prop_assert!((up.r - down.r.conj()).norm() < 1e-12);
    }

    #[test]
    fn uncoupled_channels_are_untouched(gamma in 0.0f64..10.0, cap in 0.0f64..100.0, delta in -300.0f64..300.0) {
        let s = scattering_operator(&amps(gamma, cap, cap, delta));
        for (atom, pol) in [(AtomState::plus(), PolarizationState::h()), (AtomState::minus(), PolarizationState::v())] {
            let u = JointState::from_parts(atom, pol);
            prop_assert_eq!(s.apply(&u), u);
        }
    }

    #[test]
    fn opposite_split_points_cancel(cap in 1e-2f64..1e2) {
        let p = SystemParams::lossless(cap).unwrap();
        let s = |d: f64| scattering_operator(&amplitudes(&p, Detuning::new(d).unwrap()));
        let product = s(cap) * s(-cap);
        prop_assert!(product.max_deviation(&JointOperator::identity()) < 1e-12);
    }

    #[test]
    fn spectrum_weights_are_normalized(
        center in -50.0f64..50.0, sigma in 0.1f64..40.0, half in 1usize..200, span in 1.0f64..8.0,
    ) {
        let s = GaussianSpectrum::new(center, sigma).unwrap().with_points(2 * half + 1).unwrap().with_span(span).unwrap();
        for weighting in [SpectralWeighting::Intensity, SpectralWeighting::Density] {
            let grid = s.grid(weighting).unwrap();
            let total: f64 = grid.iter().map(|q| q.weight).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(grid.iter().all(|q| q.weight >= 0.0));
            let mean: f64 = grid.iter().map(|q| q.weight * q.detuning).sum();
            prop_assert!((mean - center).abs() < 1e-9 * (1.0 + center.abs()));
        }
    }

    #[test]
    fn memory_matches_its_filter(
        gamma in 0.0f64..5.0, cap in 0.0f64..100.0, delta in -200.0f64..200.0, photon in unit_pair(),
    ) {
        let a = amps(gamma, cap, cap, delta);
        let trace = memory_trace(&photon, &a, &a);
        let out = gates::memory_filter(&a).apply([photon.a_h, photon.a_v]);
        let got = trace.coherent_photon2();
        prop_assert!((got[0] - out[0]).norm() < 1e-12 && (got[1] - out[1]).norm() < 1e-12);
        prop_assert!(trace.success_prob <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn averaged_metrics_are_bounded(beta in 1.0f64..80.0, sigma in 0.5f64..30.0, pulse in any::<bool>()) {
        let p = SystemParams::from_beta(beta).unwrap();
        let cap = p.coupling().unwrap();
        let avg = if pulse { SpectralAverage::PulseOverlap } else { SpectralAverage::DetuningAverage };
        let reports = [
            gate_metrics_with(GateKind::Swap, &p, &GaussianSpectrum::new(0.0, sigma).unwrap(), avg).unwrap(),
            gate_metrics_with(GateKind::Entangle, &p, &GaussianSpectrum::new(cap, sigma).unwrap(), avg).unwrap(),
            memory_metrics_with(&p, &GaussianSpectrum::new(0.0, sigma).unwrap(), avg).unwrap(),
        ];
        for r in reports {
            prop_assert!((0.0..=1.0).contains(&r.f_bar), "f_bar {}", r.f_bar);
            prop_assert!((0.0..=1.0).contains(&r.eta_bar), "eta_bar {}", r.eta_bar);
        }
    }

    #[test]
    fn two_node_state_is_physical(beta_a in 2.0f64..60.0, beta_b in 2.0f64..60.0, sigma in 0.5f64..20.0) {
        let (pa, pb) = (SystemParams::from_beta(beta_a).unwrap(), SystemParams::from_beta(beta_b).unwrap());
        let spec = GaussianSpectrum::new(pa.coupling().unwrap(), sigma).unwrap();
        let state = remote_entanglement(&pa, &pb, &spec).unwrap();
        prop_assert!((state.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(state.hermiticity_defect() < 1e-12);
        prop_assert!(state.eigenvalues().iter().all(|&e| e > -1e-12));
        let c = state.concurrence();
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!(state.success_prob > 0.0 && state.success_prob <= 1.0 + 1e-12);
    }
}
