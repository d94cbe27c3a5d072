use mqi::*;
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

fn run(p: &SystemParams, delta: f64, sigma_k: f64) -> (DynamicsResult, NumericAmplitudes) {
    let wp = WavePacket::new(delta, sigma_k).unwrap();
    let res = simulate_default(p, &wp).unwrap();
    let num = numeric_amplitudes(&res, &wp, p);
    (res, num)
}

/// Stationary (T, R) from a linear solve of the matching conditions at the
/// emitter, with the field at the emitter taken as the mean of its two sides:
///   −i(T − 1) + √Γf φ = 0,  −iR + √Γb φ = 0,
///   −Δ̃ φ + √Γf (1 + T)/2 + √Γb R/2 = 0.
fn solve_stationary(gamma: f64, gf: f64, gb: f64, delta: f64) -> (Complex64, Complex64) {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (sf, sb) = (c(gf.sqrt(), 0.0), c(gb.sqrt(), 0.0));
    let z = c(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix3::new(
        c(0.0, -1.0), z, sf,
        z, c(0.0, -1.0), sb,
        sf / 2.0, sb / 2.0, -c(delta, gamma / 2.0),
    );
    let rhs = Vector3::new(c(0.0, -1.0), z, -sf / 2.0);
    let x = m.lu().solve(&rhs).expect("nonsingular");
    (x[0], x[1])
}

#[test]
fn asymmetric_coupling_matches_the_stationary_solution() {
    let (gamma, gf, gb) = (1.0, 20.0, 5.0);
    let p = SystemParams::new(gamma, gf, gb).unwrap();
    for delta in [0.0, 8.0] {
        let (res, num) = run(&p, delta, 1.0);
        let (t, r) = solve_stationary(gamma, gf, gb, delta);
        let lib = amplitudes(&p, Detuning::new(delta).unwrap());
        assert!((lib.t - t).norm() < 1e-12 && (lib.r - r).norm() < 1e-12);
        assert!((num.t - t).norm() < 1e-2, "delta {delta}: T {} vs {t}", num.t);
        assert!((num.r - r).norm() < 1e-2, "delta {delta}: R {} vs {r}", num.r);
        assert!(res.budget_defect().abs() < 1e-6);
    }
}

#[test]
fn resonant_asymmetric_transmission_sign() {
    // the forward coupling dominates, so on resonance T flips sign
    let p = SystemParams::new(1.0, 20.0, 5.0).unwrap();
    let (_, num) = run(&p, 0.0, 1.0);
    assert!((num.t.re + 14.0 / 26.0).abs() < 1e-2, "{}", num.t);
    assert!((num.r.im).abs() < 1e-2 && (num.r.re + 2.0 * 10.0 / 26.0).abs() < 1e-2, "{}", num.r);
}

#[test]
fn split_point_divides_the_photon_evenly() {
    let p = SystemParams::from_beta(50.0).unwrap();
    let (res, num) = run(&p, 50.0, 2.5);
    let a = amplitudes(&p, Detuning::new(50.0).unwrap());
    assert!((a.t.norm() - a.r.norm()).abs() < 1e-3);
    assert!((num.abs_t - a.t.norm()).abs() < 1e-2);
    assert!((num.abs_r - a.r.norm()).abs() < 1e-2);
    assert!((res.p_transmit - res.p_reflect).abs() < 2e-2);
}

#[test]
fn excitation_rises_and_decays() {
    let p = SystemParams::from_beta(10.0).unwrap();
    let (res, _) = run(&p, 0.0, 1.0);
    let peak = res.excited_history.iter().map(|&(_, e)| e).fold(0.0, f64::max);
    assert!(peak > 1e-3);
    assert!(res.excited_history.first().unwrap().1 < 1e-12);
    assert!(res.residual_excitation < 1e-8);
    assert!(res.samples.windows(2).all(|w| w[1].p_loss >= w[0].p_loss - 1e-15));
}
