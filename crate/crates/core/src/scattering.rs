//! Stationary single-photon scattering off the chirally coupled Λ emitter.
//!
//! A forward photon meeting the emitter in `|+⟩` either drives the σ₊
//! transition and is re-emitted forward (atom stays in `|+⟩`, amplitude T),
//! or is re-emitted backward on σ₋ (atom flipped to `|−⟩`, amplitude R).
//! With Δ̃ = Δ + iγ/2 the stationary solution is
//!
//! ```text
//! φ_E = 2√Γ_f / (2Δ̃ + i(Γ_f + Γ_b))
//! R   = −i√Γ_b φ_E
//! T   = 1 − i√Γ_f φ_E = (2Δ̃ + i(Γ_b − Γ_f)) / (2Δ̃ + i(Γ_f + Γ_b))
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{Detuning, SystemParams};

/// Excited-state, reflection and transmission amplitudes at one detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub phi_e: Complex64,
    pub r: Complex64,
    pub t: Complex64,
}

impl ScatteringAmplitudes {
    /// Ideal resonant reflection: R = −1, T = 0.
    pub fn ideal_reflection() -> Self {
        Self { phi_e: Complex64::new(0.0, 0.0), r: Complex64::new(-1.0, 0.0), t: Complex64::new(0.0, 0.0) }
    }

    /// Photon never couples: R = 0, T = 1.
    pub fn decoupled() -> Self {
        Self { phi_e: Complex64::new(0.0, 0.0), r: Complex64::new(0.0, 0.0), t: Complex64::new(1.0, 0.0) }
    }

    /// Probability of nondirectional loss, 1 − |R|² − |T|².
    pub fn loss(&self) -> f64 {
        1.0 - self.r.norm_sqr() - self.t.norm_sqr()
    }
}

pub fn amplitudes(p: &SystemParams, d: Detuning) -> ScatteringAmplitudes {
    if p.gamma_f() == 0.0 {
        return ScatteringAmplitudes::decoupled();
    }
    let i = Complex64::i();
    let (sf, sb) = (p.gamma_f().sqrt(), p.gamma_b().sqrt());
    let two_dt = 2.0 * d.effective(p.gamma());
    let denom = two_dt + i * (p.gamma_f() + p.gamma_b());
    let phi_e = 2.0 * sf / denom;
    ScatteringAmplitudes { phi_e, r: -i * sb * phi_e, t: (two_dt + i * (p.gamma_b() - p.gamma_f())) / denom }
}

pub fn amplitude_sweep(p: &SystemParams, deltas: &[Detuning]) -> Vec<ScatteringAmplitudes> {
    deltas.iter().map(|&d| amplitudes(p, d)).collect()
}

fn split_gap(p: &SystemParams, delta: f64) -> f64 {
    let a = amplitudes(p, Detuning::new(delta).expect("finite detuning"));
    a.r.norm() - a.t.norm()
}

/// Bisects `|R| − |T|` between `inner` (where it is positive) and `outer`
/// (where it is negative) until the bracket stops shrinking in f64.
fn bisect_crossing(p: &SystemParams, inner: f64, outer: f64) -> f64 {
    let (mut lo, mut hi) = (inner, outer);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if split_gap(p, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // return whichever endpoint is closer to equal split
    if split_gap(p, lo).abs() <= split_gap(p, hi).abs() {
        lo
    } else {
        hi
    }
}

/// The two detunings (positive first) where the photon is reflected and
/// transmitted with equal probability, searched on (0, 3Γ] and its mirror.
pub fn equal_split_detunings(p: &SystemParams) -> Result<(Detuning, Detuning)> {
    let cap = p.coupling()?;
    let limit = 3.0 * cap;
    if cap == 0.0 || split_gap(p, 0.0) <= 0.0 || split_gap(p, limit) >= 0.0 || split_gap(p, -limit) >= 0.0 {
        return Err(Error::NoCrossing { search_limit: limit });
    }
    let plus = bisect_crossing(p, 0.0, limit);
    let minus = bisect_crossing(p, 0.0, -limit);
    Ok((Detuning::new(plus)?, Detuning::new(minus)?))
}
