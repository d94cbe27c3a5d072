//! Atom-photon gates built from a single scattering event, and the
//! store/retrieve memory protocol.

use num_complex::Complex64;

use crate::basis::{JointOperator, Polarization, PolarizationState};
use crate::scattering::ScatteringAmplitudes;

mod network;

pub use network::{concurrence, ideal_bell_state, pure_concurrence, remote_entanglement, TwoAtomDensity};

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// The atom⊗photon scattering matrix: identity on `|+,H⟩` and `|−,V⟩`,
/// T on the diagonal and R coupling `|+,V⟩ ↔ |−,H⟩`.
pub fn scattering_operator(a: &ScatteringAmplitudes) -> JointOperator {
    let (o, z, r, t) = (one(), zero(), a.r, a.t);
    JointOperator::from_rows([[o, z, z, z], [z, t, r, z], [z, r, t, z], [z, z, z, o]])
}

/// `(1 ⊗ σ_z) S (1 ⊗ σ_z)`: removes the local phase that separates the
/// resonant scattering matrix from SWAP.
pub fn local_swap_equivalence(s: &JointOperator) -> JointOperator {
    let d = JointOperator::photon_phase_flip();
    d * *s * d
}

/// Max-entry deviation of `sg²` from `s0`.
pub fn verify_sqrt_swap(sg: &JointOperator, s0: &JointOperator) -> f64 {
    (*sg * *sg).max_deviation(s0)
}

/// Conditional store-then-retrieve map on the photon polarization,
/// `[[R², 0], [T, 1]]` acting on `(α_H, α_V)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryFilter {
    pub m: [[Complex64; 2]; 2],
}

impl MemoryFilter {
    pub fn apply(&self, input: [Complex64; 2]) -> [Complex64; 2] {
        [self.m[0][0] * input[0] + self.m[0][1] * input[1], self.m[1][0] * input[0] + self.m[1][1] * input[1]]
    }
}

pub fn memory_filter(a: &ScatteringAmplitudes) -> MemoryFilter {
    MemoryFilter { m: [[a.r * a.r, zero()], [a.t, one()]] }
}

/// One surviving outcome of the memory protocol: the polarizations of the
/// storage photon (1) and readout photon (2) with the atom left in `|−⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryBranch {
    pub photon1: Polarization,
    pub photon2: Polarization,
    pub amplitude: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemoryTrace {
    pub branches: Vec<MemoryBranch>,
    pub success_prob: f64,
}

impl MemoryTrace {
    /// Readout-photon amplitudes `(H, V)` with the storage-photon label
    /// summed over coherently.
    pub fn coherent_photon2(&self) -> [Complex64; 2] {
        let mut out = [zero(); 2];
        for b in &self.branches {
            out[b.photon2 as usize] += b.amplitude;
        }
        out
    }
}

/// Applies `op` to the (atom, photon) pair of a three-qubit register whose
/// basis index is `4·q0 + 2·q1 + q2`; `atom` and `photon` name qubit slots.
pub(crate) fn apply_on_pair(state: &mut [Complex64; 8], op: &JointOperator, atom: usize, photon: usize) {
    let weight = |slot: usize| 1usize << (2 - slot);
    let (wa, wp) = (weight(atom), weight(photon));
    let spectator = 3 - atom - photon;
    let ws = weight(spectator);
    for s in 0..2 {
        let idx = |a: usize, p: usize| a * wa + p * wp + s * ws;
        let local: [Complex64; 4] = [state[idx(0, 0)], state[idx(0, 1)], state[idx(1, 0)], state[idx(1, 1)]];
        for (row, (a, p)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
            state[idx(a, p)] = (0..4).map(|col| op.entry(row, col) * local[col]).sum();
        }
    }
}

/// Stores `photon` in an atom prepared in `|−⟩`, reads it out with a second
/// photon in `|V⟩`, and keeps the branches in which the atom ends in `|−⟩`.
pub fn memory_trace(
    photon: &PolarizationState,
    a_store: &ScatteringAmplitudes,
    a_read: &ScatteringAmplitudes,
) -> MemoryTrace {
    // register: (atom, photon1, photon2); atom index 1 = |−⟩, photon2 = |V⟩
    let mut state = [zero(); 8];
    state[4 + 1] = photon.a_h;
    state[4 + 2 + 1] = photon.a_v;
    apply_on_pair(&mut state, &scattering_operator(a_store), 0, 1);
    apply_on_pair(&mut state, &scattering_operator(a_read), 0, 2);

    let pols = [Polarization::H, Polarization::V];
    let mut branches = Vec::new();
    for p1 in pols {
        for p2 in pols {
            let amplitude = state[4 + 2 * p1 as usize + p2 as usize];
            if amplitude != zero() {
                branches.push(MemoryBranch { photon1: p1, photon2: p2, amplitude });
            }
        }
    }
    let success_prob = branches.iter().map(|b| b.amplitude.norm_sqr()).sum();
    MemoryTrace { branches, success_prob }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Detuning, SystemParams};
    use crate::scattering::amplitudes;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn amps(r: Complex64, t: Complex64) -> ScatteringAmplitudes {
        ScatteringAmplitudes { phi_e: zero(), r, t }
    }

    fn lossless_at(delta: f64) -> JointOperator {
        let p = SystemParams::lossless(1.0).unwrap();
        scattering_operator(&amplitudes(&p, Detuning::new(delta).unwrap()))
    }

    #[test]
    fn resonant_operator_is_signed_exchange() {
        let s0 = scattering_operator(&ScatteringAmplitudes::ideal_reflection());
        let (o, z, m) = (one(), zero(), -one());
        let expect = JointOperator::from_rows([[o, z, z, z], [z, z, m, z], [z, m, z, z], [z, z, z, o]]);
        assert_eq!(s0, expect);
        assert_eq!(local_swap_equivalence(&s0), JointOperator::swap());
    }

    #[test]
    fn decoupled_operator_is_identity() {
        let s = scattering_operator(&ScatteringAmplitudes::decoupled());
        assert_eq!(s, JointOperator::identity());
        assert_eq!(local_swap_equivalence(&s), JointOperator::identity());
        assert_eq!(verify_sqrt_swap(&s, &s), 0.0);
    }

    #[test]
    fn detuned_operators_match_printed_matrices() {
        let (o, z) = (one(), zero());
        let plus = JointOperator::from_rows([
            [o, z, z, z],
            [z, -(c(0.0, 1.0) - 1.0) / 2.0, -c(1.0, 1.0) / 2.0, z],
            [z, -c(1.0, 1.0) / 2.0, -(c(0.0, 1.0) - 1.0) / 2.0, z],
            [z, z, z, o],
        ]);
        let minus = JointOperator::from_rows([
            [o, z, z, z],
            [z, c(1.0, 1.0) / 2.0, -c(1.0, -1.0) / 2.0, z],
            [z, -c(1.0, -1.0) / 2.0, c(1.0, 1.0) / 2.0, z],
            [z, z, z, o],
        ]);
        assert!(lossless_at(1.0).max_deviation(&plus) < 1e-15);
        assert!(lossless_at(-1.0).max_deviation(&minus) < 1e-15);
        let built = scattering_operator(&amps(c(-0.5, -0.5), c(0.5, -0.5)));
        assert!(built.max_deviation(&plus) < 1e-15);
    }

    #[test]
    fn detuned_operators_square_to_resonant() {
        let s0 = scattering_operator(&ScatteringAmplitudes::ideal_reflection());
        assert!(verify_sqrt_swap(&lossless_at(1.0), &s0) < 1e-15);
        assert!(verify_sqrt_swap(&lossless_at(-1.0), &s0) < 1e-15);
        let inv = lossless_at(-1.0) * lossless_at(1.0);
        assert!(inv.max_deviation(&JointOperator::identity()) < 1e-15);
    }

    #[test]
    fn negative_detuning_is_local_sqrt_swap() {
        let g = local_swap_equivalence(&lossless_at(-1.0));
        assert!(g.max_deviation(&JointOperator::sqrt_swap()) < 1e-15);
        let twice = local_swap_equivalence(&local_swap_equivalence(&lossless_at(0.3)));
        assert!(twice.max_deviation(&lossless_at(0.3)) == 0.0);
    }

    #[test]
    fn memory_filter_cases() {
        let ideal = memory_filter(&ScatteringAmplitudes::ideal_reflection());
        assert_eq!(ideal.m, [[one(), zero()], [zero(), one()]]);
        let open = memory_filter(&ScatteringAmplitudes::decoupled());
        assert_eq!(open.m, [[zero(), zero()], [one(), one()]]);

        let res = amplitudes(&SystemParams::from_beta(50.0).unwrap(), Detuning::new(0.0).unwrap());
        let m = memory_filter(&res);
        assert!((m.m[0][0] - c(0.980296, 0.0)).norm() < 1e-6);
        assert!((m.m[1][0] - c(0.009901, 0.0)).norm() < 1e-6);
        assert_eq!(m.m[0][1], zero());
        assert_eq!(m.m[1][1], one());
    }

    #[test]
    fn ideal_memory_returns_the_input() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let input = PolarizationState::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let ideal = ScatteringAmplitudes::ideal_reflection();
        let tr = memory_trace(&input, &ideal, &ideal);
        assert!(tr.branches.iter().all(|b| b.photon1 == Polarization::V));
        assert!((tr.success_prob - 1.0).abs() < 1e-15);
        let out = tr.coherent_photon2();
        assert!((out[0] - input.a_h).norm() < 1e-15 && (out[1] - input.a_v).norm() < 1e-15);

        let diag = PolarizationState::new(c(s, 0.0), c(s, 0.0)).unwrap();
        assert!((memory_trace(&diag, &ideal, &ideal).success_prob - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vertical_input_is_untouched() {
        let a = amps(c(0.3, -0.2), c(0.1, 0.4));
        let tr = memory_trace(&PolarizationState::v(), &a, &a);
        assert_eq!(
            tr.branches,
            vec![MemoryBranch { photon1: Polarization::V, photon2: Polarization::V, amplitude: one() }]
        );
        assert_eq!(tr.success_prob, 1.0);
    }

    #[test]
    fn horizontal_input_branches() {
        let a = amps(c(-0.7, 0.1), c(0.2, 0.3));
        let tr = memory_trace(&PolarizationState::h(), &a, &a);
        assert_eq!(tr.branches.len(), 2);
        let hv = tr.branches.iter().find(|b| b.photon1 == Polarization::H).unwrap();
        let vh = tr.branches.iter().find(|b| b.photon1 == Polarization::V).unwrap();
        assert_eq!(hv.photon2, Polarization::V);
        assert!((hv.amplitude - a.t).norm() < 1e-15);
        assert_eq!(vh.photon2, Polarization::H);
        assert!((vh.amplitude - a.r * a.r).norm() < 1e-15);
        let expect = a.t.norm_sqr() + a.r.norm_sqr().powi(2);
        assert!((tr.success_prob - expect).abs() < 1e-15);
    }
}
