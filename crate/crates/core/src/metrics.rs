//! Average fidelities and efficiencies of the SWAP gate, the √SWAP
//! entangling gate and the photon memory, over the overcomplete Pauli
//! eigenstate sets and a Gaussian photon spectrum.
//!
//! Two spectral averages are available:
//!
//! * [`SpectralAverage::DetuningAverage`] (default): each monochromatic
//!   component is an independent trial. Per state,
//!   `F = Σ_j w_j |⟨u|Ŝ_ideal† Ŝ(Δ_j)|u⟩| / √n_j` and `η = Σ_j w_j n_j`
//!   with `n_j = ‖Ŝ(Δ_j)u‖²` and weights ∝ f(ω).
//! * [`SpectralAverage::PulseOverlap`]: one coherent pulse. Per state,
//!   `F = |Σ_j w_j ⟨u|Ŝ_ideal† Ŝ(Δ_j)|u⟩| / √η` and `η = Σ_j w_j n_j`
//!   with weights ∝ |f(ω)|².
//!
//! The two agree in the monochromatic limit.

use nalgebra::{Matrix2, Vector2, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{pauli_eigenstates, AtomState, JointOperator, JointState, PolarizationState};
use crate::error::{Error, Result};
use crate::gates::{memory_filter, scattering_operator};
use crate::params::{Detuning, SystemParams};
use crate::scattering::{amplitudes, ScatteringAmplitudes};
use crate::spectrum::{GaussianSpectrum, SpectralPoint, SpectralWeighting};

const MIN_NORM: f64 = 1e-12;
const CENTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectralAverage {
    #[default]
    DetuningAverage,
    PulseOverlap,
}

impl SpectralAverage {
    fn weighting(self) -> SpectralWeighting {
        match self {
            SpectralAverage::DetuningAverage => SpectralWeighting::Density,
            SpectralAverage::PulseOverlap => SpectralWeighting::Intensity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    Swap,
    Entangle,
}

/// The six Pauli eigenstates of the atom and of the photon.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    pub atom_states: [AtomState; 6],
    pub photon_states: [PolarizationState; 6],
}

impl StateSet {
    pub fn pauli() -> Self {
        let e = pauli_eigenstates();
        Self {
            atom_states: e.map(|[a, b]| AtomState { b_plus: a, b_minus: b }),
            photon_states: e.map(|[a, b]| PolarizationState { a_h: a, a_v: b }),
        }
    }

    /// All 36 products; index `6·atom + photon`.
    pub fn joint_states(&self) -> Vec<JointState> {
        self.atom_states
            .iter()
            .flat_map(|&a| self.photon_states.iter().map(move |&p| JointState::from_parts(a, p)))
            .collect()
    }
}

impl Default for StateSet {
    fn default() -> Self {
        Self::pauli()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateMetrics {
    pub index: usize,
    pub fidelity: f64,
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub f_bar: f64,
    pub eta_bar: f64,
    pub per_state: Vec<StateMetrics>,
}

impl MetricsReport {
    fn from_states(per_state: Vec<StateMetrics>) -> Self {
        let n = per_state.len() as f64;
        Self {
            f_bar: per_state.iter().map(|s| s.fidelity).sum::<f64>() / n,
            eta_bar: per_state.iter().map(|s| s.efficiency).sum::<f64>() / n,
            per_state,
        }
    }
}

/// Per-state accumulation shared by the gate and memory averages. `outputs`
/// yields, for every spectral node, the ideal-output overlap and the output
/// norm of each state.
fn average<const N: usize>(
    points: &[SpectralPoint],
    avg: SpectralAverage,
    mut outputs: impl FnMut(&SpectralPoint) -> [(Complex64, f64); N],
) -> Result<MetricsReport> {
    let mut overlap = [Complex64::new(0.0, 0.0); N];
    let mut fid = [0.0; N];
    let mut norm = [0.0; N];
    for point in points {
        for (i, (o, n)) in outputs(point).into_iter().enumerate() {
            overlap[i] += point.weight * o;
            norm[i] += point.weight * n;
            if n > 0.0 {
                fid[i] += point.weight * o.norm() / n.sqrt();
            }
        }
    }
    let mut per_state = Vec::with_capacity(N);
    for i in 0..N {
        if norm[i] < MIN_NORM {
            return Err(Error::DegenerateScattering { state: i, norm: norm[i] });
        }
        let fidelity = match avg {
            SpectralAverage::DetuningAverage => fid[i],
            SpectralAverage::PulseOverlap => overlap[i].norm() / norm[i].sqrt(),
        };
        per_state.push(StateMetrics { index: i, fidelity: fidelity.min(1.0), efficiency: norm[i].min(1.0) });
    }
    Ok(MetricsReport::from_states(per_state))
}

fn check_center(spec: &GaussianSpectrum, expected: f64, what: &str) -> Result<()> {
    if (spec.center_detuning - expected).abs() > CENTER_TOL * expected.abs().max(1.0) {
        return Err(Error::invalid(format!(
            "{what} requires the spectrum centered at {expected}, got {}",
            spec.center_detuning
        )));
    }
    Ok(())
}

/// The target operation: resonant ideal reflection for SWAP, the lossless
/// equal-split operator on the side of the spectrum center for √SWAP.
fn ideal_operator(kind: GateKind, center: f64) -> JointOperator {
    match kind {
        GateKind::Swap => scattering_operator(&ScatteringAmplitudes::ideal_reflection()),
        GateKind::Entangle => {
            let p = SystemParams::lossless(1.0).expect("valid");
            let side = if center < 0.0 { -1.0 } else { 1.0 };
            scattering_operator(&amplitudes(&p, Detuning::new(side).expect("finite")))
        }
    }
}

pub fn gate_metrics(kind: GateKind, p: &SystemParams, spec: &GaussianSpectrum) -> Result<MetricsReport> {
    gate_metrics_with(kind, p, spec, SpectralAverage::default())
}

/// Averages over the 36 joint atom⊗photon Pauli states. SWAP needs the
/// spectrum centered at resonance; √SWAP at +Γ or −Γ.
pub fn gate_metrics_with(
    kind: GateKind,
    p: &SystemParams,
    spec: &GaussianSpectrum,
    avg: SpectralAverage,
) -> Result<MetricsReport> {
    let cap = p.coupling()?;
    match kind {
        GateKind::Swap => check_center(spec, 0.0, "swap")?,
        GateKind::Entangle => {
            let side = if spec.center_detuning < 0.0 { -cap } else { cap };
            check_center(spec, side, "entangle")?
        }
    }
    let ideal_adj = ideal_operator(kind, spec.center_detuning).adjoint();
    let states: Vec<Vector4<Complex64>> = StateSet::pauli().joint_states().iter().map(|s| *s.as_vector()).collect();
    let points = spec.grid(avg.weighting())?;
    average::<36>(&points, avg, |point| {
        let s = scattering_operator(&amplitudes(p, Detuning::new(point.detuning).expect("finite grid")));
        let projected = ideal_adj * s;
        std::array::from_fn(|i| {
            let u = &states[i];
            let out = s.matrix() * u;
            (u.dotc(&(projected.matrix() * u)), out.norm_squared())
        })
    })
}

pub fn memory_metrics(p: &SystemParams, spec: &GaussianSpectrum) -> Result<MetricsReport> {
    memory_metrics_with(p, spec, SpectralAverage::default())
}

/// Averages over the six photon Pauli states, with the stored and readout
/// photons at the same detuning and the ideal memory being the identity.
pub fn memory_metrics_with(p: &SystemParams, spec: &GaussianSpectrum, avg: SpectralAverage) -> Result<MetricsReport> {
    p.coupling()?;
    check_center(spec, 0.0, "memory")?;
    let states: Vec<Vector2<Complex64>> =
        StateSet::pauli().photon_states.iter().map(|s| Vector2::new(s.a_h, s.a_v)).collect();
    let points = spec.grid(avg.weighting())?;
    average::<6>(&points, avg, |point| {
        let m = memory_filter(&amplitudes(p, Detuning::new(point.detuning).expect("finite grid"))).m;
        let m = Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
        std::array::from_fn(|i| {
            let out = m * states[i];
            (states[i].dotc(&out), out.norm_squared())
        })
    })
}

/// One row of a metrics sweep, keyed by β or σ_ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRow {
    pub key: f64,
    pub f_swap: f64,
    pub eta_swap: f64,
    pub f_ent: f64,
    pub eta_ent: f64,
    pub f_mem: f64,
    pub eta_mem: f64,
}

/// All three metrics for one coupling, with `shape` supplying σ_ω, the node
/// count and the span; its center is ignored.
pub fn metrics_row(key: f64, p: &SystemParams, shape: &GaussianSpectrum, avg: SpectralAverage) -> Result<MetricsRow> {
    let cap = p.coupling()?;
    let at_zero = shape.with_center(0.0)?;
    let swap = gate_metrics_with(GateKind::Swap, p, &at_zero, avg)?;
    let ent = gate_metrics_with(GateKind::Entangle, p, &shape.with_center(cap)?, avg)?;
    let mem = memory_metrics_with(p, &at_zero, avg)?;
    Ok(MetricsRow {
        key,
        f_swap: swap.f_bar,
        eta_swap: swap.eta_bar,
        f_ent: ent.f_bar,
        eta_ent: ent.eta_bar,
        f_mem: mem.f_bar,
        eta_mem: mem.eta_bar,
    })
}

/// Rows for each β at fixed spectrum shape, in input order.
pub fn sweep_beta(betas: &[f64], shape: &GaussianSpectrum, avg: SpectralAverage) -> Result<Vec<MetricsRow>> {
    betas.par_iter().map(|&beta| metrics_row(beta, &SystemParams::from_beta(beta)?, shape, avg)).collect()
}

/// Rows for each σ_ω at fixed β, in input order.
pub fn sweep_bandwidth(
    sigmas: &[f64],
    beta: f64,
    shape: &GaussianSpectrum,
    avg: SpectralAverage,
) -> Result<Vec<MetricsRow>> {
    let p = SystemParams::from_beta(beta)?;
    sigmas.par_iter().map(|&sigma| metrics_row(sigma, &p, &shape.with_sigma(sigma)?, avg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{AtomLevel, Polarization, BASIS};

    const BOTH: [SpectralAverage; 2] = [SpectralAverage::DetuningAverage, SpectralAverage::PulseOverlap];

    fn spec(center: f64, sigma: f64) -> GaussianSpectrum {
        GaussianSpectrum::new(center, sigma).unwrap()
    }

    #[test]
    fn state_sets_are_the_pauli_eigenstates() {
        let set = StateSet::pauli();
        let joint = set.joint_states();
        assert_eq!(joint.len(), 36);
        for s in &joint {
            assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        }
        // |+⟩|H⟩ and |−⟩|V⟩
        assert_eq!(joint[0].component(AtomLevel::Plus, Polarization::H), Complex64::new(1.0, 0.0));
        assert_eq!(joint[7].component(AtomLevel::Minus, Polarization::V), Complex64::new(1.0, 0.0));
        // mutually unbiased pairs: |⟨a|b⟩|² = 1/2 across different axes
        let p = set.photon_states;
        for i in 0..6 {
            for j in 0..6 {
                let ov = (p[i].a_h.conj() * p[j].a_h + p[i].a_v.conj() * p[j].a_v).norm_sqr();
                let expect = if i == j {
                    1.0
                } else if i / 2 == j / 2 {
                    0.0
                } else {
                    0.5
                };
                assert!((ov - expect).abs() < 1e-15, "{i} {j}");
            }
        }
    }

    #[test]
    fn ideal_monochromatic_is_perfect() {
        let p = SystemParams::lossless(1.0).unwrap();
        for avg in BOTH {
            let swap = gate_metrics_with(GateKind::Swap, &p, &GaussianSpectrum::monochromatic(0.0), avg).unwrap();
            let ent = gate_metrics_with(GateKind::Entangle, &p, &GaussianSpectrum::monochromatic(1.0), avg).unwrap();
            let neg = gate_metrics_with(GateKind::Entangle, &p, &GaussianSpectrum::monochromatic(-1.0), avg).unwrap();
            let mem = memory_metrics_with(&p, &GaussianSpectrum::monochromatic(0.0), avg).unwrap();
            for r in [swap, ent, neg, mem] {
                assert!((r.f_bar - 1.0).abs() < 1e-14);
                assert!((r.eta_bar - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lossless_gates_keep_unit_efficiency() {
        let p = SystemParams::lossless(3.0).unwrap();
        for avg in BOTH {
            for (kind, c) in [(GateKind::Swap, 0.0), (GateKind::Entangle, 3.0)] {
                let r = gate_metrics_with(kind, &p, &spec(c, 2.0), avg).unwrap();
                assert!((r.eta_bar - 1.0).abs() < 1e-12);
                assert!(r.f_bar < 1.0);
            }
        }
    }

    #[test]
    fn invariant_subspace_states_are_perfect() {
        let p = SystemParams::from_beta(7.0).unwrap();
        let r = gate_metrics(GateKind::Swap, &p, &spec(0.0, 4.0)).unwrap();
        for idx in [0, 7] {
            assert!((r.per_state[idx].fidelity - 1.0).abs() < 1e-12);
            assert!((r.per_state[idx].efficiency - 1.0).abs() < 1e-12);
        }
        assert_eq!(BASIS[0], (AtomLevel::Plus, Polarization::H));
    }

    #[test]
    fn vertical_photon_is_stored_perfectly() {
        let p = SystemParams::from_beta(2.0).unwrap();
        for avg in BOTH {
            let r = memory_metrics_with(&p, &spec(0.0, 3.0), avg).unwrap();
            assert!((r.per_state[1].fidelity - 1.0).abs() < 1e-12);
            assert!((r.per_state[1].efficiency - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn monochromatic_memory_matches_closed_form() {
        // |H⟩: M̂|H⟩ = (R², T), fidelity |R²|/√(|R|⁴+|T|²)
        let p = SystemParams::from_beta(20.0).unwrap();
        let a = amplitudes(&p, Detuning::new(0.0).unwrap());
        let r = memory_metrics(&p, &GaussianSpectrum::monochromatic(0.0)).unwrap();
        let n = a.r.norm_sqr().powi(2) + a.t.norm_sqr();
        assert!((r.per_state[0].efficiency - n).abs() < 1e-15);
        assert!((r.per_state[0].fidelity - a.r.norm_sqr() / n.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn entangle_symmetric_about_resonance() {
        let p = SystemParams::from_beta(20.0).unwrap();
        for avg in BOTH {
            let plus = gate_metrics_with(GateKind::Entangle, &p, &spec(20.0, 3.0), avg).unwrap();
            let minus = gate_metrics_with(GateKind::Entangle, &p, &spec(-20.0, 3.0), avg).unwrap();
            assert!((plus.f_bar - minus.f_bar).abs() < 1e-12);
            assert!((plus.eta_bar - minus.eta_bar).abs() < 1e-12);
        }
    }

    #[test]
    fn estimators_agree_for_narrow_pulses() {
        let p = SystemParams::from_beta(50.0).unwrap();
        let a = gate_metrics_with(GateKind::Swap, &p, &spec(0.0, 0.01), SpectralAverage::DetuningAverage).unwrap();
        let b = gate_metrics_with(GateKind::Swap, &p, &spec(0.0, 0.01), SpectralAverage::PulseOverlap).unwrap();
        assert!((a.f_bar - b.f_bar).abs() < 1e-6);
        assert!((a.eta_bar - b.eta_bar).abs() < 1e-6);
    }

    #[test]
    fn center_is_checked() {
        let p = SystemParams::from_beta(10.0).unwrap();
        assert!(gate_metrics(GateKind::Swap, &p, &spec(1.0, 1.0)).is_err());
        assert!(gate_metrics(GateKind::Entangle, &p, &spec(0.0, 1.0)).is_err());
        assert!(memory_metrics(&p, &spec(10.0, 1.0)).is_err());
        assert!(gate_metrics(GateKind::Swap, &SystemParams::new(1.0, 2.0, 3.0).unwrap(), &spec(0.0, 1.0)).is_err());
    }

    #[test]
    fn sweeps_preserve_order() {
        let shape = spec(0.0, 5.0).with_points(101).unwrap();
        let rows = sweep_beta(&[40.0, 10.0, 20.0], &shape, SpectralAverage::default()).unwrap();
        assert_eq!(rows.iter().map(|r| r.key).collect::<Vec<_>>(), vec![40.0, 10.0, 20.0]);
        assert!(rows[1].f_swap < rows[2].f_swap && rows[2].f_swap < rows[0].f_swap);
        let rows = sweep_bandwidth(&[10.0, 2.0], 50.0, &shape, SpectralAverage::default()).unwrap();
        assert_eq!(rows[0].key, 10.0);
        assert!(rows[0].f_mem < rows[1].f_mem);
    }
}
