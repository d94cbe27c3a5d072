//! Single-photon scattering off a Λ-type emitter chirally coupled to a
//! one-dimensional waveguide, and the quantum-network primitives it enables:
//! an atom-photon SWAP gate, a √SWAP entangling gate, a photon memory and a
//! two-node entanglement protocol.
//!
//! Units: rates and frequencies in units of the nondirectional decay rate γ,
//! with c = ħ = 1.

pub mod basis;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod metrics;
pub mod params;
pub mod scattering;
pub mod spectrum;

pub use basis::{AtomLevel, AtomState, JointOperator, JointState, Polarization, PolarizationState, BASIS};
pub use dynamics::{
    numeric_amplitudes, simulate, simulate_default, DynamicsResult, KGrid, NumericAmplitudes, Sample, WavePacket,
};
pub use error::{Error, Result};
pub use metrics::{
    gate_metrics, gate_metrics_with, memory_metrics, memory_metrics_with, metrics_row, sweep_bandwidth, sweep_beta,
    GateKind, MetricsReport, MetricsRow, SpectralAverage, StateMetrics, StateSet,
};
pub use params::{Detuning, SystemParams};
pub use scattering::{amplitude_sweep, amplitudes, equal_split_detunings, ScatteringAmplitudes};
pub use spectrum::{detuning_distribution, spectrum_grid, GaussianSpectrum, SpectralPoint, SpectralWeighting};
