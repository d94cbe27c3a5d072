//! Two-node entanglement distribution: a photon is entangled with atom A at
//! the √SWAP detuning and then swapped into atom B at resonance.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;

use super::{apply_on_pair, scattering_operator};
use crate::error::{Error, Result};
use crate::params::{Detuning, SystemParams};
use crate::scattering::{amplitudes, ScatteringAmplitudes};
use crate::spectrum::{spectrum_grid, GaussianSpectrum};

const HERMITIAN_TOL: f64 = 1e-10;
const EIGEN_CLAMP: f64 = 1e-12;
const MIN_SUCCESS: f64 = 1e-9;

/// Conditional state of atoms A⊗B in the order `(|++⟩, |+−⟩, |−+⟩, |−−⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAtomDensity {
    pub rho: Matrix4<Complex64>,
    pub success_prob: f64,
}

impl TwoAtomDensity {
    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOL
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let herm = (self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        let ev = SymmetricEigen::new(herm).eigenvalues;
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn concurrence(&self) -> f64 {
        concurrence(&self.rho)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with(&self, psi: &Vector4<Complex64>) -> f64 {
        psi.dotc(&(self.rho * psi)).re
    }
}

fn sigma_y_sigma_y() -> Matrix4<Complex64> {
    let (z, o) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    Matrix4::new(z, z, z, -o, z, z, o, z, z, o, z, z, -o, z, z, z)
}

fn hermitian_sqrt(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(*m);
    let roots = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let v = eig.eigenvectors;
    v * Matrix4::from_diagonal(&roots) * v.adjoint()
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// Uses the Hermitian form `λᵢ = √eig(√ρ ρ̃ √ρ)` with ρ̃ the spin-flipped
/// state; eigenvalues below 1e-12 are clamped to zero.
pub fn concurrence(rho: &Matrix4<Complex64>) -> f64 {
    let yy = sigma_y_sigma_y();
    let flipped = yy * rho.conjugate() * yy;
    let root = hermitian_sqrt(rho);
    let m = root * flipped * root;
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut lambdas: Vec<f64> = SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .map(|&mu| if mu < EIGEN_CLAMP { 0.0 } else { mu.sqrt() })
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// Concurrence `2|ad − bc| / ‖ψ‖²` of a pure two-qubit state.
pub fn pure_concurrence(amps: &[Complex64; 4]) -> f64 {
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).norm() / norm
}

/// Photon-conditioned A⊗B branches after both scatterings, indexed by the
/// final photon polarization (H, V). Register order: (atom A, atom B, photon).
fn protocol_branches(at_a: &ScatteringAmplitudes, at_b: &ScatteringAmplitudes) -> [Vector4<Complex64>; 2] {
    let mut state = [Complex64::new(0.0, 0.0); 8];
    // |+⟩_A |−⟩_B |V⟩
    state[2 + 1] = Complex64::new(1.0, 0.0);
    apply_on_pair(&mut state, &scattering_operator(at_a), 0, 2);
    apply_on_pair(&mut state, &scattering_operator(at_b), 1, 2);
    let branch = |pol: usize| Vector4::from_fn(|ab, _| state[2 * ab + pol]);
    [branch(0), branch(1)]
}

/// The A⊗B state produced by the lossless monochromatic protocol.
pub fn ideal_bell_state() -> Vector4<Complex64> {
    let p = SystemParams::lossless(1.0).expect("valid");
    let at_a = amplitudes(&p, Detuning::new(1.0).expect("finite"));
    let [h, v] = protocol_branches(&at_a, &ScatteringAmplitudes::ideal_reflection());
    debug_assert!(h.norm() == 0.0);
    v
}

/// Runs the two-node protocol over the photon spectrum and returns the
/// normalized, photon-traced state of the two atoms.
///
/// Node A sits at the √SWAP detuning (`spec` must be centered at Γ_A), node
/// B at resonance, so a spectral component at detuning ω from A is detuned
/// by ω − Γ_A from B. Spectral components are mixed incoherently with
/// weights ∝ |f(ω)|².
pub fn remote_entanglement(p_a: &SystemParams, p_b: &SystemParams, spec: &GaussianSpectrum) -> Result<TwoAtomDensity> {
    let cap_a = p_a.coupling()?;
    p_b.coupling()?;
    if (spec.center_detuning - cap_a).abs() > 1e-9 * cap_a.max(1.0) {
        return Err(Error::invalid(format!(
            "spectrum must be centered at node A's coupling {cap_a}, got {}",
            spec.center_detuning
        )));
    }
    let mut rho = Matrix4::zeros();
    let mut success = 0.0;
    for point in spectrum_grid(spec)? {
        let at_a = amplitudes(p_a, Detuning::new(point.detuning)?);
        let at_b = amplitudes(p_b, Detuning::new(point.detuning - cap_a)?);
        for chi in protocol_branches(&at_a, &at_b) {
            rho += chi * chi.adjoint() * Complex64::new(point.weight, 0.0);
            success += point.weight * chi.norm_squared();
        }
    }
    if success < MIN_SUCCESS {
        return Err(Error::DegenerateProtocol { success_prob: success });
    }
    Ok(TwoAtomDensity { rho: rho / Complex64::new(success, 0.0), success_prob: success })
}
