//! Atom and photon qubits and the joint atom⊗photon space.
//!
//! The joint basis order is fixed everywhere in the crate:
//! `(|+,H⟩, |+,V⟩, |−,H⟩, |−,V⟩)`, i.e. index = 2·atom + photon.

use std::ops::Mul;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Ground level of the Λ emitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomLevel {
    Plus = 0,
    Minus = 1,
}

/// Linear polarization of the flying photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    H = 0,
    V = 1,
}

impl Polarization {
    pub fn label(self) -> &'static str {
        match self {
            Polarization::H => "H",
            Polarization::V => "V",
        }
    }
}

/// The joint basis in index order.
pub const BASIS: [(AtomLevel, Polarization); 4] = [
    (AtomLevel::Plus, Polarization::H),
    (AtomLevel::Plus, Polarization::V),
    (AtomLevel::Minus, Polarization::H),
    (AtomLevel::Minus, Polarization::V),
];

/// Position of `|atom, photon⟩` in [`BASIS`].
pub const fn basis_index(atom: AtomLevel, photon: Polarization) -> usize {
    2 * atom as usize + photon as usize
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_normalized(a: Complex64, b: Complex64, what: &str) -> Result<()> {
    let n = a.norm_sqr() + b.norm_sqr();
    if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
        return Err(Error::invalid(format!("{what} is not normalized: |a|^2 + |b|^2 = {n}")));
    }
    Ok(())
}

/// The six Pauli-axis eigenstates `{|0⟩, |1⟩, (|0⟩±|1⟩)/√2, (|0⟩±i|1⟩)/√2}`
/// as amplitude pairs.
pub fn pauli_eigenstates() -> [[Complex64; 2]; 6] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(s, 0.0), c(s, 0.0)],
        [c(s, 0.0), c(-s, 0.0)],
        [c(s, 0.0), c(0.0, s)],
        [c(s, 0.0), c(0.0, -s)],
    ]
}

/// `β_+|+⟩ + β_−|−⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    pub b_plus: Complex64,
    pub b_minus: Complex64,
}

impl AtomState {
    pub fn new(b_plus: Complex64, b_minus: Complex64) -> Result<Self> {
        check_normalized(b_plus, b_minus, "atom state")?;
        Ok(Self { b_plus, b_minus })
    }

    pub fn plus() -> Self {
        Self { b_plus: c(1.0, 0.0), b_minus: c(0.0, 0.0) }
    }

    pub fn minus() -> Self {
        Self { b_plus: c(0.0, 0.0), b_minus: c(1.0, 0.0) }
    }

    pub fn amplitude(&self, level: AtomLevel) -> Complex64 {
        match level {
            AtomLevel::Plus => self.b_plus,
            AtomLevel::Minus => self.b_minus,
        }
    }
}

/// `α_H|H⟩ + α_V|V⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    pub a_h: Complex64,
    pub a_v: Complex64,
}

impl PolarizationState {
    pub fn new(a_h: Complex64, a_v: Complex64) -> Result<Self> {
        check_normalized(a_h, a_v, "polarization state")?;
        Ok(Self { a_h, a_v })
    }

    pub fn h() -> Self {
        Self { a_h: c(1.0, 0.0), a_v: c(0.0, 0.0) }
    }

    pub fn v() -> Self {
        Self { a_h: c(0.0, 0.0), a_v: c(1.0, 0.0) }
    }

    pub fn amplitude(&self, pol: Polarization) -> Complex64 {
        match pol {
            Polarization::H => self.a_h,
            Polarization::V => self.a_v,
        }
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.a_h, self.a_v]
    }
}

/// Atom⊗photon amplitudes in [`BASIS`] order. May be sub-normalized when it
/// represents a lossy or conditional outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    amps: Vector4<Complex64>,
}

impl JointState {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let state = Self { amps: Vector4::from(amps) };
        let n = state.norm_sqr();
        if !n.is_finite() || n > 1.0 + NORM_TOL {
            return Err(Error::invalid(format!("joint state norm^2 {n} exceeds 1")));
        }
        Ok(state)
    }

    /// Tensor product `|atom⟩ ⊗ |photon⟩`.
    pub fn from_parts(atom: AtomState, photon: PolarizationState) -> Self {
        let mut amps = Vector4::zeros();
        for (i, &(level, pol)) in BASIS.iter().enumerate() {
            amps[i] = atom.amplitude(level) * photon.amplitude(pol);
        }
        Self { amps }
    }

    pub(crate) fn from_vector(amps: Vector4<Complex64>) -> Self {
        Self { amps }
    }

    pub fn component(&self, atom: AtomLevel, photon: Polarization) -> Complex64 {
        self.amps[basis_index(atom, photon)]
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.amps[0], self.amps[1], self.amps[2], self.amps[3]]
    }

    pub fn as_vector(&self) -> &Vector4<Complex64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &JointState) -> Complex64 {
        self.amps.dotc(&other.amps)
    }
}

/// A 4×4 complex operator on the joint space, in [`BASIS`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointOperator {
    m: Matrix4<Complex64>,
}

impl JointOperator {
    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Self {
        Self { m: Matrix4::from_fn(|i, j| rows[i][j]) }
    }

    pub fn from_matrix(m: Matrix4<Complex64>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self { m: Matrix4::identity() }
    }

    /// `diag(1, −1, 1, −1)`: σ_z acting on the photon qubit.
    pub fn photon_phase_flip() -> Self {
        let one = c(1.0, 0.0);
        Self { m: Matrix4::from_diagonal(&Vector4::new(one, -one, one, -one)) }
    }

    /// The exchange permutation on atom⊗photon.
    pub fn swap() -> Self {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        Self::from_rows([[o, z, z, z], [z, z, o, z], [z, o, z, z], [z, z, z, o]])
    }

    /// The standard √SWAP gate.
    pub fn sqrt_swap() -> Self {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        let (p, m) = (c(0.5, 0.5), c(0.5, -0.5));
        Self::from_rows([[o, z, z, z], [z, p, m, z], [z, m, p, z], [z, z, z, o]])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn apply(&self, state: &JointState) -> JointState {
        JointState::from_vector(self.m * state.as_vector())
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_deviation(&self, other: &JointOperator) -> f64 {
        (self.m - other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `S†S − 1`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_deviation(&Self::identity())
    }
}

impl Mul for JointOperator {
    type Output = JointOperator;

    fn mul(self, rhs: JointOperator) -> JointOperator {
        JointOperator { m: self.m * rhs.m }
    }
}
