//! Emitter/waveguide rates and detunings.
//!
//! Every rate and frequency is expressed in units of the nondirectional
//! decay rate `gamma` (with c = ħ = 1). `gamma` is still stored explicitly so
//! that sweeps over it need no rescaling, and so that the lossless limit
//! `gamma = 0` can be represented directly.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coupling rates of the Λ emitter to the chiral waveguide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    gamma: f64,
    gamma_f: f64,
    gamma_b: f64,
}

impl SystemParams {
    /// `gamma` is the nondirectional decay rate, `gamma_f` / `gamma_b` the
    /// forward and backward directional rates.
    ///
    /// `gamma = 0` is accepted: it is the lossless limit in which the
    /// scattering operator is unitary.
    pub fn new(gamma: f64, gamma_f: f64, gamma_b: f64) -> Result<Self> {
        for (name, v) in [("gamma", gamma), ("gamma_f", gamma_f), ("gamma_b", gamma_b)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { gamma, gamma_f, gamma_b })
    }

    /// Symmetric coupling Γ_f = Γ_b = β·γ with γ = 1.
    pub fn from_beta(beta: f64) -> Result<Self> {
        Self::new(1.0, beta, beta)
    }

    /// Symmetric coupling Γ_f = Γ_b = `coupling` with no nondirectional loss.
    pub fn lossless(coupling: f64) -> Result<Self> {
        Self::new(0.0, coupling, coupling)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma_f(&self) -> f64 {
        self.gamma_f
    }

    pub fn gamma_b(&self) -> f64 {
        self.gamma_b
    }

    pub fn is_symmetric(&self) -> bool {
        self.gamma_f == self.gamma_b
    }

    /// The common directional rate Γ; only defined for symmetric coupling.
    pub fn coupling(&self) -> Result<f64> {
        if self.is_symmetric() {
            Ok(self.gamma_f)
        } else {
            Err(Error::invalid(format!(
                "asymmetric coupling (gamma_f = {}, gamma_b = {}) has no single rate",
                self.gamma_f, self.gamma_b
            )))
        }
    }

    /// β = Γ/γ. Infinite for `gamma = 0`.
    pub fn beta(&self) -> Result<f64> {
        let cap = self.coupling()?;
        Ok(if self.gamma == 0.0 { f64::INFINITY } else { cap / self.gamma })
    }

    /// Total population decay rate of the excited state, Γ_f + Γ_b + γ.
    pub fn total_decay(&self) -> f64 {
        self.gamma_f + self.gamma_b + self.gamma
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.gamma_f, self.gamma_b)
    }
}

/// Photon-atom detuning Δ = ω_photon − Ω_E.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Detuning(f64);

impl Detuning {
    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_finite() {
            Ok(Self(delta))
        } else {
            Err(Error::invalid(format!("detuning must be finite, got {delta}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Δ̃ = Δ + iγ/2.
    pub fn effective(self, gamma: f64) -> Complex64 {
        Complex64::new(self.0, 0.5 * gamma)
    }
}

impl From<Detuning> for f64 {
    fn from(d: Detuning) -> f64 {
        d.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_or_nonfinite_rates() {
        assert!(SystemParams::new(-1.0, 1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, -0.1, 1.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(SystemParams::new(0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn beta_requires_symmetric_coupling() {
        let p = SystemParams::from_beta(30.0).unwrap();
        assert_eq!(p.beta().unwrap(), 30.0);
        let q = SystemParams::new(2.0, 10.0, 10.0).unwrap();
        assert_eq!(q.beta().unwrap(), 5.0);
        let asym = SystemParams::new(1.0, 3.0, 2.0).unwrap();
        assert!(matches!(asym.beta(), Err(Error::InvalidArgument(_))));
        assert!(SystemParams::lossless(1.0).unwrap().beta().unwrap().is_infinite());
    }

    #[test]
    fn detuning_is_finite() {
        assert!(Detuning::new(f64::INFINITY).is_err());
        let d = Detuning::new(2.0).unwrap();
        assert_eq!(d.effective(1.0), Complex64::new(2.0, 0.5));
    }
}
