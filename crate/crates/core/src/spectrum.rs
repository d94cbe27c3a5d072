//! Gaussian single-photon spectra and their discretization.
//!
//! The pulse amplitude is `f(ω) = exp[−((ω−ω_c)/σ)²] / (√π σ)`. A photon
//! described by `f` can be integrated over frequency in two ways:
//!
//! * [`SpectralWeighting::Intensity`]: weights ∝ |f|², the probability that
//!   the single-photon pulse occupies frequency ω. Used for coherent pulse
//!   overlaps and for frequency-mixed density matrices.
//! * [`SpectralWeighting::Density`]: weights ∝ f, treating `f` (which
//!   integrates to one) as a distribution of monochromatic detunings.
//!
//! Both are discretized on the same uniform grid over `Δ_c ± span·σ` with
//! trapezoid weights renormalized to sum to exactly one.

use crate::error::{Error, Result};

pub const DEFAULT_POINTS: usize = 401;
pub const DEFAULT_SPAN: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralWeighting {
    Intensity,
    Density,
}

/// One quadrature node: detuning from the emitter (units of γ) and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub detuning: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpectrum {
    pub center_detuning: f64,
    pub sigma: f64,
    pub n_points: usize,
    pub span: f64,
}

impl GaussianSpectrum {
    pub fn new(center_detuning: f64, sigma: f64) -> Result<Self> {
        let s = Self { center_detuning, sigma, n_points: DEFAULT_POINTS, span: DEFAULT_SPAN };
        s.validate()?;
        Ok(s)
    }

    /// The σ → 0 limit: a single node at the center with weight one.
    pub fn monochromatic(center_detuning: f64) -> Self {
        Self { center_detuning, sigma: 0.0, n_points: 1, span: DEFAULT_SPAN }
    }

    pub fn with_points(mut self, n_points: usize) -> Result<Self> {
        self.n_points = n_points;
        self.validate()?;
        Ok(self)
    }

    pub fn with_span(mut self, span: f64) -> Result<Self> {
        self.span = span;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        self.sigma = sigma;
        self.validate()?;
        Ok(self)
    }

    pub fn with_center(mut self, center_detuning: f64) -> Result<Self> {
        self.center_detuning = center_detuning;
        self.validate()?;
        Ok(self)
    }

    pub fn is_monochromatic(&self) -> bool {
        self.n_points == 1
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center_detuning.is_finite() {
            return Err(Error::invalid("spectrum center must be finite"));
        }
        if self.n_points == 1 {
            return Ok(());
        }
        if self.n_points < 3 || self.n_points.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "n_points must be odd and >= 3 (or 1 for a monochromatic photon), got {}",
                self.n_points
            )));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid(format!("sigma must be > 0, got {}", self.sigma)));
        }
        if !(self.span.is_finite() && self.span > 0.0) {
            return Err(Error::invalid(format!("span must be > 0, got {}", self.span)));
        }
        Ok(())
    }

    /// Pulse amplitude `f(ω)` at detuning `omega`.
    pub fn amplitude(&self, omega: f64) -> f64 {
        let x = (omega - self.center_detuning) / self.sigma;
        (-x * x).exp() / (std::f64::consts::PI.sqrt() * self.sigma)
    }

    pub fn grid(&self, weighting: SpectralWeighting) -> Result<Vec<SpectralPoint>> {
        self.validate()?;
        if self.is_monochromatic() {
            return Ok(vec![SpectralPoint { detuning: self.center_detuning, weight: 1.0 }]);
        }
        let half = (self.n_points - 1) / 2;
        let step = self.span * self.sigma / half as f64;
        // Integer offsets keep the grid and the weights exactly symmetric.
        let exponent = match weighting {
            SpectralWeighting::Intensity => 2.0,
            SpectralWeighting::Density => 1.0,
        };
        let mut points: Vec<SpectralPoint> = (0..self.n_points)
            .map(|j| {
                let offset = (j as f64 - half as f64) * step;
                let x = offset / self.sigma;
                let trapezoid = if j == 0 || j + 1 == self.n_points { 0.5 } else { 1.0 };
                SpectralPoint { detuning: self.center_detuning + offset, weight: trapezoid * (-exponent * x * x).exp() }
            })
            .collect();
        let total: f64 = points.iter().map(|p| p.weight).sum();
        for p in &mut points {
            p.weight /= total;
        }
        Ok(points)
    }
}

/// Quadrature nodes with weights ∝ |f(ω)|².
pub fn spectrum_grid(s: &GaussianSpectrum) -> Result<Vec<SpectralPoint>> {
    s.grid(SpectralWeighting::Intensity)
}

/// Quadrature nodes with weights ∝ f(ω).
pub fn detuning_distribution(s: &GaussianSpectrum) -> Result<Vec<SpectralPoint>> {
    s.grid(SpectralWeighting::Density)
}
