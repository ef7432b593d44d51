//! End-to-end evaluation: configuration → model → response → CF.

use std::f64::consts::PI;

use crate::assembly::{assemble_with, min_quadrature_order, SpectralModel};
use crate::basis::{BasisSet, DEFAULT_BASIS_SIZE};
use crate::error::{Error, Result};
use crate::geometry::BeamConfig;
use crate::par::Execution;
use crate::solve::{harmonic_response, modal_frequencies, HarmonicSolution, Mode};
use crate::wavefield::{cost_function, envelope, reconstruct, spectrum_2d, Spectrum2D, WaveField};

/// Discretization and post-processing settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analysis {
    pub basis_size: usize,
    /// Gauss nodes per segment; `None` uses [`min_quadrature_order`].
    pub quad_order: Option<usize>,
    /// Envelope/CF window (m).
    pub window: (f64, f64),
    pub stations: usize,
    pub periods: usize,
    pub samples_per_period: usize,
    pub spatial_padding: usize,
}

impl Default for Analysis {
    fn default() -> Self {
        Analysis {
            basis_size: DEFAULT_BASIS_SIZE,
            quad_order: None,
            window: (0.05, 1.0),
            stations: 190,
            periods: 8,
            samples_per_period: 32,
            spatial_padding: 4,
        }
    }
}

impl Analysis {
    pub fn quad_order_for(&self, cfg: &BeamConfig) -> usize {
        self.quad_order
            .unwrap_or_else(|| min_quadrature_order(self.basis_size, cfg.exponent))
    }
}

/// An assembled beam ready for frequency-domain queries.
#[derive(Debug, Clone)]
pub struct Simulator {
    pub config: BeamConfig,
    pub analysis: Analysis,
    pub basis: BasisSet,
    pub model: SpectralModel,
}

impl Simulator {
    pub fn new(config: BeamConfig, analysis: Analysis) -> Result<Self> {
        Self::with_execution(config, analysis, Execution::Parallel)
    }

    pub fn with_execution(config: BeamConfig, analysis: Analysis, exec: Execution) -> Result<Self> {
        config.validate()?;
        let basis = BasisSet::new(analysis.basis_size, config.length)?;
        let model = assemble_with(&config, &basis, analysis.quad_order_for(&config), exec)?;
        Ok(Simulator {
            config,
            analysis,
            basis,
            model,
        })
    }

    pub fn respond(&self, freq_hz: f64) -> Result<HarmonicSolution> {
        harmonic_response(&self.model, 2.0 * PI * freq_hz)
    }

    pub fn field(&self, freq_hz: f64) -> Result<WaveField> {
        let sol = self.respond(freq_hz)?;
        self.field_of(&sol)
    }

    pub fn field_of(&self, sol: &HarmonicSolution) -> Result<WaveField> {
        let a = &self.analysis;
        reconstruct(
            sol,
            &self.basis,
            a.window,
            a.stations,
            a.periods,
            a.samples_per_period,
        )
    }

    /// Traveling-wave cost function at one excitation frequency.
    pub fn cost(&self, freq_hz: f64) -> Result<f64> {
        cost_function(&envelope(&self.field(freq_hz)?))
    }

    pub fn spectrum(&self, freq_hz: f64) -> Result<Spectrum2D> {
        spectrum_2d(&self.field(freq_hz)?, self.analysis.spatial_padding)
    }

    pub fn modes(&self, count: usize) -> Result<Vec<Mode>> {
        modal_frequencies(&self.model, count)
    }
}

/// Grows the basis in steps of `step` until the highest of the first
/// `modes` frequencies moves by less than `tol` (relative). Returns the
/// smaller basis size of the final converged pair.
pub fn converged_basis_size(
    cfg: &BeamConfig,
    modes: usize,
    start: usize,
    step: usize,
    tol: f64,
    max: usize,
) -> Result<usize> {
    let top = |n: usize| -> Result<f64> {
        let sim = Simulator::new(
            *cfg,
            Analysis {
                basis_size: n,
                ..Analysis::default()
            },
        )?;
        Ok(sim.modes(modes)?[modes - 1].frequency_hz)
    };
    let mut n = start.max(modes + 2);
    let mut prev = top(n)?;
    while n + step <= max {
        let next = top(n + step)?;
        if ((next - prev) / prev).abs() < tol {
            return Ok(n);
        }
        n += step;
        prev = next;
    }
    Err(Error::config(format!(
        "modal frequencies did not converge to {tol} below basis size {max}"
    )))
}
