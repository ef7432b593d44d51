//! Frequency-domain simulator for a free-free Euler–Bernoulli beam with an
//! acoustic-black-hole (power-law) taper and a partial free-layer
//! viscoelastic damping treatment.
//!
//! The beam is discretized with a Legendre-polynomial Galerkin basis.
//! [`assembly`] builds the mass matrix, complex stiffness matrix and load
//! vector; [`solve`] yields harmonic responses and damped modes; [`wavefield`]
//! turns a response into an envelope, a traveling-wave cost function and a
//! frequency–wavenumber spectrum; [`sweep`] maps the cost function over
//! parameter grids.

pub mod assembly;
pub mod basis;
pub mod config;
pub mod error;
pub mod geometry;
pub mod output;
pub mod par;
pub mod pipeline;
pub mod quadrature;
pub mod solve;
pub mod sweep;
pub mod wavefield;

pub use assembly::{assemble, min_quadrature_order, SpectralModel};
pub use basis::BasisSet;
pub use config::{parse_config, Settings};
pub use error::{Error, Result};
pub use geometry::{BeamConfig, SectionSample};
pub use par::Execution;
pub use pipeline::{Analysis, Simulator};
pub use solve::{harmonic_response, modal_frequencies, HarmonicSolution, Mode};
pub use sweep::{run_sweep, summarize_trends, SweepAxis, SweepResult};
pub use wavefield::{cost_function, envelope, spectrum_2d, Spectrum2D, WaveField};
