//! Galerkin mass matrix, complex stiffness matrix and load vector.
//!
//! Integrals run segment by segment over `[0, L1]`, `[L1, L2]` and `[L2, L]`
//! so that the slope break of the taper and the step of the damping layer
//! always fall on panel boundaries.

use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::geometry::{section_sample, BeamConfig};
use crate::output;
use crate::par::Execution;
use crate::quadrature::SegmentRule;

/// Extra Gauss nodes per segment beyond the basis size.
pub const QUADRATURE_MARGIN: usize = 10;

/// Discrete system `M τ'' + K τ = f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralModel {
    /// Real symmetric positive-definite mass matrix.
    pub mass: DMatrix<f64>,
    /// Complex symmetric (not Hermitian) stiffness matrix.
    pub stiffness: DMatrix<Complex64>,
    /// Load amplitudes `F0 φ_j(L3)`.
    pub force: DVector<f64>,
    /// Unit-amplitude load shape `φ_j(L3)`; `force = force_amplitude * load_shape`.
    pub load_shape: DVector<f64>,
    pub force_amplitude: f64,
    /// Gauss nodes per segment used for assembly; 0 for hand-built models.
    pub quad_order: usize,
}

impl SpectralModel {
    /// Wraps hand-built matrices, e.g. small analytic systems.
    pub fn from_parts(
        mass: DMatrix<f64>,
        stiffness: DMatrix<Complex64>,
        force: DVector<f64>,
    ) -> Result<Self> {
        let n = mass.nrows();
        if mass.ncols() != n || stiffness.shape() != (n, n) || force.len() != n {
            return Err(Error::config("matrix dimensions disagree"));
        }
        Ok(SpectralModel {
            mass,
            stiffness,
            load_shape: force.clone(),
            force,
            force_amplitude: 1.0,
            quad_order: 0,
        })
    }

    pub fn size(&self) -> usize {
        self.mass.nrows()
    }

    /// Writes `M.dat`, `K.dat` and `f0.dat` into `dir`.
    pub fn dump(&self, dir: &Path) -> Result<()> {
        let n = self.size();
        output::write_file(&dir.join("M.dat"), |w| {
            for i in 0..n {
                let row: Vec<String> = (0..n).map(|j| output::num(self.mass[(i, j)])).collect();
                writeln!(w, "{}", row.join(" "))?;
            }
            Ok(())
        })?;
        output::write_file(&dir.join("K.dat"), |w| {
            for i in 0..n {
                let row: Vec<String> = (0..n)
                    .map(|j| {
                        let k = self.stiffness[(i, j)];
                        format!("{} {}", output::num(k.re), output::num(k.im))
                    })
                    .collect();
                writeln!(w, "{}", row.join(" "))?;
            }
            Ok(())
        })?;
        output::write_file(&dir.join("f0.dat"), |w| {
            for v in self.force.iter() {
                writeln!(w, "{}", output::num(*v))?;
            }
            Ok(())
        })
    }
}

/// Gauss nodes per segment for a basis of size `n` and taper exponent `m`.
///
/// At least `n + 10`; never fewer than needed to integrate the polynomial
/// stiffness integrand on the undamped part of an integer-order taper
/// exactly (degree `2(n - 3) + 3m`).
pub fn min_quadrature_order(n: usize, exponent: f64) -> usize {
    let exact = n as f64 + (3.0 * exponent - 5.0) / 2.0;
    (n + QUADRATURE_MARGIN).max(exact.ceil().max(1.0) as usize)
}

/// Per-segment contribution: upper triangles of M, Re K, Im K.
struct Partial {
    mass: Vec<f64>,
    k_re: Vec<f64>,
    k_im: Vec<f64>,
}

pub fn assemble(cfg: &BeamConfig, basis: &BasisSet, quad_order: usize) -> Result<SpectralModel> {
    assemble_with(cfg, basis, quad_order, Execution::Parallel)
}

pub fn assemble_with(
    cfg: &BeamConfig,
    basis: &BasisSet,
    quad_order: usize,
    exec: Execution,
) -> Result<SpectralModel> {
    cfg.validate()?;
    let n = basis.size();
    let min = min_quadrature_order(n, cfg.exponent);
    if quad_order < min {
        return Err(Error::config(format!(
            "quadrature order {quad_order} is below the minimum {min} for n = {n}, m = {}",
            cfg.exponent
        )));
    }
    if (basis.length() - cfg.length).abs() > 1e-12 * cfg.length {
        return Err(Error::config("basis length differs from beam length"));
    }

    let segments = [
        (0.0, cfg.uniform_length),
        (cfg.uniform_length, cfg.vem_start),
        (cfg.vem_start, cfg.length),
    ];
    let partials = exec.map(&segments, |&(a, b)| {
        segment_partial(cfg, basis, SegmentRule::new(a, b, quad_order))
    });

    let mut mass = DMatrix::<f64>::zeros(n, n);
    let mut stiffness = DMatrix::<Complex64>::zeros(n, n);
    for part in partials {
        let part = part?;
        let mut idx = 0;
        for i in 0..n {
            for j in i..n {
                mass[(i, j)] += part.mass[idx];
                stiffness[(i, j)] += Complex64::new(part.k_re[idx], part.k_im[idx]);
                idx += 1;
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            mass[(i, j)] = mass[(j, i)];
            stiffness[(i, j)] = stiffness[(j, i)];
        }
    }

    let load_shape = DVector::from_vec(basis.values(cfg.force_location));
    Ok(SpectralModel {
        mass,
        stiffness,
        force: &load_shape * cfg.force_amplitude,
        load_shape,
        force_amplitude: cfg.force_amplitude,
        quad_order,
    })
}

fn segment_partial(cfg: &BeamConfig, basis: &BasisSet, rule: SegmentRule) -> Result<Partial> {
    let n = basis.size();
    let q = rule.nodes.len();
    // Row-major by basis index so the inner products below run over nodes.
    let mut phi = vec![0.0; n * q];
    let mut psi = vec![0.0; n * q];
    let mut w_mass = vec![0.0; q];
    let mut w_re = vec![0.0; q];
    let mut w_im = vec![0.0; q];
    let mut values = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for (k, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let s = section_sample(x, cfg)?;
        let d = s.bending_stiffness;
        if !(s.mass_per_length.is_finite() && d.re.is_finite() && d.im.is_finite()) {
            return Err(Error::Assembly { x });
        }
        w_mass[k] = w * s.mass_per_length;
        w_re[k] = w * d.re;
        w_im[k] = w * d.im;
        basis.values_and_d2_into(x, &mut values, &mut d2);
        for l in 0..n {
            phi[l * q + k] = values[l];
            psi[l * q + k] = d2[l];
        }
    }

    let tri = n * (n + 1) / 2;
    let mut part = Partial {
        mass: Vec::with_capacity(tri),
        k_re: Vec::with_capacity(tri),
        k_im: Vec::with_capacity(tri),
    };
    let mut a = vec![0.0; q];
    let mut b_re = vec![0.0; q];
    let mut b_im = vec![0.0; q];
    for i in 0..n {
        let phi_i = &phi[i * q..(i + 1) * q];
        let psi_i = &psi[i * q..(i + 1) * q];
        for k in 0..q {
            a[k] = w_mass[k] * phi_i[k];
            b_re[k] = w_re[k] * psi_i[k];
            b_im[k] = w_im[k] * psi_i[k];
        }
        for j in i..n {
            let phi_j = &phi[j * q..(j + 1) * q];
            let psi_j = &psi[j * q..(j + 1) * q];
            part.mass.push(dot(&a, phi_j));
            part.k_re.push(dot(&b_re, psi_j));
            part.k_im.push(dot(&b_im, psi_j));
        }
    }
    Ok(part)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
