//! Harmonic forced response and modal analysis of a [`SpectralModel`].

use std::f64::consts::PI;

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::assembly::SpectralModel;
use crate::basis::BasisSet;
use crate::error::{Error, Result};

/// Largest accepted 1-norm condition estimate of the equilibrated system.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Largest accepted relative residual of the equilibrated system.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

/// Rigid-body eigenvalues must be this much smaller than the first elastic one.
pub const RIGID_BODY_RATIO: f64 = 1e-6;

const SCHUR_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSolution {
    /// Angular frequency (rad/s).
    pub omega: f64,
    /// Complex generalized coordinates.
    pub tau: DVector<Complex64>,
    /// Relative residual of the solved system.
    pub residual: f64,
    /// 1-norm condition estimate of the solved system.
    pub condition: f64,
}

/// Solves `(-ω² M + K) τ = f` at `omega`.
///
/// The unit load shape is solved for and scaled by the force amplitude
/// afterwards, so responses are exactly proportional to the amplitude.
/// The system is Jacobi-equilibrated (`S A S y = S f`, `S = diag(|A_ii|^-1/2)`)
/// before factorization. The Legendre basis grades the diagonal over many
/// orders of magnitude; the residual and the condition estimate refer to the
/// equilibrated system.
pub fn harmonic_response(model: &SpectralModel, omega: f64) -> Result<HarmonicSolution> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain {
            what: "omega",
            value: omega,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let n = model.size();
    let w2 = omega * omega;
    let singular = || Error::Resonance {
        omega,
        condition: f64::INFINITY,
    };

    let mut scale = Vec::with_capacity(n);
    for i in 0..n {
        let d = (model.stiffness[(i, i)] - w2 * model.mass[(i, i)]).norm();
        if !(d > 0.0 && d.is_finite()) {
            return Err(singular());
        }
        scale.push(1.0 / d.sqrt());
    }
    let system = DMatrix::from_fn(n, n, |i, j| {
        (model.stiffness[(i, j)] - w2 * model.mass[(i, j)]) * (scale[i] * scale[j])
    });
    let rhs = DVector::from_fn(n, |i, _| {
        Complex64::new(model.load_shape[i] * scale[i], 0.0)
    });

    let lu = system.clone().lu();
    let mut y = lu.solve(&rhs).ok_or_else(singular)?;
    // one step of iterative refinement
    let r = &rhs - &system * &y;
    if let Some(dy) = lu.solve(&r) {
        y += dy;
    }

    let condition = one_norm(&system) * inverse_one_norm_estimate(&lu, n);
    if condition.is_nan() || condition > CONDITION_LIMIT {
        return Err(Error::Resonance { omega, condition });
    }

    let rhs_norm = rhs.norm();
    let residual = if rhs_norm == 0.0 {
        0.0
    } else {
        (&system * &y - &rhs).norm() / rhs_norm
    };
    if residual.is_nan() || residual > RESIDUAL_LIMIT {
        return Err(Error::Residual { omega, residual });
    }

    let amplitude = model.force_amplitude;
    let tau = DVector::from_fn(n, |i, _| y[i] * scale[i] * amplitude);
    Ok(HarmonicSolution {
        omega,
        tau,
        residual,
        condition,
    })
}

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Hager–Higham estimate of `‖A⁻¹‖₁` from an LU factorization of a complex
/// symmetric `A`. Uses `A⁻ᴴ x = conj(A⁻¹ conj(x))`, valid because `Aᵀ = A`.
fn inverse_one_norm_estimate(
    lu: &nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
) -> f64 {
    let solve = |x: &DVector<Complex64>| lu.solve(x).unwrap_or_else(|| x.map(|_| f64::NAN.into()));
    let solve_adjoint = |x: &DVector<Complex64>| solve(&x.map(|v| v.conj())).map(|v| v.conj());
    let l1 = |v: &DVector<Complex64>| v.iter().map(|z| z.norm()).sum::<f64>();

    let mut x = DVector::from_element(n, Complex64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0;
    let mut last_j = usize::MAX;
    for iter in 0..5 {
        let y = solve(&x);
        let new = l1(&y);
        if iter > 0 && new <= est {
            break;
        }
        est = new;
        let sign = y.map(|v| {
            let a = v.norm();
            if a == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                v / a
            }
        });
        let z = solve_adjoint(&sign);
        let (j, zmax) = z.iter().enumerate().map(|(i, v)| (i, v.norm())).fold(
            (0, f64::NEG_INFINITY),
            |acc, c| if c.1 > acc.1 { c } else { acc },
        );
        let zx = z.dotc(&x).re;
        if iter > 0 && (zmax <= zx || j == last_j) {
            break;
        }
        last_j = j;
        x = DVector::from_element(n, Complex64::new(0.0, 0.0));
        x[j] = Complex64::new(1.0, 0.0);
    }
    // alternating probe guards against the estimator's known blind spots
    let denom = (n.max(2) - 1) as f64;
    let alt = DVector::from_fn(n, |i, _| {
        let sgn = if i % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(sgn * (1.0 + i as f64 / denom), 0.0)
    });
    let alt_est = 2.0 * l1(&solve(&alt)) / (3.0 * n as f64);
    if est.is_nan() || alt_est.is_nan() {
        return f64::INFINITY;
    }
    est.max(alt_est)
}

/// One damped elastic mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// `sqrt(Re λ) / 2π` (Hz).
    pub frequency_hz: f64,
    /// `Im λ / Re λ`.
    pub loss_factor: f64,
    pub eigenvalue: Complex64,
}

/// All eigenvalues of `K φ = λ M φ`, sorted by modulus.
///
/// `M = L Lᵀ` is Cholesky-factored and the standard problem
/// `L⁻¹ K L⁻ᵀ ψ = λ ψ` is solved through a complex Schur decomposition.
pub fn eigenvalues(model: &SpectralModel) -> Result<Vec<Complex64>> {
    let n = model.size();
    let chol = model
        .mass
        .clone()
        .cholesky()
        .ok_or_else(|| Error::config("mass matrix is not positive definite"))?;
    let l = chol.l().map(|v| Complex64::new(v, 0.0));
    let x = l
        .solve_lower_triangular(&model.stiffness)
        .ok_or(Error::Eigen)?;
    let a = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(Error::Eigen)?;
    // restore the exact symmetry lost to rounding
    let a = DMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)]) * 0.5);
    let schur = Schur::try_new(a, f64::EPSILON, SCHUR_MAX_ITER).ok_or(Error::Eigen)?;
    let mut lambda: Vec<Complex64> = schur
        .eigenvalues()
        .ok_or(Error::Eigen)?
        .iter()
        .copied()
        .collect();
    if lambda
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(Error::Eigen);
    }
    lambda.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    Ok(lambda)
}

/// The lowest `count` elastic modes, rigid-body modes excluded.
pub fn modal_frequencies(model: &SpectralModel, count: usize) -> Result<Vec<Mode>> {
    let n = model.size();
    if count + 2 > n {
        return Err(Error::config(format!(
            "requested {count} modes from a basis of size {n}; at most {} available",
            n.saturating_sub(2)
        )));
    }
    let lambda = eigenvalues(model)?;
    let rigid = rigid_body_count(&lambda);
    let mut elastic: Vec<Complex64> = lambda[rigid..].to_vec();
    elastic.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(elastic
        .into_iter()
        .take(count)
        .map(|ev| Mode {
            frequency_hz: ev.re.max(0.0).sqrt() / (2.0 * PI),
            loss_factor: ev.im / ev.re,
            eigenvalue: ev,
        })
        .collect())
}

/// Leading eigenvalues (sorted by modulus) that are negligible against the
/// first eigenvalue that is not. A free-free beam has two.
pub fn rigid_body_count(sorted: &[Complex64]) -> usize {
    for (k, ev) in sorted.iter().enumerate() {
        let negligible = sorted[..k]
            .iter()
            .all(|r| r.norm() < RIGID_BODY_RATIO * ev.norm());
        if ev.norm() > 0.0 && negligible {
            return k;
        }
    }
    0
}

/// `W(x) = Σ τ_l φ_l(x)` at each grid point.
pub fn displacement_amplitude(
    sol: &HarmonicSolution,
    basis: &BasisSet,
    x_grid: &[f64],
) -> Result<Vec<Complex64>> {
    let n = basis.size();
    if sol.tau.len() != n {
        return Err(Error::config("solution and basis sizes differ"));
    }
    let mut phi = vec![0.0; n];
    x_grid
        .iter()
        .map(|&x| {
            if !(0.0..=basis.length()).contains(&x) {
                return Err(Error::Domain {
                    what: "x",
                    value: x,
                    lo: 0.0,
                    hi: basis.length(),
                });
            }
            basis.values_into(x, &mut phi);
            Ok(phi.iter().zip(sol.tau.iter()).map(|(p, t)| t * *p).sum())
        })
        .collect()
}
