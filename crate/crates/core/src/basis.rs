//! Legendre trial functions on the reference coordinate `ξ = 2x/L - 1`.

use crate::error::{Error, Result};

/// Smallest basis that spans both rigid-body shapes and two flexible shapes.
pub const MIN_BASIS_SIZE: usize = 4;

/// Default basis size for the 10 kHz band.
pub const DEFAULT_BASIS_SIZE: usize = 140;

/// The first `n` Legendre polynomials mapped onto a beam of length `length`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSet {
    n: usize,
    length: f64,
}

impl BasisSet {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < MIN_BASIS_SIZE {
            return Err(Error::config(format!(
                "basis size {n} is below the minimum of {MIN_BASIS_SIZE}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::config("beam length must be positive"));
        }
        Ok(BasisSet { n, length })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Values `φ_l(x)` for every `l < n`, written into `out`.
    pub fn values_into(&self, x: f64, out: &mut [f64]) {
        legendre_values(map_to_reference(x, self.length), out);
    }

    /// Values and physical second derivatives for every `l < n`.
    pub fn values_and_d2_into(&self, x: f64, values: &mut [f64], d2: &mut [f64]) {
        let mut d1 = vec![0.0; self.n];
        legendre_with_derivatives(map_to_reference(x, self.length), values, &mut d1, d2);
        let scale = (2.0 / self.length).powi(2);
        d2.iter_mut().for_each(|v| *v *= scale);
    }

    pub fn values(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.values_into(x, &mut out);
        out
    }
}

pub fn map_to_reference(x: f64, length: f64) -> f64 {
    2.0 * x / length - 1.0
}

/// `P_l(ξ)` by the three-term recursion.
pub fn legendre_eval(l: usize, xi: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, xi);
    if l == 0 {
        return prev;
    }
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * xi * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `(2/L)² P_l''(ξ(x))`, the second derivative with respect to `x`.
pub fn legendre_d2_physical(l: usize, x: f64, length: f64) -> f64 {
    let n = l + 1;
    let (mut p, mut d1, mut d2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    legendre_with_derivatives(map_to_reference(x, length), &mut p, &mut d1, &mut d2);
    (2.0 / length).powi(2) * d2[l]
}

/// Fills `out[l] = P_l(ξ)` for `l < out.len()`.
pub fn legendre_values(xi: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n > 1 {
        out[1] = xi;
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0) * xi * out[k] - kf * out[k - 1]) / (kf + 1.0);
    }
}

/// Values, first and second derivatives with respect to `ξ`.
///
/// Derivatives use `P'_{l+1} = (2l+1) P_l + P'_{l-1}`, applied once for the
/// first derivative and again (on `P'`) for the second.
pub fn legendre_with_derivatives(xi: f64, p: &mut [f64], d1: &mut [f64], d2: &mut [f64]) {
    let n = p.len();
    debug_assert!(d1.len() == n && d2.len() == n);
    legendre_values(xi, p);
    if n == 0 {
        return;
    }
    d1[0] = 0.0;
    d2[0] = 0.0;
    if n > 1 {
        d1[1] = 1.0;
        d2[1] = 0.0;
    }
    for k in 1..n.saturating_sub(1) {
        let c = (2 * k + 1) as f64;
        d1[k + 1] = c * p[k] + d1[k - 1];
        d2[k + 1] = c * d1[k] + d2[k - 1];
    }
}
