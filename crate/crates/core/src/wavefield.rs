//! Steady-state wavefield reconstruction, envelope, traveling-wave cost
//! function and frequency–wavenumber spectrum.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::basis::BasisSet;
use crate::error::{Error, Result};
use crate::solve::{displacement_amplitude, HarmonicSolution};

pub const MIN_STATIONS: usize = 32;
pub const MIN_SAMPLES_PER_PERIOD: usize = 16;
pub const MIN_FFT_POINTS: usize = 32;

/// Sampled steady-state response `w(x, t) = Re(W(x) e^{iωt})`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    /// Complex amplitude `W(x_j)`.
    pub amplitude: Vec<Complex64>,
    /// `w(x_j, t_k)`, one row per station.
    pub samples: DMatrix<f64>,
    pub omega: f64,
    pub samples_per_period: usize,
}

impl WaveField {
    /// Builds the field from amplitudes on a grid over `periods` periods.
    pub fn from_amplitude(
        x: Vec<f64>,
        amplitude: Vec<Complex64>,
        omega: f64,
        periods: usize,
        samples_per_period: usize,
    ) -> Result<Self> {
        if x.len() != amplitude.len() {
            return Err(Error::config("station and amplitude counts differ"));
        }
        if samples_per_period < MIN_SAMPLES_PER_PERIOD {
            return Err(Error::config(format!(
                "at least {MIN_SAMPLES_PER_PERIOD} samples per period required"
            )));
        }
        if periods == 0 || omega.is_nan() || omega <= 0.0 {
            return Err(Error::config(
                "need a positive frequency and at least one period",
            ));
        }
        let dt = 2.0 * PI / omega / samples_per_period as f64;
        let t: Vec<f64> = (0..periods * samples_per_period)
            .map(|k| k as f64 * dt)
            .collect();
        let samples = DMatrix::from_fn(x.len(), t.len(), |j, k| {
            (amplitude[j] * Complex64::from_polar(1.0, omega * t[k])).re
        });
        Ok(WaveField {
            x,
            t,
            amplitude,
            samples,
            omega,
            samples_per_period,
        })
    }

    pub fn dx(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn dt(&self) -> f64 {
        self.t[1] - self.t[0]
    }
}

/// Uniform stations spanning `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect()
}

/// Reconstructs the response of `sol` over the window `[lo, hi]`.
pub fn reconstruct(
    sol: &HarmonicSolution,
    basis: &BasisSet,
    window: (f64, f64),
    nx: usize,
    periods: usize,
    samples_per_period: usize,
) -> Result<WaveField> {
    let (lo, hi) = window;
    for v in [lo, hi] {
        if !(0.0..=basis.length()).contains(&v) {
            return Err(Error::Domain {
                what: "window bound",
                value: v,
                lo: 0.0,
                hi: basis.length(),
            });
        }
    }
    if lo >= hi {
        return Err(Error::config("window start must precede window end"));
    }
    if nx < MIN_STATIONS {
        return Err(Error::config(format!(
            "at least {MIN_STATIONS} stations required"
        )));
    }
    let x = linspace(lo, hi, nx);
    let amplitude = displacement_amplitude(sol, basis, &x)?;
    WaveField::from_amplitude(x, amplitude, sol.omega, periods, samples_per_period)
}

/// Spatial envelope `|W(x_j)|`.
pub fn envelope(field: &WaveField) -> Vec<f64> {
    field.amplitude.iter().map(|w| w.norm()).collect()
}

/// Envelope from the sampled time histories, `max_k |w(x_j, t_k)|`.
///
/// Underestimates [`envelope`] by at most a relative `(π/N)²/2` for `N`
/// samples per period.
pub fn envelope_from_samples(field: &WaveField) -> Vec<f64> {
    field
        .samples
        .row_iter()
        .map(|row| row.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
        .collect()
}

/// `(max - min) / (max + min)` of an envelope: 0 for a pure traveling wave,
/// 1 for a pure standing wave.
pub fn cost_function(envelope: &[f64]) -> Result<f64> {
    if envelope.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::config("envelope must be finite and non-negative"));
    }
    let max = envelope.iter().copied().fold(0.0, f64::max);
    let min = envelope.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        return Err(Error::ZeroEnvelope);
    }
    Ok((max - min) / (max + min))
}

/// Flexural wavenumber `(μ ω² / D)^{1/4}` of a uniform Euler–Bernoulli beam.
pub fn dispersion_wavenumber(omega: f64, bending_stiffness: f64, mass_per_length: f64) -> f64 {
    (mass_per_length * omega * omega / bending_stiffness).powf(0.25)
}

/// Frequency–wavenumber magnitude spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    /// Non-negative frequencies (Hz), ascending.
    pub freqs: Vec<f64>,
    /// Signed wavenumbers (rad/m), ascending and symmetric about 0. A
    /// positive wavenumber at positive frequency travels toward `+x`.
    pub wavenumbers: Vec<f64>,
    /// `magnitude[(i, j)]` at `freqs[i]`, `wavenumbers[j]`, peak normalized to 1.
    pub magnitude: DMatrix<f64>,
}

impl Spectrum2D {
    /// Location of the largest magnitude: `(freq, wavenumber)`.
    pub fn peak(&self) -> (f64, f64) {
        let (mut bi, mut bj, mut best) = (0, 0, f64::NEG_INFINITY);
        for j in 0..self.magnitude.ncols() {
            for i in 0..self.magnitude.nrows() {
                if self.magnitude[(i, j)] > best {
                    best = self.magnitude[(i, j)];
                    bi = i;
                    bj = j;
                }
            }
        }
        (self.freqs[bi], self.wavenumbers[bj])
    }

    pub fn wavenumber_step(&self) -> f64 {
        self.wavenumbers[1] - self.wavenumbers[0]
    }

    pub fn freq_step(&self) -> f64 {
        self.freqs[1] - self.freqs[0]
    }
}

fn check_uniform(v: &[f64], what: &'static str) -> Result<()> {
    let step = v[1] - v[0];
    let ok = step > 0.0
        && v.windows(2)
            .all(|p| ((p[1] - p[0]) - step).abs() <= 1e-9 * step.abs());
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: step,
            lo: 0.0,
            hi: f64::INFINITY,
        })
    }
}

/// 2D DFT of `w(x, t)` with a rectangular window.
///
/// The spatial axis is zero-padded to `spatial_padding × nx` points. Time uses
/// the kernel `e^{-iΩt}` and space `e^{+iKx}`, so `cos(ωt - kx)` peaks at
/// `(ω/2π, +k)`. Only non-negative frequencies are kept.
pub fn spectrum_2d(field: &WaveField, spatial_padding: usize) -> Result<Spectrum2D> {
    let (nx, nt) = field.samples.shape();
    if nx < MIN_FFT_POINTS || nt < MIN_FFT_POINTS {
        return Err(Error::config(format!(
            "2D spectrum needs at least {MIN_FFT_POINTS} stations and time samples"
        )));
    }
    check_uniform(&field.x, "station spacing")?;
    check_uniform(&field.t, "time step")?;
    let nk = nx * spatial_padding.max(1);
    let nf = nt / 2 + 1;

    let mut planner = FftPlanner::<f64>::new();
    let fft_t = planner.plan_fft_forward(nt);
    let fft_x = planner.plan_fft_inverse(nk);

    // time transform per station, keep non-negative frequencies
    let mut by_station = vec![Complex64::new(0.0, 0.0); nx * nf];
    let mut buf = vec![Complex64::new(0.0, 0.0); nt];
    for j in 0..nx {
        for (k, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(field.samples[(j, k)], 0.0);
        }
        fft_t.process(&mut buf);
        by_station[j * nf..(j + 1) * nf].copy_from_slice(&buf[..nf]);
    }

    // spatial transform per frequency; drop the unpaired -Nyquist bin so the
    // signed axis is symmetric
    let half = (nk - 1) / 2;
    let ncols = 2 * half + 1;
    let mut magnitude = DMatrix::<f64>::zeros(nf, ncols);
    let mut col = vec![Complex64::new(0.0, 0.0); nk];
    for i in 0..nf {
        col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for j in 0..nx {
            col[j] = by_station[j * nf + i];
        }
        fft_x.process(&mut col);
        for (c, s) in (-(half as isize)..=half as isize).enumerate() {
            let idx = s.rem_euclid(nk as isize) as usize;
            magnitude[(i, c)] = col[idx].norm();
        }
    }
    let peak = magnitude.max();
    if peak > 0.0 {
        magnitude /= peak;
    }

    let dk = 2.0 * PI / (nk as f64 * field.dx());
    let df = 1.0 / (nt as f64 * field.dt());
    Ok(Spectrum2D {
        freqs: (0..nf).map(|i| i as f64 * df).collect(),
        wavenumbers: (-(half as isize)..=half as isize)
            .map(|s| s as f64 * dk)
            .collect(),
        magnitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn field(w: impl Fn(f64) -> Complex64, nx: usize, span: f64) -> WaveField {
        let x = linspace(0.0, span * (nx - 1) as f64 / nx as f64, nx);
        let amp = x.iter().map(|&x| w(x)).collect();
        WaveField::from_amplitude(x, amp, 2.0 * PI * 100.0, 8, 32).unwrap()
    }

    #[test]
    fn constant_amplitude_oscillates_uniformly() {
        let f = field(|_| Complex64::new(2.0, 0.0), 40, 1.0);
        for k in 0..f.t.len() {
            let expect = 2.0 * (f.omega * f.t[k]).cos();
            for j in 0..40 {
                assert_relative_eq!(f.samples[(j, k)], expect, epsilon = 1e-14);
            }
        }
        assert!(envelope(&f).iter().all(|&e| e == 2.0));
        assert_eq!(cost_function(&envelope(&f)).unwrap(), 0.0);
    }

    #[test]
    fn traveling_and_standing_waves() {
        let k = 2.0 * PI * 3.0;
        let tw = field(|x| Complex64::from_polar(1.0, -k * x), 64, 1.0);
        for (j, &x) in tw.x.iter().enumerate() {
            for (i, &t) in tw.t.iter().enumerate() {
                assert!((tw.samples[(j, i)] - (tw.omega * t - k * x).cos()).abs() < 1e-12);
            }
        }
        assert!(envelope(&tw).iter().all(|e| (e - 1.0).abs() < 1e-15));
        assert!(cost_function(&envelope(&tw)).unwrap() < 1e-15);

        let sw = field(|x| Complex64::new((k * x).cos(), 0.0), 64, 1.0);
        for (j, &x) in sw.x.iter().enumerate() {
            assert_relative_eq!(envelope(&sw)[j], (k * x).cos().abs(), epsilon = 1e-15);
        }
    }

    #[test]
    fn cost_function_values() {
        assert_eq!(cost_function(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(cost_function(&[0.0, 0.3, 1.0]).unwrap(), 1.0);
        assert_eq!(cost_function(&[1.0, 3.0, 2.0]).unwrap(), 0.5);
        assert!(matches!(
            cost_function(&[0.0, 0.0]),
            Err(Error::ZeroEnvelope)
        ));
        assert!(cost_function(&[-1.0, 1.0]).is_err());
    }

    #[test]
    fn sampled_envelope_within_bound() {
        let k = 7.3;
        let f = field(
            |x| Complex64::new((k * x).cos(), 0.4 * (k * x).sin()),
            64,
            1.0,
        );
        let bound = (PI / f.samples_per_period as f64).powi(2) / 2.0;
        for (exact, sampled) in envelope(&f).iter().zip(envelope_from_samples(&f)) {
            assert!(sampled <= exact * (1.0 + 1e-12));
            assert!(exact - sampled <= bound * exact + 1e-15);
        }
    }

    #[test]
    fn dispersion_scaling() {
        let k = dispersion_wavenumber(2.0 * PI * 7000.0, 1.968_817_5, 0.10287);
        assert_relative_eq!(k, 100.27, max_relative = 5e-4);
        assert_relative_eq!(
            dispersion_wavenumber(3.0, 2.0, 16.0 * 5.0),
            2.0 * dispersion_wavenumber(3.0, 2.0, 5.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            dispersion_wavenumber(3.0, 16.0 * 2.0, 5.0),
            0.5 * dispersion_wavenumber(3.0, 2.0, 5.0),
            max_relative = 1e-14
        );
    }

    /// Fraction of squared magnitude within one bin of the given peaks.
    fn concentration(s: &Spectrum2D, peaks: &[(f64, f64)]) -> f64 {
        let (df, dk) = (s.freq_step(), s.wavenumber_step());
        let total: f64 = s.magnitude.iter().map(|m| m * m).sum();
        let mut near = 0.0;
        for i in 0..s.freqs.len() {
            for j in 0..s.wavenumbers.len() {
                let hit = peaks.iter().any(|&(f, k)| {
                    (s.freqs[i] - f).abs() <= df * 1.0001
                        && (s.wavenumbers[j] - k).abs() <= dk * 1.0001
                });
                if hit {
                    near += s.magnitude[(i, j)].powi(2);
                }
            }
        }
        near / total
    }

    #[test]
    fn rightward_wave_has_single_positive_peak() {
        // 5 whole wavelengths over the window so the peak is on a bin
        let k = 2.0 * PI * 5.0;
        let f = field(|x| Complex64::from_polar(1.0, -k * x), 64, 1.0);
        let s = spectrum_2d(&f, 1).unwrap();
        let (pf, pk) = s.peak();
        assert_relative_eq!(pf, 100.0, max_relative = 1e-9);
        assert_relative_eq!(pk, k, max_relative = 1e-9);
        assert!(concentration(&s, &[(100.0, k)]) >= 0.95);

        let padded = spectrum_2d(&f, 4).unwrap();
        assert_relative_eq!(padded.peak().1, k, max_relative = 1e-9);
    }

    #[test]
    fn standing_wave_has_symmetric_peaks() {
        let k = 2.0 * PI * 4.0;
        let f = field(|x| Complex64::new((k * x).cos(), 0.0), 64, 1.0);
        let s = spectrum_2d(&f, 1).unwrap();
        let fi = s
            .freqs
            .iter()
            .position(|&v| (v - 100.0).abs() < 1e-6)
            .unwrap();
        let jp = s
            .wavenumbers
            .iter()
            .position(|&v| (v - k).abs() < 1e-6)
            .unwrap();
        let jm = s
            .wavenumbers
            .iter()
            .position(|&v| (v + k).abs() < 1e-6)
            .unwrap();
        assert_relative_eq!(s.magnitude[(fi, jp)], 1.0, max_relative = 1e-9);
        assert_relative_eq!(s.magnitude[(fi, jm)], 1.0, max_relative = 1e-9);
        assert!(concentration(&s, &[(100.0, k), (100.0, -k)]) >= 0.95);
    }

    #[test]
    fn spectrum_axes() {
        let f = field(|x| Complex64::from_polar(1.0, -20.0 * x), 50, 1.0);
        let s = spectrum_2d(&f, 4).unwrap();
        assert!(s.freqs.windows(2).all(|p| p[0] < p[1]));
        assert!(s.wavenumbers.windows(2).all(|p| p[0] < p[1]));
        let n = s.wavenumbers.len();
        for j in 0..n {
            assert_relative_eq!(s.wavenumbers[j], -s.wavenumbers[n - 1 - j], epsilon = 1e-9);
        }
        assert!(s.magnitude.iter().all(|&m| m >= 0.0));
        assert_relative_eq!(s.magnitude.max(), 1.0);
    }

    #[test]
    fn spectrum_rejects_irregular_grid() {
        let mut f = field(|_| Complex64::new(1.0, 0.0), 40, 1.0);
        f.x[7] += 1e-3;
        assert!(matches!(spectrum_2d(&f, 1), Err(Error::Domain { .. })));
        let small = field(|_| Complex64::new(1.0, 0.0), 20, 1.0);
        assert!(spectrum_2d(&small, 1).is_err());
    }
}
