//! Thickness profiles and composite cross-section properties.
//!
//! The base beam is uniform on `[0, L1)` and follows a power-law taper on
//! `[L1, L]`. A free viscoelastic layer is bonded to the lower face on
//! `[L2, L]`. Layer stacking: base occupies `z ∈ [0, h_b]`, the damping layer
//! `z ∈ [-h_v, 0]`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complete physical description of the beam, its damping layer and the load.
///
/// All quantities are SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamConfig {
    /// Total length (m).
    pub length: f64,
    /// End of the uniform section, start of the taper (m).
    pub uniform_length: f64,
    /// Start of the damping layer (m). The layer runs to the tip.
    pub vem_start: f64,
    /// Point-force location (m), on the uniform section.
    pub force_location: f64,
    /// Width (m).
    pub width: f64,
    /// Thickness of the uniform section (m).
    pub uniform_thickness: f64,
    /// Residual thickness at the taper tip (m).
    pub tip_thickness: f64,
    /// Damping layer thickness (m).
    pub vem_thickness: f64,
    /// Power-law exponent of the taper.
    pub exponent: f64,
    /// Young's modulus of the base beam (Pa).
    pub base_modulus: f64,
    /// Density of the base beam (kg/m³).
    pub base_density: f64,
    /// Storage modulus of the damping layer (Pa).
    pub vem_storage_modulus: f64,
    /// Loss factor of the damping layer.
    pub loss_factor: f64,
    /// Density of the damping layer (kg/m³).
    pub vem_density: f64,
    /// Point-force amplitude (N).
    pub force_amplitude: f64,
}

impl Default for BeamConfig {
    fn default() -> Self {
        Self::baseline()
    }
}

impl BeamConfig {
    /// Aluminium beam with a cubic taper and a partial tape layer, as built for
    /// the reference experiment. The point force sits at the free end of the
    /// uniform section.
    pub fn baseline() -> Self {
        BeamConfig {
            length: 1.22,
            uniform_length: 1.0,
            vem_start: 1.138,
            force_location: 0.0,
            width: 0.0127,
            uniform_thickness: 0.003,
            tip_thickness: 0.0002,
            vem_thickness: 0.0019,
            exponent: 3.0,
            base_modulus: 68.9e9,
            base_density: 2700.0,
            vem_storage_modulus: 96.16e6,
            loss_factor: 0.34,
            vem_density: 1041.2,
            force_amplitude: 1.0,
        }
    }

    /// Uniform beam of the same material and cross-section with no damping
    /// layer. The taper and layer breakpoints are kept so the segment layout
    /// is unchanged.
    pub fn uniform(&self) -> Self {
        BeamConfig {
            tip_thickness: self.uniform_thickness,
            vem_thickness: 0.0,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("length", self.length),
            ("uniform_length", self.uniform_length),
            ("vem_start", self.vem_start),
            ("force_location", self.force_location),
            ("width", self.width),
            ("uniform_thickness", self.uniform_thickness),
            ("tip_thickness", self.tip_thickness),
            ("vem_thickness", self.vem_thickness),
            ("exponent", self.exponent),
            ("base_modulus", self.base_modulus),
            ("base_density", self.base_density),
            ("vem_storage_modulus", self.vem_storage_modulus),
            ("loss_factor", self.loss_factor),
            ("vem_density", self.vem_density),
            ("force_amplitude", self.force_amplitude),
        ];
        if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::config(format!("{name} is not finite")));
        }
        if !(0.0 < self.uniform_length
            && self.uniform_length < self.vem_start
            && self.vem_start < self.length)
        {
            return Err(Error::config(format!(
                "require 0 < uniform_length ({}) < vem_start ({}) < length ({})",
                self.uniform_length, self.vem_start, self.length
            )));
        }
        if !(0.0 <= self.force_location && self.force_location < self.uniform_length) {
            return Err(Error::config(format!(
                "force_location ({}) must lie on the uniform section [0, {})",
                self.force_location, self.uniform_length
            )));
        }
        if self.tip_thickness <= 0.0 {
            return Err(Error::config("tip_thickness must be positive"));
        }
        if self.uniform_thickness < self.tip_thickness {
            return Err(Error::config(
                "uniform_thickness must not be smaller than tip_thickness",
            ));
        }
        if self.vem_thickness < 0.0 {
            return Err(Error::config("vem_thickness must be non-negative"));
        }
        if self.exponent < 1.0 {
            return Err(Error::config("exponent must be at least 1"));
        }
        if self.loss_factor < 0.0 {
            return Err(Error::config("loss_factor must be non-negative"));
        }
        for (name, v) in [
            ("width", self.width),
            ("base_modulus", self.base_modulus),
            ("base_density", self.base_density),
            ("vem_storage_modulus", self.vem_storage_modulus),
            ("vem_density", self.vem_density),
        ] {
            if v <= 0.0 {
                return Err(Error::config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Fraction of the total length occupied by the taper.
    pub fn taper_fraction(&self) -> f64 {
        (self.length - self.uniform_length) / self.length
    }

    /// Fraction of the taper covered by the damping layer.
    pub fn vem_coverage(&self) -> f64 {
        (self.length - self.vem_start) / (self.length - self.uniform_length)
    }

    /// Moves the start of the taper so it occupies `fraction` of the total
    /// length, keeping the total length and the damping-layer length fixed.
    pub fn with_taper_fraction(&self, fraction: f64) -> Self {
        let vem_length = self.length - self.vem_start;
        BeamConfig {
            uniform_length: self.length * (1.0 - fraction),
            vem_start: self.length - vem_length,
            ..*self
        }
    }

    fn check_station(&self, x: f64) -> Result<()> {
        if (0.0..=self.length).contains(&x) {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "x",
                value: x,
                lo: 0.0,
                hi: self.length,
            })
        }
    }
}

/// Composite section state at one station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionSample {
    pub x: f64,
    pub base_thickness: f64,
    pub vem_thickness: f64,
    /// Neutral-axis offset from the base/layer interface (complex, m).
    pub neutral_axis: Complex64,
    /// Equivalent bending stiffness (complex, N·m²).
    pub bending_stiffness: Complex64,
    /// Mass per unit length (kg/m).
    pub mass_per_length: f64,
}

pub fn base_thickness(x: f64, cfg: &BeamConfig) -> Result<f64> {
    cfg.check_station(x)?;
    Ok(base_thickness_unchecked(x, cfg))
}

fn base_thickness_unchecked(x: f64, cfg: &BeamConfig) -> f64 {
    if x < cfg.uniform_length {
        cfg.uniform_thickness
    } else {
        let s = (cfg.length - x) / (cfg.length - cfg.uniform_length);
        cfg.tip_thickness + s.powf(cfg.exponent) * (cfg.uniform_thickness - cfg.tip_thickness)
    }
}

/// Right-continuous step: the layer is present from `vem_start` inclusive.
pub fn vem_thickness(x: f64, cfg: &BeamConfig) -> Result<f64> {
    cfg.check_station(x)?;
    Ok(vem_thickness_unchecked(x, cfg))
}

fn vem_thickness_unchecked(x: f64, cfg: &BeamConfig) -> f64 {
    if x >= cfg.vem_start {
        cfg.vem_thickness
    } else {
        0.0
    }
}

/// Complex Young's modulus `E_s (1 + i η)`.
pub fn complex_modulus(storage: f64, loss_factor: f64) -> Complex64 {
    Complex64::new(storage, storage * loss_factor)
}

pub fn section_sample(x: f64, cfg: &BeamConfig) -> Result<SectionSample> {
    cfg.check_station(x)?;
    let hb = base_thickness_unchecked(x, cfg);
    let hv = vem_thickness_unchecked(x, cfg);
    let (neutral_axis, bending_stiffness) = composite_bending(
        hb,
        hv,
        cfg.width,
        cfg.base_modulus,
        complex_modulus(cfg.vem_storage_modulus, cfg.loss_factor),
    );
    Ok(SectionSample {
        x,
        base_thickness: hb,
        vem_thickness: hv,
        neutral_axis,
        bending_stiffness,
        mass_per_length: cfg.width * (hb * cfg.base_density + hv * cfg.vem_density),
    })
}

/// Neutral axis and bending stiffness of a two-layer section.
pub(crate) fn composite_bending(
    hb: f64,
    hv: f64,
    width: f64,
    eb: f64,
    ev: Complex64,
) -> (Complex64, Complex64) {
    let base_inertia = width * hb.powi(3) / 12.0;
    let base_area = width * hb;
    if hv == 0.0 {
        return (
            Complex64::new(hb / 2.0, 0.0),
            Complex64::new(eb * base_inertia, 0.0),
        );
    }
    let zbar = (eb * hb * hb - ev * hv * hv) / (2.0 * (eb * hb + ev * hv));
    let vem_inertia = width * hv.powi(3) / 12.0;
    let vem_area = width * hv;
    let db = eb * (base_inertia + base_area * (hb / 2.0 - zbar).powi(2));
    let dv = ev * (vem_inertia + vem_area * (-hv / 2.0 - zbar).powi(2));
    (zbar, db + dv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn thickness_profile_values() {
        let cfg = BeamConfig::baseline();
        assert_eq!(base_thickness(0.0, &cfg).unwrap(), 0.003);
        assert_relative_eq!(base_thickness(1.22, &cfg).unwrap(), 0.0002, epsilon = 1e-18);
        assert_relative_eq!(
            base_thickness(1.11, &cfg).unwrap(),
            0.00055,
            max_relative = 1e-12
        );
        assert_eq!(base_thickness(1.0, &cfg).unwrap(), 0.003);
        assert!(base_thickness(-0.01, &cfg).is_err());
        assert!(base_thickness(1.3, &cfg).is_err());
    }

    #[test]
    fn vem_step_is_right_continuous() {
        let cfg = BeamConfig::baseline();
        assert_eq!(vem_thickness(1.0, &cfg).unwrap(), 0.0);
        assert_eq!(vem_thickness(1.2, &cfg).unwrap(), 0.0019);
        assert_eq!(vem_thickness(cfg.vem_start, &cfg).unwrap(), 0.0019);
        assert!(vem_thickness(2.0, &cfg).is_err());
    }

    #[test]
    fn complex_modulus_values() {
        let e = complex_modulus(96.16e6, 0.34);
        assert_relative_eq!(e.re, 96.16e6);
        assert_relative_eq!(e.im, 32.6944e6, max_relative = 1e-12);
        assert_eq!(complex_modulus(7.0, 0.0), Complex64::new(7.0, 0.0));
        assert_eq!(complex_modulus(100.0, 0.5), Complex64::new(100.0, 50.0));
    }

    #[test]
    fn single_layer_reduction() {
        let cfg = BeamConfig::baseline();
        let s = section_sample(0.5, &cfg).unwrap();
        assert_eq!(s.neutral_axis, Complex64::new(0.0015, 0.0));
        assert_relative_eq!(
            s.bending_stiffness.re,
            68.9e9 * 0.0127 * 0.003f64.powi(3) / 12.0,
            max_relative = 1e-14
        );
        assert_eq!(s.bending_stiffness.im, 0.0);
    }

    #[test]
    fn baseline_uniform_section() {
        let s = section_sample(0.0, &BeamConfig::baseline()).unwrap();
        assert_relative_eq!(s.bending_stiffness.re, 1.968_817_5, max_relative = 1e-8);
        assert_relative_eq!(s.mass_per_length, 0.10287, max_relative = 1e-12);
    }

    #[test]
    fn symmetric_bilayer_is_doubled_monolayer() {
        let h = 0.002;
        let (zbar, d) = composite_bending(h, h, 0.01, 70e9, Complex64::new(70e9, 0.0));
        assert_eq!(zbar, Complex64::new(0.0, 0.0));
        assert_relative_eq!(
            d.re,
            70e9 * 0.01 * (2.0 * h).powi(3) / 12.0,
            max_relative = 1e-12
        );
        assert_eq!(d.im, 0.0);
    }

    #[test]
    fn damped_layer_properties() {
        let cfg = BeamConfig::baseline();
        let s = section_sample(1.2, &cfg).unwrap();
        assert!(s.bending_stiffness.re > 0.0);
        assert!(s.bending_stiffness.im > 0.0);
        assert!(s.mass_per_length > 0.0);
        let undamped = BeamConfig {
            loss_factor: 0.0,
            ..cfg
        };
        let s = section_sample(1.2, &undamped).unwrap();
        assert_eq!(s.neutral_axis.im, 0.0);
        assert_eq!(s.bending_stiffness.im, 0.0);
    }

    #[test]
    fn force_does_not_enter_section() {
        let cfg = BeamConfig::baseline();
        let scaled = BeamConfig {
            force_amplitude: 42.0,
            ..cfg
        };
        for x in [0.1, 1.05, 1.15, 1.22] {
            assert_eq!(
                section_sample(x, &cfg).unwrap(),
                section_sample(x, &scaled).unwrap()
            );
        }
    }

    #[test]
    fn validation() {
        let cfg = BeamConfig::baseline();
        assert!(cfg.validate().is_ok());
        let bad = BeamConfig {
            vem_start: 0.9,
            ..cfg
        };
        assert!(bad.validate().is_err());
        let bad = BeamConfig {
            force_location: 1.05,
            ..cfg
        };
        assert!(bad.validate().is_err());
        let bad = BeamConfig {
            exponent: 0.5,
            ..cfg
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn taper_fraction_keeps_layer_length() {
        let cfg = BeamConfig::baseline().with_taper_fraction(0.15);
        assert_relative_eq!(cfg.taper_fraction(), 0.15, max_relative = 1e-12);
        assert_relative_eq!(cfg.length - cfg.vem_start, 0.082, max_relative = 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn taper_monotone_and_continuous(m in 1.0f64..10.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
                let cfg = BeamConfig { exponent: m, ..BeamConfig::baseline() };
                let span = cfg.length - cfg.uniform_length;
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let x1 = cfg.uniform_length + lo * span;
                let x2 = cfg.uniform_length + hi * span;
                prop_assert!(base_thickness(x1, &cfg).unwrap() >= base_thickness(x2, &cfg).unwrap());
                let left = base_thickness(cfg.uniform_length * (1.0 - 1e-12), &cfg).unwrap();
                let right = base_thickness(cfg.uniform_length, &cfg).unwrap();
                prop_assert!((left - right).abs() < 1e-15);
            }

            #[test]
            fn zero_loss_has_real_stiffness(x in 0.0f64..1.22, m in 1.0f64..10.0) {
                let cfg = BeamConfig { exponent: m, loss_factor: 0.0, ..BeamConfig::baseline() };
                let s = section_sample(x, &cfg).unwrap();
                prop_assert_eq!(s.neutral_axis.im, 0.0);
                prop_assert_eq!(s.bending_stiffness.im, 0.0);
                prop_assert!(s.bending_stiffness.re > 0.0);
            }
        }
    }
}
