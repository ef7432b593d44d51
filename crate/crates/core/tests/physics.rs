use std::f64::consts::PI;

use abhlab::assembly::{assemble, assemble_with};
use abhlab::basis::BasisSet;
use abhlab::par::Execution;
use abhlab::solve::{displacement_amplitude, harmonic_response};
use abhlab::wavefield::{envelope, envelope_from_samples};
use abhlab::{Analysis, BeamConfig, Simulator};

fn response_at(
    cfg: BeamConfig,
    basis: &BasisSet,
    q: usize,
    freq: f64,
    x: f64,
) -> num_complex::Complex64 {
    let model = assemble(&cfg, basis, q).unwrap();
    let sol = harmonic_response(&model, 2.0 * PI * freq).unwrap();
    displacement_amplitude(&sol, basis, &[x]).unwrap()[0]
}

#[test]
fn reciprocity_between_two_points() {
    let base = BeamConfig::baseline();
    let basis = BasisSet::new(80, base.length).unwrap();
    let q = Analysis::default().quad_order_for(&base);
    let (a, b) = (0.13, 0.71);
    for freq in [90.0, 1500.0, 6000.0] {
        let ab = response_at(
            BeamConfig {
                force_location: a,
                ..base
            },
            &basis,
            q,
            freq,
            b,
        );
        let ba = response_at(
            BeamConfig {
                force_location: b,
                ..base
            },
            &basis,
            q,
            freq,
            a,
        );
        assert!(
            (ab - ba).norm() <= 1e-9 * ab.norm(),
            "{freq} Hz: {ab} vs {ba}"
        );
    }
}

#[test]
fn first_thirty_modes_converged_at_default_basis() {
    let cfg = BeamConfig::baseline();
    let at = |n| {
        let analysis = Analysis {
            basis_size: n,
            ..Analysis::default()
        };
        Simulator::new(cfg, analysis).unwrap().modes(30).unwrap()
    };
    let (a, b) = (at(140), at(150));
    for (m, n) in a.iter().zip(&b) {
        assert!((m.frequency_hz - n.frequency_hz).abs() / n.frequency_hz < 1e-3);
    }
}

#[test]
fn undamped_layer_gives_real_spectrum() {
    let cfg = BeamConfig {
        loss_factor: 0.0,
        ..BeamConfig::baseline()
    };
    let analysis = Analysis {
        basis_size: 60,
        ..Analysis::default()
    };
    let modes = Simulator::new(cfg, analysis).unwrap().modes(10).unwrap();
    for m in modes {
        assert!(m.loss_factor.abs() < 1e-9, "{}", m.loss_factor);
    }
}

#[test]
fn damping_grows_with_loss_factor() {
    let analysis = Analysis {
        basis_size: 60,
        ..Analysis::default()
    };
    let eta = |e| {
        let cfg = BeamConfig {
            loss_factor: e,
            ..BeamConfig::baseline()
        };
        Simulator::new(cfg, analysis).unwrap().modes(8).unwrap()
    };
    let (lo, hi) = (eta(0.05), eta(0.5));
    for (a, b) in lo.iter().zip(&hi) {
        assert!(b.loss_factor > a.loss_factor);
    }
}

#[test]
fn wave_travels_toward_the_taper() {
    let sim = Simulator::new(BeamConfig::baseline(), Analysis::default()).unwrap();
    let spec = sim.spectrum(7000.0).unwrap();
    let (_, k) = spec.peak();
    assert!(k > 0.0, "dominant wavenumber {k}");
}

#[test]
fn sampled_envelope_within_time_sampling_bound() {
    let sim = Simulator::new(BeamConfig::baseline(), Analysis::default()).unwrap();
    let field = sim.field(3300.0).unwrap();
    let exact = envelope(&field);
    let sampled = envelope_from_samples(&field);
    let bound = (PI / field.samples_per_period as f64).powi(2) / 2.0;
    for (e, s) in exact.iter().zip(&sampled) {
        assert!(s <= &(e * (1.0 + 1e-12)));
        assert!((e - s) / e <= bound + 1e-12);
    }
}

#[test]
fn sequential_and_parallel_assembly_agree_bitwise() {
    let cfg = BeamConfig::baseline();
    let basis = BasisSet::new(60, cfg.length).unwrap();
    let q = Analysis::default().quad_order_for(&cfg);
    let s = assemble_with(&cfg, &basis, q, Execution::Sequential).unwrap();
    let p = assemble_with(&cfg, &basis, q, Execution::Parallel).unwrap();
    assert_eq!(s.mass, p.mass);
    assert_eq!(s.stiffness, p.stiffness);
    assert_eq!(s.force, p.force);
}

#[test]
fn coverage_tracks_taper_fraction() {
    let base = BeamConfig::baseline();
    let short = base.with_taper_fraction(0.12);
    let long = base.with_taper_fraction(0.3);
    assert!(short.vem_coverage() > base.vem_coverage());
    assert!(long.vem_coverage() < base.vem_coverage());
    let vem_len = |c: &BeamConfig| c.length - c.vem_start;
    assert!((vem_len(&short) - vem_len(&base)).abs() < 1e-12);
    assert!((vem_len(&long) - vem_len(&base)).abs() < 1e-12);
}
