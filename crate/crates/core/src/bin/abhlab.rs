use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use abhlab::config::{parse_config_with, Settings};
use abhlab::output;
use abhlab::par::with_threads;
use abhlab::sweep::{run_sweep, summarize_trends, SweepAxis};
use abhlab::wavefield::{cost_function, envelope, spectrum_2d};
use abhlab::{Error, Simulator};

/// Beam-with-ABH simulator: modes, harmonic responses, CF sweeps and f–k spectra.
#[derive(Debug, Parser)]
#[command(name = "abhlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
struct RunManifest {
    /// Configuration file (TOML, SI units).
    #[arg(long)]
    config: PathBuf,
    /// Directory for output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override a configuration value, e.g. `--set vem.eta=0.1`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Damped natural frequencies and modal loss factors → modes.csv
    Modes {
        #[command(flatten)]
        run: RunManifest,
        #[arg(long, default_value_t = 30)]
        count: usize,
    },
    /// Harmonic response at one frequency → envelope.csv, field.dat, spectrum.dat
    Respond {
        #[command(flatten)]
        run: RunManifest,
        #[arg(long)]
        freq_hz: f64,
        /// Also write M.dat, K.dat and f0.dat.
        #[arg(long)]
        dump_matrices: bool,
    },
    /// CF over a two-axis parameter grid → cf_sweep.csv, cf_matrix.dat
    CfSweep {
        #[command(flatten)]
        run: RunManifest,
        /// e.g. frequency_hz=1000:10000:200log
        #[arg(long)]
        axis1: Option<String>,
        /// e.g. eta=0.001:0.5:50log
        #[arg(long)]
        axis2: Option<String>,
        /// Also render cf_map.svg.
        #[arg(long)]
        svg: bool,
    },
    /// Frequency–wavenumber spectrum at one frequency → spectrum.dat
    Spectrum {
        #[command(flatten)]
        run: RunManifest,
        #[arg(long)]
        freq_hz: f64,
    },
    /// Parse and validate a configuration file.
    ValidateConfig {
        #[command(flatten)]
        run: RunManifest,
    },
}

impl Command {
    fn run_manifest(&self) -> &RunManifest {
        match self {
            Command::Modes { run, .. }
            | Command::Respond { run, .. }
            | Command::CfSweep { run, .. }
            | Command::Spectrum { run, .. }
            | Command::ValidateConfig { run } => run,
        }
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var("ABHLAB_THREADS").ok()?.trim().parse().ok()
}

fn prepare_out(dir: &Path) -> abhlab::Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn report(path: PathBuf) {
    println!("wrote {}", path.display());
}

fn execute(cmd: &Command) -> abhlab::Result<bool> {
    let run = cmd.run_manifest();
    let settings: Settings = parse_config_with(&run.config, &run.overrides)?;
    if !matches!(cmd, Command::ValidateConfig { .. }) {
        prepare_out(&run.out)?;
    }
    let out = &run.out;
    match cmd {
        Command::ValidateConfig { .. } => {
            let b = &settings.beam;
            println!("{}: ok", run.config.display());
            println!(
                "taper fraction {:.4}, damping-layer coverage of taper {:.4}, basis size {}",
                b.taper_fraction(),
                b.vem_coverage(),
                settings.analysis.basis_size
            );
            Ok(true)
        }
        Command::Modes { count, .. } => {
            let sim = Simulator::new(settings.beam, settings.analysis)?;
            let modes = sim.modes(*count)?;
            for (i, m) in modes.iter().enumerate() {
                println!(
                    "{:>3} {:>12.4} Hz  eta {:.5}",
                    i + 1,
                    m.frequency_hz,
                    m.loss_factor
                );
            }
            report(output::emit(out, "modes.csv", &output::modes_csv(&modes))?);
            Ok(true)
        }
        Command::Respond {
            freq_hz,
            dump_matrices,
            ..
        } => {
            let sim = Simulator::new(settings.beam, settings.analysis)?;
            if *dump_matrices {
                sim.model.dump(out)?;
                println!("wrote M.dat, K.dat, f0.dat in {}", out.display());
            }
            let sol = sim.respond(*freq_hz)?;
            let field = sim.field_of(&sol)?;
            let env = envelope(&field);
            let cf = cost_function(&env)?;
            println!(
                "frequency {freq_hz} Hz: CF = {cf:.6} (residual {:.2e})",
                sol.residual
            );
            report(output::emit(
                out,
                "envelope.csv",
                &output::envelope_csv(&field.x, &env),
            )?);
            report(output::emit(
                out,
                "field.dat",
                &output::field_matrix(&field),
            )?);
            let spec = spectrum_2d(&field, settings.analysis.spatial_padding)?;
            report(output::emit(
                out,
                "spectrum.dat",
                &output::spectrum_matrix(&spec),
            )?);
            Ok(true)
        }
        Command::Spectrum { freq_hz, .. } => {
            let sim = Simulator::new(settings.beam, settings.analysis)?;
            let spec = sim.spectrum(*freq_hz)?;
            let (f, k) = spec.peak();
            println!(
                "peak at {f:.3} Hz, {k:.3} rad/m (bin {:.3} rad/m)",
                spec.wavenumber_step()
            );
            report(output::emit(
                out,
                "spectrum.dat",
                &output::spectrum_matrix(&spec),
            )?);
            Ok(true)
        }
        Command::CfSweep {
            axis1, axis2, svg, ..
        } => {
            let parse = |s: &Option<String>, default: &SweepAxis| -> abhlab::Result<SweepAxis> {
                s.as_deref().map_or_else(|| Ok(default.clone()), str::parse)
            };
            let a1 = parse(axis1, &settings.sweep.axis1)?;
            let a2 = parse(axis2, &settings.sweep.axis2)?;
            let result = run_sweep(&settings.beam, &a1, &a2, &settings.analysis)?;
            report(output::emit(
                out,
                "cf_sweep.csv",
                &output::sweep_csv(&result),
            )?);
            report(output::emit(
                out,
                "cf_matrix.dat",
                &output::sweep_matrix(&result),
            )?);
            if *svg {
                report(output::emit(
                    out,
                    "cf_map.svg",
                    &output::sweep_svg(&result),
                )?);
            }
            let trends = summarize_trends(&result, &settings.beam);
            for band in &trends.bands {
                if let Some(best) = band.argmin {
                    println!(
                        "{:.0}-{:.0} Hz: lowest band-averaged CF at {} = {}",
                        band.lo_hz, band.hi_hz, trends.parameter, best
                    );
                }
            }
            if let Some(cov) = &trends.vem_coverage {
                for (f, c) in trends.parameter_values.iter().zip(cov) {
                    println!("taper fraction {f:.4} -> damping-layer coverage {c:.4}");
                }
            }
            for p in &result.failed {
                eprintln!(
                    "point ({}, {}) = ({}, {}) failed: {}",
                    p.i, p.j, result.axis1.values[p.i], result.axis2.values[p.j], p.message
                );
            }
            Ok(result.failed.is_empty())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_threads(threads_from_env(), || execute(&cli.command)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
