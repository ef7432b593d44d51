//! Configuration files: TOML with the sections `beam`, `abh`, `vem`,
//! `force`, `solver`, `analysis` and `sweep`. Values are bare SI numbers.

use std::path::Path;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::geometry::BeamConfig;
use crate::pipeline::Analysis;
use crate::sweep::SweepAxis;

/// The shipped baseline configuration file.
pub const BASELINE_CFG: &str = include_str!("../configs/baseline.cfg");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Float,
    Count,
    Text,
}

struct Key {
    section: &'static str,
    name: &'static str,
    kind: Kind,
    required: bool,
}

const fn key(section: &'static str, name: &'static str, kind: Kind, required: bool) -> Key {
    Key {
        section,
        name,
        kind,
        required,
    }
}

const SCHEMA: &[Key] = &[
    key("beam", "length", Kind::Float, true),
    key("beam", "uniform_length", Kind::Float, true),
    key("beam", "width", Kind::Float, true),
    key("beam", "thickness", Kind::Float, true),
    key("beam", "youngs_modulus", Kind::Float, true),
    key("beam", "density", Kind::Float, true),
    key("abh", "tip_thickness", Kind::Float, true),
    key("abh", "exponent", Kind::Float, true),
    key("vem", "start", Kind::Float, true),
    key("vem", "thickness", Kind::Float, true),
    key("vem", "storage_modulus", Kind::Float, true),
    key("vem", "eta", Kind::Float, true),
    key("vem", "density", Kind::Float, true),
    key("force", "location", Kind::Float, true),
    key("force", "amplitude", Kind::Float, true),
    key("solver", "basis_size", Kind::Count, false),
    key("solver", "quad_order", Kind::Count, false),
    key("analysis", "window_start", Kind::Float, false),
    key("analysis", "window_end", Kind::Float, false),
    key("analysis", "stations", Kind::Count, false),
    key("analysis", "periods", Kind::Count, false),
    key("analysis", "samples_per_period", Kind::Count, false),
    key("analysis", "spatial_padding", Kind::Count, false),
    key("sweep", "axis1", Kind::Text, false),
    key("sweep", "axis2", Kind::Text, false),
];

const SECTIONS: &[&str] = &["beam", "abh", "vem", "force", "solver", "analysis", "sweep"];

fn lookup(section: &str, name: &str) -> Option<&'static Key> {
    SCHEMA
        .iter()
        .find(|k| k.section == section && k.name == name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            axis1: "frequency_hz=1000:10000:200log"
                .parse()
                .expect("valid default axis"),
            axis2: "eta=0.001:0.5:50log".parse().expect("valid default axis"),
        }
    }
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub beam: BeamConfig,
    pub analysis: Analysis,
    pub sweep: SweepSettings,
}

impl Settings {
    pub fn baseline() -> Self {
        parse_config_str(BASELINE_CFG, &[]).expect("shipped baseline parses")
    }
}

pub fn parse_config(path: &Path) -> Result<Settings> {
    parse_config_with(path, &[])
}

/// Reads `path`, applies `section.key=value` overrides and validates.
pub fn parse_config_with(path: &Path, overrides: &[String]) -> Result<Settings> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text, overrides)
}

pub fn parse_config_str(text: &str, overrides: &[String]) -> Result<Settings> {
    let mut table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config(e.message().to_string()))?;
    check_keys(&table)?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    build(&table)
}

fn check_keys(table: &Table) -> Result<()> {
    for (section, body) in table {
        if !SECTIONS.contains(&section.as_str()) {
            return Err(Error::key(section.clone(), "unknown section"));
        }
        let body = body
            .as_table()
            .ok_or_else(|| Error::key(section.clone(), "expected a [section]"))?;
        for name in body.keys() {
            if lookup(section, name).is_none() {
                return Err(Error::key(format!("{section}.{name}"), "unknown key"));
            }
        }
    }
    for k in SCHEMA.iter().filter(|k| k.required) {
        let present = table
            .get(k.section)
            .and_then(Value::as_table)
            .is_some_and(|t| t.contains_key(k.name));
        if !present {
            return Err(Error::key(format!("{}.{}", k.section, k.name), "missing"));
        }
    }
    Ok(())
}

/// Applies one `section.key=value` override.
pub fn apply_override(table: &mut Table, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::key(assignment, "override must look like section.key=value"))?;
    let path = path.trim();
    let (section, name) = path
        .split_once('.')
        .ok_or_else(|| Error::key(path, "override key must be section.key"))?;
    let spec = lookup(section, name).ok_or_else(|| Error::key(path, "unknown key"))?;
    let raw = raw.trim();
    let value = match spec.kind {
        Kind::Text => Value::String(raw.trim_matches('"').to_string()),
        _ => format!("v = {raw}")
            .parse::<Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| Value::String(raw.to_string())),
    };
    table
        .entry(section.to_string())
        .or_insert_with(|| Value::Table(Table::new()))
        .as_table_mut()
        .ok_or_else(|| Error::key(section, "expected a [section]"))?
        .insert(name.to_string(), value);
    Ok(())
}

fn get<'a>(table: &'a Table, section: &str, name: &str) -> Option<&'a Value> {
    table.get(section)?.as_table()?.get(name)
}

fn float(table: &Table, section: &str, name: &str, default: f64) -> Result<f64> {
    let full = || format!("{section}.{name}");
    match get(table, section, name) {
        None => Ok(default),
        Some(Value::Float(v)) => Ok(*v),
        Some(Value::Integer(v)) => Ok(*v as f64),
        Some(Value::String(s)) => Err(Error::key(
            full(),
            format!("`{s}`: unit suffixes are not accepted, give a bare SI number"),
        )),
        Some(other) => Err(Error::key(
            full(),
            format!("expected a number, found {}", other.type_str()),
        )),
    }
}

fn count(table: &Table, section: &str, name: &str) -> Result<Option<usize>> {
    let full = || format!("{section}.{name}");
    match get(table, section, name) {
        None => Ok(None),
        Some(Value::Integer(v)) if *v >= 0 => Ok(Some(*v as usize)),
        Some(other) => Err(Error::key(
            full(),
            format!("expected a non-negative integer, found `{other}`"),
        )),
    }
}

fn text<'a>(table: &'a Table, section: &str, name: &str) -> Result<Option<&'a str>> {
    match get(table, section, name) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(other) => Err(Error::key(
            format!("{section}.{name}"),
            format!("expected a string, found `{other}`"),
        )),
    }
}

fn build(t: &Table) -> Result<Settings> {
    let f = |s, n| float(t, s, n, f64::NAN);
    let beam = BeamConfig {
        length: f("beam", "length")?,
        uniform_length: f("beam", "uniform_length")?,
        width: f("beam", "width")?,
        uniform_thickness: f("beam", "thickness")?,
        base_modulus: f("beam", "youngs_modulus")?,
        base_density: f("beam", "density")?,
        tip_thickness: f("abh", "tip_thickness")?,
        exponent: f("abh", "exponent")?,
        vem_start: f("vem", "start")?,
        vem_thickness: f("vem", "thickness")?,
        vem_storage_modulus: f("vem", "storage_modulus")?,
        loss_factor: f("vem", "eta")?,
        vem_density: f("vem", "density")?,
        force_location: f("force", "location")?,
        force_amplitude: f("force", "amplitude")?,
    };
    beam.validate()?;

    let d = Analysis::default();
    let analysis = Analysis {
        basis_size: count(t, "solver", "basis_size")?.unwrap_or(d.basis_size),
        quad_order: count(t, "solver", "quad_order")?,
        window: (
            float(t, "analysis", "window_start", d.window.0)?,
            float(t, "analysis", "window_end", d.window.1)?,
        ),
        stations: count(t, "analysis", "stations")?.unwrap_or(d.stations),
        periods: count(t, "analysis", "periods")?.unwrap_or(d.periods),
        samples_per_period: count(t, "analysis", "samples_per_period")?
            .unwrap_or(d.samples_per_period),
        spatial_padding: count(t, "analysis", "spatial_padding")?.unwrap_or(d.spatial_padding),
    };
    validate_analysis(&analysis, &beam)?;

    let mut sweep = SweepSettings::default();
    if let Some(s) = text(t, "sweep", "axis1")? {
        sweep.axis1 = s
            .parse()
            .map_err(|e: Error| Error::key("sweep.axis1", e.to_string()))?;
    }
    if let Some(s) = text(t, "sweep", "axis2")? {
        sweep.axis2 = s
            .parse()
            .map_err(|e: Error| Error::key("sweep.axis2", e.to_string()))?;
    }
    Ok(Settings {
        beam,
        analysis,
        sweep,
    })
}

fn validate_analysis(a: &Analysis, beam: &BeamConfig) -> Result<()> {
    use crate::basis::MIN_BASIS_SIZE;
    use crate::wavefield::{MIN_SAMPLES_PER_PERIOD, MIN_STATIONS};
    if a.basis_size < MIN_BASIS_SIZE {
        return Err(Error::key(
            "solver.basis_size",
            format!("must be at least {MIN_BASIS_SIZE}"),
        ));
    }
    if let Some(q) = a.quad_order {
        let min = crate::assembly::min_quadrature_order(a.basis_size, beam.exponent);
        if q < min {
            return Err(Error::key(
                "solver.quad_order",
                format!("must be at least {min}"),
            ));
        }
    }
    let (lo, hi) = a.window;
    if !(0.0 <= lo && lo < hi && hi <= beam.length) {
        return Err(Error::key(
            "analysis.window_start",
            format!("window [{lo}, {hi}] must lie inside [0, {}]", beam.length),
        ));
    }
    if a.stations < MIN_STATIONS {
        return Err(Error::key(
            "analysis.stations",
            format!("must be at least {MIN_STATIONS}"),
        ));
    }
    if a.periods == 0 {
        return Err(Error::key("analysis.periods", "must be positive"));
    }
    if a.samples_per_period < MIN_SAMPLES_PER_PERIOD {
        return Err(Error::key(
            "analysis.samples_per_period",
            format!("must be at least {MIN_SAMPLES_PER_PERIOD}"),
        ));
    }
    if a.spatial_padding == 0 {
        return Err(Error::key("analysis.spatial_padding", "must be positive"));
    }
    Ok(())
}

/// Serializes settings back into the file format.
pub fn write_config(s: &Settings) -> String {
    let b = &s.beam;
    let a = &s.analysis;
    let mut out = String::new();
    let mut section = |name: &str, entries: &[(&str, String)]| {
        out.push_str(&format!("[{name}]\n"));
        for (k, v) in entries {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out.push('\n');
    };
    let fl = |v: f64| format!("{v:?}");
    section(
        "beam",
        &[
            ("length", fl(b.length)),
            ("uniform_length", fl(b.uniform_length)),
            ("width", fl(b.width)),
            ("thickness", fl(b.uniform_thickness)),
            ("youngs_modulus", fl(b.base_modulus)),
            ("density", fl(b.base_density)),
        ],
    );
    section(
        "abh",
        &[
            ("tip_thickness", fl(b.tip_thickness)),
            ("exponent", fl(b.exponent)),
        ],
    );
    section(
        "vem",
        &[
            ("start", fl(b.vem_start)),
            ("thickness", fl(b.vem_thickness)),
            ("storage_modulus", fl(b.vem_storage_modulus)),
            ("eta", fl(b.loss_factor)),
            ("density", fl(b.vem_density)),
        ],
    );
    section(
        "force",
        &[
            ("location", fl(b.force_location)),
            ("amplitude", fl(b.force_amplitude)),
        ],
    );
    let mut solver = vec![("basis_size", a.basis_size.to_string())];
    if let Some(q) = a.quad_order {
        solver.push(("quad_order", q.to_string()));
    }
    section("solver", &solver);
    section(
        "analysis",
        &[
            ("window_start", fl(a.window.0)),
            ("window_end", fl(a.window.1)),
            ("stations", a.stations.to_string()),
            ("periods", a.periods.to_string()),
            ("samples_per_period", a.samples_per_period.to_string()),
            ("spatial_padding", a.spatial_padding.to_string()),
        ],
    );
    section(
        "sweep",
        &[
            ("axis1", format!("\"{}\"", s.sweep.axis1)),
            ("axis2", format!("\"{}\"", s.sweep.axis2)),
        ],
    );
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_matches_reference_beam() {
        let s = Settings::baseline();
        let b = s.beam;
        assert_eq!(b.length, 1.22);
        assert_eq!(b.uniform_length, 1.0);
        assert_eq!(b.vem_start, 1.138);
        assert_eq!(b.width, 0.0127);
        assert_eq!(b.uniform_thickness, 0.003);
        assert_eq!(b.tip_thickness, 0.0002);
        assert_eq!(b.vem_thickness, 0.0019);
        assert_eq!(b.exponent, 3.0);
        assert_eq!(b.base_modulus, 68.9e9);
        assert_eq!(b.base_density, 2700.0);
        assert_eq!(b.vem_storage_modulus, 96.16e6);
        assert_eq!(b.loss_factor, 0.34);
        assert_eq!(b.vem_density, 1041.2);
        assert_eq!(b, BeamConfig::baseline());
        assert_eq!(s.analysis, Analysis::default());
    }

    #[test]
    fn override_changes_one_value() {
        let s = parse_config_str(BASELINE_CFG, &["vem.eta=0.1".to_string()]).unwrap();
        assert_eq!(
            s.beam,
            BeamConfig {
                loss_factor: 0.1,
                ..BeamConfig::baseline()
            }
        );
        let s = parse_config_str(
            BASELINE_CFG,
            &[
                "sweep.axis2=power_m=1:10:10".to_string(),
                "solver.basis_size=60".to_string(),
            ],
        )
        .unwrap();
        assert_eq!(s.sweep.axis2.values.len(), 10);
        assert_eq!(s.analysis.basis_size, 60);
    }

    fn key_of(err: Error) -> String {
        match err {
            Error::ConfigKey { key, .. } => key,
            other => panic!("expected key error, got {other}"),
        }
    }

    #[test]
    fn errors_name_the_key() {
        let bad = BASELINE_CFG.replace("thickness = 0.003", "thickness = \"3mm\"");
        assert_eq!(
            key_of(parse_config_str(&bad, &[]).unwrap_err()),
            "beam.thickness"
        );

        let bad = BASELINE_CFG.replace("density = 2700.0", "density = 2700.0\ncolour = 1");
        assert_eq!(
            key_of(parse_config_str(&bad, &[]).unwrap_err()),
            "beam.colour"
        );

        let bad = BASELINE_CFG.replace("exponent = 3.0\n", "");
        assert_eq!(
            key_of(parse_config_str(&bad, &[]).unwrap_err()),
            "abh.exponent"
        );

        let err = parse_config_str(BASELINE_CFG, &["vem.colour=1".to_string()]).unwrap_err();
        assert_eq!(key_of(err), "vem.colour");

        let err = parse_config_str(BASELINE_CFG, &["force.location=25mm".to_string()]).unwrap_err();
        assert_eq!(key_of(err), "force.location");
    }

    #[test]
    fn invariant_violations_are_rejected() {
        let bad = BASELINE_CFG.replace("start = 1.138", "start = 0.9");
        assert!(matches!(parse_config_str(&bad, &[]), Err(Error::Config(_))));
        let err = parse_config_str(BASELINE_CFG, &["analysis.window_end=2.0".to_string()]);
        assert!(err.is_err());
    }

    #[test]
    fn baseline_round_trips() {
        let s = Settings::baseline();
        assert_eq!(parse_config_str(&write_config(&s), &[]).unwrap(), s);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        prop_compose! {
            fn settings()(
                length in 0.5f64..3.0,
                taper in 0.05f64..0.45,
                layer in 0.1f64..0.9,
                force in 0.0f64..0.99,
                width in 1e-3f64..0.1,
                h1 in 1e-3f64..0.01,
                tip in 0.01f64..1.0,
                h3 in 0.0f64..0.005,
                m in 1.0f64..10.0,
                eb in 1e9f64..300e9,
                rb in 500.0f64..9000.0,
                ev in 1e5f64..1e9,
                eta in 0.0f64..1.0,
                rv in 100.0f64..3000.0,
                f0 in -10.0f64..10.0,
                n in 4usize..200,
                q in proptest::option::of(0usize..40),
                stations in 32usize..400,
                padding in 1usize..8,
            ) -> Settings {
                let uniform_length = length * (1.0 - taper);
                let beam = BeamConfig {
                    length,
                    uniform_length,
                    vem_start: uniform_length + layer * (length - uniform_length),
                    force_location: force * uniform_length,
                    width,
                    uniform_thickness: h1,
                    tip_thickness: tip * h1,
                    vem_thickness: h3,
                    exponent: m,
                    base_modulus: eb,
                    base_density: rb,
                    vem_storage_modulus: ev,
                    loss_factor: eta,
                    vem_density: rv,
                    force_amplitude: f0,
                };
                let min_q = crate::assembly::min_quadrature_order(n, m);
                Settings {
                    beam,
                    analysis: Analysis {
                        basis_size: n,
                        quad_order: q.map(|extra| min_q + extra),
                        window: (0.1 * uniform_length, 0.9 * uniform_length),
                        stations,
                        periods: 8,
                        samples_per_period: 32,
                        spatial_padding: padding,
                    },
                    sweep: SweepSettings::default(),
                }
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn parse_inverts_write(s in settings()) {
                prop_assert_eq!(parse_config_str(&write_config(&s), &[]).unwrap(), s);
            }
        }
    }
}
