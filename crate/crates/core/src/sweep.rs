//! Parametric CF sweeps: excitation frequency crossed with one structural
//! parameter (or a second frequency list).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::BeamConfig;
use crate::par::Execution;
use crate::pipeline::{Analysis, Simulator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisName {
    FrequencyHz,
    Eta,
    PowerM,
    TaperFraction,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::FrequencyHz => "frequency_hz",
            AxisName::Eta => "eta",
            AxisName::PowerM => "power_m",
            AxisName::TaperFraction => "taper_fraction",
        }
    }

    fn check(self, v: f64) -> bool {
        match self {
            AxisName::FrequencyHz => v > 0.0 && v.is_finite(),
            AxisName::Eta => (0.001..=0.5).contains(&v),
            AxisName::PowerM => (1.0..=10.0).contains(&v),
            AxisName::TaperFraction => v > 0.0 && v < 0.5,
        }
    }

    /// Applies a structural parameter value to `cfg`. Frequency is not
    /// structural and leaves `cfg` unchanged.
    pub fn apply(self, cfg: &BeamConfig, v: f64) -> BeamConfig {
        match self {
            AxisName::FrequencyHz => *cfg,
            AxisName::Eta => BeamConfig {
                loss_factor: v,
                ..*cfg
            },
            AxisName::PowerM => BeamConfig {
                exponent: v,
                ..*cfg
            },
            AxisName::TaperFraction => cfg.with_taper_fraction(v),
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frequency_hz" => Ok(AxisName::FrequencyHz),
            "eta" => Ok(AxisName::Eta),
            "power_m" => Ok(AxisName::PowerM),
            "taper_fraction" => Ok(AxisName::TaperFraction),
            _ => Err(Error::config(format!(
                "unknown sweep axis `{s}` (expected frequency_hz, eta, power_m or taper_fraction)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(name: AxisName, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::config(format!("axis {name} has no values")));
        }
        if !values.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::config(format!(
                "axis {name} must be strictly increasing"
            )));
        }
        if let Some(v) = values.iter().find(|&&v| !name.check(v)) {
            return Err(Error::config(format!(
                "axis {name}: value {v} out of range"
            )));
        }
        Ok(SweepAxis { name, values })
    }

    /// `count` points from `lo` to `hi`, log- or linearly spaced.
    pub fn range(name: AxisName, lo: f64, hi: f64, count: usize, log: bool) -> Result<Self> {
        let values = match count {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..count)
                .map(|i| {
                    let t = i as f64 / (count - 1) as f64;
                    if i == count - 1 {
                        hi
                    } else if log {
                        lo * (hi / lo).powf(t)
                    } else {
                        lo + (hi - lo) * t
                    }
                })
                .collect(),
        };
        Self::new(name, values)
    }
}

/// Parses `name=lo:hi:countlog`, `name=lo:hi:count[lin]` or `name=v1,v2,...`.
impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, spec) = s
            .split_once('=')
            .ok_or_else(|| Error::config(format!("axis `{s}` must look like name=values")))?;
        let name: AxisName = name.trim().parse()?;
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::config(format!("axis {name}: `{t}` is not a number")))
        };
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            [lo, hi, count] => {
                let count = count.trim();
                let (digits, log) = if let Some(d) = count.strip_suffix("log") {
                    (d, true)
                } else if let Some(d) = count.strip_suffix("lin") {
                    (d, false)
                } else {
                    (count, false)
                };
                let n: usize = digits.parse().map_err(|_| {
                    Error::config(format!("axis {name}: bad point count `{count}`"))
                })?;
                SweepAxis::range(name, num(lo)?, num(hi)?, n, log)
            }
            [list] => SweepAxis::new(name, list.split(',').map(num).collect::<Result<_>>()?),
            _ => Err(Error::config(format!("axis `{s}` is malformed"))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}={}", self.name, vals.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailedPoint {
    pub i: usize,
    pub j: usize,
    pub tag: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    /// `cf[(i, j)]` at `axis1.values[i]`, `axis2.values[j]`; NaN where failed.
    pub cf: DMatrix<f64>,
    pub failed: Vec<FailedPoint>,
}

impl SweepResult {
    pub fn status(&self, i: usize, j: usize) -> &'static str {
        self.failed
            .iter()
            .find(|p| p.i == i && p.j == j)
            .map_or("ok", |p| p.tag)
    }
}

pub fn run_sweep(
    base: &BeamConfig,
    axis1: &SweepAxis,
    axis2: &SweepAxis,
    analysis: &Analysis,
) -> Result<SweepResult> {
    run_sweep_with(base, axis1, axis2, analysis, Execution::Parallel)
}

/// Evaluates CF on the grid `axis1 × axis2`.
///
/// One model is assembled per distinct structural configuration; every grid
/// point is then an independent solve. Results are placed by index, so the
/// output does not depend on scheduling. Per-point failures are recorded in
/// [`SweepResult::failed`].
pub fn run_sweep_with(
    base: &BeamConfig,
    axis1: &SweepAxis,
    axis2: &SweepAxis,
    analysis: &Analysis,
    exec: Execution,
) -> Result<SweepResult> {
    if axis1.name == axis2.name {
        return Err(Error::config(format!("both axes are {}", axis1.name)));
    }
    let freq_on_1 = axis1.name == AxisName::FrequencyHz;
    let freq_on_2 = axis2.name == AxisName::FrequencyHz;
    if !freq_on_1 && !freq_on_2 {
        return Err(Error::config("one sweep axis must be frequency_hz"));
    }
    base.validate()?;
    let (freq_axis, param_axis) = if freq_on_1 {
        (axis1, axis2)
    } else {
        (axis2, axis1)
    };

    let models: Vec<std::result::Result<Arc<Simulator>, (String, &'static str)>> =
        exec.map(&param_axis.values, |&v| {
            Simulator::with_execution(
                param_axis.name.apply(base, v),
                *analysis,
                Execution::Sequential,
            )
            .map(Arc::new)
            .map_err(|e| (e.to_string(), e.tag()))
        });

    let (n1, n2) = (axis1.values.len(), axis2.values.len());
    let points: Vec<(usize, usize)> = (0..n1).flat_map(|i| (0..n2).map(move |j| (i, j))).collect();
    let values = exec.map(&points, |&(i, j)| {
        let (fi, pi) = if freq_on_1 { (i, j) } else { (j, i) };
        let sim = models[pi].as_ref().map_err(|e| e.clone())?;
        sim.cost(freq_axis.values[fi])
            .map_err(|e| (e.to_string(), e.tag()))
    });

    let mut cf = DMatrix::from_element(n1, n2, f64::NAN);
    let mut failed = Vec::new();
    for (&(i, j), v) in points.iter().zip(values) {
        match v {
            Ok(c) => cf[(i, j)] = c,
            Err((message, tag)) => failed.push(FailedPoint { i, j, tag, message }),
        }
    }
    Ok(SweepResult {
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        cf,
        failed,
    })
}

/// Frequency bands (Hz) used by [`summarize_trends`].
pub const DEFAULT_BANDS: [(f64, f64); 3] = [(1000.0, 4000.0), (4000.0, 10000.0), (1000.0, 10000.0)];

#[derive(Debug, Clone, PartialEq)]
pub struct BandSummary {
    pub lo_hz: f64,
    pub hi_hz: f64,
    /// Mean CF over the band for each parameter value (NaN if no data).
    pub mean_cf: Vec<f64>,
    /// Parameter value with the lowest band mean.
    pub argmin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    /// `(min CF, axis2 value at the min)` for every row.
    pub row_minima: Vec<(f64, f64)>,
    /// `(min CF, axis1 value at the min)` for every column.
    pub col_minima: Vec<(f64, f64)>,
    /// Grid indices of the overall minimum.
    pub argmin: Option<(usize, usize)>,
    pub parameter: AxisName,
    pub parameter_values: Vec<f64>,
    pub bands: Vec<BandSummary>,
    /// Damping-layer coverage of the taper for each taper fraction, when the
    /// parameter axis is `taper_fraction`.
    pub vem_coverage: Option<Vec<f64>>,
}

pub fn summarize_trends(result: &SweepResult, base: &BeamConfig) -> TrendReport {
    summarize_trends_in_bands(result, base, &DEFAULT_BANDS)
}

pub fn summarize_trends_in_bands(
    result: &SweepResult,
    base: &BeamConfig,
    bands: &[(f64, f64)],
) -> TrendReport {
    let cf = &result.cf;
    let (n1, n2) = cf.shape();
    let min_of = |it: &mut dyn Iterator<Item = (f64, f64)>| {
        it.filter(|(c, _)| !c.is_nan())
            .fold((f64::NAN, f64::NAN), |best, cur| {
                if best.0.is_nan() || cur.0 < best.0 {
                    cur
                } else {
                    best
                }
            })
    };
    let row_minima = (0..n1)
        .map(|i| min_of(&mut (0..n2).map(|j| (cf[(i, j)], result.axis2.values[j]))))
        .collect();
    let col_minima = (0..n2)
        .map(|j| min_of(&mut (0..n1).map(|i| (cf[(i, j)], result.axis1.values[i]))))
        .collect();
    let mut argmin = None;
    let mut best = f64::INFINITY;
    for i in 0..n1 {
        for j in 0..n2 {
            if cf[(i, j)] < best {
                best = cf[(i, j)];
                argmin = Some((i, j));
            }
        }
    }

    let freq_on_1 = result.axis1.name == AxisName::FrequencyHz;
    let (freq_axis, param_axis) = if freq_on_1 {
        (&result.axis1, &result.axis2)
    } else {
        (&result.axis2, &result.axis1)
    };
    let at = |f: usize, p: usize| if freq_on_1 { cf[(f, p)] } else { cf[(p, f)] };
    let bands = bands
        .iter()
        .map(|&(lo, hi)| {
            let mean_cf: Vec<f64> = (0..param_axis.values.len())
                .map(|p| {
                    let vals: Vec<f64> = freq_axis
                        .values
                        .iter()
                        .enumerate()
                        .filter(|(_, &f)| f >= lo && f <= hi)
                        .map(|(fi, _)| at(fi, p))
                        .filter(|c| !c.is_nan())
                        .collect();
                    if vals.is_empty() {
                        f64::NAN
                    } else {
                        vals.iter().sum::<f64>() / vals.len() as f64
                    }
                })
                .collect();
            let argmin = mean_cf
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.is_nan())
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(p, _)| param_axis.values[p]);
            BandSummary {
                lo_hz: lo,
                hi_hz: hi,
                mean_cf,
                argmin,
            }
        })
        .collect();

    let vem_coverage = (param_axis.name == AxisName::TaperFraction).then(|| {
        param_axis
            .values
            .iter()
            .map(|&f| base.with_taper_fraction(f).vem_coverage())
            .collect()
    });

    TrendReport {
        row_minima,
        col_minima,
        argmin,
        parameter: param_axis.name,
        parameter_values: param_axis.values.clone(),
        bands,
        vem_coverage,
    }
}
