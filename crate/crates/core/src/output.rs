//! Plain-text artifacts: CSV tables and gnuplot-ready matrix files.
//!
//! Numbers are written with 17 significant digits, `.` decimal separator
//! and `\n` line endings so identical results give identical bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::solve::Mode;
use crate::sweep::SweepResult;
use crate::wavefield::{Spectrum2D, WaveField};

/// Full-precision, locale-free number formatting. NaN is written as `nan`.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub(crate) fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    body(&mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn modes_csv(modes: &[Mode]) -> String {
    let mut s = String::from("mode_index,frequency_hz,modal_loss_factor\n");
    for (i, m) in modes.iter().enumerate() {
        s.push_str(&format!(
            "{},{},{}\n",
            i + 1,
            num(m.frequency_hz),
            num(m.loss_factor)
        ));
    }
    s
}

pub fn envelope_csv(x: &[f64], envelope: &[f64]) -> String {
    let mut s = String::from("x_m,amplitude\n");
    for (x, a) in x.iter().zip(envelope) {
        s.push_str(&format!("{},{}\n", num(*x), num(*a)));
    }
    s
}

/// Stations × time samples, one row per station.
pub fn field_matrix(field: &WaveField) -> String {
    let mut s = format!(
        "# w(x,t): {} stations x {} samples, omega = {} rad/s\n",
        field.x.len(),
        field.t.len(),
        num(field.omega)
    );
    for row in field.samples.row_iter() {
        let vals: Vec<String> = row.iter().map(|v| num(*v)).collect();
        s.push_str(&vals.join(" "));
        s.push('\n');
    }
    s
}

/// Two axis header lines (`# freqs_hz ...`, `# wavenumbers_rad_per_m ...`)
/// followed by the magnitude matrix, one row per frequency.
pub fn spectrum_matrix(spec: &Spectrum2D) -> String {
    let axis = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ");
    let mut s = format!(
        "# freqs_hz {}\n# wavenumbers_rad_per_m {}\n",
        axis(&spec.freqs),
        axis(&spec.wavenumbers)
    );
    for row in spec.magnitude.row_iter() {
        let vals: Vec<String> = row.iter().map(|v| num(*v)).collect();
        s.push_str(&vals.join(" "));
        s.push('\n');
    }
    s
}

/// Long format: one line per grid point.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut s = format!("{},{},cf,status\n", result.axis1.name, result.axis2.name);
    for (i, a) in result.axis1.values.iter().enumerate() {
        for (j, b) in result.axis2.values.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                num(*a),
                num(*b),
                num(result.cf[(i, j)]),
                result.status(i, j)
            ));
        }
    }
    s
}

/// gnuplot `nonuniform matrix` layout: the first row holds the column count
/// and axis2 values, each following row its axis1 value and CF values.
pub fn sweep_matrix(result: &SweepResult) -> String {
    let mut s = format!(
        "# rows: {}, columns: {}\n{}",
        result.axis1.name,
        result.axis2.name,
        result.axis2.values.len()
    );
    for v in &result.axis2.values {
        s.push(' ');
        s.push_str(&num(*v));
    }
    s.push('\n');
    for (i, a) in result.axis1.values.iter().enumerate() {
        s.push_str(&num(*a));
        for j in 0..result.axis2.values.len() {
            s.push(' ');
            s.push_str(&num(result.cf[(i, j)]));
        }
        s.push('\n');
    }
    s
}

/// Minimal SVG heatmap of the sweep matrix (cosmetic only).
pub fn sweep_svg(result: &SweepResult) -> String {
    let (n1, n2) = result.cf.shape();
    let cell = 4usize;
    let (w, h) = (n1 * cell + 80, n2 * cell + 60);
    let mut s =
        format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n");
    for i in 0..n1 {
        for j in 0..n2 {
            let v = result.cf[(i, j)];
            let fill = if v.is_nan() {
                "#808080".to_string()
            } else {
                // blue (traveling) to red (standing)
                let r = (255.0 * v.clamp(0.0, 1.0)).round() as u8;
                format!("#{:02x}40{:02x}", r, 255 - r)
            };
            s.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{cell}\" height=\"{cell}\" fill=\"{fill}\"/>\n",
                60 + i * cell,
                10 + (n2 - 1 - j) * cell
            ));
        }
    }
    s.push_str(&format!(
        "<text x=\"60\" y=\"{}\" font-size=\"12\">{} →</text>\n",
        h - 20,
        result.axis1.name
    ));
    s.push_str(&format!(
        "<text x=\"5\" y=\"20\" font-size=\"12\">{}</text>\n</svg>\n",
        result.axis2.name
    ));
    s
}

/// Writes `contents` to `dir/name` and returns the path.
pub fn emit(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    write_file(&path, |w| w.write_all(contents.as_bytes()))?;
    Ok(path)
}
