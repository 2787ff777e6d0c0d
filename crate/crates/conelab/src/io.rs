//! Measure and report file formats.
//!
//! Measures are JSON objects
//! `{"dim": n, "mode": "exact"|"float", "atoms": [{"x": [...], "w": ...}]}`
//! where exact scalars are decimal strings `"p/q"` (plain integers allowed)
//! and float scalars are JSON numbers. Atoms may appear unsorted and
//! duplicated in files; loading canonicalizes. Reports serialize the
//! `CheckReport` structure with rationals as `"p/q"` strings; reruns with
//! one seed produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use conelab_core::measure::AtomicMeasure;
use conelab_core::report::CheckReport;
use conelab_core::scalar::{parse_rational, Rational, Scalar};

use crate::fejer::ProductMeasure2D;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Parse { path: PathBuf, detail: String },
}

impl IoError {
    fn parse(path: &Path, detail: impl Into<String>) -> Self {
        IoError::Parse {
            path: path.to_path_buf(),
            detail: detail.into(),
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// A loaded measure in either numeric mode.
#[derive(Debug, Clone)]
pub enum Measure {
    Exact(AtomicMeasure<Rational>),
    Float(AtomicMeasure<f64>),
}

impl Measure {
    pub fn dim(&self) -> usize {
        match self {
            Measure::Exact(m) => m.dim(),
            Measure::Float(m) => m.dim(),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            Measure::Exact(_) => "exact",
            Measure::Float(_) => "float",
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Measure::Exact(m) => m.atom_count(),
            Measure::Float(m) => m.atom_count(),
        }
    }

    /// The exact measure, or an error naming the operation that needs it.
    pub fn expect_exact(&self, what: &str) -> Result<&AtomicMeasure<Rational>, String> {
        match self {
            Measure::Exact(m) => Ok(m),
            Measure::Float(_) => Err(format!("{what} requires an exact-mode measure")),
        }
    }
}

#[derive(Deserialize)]
struct MeasureFile {
    dim: usize,
    mode: String,
    atoms: Vec<AtomFile>,
}

#[derive(Deserialize)]
struct AtomFile {
    x: Vec<serde_json::Value>,
    w: serde_json::Value,
}

fn exact_scalar(v: &serde_json::Value, path: &Path, at: &str) -> Result<Rational, IoError> {
    match v {
        serde_json::Value::String(s) => {
            parse_rational(s).map_err(|e| IoError::parse(path, format!("{at}: {e}")))
        }
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_i64(i)),
            None => Err(IoError::parse(
                path,
                format!("{at}: exact mode needs integers or \"p/q\" strings, got {n}"),
            )),
        },
        other => Err(IoError::parse(
            path,
            format!("{at}: expected a rational string, got {other}"),
        )),
    }
}

fn float_scalar(v: &serde_json::Value, path: &Path, at: &str) -> Result<f64, IoError> {
    v.as_f64()
        .ok_or_else(|| IoError::parse(path, format!("{at}: expected a number, got {v}")))
}

/// Loads and canonicalizes a measure file.
pub fn load_measure(path: &Path) -> Result<Measure, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    let file: MeasureFile = serde_json::from_str(&text)
        .map_err(|e| IoError::parse(path, format!("invalid measure JSON: {e}")))?;
    match file.mode.as_str() {
        "exact" => {
            let mut raw = Vec::with_capacity(file.atoms.len());
            for (i, atom) in file.atoms.iter().enumerate() {
                let mut loc = Vec::with_capacity(atom.x.len());
                for (j, c) in atom.x.iter().enumerate() {
                    loc.push(exact_scalar(c, path, &format!("atom {i}, coordinate {j}"))?);
                }
                let w = exact_scalar(&atom.w, path, &format!("atom {i}, field w"))?;
                raw.push((loc, w));
            }
            AtomicMeasure::new(file.dim, raw)
                .map(Measure::Exact)
                .map_err(|e| IoError::parse(path, format!("{e}")))
        }
        "float" => {
            let mut raw = Vec::with_capacity(file.atoms.len());
            for (i, atom) in file.atoms.iter().enumerate() {
                let mut loc = Vec::with_capacity(atom.x.len());
                for (j, c) in atom.x.iter().enumerate() {
                    loc.push(float_scalar(c, path, &format!("atom {i}, coordinate {j}"))?);
                }
                let w = float_scalar(&atom.w, path, &format!("atom {i}, field w"))?;
                raw.push((loc, w));
            }
            AtomicMeasure::new(file.dim, raw)
                .map(Measure::Float)
                .map_err(|e| IoError::parse(path, format!("{e}")))
        }
        other => Err(IoError::parse(
            path,
            format!("unknown mode `{other}` (expected \"exact\" or \"float\")"),
        )),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| IoError::io(path, e))?;
        }
    }
    fs::write(path, bytes).map_err(|e| IoError::io(path, e))
}

pub fn save_measure(measure: &Measure, path: &Path) -> Result<(), IoError> {
    let json = match measure {
        Measure::Exact(m) => serde_json::to_string_pretty(m),
        Measure::Float(m) => serde_json::to_string_pretty(m),
    }
    .map_err(|e| IoError::parse(path, format!("serialization failed: {e}")))?;
    write_atomic(path, format!("{json}\n").as_bytes())
}

/// Deterministic pretty JSON for a report.
pub fn report_to_json(report: &CheckReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization is total");
    s.push('\n');
    s
}

pub fn save_report(report: &CheckReport, path: &Path) -> Result<(), IoError> {
    write_atomic(path, report_to_json(report).as_bytes())
}

/// Per-power CSV table of densities: column `y` followed by one column per
/// x-atom of each power, suitable for external plotting.
pub fn dump_density_csv(
    dir: &Path,
    k: usize,
    mu_k: &ProductMeasure2D,
    nu_k: &ProductMeasure2D,
) -> Result<PathBuf, IoError> {
    fs::create_dir_all(dir).map_err(|e| IoError::io(dir, e))?;
    let path = dir.join(format!("k{k}.csv"));
    let mut out = Vec::new();
    let grid = mu_k
        .atoms
        .values()
        .next()
        .or_else(|| nu_k.atoms.values().next());
    let Some(grid) = grid else {
        return Err(IoError::parse(&path, "no densities to dump"));
    };
    let mut header = vec!["y".to_string()];
    for x in mu_k.atoms.keys() {
        header.push(format!(
            "mu[x={}]",
            conelab_core::scalar::format_rational(x)
        ));
    }
    for x in nu_k.atoms.keys() {
        header.push(format!(
            "nu[x={}]",
            conelab_core::scalar::format_rational(x)
        ));
    }
    writeln!(out, "{}", header.join(",")).expect("vec write");
    for j in 0..grid.len() {
        let y = grid.y0 + j as f64 * grid.dy;
        let mut row = vec![format!("{y}")];
        for d in mu_k.atoms.values() {
            row.push(format!("{}", d.values[j]));
        }
        for d in nu_k.atoms.values() {
            row.push(format!("{}", d.values[j]));
        }
        writeln!(out, "{}", row.join(",")).expect("vec write");
    }
    write_atomic(&path, &out)?;
    Ok(path)
}
