//! CSV tables and the metadata document.
//!
//! Floats are written in Rust's shortest round-trip form, so identical runs
//! produce identical bytes and reading a table back loses nothing.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use fixpointrl_core::quantum::Spectrum;
use fixpointrl_core::tolerance;

use crate::{ExperimentError, Result};

pub const FIDELITY_CSV: &str = "fidelity.csv";
pub const EXPLORATION_CSV: &str = "exploration.csv";
pub const ENERGIES_CSV: &str = "energies.csv";
pub const SPECTRUM_CSV: &str = "spectrum.csv";
pub const SELECTED_CSV: &str = "selected.csv";
pub const DISTANCE_SWEEP_CSV: &str = "distance_sweep.csv";
pub const SECTOR_ENERGIES_CSV: &str = "sector_energies.csv";
pub const METADATA_JSON: &str = "metadata.json";
pub const CONFIG_TXT: &str = "config.txt";

pub const FIDELITY_HEADER: &[&str] = &["iteration", "state_index", "mean_fidelity"];
pub const EXPLORATION_HEADER: &[&str] = &["iteration", "mean_w_max"];
pub const ENERGIES_HEADER: &[&str] = &["realization", "state_index", "energy", "sigma"];
pub const SPECTRUM_HEADER: &[&str] = &["alpha", "exact_energy", "degeneracy_cluster"];
pub const DISTANCE_SWEEP_HEADER: &[&str] = &["sigma_th", "mean_distance", "std_error", "count"];
pub const SECTOR_ENERGIES_HEADER: &[&str] = &["weight", "realization", "state_index", "energy", "sigma"];

pub const METADATA_FORMAT: &str = "fixpointrl-metadata v1";

/// One row of `energies.csv` or `selected.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRow {
    pub realization: usize,
    pub state: usize,
    pub energy: f64,
    pub sigma: f64,
}

/// One row of `spectrum.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub alpha: usize,
    pub energy: f64,
    pub cluster: usize,
}

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| ExperimentError::io(path, e))
}

struct CsvOut<'a> {
    path: &'a Path,
    inner: csv::Writer<BufWriter<File>>,
}

impl<'a> CsvOut<'a> {
    fn create(path: &'a Path, header: &[&str]) -> Result<Self> {
        let file = File::create(path).map_err(|e| ExperimentError::io(path, e))?;
        let inner = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(BufWriter::new(file));
        let mut out = Self { path, inner };
        out.row(header)?;
        Ok(out)
    }

    fn row<S: AsRef<[u8]>>(&mut self, fields: &[S]) -> Result<()> {
        self.inner.write_record(fields).map_err(|e| ExperimentError::data(self.path, e.to_string()))
    }

    fn finish(mut self) -> Result<()> {
        self.inner.flush().map_err(|e| ExperimentError::io(self.path, e))
    }
}

/// `mean_fidelity[k][j]` as `iteration,state_index,mean_fidelity`, with
/// iterations counted from 1.
pub fn write_fidelity(path: &Path, mean_fidelity: &[Vec<f64>]) -> Result<()> {
    let mut out = CsvOut::create(path, FIDELITY_HEADER)?;
    for (k, row) in mean_fidelity.iter().enumerate() {
        let it = (k + 1).to_string();
        for (j, f) in row.iter().enumerate() {
            out.row(&[it.as_str(), &j.to_string(), &f.to_string()])?;
        }
    }
    out.finish()
}

pub fn write_exploration(path: &Path, mean_w_max: &[f64]) -> Result<()> {
    let mut out = CsvOut::create(path, EXPLORATION_HEADER)?;
    for (k, w) in mean_w_max.iter().enumerate() {
        out.row(&[(k + 1).to_string(), w.to_string()])?;
    }
    out.finish()
}

pub fn write_energies(path: &Path, rows: &[EnergyRow]) -> Result<()> {
    let mut out = CsvOut::create(path, ENERGIES_HEADER)?;
    for r in rows {
        out.row(&[r.realization.to_string(), r.state.to_string(), r.energy.to_string(), r.sigma.to_string()])?;
    }
    out.finish()
}

pub fn write_sector_energies(path: &Path, rows: &[(usize, EnergyRow)]) -> Result<()> {
    let mut out = CsvOut::create(path, SECTOR_ENERGIES_HEADER)?;
    for (w, r) in rows {
        out.row(&[
            w.to_string(),
            r.realization.to_string(),
            r.state.to_string(),
            r.energy.to_string(),
            r.sigma.to_string(),
        ])?;
    }
    out.finish()
}

/// Spectrum rows with degeneracy clusters at the default tolerance.
pub fn spectrum_rows(spec: &Spectrum) -> Vec<SpectrumRow> {
    let labels = spec.cluster_labels(tolerance::DEGENERACY);
    spec.energies()
        .iter()
        .zip(labels)
        .enumerate()
        .map(|(alpha, (&energy, cluster))| SpectrumRow { alpha, energy, cluster })
        .collect()
}

pub fn write_spectrum(path: &Path, rows: &[SpectrumRow]) -> Result<()> {
    let mut out = CsvOut::create(path, SPECTRUM_HEADER)?;
    for r in rows {
        out.row(&[r.alpha.to_string(), r.energy.to_string(), r.cluster.to_string()])?;
    }
    out.finish()
}

/// `(sigma_th, mean, std_error, count)`; an empty selection is written with
/// `NaN` statistics.
pub fn write_distance_sweep(path: &Path, rows: &[(f64, Option<(f64, f64)>, usize)]) -> Result<()> {
    let mut out = CsvOut::create(path, DISTANCE_SWEEP_HEADER)?;
    for &(th, stats, count) in rows {
        let (m, se) = stats.unwrap_or((f64::NAN, f64::NAN));
        out.row(&[th.to_string(), m.to_string(), se.to_string(), count.to_string()])?;
    }
    out.finish()
}

/// Reads a CSV file and checks its header.
fn read_records(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| ExperimentError::data(path, e.to_string()))?;
    let found = rdr.headers().map_err(|e| ExperimentError::data(path, e.to_string()))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(ExperimentError::data(
            path,
            format!("expected header `{}`, found `{}`", header.join(","), found.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    rdr.records().map(|r| r.map_err(|e| ExperimentError::data(path, e.to_string()))).collect()
}

fn field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, i: usize) -> Result<T> {
    let line = rec.position().map_or(0, |p| p.line());
    let raw = rec.get(i).ok_or_else(|| ExperimentError::data(path, format!("line {line}: missing column {i}")))?;
    raw.parse().map_err(|_| ExperimentError::data(path, format!("line {line}: cannot parse `{raw}`")))
}

pub fn read_energies(path: &Path) -> Result<Vec<EnergyRow>> {
    read_records(path, ENERGIES_HEADER)?
        .iter()
        .map(|r| {
            Ok(EnergyRow {
                realization: field(path, r, 0)?,
                state: field(path, r, 1)?,
                energy: field(path, r, 2)?,
                sigma: field(path, r, 3)?,
            })
        })
        .collect()
}

pub fn read_spectrum(path: &Path) -> Result<Vec<SpectrumRow>> {
    read_records(path, SPECTRUM_HEADER)?
        .iter()
        .map(|r| Ok(SpectrumRow { alpha: field(path, r, 0)?, energy: field(path, r, 1)?, cluster: field(path, r, 2)? }))
        .collect()
}

/// `fidelity.csv` back into `[iteration][state]` form.
pub fn read_fidelity(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in read_records(path, FIDELITY_HEADER)? {
        let k: usize = field(path, &r, 0)?;
        let j: usize = field(path, &r, 1)?;
        let f: f64 = field(path, &r, 2)?;
        if k == 0 || k > out.len() + 1 {
            return Err(ExperimentError::data(path, format!("iteration {k} out of sequence")));
        }
        if k > out.len() {
            out.push(Vec::new());
        }
        let row = &mut out[k - 1];
        if j != row.len() {
            return Err(ExperimentError::data(path, format!("iteration {k}: state {j} out of sequence")));
        }
        row.push(f);
    }
    Ok(out)
}

pub fn read_exploration(path: &Path) -> Result<Vec<f64>> {
    read_records(path, EXPLORATION_HEADER)?.iter().map(|r| field(path, r, 1)).collect()
}

pub fn read_metadata(path: &Path) -> Result<serde_json::Value> {
    let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| ExperimentError::data(path, e.to_string()))
}
