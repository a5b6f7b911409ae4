//! Versioned plain-text dump of a model's raw matrix.
//!
//! ```text
//! fixpointrl-hamiltonian v1
//! kind pairing
//! params levels=5 g_over_de=1
//! dim 32
//! e_min -7.1
//! e_max 15
//! sector qubits=5 weight=2          (sector models only)
//! basis 3 5 6 9 10 12 17 18 20 24   (sector models only)
//! raw
//! re,im re,im ...                   (one row per line, dim lines)
//! ```
//!
//! Floats are written in shortest round-trip form, so parsing reproduces the
//! matrix bit for bit.

use std::fmt::Write;

use nalgebra::DMatrix;

use super::{HamiltonianModel, ModelKind, ModelParams, SectorMap};
use crate::quantum::Complex64;
use crate::{Error, Result};

pub const FORMAT_HEADER: &str = "fixpointrl-hamiltonian v1";

pub fn write_model_text(model: &HamiltonianModel) -> String {
    let mut out = String::new();
    writeln!(out, "{FORMAT_HEADER}").unwrap();
    writeln!(out, "kind {}", model.kind()).unwrap();
    let params = match model.params() {
        ModelParams::Random { dim, seed, stream } => {
            let mut s = format!("dim={dim}");
            if let Some(seed) = seed {
                write!(s, " seed={seed}").unwrap();
            }
            if let Some(stream) = stream {
                write!(s, " stream={stream}").unwrap();
            }
            s
        }
        ModelParams::Tfim { qubits, j_over_h, k_over_h } => {
            format!("qubits={qubits} j_over_h={j_over_h} k_over_h={k_over_h}")
        }
        ModelParams::Pairing { levels, g_over_de } => format!("levels={levels} g_over_de={g_over_de}"),
    };
    writeln!(out, "params {params}").unwrap();
    writeln!(out, "dim {}", model.dim()).unwrap();
    writeln!(out, "e_min {}", model.e_min()).unwrap();
    writeln!(out, "e_max {}", model.e_max()).unwrap();
    if let Some(s) = model.sector() {
        writeln!(
            out,
            "sector qubits={} weight={} parent_e_min={} parent_e_max={}",
            s.qubits, s.hamming_weight, s.parent_e_min, s.parent_e_max
        )
        .unwrap();
        let idx: Vec<String> = s.basis_indices.iter().map(|i| i.to_string()).collect();
        writeln!(out, "basis {}", idx.join(" ")).unwrap();
    }
    writeln!(out, "raw").unwrap();
    let raw = model.raw();
    for i in 0..raw.nrows() {
        let row: Vec<String> = (0..raw.ncols()).map(|j| format!("{},{}", raw[(i, j)].re, raw[(i, j)].im)).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

/// Parses a dump and rebuilds the model (rescaling and spectrum are recomputed
/// from the raw matrix).
pub fn parse_model_text(text: &str) -> Result<HamiltonianModel> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| Error::Parse { line: 0, msg: format!("unexpected end of input, expected {what}") })
    };

    let (ln, header) = next("header")?;
    if header != FORMAT_HEADER {
        return Err(Error::Parse { line: ln, msg: format!("expected `{FORMAT_HEADER}`, got `{header}`") });
    }
    let (ln, kind) = next("kind")?;
    let kind: ModelKind = field(ln, kind, "kind")?.parse().map_err(|e: Error| perr(ln, e))?;
    let (ln, params) = next("params")?;
    let kv = key_values(ln, field(ln, params, "params")?)?;
    let (ln, dim) = next("dim")?;
    let dim: usize = parse_num(ln, field(ln, dim, "dim")?)?;
    let (ln, l) = next("e_min")?;
    let _: f64 = parse_num(ln, field(ln, l, "e_min")?)?;
    let (ln, l) = next("e_max")?;
    let _: f64 = parse_num(ln, field(ln, l, "e_max")?)?;

    let params = match kind {
        ModelKind::Random => ModelParams::Random {
            dim: get(&kv, ln, "dim")?,
            seed: get_opt(&kv, ln, "seed")?,
            stream: get_opt(&kv, ln, "stream")?,
        },
        ModelKind::Tfim => ModelParams::Tfim {
            qubits: get(&kv, ln, "qubits")?,
            j_over_h: get(&kv, ln, "j_over_h")?,
            k_over_h: get(&kv, ln, "k_over_h")?,
        },
        ModelKind::Pairing => ModelParams::Pairing {
            levels: get(&kv, ln, "levels")?,
            g_over_de: get(&kv, ln, "g_over_de")?,
        },
    };

    let (mut ln, mut line) = next("raw or sector")?;
    let mut sector = None;
    if let Some(rest) = line.strip_prefix("sector ") {
        let kv = key_values(ln, rest)?;
        let (bln, basis) = next("basis")?;
        let basis_indices = field(bln, basis, "basis")?
            .split_whitespace()
            .map(|t| parse_num(bln, t))
            .collect::<Result<Vec<usize>>>()?;
        sector = Some(SectorMap {
            qubits: get(&kv, ln, "qubits")?,
            hamming_weight: get(&kv, ln, "weight")?,
            basis_indices,
            parent_e_min: get(&kv, ln, "parent_e_min")?,
            parent_e_max: get(&kv, ln, "parent_e_max")?,
        });
        (ln, line) = next("raw")?;
    }
    if line != "raw" {
        return Err(Error::Parse { line: ln, msg: format!("expected `raw`, got `{line}`") });
    }

    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim {
        let (ln, row) = next("matrix row")?;
        let before = entries.len();
        for tok in row.split_whitespace() {
            let (re, im) = tok
                .split_once(',')
                .ok_or_else(|| Error::Parse { line: ln, msg: format!("bad complex entry `{tok}`") })?;
            entries.push(Complex64::new(parse_num(ln, re)?, parse_num(ln, im)?));
        }
        if entries.len() - before != dim {
            return Err(Error::Parse { line: ln, msg: format!("expected {dim} entries, got {}", entries.len() - before) });
        }
    }
    let raw = DMatrix::from_row_slice(dim, dim, &entries);
    match sector {
        Some(map) if dim == 1 => Ok(HamiltonianModel::trivial(params, raw, Some(map))),
        Some(map) => Ok(HamiltonianModel::from_raw(params, raw)?.with_sector(map)),
        None => HamiltonianModel::from_raw(params, raw),
    }
}

fn perr(line: usize, e: Error) -> Error {
    Error::Parse { line, msg: e.to_string() }
}

fn field<'a>(line: usize, text: &'a str, key: &str) -> Result<&'a str> {
    text.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| Error::Parse { line, msg: format!("expected `{key} ...`, got `{text}`") })
}

fn key_values(line: usize, text: &str) -> Result<Vec<(String, String)>> {
    text.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse { line, msg: format!("expected key=value, got `{kv}`") })
        })
        .collect()
}

fn get_opt<T: std::str::FromStr>(kv: &[(String, String)], line: usize, key: &str) -> Result<Option<T>> {
    kv.iter().find(|(k, _)| k == key).map(|(_, v)| parse_num(line, v)).transpose()
}

fn get<T: std::str::FromStr>(kv: &[(String, String)], line: usize, key: &str) -> Result<T> {
    get_opt(kv, line, key)?.ok_or_else(|| Error::Parse { line, msg: format!("missing `{key}`") })
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse { line, msg: format!("cannot parse `{s}`") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_pairing, build_random_seeded, build_tfim, sector_restrict};

    #[test]
    fn dumps_round_trip_bit_exactly() {
        let pairing = build_pairing(3, 1.0).unwrap();
        let models = vec![
            build_random_seeded(4, 5, 1).unwrap(),
            build_tfim(2, 1.0, 0.5).unwrap(),
            sector_restrict(&pairing, 1).unwrap(),
            sector_restrict(&pairing, 0).unwrap(),
            pairing,
        ];
        for m in models {
            let text = write_model_text(&m);
            assert!(text.starts_with(FORMAT_HEADER));
            let back = parse_model_text(&text).unwrap();
            assert_eq!(back.raw(), m.raw());
            assert_eq!(back.params(), m.params());
            assert_eq!(back.sector(), m.sector());
            assert_eq!(write_model_text(&back), text);
        }
    }

    #[test]
    fn rejects_wrong_header_and_short_rows() {
        assert!(matches!(parse_model_text("hamiltonian v0\n"), Err(Error::Parse { line: 1, .. })));
        let mut text = write_model_text(&build_tfim(2, 1.0, 0.5).unwrap());
        text = text.replacen(" 0,0\n", "\n", 1);
        assert!(parse_model_text(&text).is_err());
    }
}
