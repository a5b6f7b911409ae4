//! Static SVG panels of a completed run.
//!
//! - `fidelity.svg`: mean fidelity of every basis state against iteration,
//!   with the plateau extrema as dashed lines.
//! - `exploration.svg`: mean largest exploration parameter, log scale.
//! - `energies.svg`: final energies against realization over the exact
//!   eigenvalues.
//! - `sigma.svg`: final energy fluctuations against realization.
//! - `selected.svg`: the post-selected energies, when `selected.csv` exists.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use fixpointrl_core::metrics::plateau_means;

use crate::output::{self, EnergyRow};
use crate::{ExperimentError, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
/// Upper bound on vertices per polyline; longer curves are strided.
const MAX_VERTICES: usize = 800;

/// Renders every panel of the run in `dir` and returns the written paths.
///
/// All inputs are read and checked before anything is written, so an empty
/// or broken run leaves the directory untouched.
pub fn emit_plots(dir: &Path) -> Result<Vec<PathBuf>> {
    let fidelity = output::read_fidelity(&dir.join(output::FIDELITY_CSV))?;
    let exploration = output::read_exploration(&dir.join(output::EXPLORATION_CSV))?;
    let energies = output::read_energies(&dir.join(output::ENERGIES_CSV))?;
    let spectrum: Vec<f64> = output::read_spectrum(&dir.join(output::SPECTRUM_CSV))?.iter().map(|r| r.energy).collect();
    let selected_path = dir.join(output::SELECTED_CSV);
    let selected = if selected_path.exists() { Some(output::read_energies(&selected_path)?) } else { None };
    if fidelity.is_empty() || exploration.is_empty() || energies.is_empty() {
        return Err(ExperimentError::NoData(format!("{} holds no completed run", dir.display())));
    }
    let sigma_th = sigma_threshold(dir);

    let mut panels = vec![
        ("fidelity.svg", fidelity_panel(&fidelity)),
        ("exploration.svg", exploration_panel(&exploration)),
        ("energies.svg", energy_panel("Final energies", &energies, &spectrum)),
        ("sigma.svg", sigma_panel(&energies, sigma_th)),
    ];
    if let Some(sel) = selected.filter(|s| !s.is_empty()) {
        panels.push(("selected.svg", energy_panel("Post-selected energies", &sel, &spectrum)));
    }
    let mut written = Vec::new();
    for (name, svg) in panels {
        let path = dir.join(name);
        output::write_text(&path, &svg)?;
        written.push(path);
    }
    Ok(written)
}

fn sigma_threshold(dir: &Path) -> Option<f64> {
    let meta = output::read_metadata(&dir.join(output::METADATA_JSON)).ok()?;
    meta["config"]["sigma-th"].as_str()?.parse().ok()
}

fn fidelity_panel(fidelity: &[Vec<f64>]) -> String {
    let n = fidelity.len();
    let dim = fidelity[0].len();
    let lo = fidelity.iter().flatten().copied().fold(1.0f64, f64::min);
    let mut p = Panel::new("Mean fidelity", "iteration", "F", (1.0, n.max(2) as f64), (lo.min(0.9).max(0.0) - 0.02, 1.02));
    let stride = n.div_ceil(MAX_VERTICES).max(1);
    for j in 0..dim {
        let pts: Vec<(f64, f64)> =
            (0..n).filter(|k| k % stride == 0 || *k == n - 1).map(|k| ((k + 1) as f64, fidelity[k][j])).collect();
        p.polyline(&pts, &color(j, dim), false);
    }
    let (plateau, _) = plateau_means(fidelity);
    let f_max = plateau.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let f_min = plateau.iter().copied().fold(f64::INFINITY, f64::min);
    p.hline(f_max, "#000", true);
    p.hline(f_min, "#000", true);
    p.note(&format!("F_max = {f_max:.4}, F_min = {f_min:.4}"));
    p.render()
}

fn exploration_panel(w: &[f64]) -> String {
    let n = w.len();
    let positive = w.iter().copied().filter(|v| *v > 0.0);
    let lo = positive.clone().fold(f64::INFINITY, f64::min).min(1.0);
    let hi = positive.fold(f64::NEG_INFINITY, f64::max).max(lo * 10.0);
    let mut p = Panel::new("Mean largest exploration parameter", "iteration", "log10 W", (1.0, n.max(2) as f64), (lo.log10().floor(), hi.log10().ceil()));
    let stride = n.div_ceil(MAX_VERTICES).max(1);
    let pts: Vec<(f64, f64)> = (0..n)
        .filter(|k| (k % stride == 0 || *k == n - 1) && w[*k] > 0.0)
        .map(|k| ((k + 1) as f64, w[k].log10()))
        .collect();
    p.polyline(&pts, "#1f4e9c", false);
    p.render()
}

fn energy_panel(title: &str, rows: &[EnergyRow], spectrum: &[f64]) -> String {
    let (xr, dim) = realization_range(rows);
    let mut p = Panel::new(title, "realization", "energy", xr, (-0.05, 1.05));
    for &e in spectrum {
        p.hline(e, "#bbb", false);
    }
    for r in rows {
        p.point(r.realization as f64, r.energy, &color(r.state, dim));
    }
    p.render()
}

fn sigma_panel(rows: &[EnergyRow], sigma_th: Option<f64>) -> String {
    let (xr, dim) = realization_range(rows);
    let hi = rows.iter().map(|r| r.sigma).fold(0.0f64, f64::max).max(sigma_th.unwrap_or(0.0));
    let mut p = Panel::new("Energy fluctuations", "realization", "sigma", xr, (0.0, (hi * 1.05).max(1e-3)));
    for r in rows {
        p.point(r.realization as f64, r.sigma, &color(r.state, dim));
    }
    if let Some(th) = sigma_th {
        p.hline(th, "#000", true);
    }
    p.render()
}

fn realization_range(rows: &[EnergyRow]) -> ((f64, f64), usize) {
    let max_r = rows.iter().map(|r| r.realization).max().unwrap_or(0);
    let dim = rows.iter().map(|r| r.state + 1).max().unwrap_or(1);
    ((-0.5, max_r as f64 + 0.5), dim)
}

fn color(j: usize, n: usize) -> String {
    format!("hsl({:.0},70%,42%)", 360.0 * j as f64 / n.max(1) as f64)
}

/// One chart: a plot area with linear axes and a list of SVG elements.
struct Panel {
    title: String,
    xlabel: String,
    ylabel: String,
    x: (f64, f64),
    y: (f64, f64),
    body: String,
    notes: Vec<String>,
}

impl Panel {
    fn new(title: &str, xlabel: &str, ylabel: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(a, b): (f64, f64)| if b > a { (a, b) } else { (a - 0.5, a + 0.5) };
        Self {
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
            x: widen(x),
            y: widen(y),
            body: String::new(),
            notes: Vec::new(),
        }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn sy(&self, y: f64) -> f64 {
        let y = y.clamp(self.y.0, self.y.1);
        HEIGHT - MARGIN_BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, dashed: bool) {
        let mut d = String::new();
        for &(x, y) in pts {
            write!(d, "{:.2},{:.2} ", self.sx(x), self.sy(y)).unwrap();
        }
        let dash = if dashed { r#" stroke-dasharray="6,4""# } else { "" };
        writeln!(self.body, r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.2"{dash} points="{}"/>"#, d.trim_end())
            .unwrap();
    }

    fn hline(&mut self, y: f64, stroke: &str, dashed: bool) {
        let (a, b) = self.x;
        self.polyline(&[(a, y), (b, y)], stroke, dashed);
    }

    fn point(&mut self, x: f64, y: f64, fill: &str) {
        writeln!(self.body, r#"<circle cx="{:.2}" cy="{:.2}" r="2.2" fill="{fill}"/>"#, self.sx(x), self.sy(y)).unwrap();
    }

    fn note(&mut self, text: &str) {
        self.notes.push(text.into());
    }

    fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(&self.title)).unwrap();
        let (l, r) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let (t, b) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
        writeln!(s, r##"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="#333"/>"##, r - l, b - t).unwrap();
        for v in ticks(self.x) {
            let x = self.sx(v);
            writeln!(s, r##"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{}" stroke="#333"/>"##, b + 5.0).unwrap();
            writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, b + 18.0, fmt_tick(v)).unwrap();
        }
        for v in ticks(self.y) {
            let y = self.sy(v);
            writeln!(s, r##"<line x1="{}" y1="{y:.2}" x2="{l}" y2="{y:.2}" stroke="#333"/>"##, l - 5.0).unwrap();
            writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, l - 8.0, y + 4.0, fmt_tick(v)).unwrap();
        }
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (l + r) / 2.0, HEIGHT - 15.0, escape(&self.xlabel)).unwrap();
        writeln!(
            s,
            r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
            (t + b) / 2.0,
            escape(&self.ylabel)
        )
        .unwrap();
        writeln!(s, r#"<clipPath id="area"><rect x="{l}" y="{t}" width="{}" height="{}"/></clipPath>"#, r - l, b - t).unwrap();
        writeln!(s, r#"<g clip-path="url(#area)">"#).unwrap();
        s.push_str(&self.body);
        writeln!(s, "</g>").unwrap();
        for (i, n) in self.notes.iter().enumerate() {
            writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, r - 6.0, t + 16.0 + 14.0 * i as f64, escape(n)).unwrap();
        }
        writeln!(s, "</svg>").unwrap();
        s
    }
}

/// Roughly five round tick values inside `range`.
fn ticks((lo, hi): (f64, f64)) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
