//! Experiment configuration, presets and the `key = value` file format.
//!
//! Keys are the long CLI flag names. Every key is written by
//! [`ExperimentConfig::to_text`], floats in shortest round-trip form, so a
//! written file parses back to an identical configuration.

use std::fmt::Write;
use std::path::PathBuf;

use fixpointrl_core::agent::AgentConfig;
use fixpointrl_core::hamiltonians::{build_pairing, build_random_seeded, build_tfim, sector_restrict, HamiltonianModel, ModelKind};
use fixpointrl_core::rng;

use crate::{ExperimentError, Result};

/// Preset names accepted by [`ExperimentConfig::preset`].
pub const PRESETS: &[&str] = &[
    "fig2", "fig3", "fig4", "fig4-n2", "fig4-n3", "fig4-n4", "fig5", "fig5-n2", "fig5-n3", "fig5-n4", "fig6-n2",
    "fig6-n3", "fig6-n4", "fig6-n5", "fig7-n5", "fig7-n6",
];

/// Largest register simulated in the full Hilbert space (`d = 64`).
pub const MAX_FULL_QUBITS: usize = 6;
/// Largest register accepted for sector-restricted runs.
pub const MAX_SECTOR_QUBITS: usize = 8;

/// Fraction of the iteration budget after which the reset value decays.
pub const K0_FRACTION: f64 = 0.6;

/// Keys in file order.
pub const KEYS: &[&str] = &[
    "model",
    "qubits",
    "j-over-h",
    "k-over-h",
    "g",
    "r",
    "p",
    "w-th",
    "w-r",
    "tau-min",
    "tau-max",
    "reset",
    "k-max",
    "k0",
    "realizations",
    "seed",
    "sector",
    "sector-suite",
    "sigma-th",
    "plots",
    "out",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    /// Qubits of the register (pairing: number of levels).
    pub qubits: usize,
    /// TFIM couplings in units of the transverse field.
    pub j_over_h: f64,
    pub k_over_h: f64,
    /// Pairing strength in units of the level spacing.
    pub g: f64,
    pub r: f64,
    /// Punishment rate; `None` means `2 / r`.
    pub p: Option<f64>,
    pub w_th: f64,
    pub w_r: f64,
    pub tau_min: f64,
    pub tau_max: f64,
    pub reset: bool,
    /// Iteration budget; `None` picks the per-model default.
    pub k_max: Option<usize>,
    /// Start of the reset decay; `None` means 60% of the budget.
    pub k0: Option<usize>,
    pub realizations: usize,
    pub seed: u64,
    /// Restrict the run to one Hamming-weight sector.
    pub sector: Option<usize>,
    /// Run every sector independently and merge the results.
    pub sector_suite: bool,
    pub sigma_th: Option<f64>,
    pub plots: bool,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::Random,
            qubits: 2,
            j_over_h: 1.0,
            k_over_h: 0.5,
            g: 1.0,
            r: 0.9,
            p: None,
            w_th: 0.005,
            w_r: 0.01,
            tau_min: 0.0,
            tau_max: 100.0,
            reset: true,
            k_max: None,
            k0: None,
            realizations: 100,
            seed: 42,
            sector: None,
            sector_suite: false,
            sigma_th: None,
            plots: false,
            out: PathBuf::from("results/run"),
        }
    }
}

impl ExperimentConfig {
    /// Named parameter set; see [`PRESETS`].
    ///
    /// `fig4`/`fig5` default to four qubits; the `-nN` suffix picks another
    /// register size. `fig7-nN` runs the sector suite.
    pub fn preset(name: &str) -> Result<Self> {
        let unknown = || ExperimentError::Config(format!("unknown preset `{name}`; known: {}", PRESETS.join(", ")));
        if !PRESETS.contains(&name) {
            return Err(unknown());
        }
        let (fig, n) = match name.split_once("-n") {
            Some((fig, n)) => (fig, Some(n.parse::<usize>().map_err(|_| unknown())?)),
            None => (name, None),
        };
        let base = Self { out: PathBuf::from("results").join(name), ..Self::default() };
        let spin = Self { tau_max: 600.0, w_r: 0.05, realizations: 50, ..base.clone() };
        let cfg = match fig {
            "fig2" => base,
            "fig3" => Self { qubits: 3, ..base },
            "fig4" => Self { model: ModelKind::Tfim, qubits: n.unwrap_or(4), ..spin },
            "fig5" => Self { model: ModelKind::Tfim, qubits: n.unwrap_or(4), r: 0.93, ..spin },
            "fig6" => Self { model: ModelKind::Pairing, qubits: n.unwrap_or(5), ..spin },
            "fig7" => Self {
                model: ModelKind::Pairing,
                qubits: n.unwrap_or(5),
                realizations: 20,
                sector_suite: true,
                ..spin
            },
            _ => return Err(unknown()),
        };
        Ok(cfg)
    }

    /// Parses a `key = value` document on top of the defaults. `#` starts a
    /// comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Applies the assignments of a `key = value` document to `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ExperimentError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| ExperimentError::Config(format!("line {}: {}", n + 1, strip_prefix(&e))))?;
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| ExperimentError::Config(format!("override `{assignment}` is not `key=value`")))?;
        self.set(key.trim(), value.trim())
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| ExperimentError::Config(format!("`{key}`: expected {what}, got `{value}`"));
        let float = || value.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("a finite number"));
        let uint = || value.parse::<usize>().map_err(|_| bad("a non-negative integer"));
        let auto = |v: &str| matches!(v, "auto" | "none");
        match key {
            "model" => self.model = value.parse().map_err(|_| bad("random, tfim or pairing"))?,
            "qubits" => self.qubits = uint()?,
            "j-over-h" => self.j_over_h = float()?,
            "k-over-h" => self.k_over_h = float()?,
            "g" => self.g = float()?,
            "r" => self.r = float()?,
            "p" => self.p = if auto(value) { None } else { Some(float()?) },
            "w-th" => self.w_th = float()?,
            "w-r" => self.w_r = float()?,
            "tau-min" => self.tau_min = float()?,
            "tau-max" => self.tau_max = float()?,
            "reset" => self.reset = parse_switch(value).ok_or_else(|| bad("on or off"))?,
            "k-max" => self.k_max = if auto(value) { None } else { Some(uint()?) },
            "k0" => self.k0 = if auto(value) { None } else { Some(uint()?) },
            "realizations" => self.realizations = uint()?,
            "seed" => self.seed = value.parse().map_err(|_| bad("a 64-bit unsigned integer"))?,
            "sector" => self.sector = if auto(value) { None } else { Some(uint()?) },
            "sector-suite" => self.sector_suite = parse_switch(value).ok_or_else(|| bad("on or off"))?,
            "sigma-th" => self.sigma_th = if auto(value) { None } else { Some(float()?) },
            "plots" => self.plots = parse_switch(value).ok_or_else(|| bad("on or off"))?,
            "out" => {
                if value.is_empty() {
                    return Err(bad("a path"));
                }
                self.out = PathBuf::from(value)
            }
            _ => return Err(ExperimentError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// The textual value of `key`, as written to the config file.
    pub fn get(&self, key: &str) -> Option<String> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "auto".into());
        let switch = |b: bool| if b { "on" } else { "off" }.to_string();
        Some(match key {
            "model" => self.model.to_string(),
            "qubits" => self.qubits.to_string(),
            "j-over-h" => self.j_over_h.to_string(),
            "k-over-h" => self.k_over_h.to_string(),
            "g" => self.g.to_string(),
            "r" => self.r.to_string(),
            "p" => opt(self.p.map(|v| v.to_string())),
            "w-th" => self.w_th.to_string(),
            "w-r" => self.w_r.to_string(),
            "tau-min" => self.tau_min.to_string(),
            "tau-max" => self.tau_max.to_string(),
            "reset" => switch(self.reset),
            "k-max" => opt(self.k_max.map(|v| v.to_string())),
            "k0" => opt(self.k0.map(|v| v.to_string())),
            "realizations" => self.realizations.to_string(),
            "seed" => self.seed.to_string(),
            "sector" => self.sector.map_or_else(|| "none".into(), |v| v.to_string()),
            "sector-suite" => switch(self.sector_suite),
            "sigma-th" => self.sigma_th.map_or_else(|| "none".into(), |v| v.to_string()),
            "plots" => switch(self.plots),
            "out" => self.out.display().to_string(),
            _ => return None,
        })
    }

    /// Every key in file order, with its value.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        KEYS.iter().map(|&k| (k, self.get(k).expect("every key has a value"))).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# fixpointrl experiment configuration\n");
        for (k, v) in self.entries() {
            writeln!(s, "{k} = {v}").unwrap();
        }
        s
    }

    pub fn punishment_rate(&self) -> f64 {
        self.p.unwrap_or(2.0 / self.r)
    }

    /// Whether the agent runs inside Hamming-weight sectors.
    pub fn restricted(&self) -> bool {
        self.sector.is_some() || self.sector_suite
    }

    /// The iteration budget, resolving `auto` from model and register size.
    pub fn resolved_k_max(&self) -> usize {
        self.k_max.unwrap_or_else(|| default_budget(self.model, self.qubits, self.restricted()))
    }

    pub fn resolved_k0(&self) -> usize {
        self.k0.unwrap_or_else(|| (self.resolved_k_max() as f64 * K0_FRACTION).round() as usize)
    }

    /// Agent parameters of realization `index`.
    pub fn agent_config(&self, index: usize) -> AgentConfig {
        AgentConfig {
            reward_rate: self.r,
            punishment_rate: self.punishment_rate(),
            w_threshold: self.w_th,
            reset_enabled: self.reset,
            w_reset: self.w_r,
            k0: self.resolved_k0(),
            k_max: self.resolved_k_max(),
            tau_min: self.tau_min,
            tau_max: self.tau_max,
            seed: self.seed,
            stream: rng::agent_stream_id(index as u64),
        }
    }

    /// Checks every bound and reports all violations together.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if self.realizations == 0 {
            bad.push("realizations must be at least 1".to_string());
        }
        let max_qubits = if self.restricted() { MAX_SECTOR_QUBITS } else { MAX_FULL_QUBITS };
        if !(2..=max_qubits).contains(&self.qubits) {
            bad.push(format!("qubits = {} outside 2..={max_qubits}", self.qubits));
        }
        if self.sector.is_some() && self.sector_suite {
            bad.push("sector and sector-suite are mutually exclusive".into());
        }
        if let Some(w) = self.sector {
            if w > self.qubits {
                bad.push(format!("sector weight {w} exceeds qubit count {}", self.qubits));
            }
        }
        if self.restricted() && self.model == ModelKind::Random {
            bad.push("sector runs need a weight-conserving model".into());
        }
        if let Some(s) = self.sigma_th {
            if !(s > 0.0) {
                bad.push(format!("sigma-th = {s} must be > 0"));
            }
        }
        if let Err(fixpointrl_core::Error::Config(v)) = self.agent_config(0).validate() {
            bad.extend(v);
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(ExperimentError::Config(bad.join("; ")))
        }
    }

    /// The model used by realization `index`. Random models are drawn afresh
    /// per realization; the others are the same for every realization.
    pub fn build_model(&self, index: usize) -> Result<HamiltonianModel> {
        let model = match self.model {
            ModelKind::Random => {
                build_random_seeded(1 << self.qubits, self.seed, rng::model_stream_id(index as u64))?
            }
            ModelKind::Tfim => build_tfim(self.qubits, self.j_over_h, self.k_over_h)?,
            ModelKind::Pairing => build_pairing(self.qubits, self.g)?,
        };
        match self.sector {
            Some(w) => Ok(sector_restrict(&model, w)?),
            None => Ok(model),
        }
    }
}

/// Iteration budget used when `k-max = auto`.
pub fn default_budget(model: ModelKind, qubits: usize, restricted: bool) -> usize {
    if restricted {
        return 20_000;
    }
    match (model, qubits) {
        (ModelKind::Random, 0..=2) => 2_000,
        (ModelKind::Random, _) => 6_000,
        (_, 0..=2) => 4_000,
        (_, 3) => 8_000,
        _ => 20_000,
    }
}

fn parse_switch(v: &str) -> Option<bool> {
    match v {
        "on" | "true" | "yes" => Some(true),
        "off" | "false" | "no" => Some(false),
        _ => None,
    }
}

fn strip_prefix(e: &ExperimentError) -> String {
    match e {
        ExperimentError::Config(m) => m.clone(),
        other => other.to_string(),
    }
}
