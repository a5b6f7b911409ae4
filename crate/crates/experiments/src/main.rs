use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fixpointrl::config::ExperimentConfig;
use fixpointrl::runner::default_workers;
use fixpointrl::{emit_plots, post_select_report, run_experiment, run_sector_suite, ExperimentError};
use fixpointrl_core::hamiltonians::write_model_text;

#[derive(Parser)]
#[command(name = "fixpointrl", version, about = "Learn Hamiltonian eigenbases by reinforcement learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV tables.
    Run(RunArgs),
    /// Run every Hamming-weight sector of a pairing model independently.
    Sectors(RunArgs),
    /// Post-select the final states of a completed run by energy fluctuation.
    Postselect {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
        #[arg(long)]
        sigma_th: f64,
    },
    /// Render SVG panels of a completed run.
    Plot {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
    },
}

/// Settings are applied in order: preset, config file, explicit flags,
/// `--override` assignments.
#[derive(Args)]
struct RunArgs {
    /// Named parameter set (fig2, fig3, fig4[-nN], fig5[-nN], fig6-nN, fig7-nN).
    #[arg(long)]
    preset: Option<String>,
    /// `key = value` configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Extra `key=value` assignment; may be repeated.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads (default: available parallelism). Results do not
    /// depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the model of realization 0 in text form to FILE and exit.
    #[arg(long, value_name = "FILE")]
    dump_hamiltonian: Option<PathBuf>,

    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    qubits: Option<String>,
    #[arg(long)]
    j_over_h: Option<String>,
    #[arg(long)]
    k_over_h: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    r: Option<String>,
    /// Punishment rate, or `auto` for 2/r.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    w_th: Option<String>,
    #[arg(long)]
    w_r: Option<String>,
    #[arg(long)]
    tau_min: Option<String>,
    #[arg(long)]
    tau_max: Option<String>,
    /// on or off.
    #[arg(long)]
    reset: Option<String>,
    #[arg(long)]
    k_max: Option<String>,
    #[arg(long)]
    k0: Option<String>,
    #[arg(long)]
    realizations: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    sector: Option<String>,
    #[arg(long)]
    sector_suite: Option<String>,
    #[arg(long)]
    sigma_th: Option<String>,
    #[arg(long)]
    plots: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

impl RunArgs {
    fn explicit(&self) -> Vec<(&'static str, &str)> {
        let flags: [(&'static str, &Option<String>); 21] = [
            ("model", &self.model),
            ("qubits", &self.qubits),
            ("j-over-h", &self.j_over_h),
            ("k-over-h", &self.k_over_h),
            ("g", &self.g),
            ("r", &self.r),
            ("p", &self.p),
            ("w-th", &self.w_th),
            ("w-r", &self.w_r),
            ("tau-min", &self.tau_min),
            ("tau-max", &self.tau_max),
            ("reset", &self.reset),
            ("k-max", &self.k_max),
            ("k0", &self.k0),
            ("realizations", &self.realizations),
            ("seed", &self.seed),
            ("sector", &self.sector),
            ("sector-suite", &self.sector_suite),
            ("sigma-th", &self.sigma_th),
            ("plots", &self.plots),
            ("out", &self.out),
        ];
        flags.into_iter().filter_map(|(k, v)| v.as_deref().map(|v| (k, v))).collect()
    }

    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.preset {
            Some(name) => ExperimentConfig::preset(name)?,
            None => ExperimentConfig::default(),
        };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            cfg.apply_text(&text).with_context(|| format!("in {}", path.display()))?;
        }
        for (key, value) in self.explicit() {
            cfg.set(key, value)?;
        }
        for o in &self.overrides {
            cfg.apply_override(o)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(args: RunArgs, sectors: bool) -> Result<ExitCode> {
    let mut cfg = args.resolve()?;
    if sectors {
        cfg.sector_suite = true;
        cfg.sector = None;
        cfg.validate()?;
    }
    if let Some(path) = &args.dump_hamiltonian {
        let model = cfg.build_model(0)?;
        std::fs::write(path, write_model_text(&model)).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {} model of dimension {} to {}", model.kind(), model.dim(), path.display());
        return Ok(ExitCode::SUCCESS);
    }
    let workers = args.workers.unwrap_or_else(default_workers);
    let result = if cfg.sector_suite { run_sector_suite(&cfg, workers) } else { run_experiment(&cfg, workers) };
    match result {
        Ok(s) => {
            println!(
                "{} realizations ({} failed) in {:.1} s: F_min = {:.4}, F_max = {:.4}; outputs in {}",
                s.realizations,
                s.failed,
                s.elapsed.as_secs_f64(),
                s.f_min,
                s.f_max,
                s.out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ ExperimentError::TooManyFailures { .. }) => {
            eprintln!("error: {e}; partial outputs and failure details in {}", cfg.out.display());
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.into()),
    }
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run(args) => run(args, false),
        Command::Sectors(args) => run(args, true),
        Command::Postselect { input, sigma_th } => {
            let rep = post_select_report(&input, sigma_th)?;
            println!("kept {} of {} final states with sigma <= {sigma_th}", rep.selected.len(), rep.total);
            if let (Some((all, _)), Some((sel, se))) = (rep.all_distance, rep.selected_distance) {
                println!("mean nearest-eigenvalue distance: all {all:.5}, selected {sel:.5} +- {se:.5}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot { input } => {
            for path in emit_plots(&input)? {
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
