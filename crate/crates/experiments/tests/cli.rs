//! End-to-end runs of the `fixpointrl` binary on small configurations.

use std::path::Path;
use std::process::{Command, Output};

use fixpointrl::config::ExperimentConfig;
use fixpointrl_core::hamiltonians::{build_tfim, parse_model_text, FORMAT_HEADER};
use fixpointrl_core::quantum::max_abs_diff;

fn fixpointrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixpointrl")).args(args).output().expect("binary runs")
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stdout: {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn run_postselect_and_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("pairing");
    let out_s = out.to_str().unwrap();
    ok(&fixpointrl(&[
        "run", "--preset", "fig6-n3", "--realizations", "4", "--k-max", "1500", "--workers", "2", "--out", out_s,
    ]));
    for file in ["fidelity.csv", "exploration.csv", "energies.csv", "spectrum.csv", "metadata.json", "config.txt"] {
        assert!(out.join(file).is_file(), "missing {file}");
    }
    let cfg = ExperimentConfig::parse(&read(&out.join("config.txt"))).unwrap();
    assert_eq!(cfg.realizations, 4);
    assert_eq!(cfg.k_max, Some(1500));
    let meta: serde_json::Value = serde_json::from_str(&read(&out.join("metadata.json"))).unwrap();
    assert_eq!(meta["format"], "fixpointrl-metadata v1");

    let post = fixpointrl(&["postselect", "--in", out_s, "--sigma-th", "0.05"]);
    ok(&post);
    assert!(String::from_utf8_lossy(&post.stdout).contains("final states"));
    assert!(out.join("selected.csv").is_file());
    assert!(out.join("distance_sweep.csv").is_file());

    let plot = fixpointrl(&["plot", "--in", out_s]);
    ok(&plot);
    let listed: Vec<&str> = std::str::from_utf8(&plot.stdout).unwrap().lines().collect();
    assert!(listed.len() >= 5, "{listed:?}");
    for path in listed {
        let text = read(Path::new(path));
        let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
        let root = doc.root_element();
        assert_eq!(root.tag_name().name(), "svg");
        assert!(root.descendants().any(|n| n.has_tag_name("polyline") || n.has_tag_name("circle")), "{path} draws nothing");
    }
}

#[test]
fn precedence_is_preset_file_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("run.cfg");
    std::fs::write(&file, "# test\nrealizations = 3\nseed = 7\nk-max = 900\n").unwrap();
    let out = tmp.path().join("o");
    ok(&fixpointrl(&[
        "run",
        "--preset",
        "fig2",
        "--config",
        file.to_str().unwrap(),
        "--seed",
        "8",
        "--override",
        "seed=9",
        "--out",
        out.to_str().unwrap(),
    ]));
    let cfg = ExperimentConfig::parse(&read(&out.join("config.txt"))).unwrap();
    assert_eq!((cfg.realizations, cfg.seed, cfg.k_max, cfg.w_r), (3, 9, Some(900), 0.01));
}

#[test]
fn dump_hamiltonian_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("h.txt");
    ok(&fixpointrl(&["run", "--preset", "fig4-n3", "--dump-hamiltonian", path.to_str().unwrap()]));
    let text = read(&path);
    assert_eq!(text.lines().next(), Some(FORMAT_HEADER));
    let model = parse_model_text(&text).unwrap();
    let direct = build_tfim(3, 1.0, 0.5).unwrap();
    assert_eq!(max_abs_diff(model.raw(), direct.raw()), 0.0);
    assert!(!tmp.path().join("results").exists());
}

#[test]
fn invalid_input_is_rejected() {
    let bad_key = fixpointrl(&["run", "--override", "no-such-key=1"]);
    assert!(!bad_key.status.success());
    assert!(String::from_utf8_lossy(&bad_key.stderr).contains("no-such-key"));

    let bad_range = fixpointrl(&["run", "--r", "1.5", "--qubits", "9"]);
    assert!(!bad_range.status.success());
    let err = String::from_utf8_lossy(&bad_range.stderr);
    assert!(err.contains("r = 1.5") && err.contains("qubits"), "{err}");

    let missing = fixpointrl(&["plot", "--in", "/nonexistent/run"]);
    assert!(!missing.status.success());
}

#[test]
fn sectors_subcommand_writes_merged_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    ok(&fixpointrl(&[
        "sectors", "--preset", "fig6-n3", "--realizations", "2", "--k-max", "800", "--out", out.to_str().unwrap(),
    ]));
    assert!(out.join("sector_energies.csv").is_file());
    for w in [1, 2] {
        assert!(out.join(format!("weight-{w}")).join("fidelity.csv").is_file(), "weight {w}");
    }
    let energies = read(&out.join("energies.csv"));
    // 2 realizations x 8 states plus the header.
    assert_eq!(energies.lines().count(), 17);
}
