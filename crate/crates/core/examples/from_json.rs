//! Analyse a system given as JSON on the command line (or a built-in one).
//!
//!     cargo run --example from_json -- crates/core/configs/double_integrator.json
use rci_bounds::cli::{cmd_bounds, cmd_spectral};
use rci_bounds::config::AnalysisConfig;

const FALLBACK: &str = r#"{
    "A": [[0.9, 0.4], [0.0, 1.3]],
    "B": [[0.0], [1.0]],
    "X": {"type": "box", "lower": [-3, -3], "upper": [3, 3]},
    "U": {"type": "box", "lower": [-0.2], "upper": [0.2]},
    "Wbar": {"type": "box", "lower": [-1, -1], "upper": [1, 1]},
    "k_max": 8
}"#;

fn main() {
    let cfg = match std::env::args().nth(1) {
        Some(path) => AnalysisConfig::load(path.as_ref()).unwrap_or_else(|e| panic!("{e}")),
        None => AnalysisConfig::from_json(FALLBACK).unwrap(),
    };
    print!("{}", cmd_spectral(&cfg).unwrap());
    print!("{}", cmd_bounds(&cfg, None).unwrap());
}
