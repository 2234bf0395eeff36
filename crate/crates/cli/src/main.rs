//! Command-line front end: classification, the filter protocol, parameter
//! sweeps, escape search, Monte Carlo volumes, and simulated tomography.
//!
//! Every command echoes its full effective configuration (defaults expanded)
//! into the output header, and a fixed seed makes the output byte-identical
//! across runs. Exit codes: 0 success, 2 input or validation error, 3
//! numerical failure (annihilated state).

mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use entpoly::filter::{self, FilterSetting};
use entpoly::montecarlo;
use entpoly::polytope::{self, PolytopeId};
use entpoly::tomo;
use entpoly::Error as CoreError;

use parse::{parse_angle, parse_grid, parse_state};

#[derive(Parser)]
#[command(
    name = "entpoly",
    version,
    about = "Entanglement polytopes: classify states, run the local-filter protocol, reproduce volume statistics",
    after_help = "Exit codes: 0 success, 2 input/validation error, 3 numerical failure (annihilated state).\n\
                  Angles accept radians or pi fractions: 'pi/8', '-pi/8', '3pi/32', '0.3927'.\n\
                  Grids are 'start:stop:count' inclusive, e.g. '0:pi/8:8'.\n\
                  States: psi1 | psi2 | epr | ghz:N | w:N | basis:IDX | basis:N:IDX | file:PATH."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct OutputOpts {
    /// Seed for anything stochastic; echoed into the output either way
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Local spectra, containing polytopes, minimal polytopes, f-values
    Classify {
        /// Input state (psi1 | psi2 | epr | ghz:N | w:N | basis:IDX | file:PATH)
        #[arg(long)]
        state: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// One run of the filter protocol; prints the spectra row, f and success
    Protocol {
        #[arg(long)]
        state: String,
        /// Filter rotation angle (radians or pi fraction)
        #[arg(long)]
        theta1: String,
        /// Post-selection rotation angle
        #[arg(long, default_value = "-pi/8")]
        theta2: String,
        /// Attenuation in (0, 1]
        #[arg(long)]
        gamma: f64,
        /// Retained measurement outcome of the post-selected qubit
        #[arg(long, default_value_t = 0)]
        outcome: u8,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Protocol over a (theta1, 1/gamma^2) grid
    Sweep {
        #[arg(long)]
        state: String,
        /// theta1 grid as start:stop:count
        #[arg(long = "theta1-grid")]
        theta1_grid: String,
        /// 1/gamma^2 grid as start:stop:count (values >= 1)
        #[arg(long = "invgamma2-grid")]
        invgamma2_grid: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Search filter settings that move the state out of a polytope
    Search {
        #[arg(long)]
        state: String,
        /// Target polytope (P4 or W3)
        #[arg(long)]
        target: String,
        /// Protocol evaluation budget
        #[arg(long, default_value_t = 200)]
        budget: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Haar-random polytope occupation fractions
    Volume {
        /// Register size (3 or 4)
        #[arg(short = 'n', long = "num-qubits")]
        num_qubits: usize,
        /// Number of samples
        #[arg(short = 'N', long = "samples")]
        samples: u64,
        /// Worker shards; the tally is shard-count invariant
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Fraction of post-measured Haar states outside the W polytope
    Postmeasure {
        #[arg(short = 'N', long = "samples")]
        samples: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Simulate tomography counts, reconstruct, bootstrap the spectra
    TomoSim {
        #[arg(long)]
        state: String,
        /// Expected counts per measurement setting
        #[arg(long = "n-set", default_value_t = 10_000)]
        n_set: u64,
        /// Bootstrap steps
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Export the polytope catalog with exact rational vertices
    Catalog {
        /// Dimension (3 or 4)
        #[arg(short = 'n', long = "dimension")]
        dimension: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                AppError::Numerical(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

#[derive(Debug)]
enum AppError {
    Input(String),
    Numerical(String),
    Io(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Input(m) | AppError::Numerical(m) | AppError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Annihilated(_) => AppError::Numerical(e.to_string()),
            _ => AppError::Input(e.to_string()),
        }
    }
}

fn emit(output: &OutputOpts, text: &str) -> Result<(), AppError> {
    match &output.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), AppError> {
    match command {
        Command::Classify { state, output } => {
            let sv = parse_state(&state)?;
            let spectra = sv.local_spectra();
            let classification = polytope::classify(&spectra)?;
            let mut doc = json!({
                "command": "classify",
                "config": { "state": state, "seed": output.seed, "tol": polytope::DEFAULT_TOL },
                "spectra": spectra.values(),
                "containing": classification.containing.iter().map(|id| id.to_string()).collect::<Vec<_>>(),
                "minimal": classification.minimal.iter().map(|id| id.to_string()).collect::<Vec<_>>(),
            });
            if spectra.len() == 4 {
                let f_values: Vec<serde_json::Value> = (1..=4)
                    .map(|i| {
                        let f = polytope::f_value(&spectra, i).expect("4-entry spectra");
                        json!({ "negated": i, "f": f, "slack": f - 1.0 })
                    })
                    .collect();
                doc["f_values"] = json!(f_values);
            }
            emit(&output, &pretty(&doc))
        }
        Command::Protocol {
            state,
            theta1,
            theta2,
            gamma,
            outcome,
            output,
        } => {
            let sv = parse_state(&state)?;
            let setting = FilterSetting {
                theta1: parse_angle(&theta1)?,
                theta2: parse_angle(&theta2)?,
                gamma,
                outcome,
                ..FilterSetting::new(0.0, 1.0)
            };
            let r = filter::run_protocol(&sv, &setting)?;
            let s = r.spectra.values();
            let doc = json!({
                "command": "protocol",
                "config": {
                    "state": state, "theta1": setting.theta1, "theta2": setting.theta2,
                    "gamma": setting.gamma, "outcome": setting.outcome,
                    "postselect_qubit": setting.postselect_qubit,
                    "filtered_qubit": setting.filtered_qubit, "seed": output.seed,
                },
                "lambda2": s[0], "lambda3": s[1], "lambda4": s[2],
                "full_spectra": r.full_spectra.values(),
                "f": r.f,
                "success": r.success,
            });
            emit(&output, &pretty(&doc))
        }
        Command::Sweep {
            state,
            theta1_grid,
            invgamma2_grid,
            format,
            output,
        } => {
            let sv = parse_state(&state)?;
            let thetas = parse_grid(&theta1_grid)?;
            let igs = parse_grid(&invgamma2_grid)?;
            let base = FilterSetting::new(0.0, 1.0);
            let rows = filter::sweep(&sv, &thetas, &igs)?;
            let text = match format {
                Format::Table => {
                    let mut header = String::new();
                    header.push_str(&format!("# command = sweep\n# state = {state}\n"));
                    header.push_str(&format!(
                        "# theta1-grid = {theta1_grid}\n# invgamma2-grid = {invgamma2_grid}\n",
                    ));
                    header.push_str(&format!(
                        "# theta2 = {} outcome = {} postselect_qubit = {} filtered_qubit = {}\n",
                        base.theta2, base.outcome, base.postselect_qubit, base.filtered_qubit
                    ));
                    header.push_str(&format!("# seed = {}\n", output.seed));
                    header + &filter::sweep_table(&rows)
                }
                Format::Json => {
                    let json_rows: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|row| match &row.result {
                            Some(r) => {
                                let s = r.spectra.values();
                                json!({
                                    "theta1": row.theta1, "inv_gamma_sq": row.inv_gamma_sq,
                                    "f": r.f, "success": r.success,
                                    "lambda2": s[0], "lambda3": s[1], "lambda4": s[2],
                                })
                            }
                            None => json!({
                                "theta1": row.theta1, "inv_gamma_sq": row.inv_gamma_sq,
                                "annihilated": true,
                            }),
                        })
                        .collect();
                    pretty(&json!({
                        "command": "sweep",
                        "config": {
                            "state": state, "theta1_grid": theta1_grid,
                            "invgamma2_grid": invgamma2_grid,
                            "theta2": base.theta2, "outcome": base.outcome,
                            "postselect_qubit": base.postselect_qubit,
                            "filtered_qubit": base.filtered_qubit,
                            "seed": output.seed,
                        },
                        "rows": json_rows,
                    }))
                }
            };
            emit(&output, &text)
        }
        Command::Search {
            state,
            target,
            budget,
            output,
        } => {
            let sv = parse_state(&state)?;
            let target_id: PolytopeId = target
                .parse()
                .map_err(|e: CoreError| AppError::Input(format!("--target: {e}")))?;
            let r = filter::search_escape(&sv, &target_id, budget)?;
            let doc = json!({
                "command": "search",
                "config": { "state": state, "target": target, "budget": budget, "seed": output.seed },
                "best_setting": {
                    "theta1": r.best_setting.theta1,
                    "theta2": r.best_setting.theta2,
                    "gamma": r.best_setting.gamma,
                    "inv_gamma_sq": 1.0 / (r.best_setting.gamma * r.best_setting.gamma),
                },
                "best_margin": r.best_margin,
                "escaped": r.escaped,
            });
            emit(&output, &pretty(&doc))
        }
        Command::Volume {
            num_qubits,
            samples,
            shards,
            output,
        } => {
            let tally =
                montecarlo::volume_estimate_sharded(num_qubits, samples, output.seed, shards)?;
            let doc = json!({
                "command": "volume",
                "config": {
                    "num_qubits": num_qubits, "samples": samples,
                    "shards": shards, "seed": output.seed,
                },
                "tally": tally.to_report(),
            });
            emit(&output, &pretty(&doc))
        }
        Command::Postmeasure { samples, output } => {
            let fraction = montecarlo::postmeasure_experiment(samples, output.seed)?;
            let doc = json!({
                "command": "postmeasure",
                "config": { "samples": samples, "seed": output.seed },
                "outside_w3_fraction": fraction,
            });
            emit(&output, &pretty(&doc))
        }
        Command::TomoSim {
            state,
            n_set,
            steps,
            output,
        } => {
            let sv = parse_state(&state)?;
            let dataset = tomo::simulate_counts_pure(&sv, n_set, output.seed)?;
            let result = tomo::bootstrap_spectra(&dataset, steps, output.seed)?;
            let fidelity = result.rho.fidelity_pure(&sv)?;
            let doc = json!({
                "command": "tomo-sim",
                "config": { "state": state, "n_set": n_set, "steps": steps, "seed": output.seed },
                "fidelity_to_input": fidelity,
                "spectra_mean": result.spectra_mean.values(),
                "spectra_std": result.spectra_std,
                "f_mean": result.f_mean,
                "f_std": result.f_std,
                "bootstrap_steps": result.bootstrap_steps,
            });
            emit(&output, &pretty(&doc))
        }
        Command::Catalog { dimension, output } => {
            let entries: serde_json::Value =
                serde_json::from_str(&polytope::export_catalog_json(dimension)?)
                    .expect("export emits valid JSON");
            let doc = json!({
                "command": "catalog",
                "config": { "dimension": dimension, "seed": output.seed },
                "polytopes": entries,
            });
            emit(&output, &pretty(&doc))
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON output cannot fail")
}
