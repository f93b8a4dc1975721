//! Batch command-line front end.
//!
//! Every capability is a subcommand that reads a model file, computes, and
//! prints one machine-readable report to standard output. Identical argument
//! vectors produce byte-identical output. Exit codes: 0 success, 1 usage
//! error, 2 model or parameter validation failure, 3 numerical failure
//! (non-convergence, rank deficiency), the latter two with a JSON diagnostic
//! payload on standard output.
//!
//! Event lists on the command line are semicolon-separated bracketed integer
//! lists, e.g. `"[0,1];[1]"`. The environment variable `FINETTI_MAX_EXACT_N`
//! (default 64) raises or lowers the exact-mode sample-size cap.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::definetti;
use crate::ensemble;
use crate::error::{Error, Result};
use crate::measures::{Event, Prob};
use crate::models::Model;
use crate::rational::{self, Rational};
use crate::recovery;
use crate::wire;

#[derive(Parser)]
#[command(
    name = "finetti",
    version,
    about = "Exact computation for finite exchangeable sequences"
)]
struct Cli {
    /// Output format for the report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact joint probability of a state prefix or an event tuple.
    ExactJoint {
        /// Model file (JSON).
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated states, e.g. "1,1".
        #[arg(long, conflicts_with = "events")]
        states: Option<String>,
        /// Semicolon-separated events, e.g. "[0,1];[1]".
        #[arg(long)]
        events: Option<String>,
    },
    /// Empirical product moment vs joint probability, with the C(k,2)/n bound.
    DfGap {
        #[arg(long)]
        model: PathBuf,
        /// Sample size of the empirical measure.
        #[arg(long)]
        n: u64,
        #[arg(long)]
        events: String,
    },
    /// Both count-vector expansions of a repeated-event pattern, cross-checked.
    BayesCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: u64,
        /// Disjoint partition classes, e.g. "[1];[0]".
        #[arg(long)]
        partition: String,
        /// Multiplicity per class, e.g. "2,1".
        #[arg(long)]
        multiplicities: String,
    },
    /// Conditional probability of a pattern given occupancy counts.
    CondLaw {
        /// Sample size N.
        #[arg(long)]
        n: u64,
        /// Occupancy counts per class, e.g. "2,1".
        #[arg(long)]
        counts: String,
        #[arg(long)]
        multiplicities: String,
    },
    /// Monte-Carlo estimate of a joint probability.
    McEstimate {
        #[arg(long)]
        model: PathBuf,
        /// Draws per experiment.
        #[arg(long)]
        n: usize,
        /// Number of experiments.
        #[arg(long)]
        reps: u64,
        #[arg(long)]
        events: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; affects wall time only, never the result.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Exact mixing-measure moments over a partition.
    Moments {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        max_order: u64,
    },
    /// Hausdorff complete-monotonicity check of a moment sequence.
    CheckCm {
        /// Comma-separated moments starting at m_0, e.g. "1,1/2,1/3".
        #[arg(long)]
        moments: String,
    },
    /// Grid recovery of a mixing measure from 1-D moments.
    RecoverGrid {
        #[arg(long)]
        moments: String,
        #[arg(long, default_value_t = recovery::DEFAULT_GRID_SIZE)]
        grid_size: usize,
        #[arg(long, default_value_t = recovery::DEFAULT_GRID_TOL)]
        tol: f64,
        #[arg(long, default_value_t = recovery::DEFAULT_GRID_MAX_ITERS)]
        max_iters: usize,
        /// Write "grid_point weight" rows for plotting.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Exact atomic recovery from moments m_0..m_{2r-1}.
    RecoverProny {
        #[arg(long)]
        moments: String,
        /// Number of atoms r.
        #[arg(long)]
        atoms: usize,
    },
    /// Pushforward ensemble of the empirical measure.
    Pushforward {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        partition: String,
    },
    /// Moment discrepancy sweep over sample sizes.
    Converge {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        partition: String,
        /// Comma-separated sample sizes, e.g. "10,20,40".
        #[arg(long)]
        n_list: String,
        #[arg(long)]
        degree: u64,
        /// Write "n discrepancy" rows for plotting.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Exact exchangeability deviation of the k-dimensional marginal.
    ExchTest {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Probability that some partition class receives at most m observations.
    TailMass {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        partition: String,
        #[arg(long)]
        m: u64,
    },
}

/// Runs the command line and returns the process exit code, printing the
/// report (or a JSON diagnostic payload) to standard output.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are successful exits, not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            println!("{}", render(&report, cli.format, &cli.command));
            0
        }
        Err(e) => {
            let payload = json!({
                "error": e.to_string(),
                "numerical": e.is_numerical(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).expect("payload serializes")
            );
            eprintln!("error: {e}");
            if e.is_numerical() {
                3
            } else {
                2
            }
        }
    }
}

fn parse_states(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad state {:?}", s.trim())))
        })
        .collect()
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {:?}", s.trim())))
        })
        .collect()
}

/// Parses `"[0,1];[1]"` into events over the model's alphabet.
fn parse_events(model: &Model, text: &str) -> Result<Vec<Event>> {
    let alphabet = model.alphabet();
    text.split(';')
        .map(|part| {
            let part = part.trim();
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("event {part:?} is not bracketed")))?;
            let members = if inner.trim().is_empty() {
                Vec::new()
            } else {
                parse_states(inner)?
            };
            Event::new(alphabet, members)
        })
        .collect()
}

fn events_json(events: &[Event]) -> Value {
    Value::Array(events.iter().map(wire::event_to_json).collect())
}

fn rational_pair(value: &Rational) -> (Value, Value) {
    (json!(value.to_string()), json!(rational::to_f64(value)))
}

fn prob_pair(p: &Prob) -> (Value, Value) {
    rational_pair(p.ratio())
}

fn execute(command: &Command) -> Result<Value> {
    match command {
        Command::ExactJoint {
            model,
            states,
            events,
        } => {
            let m = wire::load_model(model)?;
            let (value, inputs) = match (states, events) {
                (Some(s), None) => {
                    let states = parse_states(s)?;
                    let v = m.joint_prob(&states)?;
                    (
                        v,
                        json!({ "model": wire::model_to_json(&m), "states": states }),
                    )
                }
                (None, Some(e)) => {
                    let events = parse_events(&m, e)?;
                    let v = m.joint_event_prob(&events)?;
                    (
                        v,
                        json!({ "model": wire::model_to_json(&m), "events": events_json(&events) }),
                    )
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "exactly one of --states and --events is required".into(),
                    ))
                }
            };
            let (exact, float) = prob_pair(&value);
            Ok(json!({
                "command": "exact-joint",
                "inputs": inputs,
                "value": exact,
                "value_f": float,
            }))
        }
        Command::DfGap { model, n, events } => {
            let m = wire::load_model(model)?;
            let events = parse_events(&m, events)?;
            let report = definetti::df_gap(&m, *n, &events)?;
            Ok(json!({
                "command": "df-gap",
                "inputs": { "model": wire::model_to_json(&m), "n": n, "events": events_json(&events) },
                "joint": report.joint.to_string(),
                "empirical_moment": report.empirical_moment.to_string(),
                "gap": report.gap.to_string(),
                "bound": report.bound.to_string(),
                "holds": report.holds,
                "floats": {
                    "joint": report.joint.to_f64(),
                    "empirical_moment": report.empirical_moment.to_f64(),
                    "gap": rational::to_f64(&report.gap),
                    "bound": rational::to_f64(&report.bound),
                },
            }))
        }
        Command::BayesCheck {
            model,
            n,
            partition,
            multiplicities,
        } => {
            let m = wire::load_model(model)?;
            let partition = parse_events(&m, partition)?;
            let mults = parse_u64_list(multiplicities)?;
            let check = definetti::bayes_expansion_check(&m, *n, &partition, &mults)?;
            Ok(json!({
                "command": "bayes-check",
                "inputs": {
                    "model": wire::model_to_json(&m),
                    "n": n,
                    "partition": events_json(&partition),
                    "multiplicities": mults,
                },
                "lhs": check.lhs.to_string(),
                "rhs": check.rhs.to_string(),
                "joint": check.joint.to_string(),
                "empirical_moment": check.empirical_moment.to_string(),
                "lhs_matches_joint": check.lhs_matches_joint,
                "rhs_matches_moment": check.rhs_matches_moment,
                "equal": check.equal(),
                "floats": {
                    "lhs": check.lhs.to_f64(),
                    "rhs": check.rhs.to_f64(),
                },
            }))
        }
        Command::CondLaw {
            n,
            counts,
            multiplicities,
        } => {
            let counts = parse_u64_list(counts)?;
            let mults = parse_u64_list(multiplicities)?;
            let value = definetti::conditional_law_given_counts(*n, &counts, &mults)?;
            let (exact, float) = prob_pair(&value);
            Ok(json!({
                "command": "cond-law",
                "inputs": { "n": n, "counts": counts, "multiplicities": mults },
                "value": exact,
                "value_f": float,
            }))
        }
        Command::McEstimate {
            model,
            n,
            reps,
            events,
            seed,
            workers,
        } => {
            let m = wire::load_model(model)?;
            let events = parse_events(&m, events)?;
            let est =
                definetti::mc_joint_estimate_with_workers(&m, *n, *reps, &events, *seed, *workers)?;
            Ok(json!({
                "command": "mc-estimate",
                "inputs": {
                    "model": wire::model_to_json(&m),
                    "n": n,
                    "reps": reps,
                    "events": events_json(&events),
                    "seed": seed,
                    "workers": workers,
                },
                "estimate": est.estimate,
                "std_error": est.std_error,
            }))
        }
        Command::Moments {
            model,
            partition,
            max_order,
        } => {
            let m = wire::load_model(model)?;
            let partition = parse_events(&m, partition)?;
            let table = recovery::moments_from_model(&m, &partition, *max_order)?;
            let mut exact = Map::new();
            let mut floats = Map::new();
            for (index, value) in table.entries() {
                let key = index
                    .iter()
                    .map(|k| k.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                exact.insert(key.clone(), json!(value.to_string()));
                floats.insert(key, json!(value.to_f64()));
            }
            Ok(json!({
                "command": "moments",
                "inputs": {
                    "model": wire::model_to_json(&m),
                    "partition": events_json(&partition),
                    "max_order": max_order,
                },
                "entries": exact,
                "entries_f": floats,
            }))
        }
        Command::CheckCm { moments } => {
            let ms = rational::parse_list(moments)?;
            let check = recovery::check_complete_monotonicity(&ms)?;
            let mut report = json!({
                "command": "check-cm",
                "inputs": { "moments": ms.iter().map(|m| m.to_string()).collect::<Vec<_>>() },
                "ok": check.ok,
            });
            if let Some((j, k)) = check.first_violation {
                report["first_violation"] = json!({ "j": j, "k": k });
            }
            Ok(report)
        }
        Command::RecoverGrid {
            moments,
            grid_size,
            tol,
            max_iters,
            plot_data,
        } => {
            let ms = rational::parse_list(moments)?;
            let grid = recovery::recover_mixing_grid(&ms, *grid_size, *tol, *max_iters)?;
            if let Some(path) = plot_data {
                let mut data = String::from("# grid_point weight\n");
                for (p, w) in grid.grid.iter().zip(&grid.weights) {
                    data.push_str(&format!("{p} {w}\n"));
                }
                std::fs::write(path, data)?;
            }
            Ok(json!({
                "command": "recover-grid",
                "inputs": {
                    "moments": ms.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    "grid_size": grid_size,
                    "tol": tol,
                    "max_iters": max_iters,
                },
                "grid": grid.grid,
                "weights": grid.weights,
                "residual": grid.residual,
                "iterations": grid.iterations,
            }))
        }
        Command::RecoverProny { moments, atoms } => {
            let ms = rational::parse_list(moments)?;
            let measure = recovery::recover_atoms_prony(&ms, *atoms)?;
            Ok(json!({
                "command": "recover-prony",
                "inputs": {
                    "moments": ms.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    "atoms": atoms,
                },
                "atoms": measure.atoms,
                "weights": measure.weights,
            }))
        }
        Command::Pushforward {
            model,
            n,
            partition,
        } => {
            let m = wire::load_model(model)?;
            let partition = parse_events(&m, partition)?;
            let e = ensemble::pushforward_ensemble(&m, *n, &partition)?;
            let support: Vec<Value> = e
                .support()
                .iter()
                .map(|(point, mass)| {
                    json!({
                        "point": point.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "point_f": point.iter().map(rational::to_f64).collect::<Vec<_>>(),
                        "mass": mass.to_string(),
                        "mass_f": mass.to_f64(),
                    })
                })
                .collect();
            Ok(json!({
                "command": "pushforward",
                "inputs": {
                    "model": wire::model_to_json(&m),
                    "n": n,
                    "partition": events_json(&partition),
                },
                "support": support,
            }))
        }
        Command::Converge {
            model,
            partition,
            n_list,
            degree,
            plot_data,
        } => {
            let m = wire::load_model(model)?;
            let partition = parse_events(&m, partition)?;
            let ns = parse_u64_list(n_list)?;
            let sweep = ensemble::convergence_sweep(&m, &partition, &ns, *degree)?;
            if let Some(path) = plot_data {
                let mut data = String::from("# n discrepancy\n");
                for row in &sweep.rows {
                    data.push_str(&format!(
                        "{} {}\n",
                        row.n,
                        rational::to_f64(&row.discrepancy)
                    ));
                }
                std::fs::write(path, data)?;
            }
            let rows: Vec<Value> = sweep
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "n": row.n,
                        "discrepancy": row.discrepancy.to_string(),
                        "bound": row.bound.to_string(),
                        "ratio": ratio_string(&row.discrepancy, &row.bound),
                        "discrepancy_f": rational::to_f64(&row.discrepancy),
                        "bound_f": rational::to_f64(&row.bound),
                    })
                })
                .collect();
            Ok(json!({
                "command": "converge",
                "inputs": {
                    "model": wire::model_to_json(&m),
                    "partition": events_json(&partition),
                    "n_list": ns,
                    "degree": degree,
                },
                "rows": rows,
                "max_scaled_discrepancy": sweep.max_scaled.to_string(),
            }))
        }
        Command::ExchTest { model, k } => {
            let m = wire::load_model(model)?;
            let deviation = m.exchangeability_deviation(*k)?;
            let (exact, float) = rational_pair(&deviation);
            Ok(json!({
                "command": "exch-test",
                "inputs": { "model": wire::model_to_json(&m), "k": k },
                "max_deviation": exact,
                "max_deviation_f": float,
                "exchangeable": deviation == Rational::from_integer(0.into()),
            }))
        }
        Command::TailMass {
            model,
            n,
            partition,
            m,
        } => {
            let loaded = wire::load_model(model)?;
            let partition = parse_events(&loaded, partition)?;
            let value = definetti::tail_mass(&loaded, *n, &partition, *m)?;
            let (exact, float) = prob_pair(&value);
            Ok(json!({
                "command": "tail-mass",
                "inputs": {
                    "model": wire::model_to_json(&loaded),
                    "n": n,
                    "partition": events_json(&partition),
                    "m": m,
                },
                "value": exact,
                "value_f": float,
            }))
        }
    }
}

/// `discrepancy / bound` as an exact string; "0" when the bound is zero
/// (degree below 2 makes both sides vanish).
fn ratio_string(discrepancy: &Rational, bound: &Rational) -> String {
    use num::Zero;
    if bound.is_zero() {
        "0".into()
    } else {
        (discrepancy / bound).to_string()
    }
}

fn render(report: &Value, format: Format, command: &Command) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        Format::Csv => match command {
            Command::Converge { .. } => {
                let mut out = String::from("n,discrepancy,bound,ratio,discrepancy_f,bound_f\n");
                for row in report["rows"].as_array().expect("rows") {
                    out.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        row["n"],
                        csv_field(&row["discrepancy"]),
                        csv_field(&row["bound"]),
                        csv_field(&row["ratio"]),
                        row["discrepancy_f"],
                        row["bound_f"],
                    ));
                }
                out.trim_end().to_string()
            }
            Command::Moments { .. } => {
                let mut out = String::from("order,value\n");
                for (key, value) in report["entries"].as_object().expect("entries") {
                    out.push_str(&format!("{},{}\n", quote_csv(key), csv_field(value)));
                }
                out.trim_end().to_string()
            }
            _ => {
                let mut rows = vec![("key".to_string(), "value".to_string())];
                flatten(report, String::new(), &mut rows);
                rows.iter()
                    .map(|(k, v)| format!("{},{}", quote_csv(k), quote_csv(v)))
                    .collect::<Vec<_>>()
                    .join("\n")
            }
        },
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::String(s) => quote_csv(s),
        other => other.to_string(),
    }
}

fn quote_csv(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn flatten(value: &Value, path: String, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let next = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                flatten(v, next, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, format!("{path}.{i}"), rows);
            }
        }
        Value::String(s) => rows.push((path, s.clone())),
        other => rows.push((path, other.to_string())),
    }
}
