use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fracchain::scenario::output::read_csv;
use fracchain::scenario::{
    fit::{DEFAULT_EXPONENTIAL_WINDOW, DEFAULT_POWER_WINDOW},
    fit_decay, FitModel, RunOptions, ScenarioConfig, ScenarioError,
};

/// Simulate long-range harmonic chains and their entanglement.
#[derive(Parser)]
#[command(name = "fracchain", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario config and write its series.
    ///
    /// CSV columns by scenario:
    ///   static_negativity_vs_separation: alpha, separation, e_ln, residual, clamped
    ///   static_negativity_vs_subsystem:  alpha, subsystem, e_ln, residual, clamped
    ///   quench_negativity_vs_time:       alpha, t, e_ln, residual, clamped
    ///   quench_entropy_vs_time:          alpha, t, entropy, entropy_per_site, residual, clamped
    ///   dip_vs_system_size:              alpha, sites, subsystem, dip_time, predicted_dip_time,
    ///                                    dip_value, saturation, delta_exact, delta_predicted,
    ///                                    residual, clamped
    ///   quasiparticle_prediction:        alpha, t, entropy_exact, prediction_finite,
    ///                                    prediction_continuum, residual, clamped
    ///   otoc_vs_time:                    alpha, t, c, residual, clamped
    Run {
        /// Path to the JSON scenario config.
        config: PathBuf,
        /// Write the CSV here instead of the config's output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for independent sweep points.
        #[arg(long)]
        workers: Option<usize>,
        /// Abort (exit 3) when any row exceeds the health thresholds.
        #[arg(long)]
        strict: bool,
    },
    /// Fit decay models to a series written by `run`.
    Fit {
        /// CSV series file.
        series: PathBuf,
        /// Model to fit; omit to run both defaults (power on the
        /// small-separation window, exponential on the large one).
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Fit window as lo:hi (hi may be "inf").
        #[arg(long)]
        window: Option<String>,
        /// Column holding the independent variable.
        #[arg(long, default_value = "separation")]
        x_col: String,
        /// Column holding the measure.
        #[arg(long, default_value = "e_ln")]
        y_col: String,
        /// Fit each distinct value of this column separately.
        #[arg(long, default_value = "alpha")]
        group_by: String,
    },
    /// Check a config against the schema and scenario key rules.
    Validate {
        config: PathBuf,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum ModelArg {
    Power,
    Exp,
}

impl From<ModelArg> for FitModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Power => FitModel::Power,
            ModelArg::Exp => FitModel::Exponential,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, out, workers, strict } => {
            fracchain::scenario::run_config_file(&config, &RunOptions { out_override: out, workers, strict })
                .map(|summary| {
                    println!(
                        "wrote {} rows to {}{}",
                        summary.rows,
                        summary.csv_path.display(),
                        if summary.unhealthy_rows > 0 {
                            format!(" ({} unhealthy rows)", summary.unhealthy_rows)
                        } else {
                            String::new()
                        }
                    );
                })
        }
        Command::Fit { series, model, window, x_col, y_col, group_by } => {
            fit_command(&series, model, window.as_deref(), &x_col, &y_col, &group_by)
        }
        Command::Validate { config } => validate_command(&config),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.kind(), "message": e.to_string() })
            );
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn validate_command(path: &PathBuf) -> Result<(), ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::config(format!("cannot read {}: {e}", path.display())))?;
    let config = ScenarioConfig::from_json(&text)?;
    println!("ok: {}", config.scenario.name());
    Ok(())
}

fn parse_window(text: &str) -> Result<(f64, f64), ScenarioError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| ScenarioError::config("window must be lo:hi"))?;
    let parse = |s: &str| -> Result<f64, ScenarioError> {
        if s == "inf" {
            Ok(f64::INFINITY)
        } else {
            s.parse().map_err(|_| ScenarioError::config(format!("bad window bound `{s}`")))
        }
    };
    Ok((parse(lo)?, parse(hi)?))
}

fn fit_command(
    series: &PathBuf,
    model: Option<ModelArg>,
    window: Option<&str>,
    x_col: &str,
    y_col: &str,
    group_by: &str,
) -> Result<(), ScenarioError> {
    let text = std::fs::read_to_string(series)
        .map_err(|e| ScenarioError::config(format!("cannot read {}: {e}", series.display())))?;
    let (columns, rows) = read_csv(&text)?;
    let col = |name: &str| -> Result<usize, ScenarioError> {
        columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| ScenarioError::config(format!("no column `{name}` in {:?}", columns)))
    };
    let xi = col(x_col)?;
    let yi = col(y_col)?;
    let group_idx = columns.iter().position(|c| c == group_by);

    // Group rows; BTreeMap on the raw cell text keeps output ordering
    // stable.
    let mut groups: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for row in &rows {
        let key = group_idx.map(|g| row[g].clone()).unwrap_or_default();
        let x: f64 = row[xi]
            .parse()
            .map_err(|_| ScenarioError::config(format!("bad numeric cell `{}`", row[xi])))?;
        let y: f64 = row[yi]
            .parse()
            .map_err(|_| ScenarioError::config(format!("bad numeric cell `{}`", row[yi])))?;
        let entry = groups.entry(key).or_default();
        entry.0.push(x);
        entry.1.push(y);
    }

    let jobs: Vec<(FitModel, (f64, f64))> = match (model, window) {
        (Some(m), Some(w)) => vec![(m.into(), parse_window(w)?)],
        (Some(m), None) => {
            let m: FitModel = m.into();
            let w = match m {
                FitModel::Power => DEFAULT_POWER_WINDOW,
                FitModel::Exponential => DEFAULT_EXPONENTIAL_WINDOW,
            };
            vec![(m, w)]
        }
        (None, Some(w)) => {
            let w = parse_window(w)?;
            vec![(FitModel::Power, w), (FitModel::Exponential, w)]
        }
        (None, None) => vec![
            (FitModel::Power, DEFAULT_POWER_WINDOW),
            (FitModel::Exponential, DEFAULT_EXPONENTIAL_WINDOW),
        ],
    };

    for (key, (xs, ys)) in &groups {
        for &(m, w) in &jobs {
            match fit_decay(xs, ys, m, w) {
                Ok(report) => {
                    let label = if key.is_empty() { String::new() } else { format!("{group_by}={key} ") };
                    println!(
                        "{label}model={} window=[{},{}] slope={:.6} intercept={:.6} r2={:.6} points={} dropped={}",
                        report.model.name(),
                        report.window.0,
                        report.window.1,
                        report.slope,
                        report.intercept,
                        report.r_squared,
                        report.points_used,
                        report.dropped_nonpositive
                    );
                }
                Err(e) => {
                    let label = if key.is_empty() { String::new() } else { format!("{group_by}={key} ") };
                    eprintln!("{label}model={}: {e}", m.name());
                }
            }
        }
    }
    Ok(())
}
