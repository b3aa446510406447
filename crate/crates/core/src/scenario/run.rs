//! Scenario execution: expand the sweep, evaluate points (in parallel
//! where independent), assemble ordered rows, enforce health policy,
//! write outputs.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{OutputFormat, ScenarioConfig, ScenarioKind};
use super::output::{write_csv, write_json, Cell, Table};
use super::ScenarioError;
use crate::chain::{ChainSpec, QuenchSpec};
use crate::correlators::{realspace_correlators, Region};
use crate::entanglement::{log_negativity, subsystem_entropy};
use crate::otoc::otoc_series;
use crate::quasiparticle::{dip_height, DipScan, QuasiparticleModel};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_override: Option<PathBuf>,
    pub workers: Option<usize>,
    pub strict: bool,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub rows: usize,
    pub csv_path: PathBuf,
    pub unhealthy_rows: usize,
}

/// Health carried by each row, checked against the numerics policy.
#[derive(Debug, Clone, Copy, Default)]
struct Health {
    residual: f64,
    clamped: usize,
}

type Row = (Vec<Cell>, Health);

pub fn run_config_file(path: &Path, opts: &RunOptions) -> Result<RunSummary, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ScenarioError::config(format!("cannot read {}: {e}", path.display())))?;
    let config = ScenarioConfig::from_json(&text)?;
    run(&config, opts)
}

pub fn run(config: &ScenarioConfig, opts: &RunOptions) -> Result<RunSummary, ScenarioError> {
    match opts.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ScenarioError::config(format!("cannot build worker pool: {e}")))?;
            pool.install(|| execute_and_write(config, opts))
        }
        None => execute_and_write(config, opts),
    }
}

fn execute_and_write(config: &ScenarioConfig, opts: &RunOptions) -> Result<RunSummary, ScenarioError> {
    let (table, healths) = execute(config)?;

    let unhealthy: Vec<usize> = healths
        .iter()
        .enumerate()
        .filter(|(_, h)| {
            h.residual > config.numerics.residual_limit || h.clamped > config.numerics.max_clamped
        })
        .map(|(i, _)| i)
        .collect();
    if !unhealthy.is_empty() {
        let worst = unhealthy
            .iter()
            .map(|&i| healths[i].residual)
            .fold(0.0, f64::max);
        let message = format!(
            "{} of {} rows unhealthy (worst residual {worst:.3e}, limits: residual {:.0e}, clamped {})",
            unhealthy.len(),
            healths.len(),
            config.numerics.residual_limit,
            config.numerics.max_clamped
        );
        if opts.strict {
            return Err(ScenarioError::unhealthy(message));
        }
        eprintln!("warning: {message}");
    }

    let csv_path = opts
        .out_override
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.output.path));
    let generated = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let header_lines = vec![
        format!("fracchain v{}", env!("CARGO_PKG_VERSION")),
        format!("scenario: {}", config.scenario.name()),
        format!("config: {}", config.echo()),
        format!("generated_unix: {generated} (not part of the deterministic data section)"),
    ];
    write_csv(&csv_path, &header_lines, &table)?;

    if config.output.format == OutputFormat::CsvJson {
        let json_path = csv_path.with_extension("json");
        let header = serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "scenario": config.scenario.name(),
            "config": serde_json::to_value(config).expect("config serializes"),
        });
        write_json(&json_path, &header, &table)?;
    }

    Ok(RunSummary { rows: table.rows.len(), csv_path, unhealthy_rows: unhealthy.len() })
}

fn execute(config: &ScenarioConfig) -> Result<(Table, Vec<Health>), ScenarioError> {
    let rows = match config.scenario {
        ScenarioKind::StaticNegativityVsSeparation => static_negativity_vs_separation(config)?,
        ScenarioKind::StaticNegativityVsSubsystem => static_negativity_vs_subsystem(config)?,
        ScenarioKind::QuenchNegativityVsTime => quench_negativity_vs_time(config)?,
        ScenarioKind::QuenchEntropyVsTime => quench_entropy_vs_time(config)?,
        ScenarioKind::DipVsSystemSize => dip_vs_system_size(config)?,
        ScenarioKind::QuasiparticlePrediction => quasiparticle_prediction(config)?,
        ScenarioKind::OtocVsTime => otoc_vs_time(config)?,
    };
    let mut table = Table::new(columns_for(config.scenario));
    let mut healths = Vec::with_capacity(rows.len());
    for (cells, health) in rows {
        table.push(cells);
        healths.push(health);
    }
    Ok((table, healths))
}

fn columns_for(kind: ScenarioKind) -> Vec<&'static str> {
    match kind {
        ScenarioKind::StaticNegativityVsSeparation => {
            vec!["alpha", "separation", "e_ln", "residual", "clamped"]
        }
        ScenarioKind::StaticNegativityVsSubsystem => {
            vec!["alpha", "subsystem", "e_ln", "residual", "clamped"]
        }
        ScenarioKind::QuenchNegativityVsTime => vec!["alpha", "t", "e_ln", "residual", "clamped"],
        ScenarioKind::QuenchEntropyVsTime => {
            vec!["alpha", "t", "entropy", "entropy_per_site", "residual", "clamped"]
        }
        ScenarioKind::DipVsSystemSize => vec![
            "alpha",
            "sites",
            "subsystem",
            "dip_time",
            "predicted_dip_time",
            "dip_value",
            "saturation",
            "delta_exact",
            "delta_predicted",
            "residual",
            "clamped",
        ],
        ScenarioKind::QuasiparticlePrediction => vec![
            "alpha",
            "t",
            "entropy_exact",
            "prediction_finite",
            "prediction_continuum",
            "residual",
            "clamped",
        ],
        ScenarioKind::OtocVsTime => vec!["alpha", "t", "c", "residual", "clamped"],
    }
}

/// Adjacent-or-separated block pair: A starts at site 1, B follows after
/// `separation` empty sites.
fn block_pair(sites: usize, block_a: usize, block_b: usize, separation: usize) -> Result<(Region, Region), ScenarioError> {
    if block_a + separation + block_b > sites {
        return Err(ScenarioError::config(format!(
            "geometry does not fit: {block_a} + {separation} + {block_b} > {sites} sites"
        )));
    }
    let a = Region::block(1, block_a)?;
    let b = Region::block(block_a + separation + 1, block_b)?;
    Ok((a, b))
}

fn static_negativity_vs_separation(config: &ScenarioConfig) -> Result<Vec<Row>, ScenarioError> {
    let sites = config.sites.unwrap();
    let mass = config.mass.unwrap().resolve(config.numerics.mass_floor);
    let block_a = config.block_a.unwrap();
    let block_b = config.block_b.unwrap();
    let separations = config.separation.as_ref().unwrap().values()?;
    let mut rows = Vec::new();
    for &alpha in &config.alphas() {
        let quench = QuenchSpec::static_chain(ChainSpec::new(sites, alpha, mass)?);
        let batch: Vec<Row> = separations
            .par_iter()
            .map(|&sep| -> Result<Row, ScenarioError> {
                let (a, b) = block_pair(sites, block_a, block_b, sep)?;
                let cov = realspace_correlators(&quench, 0.0, &a.union(&b)?)?;
                let neg = log_negativity(&cov, &a, &b)?;
                Ok((
                    vec![
                        Cell::Float(alpha),
                        Cell::Int(sep as u64),
                        Cell::Float(neg.value),
                        Cell::Float(neg.spectrum.residual),
                        Cell::Int(0),
                    ],
                    Health { residual: neg.spectrum.residual, clamped: 0 },
                ))
            })
            .collect::<Result<_, _>>()?;
        rows.extend(batch);
    }
    Ok(rows)
}

fn static_negativity_vs_subsystem(config: &ScenarioConfig) -> Result<Vec<Row>, ScenarioError> {
    let sites = config.sites.unwrap();
    let mass = config.mass.unwrap().resolve(config.numerics.mass_floor);
    let separation = config.separation.as_ref().unwrap().scalar()?;
    let ells = config.subsystem.as_ref().unwrap().values()?;
    let mut rows = Vec::new();
    for &alpha in &config.alphas() {
        let quench = QuenchSpec::static_chain(ChainSpec::new(sites, alpha, mass)?);
        let batch: Vec<Row> = ells
            .par_iter()
            .map(|&ell| -> Result<Row, ScenarioError> {
                let (a, b) = block_pair(sites, ell, ell, separation)?;
                let cov = realspace_correlators(&quench, 0.0, &a.union(&b)?)?;
                let neg = log_negativity(&cov, &a, &b)?;
                Ok((
                    vec![
                        Cell::Float(alpha),
                        Cell::Int(ell as u64),
                        Cell::Float(neg.value),
                        Cell::Float(neg.spectrum.residual),
                        Cell::Int(0),
                    ],
                    Health { residual: neg.spectrum.residual, clamped: 0 },
                ))
            })
            .collect::<Result<_, _>>()?;
        rows.extend(batch);
    }
    Ok(rows)
}

fn quench_pair(config: &ScenarioConfig, sites: usize, alpha: f64) -> Result<QuenchSpec, ScenarioError> {
    let floor = config.numerics.mass_floor;
    let pre = config.mass_pre.unwrap().resolve(floor);
    let post = config.mass_post.unwrap().resolve(floor);
    Ok(QuenchSpec::mass_quench(sites, alpha, pre, post)?)
}

fn quench_negativity_vs_time(config: &ScenarioConfig) -> Result<Vec<Row>, ScenarioError> {
    let sites = config.sites.unwrap();
    let block_a = config.block_a.unwrap();
    let block_b = config.block_b.unwrap();
    let separation = config.separation.as_ref().unwrap().scalar()?;
    let times = config.time.unwrap().points()?;
    let (a, b) = block_pair(sites, block_a, block_b, separation)?;
    let union = a.union(&b)?;
    let mut rows = Vec::new();
    for &alpha in &config.alphas() {
        let quench = quench_pair(config, sites, alpha)?;
        let batch: Vec<Row> = times
            .par_iter()
            .map(|&t| -> Result<Row, ScenarioError> {
                let cov = realspace_correlators(&quench, t, &union)?;
                let neg = log_negativity(&cov, &a, &b)?;
                Ok((
                    vec![
                        Cell::Float(alpha),
                        Cell::Float(t),
                        Cell::Float(neg.value),
                        Cell::Float(neg.spectrum.residual),
                        Cell::Int(0),
                    ],
                    Health { residual: neg.spectrum.residual, clamped: 0 },
                ))
            })
            .collect::<Result<_, _>>()?;
        rows.extend(batch);
    }
    Ok(rows)
}

fn quench_entropy_vs_time(config: &ScenarioConfig) -> Result<Vec<Row>, ScenarioError> {
    let sites = config.sites.unwrap();
    let ell = config.subsystem.as_ref().unwrap().scalar()?;
    let times = config.time.unwrap().points()?;
    let region = Region::block(1, ell)?;
    let mut rows = Vec::new();
    for &alpha in &config.alphas() {
        let quench = quench_pair(config, sites, alpha)?;
        let batch: Vec<Row> = times
            .par_iter()
            .map(|&t| -> Result<Row, ScenarioError> {
                let s = subsystem_entropy(&quench, t, &region)?;
                let clamped = s.spectrum.clamp_count();
                Ok((
                    vec![
                        Cell::Float(alpha),
                        Cell::Float(t),
                        Cell::Float(s.value),
                        Cell::Float(s.value / ell as f64),
                        Cell::Float(s.spectrum.residual),
                        Cell::Int(clamped as u64),
                    ],
                    Health { residual: s.spectrum.residual, clamped },
                ))
            })
            .collect::<Result<_, _>>()?;
        rows.extend(batch);
    }
    Ok(rows)
}

fn dip_vs_system_size(config: &ScenarioConfig) -> Result<Vec<Row>, ScenarioError> {
    let sites_list = config.sites_list.clone().unwrap();
    let geometries: Vec<(usize, usize)> = match (&config.subsystem_list, config.subsystem_ratio) {
        (Some(list), None) => sites_list.iter().copied().zip(list.iter().copied()).collect(),
        (None, Some(ratio)) => sites_list
            .iter()
            .map(|&l| (l, ((l as f64 * ratio).round() as usize).max(1)))
            .collect(),
        _ => unreachable!("validated"),
    };
    let scan = config
        .dip_scan
        .map(|d| DipScan { window: (d.window_lo, d.window_hi), steps: d.steps })
        .unwrap_or_default();
    let floor = config.numerics.mass_floor;
    let mass_pre = config.mass_pre.unwrap().resolve(floor);
    let mass_post = config.mass_post.unwrap().resolve(floor);

    let mut rows = Vec::new();
    for &alpha in &config.alphas() {
        let points = dip_height(alpha, mass_pre, mass_post, &geometries, &scan)?;
        for p in points {
            rows.push((
                vec![
                    Cell::Float(alpha),
                    Cell::Int(p.sites as u64),
                    Cell::Int(p.ell as u64),
                    Cell::Float(p.dip_time),
                    Cell::Float(p.predicted_dip_time),
                    Cell::Float(p.dip_value),
                    Cell::Float(p.saturation),
                    Cell::Float(p.delta_exact),
                    Cell::Float(p.delta_predicted),
                    Cell::Float(p.worst_residual),
                    Cell::Int(p.clamped as u64),
                ],
                Health { residual: p.worst_residual, clamped: p.clamped },
            ));
        }
    }
    Ok(rows)
}

fn quasiparticle_prediction(config: &ScenarioConfig) -> Result<Vec<Row>, ScenarioError> {
    let sites = config.sites.unwrap();
    let ell = config.subsystem.as_ref().unwrap().scalar()?;
    let times = config.time.unwrap().points()?;
    let region = Region::block(1, ell)?;
    let mut rows = Vec::new();
    for &alpha in &config.alphas() {
        let quench = quench_pair(config, sites, alpha)?;
        let model = QuasiparticleModel::new(&quench)?;
        let batch: Vec<Row> = times
            .par_iter()
            .map(|&t| -> Result<Row, ScenarioError> {
                let s = subsystem_entropy(&quench, t, &region)?;
                let clamped = s.spectrum.clamp_count();
                Ok((
                    vec![
                        Cell::Float(alpha),
                        Cell::Float(t),
                        Cell::Float(s.value),
                        Cell::Float(model.finite(t, ell)),
                        Cell::Float(model.continuum(t, ell)),
                        Cell::Float(s.spectrum.residual),
                        Cell::Int(clamped as u64),
                    ],
                    Health { residual: s.spectrum.residual, clamped },
                ))
            })
            .collect::<Result<_, _>>()?;
        rows.extend(batch);
    }
    Ok(rows)
}

fn otoc_vs_time(config: &ScenarioConfig) -> Result<Vec<Row>, ScenarioError> {
    let sites = config.sites.unwrap();
    let separation = config.separation.as_ref().unwrap().scalar()?;
    let times = config.time.unwrap().points()?;
    let mut rows = Vec::new();
    for &alpha in &config.alphas() {
        let quench = quench_pair(config, sites, alpha)?;
        let series = otoc_series(&quench, separation, &times)?;
        for (&t, &c) in series.times.iter().zip(&series.values) {
            rows.push((
                vec![
                    Cell::Float(alpha),
                    Cell::Float(t),
                    Cell::Float(c),
                    Cell::Float(0.0),
                    Cell::Int(0),
                ],
                Health::default(),
            ));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::config::ScenarioConfig;

    fn run_json(json: &str, opts: &RunOptions) -> Result<RunSummary, ScenarioError> {
        let config = ScenarioConfig::from_json(json).unwrap();
        run(&config, opts)
    }

    #[test]
    fn empty_sweep_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("empty.csv");
        let json = format!(
            r#"{{"scenario": "static_negativity_vs_separation", "sites": 32,
                "alpha": 1.0, "mass": 1.0, "block_a": 4, "block_b": 4,
                "separation": [], "output": {{"path": "{}"}}}}"#,
            out.display()
        );
        let summary = run_json(&json, &RunOptions::default()).unwrap();
        assert_eq!(summary.rows, 0);
        let text = std::fs::read_to_string(&out).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data, vec!["alpha,separation,e_ln,residual,clamped"]);
    }

    #[test]
    fn small_static_run_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let out1 = dir.path().join("a.csv");
        let out2 = dir.path().join("b.csv");
        let json = |p: &std::path::Path| {
            format!(
                r#"{{"scenario": "static_negativity_vs_separation", "sites": 48,
                    "alpha_list": [0.8, 1.6], "mass": "critical", "block_a": 6, "block_b": 6,
                    "separation": {{"start": 0, "stop": 8, "step": 2}},
                    "output": {{"path": "{}", "format": "csv_json"}}}}"#,
                p.display()
            )
        };
        run_json(&json(&out1), &RunOptions::default()).unwrap();
        run_json(&json(&out2), &RunOptions { workers: Some(2), ..Default::default() }).unwrap();
        let data = |p: &std::path::Path| {
            std::fs::read_to_string(p)
                .unwrap()
                .lines()
                .filter(|l| !l.starts_with('#'))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(data(&out1), data(&out2));
        assert!(out1.with_extension("json").exists());
    }

    #[test]
    fn strict_mode_reports_unhealthy() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("strict.csv");
        // Absurdly tight residual limit forces the unhealthy path.
        let json = format!(
            r#"{{"scenario": "quench_entropy_vs_time", "sites": 32, "alpha": 1.5,
                "mass_pre": 4.0, "mass_post": 2.0, "subsystem": 4,
                "time": {{"start": 0.0, "stop": 2.0, "step": 1.0}},
                "numerics": {{"residual_limit": 1e-300}},
                "output": {{"path": "{}"}}}}"#,
            out.display()
        );
        let err = run_json(&json, &RunOptions { strict: true, ..Default::default() }).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(!out.exists(), "strict failure must not write output");
        // Non-strict: warns but writes.
        let summary = run_json(&json, &RunOptions::default()).unwrap();
        assert!(summary.unhealthy_rows > 0);
        assert!(out.exists());
    }

    #[test]
    fn out_override_wins() {
        let dir = tempfile::tempdir().unwrap();
        let configured = dir.path().join("configured.csv");
        let actual = dir.path().join("actual.csv");
        let json = format!(
            r#"{{"scenario": "otoc_vs_time", "sites": 16, "alpha": 1.1,
                "mass_pre": 4.0, "mass_post": 2.0, "separation": 2,
                "time": {{"start": 0.0, "stop": 1.0, "step": 0.5}},
                "output": {{"path": "{}"}}}}"#,
            configured.display()
        );
        let summary = run_json(
            &json,
            &RunOptions { out_override: Some(actual.clone()), ..Default::default() },
        )
        .unwrap();
        assert_eq!(summary.csv_path, actual);
        assert!(actual.exists());
        assert!(!configured.exists());
    }
}
