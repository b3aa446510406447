//! Scenario configuration: a single JSON document, strictly validated.
//!
//! Unknown keys are rejected, and every scenario declares exactly which
//! physics keys it consumes; supplying a key the scenario ignores is as
//! much an error as omitting one it needs. There are no silent defaults
//! for physics parameters.

use serde::{Deserialize, Deserializer, Serialize};

use super::ScenarioError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    StaticNegativityVsSeparation,
    StaticNegativityVsSubsystem,
    QuenchNegativityVsTime,
    QuenchEntropyVsTime,
    DipVsSystemSize,
    QuasiparticlePrediction,
    OtocVsTime,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::StaticNegativityVsSeparation => "static_negativity_vs_separation",
            Self::StaticNegativityVsSubsystem => "static_negativity_vs_subsystem",
            Self::QuenchNegativityVsTime => "quench_negativity_vs_time",
            Self::QuenchEntropyVsTime => "quench_entropy_vs_time",
            Self::DipVsSystemSize => "dip_vs_system_size",
            Self::QuasiparticlePrediction => "quasiparticle_prediction",
            Self::OtocVsTime => "otoc_vs_time",
        }
    }
}

/// A mass value, or the literal string "critical" which resolves to the
/// configured mass floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MassParam {
    Value(f64),
    Critical(&'static str),
}

impl MassParam {
    pub const CRITICAL: MassParam = MassParam::Critical("critical");

    pub fn resolve(&self, mass_floor: f64) -> f64 {
        match self {
            MassParam::Value(v) => *v,
            MassParam::Critical(_) => mass_floor,
        }
    }
}

impl<'de> Deserialize<'de> for MassParam {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(v) if v >= 0.0 && v.is_finite() => Ok(MassParam::Value(v)),
            Raw::Num(v) => Err(serde::de::Error::custom(format!("mass must be non-negative, got {v}"))),
            Raw::Text(s) if s == "critical" => Ok(MassParam::CRITICAL),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "mass must be a number or \"critical\", got \"{s}\""
            ))),
        }
    }
}

/// Integer sweep: a scalar, an explicit list, or an inclusive range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    Scalar(usize),
    List(Vec<usize>),
    Range { start: usize, stop: usize, step: usize },
}

impl Sweep {
    pub fn values(&self) -> Result<Vec<usize>, ScenarioError> {
        match self {
            Sweep::Scalar(v) => Ok(vec![*v]),
            Sweep::List(v) => Ok(v.clone()),
            Sweep::Range { start, stop, step } => {
                if *step == 0 {
                    return Err(ScenarioError::config("sweep step must be positive"));
                }
                Ok((*start..=*stop).step_by(*step).collect())
            }
        }
    }

    pub fn scalar(&self) -> Result<usize, ScenarioError> {
        match self {
            Sweep::Scalar(v) => Ok(*v),
            _ => Err(ScenarioError::config("expected a single value, not a sweep")),
        }
    }
}

/// Closed time grid start..=stop with fixed step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl TimeGrid {
    pub fn points(&self) -> Result<Vec<f64>, ScenarioError> {
        if !(self.step > 0.0) {
            return Err(ScenarioError::config("time step must be positive"));
        }
        if self.stop < self.start {
            return Err(ScenarioError::config("time grid stop before start"));
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| self.start + i as f64 * self.step).collect())
    }
}

/// Numerical policy knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    /// Mass substituted when a mass key says "critical".
    pub mass_floor: f64,
    /// Residual above which a row is unhealthy (aborts under --strict).
    pub residual_limit: f64,
    /// Clamp count above which a row is unhealthy (aborts under --strict).
    pub max_clamped: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            mass_floor: crate::chain::DEFAULT_MASS_FLOOR,
            residual_limit: crate::entanglement::RESIDUAL_LIMIT,
            max_clamped: 0,
        }
    }
}

/// Dip-scan controls for `dip_vs_system_size`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DipScanConfig {
    /// Scan window in units of the predicted revival time.
    pub window_lo: f64,
    pub window_hi: f64,
    pub steps: usize,
}

impl Default for DipScanConfig {
    fn default() -> Self {
        let d = crate::quasiparticle::DipScan::default();
        Self { window_lo: d.window.0, window_hi: d.window.1, steps: d.steps }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: String,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    CsvJson,
}

/// The full scenario document. Optional fields are validated per
/// scenario: required keys must be present, inapplicable ones absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub sites: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sites_list: Option<Vec<usize>>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_list: Option<Vec<f64>>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<MassParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_pre: Option<MassParam>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_post: Option<MassParam>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<Sweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsystem: Option<Sweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsystem_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsystem_ratio: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeGrid>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub dip_scan: Option<DipScanConfig>,

    pub output: OutputConfig,

    #[serde(default)]
    pub numerics: Numerics,
}

/// Field identifiers for the per-scenario key discipline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Key {
    Sites,
    SitesList,
    Alpha,
    Mass,
    MassPre,
    MassPost,
    BlockA,
    BlockB,
    Separation,
    Subsystem,
    SubsystemList,
    SubsystemRatio,
    Time,
    DipScan,
}

impl Key {
    fn name(&self) -> &'static str {
        match self {
            Key::Sites => "sites",
            Key::SitesList => "sites_list",
            Key::Alpha => "alpha | alpha_list",
            Key::Mass => "mass",
            Key::MassPre => "mass_pre",
            Key::MassPost => "mass_post",
            Key::BlockA => "block_a",
            Key::BlockB => "block_b",
            Key::Separation => "separation",
            Key::Subsystem => "subsystem",
            Key::SubsystemList => "subsystem_list",
            Key::SubsystemRatio => "subsystem_ratio",
            Key::Time => "time",
            Key::DipScan => "dip_scan",
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| ScenarioError::config(format!("bad config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Which keys the scenario requires and which it may also accept.
    fn key_table(&self) -> (Vec<Key>, Vec<Key>) {
        use Key::*;
        use ScenarioKind::*;
        match self.scenario {
            StaticNegativityVsSeparation => {
                (vec![Sites, Alpha, Mass, BlockA, BlockB, Separation], vec![])
            }
            StaticNegativityVsSubsystem => (vec![Sites, Alpha, Mass, Separation, Subsystem], vec![]),
            QuenchNegativityVsTime => {
                (vec![Sites, Alpha, MassPre, MassPost, BlockA, BlockB, Separation, Time], vec![])
            }
            QuenchEntropyVsTime => (vec![Sites, Alpha, MassPre, MassPost, Subsystem, Time], vec![]),
            DipVsSystemSize => (
                vec![Alpha, MassPre, MassPost, SitesList],
                vec![SubsystemList, SubsystemRatio, DipScan],
            ),
            QuasiparticlePrediction => (vec![Sites, Alpha, MassPre, MassPost, Subsystem, Time], vec![]),
            OtocVsTime => (vec![Sites, Alpha, MassPre, MassPost, Separation, Time], vec![]),
        }
    }

    fn key_present(&self, key: Key) -> bool {
        match key {
            Key::Sites => self.sites.is_some(),
            Key::SitesList => self.sites_list.is_some(),
            Key::Alpha => self.alpha.is_some() || self.alpha_list.is_some(),
            Key::Mass => self.mass.is_some(),
            Key::MassPre => self.mass_pre.is_some(),
            Key::MassPost => self.mass_post.is_some(),
            Key::BlockA => self.block_a.is_some(),
            Key::BlockB => self.block_b.is_some(),
            Key::Separation => self.separation.is_some(),
            Key::Subsystem => self.subsystem.is_some(),
            Key::SubsystemList => self.subsystem_list.is_some(),
            Key::SubsystemRatio => self.subsystem_ratio.is_some(),
            Key::Time => self.time.is_some(),
            Key::DipScan => self.dip_scan.is_some(),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        use Key::*;
        let (required, optional) = self.key_table();
        for key in &required {
            if !self.key_present(*key) {
                return Err(ScenarioError::config(format!(
                    "scenario {} requires key `{}`",
                    self.scenario.name(),
                    key.name()
                )));
            }
        }
        let all = [
            Sites, SitesList, Alpha, Mass, MassPre, MassPost, BlockA, BlockB, Separation, Subsystem,
            SubsystemList, SubsystemRatio, Time, DipScan,
        ];
        for key in all {
            if self.key_present(key) && !required.contains(&key) && !optional.contains(&key) {
                return Err(ScenarioError::config(format!(
                    "scenario {} does not accept key `{}`",
                    self.scenario.name(),
                    key.name()
                )));
            }
        }
        if self.alpha.is_some() && self.alpha_list.is_some() {
            return Err(ScenarioError::config("give either `alpha` or `alpha_list`, not both"));
        }
        if self.scenario == ScenarioKind::DipVsSystemSize {
            match (&self.subsystem_list, self.subsystem_ratio) {
                (Some(_), Some(_)) => {
                    return Err(ScenarioError::config(
                        "give either `subsystem_list` or `subsystem_ratio`, not both",
                    ))
                }
                (None, None) => {
                    return Err(ScenarioError::config(
                        "dip_vs_system_size needs `subsystem_list` or `subsystem_ratio`",
                    ))
                }
                (Some(list), None) => {
                    let sites = self.sites_list.as_ref().unwrap();
                    if list.len() != sites.len() {
                        return Err(ScenarioError::config(
                            "`subsystem_list` must match `sites_list` in length",
                        ));
                    }
                }
                (None, Some(r)) => {
                    if !(r > 0.0 && r < 0.5) {
                        return Err(ScenarioError::config("`subsystem_ratio` must lie in (0, 0.5)"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn alphas(&self) -> Vec<f64> {
        match (&self.alpha, &self.alpha_list) {
            (Some(a), _) => vec![*a],
            (_, Some(list)) => list.clone(),
            _ => vec![],
        }
    }

    /// Canonical one-line echo used in output headers.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
