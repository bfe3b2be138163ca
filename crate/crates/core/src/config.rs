//! Scenario configuration: a TOML document with strict keys, defaults and
//! dotted `key=value` overrides.
//!
//! ```toml
//! [black_hole]
//! mass = 1.0            # or r_g_m = 2953.0
//! mass_unit = "solar"   # "solar" | "kg"
//!
//! [atom]
//! omega = [50, 100, 200]
//!
//! [modes]
//! nu = [0.1, 0.5, 1.0]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::{self, Constants};
use crate::error::{Error, Result};
use crate::excitation::{AtomSpec, ModeSpec, QuadratureConfig};
use crate::geometry::{BlackHole, UnitMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassUnit {
    Kg,
    #[default]
    Solar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlackHoleSection {
    #[serde(default)]
    pub mass: Option<f64>,
    #[serde(default)]
    pub mass_unit: MassUnit,
    /// Gravitational radius in meters, instead of a mass.
    #[serde(default)]
    pub r_g_m: Option<f64>,
    /// Units used in the entropy outputs.
    #[serde(default = "default_units")]
    pub units: UnitMode,
}

fn default_units() -> UnitMode {
    UnitMode::Dimensionless
}

impl BlackHoleSection {
    pub fn black_hole(&self) -> Result<BlackHole> {
        let mass_kg = match (self.mass, self.r_g_m) {
            (Some(m), None) => match self.mass_unit {
                MassUnit::Kg => m,
                MassUnit::Solar => m * constants::SOLAR_MASS,
            },
            (None, Some(r)) => r * constants::C * constants::C / (2.0 * constants::G),
            _ => unreachable!("validated"),
        };
        BlackHole::new(mass_kg, Constants::SI)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    pub omega: OneOrMany,
    #[serde(default = "one")]
    pub g: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSection {
    /// Atoms injected per unit dimensionless time.
    #[serde(default = "default_injection")]
    pub injection_rate: f64,
}

fn default_injection() -> f64 {
    1.0
}

impl Default for BeamSection {
    fn default() -> Self {
        BeamSection {
            injection_rate: default_injection(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let f = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + f * (self.max / self.min).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesSection {
    #[serde(default)]
    pub nu: Vec<f64>,
    /// Modes given by `xi = 2 pi nu`.
    #[serde(default)]
    pub xi: Vec<f64>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub ell: u32,
}

impl ModesSection {
    /// All mode frequencies, sorted and deduplicated.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.nu.clone();
        v.extend(self.xi.iter().map(|x| x / (2.0 * std::f64::consts::PI)));
        if let Some(g) = &self.grid {
            v.extend(g.values());
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolutionSection {
    pub enabled: bool,
    /// Fixed end time; overrides `relaxation_times`.
    pub t_final: Option<f64>,
    /// End time in units of the mode's relaxation time.
    pub relaxation_times: f64,
    pub rtol: f64,
    pub atol: f64,
    pub samples: usize,
    pub tail_tol: f64,
    /// Leakage rate as a fraction of the absorption rate.
    pub kappa_ratio: f64,
}

impl Default for EvolutionSection {
    fn default() -> Self {
        EvolutionSection {
            enabled: true,
            t_final: None,
            relaxation_times: 40.0,
            rtol: 1e-10,
            atol: 1e-14,
            samples: 20,
            tail_tol: 1e-10,
            kappa_ratio: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrajectorySection {
    pub r_start: f64,
    pub r_end: f64,
    pub tol: f64,
}

impl Default for TrajectorySection {
    fn default() -> Self {
        TrajectorySection {
            r_start: 50.0,
            r_end: 1.01,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputsSection {
    pub directory: String,
    pub formats: Vec<Format>,
    /// Significant digits in CSV; 17 means shortest round-trip.
    pub precision: usize,
}

impl Default for OutputsSection {
    fn default() -> Self {
        OutputsSection {
            directory: "out".into(),
            formats: vec![Format::Csv, Format::Json],
            precision: 17,
        }
    }
}

impl OutputsSection {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub black_hole: BlackHoleSection,
    pub atom: AtomSection,
    #[serde(default)]
    pub beam: BeamSection,
    pub modes: ModesSection,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub evolution: EvolutionSection,
    #[serde(default)]
    pub trajectory: TrajectorySection,
    #[serde(default)]
    pub outputs: OutputsSection,
}

fn invalid(path: &str, msg: impl Into<String>) -> Error {
    Error::ConfigValidation {
        path: path.into(),
        msg: msg.into(),
    }
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(path, format!("must be positive and finite, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bh = &self.black_hole;
        match (bh.mass, bh.r_g_m) {
            (Some(m), None) => positive("black_hole.mass", m)?,
            (None, Some(r)) => positive("black_hole.r_g_m", r)?,
            (Some(_), Some(_)) => {
                return Err(invalid("black_hole", "give either mass or r_g_m, not both"))
            }
            (None, None) => return Err(invalid("black_hole", "one of mass or r_g_m is required")),
        }
        let omegas = self.atom.omega.values();
        if omegas.is_empty() {
            return Err(invalid("atom.omega", "needs at least one value"));
        }
        for w in omegas {
            positive("atom.omega", w)?;
        }
        positive("atom.g", self.atom.g)?;
        positive("beam.injection_rate", self.beam.injection_rate)?;

        for v in &self.modes.nu {
            positive("modes.nu", *v)?;
        }
        for v in &self.modes.xi {
            positive("modes.xi", *v)?;
        }
        if let Some(g) = &self.modes.grid {
            positive("modes.grid.min", g.min)?;
            positive("modes.grid.max", g.max)?;
            if g.count == 0 {
                return Err(invalid("modes.grid.count", "must be at least 1"));
            }
            if g.max < g.min {
                return Err(invalid("modes.grid.max", "must not be below modes.grid.min"));
            }
        }
        if self.modes.frequencies().is_empty() {
            return Err(invalid("modes", "no modes given (use nu, xi or grid)"));
        }

        self.quadrature
            .validate()
            .map_err(|e| invalid("quadrature", strip_domain(e)))?;

        let ev = &self.evolution;
        if let Some(t) = ev.t_final {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(invalid("evolution.t_final", format!("must be non-negative, got {t}")));
            }
        }
        positive("evolution.relaxation_times", ev.relaxation_times)?;
        positive("evolution.rtol", ev.rtol)?;
        positive("evolution.atol", ev.atol)?;
        positive("evolution.tail_tol", ev.tail_tol)?;
        if ev.samples == 0 {
            return Err(invalid("evolution.samples", "must be at least 1"));
        }
        if !(ev.kappa_ratio >= 0.0 && ev.kappa_ratio.is_finite()) {
            return Err(invalid("evolution.kappa_ratio", "must be non-negative"));
        }

        let tr = &self.trajectory;
        if !(tr.r_end > 1.0) {
            return Err(invalid("trajectory.r_end", "must lie outside the horizon (> 1)"));
        }
        if !(tr.r_start >= tr.r_end && tr.r_start.is_finite()) {
            return Err(invalid("trajectory.r_start", "must be finite and not below r_end"));
        }
        positive("trajectory.tol", tr.tol)?;

        let out = &self.outputs;
        if out.directory.is_empty() {
            return Err(invalid("outputs.directory", "must not be empty"));
        }
        if out.formats.is_empty() {
            return Err(invalid("outputs.formats", "select at least one of csv, json"));
        }
        if !(1..=17).contains(&out.precision) {
            return Err(invalid("outputs.precision", "must be between 1 and 17"));
        }
        Ok(())
    }

    pub fn atoms(&self) -> Result<Vec<AtomSpec>> {
        let mut w = self.atom.omega.values();
        w.sort_by(f64::total_cmp);
        w.dedup();
        w.into_iter().map(AtomSpec::new).collect()
    }

    pub fn modes(&self) -> Result<Vec<ModeSpec>> {
        self.modes
            .frequencies()
            .into_iter()
            .map(|nu| ModeSpec::new(nu, self.modes.ell, self.atom.g))
            .collect()
    }

    pub fn black_hole(&self) -> Result<BlackHole> {
        self.black_hole.black_hole()
    }

    /// SHA-256 of the canonical JSON form of the resolved config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn strip_domain(e: Error) -> String {
    match e {
        Error::Domain { msg, .. } => msg,
        other => other.to_string(),
    }
}

/// Parse and validate a config document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_with(text, &[])
}

/// Parse, apply `key=value` overrides, then validate.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut doc: toml::Table =
        toml::from_str(text).map_err(|e| Error::ConfigSyntax(e.to_string().trim_end().into()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(toml::Value::Table(doc))
        .map_err(|e| Error::ConfigValidation {
            path: e.path().to_string(),
            msg: e.into_inner().to_string().trim_end().into(),
        })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path, overrides: &[String]) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_with(&text, overrides)
}

/// Set a dotted key. The value is read as a TOML value, falling back to a
/// bare string.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::ConfigSyntax(format!("override `{assignment}` is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(Error::ConfigSyntax(format!("bad override key `{key}`")));
    }
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    let (last, parents) = parts.split_last().expect("non-empty key");
    let mut table = doc;
    for (i, p) in parents.iter().enumerate() {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry.as_table_mut().ok_or_else(|| {
            Error::ConfigSyntax(format!(
                "override `{key}`: `{}` is not a table",
                parts[..=i].join(".")
            ))
        })?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}
