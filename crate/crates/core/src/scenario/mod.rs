//! Experiment configuration: the JSON scenario schema, its validation, and
//! the built-in honeycomb generator.
//!
//! The wire format is a flat JSON object. Boundaries are `[x1, y1, x2, y2,
//! impermeability]` arrays, regions are objects, and disease, lockdown and
//! distribution parameters sit at the top level. Lockdown and distribution
//! fields are optional; leaving them out switches the feature off.

mod hex;
mod presets;

pub use hex::{
    generate_hex_scenario, HierarchyTable, ImpermeabilityTable, Settlement, Tier,
    DEFAULT_CELL_CIRCUMRADIUS, SPAWN_RADIUS_FACTOR,
};
pub use presets::{preset_scenario, Preset, CALIBRATED_KILL_CHECK_INTERVAL};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::Vec2;

pub const DEFAULT_MAX_STEPS: u64 = 100_000;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ScenarioError {
    #[error("malformed scenario JSON at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// A straight wall segment. `impermeability` is the chance an agent that
/// meets it bounces back: 1 is a solid wall, 0 is invisible.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySpec {
    pub p0: Vec2,
    pub p1: Vec2,
    pub impermeability: f64,
}

impl BoundarySpec {
    pub fn new(p0: Vec2, p1: Vec2, impermeability: f64) -> Self {
        Self {
            p0,
            p1,
            impermeability,
        }
    }

    pub fn direction(&self) -> Vec2 {
        self.p1 - self.p0
    }
}

/// A circular spawn area and the people generated inside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionSpec {
    pub id: String,
    pub population: u64,
    pub infected: u64,
    pub center: Vec2,
    pub radius: f64,
    /// Speed, in world units per step, of everyone spawned here.
    pub mobility_factor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiseaseParams {
    pub spread_radius: f64,
    pub transmission_probability: f64,
    /// Steps an agent stays infected before recovering.
    pub cure_period: u64,
    pub kill_probability: f64,
    /// Death is rolled every this many infected steps.
    pub kill_check_interval: u64,
}

impl Default for DiseaseParams {
    fn default() -> Self {
        Self {
            spread_radius: 5.0,
            transmission_probability: 0.7,
            cure_period: 250,
            kill_probability: 0.005,
            kill_check_interval: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LockdownParams {
    pub start_threshold: f64,
    pub end_threshold: f64,
    pub mobility_multiplier: f64,
}

impl Default for LockdownParams {
    fn default() -> Self {
        Self {
            start_threshold: 0.1,
            end_threshold: 0.02,
            mobility_multiplier: 0.1,
        }
    }
}

/// How a batch of doses is split between regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mechanism {
    /// Proportional to each region's eligible head count.
    Equitable,
    /// Regions with the most infected first.
    MaximumInfection,
    /// Regions with the most uninfected first.
    MaximumUninfected,
    /// Regions with the largest infected + uninfected total first.
    InfectedAndUninfected,
}

impl Mechanism {
    pub const ALL: [Mechanism; 4] = [
        Mechanism::Equitable,
        Mechanism::MaximumInfection,
        Mechanism::MaximumUninfected,
        Mechanism::InfectedAndUninfected,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mechanism::Equitable => "equitable",
            Mechanism::MaximumInfection => "maximumInfection",
            Mechanism::MaximumUninfected => "maximumUninfected",
            Mechanism::InfectedAndUninfected => "infectedAndUninfected",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mechanism {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mechanism::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mechanism {s:?}"))
    }
}

/// A periodic vaccine or medicine delivery. A quantity of zero turns it off.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionParams {
    pub start_time: u64,
    pub frequency: u64,
    pub quantity: u64,
    pub mechanism: Mechanism,
}

impl DistributionParams {
    pub fn disabled() -> Self {
        Self {
            start_time: 0,
            frequency: 1,
            quantity: 0,
            mechanism: Mechanism::Equitable,
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.quantity > 0
    }
}

impl Default for DistributionParams {
    fn default() -> Self {
        Self::disabled()
    }
}

/// A complete, validated experiment definition.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub boundaries: Vec<BoundarySpec>,
    pub regions: Vec<RegionSpec>,
    pub disease: DiseaseParams,
    /// Kept for schema compatibility; collisions are resolved exactly and do
    /// not use it.
    pub boundary_thickness: f64,
    /// `None` means regions never lock down.
    pub lockdown: Option<LockdownParams>,
    pub vaccine: DistributionParams,
    pub medicine: DistributionParams,
    pub max_steps: u64,
}

impl ScenarioConfig {
    pub fn total_population(&self) -> u64 {
        self.regions.iter().map(|r| r.population).sum()
    }

    pub fn total_infected(&self) -> u64 {
        self.regions.iter().map(|r| r.infected).sum()
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |msg: String| Err(ScenarioError::Invalid(msg));

        for (i, b) in self.boundaries.iter().enumerate() {
            if !b.p0.is_finite() || !b.p1.is_finite() {
                return invalid(format!("boundaries[{i}]: coordinates must be finite"));
            }
            if b.p0 == b.p1 {
                return invalid(format!("boundaries[{i}]: endpoints coincide"));
            }
            if !is_probability(b.impermeability) {
                return invalid(format!("boundaries[{i}].impermeability out of range"));
            }
        }

        if self.regions.is_empty() {
            return invalid("regions: at least one region is required".into());
        }
        let mut ids = HashSet::new();
        for (i, r) in self.regions.iter().enumerate() {
            if r.infected > r.population {
                return invalid(format!("regions[{i}]: infected exceeds population"));
            }
            if !(r.radius > 0.0 && r.radius.is_finite()) {
                return invalid(format!("regions[{i}].radius must be positive"));
            }
            if !(r.mobility_factor > 0.0 && r.mobility_factor.is_finite()) {
                return invalid(format!("regions[{i}].mobilityFactor must be positive"));
            }
            if !r.center.is_finite() {
                return invalid(format!("regions[{i}].center must be finite"));
            }
            if !ids.insert(r.id.as_str()) {
                return invalid(format!("regions[{i}].id {:?} is not unique", r.id));
            }
        }
        if self.total_population() == 0 {
            return invalid("regions: total population must be at least 1".into());
        }

        let d = &self.disease;
        if !(d.spread_radius > 0.0 && d.spread_radius.is_finite()) {
            return invalid("spreadRadius must be positive".into());
        }
        if !is_probability(d.transmission_probability) {
            return invalid("transmissionProbability out of range".into());
        }
        if !is_probability(d.kill_probability) {
            return invalid("killProbability out of range".into());
        }
        if d.cure_period < 1 {
            return invalid("curePeriod must be at least 1".into());
        }
        if d.kill_check_interval < 1 {
            return invalid("killCheckInterval must be at least 1".into());
        }
        if !(self.boundary_thickness >= 0.0 && self.boundary_thickness.is_finite()) {
            return invalid("boundaryThickness must be non-negative".into());
        }

        if let Some(l) = &self.lockdown {
            if !is_probability(l.start_threshold) {
                return invalid("lockdownStartThreshold out of range".into());
            }
            if !is_probability(l.end_threshold) {
                return invalid("lockdownEndThreshold out of range".into());
            }
            if l.end_threshold > l.start_threshold {
                return invalid("lockdownEndThreshold exceeds lockdownStartThreshold".into());
            }
            if !is_probability(l.mobility_multiplier) {
                return invalid("lockdownMobilityMultiplier out of range".into());
            }
        }

        for (name, dist) in [("vaccine", &self.vaccine), ("medicine", &self.medicine)] {
            if dist.frequency < 1 {
                return invalid(format!("{name}DistributionFrequency must be at least 1"));
            }
        }
        Ok(())
    }
}

fn is_probability(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

// Flat on-disk layout; converted to and from `ScenarioConfig`.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ScenarioFile {
    boundaries: Vec<[f64; 5]>,
    regions: Vec<RegionSpec>,
    #[serde(default)]
    boundary_thickness: f64,
    spread_radius: f64,
    cure_period: u64,
    kill_probability: f64,
    transmission_probability: f64,
    #[serde(default = "one")]
    kill_check_interval: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lockdown_start_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lockdown_end_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lockdown_mobility_multiplier: Option<f64>,
    #[serde(default)]
    vaccine_distribution_start_time: u64,
    #[serde(default = "one")]
    vaccine_distribution_frequency: u64,
    #[serde(default)]
    vaccine_distribution_quantity: u64,
    #[serde(default = "equitable")]
    vaccine_distribution_mechanism: String,
    #[serde(default)]
    medicine_distribution_start_time: u64,
    #[serde(default = "one")]
    medicine_distribution_frequency: u64,
    #[serde(default)]
    medicine_distribution_quantity: u64,
    #[serde(default = "equitable")]
    medicine_distribution_mechanism: String,
    #[serde(default = "default_max_steps")]
    max_steps: u64,
}

fn one() -> u64 {
    1
}

fn equitable() -> String {
    Mechanism::Equitable.as_str().to_owned()
}

fn default_max_steps() -> u64 {
    DEFAULT_MAX_STEPS
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;

    let lockdown = match (
        file.lockdown_start_threshold,
        file.lockdown_end_threshold,
        file.lockdown_mobility_multiplier,
    ) {
        (None, None, None) => None,
        (Some(start_threshold), Some(end_threshold), Some(mobility_multiplier)) => {
            Some(LockdownParams {
                start_threshold,
                end_threshold,
                mobility_multiplier,
            })
        }
        (start, end, _) => {
            let missing = if start.is_none() {
                "lockdownStartThreshold"
            } else if end.is_none() {
                "lockdownEndThreshold"
            } else {
                "lockdownMobilityMultiplier"
            };
            return Err(ScenarioError::Invalid(format!(
                "{missing} is required when any lockdown parameter is given"
            )));
        }
    };

    let mechanism = |field: &str, value: &str| {
        value
            .parse::<Mechanism>()
            .map_err(|e| ScenarioError::Invalid(format!("{field}: {e}")))
    };

    let config = ScenarioConfig {
        boundaries: file
            .boundaries
            .iter()
            .map(|&[x1, y1, x2, y2, imp]| BoundarySpec::new(Vec2::new(x1, y1), Vec2::new(x2, y2), imp))
            .collect(),
        regions: file.regions,
        disease: DiseaseParams {
            spread_radius: file.spread_radius,
            transmission_probability: file.transmission_probability,
            cure_period: file.cure_period,
            kill_probability: file.kill_probability,
            kill_check_interval: file.kill_check_interval,
        },
        boundary_thickness: file.boundary_thickness,
        lockdown,
        vaccine: DistributionParams {
            start_time: file.vaccine_distribution_start_time,
            frequency: file.vaccine_distribution_frequency,
            quantity: file.vaccine_distribution_quantity,
            mechanism: mechanism(
                "vaccineDistributionMechanism",
                &file.vaccine_distribution_mechanism,
            )?,
        },
        medicine: DistributionParams {
            start_time: file.medicine_distribution_start_time,
            frequency: file.medicine_distribution_frequency,
            quantity: file.medicine_distribution_quantity,
            mechanism: mechanism(
                "medicineDistributionMechanism",
                &file.medicine_distribution_mechanism,
            )?,
        },
        max_steps: file.max_steps,
    };
    config.validate()?;
    Ok(config)
}

/// Serializes a config to pretty-printed JSON that [`parse_scenario`] reads
/// back field for field.
pub fn write_scenario(config: &ScenarioConfig) -> String {
    let file = ScenarioFile {
        boundaries: config
            .boundaries
            .iter()
            .map(|b| [b.p0.x, b.p0.y, b.p1.x, b.p1.y, b.impermeability])
            .collect(),
        regions: config.regions.clone(),
        boundary_thickness: config.boundary_thickness,
        spread_radius: config.disease.spread_radius,
        cure_period: config.disease.cure_period,
        kill_probability: config.disease.kill_probability,
        transmission_probability: config.disease.transmission_probability,
        kill_check_interval: config.disease.kill_check_interval,
        lockdown_start_threshold: config.lockdown.as_ref().map(|l| l.start_threshold),
        lockdown_end_threshold: config.lockdown.as_ref().map(|l| l.end_threshold),
        lockdown_mobility_multiplier: config.lockdown.as_ref().map(|l| l.mobility_multiplier),
        vaccine_distribution_start_time: config.vaccine.start_time,
        vaccine_distribution_frequency: config.vaccine.frequency,
        vaccine_distribution_quantity: config.vaccine.quantity,
        vaccine_distribution_mechanism: config.vaccine.mechanism.as_str().to_owned(),
        medicine_distribution_start_time: config.medicine.start_time,
        medicine_distribution_frequency: config.medicine.frequency,
        medicine_distribution_quantity: config.medicine.quantity,
        medicine_distribution_mechanism: config.medicine.mechanism.as_str().to_owned(),
        max_steps: config.max_steps,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("scenario serialization cannot fail");
    text.push('\n');
    text
}

// serde_json reports 1-based line/column; convert to a 0-based byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}
