//! Nineteen-cell honeycomb of settlements.
//!
//! Cells use pointy-top axial coordinates. The center cell is the city, the
//! six cells around it are villages, and the outer ring alternates towns (at
//! its six corners) with villages (along its six edges). Each cell gets an
//! inscribed circular spawn region and each distinct hex edge becomes one
//! boundary segment.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::{
    BoundarySpec, DiseaseParams, DistributionParams, RegionSpec, ScenarioConfig, ScenarioError,
    DEFAULT_MAX_STEPS,
};
use crate::geometry::Vec2;

pub const DEFAULT_CELL_CIRCUMRADIUS: f64 = 300.0;

/// Spawn circle radius as a fraction of the cell circumradius: the inradius
/// (`sqrt(3)/2`) shrunk by 5% so nobody spawns on an edge.
pub const SPAWN_RADIUS_FACTOR: f64 = 0.866_025_403_784_438_6 * 0.95;

const DEFAULT_BOUNDARY_THICKNESS: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Settlement {
    City,
    Town,
    Village,
}

impl Settlement {
    fn label(self) -> &'static str {
        match self {
            Settlement::City => "city",
            Settlement::Town => "town",
            Settlement::Village => "village",
        }
    }
}

/// Initial conditions for one settlement tier.
#[derive(Clone, Debug, PartialEq)]
pub struct Tier {
    pub population: u64,
    pub infected: u64,
    pub mobility_factor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyTable {
    pub city: Tier,
    pub town: Tier,
    pub village: Tier,
}

impl HierarchyTable {
    pub fn tier(&self, s: Settlement) -> &Tier {
        match s {
            Settlement::City => &self.city,
            Settlement::Town => &self.town,
            Settlement::Village => &self.village,
        }
    }
}

impl Default for HierarchyTable {
    fn default() -> Self {
        Self {
            city: Tier {
                population: 750,
                infected: 5,
                mobility_factor: 1.0,
            },
            town: Tier {
                population: 100,
                infected: 5,
                mobility_factor: 3.0,
            },
            village: Tier {
                population: 15,
                infected: 1,
                mobility_factor: 5.0,
            },
        }
    }
}

/// Impermeability of the border between two settlement tiers. Pairs are
/// unordered; pairs not listed are solid walls.
#[derive(Clone, Debug, PartialEq)]
pub struct ImpermeabilityTable(BTreeMap<(Settlement, Settlement), f64>);

impl ImpermeabilityTable {
    pub fn empty() -> Self {
        Self(BTreeMap::new())
    }

    pub fn with(mut self, a: Settlement, b: Settlement, impermeability: f64) -> Self {
        self.0.insert(ordered(a, b), impermeability);
        self
    }

    pub fn get(&self, a: Settlement, b: Settlement) -> f64 {
        self.0.get(&ordered(a, b)).copied().unwrap_or(1.0)
    }
}

impl Default for ImpermeabilityTable {
    fn default() -> Self {
        Self::empty()
            .with(Settlement::City, Settlement::Village, 0.7)
            .with(Settlement::Town, Settlement::Village, 0.8)
            .with(Settlement::Village, Settlement::Village, 1.0)
    }
}

fn ordered(a: Settlement, b: Settlement) -> (Settlement, Settlement) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

// Neighbor k sits at angle 60k degrees from the cell center.
const DIRECTIONS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cell {
    q: i32,
    r: i32,
}

impl Cell {
    fn offset(self, (dq, dr): (i32, i32)) -> Cell {
        Cell {
            q: self.q + dq,
            r: self.r + dr,
        }
    }

    fn center(self, circumradius: f64) -> Vec2 {
        let q = self.q as f64;
        let r = self.r as f64;
        Vec2::new(
            circumradius * 3f64.sqrt() * (q + r / 2.0),
            circumradius * 1.5 * r,
        )
    }
}

/// Center, ring 1, then ring 2 alternating corner and edge cells.
fn layout() -> Vec<(Cell, Settlement)> {
    let origin = Cell { q: 0, r: 0 };
    let mut cells = vec![(origin, Settlement::City)];
    for d in DIRECTIONS {
        cells.push((origin.offset(d), Settlement::Village));
    }
    for k in 0..6 {
        let (dq, dr) = DIRECTIONS[k];
        let corner = origin.offset((2 * dq, 2 * dr));
        cells.push((corner, Settlement::Town));
        cells.push((corner.offset(DIRECTIONS[(k + 2) % 6]), Settlement::Village));
    }
    cells
}

/// Builds the honeycomb scenario with the default disease parameters and no
/// interventions.
pub fn generate_hex_scenario(
    cell_circumradius: f64,
    hierarchy: &HierarchyTable,
    impermeability: &ImpermeabilityTable,
) -> Result<ScenarioConfig, ScenarioError> {
    if !(cell_circumradius > 0.0 && cell_circumradius.is_finite()) {
        return Err(ScenarioError::Invalid(
            "cellCircumradius must be positive".into(),
        ));
    }
    let cells = layout();
    let index_of = |c: Cell| cells.iter().position(|(other, _)| *other == c);

    let mut counters: BTreeMap<Settlement, usize> = BTreeMap::new();
    let regions = cells
        .iter()
        .map(|&(cell, kind)| {
            let n = counters.entry(kind).or_default();
            *n += 1;
            let id = match kind {
                Settlement::City if *n == 1 => "city".to_owned(),
                _ => format!("{}{}", kind.label(), n),
            };
            let tier = hierarchy.tier(kind);
            RegionSpec {
                id,
                population: tier.population,
                infected: tier.infected,
                center: cell.center(cell_circumradius),
                radius: cell_circumradius * SPAWN_RADIUS_FACTOR,
                mobility_factor: tier.mobility_factor,
            }
        })
        .collect();

    let mut boundaries = Vec::new();
    for (i, &(cell, kind)) in cells.iter().enumerate() {
        let center = cell.center(cell_circumradius);
        for (k, &d) in DIRECTIONS.iter().enumerate() {
            let imp = match index_of(cell.offset(d)) {
                None => 1.0,
                Some(j) if j > i => impermeability.get(kind, cells[j].1),
                Some(_) => continue,
            };
            let mid = k as f64 * PI / 3.0;
            let p0 = center + Vec2::from_angle(mid - PI / 6.0) * cell_circumradius;
            let p1 = center + Vec2::from_angle(mid + PI / 6.0) * cell_circumradius;
            boundaries.push(BoundarySpec::new(p0, p1, imp));
        }
    }

    let config = ScenarioConfig {
        boundaries,
        regions,
        disease: DiseaseParams::default(),
        boundary_thickness: DEFAULT_BOUNDARY_THICKNESS,
        lockdown: None,
        vaccine: DistributionParams::disabled(),
        medicine: DistributionParams::disabled(),
        max_steps: DEFAULT_MAX_STEPS,
    };
    config.validate()?;
    Ok(config)
}
