//! Agent-based simulation of infectious disease spreading across a
//! honeycomb of settlements (a city ringed by towns and villages) separated
//! by partially permeable borders.
//!
//! People move in straight lines, bounce off or pass through borders at
//! random according to each border's impermeability, infect each other
//! within a spread radius, and either die or recover. Decision makers can
//! add per-region lockdowns and periodic vaccine or medicine deliveries
//! split by one of four allocation mechanisms.
//!
//! Every run is a pure function of its scenario and a 64-bit seed.
//!
//! ```
//! use hexplace::prelude::*;
//!
//! let mut config = preset_scenario(Preset::Baseline);
//! config.max_steps = 50;
//! let out = run(config, 42);
//! assert_eq!(out.summary.initial_population, 1530);
//! ```

pub mod cli;
pub mod engine;
pub mod ensemble;
pub mod geometry;
pub mod interventions;
pub mod neighborhood;
pub mod rng;
pub mod scenario;
pub mod stats;

pub mod prelude {
    pub use crate::engine::{advance_agent, run, Agent, HealthState, RunOutput, SimulationState};
    pub use crate::ensemble::{compare, run_ensemble, EnsembleResult};
    pub use crate::geometry::Vec2;
    pub use crate::interventions::{allocate_doses, DoseKind, RegionStats};
    pub use crate::scenario::{
        generate_hex_scenario, parse_scenario, preset_scenario, write_scenario, Mechanism, Preset,
        ScenarioConfig,
    };
    pub use crate::stats::{count_waves, Summary, TimeSeries, WaveParams};
}
