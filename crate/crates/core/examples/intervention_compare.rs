// Ranks interventions by mean deaths over a shared set of seeds.
//
// `cargo run --release --example intervention_compare -- 8` uses 8 seeds.

use std::error::Error;

use hexplace::ensemble::{comparison_csv, default_seeds};
use hexplace::prelude::*;

pub fn run_example(replications: usize, jobs: usize) -> Result<String, Box<dyn Error>> {
    let presets = [
        Preset::Baseline,
        Preset::Lockdown,
        Preset::Vaccine(Mechanism::Equitable),
        Preset::Vaccine(Mechanism::MaximumUninfected),
        Preset::Medicine(Mechanism::MaximumInfection),
        Preset::Combined,
    ];
    let scenarios: Vec<(String, ScenarioConfig)> =
        presets.iter().map(|&p| (p.name(), preset_scenario(p))).collect();
    let ranked = compare(&scenarios, &default_seeds(replications), jobs);
    let table = comparison_csv(&ranked);
    print!("{table}");
    Ok(table)
}

fn main() -> Result<(), Box<dyn Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    run_example(n, jobs)?;
    Ok(())
}
