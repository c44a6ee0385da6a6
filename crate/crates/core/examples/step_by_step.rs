// Drives a simulation one step at a time and watches the lockdowns.

use std::error::Error;

use hexplace::prelude::*;

pub fn run_example(steps: u64) -> Result<(), Box<dyn Error>> {
    let config = preset_scenario(Preset::Lockdown);
    let ids: Vec<String> = config.regions.iter().map(|r| r.id.clone()).collect();
    let mut state = SimulationState::new(config, 5);
    let mut locked_before = vec![false; ids.len()];

    while state.step_index() < steps && state.infected_count() > 0 {
        state.step();
        for (k, (&now, was)) in state.lockdown_flags().iter().zip(locked_before.iter_mut()).enumerate() {
            if now != *was {
                println!("step {:>4}: {} {}", state.step_index(), ids[k], if now { "locks down" } else { "reopens" });
                *was = now;
            }
        }
    }
    println!(
        "after {} steps: {} infected, {} immune, {} dead",
        state.step_index(),
        state.infected_count(),
        state.immune_count(),
        state.total_dead()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let steps = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1000);
    run_example(steps)
}
