// Lockdowns that lift and return produce repeated waves.

use std::error::Error;

use hexplace::prelude::*;

pub fn run_example(seeds: &[u64]) -> Result<(), Box<dyn Error>> {
    for (name, preset) in [("baseline", Preset::Baseline), ("lockdown", Preset::Lockdown)] {
        for &seed in seeds {
            let out = run(preset_scenario(preset), seed);
            let wp = WaveParams::for_population(out.summary.initial_population);
            let waves = count_waves(&out.timeseries.infected_series(), wp.smooth_window, wp.min_prominence);
            println!(
                "{name:<8} seed {seed}: {} waves peaking at {:?}, period {}, dead {}",
                waves.wave_count, waves.peak_steps, out.summary.simulation_period, out.summary.total_dead
            );
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example(&[0, 1, 2])
}
