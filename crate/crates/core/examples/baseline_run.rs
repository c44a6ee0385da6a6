// One unmitigated outbreak on the default honeycomb.
//
// `cargo run --release --example baseline_run -- 7` runs seed 7.

use std::error::Error;

use hexplace::prelude::*;
use hexplace::stats::write_timeseries;

pub fn run_example(seed: u64) -> Result<Summary, Box<dyn Error>> {
    let out = run(preset_scenario(Preset::Baseline), seed);
    let s = &out.summary;
    println!(
        "seed {seed}: population {}, period {}, immune {}, dead {}",
        s.initial_population, s.simulation_period, s.total_immune, s.total_dead
    );

    // Every 200th aggregate row.
    for snap in out.timeseries.snapshots.iter().step_by(200) {
        let a = snap.aggregate;
        println!(
            "  step {:>5}  uninfected {:>4}  infected {:>4}  immune {:>4}  dead {:>4}",
            snap.step, a.uninfected, a.infected, a.immune, a.dead
        );
    }

    let mut csv = Vec::new();
    write_timeseries(&out.timeseries, &mut csv)?;
    println!("timeseries csv: {} bytes, {} lines", csv.len(), csv.split(|&b| b == b'\n').count() - 1);
    Ok(out.summary)
}

fn main() -> Result<(), Box<dyn Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(42);
    run_example(seed)?;
    Ok(())
}
