// A hand-written scenario: two rooms joined by a leaky wall.

use std::error::Error;

use hexplace::prelude::*;

const TWO_ROOMS: &str = r#"{
  "boundaries": [
    [0, 0, 200, 0, 1], [200, 0, 200, 100, 1], [200, 100, 0, 100, 1], [0, 100, 0, 0, 1],
    [100, 0, 100, 100, 0.9]
  ],
  "regions": [
    {"id": "west", "population": 150, "infected": 3, "center": [50, 50], "radius": 45, "mobilityFactor": 2},
    {"id": "east", "population": 150, "infected": 0, "center": [150, 50], "radius": 45, "mobilityFactor": 2}
  ],
  "boundaryThickness": 1,
  "spreadRadius": 3,
  "curePeriod": 120,
  "killProbability": 0.002,
  "transmissionProbability": 0.5,
  "lockdownStartThreshold": 0.2,
  "lockdownEndThreshold": 0.05,
  "lockdownMobilityMultiplier": 0.2,
  "maxSteps": 5000
}"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = parse_scenario(TWO_ROOMS)?;
    let out = run(config, 1);
    let ids = &out.timeseries.region_ids;

    // When did each room see its first case?
    for (k, id) in ids.iter().enumerate() {
        let first = out
            .timeseries
            .snapshots
            .iter()
            .find(|s| s.rows[k].infected + s.rows[k].immune + s.rows[k].dead > 0)
            .map(|s| s.step);
        println!("{id}: first case at step {first:?}");
    }
    let s = &out.summary;
    println!("period {}, immune {}, dead {}, truncated {}", s.simulation_period, s.total_immune, s.total_dead, s.truncated);

    // Validation errors name the field.
    let broken = TWO_ROOMS.replace("\"infected\": 3", "\"infected\": 300");
    match parse_scenario(&broken) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
