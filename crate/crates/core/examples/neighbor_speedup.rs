// Grid index against an all-pairs scan for one full infection sweep.
//
// `cargo run --release --example neighbor_speedup`

use std::error::Error;
use std::time::{Duration, Instant};

use hexplace::engine::SimulationState;
use hexplace::neighborhood::{naive_radius_oracle, NeighborIndex};
use hexplace::scenario::{preset_scenario, Preset};

pub fn run_example(rounds: usize) -> Result<f64, Box<dyn Error>> {
    let mut state = SimulationState::new(preset_scenario(Preset::Baseline), 0);
    for _ in 0..50 {
        state.step();
    }
    let points: Vec<_> = state.agents().iter().enumerate().map(|(i, a)| (i, a.position)).collect();
    let r = state.config().disease.spread_radius;

    // Best of five trials each; timings on shared machines are noisy.
    let best = |f: &mut dyn FnMut() -> usize| -> (Duration, usize) {
        (0..5)
            .map(|_| {
                let start = Instant::now();
                let hits = f();
                (start.elapsed(), hits)
            })
            .min()
            .unwrap()
    };
    let (grid, grid_hits) = best(&mut || {
        let mut hits = 0;
        let mut buf = Vec::new();
        for _ in 0..rounds {
            let index = NeighborIndex::build(points.iter().copied(), r);
            for &(_, p) in &points {
                index.query_radius_into(p, r, &mut buf);
                hits += buf.len();
            }
        }
        hits
    });
    let (naive, naive_hits) = best(&mut || {
        let mut hits = 0;
        for _ in 0..rounds {
            for &(_, p) in &points {
                hits += naive_radius_oracle(&points, p, r).len();
            }
        }
        hits
    });

    assert_eq!(grid_hits, naive_hits);
    let speedup = naive.as_secs_f64() / grid.as_secs_f64();
    println!(
        "{} agents, {rounds} sweeps: grid {grid:.2?}, all pairs {naive:.2?}, speedup {speedup:.1}x",
        points.len()
    );
    Ok(speedup)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example(20)?;
    Ok(())
}
