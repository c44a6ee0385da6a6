use hexplace::engine::{advance_agent, run, Agent, HealthState, SimulationState};
use hexplace::geometry::Vec2;
use hexplace::rng::RngStream;
use hexplace::scenario::{parse_scenario, preset_scenario, BoundarySpec, Mechanism, Preset};
use proptest::prelude::*;

fn capped(preset: Preset, steps: u64) -> hexplace::scenario::ScenarioConfig {
    let mut c = preset_scenario(preset);
    c.max_steps = steps;
    c
}

#[test]
fn every_preset_conserves_people() {
    for preset in Preset::all() {
        let out = run(capped(preset, 400), 11);
        for snap in &out.timeseries.snapshots {
            assert_eq!(snap.aggregate.total(), 1530, "{} step {}", preset.name(), snap.step);
            let rows: u64 = snap.rows.iter().map(|r| r.total()).sum();
            assert_eq!(rows, 1530);
        }
    }
}

#[test]
fn deaths_never_decrease() {
    let out = run(capped(Preset::Combined, 800), 4);
    for pair in out.timeseries.snapshots.windows(2) {
        assert!(pair[1].aggregate.dead >= pair[0].aggregate.dead);
        for (a, b) in pair[0].rows.iter().zip(&pair[1].rows) {
            assert!(b.dead >= a.dead);
        }
        assert_eq!(pair[1].step, pair[0].step + 1);
    }
}

#[test]
fn immunity_only_grows_without_medicine() {
    // Vaccines and recovery both add immunity; nothing takes it away.
    let out = run(capped(Preset::Vaccine(Mechanism::Equitable), 700), 8);
    for pair in out.timeseries.snapshots.windows(2) {
        assert!(pair[1].aggregate.immune >= pair[0].aggregate.immune);
    }
}

#[test]
fn runs_are_bit_identical_per_seed() {
    let config = capped(Preset::Combined, 500);
    let a = run(config.clone(), 77);
    let b = run(config.clone(), 77);
    assert_eq!(a, b);
    assert_ne!(a.timeseries, run(config, 78).timeseries);
}

#[test]
fn summary_matches_final_snapshot() {
    let out = run(preset_scenario(Preset::Baseline), 2);
    let last = out.timeseries.snapshots.last().unwrap();
    assert_eq!(last.step, out.summary.simulation_period);
    assert_eq!(last.aggregate.immune, out.summary.total_immune);
    assert_eq!(last.aggregate.dead, out.summary.total_dead);
    assert_eq!(last.aggregate.infected, 0);
    assert!(!out.summary.truncated);
    assert_eq!(out.timeseries.snapshots.len() as u64, out.summary.simulation_period + 1);
}

#[test]
fn step_cap_truncates() {
    let out = run(capped(Preset::Baseline, 30), 2);
    assert!(out.summary.truncated);
    assert_eq!(out.summary.simulation_period, 30);
    assert_eq!(out.timeseries.snapshots.len(), 31);
}

#[test]
fn no_one_leaves_the_honeycomb() {
    let config = capped(Preset::Lockdown, 600);
    let reach = config
        .boundaries
        .iter()
        .flat_map(|b| [b.p0.length(), b.p1.length()])
        .fold(0.0, f64::max);
    let mut state = SimulationState::new(config, 9);
    for _ in 0..600 {
        state.step();
        for a in state.agents() {
            assert!(a.position.length() <= reach + 1e-6, "agent {} at {:?}", a.id, a.position);
        }
    }
}

#[test]
fn base_speed_never_changes() {
    let mut state = SimulationState::new(capped(Preset::Combined, 400), 1);
    let speeds: Vec<(u32, f64)> = state.agents().iter().map(|a| (a.id, a.base_speed)).collect();
    for _ in 0..400 {
        state.step();
    }
    for a in state.agents() {
        let (_, s) = speeds[a.id as usize];
        assert_eq!(a.base_speed, s);
        assert!((a.direction.length() - 1.0).abs() < 1e-9);
    }
}

fn hexagon(radius: f64, impermeability: f64) -> Vec<BoundarySpec> {
    let corner = |k: usize| Vec2::from_angle((60.0 * k as f64 + 30.0).to_radians()) * radius;
    (0..6).map(|k| BoundarySpec::new(corner(k), corner(k + 1), impermeability)).collect()
}

#[test]
fn sealed_polygon_holds_over_many_steps() {
    let walls = hexagon(20.0, 1.0);
    let inradius = 20.0 * 3f64.sqrt() / 2.0;
    let mut rng = RngStream::new(31);
    let mut agents: Vec<Agent> = (0..20)
        .map(|i| Agent {
            id: i,
            position: Vec2::from_angle(rng.uniform() * std::f64::consts::TAU) * (rng.uniform() * 15.0),
            direction: Vec2::from_angle(rng.uniform() * std::f64::consts::TAU),
            base_speed: 0.5 + 4.0 * rng.uniform(),
            health: HealthState::Uninfected,
        })
        .collect();
    for _ in 0..1000 {
        for a in &mut agents {
            let speed = a.base_speed;
            let m = advance_agent(a, &walls, speed, &mut rng);
            assert_eq!(m.crossings, 0);
            // Every side is at the inradius, so the agent is inside the
            // hexagon iff it is inside all six half-planes.
            for k in 0..6 {
                let normal = Vec2::from_angle((60.0 * k as f64 + 60.0).to_radians());
                assert!(a.position.dot(normal) <= inradius + 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn displacement_equals_speed(
        x in -5.0..5.0f64, y in -5.0..5.0f64,
        heading in 0.0..std::f64::consts::TAU,
        speed in 0.0..30.0f64,
        imp in 0.0..=1.0f64,
        seed in any::<u64>(),
    ) {
        let walls = hexagon(12.0, imp);
        let mut a = Agent {
            id: 0,
            position: Vec2::new(x, y),
            direction: Vec2::from_angle(heading),
            base_speed: speed,
            health: HealthState::Uninfected,
        };
        let m = advance_agent(&mut a, &walls, speed, &mut RngStream::new(seed));
        if !m.halted {
            prop_assert!((m.distance - speed).abs() < 1e-9 * speed.max(1.0));
        }
        prop_assert!(m.distance <= speed + 1e-9);
    }
}

#[test]
fn hand_written_scenario_runs_to_completion() {
    let text = r#"{"boundaries":[[0,0,40,0,1],[40,0,40,40,1],[40,40,0,40,1],[0,40,0,0,1]],
        "regions":[{"id":"room","population":60,"infected":2,"center":[20,20],"radius":15,"mobilityFactor":1.5}],
        "spreadRadius":5,"curePeriod":40,"killProbability":0.001,"transmissionProbability":0.7,"boundaryThickness":1}"#;
    let out = run(parse_scenario(text).unwrap(), 0);
    let s = out.summary;
    assert!(!s.truncated);
    assert_eq!(s.initial_population, 60);
    assert!(s.total_immune + s.total_dead >= 2);
}
