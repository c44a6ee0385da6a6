// The quick examples double as smoke tests.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(honeycomb, "honeycomb.rs");
example!(custom_scenario, "custom_scenario.rs");
example!(boundary_permeability, "boundary_permeability.rs");
example!(dose_allocation, "dose_allocation.rs");
example!(step_by_step, "step_by_step.rs");
example!(baseline_run, "baseline_run.rs");
example!(neighbor_speedup, "neighbor_speedup.rs");

#[test]
fn honeycomb_example_runs() {
    honeycomb::run_example().unwrap();
}

#[test]
fn custom_scenario_example_runs() {
    custom_scenario::run_example().unwrap();
}

#[test]
fn boundary_permeability_example_runs() {
    boundary_permeability::run_example().unwrap();
}

#[test]
fn dose_allocation_example_runs() {
    dose_allocation::run_example().unwrap();
}

#[test]
fn step_by_step_example_runs() {
    step_by_step::run_example(200).unwrap();
}

#[test]
fn baseline_example_is_seed_stable() {
    let a = baseline_run::run_example(3).unwrap();
    assert_eq!(a, baseline_run::run_example(3).unwrap());
    assert_eq!(a.initial_population, 1530);
    assert!(!a.truncated);
}

#[test]
fn neighbor_speedup_example_agrees_with_the_scan() {
    // Timing is not checked here; the example asserts equal hit counts.
    neighbor_speedup::run_example(1).unwrap();
}
