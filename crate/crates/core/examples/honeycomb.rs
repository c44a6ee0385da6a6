// Builds honeycomb scenarios and looks at what comes out.

use std::collections::BTreeMap;
use std::error::Error;

use hexplace::scenario::{
    generate_hex_scenario, write_scenario, HierarchyTable, ImpermeabilityTable, Settlement,
    DEFAULT_CELL_CIRCUMRADIUS,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = generate_hex_scenario(
        DEFAULT_CELL_CIRCUMRADIUS,
        &HierarchyTable::default(),
        &ImpermeabilityTable::default(),
    )?;
    println!(
        "{} cells, {} people ({} infected), {} border segments",
        grid.regions.len(),
        grid.total_population(),
        grid.total_infected(),
        grid.boundaries.len()
    );
    for r in &grid.regions {
        println!(
            "  {:<10} center ({:>8.1}, {:>8.1})  pop {:>3}  infected {}  speed {}",
            r.id, r.center.x, r.center.y, r.population, r.infected, r.mobility_factor
        );
    }

    let mut by_value: BTreeMap<String, usize> = BTreeMap::new();
    for b in &grid.boundaries {
        *by_value.entry(format!("{:.1}", b.impermeability)).or_default() += 1;
    }
    println!("segments by impermeability: {by_value:?}");

    // Open borders everywhere except between villages.
    let leaky = ImpermeabilityTable::empty()
        .with(Settlement::City, Settlement::Village, 0.0)
        .with(Settlement::Town, Settlement::Village, 0.0);
    let mut tiers = HierarchyTable::default();
    tiers.city.population = 2000;
    tiers.city.infected = 20;
    let custom = generate_hex_scenario(100.0, &tiers, &leaky)?;
    let open = custom.boundaries.iter().filter(|b| b.impermeability == 0.0).count();
    println!(
        "custom grid: {} people, {open} of {} segments open",
        custom.total_population(),
        custom.boundaries.len()
    );

    let json = write_scenario(&custom);
    println!("custom grid as JSON: {} bytes", json.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
