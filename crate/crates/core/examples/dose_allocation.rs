// Splitting one delivery between regions under each mechanism.

use std::error::Error;

use hexplace::interventions::{allocate_doses, largest_remainder, DoseKind, RegionStats};
use hexplace::scenario::Mechanism;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // region index, uninfected, infected, immune
    let regions = [
        RegionStats::new(0, 745, 5, 0),
        RegionStats::new(1, 95, 5, 0),
        RegionStats::new(2, 14, 1, 0),
        RegionStats::new(3, 40, 60, 0),
    ];
    for (kind, quantity) in [(DoseKind::Vaccine, 200), (DoseKind::Medicine, 40)] {
        println!("{kind:?}, {quantity} doses:");
        for mechanism in Mechanism::ALL {
            let alloc = allocate_doses(mechanism, quantity, &regions, kind);
            println!("  {:<22} {:?} (uses {})", mechanism.as_str(), alloc.per_region, alloc.total());
        }
    }
    println!("100 over [745, 95, 14]: {:?}", largest_remainder(100, &[745, 95, 14]));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
