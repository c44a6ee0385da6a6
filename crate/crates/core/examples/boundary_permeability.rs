// How often agents bounce off walls of different impermeability.

use std::error::Error;
use std::f64::consts::PI;

use hexplace::engine::{advance_agent, Agent, HealthState};
use hexplace::geometry::Vec2;
use hexplace::rng::RngStream;
use hexplace::scenario::BoundarySpec;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut rng = RngStream::new(2024);
    for impermeability in [0.0, 0.3, 0.7, 0.8, 1.0] {
        let wall = [BoundarySpec::new(Vec2::new(1.0, -50.0), Vec2::new(1.0, 50.0), impermeability)];
        let (mut bounced, mut met) = (0, 0);
        for _ in 0..5000 {
            let heading = Vec2::from_angle((rng.uniform() - 0.5) * 0.6 * PI);
            let mut agent = Agent {
                id: 0,
                position: Vec2::new(0.0, 0.0),
                direction: heading,
                base_speed: 3.0,
                health: HealthState::Uninfected,
            };
            let m = advance_agent(&mut agent, &wall, 3.0, &mut rng);
            bounced += m.reflections;
            met += m.reflections + m.crossings;
            debug_assert!((m.distance - 3.0).abs() < 1e-9);
        }
        println!("impermeability {impermeability:.1}: bounced {bounced} of {met} ({:.3})", bounced as f64 / met as f64);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
