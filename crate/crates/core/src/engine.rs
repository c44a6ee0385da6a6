//! Agent state and the per-step update loop.
//!
//! A step runs these phases in order:
//!
//! 1. assign every agent to its nearest region and count heads,
//! 2. update lockdown flags,
//! 3. deliver vaccine, then medicine, if a delivery is due,
//! 4. move every agent, resolving boundary hits,
//! 5. rebuild the neighbor index,
//! 6. spread infection (applied after the whole sweep),
//! 7. roll deaths and cures,
//! 8. advance the step counter.
//!
//! All randomness comes from one [`RngStream`] consumed in that fixed order,
//! so a `(config, seed)` pair determines the whole trajectory.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::geometry::{nearest_region, reflect_velocity, segment_intersection, Vec2};
use crate::interventions::{
    allocate_doses, apply_doses, distribution_due, update_lockdowns, DoseKind, RegionStats,
};
use crate::neighborhood::NeighborIndex;
use crate::rng::RngStream;
use crate::scenario::{BoundarySpec, DistributionParams, ScenarioConfig};
use crate::stats::{take_snapshot, Summary, TimeSeries};

/// Boundary hits resolved per agent per step before the agent gives up and
/// stops where it is.
pub const MAX_BOUNDARY_RESOLUTIONS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HealthState {
    Uninfected,
    /// Infected during step `since_step`.
    Infected { since_step: u64 },
    Immune,
}

impl HealthState {
    pub fn is_infected(self) -> bool {
        matches!(self, HealthState::Infected { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Agent {
    pub id: u32,
    pub position: Vec2,
    /// Unit heading.
    pub direction: Vec2,
    /// Set from the spawn region's mobility factor and never changed.
    pub base_speed: f64,
    pub health: HealthState,
}

/// What happened to one agent during [`advance_agent`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Movement {
    /// Total length of the path walked this step.
    pub distance: f64,
    pub reflections: u32,
    pub crossings: u32,
    /// The resolution cap was hit and the agent stopped early.
    pub halted: bool,
}

/// Moves `agent` `speed` units along its heading.
///
/// Each time the remaining path meets a boundary, the nearest hit is
/// resolved with one uniform draw: below the boundary's impermeability the
/// agent reflects off it, otherwise it passes through. The boundary just
/// resolved is skipped when searching for the next hit.
pub fn advance_agent(
    agent: &mut Agent,
    boundaries: &[BoundarySpec],
    speed: f64,
    rng: &mut RngStream,
) -> Movement {
    let mut movement = Movement::default();
    let mut remaining = speed;
    let mut last_hit: Option<usize> = None;
    let mut resolutions = 0;

    while remaining > 0.0 {
        let start = agent.position;
        let end = start + agent.direction * remaining;
        let hit = boundaries
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != last_hit)
            .filter_map(|(i, b)| segment_intersection(start, end, b.p0, b.p1).map(|c| (i, c)))
            .min_by(|a, b| a.1.t.total_cmp(&b.1.t));

        let Some((i, crossing)) = hit else {
            agent.position = end;
            movement.distance += remaining;
            break;
        };
        if resolutions == MAX_BOUNDARY_RESOLUTIONS {
            movement.halted = true;
            break;
        }
        resolutions += 1;

        let travelled = remaining * crossing.t;
        movement.distance += travelled;
        remaining -= travelled;
        agent.position = crossing.point;
        last_hit = Some(i);

        let boundary = &boundaries[i];
        if rng.uniform() < boundary.impermeability {
            agent.direction = reflect_velocity(agent.direction, boundary.direction()).normalized();
            movement.reflections += 1;
        } else {
            movement.crossings += 1;
        }
    }
    movement
}

/// Live simulation: agents, lockdown flags, death ledger and the random
/// stream.
#[derive(Clone, Debug)]
pub struct SimulationState {
    step: u64,
    agents: Vec<Agent>,
    lockdown_flags: Vec<bool>,
    dead_per_region: Vec<u64>,
    rng: RngStream,
    config: Arc<ScenarioConfig>,
    initial_population: u64,
}

impl SimulationState {
    /// Spawns every region's population.
    ///
    /// Positions are uniform in the spawn circle (`r = R * sqrt(u)`, angle
    /// `2 * pi * u'`) and headings uniform on the circle, drawn in that order
    /// per agent. The first `infected` agents spawned in each region start
    /// infected at step 0.
    pub fn new(config: impl Into<Arc<ScenarioConfig>>, seed: u64) -> Self {
        let config = config.into();
        let mut rng = RngStream::new(seed);
        let mut agents = Vec::with_capacity(config.total_population() as usize);
        for region in &config.regions {
            for k in 0..region.population {
                let r = region.radius * rng.uniform().sqrt();
                let theta = TAU * rng.uniform();
                let heading = TAU * rng.uniform();
                agents.push(Agent {
                    id: agents.len() as u32,
                    position: region.center + Vec2::from_angle(theta) * r,
                    direction: Vec2::from_angle(heading),
                    base_speed: region.mobility_factor,
                    health: if k < region.infected {
                        HealthState::Infected { since_step: 0 }
                    } else {
                        HealthState::Uninfected
                    },
                });
            }
        }
        let regions = config.regions.len();
        Self {
            step: 0,
            initial_population: agents.len() as u64,
            agents,
            lockdown_flags: vec![false; regions],
            dead_per_region: vec![0; regions],
            rng,
            config,
        }
    }

    pub fn step_index(&self) -> u64 {
        self.step
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    /// Direct access for tests and custom drivers. Agents must stay in
    /// ascending id order.
    pub fn agents_mut(&mut self) -> &mut Vec<Agent> {
        &mut self.agents
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn lockdown_flags(&self) -> &[bool] {
        &self.lockdown_flags
    }

    pub fn dead_per_region(&self) -> &[u64] {
        &self.dead_per_region
    }

    pub fn total_dead(&self) -> u64 {
        self.dead_per_region.iter().sum()
    }

    pub fn initial_population(&self) -> u64 {
        self.initial_population
    }

    pub fn rng(&self) -> &RngStream {
        &self.rng
    }

    pub fn infected_count(&self) -> usize {
        self.agents.iter().filter(|a| a.health.is_infected()).count()
    }

    pub fn immune_count(&self) -> usize {
        self.agents
            .iter()
            .filter(|a| a.health == HealthState::Immune)
            .count()
    }

    /// Region index of every live agent, in agent order.
    pub fn membership(&self) -> Vec<usize> {
        self.agents
            .iter()
            .map(|a| nearest_region(a.position, &self.config.regions))
            .collect()
    }

    /// Head counts per region for the given membership.
    pub fn region_stats(&self, membership: &[usize]) -> Vec<RegionStats> {
        let mut stats: Vec<RegionStats> = (0..self.config.regions.len())
            .map(|i| RegionStats::new(i, 0, 0, 0))
            .collect();
        for (agent, &region) in self.agents.iter().zip(membership) {
            let s = &mut stats[region];
            match agent.health {
                HealthState::Uninfected => s.uninfected += 1,
                HealthState::Infected { .. } => s.infected += 1,
                HealthState::Immune => s.immune += 1,
            }
            s.total += 1;
        }
        stats
    }

    /// Marks uninfected agents near infected ones, then infects them all at
    /// once. Returns the ids of the newly infected.
    ///
    /// Uninfected agents are visited in id order; each rolls against its
    /// infected neighbors in id order until the first success.
    pub fn infection_sweep(&mut self, index: &NeighborIndex) -> Vec<u32> {
        let radius = self.config.disease.spread_radius;
        let p = self.config.disease.transmission_probability;
        let mut neighbors = Vec::new();
        let mut marked = Vec::new();
        for (i, agent) in self.agents.iter().enumerate() {
            if agent.health != HealthState::Uninfected {
                continue;
            }
            index.query_radius_into(agent.position, radius, &mut neighbors);
            for &j in &neighbors {
                if self.agents[j].health.is_infected() && self.rng.bernoulli(p) {
                    marked.push(i);
                    break;
                }
            }
        }
        let step = self.step;
        marked
            .into_iter()
            .map(|i| {
                let agent = &mut self.agents[i];
                agent.health = HealthState::Infected { since_step: step };
                agent.id
            })
            .collect()
    }

    /// Rolls death for infected agents on their check steps, then cures the
    /// survivors whose infection has run its course.
    ///
    /// An agent infected during step `s` has been sick for `step - s + 1`
    /// steps by the end of the current step; death is rolled whenever that
    /// count is a multiple of the kill-check interval, and the agent becomes
    /// immune once it reaches the cure period. Returns `(deaths, cures)`.
    pub fn progression_sweep(&mut self) -> (Vec<u32>, Vec<u32>) {
        let disease = &self.config.disease;
        let mut deaths = Vec::new();
        let mut cures = Vec::new();
        let step = self.step;
        for agent in &mut self.agents {
            let HealthState::Infected { since_step } = agent.health else {
                continue;
            };
            let sick_for = step + 1 - since_step;
            if sick_for.is_multiple_of(disease.kill_check_interval)
                && self.rng.bernoulli(disease.kill_probability)
            {
                deaths.push(agent.id);
                let region = nearest_region(agent.position, &self.config.regions);
                self.dead_per_region[region] += 1;
                continue;
            }
            if sick_for >= disease.cure_period {
                agent.health = HealthState::Immune;
                cures.push(agent.id);
            }
        }
        if !deaths.is_empty() {
            self.agents.retain(|a| deaths.binary_search(&a.id).is_err());
        }
        (deaths, cures)
    }

    /// Runs one full step.
    pub fn step(&mut self) {
        let membership = self.membership();
        let mut stats = self.region_stats(&membership);

        update_lockdowns(&stats, &mut self.lockdown_flags, self.config.lockdown.as_ref());

        let config = Arc::clone(&self.config);
        if self.deliver(&config.vaccine, DoseKind::Vaccine, &membership, &stats) {
            stats = self.region_stats(&membership);
        }
        self.deliver(&config.medicine, DoseKind::Medicine, &membership, &stats);

        let multiplier = config.lockdown.as_ref().map_or(1.0, |l| l.mobility_multiplier);
        for (agent, &region) in self.agents.iter_mut().zip(&membership) {
            let speed = if self.lockdown_flags[region] {
                agent.base_speed * multiplier
            } else {
                agent.base_speed
            };
            advance_agent(agent, &config.boundaries, speed, &mut self.rng);
        }

        let index = NeighborIndex::build(
            self.agents.iter().enumerate().map(|(i, a)| (i, a.position)),
            config.disease.spread_radius,
        );
        self.infection_sweep(&index);
        self.progression_sweep();
        self.step += 1;
    }

    fn deliver(
        &mut self,
        params: &DistributionParams,
        kind: DoseKind,
        membership: &[usize],
        stats: &[RegionStats],
    ) -> bool {
        if !distribution_due(self.step, params) {
            return false;
        }
        let alloc = allocate_doses(params.mechanism, params.quantity, stats, kind);
        let used = apply_doses(&mut self.agents, membership, &alloc, &mut self.rng);
        log::debug!("step {}: {kind:?} delivery used {used} of {}", self.step, params.quantity);
        true
    }
}

/// Time series and terminal summary of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub timeseries: TimeSeries,
    pub summary: Summary,
}

/// Steps a fresh simulation until nobody is infected or the step cap is
/// reached, snapshotting every step (including step 0).
///
/// Hitting the cap sets `summary.truncated`.
pub fn run(config: impl Into<Arc<ScenarioConfig>>, seed: u64) -> RunOutput {
    let mut state = SimulationState::new(config, seed);
    let mut timeseries = TimeSeries::new(
        state.config().regions.iter().map(|r| r.id.clone()).collect(),
    );
    timeseries.push(take_snapshot(&state));
    let max_steps = state.config().max_steps;
    while state.infected_count() > 0 && state.step_index() < max_steps {
        state.step();
        timeseries.push(take_snapshot(&state));
    }
    let summary = Summary {
        initial_population: state.initial_population(),
        simulation_period: state.step_index(),
        total_immune: state.immune_count() as u64,
        total_dead: state.total_dead(),
        truncated: state.infected_count() > 0,
    };
    if summary.truncated {
        log::info!("seed {seed}: stopped at the {max_steps}-step cap with infections remaining");
    }
    RunOutput {
        timeseries,
        summary,
    }
}
