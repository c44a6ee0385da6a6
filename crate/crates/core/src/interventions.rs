//! Lockdown control and vaccine/medicine allocation.
//!
//! Lockdowns are per region with hysteresis: a region locks when its share
//! of infected residents rises above the start threshold and only unlocks
//! once it drops below the (lower) end threshold.
//!
//! Each distribution event delivers a fixed batch of doses. Vaccines go only
//! to uninfected agents and make them immune; medicine goes only to infected
//! agents and returns them to uninfected without immunity. Doses that cannot
//! be placed are discarded.

use crate::engine::{Agent, HealthState};
use crate::rng::RngStream;
use crate::scenario::{DistributionParams, LockdownParams, Mechanism};

/// Head counts of the live agents currently inside one region.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RegionStats {
    pub region_index: usize,
    pub uninfected: u64,
    pub infected: u64,
    pub immune: u64,
    pub total: u64,
}

impl RegionStats {
    pub fn new(region_index: usize, uninfected: u64, infected: u64, immune: u64) -> Self {
        Self {
            region_index,
            uninfected,
            infected,
            immune,
            total: uninfected + infected + immune,
        }
    }

    pub fn infected_ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.infected as f64 / self.total as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoseKind {
    Vaccine,
    Medicine,
}

impl DoseKind {
    /// Agents in `stats` who may receive this kind of dose.
    pub fn eligible(self, stats: &RegionStats) -> u64 {
        match self {
            DoseKind::Vaccine => stats.uninfected,
            DoseKind::Medicine => stats.infected,
        }
    }

    fn accepts(self, health: HealthState) -> bool {
        matches!(
            (self, health),
            (DoseKind::Vaccine, HealthState::Uninfected) | (DoseKind::Medicine, HealthState::Infected { .. })
        )
    }
}

/// Doses granted to each region, indexed like the scenario's regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoseAllocation {
    pub kind: DoseKind,
    pub per_region: Vec<u64>,
}

impl DoseAllocation {
    pub fn total(&self) -> u64 {
        self.per_region.iter().sum()
    }
}

/// Applies one round of hysteresis to `flags` (indexed by region).
///
/// With no lockdown configured every flag is cleared.
pub fn update_lockdowns(stats: &[RegionStats], flags: &mut [bool], params: Option<&LockdownParams>) {
    let Some(params) = params else {
        flags.iter_mut().for_each(|f| *f = false);
        return;
    };
    for s in stats {
        let ratio = s.infected_ratio();
        let flag = &mut flags[s.region_index];
        if *flag {
            if ratio < params.end_threshold {
                *flag = false;
            }
        } else if ratio > params.start_threshold {
            *flag = true;
        }
    }
}

/// Whether a delivery arrives at `step`.
pub fn distribution_due(step: u64, params: &DistributionParams) -> bool {
    params.quantity > 0
        && step >= params.start_time
        && (step - params.start_time).is_multiple_of(params.frequency)
}

/// Hamilton apportionment of `quantity` units in proportion to `weights`.
///
/// Each entry first gets the floor of its exact share; leftover units go one
/// each to the largest fractional remainders, ties to the lower index. All
/// arithmetic is exact. Zero total weight yields all zeros.
pub fn largest_remainder(quantity: u64, weights: &[u64]) -> Vec<u64> {
    let total: u128 = weights.iter().map(|&w| w as u128).sum();
    if total == 0 {
        return vec![0; weights.len()];
    }
    let q = quantity as u128;
    let mut shares: Vec<u64> = Vec::with_capacity(weights.len());
    let mut remainders: Vec<(u128, usize)> = Vec::with_capacity(weights.len());
    for (i, &w) in weights.iter().enumerate() {
        let exact = q * w as u128;
        shares.push((exact / total) as u64);
        remainders.push((exact % total, i));
    }
    let leftover = quantity - shares.iter().sum::<u64>();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in remainders.iter().take(leftover as usize) {
        shares[i] += 1;
    }
    shares
}

/// Splits a delivery of `quantity` doses between regions.
pub fn allocate_doses(
    mechanism: Mechanism,
    quantity: u64,
    stats: &[RegionStats],
    kind: DoseKind,
) -> DoseAllocation {
    let region_count = stats.iter().map(|s| s.region_index + 1).max().unwrap_or(0);
    let mut per_region = vec![0; region_count];
    let eligible: Vec<u64> = stats.iter().map(|s| kind.eligible(s)).collect();

    let granted = match mechanism {
        Mechanism::Equitable => equitable(quantity, &eligible, &eligible),
        Mechanism::MaximumInfection => greedy(quantity, stats, &eligible, |s| s.infected),
        Mechanism::MaximumUninfected => greedy(quantity, stats, &eligible, |s| s.uninfected),
        Mechanism::InfectedAndUninfected => {
            greedy(quantity, stats, &eligible, |s| s.infected + s.uninfected)
        }
    };
    for (s, g) in stats.iter().zip(granted) {
        per_region[s.region_index] = g;
    }
    DoseAllocation { kind, per_region }
}

// Proportional split, capped at eligibility, with one redistribution pass
// for the capped surplus.
fn equitable(quantity: u64, weights: &[u64], eligible: &[u64]) -> Vec<u64> {
    let mut granted = largest_remainder(quantity, weights);
    let surplus = cap(&mut granted, eligible);
    if surplus > 0 {
        let open: Vec<u64> = weights
            .iter()
            .zip(granted.iter().zip(eligible))
            .map(|(&w, (&g, &e))| if g < e { w } else { 0 })
            .collect();
        for (g, extra) in granted.iter_mut().zip(largest_remainder(surplus, &open)) {
            *g += extra;
        }
        cap(&mut granted, eligible);
    }
    granted
}

fn cap(granted: &mut [u64], eligible: &[u64]) -> u64 {
    let mut surplus = 0;
    for (g, &e) in granted.iter_mut().zip(eligible) {
        if *g > e {
            surplus += *g - e;
            *g = e;
        }
    }
    surplus
}

fn greedy(
    quantity: u64,
    stats: &[RegionStats],
    eligible: &[u64],
    priority: impl Fn(&RegionStats) -> u64,
) -> Vec<u64> {
    let mut order: Vec<usize> = (0..stats.len()).collect();
    order.sort_by(|&a, &b| {
        priority(&stats[b])
            .cmp(&priority(&stats[a]))
            .then(stats[a].region_index.cmp(&stats[b].region_index))
    });
    let mut granted = vec![0; stats.len()];
    let mut remaining = quantity;
    for i in order {
        let g = eligible[i].min(remaining);
        granted[i] = g;
        remaining -= g;
    }
    granted
}

/// Administers `alloc` to `agents`, where `membership[i]` is the region of
/// `agents[i]` and agents are in ascending id order.
///
/// Within each region (ascending) the recipients are a uniform sample
/// without replacement: a Fisher-Yates prefix shuffle of the region's
/// eligible agents in id order. Returns the number of doses used.
pub fn apply_doses(
    agents: &mut [Agent],
    membership: &[usize],
    alloc: &DoseAllocation,
    rng: &mut RngStream,
) -> u64 {
    let mut used = 0;
    for (region, &doses) in alloc.per_region.iter().enumerate() {
        if doses == 0 {
            continue;
        }
        let mut candidates: Vec<usize> = agents
            .iter()
            .enumerate()
            .filter(|&(i, a)| membership[i] == region && alloc.kind.accepts(a.health))
            .map(|(i, _)| i)
            .collect();
        let take = (doses as usize).min(candidates.len());
        for k in 0..take {
            let j = k + rng.index(candidates.len() - k);
            candidates.swap(k, j);
            let agent = &mut agents[candidates[k]];
            agent.health = match alloc.kind {
                DoseKind::Vaccine => HealthState::Immune,
                DoseKind::Medicine => HealthState::Uninfected,
            };
        }
        used += take as u64;
    }
    used
}
