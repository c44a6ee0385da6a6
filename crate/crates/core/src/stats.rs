//! Per-step region counts, their CSV and JSON forms, and wave detection.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::engine::{HealthState, SimulationState};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RegionCounts {
    pub uninfected: u64,
    pub infected: u64,
    pub immune: u64,
    /// Cumulative deaths attributed to the region.
    pub dead: u64,
}

impl RegionCounts {
    pub fn total(&self) -> u64 {
        self.uninfected + self.infected + self.immune + self.dead
    }

    fn add(&mut self, other: &RegionCounts) {
        self.uninfected += other.uninfected;
        self.infected += other.infected;
        self.immune += other.immune;
        self.dead += other.dead;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSnapshot {
    pub step: u64,
    pub rows: Vec<RegionCounts>,
    pub aggregate: RegionCounts,
}

impl RegionSnapshot {
    pub fn from_rows(step: u64, rows: Vec<RegionCounts>) -> Self {
        let mut aggregate = RegionCounts::default();
        rows.iter().for_each(|r| aggregate.add(r));
        Self {
            step,
            rows,
            aggregate,
        }
    }
}

/// Snapshots of one run, with the region ids they are keyed by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeSeries {
    pub region_ids: Vec<String>,
    pub snapshots: Vec<RegionSnapshot>,
}

impl TimeSeries {
    pub fn new(region_ids: Vec<String>) -> Self {
        Self {
            region_ids,
            snapshots: Vec::new(),
        }
    }

    pub fn push(&mut self, snapshot: RegionSnapshot) {
        self.snapshots.push(snapshot);
    }

    /// Aggregate infected count per step.
    pub fn infected_series(&self) -> Vec<u64> {
        self.snapshots.iter().map(|s| s.aggregate.infected).collect()
    }
}

/// Terminal report of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub initial_population: u64,
    pub simulation_period: u64,
    pub total_immune: u64,
    pub total_dead: u64,
    pub truncated: bool,
}

/// Counts live agents by nearest region and attaches each region's death
/// ledger.
pub fn take_snapshot(state: &SimulationState) -> RegionSnapshot {
    let mut rows: Vec<RegionCounts> = state
        .dead_per_region()
        .iter()
        .map(|&dead| RegionCounts {
            dead,
            ..RegionCounts::default()
        })
        .collect();
    for (agent, region) in state.agents().iter().zip(state.membership()) {
        let row = &mut rows[region];
        match agent.health {
            HealthState::Uninfected => row.uninfected += 1,
            HealthState::Infected { .. } => row.infected += 1,
            HealthState::Immune => row.immune += 1,
        }
    }
    RegionSnapshot::from_rows(state.step_index(), rows)
}

pub const TIMESERIES_HEADER: &str = "step,region_id,uninfected,infected,immune,dead";
pub const AGGREGATE_ID: &str = "ALL";

/// Writes one CSV row per region per step, followed by the `ALL` row for
/// that step.
pub fn write_timeseries<W: Write>(series: &TimeSeries, sink: W) -> io::Result<()> {
    let mut out = csv_writer(sink);
    out.write_record(TIMESERIES_HEADER.split(','))
        .map_err(into_io)?;
    for snap in &series.snapshots {
        let rows = series
            .region_ids
            .iter()
            .map(String::as_str)
            .zip(&snap.rows)
            .chain(std::iter::once((AGGREGATE_ID, &snap.aggregate)));
        for (id, c) in rows {
            out.write_record([
                snap.step.to_string().as_str(),
                id,
                &c.uninfected.to_string(),
                &c.infected.to_string(),
                &c.immune.to_string(),
                &c.dead.to_string(),
            ])
            .map_err(into_io)?;
        }
    }
    out.flush()
}

fn csv_writer<W: Write>(sink: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink)
}

fn into_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

pub fn write_summary<W: Write>(summary: &Summary, mut sink: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut sink, summary)?;
    sink.write_all(b"\n")?;
    sink.flush()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveReport {
    pub wave_count: usize,
    pub peak_steps: Vec<u64>,
}

/// Defaults for [`count_waves`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveParams {
    pub smooth_window: usize,
    pub min_prominence: f64,
}

impl WaveParams {
    /// A 51-step window and a prominence of 2% of the initial population.
    pub fn for_population(initial_population: u64) -> Self {
        Self {
            smooth_window: 51,
            min_prominence: 0.02 * initial_population as f64,
        }
    }
}

/// Counts epidemic waves in an infected-count series indexed by step.
///
/// The series is smoothed with a centered moving average (`smooth_window`
/// samples, truncated at the ends). A wave is a peak that rises at least
/// `min_prominence` above the lowest point since the previous wave and is
/// followed by a fall of at least `min_prominence` before the next rise.
pub fn count_waves(series: &[u64], smooth_window: usize, min_prominence: f64) -> WaveReport {
    assert!(smooth_window >= 1, "smoothing window must be at least 1");
    let smooth = moving_average(series, smooth_window);

    let mut peaks = Vec::new();
    let mut rising = true;
    let (mut trough, mut peak, mut peak_at) = match smooth.first() {
        Some(&v) => (v, v, 0),
        None => return WaveReport { wave_count: 0, peak_steps: peaks },
    };
    for (i, &x) in smooth.iter().enumerate() {
        if rising {
            if x > peak {
                peak = x;
                peak_at = i;
            } else if peak - trough >= min_prominence && peak - x >= min_prominence {
                peaks.push(peak_at as u64);
                rising = false;
                trough = x;
            } else if x < trough {
                trough = x;
                peak = x;
                peak_at = i;
            }
        } else if x < trough {
            trough = x;
        } else if x - trough >= min_prominence {
            rising = true;
            peak = x;
            peak_at = i;
        }
    }
    WaveReport {
        wave_count: peaks.len(),
        peak_steps: peaks,
    }
}

fn moving_average(series: &[u64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let mut prefix = Vec::with_capacity(series.len() + 1);
    prefix.push(0u64);
    for &v in series {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..series.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + window - half).min(series.len());
            (prefix[hi] - prefix[lo]) as f64 / (hi - lo) as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::SimulationState;
    use crate::scenario::{preset_scenario, Preset};
    use proptest::prelude::*;

    fn counts(u: u64, i: u64, m: u64, d: u64) -> RegionCounts {
        RegionCounts {
            uninfected: u,
            infected: i,
            immune: m,
            dead: d,
        }
    }

    #[test]
    fn initial_honeycomb_snapshot() {
        let state = SimulationState::new(preset_scenario(Preset::Baseline), 11);
        let snap = take_snapshot(&state);
        assert_eq!(snap.aggregate, counts(1483, 47, 0, 0));
        assert_eq!(snap.rows.len(), 19);
        // Everyone spawns inside their own cell.
        assert_eq!(snap.rows[0], counts(745, 5, 0, 0));
    }

    #[test]
    fn aggregate_is_row_sum() {
        let snap = RegionSnapshot::from_rows(3, vec![counts(1, 2, 3, 4), counts(10, 20, 30, 40)]);
        assert_eq!(snap.aggregate, counts(11, 22, 33, 44));
    }

    #[test]
    fn empty_state_snapshot_is_zero() {
        let mut state = SimulationState::new(preset_scenario(Preset::Baseline), 0);
        state.agents_mut().clear();
        let snap = take_snapshot(&state);
        assert!(snap.rows.iter().all(|r| *r == RegionCounts::default()));
        assert_eq!(snap.aggregate, RegionCounts::default());
    }

    fn render(series: &TimeSeries) -> String {
        let mut buf = Vec::new();
        write_timeseries(series, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn one_region_two_steps() {
        let mut ts = TimeSeries::new(vec!["a".into()]);
        ts.push(RegionSnapshot::from_rows(0, vec![counts(9, 1, 0, 0)]));
        ts.push(RegionSnapshot::from_rows(1, vec![counts(8, 1, 0, 1)]));
        assert_eq!(
            render(&ts),
            "step,region_id,uninfected,infected,immune,dead\n\
             0,a,9,1,0,0\n0,ALL,9,1,0,0\n1,a,8,1,0,1\n1,ALL,8,1,0,1\n"
        );
    }

    #[test]
    fn empty_series_is_header_only() {
        assert_eq!(render(&TimeSeries::new(vec!["a".into()])), format!("{TIMESERIES_HEADER}\n"));
    }

    #[test]
    fn summary_json_keys() {
        let s = Summary {
            initial_population: 1530,
            simulation_period: 0,
            total_immune: 0,
            total_dead: 0,
            truncated: true,
        };
        let mut buf = Vec::new();
        write_summary(&s, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        for key in ["initialPopulation", "simulationPeriod", "totalImmune", "totalDead", "truncated"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["truncated"], true);
        assert_eq!(v["simulationPeriod"], 0);
    }

    struct FailingSink;

    impl Write for FailingSink {
        fn write(&mut self, _: &[u8]) -> io::Result<usize> {
            Err(io::Error::other("disk full"))
        }
        fn flush(&mut self) -> io::Result<()> {
            Err(io::Error::other("disk full"))
        }
    }

    #[test]
    fn sink_errors_propagate() {
        let mut ts = TimeSeries::new(vec!["a".into()]);
        ts.push(RegionSnapshot::from_rows(0, vec![counts(1, 0, 0, 0)]));
        assert!(write_timeseries(&ts, FailingSink).is_err());
        let s = Summary {
            initial_population: 1,
            simulation_period: 0,
            total_immune: 0,
            total_dead: 0,
            truncated: false,
        };
        assert!(write_summary(&s, FailingSink).is_err());
    }

    #[test]
    fn constant_series_has_no_waves() {
        assert_eq!(count_waves(&[7; 300], 51, 1.0).wave_count, 0);
        assert_eq!(count_waves(&[], 51, 1.0).wave_count, 0);
    }

    fn ramp(from: u64, to: u64, len: usize) -> Vec<u64> {
        (0..len)
            .map(|i| {
                let f = i as f64 / (len - 1) as f64;
                (from as f64 + (to as f64 - from as f64) * f).round() as u64
            })
            .collect()
    }

    fn two_bumps() -> Vec<u64> {
        let mut s = ramp(0, 100, 50);
        s.extend(ramp(100, 5, 50));
        s.extend(ramp(5, 80, 50));
        s.extend(ramp(80, 0, 50));
        s
    }

    #[test]
    fn two_bumps_are_two_waves() {
        let report = count_waves(&two_bumps(), 1, 30.0);
        assert_eq!(report.wave_count, 2);
        assert_eq!(report.peak_steps, vec![49, 149]);
    }

    #[test]
    fn single_rise_and_fall_is_one_wave() {
        let mut s = ramp(0, 300, 200);
        s.extend(ramp(300, 0, 400));
        assert_eq!(count_waves(&s, 51, 30.6).wave_count, 1);
    }

    #[test]
    fn shallow_dip_does_not_split_a_wave() {
        let mut s = ramp(0, 100, 50);
        s.extend(ramp(100, 90, 20));
        s.extend(ramp(90, 100, 20));
        s.extend(ramp(100, 0, 50));
        assert_eq!(count_waves(&s, 1, 30.0).wave_count, 1);
    }

    #[test]
    fn moving_average_truncates_at_edges() {
        assert_eq!(moving_average(&[3, 6, 9], 3), vec![4.5, 6.0, 7.5]);
        assert_eq!(moving_average(&[3, 6, 9], 1), vec![3.0, 6.0, 9.0]);
    }

    proptest! {
        #[test]
        fn csv_round_trips_counts(
            rows in prop::collection::vec(prop::collection::vec((0u64..2000, 0u64..2000, 0u64..2000, 0u64..2000), 2), 0..10)
        ) {
            let mut ts = TimeSeries::new(vec!["a".into(), "b".into()]);
            for (step, r) in rows.iter().enumerate() {
                ts.push(RegionSnapshot::from_rows(
                    step as u64,
                    r.iter().map(|&(u, i, m, d)| counts(u, i, m, d)).collect(),
                ));
            }
            let text = render(&ts);
            let parsed: Vec<Vec<String>> = text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect();
            prop_assert_eq!(parsed.len(), ts.snapshots.len() * 3);
            for (k, snap) in ts.snapshots.iter().enumerate() {
                for (j, c) in snap.rows.iter().chain(std::iter::once(&snap.aggregate)).enumerate() {
                    let line = &parsed[k * 3 + j];
                    let nums: Vec<u64> = line[2..].iter().map(|x| x.parse().unwrap()).collect();
                    prop_assert_eq!(line[0].parse::<u64>().unwrap(), snap.step);
                    prop_assert_eq!(nums, vec![c.uninfected, c.infected, c.immune, c.dead]);
                }
            }
        }

        #[test]
        fn wave_count_is_scale_invariant(
            series in prop::collection::vec(0u64..500, 1..400),
            window in 1usize..60,
            prominence in 1u64..100,
            shift in 0u32..6,
        ) {
            // Power-of-two scales keep every comparison exact.
            let k = 1u64 << shift;
            let scaled: Vec<u64> = series.iter().map(|v| v * k).collect();
            let a = count_waves(&series, window, prominence as f64);
            let b = count_waves(&scaled, window, (prominence * k) as f64);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn peaks_strictly_increase(series in prop::collection::vec(0u64..500, 1..400), window in 1usize..30) {
            let r = count_waves(&series, window, 20.0);
            prop_assert!(r.peak_steps.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(r.wave_count, r.peak_steps.len());
        }
    }
}
