//! Named honeycomb experiments: the baseline, lockdown, every vaccine and
//! medicine mechanism, and the combined strategy.

use std::fmt;
use std::str::FromStr;

use super::{
    generate_hex_scenario, DistributionParams, HierarchyTable, ImpermeabilityTable,
    LockdownParams, Mechanism, ScenarioConfig, DEFAULT_CELL_CIRCUMRADIUS,
};

/// Kill-check spacing for the `baseline_calibrated` preset. Rolling death
/// every 11th infected step gives 22 rolls over a 250-step infection, a case
/// fatality of `1 - 0.995^22`, about 10.5%.
pub const CALIBRATED_KILL_CHECK_INTERVAL: u64 = 11;

const DELIVERY_START: u64 = 300;
const DELIVERY_FREQUENCY: u64 = 100;
const DELIVERY_QUANTITY: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Baseline,
    Lockdown,
    Vaccine(Mechanism),
    Medicine(Mechanism),
    Combined,
    /// Baseline with sparser death rolls; see [`CALIBRATED_KILL_CHECK_INTERVAL`].
    BaselineCalibrated,
}

impl Preset {
    pub fn all() -> Vec<Preset> {
        let mut all = vec![Preset::Baseline, Preset::Lockdown];
        all.extend(Mechanism::ALL.map(Preset::Vaccine));
        all.extend(Mechanism::ALL.map(Preset::Medicine));
        all.push(Preset::Combined);
        all.push(Preset::BaselineCalibrated);
        all
    }

    pub fn name(self) -> String {
        match self {
            Preset::Baseline => "baseline".into(),
            Preset::Lockdown => "lockdown".into(),
            Preset::Vaccine(m) => format!("vaccine_{m}"),
            Preset::Medicine(m) => format!("medicine_{m}"),
            Preset::Combined => "combined".into(),
            Preset::BaselineCalibrated => "baseline_calibrated".into(),
        }
    }

    pub fn names() -> Vec<String> {
        Preset::all().into_iter().map(Preset::name).collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::all()
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset {s:?}; valid presets: {}", Preset::names().join(", ")))
    }
}

fn delivery(mechanism: Mechanism) -> DistributionParams {
    DistributionParams {
        start_time: DELIVERY_START,
        frequency: DELIVERY_FREQUENCY,
        quantity: DELIVERY_QUANTITY,
        mechanism,
    }
}

/// The scenario for a named experiment on the default honeycomb.
pub fn preset_scenario(preset: Preset) -> ScenarioConfig {
    let mut config = generate_hex_scenario(
        DEFAULT_CELL_CIRCUMRADIUS,
        &HierarchyTable::default(),
        &ImpermeabilityTable::default(),
    )
    .expect("default honeycomb is valid");

    match preset {
        Preset::Baseline => {}
        Preset::Lockdown => config.lockdown = Some(LockdownParams::default()),
        Preset::Vaccine(m) => config.vaccine = delivery(m),
        Preset::Medicine(m) => config.medicine = delivery(m),
        Preset::Combined => {
            config.lockdown = Some(LockdownParams::default());
            config.vaccine = delivery(Mechanism::InfectedAndUninfected);
            config.medicine = delivery(Mechanism::MaximumInfection);
        }
        Preset::BaselineCalibrated => {
            config.disease.kill_check_interval = CALIBRATED_KILL_CHECK_INTERVAL;
        }
    }
    config
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse_back() {
        for p in Preset::all() {
            assert_eq!(p.name().parse::<Preset>(), Ok(p));
        }
        assert_eq!(Preset::all().len(), 12);
        assert!("vaccine_equitable".parse::<Preset>().is_ok());
        assert!("medicine_infectedAndUninfected".parse::<Preset>().is_ok());
        let err = "nope".parse::<Preset>().unwrap_err();
        assert!(err.contains("baseline") && err.contains("combined"));
    }

    #[test]
    fn baseline_has_no_interventions() {
        let c = preset_scenario(Preset::Baseline);
        let d = &c.disease;
        assert_eq!(
            (d.spread_radius, d.transmission_probability, d.cure_period, d.kill_probability),
            (5.0, 0.7, 250, 0.005)
        );
        assert_eq!(c.lockdown, None);
        assert_eq!(c.vaccine.quantity, 0);
        assert_eq!(c.medicine.quantity, 0);
    }

    #[test]
    fn lockdown_preset() {
        let c = preset_scenario(Preset::Lockdown);
        assert_eq!(
            c.lockdown,
            Some(LockdownParams {
                start_threshold: 0.1,
                end_threshold: 0.02,
                mobility_multiplier: 0.1
            })
        );
        assert!(!c.vaccine.is_enabled() && !c.medicine.is_enabled());
    }

    #[test]
    fn combined_preset() {
        let c = preset_scenario(Preset::Combined);
        assert!(c.lockdown.is_some());
        assert_eq!(c.vaccine, delivery(Mechanism::InfectedAndUninfected));
        assert_eq!(c.medicine, delivery(Mechanism::MaximumInfection));
        assert_eq!((c.vaccine.start_time, c.vaccine.frequency, c.vaccine.quantity), (300, 100, 200));
    }

    #[test]
    fn single_mechanism_presets() {
        for m in Mechanism::ALL {
            let v = preset_scenario(Preset::Vaccine(m));
            assert_eq!(v.vaccine.mechanism, m);
            assert!(!v.medicine.is_enabled() && v.lockdown.is_none());
            let md = preset_scenario(Preset::Medicine(m));
            assert_eq!(md.medicine.mechanism, m);
            assert!(!md.vaccine.is_enabled());
        }
    }
}
