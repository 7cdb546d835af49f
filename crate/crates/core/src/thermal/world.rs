//! The thermal environment seen by the learner.

use std::f64::consts::TAU;

use crate::env::{Environment, StepOutcome};
use crate::error::{Error, Result};
use crate::rl::{ActionId, StateId};
use crate::rng::RngStream;
use crate::thermal::activity::{sample_activity, state_of, Activity, ActivityProfile, SLOTS_PER_DAY};
use crate::thermal::house::{step_house, HouseParams, HouseState, HvacMode};
use crate::thermal::pmv::{pmv, PmvInputs};
use crate::thermal::thermal_reward;
use crate::thermal::units::fahrenheit_to_celsius;

pub const SETPOINT_MIN_F: f64 = 60.0;
pub const SETPOINT_MAX_F: f64 = 80.0;
pub const ACTION_COUNT: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutdoorProfile {
    Constant(f64),
    /// Daily sinusoid in °F with its minimum at `coldest_slot`.
    Sinusoid {
        mean: f64,
        amplitude: f64,
        coldest_slot: usize,
    },
}

impl OutdoorProfile {
    pub fn at(&self, slot: usize) -> f64 {
        match *self {
            Self::Constant(t) => t,
            Self::Sinusoid {
                mean,
                amplitude,
                coldest_slot,
            } => {
                let phase = (slot as f64 - coldest_slot as f64) / SLOTS_PER_DAY as f64;
                mean - amplitude * (TAU * phase).cos()
            }
        }
    }
}

impl Default for OutdoorProfile {
    fn default() -> Self {
        Self::Sinusoid {
            mean: 45.0,
            amplitude: 8.0,
            coldest_slot: 50,
        }
    }
}

/// Occupant-side PMV inputs that do not come from the house.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComfortParams {
    /// clo while asleep; includes bedding.
    pub clo_sleeping: f64,
    pub clo_domestic: f64,
    pub clo_relaxed: f64,
    pub relative_humidity: f64,
    pub air_velocity: f64,
}

impl Default for ComfortParams {
    fn default() -> Self {
        Self {
            clo_sleeping: 5.0,
            clo_domestic: 0.3,
            clo_relaxed: 0.7,
            relative_humidity: 50.0,
            air_velocity: 0.1,
        }
    }
}

impl ComfortParams {
    pub fn clo(&self, activity: Activity) -> Option<f64> {
        match activity {
            Activity::Sleeping => Some(self.clo_sleeping),
            Activity::NotAtHome => None,
            Activity::Domestic => Some(self.clo_domestic),
            Activity::Relaxed => Some(self.clo_relaxed),
        }
    }

    /// PMV for `activity` in a room at `t_indoor` °F (radiant = air).
    /// `None` for an empty house.
    pub fn pmv_at(&self, activity: Activity, t_indoor: f64) -> Result<Option<f64>> {
        let (Some(met), Some(clo)) = (activity.met(), self.clo(activity)) else {
            return Ok(None);
        };
        let t = fahrenheit_to_celsius(t_indoor);
        pmv(&PmvInputs {
            air_temp: t,
            mean_radiant_temp: t,
            relative_humidity: self.relative_humidity,
            air_velocity: self.air_velocity,
            metabolic_rate: met,
            clothing: clo,
        })
        .map(Some)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalConfig {
    pub house: HouseParams,
    pub outdoor: OutdoorProfile,
    pub comfort: ComfortParams,
    pub initial_indoor_f: f64,
    /// Steps without a Q-update after which one is forced.
    pub settle_timeout: usize,
    /// Distance from the set-point, °F, at which the house counts as settled.
    pub settle_tolerance_f: f64,
}

impl Default for ThermalConfig {
    fn default() -> Self {
        Self {
            house: HouseParams::default(),
            outdoor: OutdoorProfile::default(),
            comfort: ComfortParams::default(),
            initial_indoor_f: 65.0,
            settle_timeout: 10,
            settle_tolerance_f: 2.5,
        }
    }
}

impl ThermalConfig {
    pub fn validate(&self) -> Result<()> {
        self.house.validate()?;
        if self.settle_timeout == 0 {
            return Err(Error::config("thermal.settle_timeout", "must be positive"));
        }
        if !self.initial_indoor_f.is_finite() {
            return Err(Error::config("thermal.initial_indoor_f", "must be finite"));
        }
        Ok(())
    }
}

pub fn setpoint_of(action: ActionId) -> f64 {
    SETPOINT_MIN_F + action.0 as f64
}

#[derive(Debug, Clone)]
pub struct ThermalWorld {
    config: ThermalConfig,
    profile: ActivityProfile,
    house: HouseState,
    activity: Activity,
    t: u64,
    since_update: usize,
    rng: RngStream,
}

impl ThermalWorld {
    /// Draws the first activity from `rng`.
    pub fn new(config: ThermalConfig, profile: ActivityProfile, mut rng: RngStream) -> Result<Self> {
        config.validate()?;
        let activity = sample_activity(&profile, 0, &mut rng)?;
        let house = HouseState {
            t_indoor: config.initial_indoor_f,
            t_outdoor: config.outdoor.at(0),
            hvac_mode: HvacMode::Off,
            setpoint: config.initial_indoor_f,
        };
        Ok(Self {
            config,
            profile,
            house,
            activity,
            t: 0,
            since_update: 0,
            rng,
        })
    }

    /// Replace the occupant's profile from the next slot on.
    pub fn set_profile(&mut self, profile: ActivityProfile) {
        self.profile = profile;
    }

    pub fn profile(&self) -> &ActivityProfile {
        &self.profile
    }

    pub fn house(&self) -> &HouseState {
        &self.house
    }

    pub fn activity(&self) -> Activity {
        self.activity
    }

    pub fn config(&self) -> &ThermalConfig {
        &self.config
    }

    pub fn time(&self) -> u64 {
        self.t
    }
}

impl Environment for ThermalWorld {
    fn state_count(&self) -> usize {
        Activity::ALL.len()
    }

    fn action_count(&self) -> usize {
        ACTION_COUNT
    }

    fn current_state(&self) -> StateId {
        state_of(self.activity)
    }

    fn step(&mut self, action: ActionId) -> Result<StepOutcome> {
        if action.0 >= ACTION_COUNT {
            return Err(Error::IndexOutOfRange {
                what: "set-point action",
                index: action.0,
                size: ACTION_COUNT,
            });
        }
        let setpoint = setpoint_of(action);
        let mut house = self.house;
        house.t_outdoor = self.config.outdoor.at(self.slot());
        self.house = step_house(&house, setpoint, self.activity, &self.config.house)?;

        let observable = self.config.comfort.pmv_at(self.activity, self.house.t_indoor)?;
        let raw_reward = observable.map_or(0.0, thermal_reward);

        self.since_update += 1;
        let settled = (self.house.t_indoor - setpoint).abs() <= self.config.settle_tolerance_f;
        let update_ready = settled || self.since_update >= self.config.settle_timeout;
        if update_ready {
            self.since_update = 0;
        }

        self.t += 1;
        let slot = self.slot();
        self.activity = sample_activity(&self.profile, slot, &mut self.rng)?;
        Ok(StepOutcome {
            raw_reward,
            next_state: state_of(self.activity),
            observable,
            update_ready,
        })
    }

    fn slot(&self) -> usize {
        (self.t % SLOTS_PER_DAY as u64) as usize
    }

    fn slots_per_day(&self) -> usize {
        SLOTS_PER_DAY
    }

    fn action_value(&self, action: ActionId) -> f64 {
        setpoint_of(action)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::activity::HumanId;

    fn world(seed: u64) -> ThermalWorld {
        ThermalWorld::new(
            ThermalConfig::default(),
            ActivityProfile::for_human(HumanId::H2),
            RngStream::new(seed),
        )
        .unwrap()
    }

    #[test]
    fn action_mapping() {
        let w = world(1);
        assert_eq!(w.action_value(ActionId(0)), 60.0);
        assert_eq!(w.action_value(ActionId(20)), 80.0);
        assert_eq!(w.action_value_range(), (60.0, 80.0));
        assert_eq!(w.state_count(), 4);
        assert_eq!(w.action_count(), 21);
    }

    #[test]
    fn away_steps_have_no_reward() {
        let mut w = world(2);
        for _ in 0..2000 {
            let away = w.activity() == Activity::NotAtHome;
            let out = w.step(ActionId(10)).unwrap();
            if away {
                assert_eq!(out.raw_reward, 0.0);
                assert_eq!(out.observable, None);
            } else {
                let pmv = out.observable.unwrap();
                assert!((-3.0..=3.0).contains(&pmv));
                assert_eq!(out.raw_reward, thermal_reward(pmv));
            }
        }
    }

    #[test]
    fn updates_wait_for_settling_or_timeout() {
        let mut w = world(3);
        let mut gap = 0;
        for i in 0..500 {
            // Alternate between the extremes so settling takes a while.
            let a = if (i / 3) % 2 == 0 { ActionId(0) } else { ActionId(20) };
            let out = w.step(a).unwrap();
            gap += 1;
            if out.update_ready {
                gap = 0;
            }
            assert!(gap < 10);
        }
    }

    #[test]
    fn slots_wrap_daily() {
        let mut w = world(4);
        for _ in 0..SLOTS_PER_DAY {
            w.step(ActionId(5)).unwrap();
        }
        assert_eq!(w.slot(), 0);
        assert_eq!(w.time(), SLOTS_PER_DAY as u64);
        assert!(w.step(ActionId(21)).is_err());
    }

    #[test]
    fn outdoor_sinusoid_extremes() {
        let o = OutdoorProfile::default();
        assert!((o.at(50) - 37.0).abs() < 1e-12);
        assert!((o.at(170) - 53.0).abs() < 1e-12);
        assert_eq!(OutdoorProfile::Constant(40.0).at(123), 40.0);
    }
}
