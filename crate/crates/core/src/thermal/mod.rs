//! Thermal-comfort house: lumped RC physics, hysteretic HVAC, a scheduled
//! occupant and a PMV-based reward.

pub mod activity;
pub mod house;
pub mod pmv;
pub mod units;
pub mod world;

pub use activity::{activity_of, sample_activity, state_of, Activity, ActivityProfile, HumanId, SLOTS_PER_DAY};
pub use house::{human_heat, step_house, HouseParams, HouseState, HvacMode};
pub use pmv::{pmv, PmvInputs};
pub use world::{ComfortParams, OutdoorProfile, ThermalConfig, ThermalWorld};

/// Reward for a PMV value: a tent peaking at +10 for neutral, zero at the
/// comfort band edge |PMV| = 0.5, and falling linearly outside it.
pub fn thermal_reward(pmv_value: f64) -> f64 {
    let m = pmv_value.abs();
    if m <= 0.5 {
        10.0 * (1.0 - m / 0.5)
    } else {
        -10.0 * (m - 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reward_shape() {
        assert_eq!(thermal_reward(0.0), 10.0);
        assert_eq!(thermal_reward(0.5), 0.0);
        assert_eq!(thermal_reward(-0.5), 0.0);
        assert_eq!(thermal_reward(1.5), -10.0);
        assert_eq!(thermal_reward(-3.0), -25.0);
        assert!((thermal_reward(0.25) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn reward_sign_matches_band() {
        for i in -300..=300 {
            let p = i as f64 / 100.0;
            let r = thermal_reward(p);
            if p.abs() < 0.5 {
                assert!(r > 0.0);
            } else {
                assert!(r <= 0.0);
            }
        }
    }
}
