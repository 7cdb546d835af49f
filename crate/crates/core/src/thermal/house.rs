//! Single-zone lumped-capacitance house with a hysteretic thermostat.

use crate::error::{Error, Result};
use crate::thermal::activity::Activity;
use crate::thermal::units::{celsius_to_fahrenheit, fahrenheit_delta_to_kelvin, fahrenheit_to_celsius};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HvacMode {
    Heat,
    Cool,
    Off,
}

impl HvacMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Heat => "heat",
            Self::Cool => "cool",
            Self::Off => "off",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HouseState {
    /// °F
    pub t_indoor: f64,
    /// °F
    pub t_outdoor: f64,
    pub hvac_mode: HvacMode,
    /// °F
    pub setpoint: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HouseParams {
    /// Envelope resistance, K/W.
    pub r_eq: f64,
    /// Air and contents heat capacity, J/K.
    pub capacitance: f64,
    /// Supply air mass flow times specific heat, W/K.
    pub hvac_conductance: f64,
    /// Supply air temperature while heating, °C.
    pub heat_supply_c: f64,
    /// Supply air temperature while cooling, °C.
    pub cool_supply_c: f64,
    /// Half-width of the thermostat dead band, °F.
    pub band_f: f64,
    /// Exhaled breath temperature, °C.
    pub breath_temp_c: f64,
    /// Decision period, s.
    pub step_seconds: f64,
    /// Integration period, s.
    pub substep_seconds: f64,
}

impl Default for HouseParams {
    fn default() -> Self {
        Self {
            r_eq: 0.0054,
            capacitance: 2.0e6,
            hvac_conductance: 1000.0,
            heat_supply_c: 50.0,
            cool_supply_c: 10.0,
            band_f: 2.5,
            breath_temp_c: 34.0,
            step_seconds: 360.0,
            substep_seconds: 1.0,
        }
    }
}

impl HouseParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("r_eq", self.r_eq),
            ("capacitance", self.capacitance),
            ("hvac_conductance", self.hvac_conductance),
            ("step_seconds", self.step_seconds),
            ("substep_seconds", self.substep_seconds),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!(
                    "house parameter {name} must be positive, got {v}"
                )));
            }
        }
        if !(self.band_f.is_finite() && self.band_f >= 0.0) {
            return Err(Error::domain("thermostat band must be non-negative"));
        }
        if self.cool_supply_c >= self.heat_supply_c {
            return Err(Error::domain("cooling supply must be colder than heating supply"));
        }
        let ratio = self.step_seconds / self.substep_seconds;
        if (ratio - ratio.round()).abs() > 1e-9 {
            return Err(Error::domain("step_seconds must be a multiple of substep_seconds"));
        }
        Ok(())
    }

    pub fn substeps(&self) -> usize {
        (self.step_seconds / self.substep_seconds).round() as usize
    }
}

/// Heat exhaled by the occupant, W, at indoor temperature `t_indoor` °F.
pub fn human_heat(activity: Activity, t_indoor: f64, params: &HouseParams) -> f64 {
    human_heat_c(activity, fahrenheit_to_celsius(t_indoor), params)
}

fn human_heat_c(activity: Activity, t_indoor_c: f64, params: &HouseParams) -> f64 {
    const AIR_DENSITY: f64 = 1.2; // kg/m³
    const AIR_CP: f64 = 1005.0; // J/(kg·K)
    let flow = activity.rmv() / 60_000.0; // l/min → m³/s
    (flow * AIR_DENSITY * AIR_CP * (params.breath_temp_c - t_indoor_c)).max(0.0)
}

/// Thermostat transition for a sampled indoor temperature. Units only need to
/// agree.
pub fn thermostat(mode: HvacMode, t_indoor: f64, setpoint: f64, band: f64) -> HvacMode {
    match mode {
        HvacMode::Off if t_indoor < setpoint - band => HvacMode::Heat,
        HvacMode::Off if t_indoor > setpoint + band => HvacMode::Cool,
        HvacMode::Heat if t_indoor >= setpoint => HvacMode::Off,
        HvacMode::Cool if t_indoor <= setpoint => HvacMode::Off,
        m => m,
    }
}

/// Rate of change of the indoor temperature, K/s, in °C terms.
pub fn temperature_rate(t_in_c: f64, t_out_c: f64, mode: HvacMode, q_human: f64, params: &HouseParams) -> f64 {
    let q_hvac = match mode {
        HvacMode::Heat => params.hvac_conductance * (params.heat_supply_c - t_in_c),
        HvacMode::Cool => params.hvac_conductance * (params.cool_supply_c - t_in_c),
        HvacMode::Off => 0.0,
    };
    (q_hvac + q_human - (t_in_c - t_out_c) / params.r_eq) / params.capacitance
}

/// Advance the house by one decision period at `setpoint` °F.
///
/// Forward Euler on the substep grid. Thermostat switches are located inside
/// a substep by linear interpolation, so the dead band edges are hit exactly
/// rather than at the next sample.
pub fn step_house(state: &HouseState, setpoint: f64, activity: Activity, params: &HouseParams) -> Result<HouseState> {
    if !state.t_indoor.is_finite() || !state.t_outdoor.is_finite() || !setpoint.is_finite() {
        return Err(Error::domain(format!(
            "non-finite house state (indoor={}, outdoor={}, setpoint={setpoint})",
            state.t_indoor, state.t_outdoor
        )));
    }
    let t_out_c = fahrenheit_to_celsius(state.t_outdoor);
    let band_k = fahrenheit_delta_to_kelvin(params.band_f);
    let sp_c = fahrenheit_to_celsius(setpoint);
    let (lo, hi) = (sp_c - band_k, sp_c + band_k);
    let mut t_c = fahrenheit_to_celsius(state.t_indoor);
    let mut mode = state.hvac_mode;
    for _ in 0..params.substeps() {
        mode = thermostat(mode, t_c, sp_c, band_k);
        let mut left = params.substep_seconds;
        // A substep holds at most a couple of switches; the bound only guards
        // against pathological parameters.
        for _ in 0..8 {
            if left <= 0.0 {
                break;
            }
            let rate = temperature_rate(t_c, t_out_c, mode, human_heat_c(activity, t_c, params), params);
            let end = t_c + left * rate;
            let event = match mode {
                HvacMode::Heat if rate > 0.0 && end >= sp_c => Some((sp_c, HvacMode::Off)),
                HvacMode::Cool if rate < 0.0 && end <= sp_c => Some((sp_c, HvacMode::Off)),
                HvacMode::Off if rate < 0.0 && end < lo => Some((lo, HvacMode::Heat)),
                HvacMode::Off if rate > 0.0 && end > hi => Some((hi, HvacMode::Cool)),
                _ => None,
            };
            match event {
                Some((edge, next)) => {
                    left -= ((edge - t_c) / rate).max(0.0);
                    t_c = edge;
                    mode = next;
                }
                None => {
                    t_c = end;
                    left = 0.0;
                }
            }
        }
    }
    if !t_c.is_finite() {
        return Err(Error::domain("indoor temperature diverged"));
    }
    Ok(HouseState {
        t_indoor: celsius_to_fahrenheit(t_c),
        t_outdoor: state.t_outdoor,
        hvac_mode: mode,
        setpoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn house(t_in: f64, t_out: f64, sp: f64) -> HouseState {
        HouseState {
            t_indoor: t_in,
            t_outdoor: t_out,
            hvac_mode: HvacMode::Off,
            setpoint: sp,
        }
    }

    #[test]
    fn equilibrium_is_fixed_point() {
        let p = HouseParams::default();
        let next = step_house(&house(70.0, 70.0, 70.0), 70.0, Activity::NotAtHome, &p).unwrap();
        assert_eq!(next.t_indoor, 70.0);
        assert_eq!(next.hvac_mode, HvacMode::Off);
    }

    #[test]
    fn cold_start_engages_heat() {
        let p = HouseParams::default();
        let next = step_house(&house(60.0, 20.0, 70.0), 70.0, Activity::NotAtHome, &p).unwrap();
        assert!(next.t_indoor > 60.0);
        let mode = thermostat(HvacMode::Off, 60.0, 70.0, 2.5);
        assert_eq!(mode, HvacMode::Heat);
    }

    #[test]
    fn empty_house_loses_about_one_degree() {
        let p = HouseParams::default();
        let t_c = fahrenheit_to_celsius(70.0);
        let rate = temperature_rate(t_c, fahrenheit_to_celsius(40.0), HvacMode::Off, 0.0, &p);
        let drop_f = -rate * p.step_seconds * 9.0 / 5.0;
        assert!((0.8..1.2).contains(&drop_f), "{drop_f}");
    }

    #[test]
    fn human_heat_scales_with_rmv() {
        let p = HouseParams::default();
        assert_eq!(human_heat(Activity::NotAtHome, 65.0, &p), 0.0);
        let sleeping = human_heat(Activity::Sleeping, 65.0, &p);
        let domestic = human_heat(Activity::Domestic, 65.0, &p);
        assert!(sleeping > 0.0);
        assert!((domestic - 2.0 * sleeping).abs() < 1e-12);
        assert_eq!(human_heat(Activity::Relaxed, celsius_to_fahrenheit(34.0), &p), 0.0);
        assert_eq!(human_heat(Activity::Relaxed, 100.0, &p), 0.0);
    }

    #[test]
    fn non_finite_rejected() {
        let p = HouseParams::default();
        assert!(step_house(&house(f64::NAN, 40.0, 70.0), 70.0, Activity::Relaxed, &p).is_err());
    }

    #[test]
    fn free_decay_is_monotone() {
        // No HVAC possible: a huge band keeps the thermostat off.
        let p = HouseParams {
            band_f: 1000.0,
            ..HouseParams::default()
        };
        let mut s = house(72.0, 40.0, 70.0);
        let mut prev = s.t_indoor;
        for _ in 0..200 {
            s = step_house(&s, 70.0, Activity::NotAtHome, &p).unwrap();
            assert!(s.t_indoor < prev && s.t_indoor > 40.0);
            prev = s.t_indoor;
        }
    }

    #[test]
    fn thermostat_band_holds_after_settling() {
        let p = HouseParams::default();
        let mut s = house(55.0, 45.0, 70.0);
        for i in 0..200 {
            s = step_house(&s, 70.0, Activity::Relaxed, &p).unwrap();
            if i >= 20 {
                assert!((s.t_indoor - 70.0).abs() <= 2.5 + 0.1, "step {i}: {}", s.t_indoor);
            }
        }
    }
}
