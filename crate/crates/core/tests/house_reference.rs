//! House trajectory against the closed-form solution of the same ODE.
//!
//! Between thermostat switches the indoor temperature obeys a linear ODE
//! `dT/dt = k·(T_eq − T)`, so the reference solves each segment exactly and
//! finds switch times with a logarithm.

use parl::thermal::house::{step_house, HouseParams, HouseState, HvacMode};
use parl::thermal::Activity;

struct Reference {
    r: f64,
    c: f64,
    g: f64,
    heat: f64,
    cool: f64,
    /// Breath heat coefficient, W/K (indoor stays below 34 °C).
    breath: f64,
}

impl Reference {
    /// (k, T_eq) of the linear segment for `mode`.
    fn segment(&self, t_out: f64, mode: i8) -> (f64, f64) {
        let (g, supply) = match mode {
            1 => (self.g, self.heat),
            -1 => (self.g, self.cool),
            _ => (0.0, 0.0),
        };
        let conductance = g + self.breath + 1.0 / self.r;
        let forcing = g * supply + self.breath * 34.0 + t_out / self.r;
        (conductance / self.c, forcing / conductance)
    }

    /// Returns °F after each 6-minute step.
    fn run(&self, t0_f: f64, t_out_f: f64, sp_f: f64, steps: usize) -> Vec<f64> {
        let to_c = |f: f64| (f - 32.0) / 1.8;
        let mut t = to_c(t0_f);
        let t_out = to_c(t_out_f);
        let (lo, hi, sp) = (to_c(sp_f - 2.5), to_c(sp_f + 2.5), to_c(sp_f));
        let mut mode = 0i8;
        let mut out = Vec::new();
        for _ in 0..steps {
            let mut left = 360.0;
            while left > 0.0 {
                if mode == 0 && t < lo {
                    mode = 1;
                } else if mode == 0 && t > hi {
                    mode = -1;
                }
                let (k, eq) = self.segment(t_out, mode);
                // Edge that ends this segment, if the trajectory heads there.
                let edge = match mode {
                    1 if eq > sp && t < sp => Some((sp, 0)),
                    -1 if eq < sp && t > sp => Some((sp, 0)),
                    0 if eq < lo && t >= lo => Some((lo, 1)),
                    0 if eq > hi && t <= hi => Some((hi, -1)),
                    _ => None,
                };
                let hit = edge.map(|(e, next)| (((t - eq) / (e - eq)).ln() / k, e, next));
                match hit {
                    Some((dt, e, next)) if dt <= left => {
                        t = e;
                        mode = next;
                        left -= dt;
                    }
                    _ => {
                        t = eq + (t - eq) * (-k * left).exp();
                        left = 0.0;
                    }
                }
            }
            out.push(t * 1.8 + 32.0);
        }
        out
    }
}

fn compare(t0: f64, t_out: f64, sp: f64, activity: Activity, rmv: f64) -> f64 {
    let params = HouseParams::default();
    let oracle = Reference {
        r: params.r_eq,
        c: params.capacitance,
        g: params.hvac_conductance,
        heat: 50.0,
        cool: 10.0,
        breath: rmv / 60_000.0 * 1.2 * 1005.0,
    };
    let expected = oracle.run(t0, t_out, sp, 100);
    let mut state = HouseState {
        t_indoor: t0,
        t_outdoor: t_out,
        hvac_mode: HvacMode::Off,
        setpoint: sp,
    };
    let mut worst: f64 = 0.0;
    for want in expected {
        state = step_house(&state, sp, activity, &params).unwrap();
        worst = worst.max((state.t_indoor - want).abs());
    }
    worst
}

#[test]
fn heating_from_cold_matches_reference() {
    let worst = compare(55.0, 40.0, 70.0, Activity::Relaxed, 8.0);
    assert!(worst <= 0.1, "max deviation {worst} °F");
}

#[test]
fn cooling_from_hot_matches_reference() {
    let worst = compare(85.0, 95.0, 70.0, Activity::NotAtHome, 0.0);
    assert!(worst <= 0.1, "max deviation {worst} °F");
}

#[test]
fn free_drift_matches_reference() {
    let worst = compare(66.0, 60.0, 65.0, Activity::Domestic, 12.0);
    assert!(worst <= 0.1, "max deviation {worst} °F");
}
