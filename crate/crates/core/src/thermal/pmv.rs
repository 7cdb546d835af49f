//! Fanger's Predicted Mean Vote (ISO 7730).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Inputs to the PMV model. Temperatures in °C, humidity in %, speed in m/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmvInputs<T> {
    pub air_temp: T,
    pub mean_radiant_temp: T,
    pub relative_humidity: T,
    pub air_velocity: T,
    /// Metabolic rate in met (1 met = 58.15 W/m²).
    pub metabolic_rate: T,
    /// Insulation in clo (1 clo = 0.155 m²K/W). Values above 2 stand for
    /// bedding while asleep.
    pub clothing: T,
}

pub const MAX_ITERATIONS: usize = 200;
const TOLERANCE_C: f64 = 1e-4;
pub const MAX_CLOTHING: f64 = 5.0;

impl<T: Scalar> PmvInputs<T> {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: T, lo: f64, hi: f64| -> Result<()> {
            if !v.is_finite() || v < T::lit(lo) || v > T::lit(hi) {
                return Err(Error::domain(format!("PMV input {name}={v} outside [{lo}, {hi}]")));
            }
            Ok(())
        };
        check("air_temp", self.air_temp, 0.0, 50.0)?;
        check("mean_radiant_temp", self.mean_radiant_temp, 0.0, 60.0)?;
        check("relative_humidity", self.relative_humidity, 0.0, 100.0)?;
        check("air_velocity", self.air_velocity, 0.0, 2.0)?;
        check("metabolic_rate", self.metabolic_rate, 0.7, 4.0)?;
        check("clothing", self.clothing, 0.0, MAX_CLOTHING)
    }
}

/// PMV clamped to `[-3, 3]`.
pub fn pmv<T: Scalar>(inputs: &PmvInputs<T>) -> Result<T> {
    pmv_unclamped(inputs).map(|v| v.max(T::lit(-3.0)).min(T::lit(3.0)))
}

/// PMV without the `[-3, 3]` clamp.
pub fn pmv_unclamped<T: Scalar>(inputs: &PmvInputs<T>) -> Result<T> {
    inputs.validate()?;
    let c = T::lit;
    let ta = inputs.air_temp;
    let tr = inputs.mean_radiant_temp;
    let kelvin = c(273.0);

    // Water vapour partial pressure, Pa.
    let pa = inputs.relative_humidity * c(10.0) * (c(16.6536) - c(4030.183) / (ta + c(235.0))).exp();
    let icl = c(0.155) * inputs.clothing;
    let m = inputs.metabolic_rate * c(58.15);
    let mw = m; // no external work
    let fcl = if icl <= c(0.078) {
        c(1.0) + c(1.29) * icl
    } else {
        c(1.05) + c(0.645) * icl
    };
    let hc_forced = c(12.1) * inputs.air_velocity.sqrt();
    let ta_k = ta + kelvin;
    let tr_k = tr + kelvin;

    // Clothing surface temperature in hundreds of kelvin. The convective
    // term is treated implicitly and the iterate is averaged, which keeps the
    // fixed point stable for heavy insulation.
    let p1 = icl * fcl;
    let p2 = p1 * c(3.96);
    let p3 = p1 * c(100.0);
    let p4 = p1 * ta_k;
    let p5 = c(308.7) - c(0.028) * mw + p2 * (tr_k / c(100.0)).powi(4);
    let tcl_start = ta_k + (c(35.5) - ta) / (c(3.5) * icl + c(0.1));
    let mut xn = tcl_start / c(100.0);
    let mut xf = tcl_start / c(50.0);
    let mut hc = hc_forced;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        xf = (xf + xn) / c(2.0);
        hc = (c(2.38) * (c(100.0) * xf - ta_k).abs().powf(c(0.25))).max(hc_forced);
        xn = (p5 + p4 * hc - p2 * xf.powi(4)) / (c(100.0) + p3 * hc);
        if (xn - xf).abs() * c(100.0) <= c(TOLERANCE_C) {
            converged = true;
            break;
        }
    }
    if !converged || !xn.is_finite() {
        return Err(Error::NonConvergent {
            what: "PMV clothing surface temperature",
            iterations: MAX_ITERATIONS,
        });
    }
    let tcl = c(100.0) * xn - kelvin;

    let skin_diffusion = c(3.05e-3) * (c(5733.0) - c(6.99) * mw - pa);
    let sweating = if mw > c(58.15) {
        c(0.42) * (mw - c(58.15))
    } else {
        T::zero()
    };
    let latent_respiration = c(1.7e-5) * m * (c(5867.0) - pa);
    let dry_respiration = c(0.0014) * m * (c(34.0) - ta);
    let radiation = c(3.96) * fcl * (xn.powi(4) - (tr_k / c(100.0)).powi(4));
    let convection = fcl * hc * (tcl - ta);
    let sensitivity = c(0.303) * (c(-0.036) * m).exp() + c(0.028);
    Ok(sensitivity * (mw - skin_diffusion - sweating - latent_respiration - dry_respiration - radiation - convection))
}

/// Predicted percentage dissatisfied for a PMV value.
pub fn ppd<T: Scalar>(pmv: T) -> T {
    let c = T::lit;
    c(100.0) - c(95.0) * (c(-0.03353) * pmv.powi(4) - c(0.2179) * pmv.powi(2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(ta: f64, tr: f64, v: f64, rh: f64, met: f64, clo: f64) -> PmvInputs<f64> {
        PmvInputs {
            air_temp: ta,
            mean_radiant_temp: tr,
            relative_humidity: rh,
            air_velocity: v,
            metabolic_rate: met,
            clothing: clo,
        }
    }

    #[test]
    fn hot_room_is_positive() {
        assert!(pmv(&inputs(40.0, 40.0, 0.1, 50.0, 1.2, 0.5)).unwrap() > 0.0);
    }

    #[test]
    fn output_is_clamped() {
        assert_eq!(pmv(&inputs(50.0, 50.0, 0.1, 90.0, 4.0, 2.0)).unwrap(), 3.0);
        assert!(pmv_unclamped(&inputs(50.0, 50.0, 0.1, 90.0, 4.0, 2.0)).unwrap() > 3.0);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(pmv(&inputs(-5.0, 20.0, 0.1, 50.0, 1.0, 0.5)).is_err());
        assert!(pmv(&inputs(20.0, 20.0, 0.1, 50.0, 0.5, 0.5)).is_err());
        assert!(pmv(&inputs(20.0, 20.0, 0.1, 50.0, 1.0, 6.0)).is_err());
        assert!(pmv(&inputs(f64::NAN, 20.0, 0.1, 50.0, 1.0, 0.5)).is_err());
    }

    #[test]
    fn monotone_in_air_temperature() {
        for &(met, clo) in &[(0.7, 4.0), (1.0, 0.7), (2.0, 0.3), (1.2, 1.0)] {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=100 {
                let t = i as f64 * 0.5;
                let v = pmv(&inputs(t, t, 0.1, 50.0, met, clo)).unwrap();
                assert!(v >= prev - 1e-12, "met={met} clo={clo} t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn ppd_minimum_is_five_percent() {
        assert!((ppd(0.0f64) - 5.0).abs() < 1e-12);
        assert!(ppd(1.0f64) > 25.0);
    }

    #[test]
    fn f32_close_to_f64() {
        let a = pmv(&inputs(22.0, 22.0, 0.1, 60.0, 1.2, 0.5)).unwrap();
        let b = pmv(&PmvInputs::<f32> {
            air_temp: 22.0,
            mean_radiant_temp: 22.0,
            relative_humidity: 60.0,
            air_velocity: 0.1,
            metabolic_rate: 1.2,
            clothing: 0.5,
        })
        .unwrap();
        assert!((a - f64::from(b)).abs() < 1e-3);
    }
}
