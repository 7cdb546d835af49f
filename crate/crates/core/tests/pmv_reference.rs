//! PMV against values produced by the reference program in
//! `tests/oracles/pmv_reference.py`, recorded before the Rust implementation
//! existed. The first five rows also appear in the ISO 7730 worked table
//! (rounded to two decimals there).

use parl::thermal::pmv::{pmv, PmvInputs};

// (air °C, radiant °C, air speed m/s, RH %, met, clo, oracle PMV)
const REFERENCE: &[(f64, f64, f64, f64, f64, f64, f64)] = &[
    (22.0, 22.0, 0.1, 60.0, 1.2, 0.5, -0.7523),
    (27.0, 27.0, 0.1, 60.0, 1.2, 0.5, 0.7654),
    (27.0, 27.0, 0.3, 60.0, 1.2, 0.5, 0.4338),
    (23.5, 25.5, 0.1, 60.0, 1.2, 0.5, -0.0131),
    (23.5, 25.5, 0.3, 60.0, 1.2, 0.5, -0.5550),
    (19.0, 19.0, 0.1, 40.0, 1.2, 1.0, -0.5984),
    (23.5, 23.5, 0.3, 40.0, 1.2, 1.0, 0.1216),
    (23.0, 21.0, 0.1, 40.0, 1.2, 1.0, 0.0526),
    (23.0, 21.0, 0.3, 40.0, 1.2, 1.0, -0.1662),
    (22.0, 22.0, 0.1, 60.0, 1.6, 0.5, 0.0475),
    (27.0, 27.0, 0.1, 60.0, 1.6, 0.5, 1.1714),
    (27.0, 27.0, 0.3, 60.0, 1.6, 0.5, 0.9509),
];

fn eval(row: &(f64, f64, f64, f64, f64, f64, f64)) -> f64 {
    let &(ta, tr, v, rh, met, clo, _) = row;
    pmv(&PmvInputs {
        air_temp: ta,
        mean_radiant_temp: tr,
        relative_humidity: rh,
        air_velocity: v,
        metabolic_rate: met,
        clothing: clo,
    })
    .unwrap()
}

#[test]
fn matches_reference_within_a_hundredth() {
    for row in REFERENCE {
        let got = eval(row);
        assert!((got - row.6).abs() <= 0.01, "{row:?}: got {got}");
    }
}

#[test]
fn neutral_points_of_the_occupant_activities() {
    // (met, clo, °F where the oracle crosses zero)
    for &(met, clo, neutral_f) in &[
        (0.7, 4.5, 62.21),
        (0.7, 5.0, 59.73),
        (2.0, 0.3, 70.19),
        (1.0, 0.7, 76.90),
    ] {
        let t: f64 = (neutral_f - 32.0) * 5.0 / 9.0;
        let v = pmv(&PmvInputs {
            air_temp: t,
            mean_radiant_temp: t,
            relative_humidity: 50.0,
            air_velocity: 0.1,
            metabolic_rate: met,
            clothing: clo,
        })
        .unwrap();
        assert!(v.abs() < 0.01, "met {met} clo {clo}: {v}");
    }
}
