//! °F ↔ °C. Set-points and the thermostat band are in °F; physics and PMV in °C.

pub fn fahrenheit_to_celsius(f: f64) -> f64 {
    (f - 32.0) * 5.0 / 9.0
}

pub fn celsius_to_fahrenheit(c: f64) -> f64 {
    c * 9.0 / 5.0 + 32.0
}

/// A temperature difference in °F expressed in kelvin.
pub fn fahrenheit_delta_to_kelvin(df: f64) -> f64 {
    df * 5.0 / 9.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_points() {
        assert_eq!(fahrenheit_to_celsius(32.0), 0.0);
        assert_eq!(fahrenheit_to_celsius(212.0), 100.0);
        assert!((celsius_to_fahrenheit(fahrenheit_to_celsius(71.3)) - 71.3).abs() < 1e-12);
        assert_eq!(fahrenheit_delta_to_kelvin(9.0), 5.0);
    }
}
