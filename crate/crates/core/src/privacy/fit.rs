//! Least-squares quadratic fit of the MI trace and its extrapolated maximum.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `f(t) = a·t² + b·t + c` fitted on samples with `t ∈ [t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub t_min: T,
    pub t_max: T,
    /// Largest sample value seen by the fit.
    pub observed_max: T,
}

impl<T: Scalar> QuadraticFit<T> {
    pub fn eval(&self, t: T) -> T {
        (self.a * t + self.b) * t + self.c
    }
}

/// Ordinary least squares over `(t, y)` points.
///
/// The abscissae are mapped to `[-1, 1]` before forming the normal equations,
/// which keeps the system well conditioned for traces thousands of steps long.
pub fn fit_quadratic<T: Scalar>(points: &[(T, T)]) -> Result<QuadraticFit<T>> {
    if points.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: points.len(),
        });
    }
    if points.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
        return Err(Error::domain("non-finite sample in quadratic fit"));
    }
    let t_min = points.iter().map(|p| p.0).fold(T::infinity(), T::min);
    let t_max = points.iter().map(|p| p.0).fold(T::neg_infinity(), T::max);
    let observed_max = points.iter().map(|p| p.1).fold(T::neg_infinity(), T::max);
    let two = T::lit(2.0);
    let mid = (t_min + t_max) / two;
    let half = (t_max - t_min) / two;
    if half <= T::zero() {
        return Err(Error::domain("quadratic fit needs at least 3 distinct abscissae"));
    }

    // Normal equations in u = (t − mid)/half for basis [1, u, u²].
    let mut moments = [T::zero(); 5];
    let mut rhs = [T::zero(); 3];
    for &(t, y) in points {
        let u = (t - mid) / half;
        let mut p = T::one();
        for (k, m) in moments.iter_mut().enumerate() {
            *m += p;
            if k < 3 {
                rhs[k] += p * y;
            }
            p *= u;
        }
    }
    let mut system = [
        [moments[0], moments[1], moments[2], rhs[0]],
        [moments[1], moments[2], moments[3], rhs[1]],
        [moments[2], moments[3], moments[4], rhs[2]],
    ];
    let [c0, c1, c2] =
        solve3(&mut system).ok_or_else(|| Error::domain("quadratic fit needs at least 3 distinct abscissae"))?;

    // Back to t: c2·((t−m)/h)² + c1·(t−m)/h + c0.
    let h2 = half * half;
    let a = c2 / h2;
    let b = c1 / half - two * c2 * mid / h2;
    let c = c2 * mid * mid / h2 - c1 * mid / half + c0;
    Ok(QuadraticFit {
        a,
        b,
        c,
        t_min,
        t_max,
        observed_max,
    })
}

/// Gaussian elimination with partial pivoting on an augmented 3×4 matrix.
fn solve3<T: Scalar>(m: &mut [[T; 4]; 3]) -> Option<[T; 3]> {
    let scale = m
        .iter()
        .flat_map(|r| r[..3].iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    let tiny = scale * T::epsilon() * T::lit(64.0);
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col].abs() <= tiny {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (x, &v) in m[row].iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * v;
            }
        }
    }
    let mut x = [T::zero(); 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Maximum the fitted curve predicts for the MI trace up to `horizon`.
///
/// Concave fits use the vertex clamped into `[0, horizon]`. Fits with no
/// interior maximum (`a ≥ 0`) fall back to the larger of the fitted value at
/// the last fitted step and the largest observed sample. The result is
/// clamped to `[0, cap]` when a cap is given.
pub fn f_max<T: Scalar>(fit: &QuadraticFit<T>, horizon: T, cap: Option<T>) -> T {
    let raw = if fit.a < T::zero() {
        let vertex = -fit.b / (T::lit(2.0) * fit.a);
        let t = vertex.max(T::zero()).min(horizon.max(T::zero()));
        fit.eval(t)
    } else {
        fit.eval(fit.t_max).max(fit.observed_max)
    };
    let mut value = raw.max(T::zero());
    if let Some(cap) = cap {
        value = value.min(cap);
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn three_points_interpolate_exactly() {
        let fit = fit_quadratic(&[(0.0, 0.0), (1.0, 3.0), (2.0, 4.0)]).unwrap();
        assert_abs_diff_eq!(fit.a, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.b, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.c, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_data() {
        let pts: Vec<(f64, f64)> = (0..10).map(|t| (t as f64, 2.0)).collect();
        let fit = fit_quadratic(&pts).unwrap();
        assert_abs_diff_eq!(fit.a, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.b, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.c, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn planted_quadratic_recovered() {
        let pts: Vec<(f64, f64)> = (0..50)
            .map(|t| {
                let t = t as f64;
                (t, 0.5 + 0.1 * t - 0.001 * t * t)
            })
            .collect();
        let fit = fit_quadratic(&pts).unwrap();
        assert_abs_diff_eq!(fit.a, -0.001, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.b, 0.1, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.c, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn too_few_or_degenerate_points() {
        assert!(matches!(
            fit_quadratic(&[(0.0, 1.0), (1.0, 2.0)]),
            Err(Error::InsufficientData { needed: 3, got: 2 })
        ));
        assert!(fit_quadratic(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(fit_quadratic(&[(0.0, 1.0), (0.0, 2.0), (1.0, 3.0)]).is_err());
    }

    #[test]
    fn f_max_at_vertex() {
        let fit = QuadraticFit {
            a: -1.0,
            b: 4.0,
            c: 0.0,
            t_min: 0.0,
            t_max: 2.0,
            observed_max: 4.0,
        };
        assert_eq!(f_max(&fit, 10.0, None), 4.0);
        // Vertex beyond the horizon: evaluated at the horizon.
        assert_eq!(f_max(&fit, 1.0, None), 3.0);
        assert_eq!(f_max(&fit, 10.0, Some(2.0)), 2.0);
    }

    #[test]
    fn f_max_constant_fit() {
        let fit = QuadraticFit {
            a: 0.0,
            b: 0.0,
            c: 2.0,
            t_min: 0.0,
            t_max: 9.0,
            observed_max: 2.0,
        };
        assert_eq!(f_max(&fit, 100.0, None), 2.0);
    }

    #[test]
    fn f_max_convex_falls_back_to_data() {
        // f(t_max) = 1.1, observed maximum 1.3.
        let fit = QuadraticFit {
            a: 0.01,
            b: -0.1,
            c: 1.1,
            t_min: 0.0,
            t_max: 10.0,
            observed_max: 1.3,
        };
        assert_abs_diff_eq!(fit.eval(10.0), 1.1, epsilon = 1e-12);
        assert_eq!(f_max(&fit, 100.0, None), 1.3);
    }

    #[test]
    fn fit_in_f32() {
        let pts: Vec<(f32, f32)> = (0..20).map(|t| (t as f32, 1.0 + 0.5 * t as f32)).collect();
        let fit = fit_quadratic(&pts).unwrap();
        assert!((fit.b - 0.5).abs() < 1e-4);
        assert!(fit.a.abs() < 1e-5);
    }

    fn residual_ss(pts: &[(f64, f64)], a: f64, b: f64, c: f64) -> f64 {
        pts.iter().map(|&(t, y)| (y - (a * t * t + b * t + c)).powi(2)).sum()
    }

    proptest! {
        #[test]
        fn least_squares_is_locally_optimal(
            ys in prop::collection::vec(-2.0f64..2.0, 5..40),
            da in -1e-3f64..1e-3, db in -1e-2f64..1e-2, dc in -0.1f64..0.1,
        ) {
            let pts: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64 * 3.0, y)).collect();
            let fit = fit_quadratic(&pts).unwrap();
            let best = residual_ss(&pts, fit.a, fit.b, fit.c);
            let other = residual_ss(&pts, fit.a + da, fit.b + db, fit.c + dc);
            prop_assert!(best <= other + 1e-9);
        }
    }
}
