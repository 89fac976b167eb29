//! Augmented Dickey-Fuller unit-root test, constant-only variant.
//!
//! Fits `dy_t = c + g*y_{t-1} + sum phi_i dy_{t-i} + e` by least squares
//! and reports the t-ratio of `g`. P-values come from linear interpolation
//! in the classic constant-case critical-value table across both the
//! sample-size brackets and the 1%/5%/10% quantile rows.

use super::TimeSeries;
use crate::error::{Error, Result};
use crate::numerics::{least_squares_solve, Matrix};
use serde::{Deserialize, Serialize};

/// Lag choice for the augmenting difference terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagOrder {
    /// `floor((n - 1)^(1/3))`, the usual default.
    Auto,
    Fixed(usize),
}

/// Outcome of the ADF test at significance 0.05.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    pub statistic: f64,
    pub lag_order: usize,
    pub p_value: f64,
    /// True when `p_value < 0.05`: the unit-root null is rejected and the
    /// series is declared stationary.
    pub reject_null: bool,
}

// Constant-case (no trend) Dickey-Fuller critical values by sample size.
const TABLE_SIZES: [f64; 6] = [25.0, 50.0, 100.0, 250.0, 500.0, 1e9];
const TABLE_PROBS: [f64; 3] = [0.01, 0.05, 0.10];
const TABLE_CRIT: [[f64; 6]; 3] = [
    [-3.75, -3.58, -3.51, -3.46, -3.44, -3.43], // 1%
    [-3.00, -2.93, -2.89, -2.88, -2.87, -2.86], // 5%
    [-2.63, -2.60, -2.58, -2.57, -2.57, -2.57], // 10%
];

/// Critical value at one quantile row, interpolated across sample size.
fn critical_value(row: usize, n: f64) -> f64 {
    let cvs = &TABLE_CRIT[row];
    if n <= TABLE_SIZES[0] {
        return cvs[0];
    }
    for i in 1..TABLE_SIZES.len() {
        if n <= TABLE_SIZES[i] {
            let f = (n - TABLE_SIZES[i - 1]) / (TABLE_SIZES[i] - TABLE_SIZES[i - 1]);
            return cvs[i - 1] + f * (cvs[i] - cvs[i - 1]);
        }
    }
    cvs[TABLE_SIZES.len() - 1]
}

/// P-value by piecewise-linear interpolation through the three quantile
/// anchors, extrapolated with the nearest segment and clamped to
/// `[0.001, 0.999]`.
fn p_value_from_table(statistic: f64, n_eff: usize) -> f64 {
    let n = n_eff as f64;
    let anchors: Vec<(f64, f64)> = (0..3)
        .map(|row| (critical_value(row, n), TABLE_PROBS[row]))
        .collect();
    let interp = |(x0, p0): (f64, f64), (x1, p1): (f64, f64), x: f64| {
        p0 + (x - x0) * (p1 - p0) / (x1 - x0)
    };
    let p = if statistic <= anchors[1].0 {
        interp(anchors[0], anchors[1], statistic)
    } else {
        interp(anchors[1], anchors[2], statistic)
    };
    p.clamp(0.001, 0.999)
}

/// Runs the constant-only augmented Dickey-Fuller regression and returns
/// the test statistic, lag order, interpolated p-value and the 0.05
/// decision.
pub fn adf_test(s: &TimeSeries, lag_order: LagOrder) -> Result<AdfResult> {
    let y = s.values();
    let n = y.len();
    let lag = match lag_order {
        LagOrder::Fixed(k) => k,
        LagOrder::Auto => ((n.saturating_sub(1)) as f64).powf(1.0 / 3.0).floor() as usize,
    };
    if n < lag + 10 {
        return Err(Error::Size(format!(
            "ADF with lag {lag} needs at least {} observations, got {n}",
            lag + 10
        )));
    }

    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    // Rows t = lag+1 .. n-1 of the original index.
    let mut rows = Vec::with_capacity(n - 1 - lag);
    let mut response = Vec::with_capacity(n - 1 - lag);
    for t in (lag + 1)..n {
        let mut row = Vec::with_capacity(lag + 2);
        row.push(1.0);
        row.push(y[t - 1]);
        for i in 1..=lag {
            row.push(dy[t - 1 - i]);
        }
        rows.push(row);
        response.push(dy[t - 1]);
    }
    let x = Matrix::from_rows(rows)?;
    let n_eff = x.rows();
    let k = x.cols();
    let beta = least_squares_solve(&x, &response)?;

    let fitted = x.matvec(&beta)?;
    let rss: f64 = response
        .iter()
        .zip(&fitted)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let sigma2 = rss / (n_eff - k) as f64;
    let xtx_inv = x.transpose().matmul(&x)?.inverse()?;
    let se_gamma = (sigma2 * xtx_inv.get(1, 1)).sqrt();
    if se_gamma == 0.0 {
        return Err(Error::NonFinite("ADF standard error".into()));
    }
    let statistic = beta[1] / se_gamma;
    let p_value = p_value_from_table(statistic, n_eff);
    Ok(AdfResult { statistic, lag_order: lag, p_value, reject_null: p_value < 0.05 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim;
    use crate::timeseries::TimeSeries;

    fn ts(values: Vec<f64>) -> TimeSeries {
        TimeSeries::from_values(values, 12).unwrap()
    }

    #[test]
    fn random_walk_is_not_declared_stationary() {
        let s = ts(sim::simulate_random_walk(1.0, 500, 42));
        let r = adf_test(&s, LagOrder::Fixed(1)).unwrap();
        assert!(!r.reject_null, "stat {} p {}", r.statistic, r.p_value);
        assert!(r.p_value >= 0.05);
    }

    #[test]
    fn ar1_is_declared_stationary() {
        let s = ts(sim::simulate_ar1(0.3, 1.0, 500, 42));
        let r = adf_test(&s, LagOrder::Auto).unwrap();
        assert!(r.reject_null, "stat {} p {}", r.statistic, r.p_value);
        assert!(r.statistic < -4.0);
    }

    #[test]
    fn auto_lag_follows_cube_root_rule() {
        let s = ts(sim::simulate_ar1(0.2, 1.0, 108, 5));
        let r = adf_test(&s, LagOrder::Auto).unwrap();
        // (108-1)^(1/3) = 4.747 -> 4
        assert_eq!(r.lag_order, 4);
    }

    #[test]
    fn decision_is_exactly_p_below_alpha() {
        for seed in 0..20 {
            let s = ts(sim::simulate_random_walk(1.0, 200, seed));
            let r = adf_test(&s, LagOrder::Fixed(2)).unwrap();
            assert_eq!(r.reject_null, r.p_value < 0.05);
            assert!((0.0..=1.0).contains(&r.p_value));
        }
    }

    #[test]
    fn rejects_short_series() {
        let s = ts(vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(matches!(adf_test(&s, LagOrder::Fixed(1)), Err(Error::Size(_))));
    }

    #[test]
    fn p_value_interpolation_anchors() {
        // At the 5% critical value for n=500 the p-value is exactly 0.05.
        let p = p_value_from_table(-2.87, 500);
        assert!((p - 0.05).abs() < 1e-12);
        // Far right of the table clamps high, far left clamps low.
        assert_eq!(p_value_from_table(5.0, 500), 0.999);
        assert_eq!(p_value_from_table(-12.0, 500), 0.001);
    }
}
