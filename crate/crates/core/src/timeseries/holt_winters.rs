//! Holt-Winters triple exponential smoothing with additive trend.
//!
//! State updates for the additive-seasonal form:
//!
//! ```text
//! level_t = alpha (v_t - s_{t-m}) + (1 - alpha)(level_{t-1} + trend_{t-1})
//! trend_t = beta (level_t - level_{t-1}) + (1 - beta) trend_{t-1}
//! s_t     = gamma (v_t - level_t) + (1 - gamma) s_{t-m}
//! ```
//!
//! In multiplicative-seasonal mode the subtractions involving the
//! seasonal state become divisions. The smoothing weights are chosen by
//! a coarse grid over `[0,1]^3` followed by a local simplex refinement,
//! minimizing the one-step-ahead squared-error sum.

use super::arima::DateStep;
use super::optim::nelder_mead;
use super::{Forecast, SeasonalMode, TimeSeries};
use crate::error::{Error, Result};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// A fitted Holt-Winters smoother.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoltWintersModel {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub seasonal_mode: SeasonalMode,
    /// Final level state.
    pub level: f64,
    /// Final trend state.
    pub trend: f64,
    /// Final seasonal states by cycle position (position 0 aligned with
    /// the first training observation).
    pub seasonal_states: Vec<f64>,
    /// Training one-step squared-error sum.
    pub sse: f64,
    period: usize,
    n_obs: usize,
    origin: NaiveDate,
    date_step: DateStep,
}

struct SmootherRun {
    sse: f64,
    level: f64,
    trend: f64,
    seasonal: Vec<f64>,
}

/// Runs the smoother once for fixed weights. Returns `None` when the
/// recursion degenerates (non-finite states or a nonpositive level in
/// multiplicative mode).
fn run_smoother(
    values: &[f64],
    period: usize,
    mode: SeasonalMode,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Option<SmootherRun> {
    let m = period;
    let first_mean = values[..m].iter().sum::<f64>() / m as f64;
    let second_mean = values[m..2 * m].iter().sum::<f64>() / m as f64;
    let mut level = first_mean;
    let mut trend = (second_mean - first_mean) / m as f64;
    let mut seasonal: Vec<f64> = match mode {
        SeasonalMode::Additive => values[..m].iter().map(|v| v - first_mean).collect(),
        SeasonalMode::Multiplicative => values[..m].iter().map(|v| v / first_mean).collect(),
    };

    let mut sse = 0.0;
    for (t, &v) in values.iter().enumerate().skip(m) {
        let pos = t % m;
        let s = seasonal[pos];
        let (forecast, deseasoned) = match mode {
            SeasonalMode::Additive => (level + trend + s, v - s),
            SeasonalMode::Multiplicative => {
                if s <= 0.0 {
                    return None;
                }
                ((level + trend) * s, v / s)
            }
        };
        let err = v - forecast;
        sse += err * err;

        let prev_level = level;
        level = alpha * deseasoned + (1.0 - alpha) * (level + trend);
        trend = beta * (level - prev_level) + (1.0 - beta) * trend;
        seasonal[pos] = match mode {
            SeasonalMode::Additive => gamma * (v - level) + (1.0 - gamma) * s,
            SeasonalMode::Multiplicative => {
                if level <= 0.0 {
                    return None;
                }
                gamma * (v / level) + (1.0 - gamma) * s
            }
        };
        if !level.is_finite() || !trend.is_finite() || !seasonal[pos].is_finite() {
            return None;
        }
    }
    Some(SmootherRun { sse, level, trend, seasonal })
}

/// Fits the smoothing weights on a one-step-ahead SSE criterion: a
/// 0.05-step grid over `[0,1]^3`, then Nelder-Mead refinement around the
/// best grid point.
pub fn fit_holt_winters(s: &TimeSeries, seasonal_mode: SeasonalMode) -> Result<HoltWintersModel> {
    let m = s.period();
    let n = s.len();
    if n < 2 * m + 1 {
        return Err(Error::Size(format!(
            "Holt-Winters needs at least {} observations for period {m}, got {n}",
            2 * m + 1
        )));
    }
    if seasonal_mode == SeasonalMode::Multiplicative && s.values().iter().any(|&v| v <= 0.0) {
        return Err(Error::Domain(
            "multiplicative Holt-Winters requires positive values".into(),
        ));
    }
    let values = s.values();

    let eval = |w: &[f64]| -> f64 {
        let (a, b, g) = (w[0], w[1], w[2]);
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || !(0.0..=1.0).contains(&g) {
            return f64::INFINITY;
        }
        run_smoother(values, m, seasonal_mode, a, b, g).map_or(f64::INFINITY, |r| r.sse)
    };

    let grid: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let mut best = (f64::INFINITY, [0.0, 0.0, 0.0]);
    for &a in &grid {
        for &b in &grid {
            for &g in &grid {
                let sse = eval(&[a, b, g]);
                if sse < best.0 {
                    best = (sse, [a, b, g]);
                }
            }
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Convergence {
            iterations: grid.len().pow(3),
            context: "Holt-Winters grid search found no stable weights".into(),
        });
    }

    let refined = nelder_mead(|w| eval(w), &best.1, &[0.025, 0.025, 0.025], 2000, 1e-8);
    let weights = if refined.best_value <= best.0 { refined.best } else { best.1.to_vec() };
    let (alpha, beta, gamma) = (
        weights[0].clamp(0.0, 1.0),
        weights[1].clamp(0.0, 1.0),
        weights[2].clamp(0.0, 1.0),
    );

    let run = run_smoother(values, m, seasonal_mode, alpha, beta, gamma)
        .ok_or_else(|| Error::NonFinite("Holt-Winters final pass".into()))?;
    Ok(HoltWintersModel {
        alpha,
        beta,
        gamma,
        seasonal_mode,
        level: run.level,
        trend: run.trend,
        seasonal_states: run.seasonal,
        sse: run.sse,
        period: m,
        n_obs: n,
        origin: s.last_time(),
        date_step: DateStep::of(s),
    })
}

impl HoltWintersModel {
    /// Level-plus-trend projection composed with the cycled seasonal state.
    pub fn forecast(&self, h: usize) -> Result<Forecast> {
        if h == 0 {
            return Err(Error::Size("forecast horizon must be at least 1".into()));
        }
        let m = self.period;
        let mut points = Vec::with_capacity(h);
        for k in 1..=h {
            let base = self.level + k as f64 * self.trend;
            let s = self.seasonal_states[(self.n_obs - 1 + k) % m];
            points.push(match self.seasonal_mode {
                SeasonalMode::Additive => base + s,
                SeasonalMode::Multiplicative => base * s,
            });
        }
        let dates = (1..=h).map(|k| self.date_step.advance(self.origin, k)).collect();
        Ok(Forecast { horizon: h, point_values: points, origin: self.origin, dates })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ts(values: Vec<f64>, period: usize) -> TimeSeries {
        TimeSeries::from_values(values, period).unwrap()
    }

    #[test]
    fn constant_series_forecasts_the_constant() {
        let model = fit_holt_winters(&ts(vec![42.0; 30], 12), SeasonalMode::Additive).unwrap();
        assert!(model.sse < 1e-18, "sse {}", model.sse);
        let f = model.forecast(12).unwrap();
        assert_eq!(f.point_values.len(), 12);
        for v in f.point_values {
            assert_abs_diff_eq!(v, 42.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn recovers_trended_seasonal_signal() {
        let pattern: Vec<f64> = (0..12).map(|i| 150.0 * ((i as f64) * 0.7).sin()).collect();
        let mean = pattern.iter().sum::<f64>() / 12.0;
        let pattern: Vec<f64> = pattern.iter().map(|v| v - mean).collect();
        let n = 144;
        let values: Vec<f64> =
            (0..n).map(|t| 2000.0 + 3.0 * t as f64 + pattern[t % 12]).collect();
        let model = fit_holt_winters(&ts(values, 12), SeasonalMode::Additive).unwrap();
        let f = model.forecast(12).unwrap();
        for (k, &got) in f.point_values.iter().enumerate() {
            let t = n + k;
            let want = 2000.0 + 3.0 * t as f64 + pattern[t % 12];
            let rel = (got - want).abs() / want.abs();
            assert!(rel < 1e-3, "step {k}: got {got}, want {want}, rel {rel}");
        }
    }

    #[test]
    fn optimized_weights_dominate_fixed_default() {
        let values: Vec<f64> = (0..60)
            .map(|t| 500.0 + 4.0 * t as f64 + 30.0 * ((t % 12) as f64 / 2.0).cos() + ((t * 37 % 17) as f64))
            .collect();
        let s = ts(values.clone(), 12);
        let model = fit_holt_winters(&s, SeasonalMode::Additive).unwrap();
        let fixed = run_smoother(&values, 12, SeasonalMode::Additive, 0.2, 0.1, 0.1).unwrap();
        assert!(model.sse <= fixed.sse + 1e-9, "{} vs {}", model.sse, fixed.sse);
    }

    #[test]
    fn multiplicative_mode_rejects_nonpositive_values() {
        let mut values = vec![10.0; 30];
        values[7] = 0.0;
        assert!(matches!(
            fit_holt_winters(&ts(values, 12), SeasonalMode::Multiplicative),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn multiplicative_fit_tracks_scaling_seasonality() {
        let factors = [1.2, 0.8, 1.1, 0.9];
        let n = 48;
        let values: Vec<f64> =
            (0..n).map(|t| (100.0 + 2.0 * t as f64) * factors[t % 4]).collect();
        let model = fit_holt_winters(&ts(values, 4), SeasonalMode::Multiplicative).unwrap();
        let f = model.forecast(4).unwrap();
        for (k, &got) in f.point_values.iter().enumerate() {
            let t = n + k;
            let want = (100.0 + 2.0 * t as f64) * factors[t % 4];
            assert!((got - want).abs() / want < 0.05, "step {k}: {got} vs {want}");
        }
    }
}
