//! Classical seasonal decomposition by centered moving average.

use super::{SeasonalMode, TimeSeries};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Trend, seasonal and remainder components of a series.
///
/// Trend and remainder are undefined at the ends where the centered
/// window does not fit. The seasonal component is one index per cycle
/// position; additive indices sum to 0, multiplicative indices average 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub mode: SeasonalMode,
    pub trend: Vec<Option<f64>>,
    /// Period-length seasonal index vector, position 0 aligned with the
    /// first observation.
    pub seasonal: Vec<f64>,
    pub remainder: Vec<Option<f64>>,
}

impl DecompositionResult {
    /// Seasonal value at observation index `t`.
    pub fn seasonal_at(&self, t: usize) -> f64 {
        self.seasonal[t % self.seasonal.len()]
    }

    /// CSV rendering with `date,observed,trend,seasonal,remainder` columns;
    /// undefined trend/remainder cells are left empty.
    pub fn to_csv_string(&self, s: &TimeSeries) -> String {
        let fmt = |v: &Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("date,observed,trend,seasonal,remainder\n");
        for (t, (date, value)) in s.times().iter().zip(s.values()).enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                date.format("%Y-%m-%d"),
                value,
                fmt(&self.trend[t]),
                self.seasonal_at(t),
                fmt(&self.remainder[t]),
            ));
        }
        out
    }
}

/// Centered moving average of window `period`; for even periods the two
/// half-weighted endpoints make it a 2 x period average.
fn centered_trend(values: &[f64], period: usize) -> Vec<Option<f64>> {
    let n = values.len();
    let mut trend = vec![None; n];
    let half = period / 2;
    if period % 2 == 0 {
        for t in half..n.saturating_sub(half) {
            let mut acc = 0.5 * (values[t - half] + values[t + half]);
            for j in (t - half + 1)..(t + half) {
                acc += values[j];
            }
            trend[t] = Some(acc / period as f64);
        }
    } else {
        for t in half..n.saturating_sub(half) {
            let acc: f64 = values[t - half..=t + half].iter().sum();
            trend[t] = Some(acc / period as f64);
        }
    }
    trend
}

/// Decomposes a series into trend, per-position seasonal indices and a
/// remainder that closes the identity wherever the trend is defined.
pub fn decompose(s: &TimeSeries, mode: SeasonalMode) -> Result<DecompositionResult> {
    let period = s.period();
    let n = s.len();
    if n < 2 * period {
        return Err(Error::Size(format!(
            "decomposition needs at least {} observations, got {n}",
            2 * period
        )));
    }
    let values = s.values();
    if mode == SeasonalMode::Multiplicative && values.iter().any(|&v| v <= 0.0) {
        return Err(Error::Domain(
            "multiplicative decomposition requires positive values".into(),
        ));
    }

    let trend = centered_trend(values, period);

    // Mean detrended value per cycle position.
    let mut sums = vec![0.0; period];
    let mut counts = vec![0usize; period];
    for (t, tr) in trend.iter().enumerate() {
        if let Some(tr) = tr {
            let detrended = match mode {
                SeasonalMode::Additive => values[t] - tr,
                SeasonalMode::Multiplicative => values[t] / tr,
            };
            sums[t % period] += detrended;
            counts[t % period] += 1;
        }
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::Size("every cycle position needs a detrended value".into()));
    }
    let mut seasonal: Vec<f64> = sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect();

    // Normalize: additive indices sum to 0, multiplicative average to 1.
    match mode {
        SeasonalMode::Additive => {
            let mean = seasonal.iter().sum::<f64>() / period as f64;
            for v in &mut seasonal {
                *v -= mean;
            }
        }
        SeasonalMode::Multiplicative => {
            let mean = seasonal.iter().sum::<f64>() / period as f64;
            for v in &mut seasonal {
                *v /= mean;
            }
        }
    }

    let remainder: Vec<Option<f64>> = trend
        .iter()
        .enumerate()
        .map(|(t, tr)| {
            tr.map(|tr| match mode {
                SeasonalMode::Additive => values[t] - tr - seasonal[t % period],
                SeasonalMode::Multiplicative => values[t] / (tr * seasonal[t % period]),
            })
        })
        .collect();

    Ok(DecompositionResult { mode, trend, seasonal, remainder })
}
