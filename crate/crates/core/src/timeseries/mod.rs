//! Time-series analysis and forecasting.
//!
//! Covers the full univariate workflow: returns and differencing,
//! autocorrelation and partial autocorrelation, the augmented
//! Dickey-Fuller stationarity test, classical seasonal decomposition,
//! ARIMA estimation with automatic order search, and Holt-Winters
//! triple exponential smoothing, all sharing one [`TimeSeries`] input.

mod adf;
mod arima;
mod decompose;
mod holt_winters;
pub(crate) mod optim;

pub use adf::{adf_test, AdfResult, LagOrder};
pub use arima::{auto_arima, fit_arima, ArimaModel, ArimaOrder, AutoArimaOptions};
pub use decompose::{decompose, DecompositionResult};
pub use holt_winters::{fit_holt_winters, HoltWintersModel};

use crate::error::{Error, Result};
use chrono::{Datelike, Months, NaiveDate};
use serde::{Deserialize, Serialize};

/// Whether seasonal effects combine with the rest of the signal by
/// addition or multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeasonalMode {
    Additive,
    Multiplicative,
}

/// Ordered observations with a declared seasonal period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    times: Vec<NaiveDate>,
    values: Vec<f64>,
    period: usize,
}

impl TimeSeries {
    /// Builds a series from paired dates and values.
    ///
    /// Dates must be strictly increasing, values finite, and the period
    /// (observations per seasonal cycle, 12 for monthly data) at least 1.
    pub fn new(times: Vec<NaiveDate>, values: Vec<f64>, period: usize) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Dimension(format!(
                "{} dates against {} values",
                times.len(),
                values.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::Size("a series needs at least one observation".into()));
        }
        if period < 1 {
            return Err(Error::Config("seasonal period must be at least 1".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("series dates must be strictly increasing".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("series value {bad}")));
        }
        Ok(TimeSeries { times, values, period })
    }

    /// Convenience constructor with synthetic monthly dates, for data that
    /// has no meaningful calendar.
    pub fn from_values(values: Vec<f64>, period: usize) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).unwrap();
        let times = (0..values.len())
            .map(|i| start + Months::new(i as u32))
            .collect();
        Self::new(times, values, period)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> &[NaiveDate] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn last_time(&self) -> NaiveDate {
        *self.times.last().unwrap()
    }

    /// Dates for `h` steps past the end of the series: calendar months for
    /// monthly data, otherwise the median day gap.
    pub fn future_dates(&self, h: usize) -> Vec<NaiveDate> {
        let step = arima::DateStep::of(self);
        (1..=h).map(|k| step.advance(self.last_time(), k)).collect()
    }

    /// Calendar month (1-12) of each seasonal position when the period is
    /// 12, anchored at the first observation.
    pub fn position_months(&self) -> Vec<u32> {
        let first = self.times[0].month();
        (0..self.period)
            .map(|i| ((first as usize - 1 + i) % 12 + 1) as u32)
            .collect()
    }
}

/// Point forecast over a fixed horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forecast {
    pub horizon: usize,
    pub point_values: Vec<f64>,
    /// Last training date.
    pub origin: NaiveDate,
    /// Dates of the forecast points, continuing the training calendar.
    pub dates: Vec<NaiveDate>,
}

impl Forecast {
    /// CSV rendering with `date,point` columns.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("date,point\n");
        for (d, p) in self.dates.iter().zip(&self.point_values) {
            out.push_str(&format!("{},{}\n", d.format("%Y-%m-%d"), p));
        }
        out
    }
}

/// Period-over-period relative changes: `r_t = (v_t - v_{t-1}) / v_{t-1}`.
///
/// Requires every value positive; the result drops the first date.
pub fn monthly_returns(s: &TimeSeries) -> Result<TimeSeries> {
    if s.len() < 2 {
        return Err(Error::Size("returns need at least 2 observations".into()));
    }
    if let Some(bad) = s.values.iter().find(|&&v| v <= 0.0) {
        return Err(Error::Domain(format!("returns undefined for nonpositive value {bad}")));
    }
    let values = s.values.windows(2).map(|w| (w[1] - w[0]) / w[0]).collect();
    TimeSeries::new(s.times[1..].to_vec(), values, s.period)
}

/// `d`-fold first differences; the result is `d` observations shorter.
pub fn difference(s: &TimeSeries, d: usize) -> Result<TimeSeries> {
    if s.len() <= d {
        return Err(Error::Size(format!(
            "cannot difference {} observations {d} times",
            s.len()
        )));
    }
    let mut values = s.values.clone();
    for _ in 0..d {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    TimeSeries::new(s.times[d..].to_vec(), values, s.period)
}

/// Autocorrelation function for lags `0..=max_lag`.
///
/// The lag-k product sum is averaged over its `n - k` terms and the
/// variance over all `n`, so perfectly (anti)periodic series reach +/-1.
pub fn acf(s: &TimeSeries, max_lag: usize) -> Result<Vec<f64>> {
    acf_values(&s.values, max_lag)
}

pub(crate) fn acf_values(values: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = values.len();
    if n <= max_lag {
        return Err(Error::Size(format!("max lag {max_lag} needs more than {n} observations")));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return Err(Error::DegenerateColumn("constant series has no autocorrelation".into()));
    }
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(1.0);
    for k in 1..=max_lag {
        let cov: f64 = (0..n - k)
            .map(|t| (values[t] - mean) * (values[t + k] - mean))
            .sum::<f64>()
            / (n - k) as f64;
        out.push(cov / var);
    }
    Ok(out)
}

/// Partial autocorrelation for lags `1..=max_lag` via the Durbin-Levinson
/// recursion on the sample ACF.
pub fn pacf(s: &TimeSeries, max_lag: usize) -> Result<Vec<f64>> {
    let rho = acf(s, max_lag)?;
    durbin_levinson_pacf(&rho)
}

/// Runs Durbin-Levinson on autocorrelations `rho[0..=K]` (with `rho[0] = 1`)
/// and returns the reflection coefficients `phi_{k,k}` for `k = 1..=K`.
pub(crate) fn durbin_levinson_pacf(rho: &[f64]) -> Result<Vec<f64>> {
    let max_lag = rho.len() - 1;
    let mut pacf = Vec::with_capacity(max_lag);
    if max_lag == 0 {
        return Ok(pacf);
    }
    let mut phi_prev = vec![rho[1]];
    let mut v = 1.0 - rho[1] * rho[1];
    pacf.push(rho[1]);
    for k in 2..=max_lag {
        if v.abs() < 1e-14 {
            return Err(Error::DegenerateColumn(format!(
                "prediction variance vanished at lag {k}"
            )));
        }
        let mut acc = rho[k];
        for (j, &p) in phi_prev.iter().enumerate() {
            acc -= p * rho[k - 1 - j];
        }
        let phi_kk = acc / v;
        let mut phi = Vec::with_capacity(k);
        for j in 0..k - 1 {
            phi.push(phi_prev[j] - phi_kk * phi_prev[k - 2 - j]);
        }
        phi.push(phi_kk);
        v *= 1.0 - phi_kk * phi_kk;
        pacf.push(phi_kk);
        phi_prev = phi;
    }
    Ok(pacf)
}
