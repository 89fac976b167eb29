//! ARIMA estimation by conditional sum of squares, with automatic
//! order search.
//!
//! The model on the `d`-times differenced series `w_t` is
//!
//! ```text
//! z_t = w_t - mu
//! z_t = phi_1 z_{t-1} + .. + phi_p z_{t-p}
//!     + e_t + theta_1 e_{t-1} + .. + theta_q e_{t-q}
//! ```
//!
//! with `mu` the drift term. Residuals are computed by the recursion with
//! a zero-initialized presample and the coefficient vector is chosen by a
//! Nelder-Mead search over the stationary/invertible region from a zero
//! start. The Gaussian likelihood, AIC and BIC follow from the residual
//! variance.

use super::optim::nelder_mead;
use super::{difference, Forecast, LagOrder, TimeSeries};
use crate::error::{Error, Result};
use crate::timeseries::adf_test;
use chrono::{Months, NaiveDate};
use serde::{Deserialize, Serialize};

/// The (p, d, q) order triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Self {
        ArimaOrder { p, d, q }
    }
}

/// Calendar step between observations, inferred at fit time so forecasts
/// can extend the training calendar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DateStep {
    Monthly,
    Days(i64),
}

impl DateStep {
    pub(crate) fn of(s: &TimeSeries) -> DateStep {
        if s.len() < 2 {
            return DateStep::Monthly;
        }
        let monthly = s
            .times()
            .windows(2)
            .all(|w| w[0] + Months::new(1) == w[1]);
        if monthly {
            DateStep::Monthly
        } else {
            let mut gaps: Vec<i64> =
                s.times().windows(2).map(|w| (w[1] - w[0]).num_days()).collect();
            gaps.sort_unstable();
            DateStep::Days(gaps[gaps.len() / 2].max(1))
        }
    }

    pub(crate) fn advance(&self, origin: NaiveDate, k: usize) -> NaiveDate {
        match self {
            DateStep::Monthly => origin + Months::new(k as u32),
            DateStep::Days(step) => origin + chrono::Duration::days(step * k as i64),
        }
    }
}

/// A fitted ARIMA model with the state needed to forecast.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub drift: bool,
    /// Drift (mean of the differenced series); 0 when `drift` is false.
    pub drift_coeff: f64,
    pub ar_coeffs: Vec<f64>,
    pub ma_coeffs: Vec<f64>,
    /// Innovation variance, CSS / n_eff.
    pub sigma2: f64,
    pub log_likelihood: f64,
    pub aic: f64,
    pub bic: f64,
    /// Observations entering the CSS sum.
    pub n_eff: usize,

    origin: NaiveDate,
    date_step: DateStep,
    /// Last `p` mean-adjusted differenced values, most recent last.
    z_tail: Vec<f64>,
    /// Last `q` residuals, most recent last.
    resid_tail: Vec<f64>,
    /// Last value of each partial difference level `0..d`.
    level_tails: Vec<f64>,
}

/// True when all roots of `1 - sum c_i z^i` lie outside the unit circle,
/// decided by the Levinson step-down to reflection coefficients.
fn is_stable(coeffs: &[f64]) -> bool {
    let mut a = coeffs.to_vec();
    while let Some(&kappa) = a.last() {
        if !kappa.is_finite() || kappa.abs() >= 1.0 {
            return false;
        }
        let p = a.len();
        if p == 1 {
            return true;
        }
        let denom = 1.0 - kappa * kappa;
        a = (0..p - 1)
            .map(|i| (a[i] + kappa * a[p - 2 - i]) / denom)
            .collect();
    }
    true
}

/// Residual recursion with zero-initialized presample.
fn css_residuals(z: &[f64], ar: &[f64], ma: &[f64]) -> Vec<f64> {
    let n = z.len();
    let mut e = vec![0.0; n];
    for t in 0..n {
        let mut v = z[t];
        for (i, &phi) in ar.iter().enumerate() {
            if t > i {
                v -= phi * z[t - 1 - i];
            }
        }
        for (j, &theta) in ma.iter().enumerate() {
            if t > j {
                v -= theta * e[t - 1 - j];
            }
        }
        e[t] = v;
    }
    e
}

struct CssProblem<'a> {
    w: &'a [f64],
    p: usize,
    q: usize,
    drift: bool,
    /// Internal scale of the drift dimension, for even simplex conditioning.
    mu_scale: f64,
    penalty_base: f64,
}

impl CssProblem<'_> {
    fn unpack(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
        let ar = x[..self.p].to_vec();
        let ma = x[self.p..self.p + self.q].to_vec();
        let mu = if self.drift { x[self.p + self.q] * self.mu_scale } else { 0.0 };
        (ar, ma, mu)
    }

    fn objective(&self, x: &[f64]) -> f64 {
        let (ar, ma, mu) = self.unpack(x);
        let ma_as_ar: Vec<f64> = ma.iter().map(|t| -t).collect();
        if !is_stable(&ar) || !is_stable(&ma_as_ar) {
            let norm: f64 = x.iter().map(|v| v.abs()).sum();
            return self.penalty_base * (1e3 + norm);
        }
        let z: Vec<f64> = self.w.iter().map(|v| v - mu).collect();
        css_residuals(&z, &ar, &ma).iter().map(|e| e * e).sum()
    }
}

fn gaussian_log_likelihood(css: f64, n_eff: usize) -> (f64, f64) {
    let sigma2 = css / n_eff as f64;
    let safe = sigma2.max(1e-300);
    let ll = -0.5 * n_eff as f64 * ((2.0 * std::f64::consts::PI * safe).ln() + 1.0);
    (sigma2, ll)
}

/// Fits an ARIMA(p,d,q) model, optionally with drift, by minimizing the
/// conditional sum of squares.
pub fn fit_arima(s: &TimeSeries, order: ArimaOrder, drift: bool) -> Result<ArimaModel> {
    let ArimaOrder { p, d, q } = order;
    let n = s.len();
    if n <= d || n - d <= p + q + 5 {
        return Err(Error::Size(format!(
            "ARIMA({p},{d},{q}) needs more than {} observations, got {n}",
            d + p + q + 5
        )));
    }
    let w_series = difference(s, d)?;
    let w = w_series.values();
    let n_eff = w.len();
    let n_params = p + q + usize::from(drift);

    let mu_scale = (w.iter().map(|v| v.abs()).sum::<f64>() / n_eff as f64).max(1.0);
    let penalty_base = w.iter().map(|v| v * v).sum::<f64>().max(1.0);
    let problem = CssProblem { w, p, q, drift, mu_scale, penalty_base };

    let best = if n_params == 0 {
        Vec::new()
    } else {
        let start = vec![0.0; n_params];
        let steps = vec![0.1; n_params];
        let outcome =
            nelder_mead(|x| problem.objective(x), &start, &steps, 2000, 1e-8);
        if !outcome.converged {
            let model = build_model(s, &w_series, order, drift, &problem, &outcome.best)?;
            return Err(Error::ArimaNotConverged { iterations: outcome.iterations, model: Box::new(model) });
        }
        outcome.best
    };
    build_model(s, &w_series, order, drift, &problem, &best)
}

fn build_model(
    s: &TimeSeries,
    w_series: &TimeSeries,
    order: ArimaOrder,
    drift: bool,
    problem: &CssProblem<'_>,
    params: &[f64],
) -> Result<ArimaModel> {
    let ArimaOrder { p, d, q } = order;
    let (ar, ma, mu) = problem.unpack(params);
    let w = w_series.values();
    let n_eff = w.len();
    let z: Vec<f64> = w.iter().map(|v| v - mu).collect();
    let residuals = css_residuals(&z, &ar, &ma);
    let css: f64 = residuals.iter().map(|e| e * e).sum();
    let (sigma2, log_likelihood) = gaussian_log_likelihood(css, n_eff);
    let k = (p + q + usize::from(drift) + 1) as f64;
    let aic = 2.0 * k - 2.0 * log_likelihood;
    let bic = k * (n_eff as f64).ln() - 2.0 * log_likelihood;

    // Tails for forecasting: partial-difference levels 0..d of the raw
    // series, plus the recent z and residual history.
    let mut level_tails = Vec::with_capacity(d);
    let mut level = s.values().to_vec();
    for _ in 0..d {
        level_tails.push(*level.last().unwrap());
        level = level.windows(2).map(|pair| pair[1] - pair[0]).collect();
    }
    let z_tail = z[z.len().saturating_sub(p)..].to_vec();
    let resid_tail = residuals[residuals.len().saturating_sub(q)..].to_vec();

    Ok(ArimaModel {
        order,
        drift,
        drift_coeff: mu,
        ar_coeffs: ar,
        ma_coeffs: ma,
        sigma2,
        log_likelihood,
        aic,
        bic,
        n_eff,
        origin: s.last_time(),
        date_step: DateStep::of(s),
        z_tail,
        resid_tail,
        level_tails,
    })
}

impl ArimaModel {
    /// Iterates the difference equation with future innovations at zero,
    /// then inverts the differencing and re-applies the drift.
    pub fn forecast(&self, h: usize) -> Result<Forecast> {
        if h == 0 {
            return Err(Error::Size("forecast horizon must be at least 1".into()));
        }
        let mut z_hist = self.z_tail.clone();
        let mut e_hist = self.resid_tail.clone();
        let mut tails = self.level_tails.clone();
        let mut points = Vec::with_capacity(h);
        for _ in 0..h {
            let mut z_next = 0.0;
            for (i, &phi) in self.ar_coeffs.iter().enumerate() {
                if z_hist.len() > i {
                    z_next += phi * z_hist[z_hist.len() - 1 - i];
                }
            }
            for (j, &theta) in self.ma_coeffs.iter().enumerate() {
                if e_hist.len() > j {
                    z_next += theta * e_hist[e_hist.len() - 1 - j];
                }
            }
            z_hist.push(z_next);
            e_hist.push(0.0);
            let w_next = z_next + self.drift_coeff;
            let point = if self.order.d == 0 {
                w_next
            } else {
                let mut x = w_next;
                for tail in tails.iter_mut().rev() {
                    *tail += x;
                    x = *tail;
                }
                tails[0]
            };
            points.push(point);
        }
        let dates = (1..=h).map(|k| self.date_step.advance(self.origin, k)).collect();
        Ok(Forecast { horizon: h, point_values: points, origin: self.origin, dates })
    }

    /// One-line description, e.g. `ARIMA(1,1,2) with drift`.
    pub fn describe_order(&self) -> String {
        let ArimaOrder { p, d, q } = self.order;
        if self.drift {
            format!("ARIMA({p},{d},{q}) with drift")
        } else {
            format!("ARIMA({p},{d},{q})")
        }
    }
}

/// Search bounds for [`auto_arima`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoArimaOptions {
    pub p_max: usize,
    pub q_max: usize,
    pub d_max: usize,
}

impl Default for AutoArimaOptions {
    fn default() -> Self {
        AutoArimaOptions { p_max: 5, q_max: 5, d_max: 2 }
    }
}

/// Automatic order selection:
///
/// 1. `d` is the smallest differencing order whose result the ADF test
///    declares stationary (falling back to `d_max`);
/// 2. every (p, q) in the grid is fitted, with drift whenever `d >= 1`;
/// 3. the minimum-AIC fit wins, ties broken toward smaller `p + q`,
///    then smaller `p`.
pub fn auto_arima(s: &TimeSeries, opts: AutoArimaOptions) -> Result<ArimaModel> {
    let mut d = opts.d_max;
    for cand in 0..=opts.d_max {
        match difference(s, cand).and_then(|w| adf_test(&w, LagOrder::Auto)) {
            Ok(result) if result.reject_null => {
                d = cand;
                break;
            }
            _ => {}
        }
    }
    let drift = d >= 1;

    let mut candidates: Vec<(usize, usize)> = (0..=opts.p_max)
        .flat_map(|p| (0..=opts.q_max).map(move |q| (p, q)))
        .collect();
    candidates.sort_by_key(|&(p, q)| (p + q, p));

    let mut best: Option<ArimaModel> = None;
    for (p, q) in candidates {
        let Ok(model) = fit_arima(s, ArimaOrder::new(p, d, q), drift) else {
            continue;
        };
        // Strict improvement keeps the earlier (sparser) candidate on ties.
        if best.as_ref().is_none_or(|b| model.aic < b.aic) {
            best = Some(model);
        }
    }
    best.ok_or_else(|| Error::Convergence {
        iterations: 0,
        context: format!("auto ARIMA search with d={d}: no candidate converged"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim;
    use approx::assert_abs_diff_eq;

    fn ts(values: Vec<f64>) -> TimeSeries {
        TimeSeries::from_values(values, 12).unwrap()
    }

    #[test]
    fn stability_check_matches_known_cases() {
        assert!(is_stable(&[]));
        assert!(is_stable(&[0.5]));
        assert!(!is_stable(&[1.1]));
        assert!(is_stable(&[0.5, 0.4]));
        assert!(!is_stable(&[0.5, 0.6]));
    }

    #[test]
    fn white_noise_log_likelihood_is_closed_form() {
        let vals = sim::simulate_white_noise(1.3, 400, 17);
        let model = fit_arima(&ts(vals.clone()), ArimaOrder::new(0, 0, 0), false).unwrap();
        let n = vals.len() as f64;
        let sigma2 = vals.iter().map(|v| v * v).sum::<f64>() / n;
        let expect = -0.5 * n * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0);
        assert_abs_diff_eq!(model.log_likelihood, expect, epsilon = 1e-6);
        assert_abs_diff_eq!(model.sigma2, sigma2, epsilon = 1e-12);
        // AIC/BIC identities with k = p + q + drift + 1 = 1.
        assert_abs_diff_eq!(model.aic, 2.0 - 2.0 * model.log_likelihood, epsilon = 1e-9);
        assert_abs_diff_eq!(
            model.bic,
            n.ln() - 2.0 * model.log_likelihood,
            epsilon = 1e-9
        );
    }

    #[test]
    fn recovers_ar1_coefficient() {
        let vals = sim::simulate_ar1(0.7, 1.0, 500, 21);
        let model = fit_arima(&ts(vals), ArimaOrder::new(1, 0, 0), false).unwrap();
        assert_abs_diff_eq!(model.ar_coeffs[0], 0.7, epsilon = 0.1);
    }

    #[test]
    fn ramp_with_drift_fits_exactly() {
        let slope = 12.5;
        let vals: Vec<f64> = (0..50).map(|t| 3.0 + slope * t as f64).collect();
        let model = fit_arima(&ts(vals), ArimaOrder::new(0, 1, 0), true).unwrap();
        assert_abs_diff_eq!(model.drift_coeff, slope, epsilon = 1e-6);
        assert!(model.sigma2 < 1e-10, "sigma2 {}", model.sigma2);
        let f = model.forecast(3).unwrap();
        let last = 3.0 + slope * 49.0;
        assert_abs_diff_eq!(f.point_values[0], last + slope, epsilon = 1e-5);
        assert_abs_diff_eq!(f.point_values[1], last + 2.0 * slope, epsilon = 1e-5);
        assert_abs_diff_eq!(f.point_values[2], last + 3.0 * slope, epsilon = 1e-5);
    }

    #[test]
    fn ar1_forecast_decays_by_hand() {
        // phi = 0.5, mean 0, last value 8 -> forecasts 4, 2.
        let mut model = fit_arima(
            &ts(sim::simulate_ar1(0.5, 1.0, 300, 3)),
            ArimaOrder::new(1, 0, 0),
            false,
        )
        .unwrap();
        model.ar_coeffs = vec![0.5];
        model.z_tail = vec![8.0];
        let f = model.forecast(2).unwrap();
        assert_abs_diff_eq!(f.point_values[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.point_values[1], 2.0, epsilon = 1e-12);
        assert_eq!(f.horizon, 2);
        assert_eq!(f.point_values.len(), 2);
    }

    #[test]
    fn auto_arima_prefers_empty_model_on_white_noise() {
        let vals = sim::simulate_white_noise(1.0, 300, 8);
        let model = auto_arima(&ts(vals), AutoArimaOptions { p_max: 2, q_max: 2, d_max: 2 }).unwrap();
        assert_eq!(model.order.p + model.order.q, 0);
        assert_eq!(model.order.d, 0);
        assert!(!model.drift);
    }

    #[test]
    fn auto_arima_recovers_differencing_order() {
        let vals = sim::simulate_arima(&[-0.55], 1, &[-0.11, -0.66], 921.35, 400.0, 500, 77);
        let auto = auto_arima(&ts(vals.clone()), AutoArimaOptions { p_max: 3, q_max: 3, d_max: 2 }).unwrap();
        assert_eq!(auto.order.d, 1);
        assert!(auto.drift);
        let truth = fit_arima(&ts(vals), ArimaOrder::new(1, 1, 2), true).unwrap();
        assert!(
            auto.aic <= truth.aic + 2.0,
            "auto AIC {} vs true-order {}",
            auto.aic,
            truth.aic
        );
    }

    #[test]
    fn forecast_rejects_zero_horizon() {
        let model = fit_arima(&ts(sim::simulate_white_noise(1.0, 50, 1)), ArimaOrder::new(0, 0, 0), false)
            .unwrap();
        assert!(model.forecast(0).is_err());
        assert_eq!(model.forecast(12).unwrap().point_values.len(), 12);
    }
}
