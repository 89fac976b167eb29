//! fincast: money-market instrument volume analysis and forecasting.
//!
//! The crate merges fortnight-keyed money-market, stock-index and
//! bank-rate tables into one modeling table, then drives two workflows
//! over it:
//!
//! * a time-series track — returns, seasonal decomposition, stationarity
//!   testing, ARIMA with automatic order search and Holt-Winters
//!   smoothing, each able to forecast the next months of volume;
//! * a regression track — OLS with inference, batch gradient descent,
//!   a cross-validated lasso path and backward subset selection,
//!   compared by validation RMSE.
//!
//! [`pipeline`] wires the whole thing end to end from a JSON config and
//! writes a machine-readable report plus CSV and SVG artifacts.

pub mod dataio;
pub mod error;
pub mod numerics;
pub mod pca;
pub mod pipeline;
pub mod regression;
pub mod sim;
pub mod timeseries;

pub use error::{Error, Result};
