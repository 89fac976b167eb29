//! Regression model zoo (placeholder).
