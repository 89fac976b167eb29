//! Pipeline orchestration (placeholder).
