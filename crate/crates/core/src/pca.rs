//! Principal component analysis (placeholder).
