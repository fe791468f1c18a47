//! Experiment runner (under construction).
