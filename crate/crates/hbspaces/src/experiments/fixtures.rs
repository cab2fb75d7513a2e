//! Fixture loading (under construction).
