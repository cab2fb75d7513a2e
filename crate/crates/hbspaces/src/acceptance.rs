//! Acceptance suite (under construction).
