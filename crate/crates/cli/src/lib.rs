//! Command implementations for the `algcochain` binary.

pub mod expr;
pub mod render;
