//! Semiclassical-regime analysis of packets in a constant field.

mod ratios;
mod report;
mod verdict;

pub use ratios::*;
pub use report::*;
pub use verdict::*;
