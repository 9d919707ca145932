//! Random-walk limit order book: simulation, exact generating functions and
//! scaling limits for trade avalanches.

// Quadrature nodes and reference values are kept at their published precision.
#![allow(clippy::excessive_precision)]

pub mod avalanche_stats;
pub mod exact_series;
pub mod scaling_limits;
pub mod verify;
pub mod walk_and_book;
