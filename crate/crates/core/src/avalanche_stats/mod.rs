//! Avalanche lengths from trade sequences and their Monte Carlo distributions.

pub mod avalanche;
pub mod montecarlo;

pub use avalanche::{
    full_avalanche_length, simplified_avalanche_from_trades, simplified_avalanche_length,
    AvalancheMode, AvalancheOutcome, AvalancheRecord, Epsilon, WindowError, WindowTracker,
};
pub use montecarlo::{
    estimate_distribution, simulate_path, AvalancheConfig, ConfigError, EmpiricalDistribution,
    MomentsError, Quantity, SampleMoments,
};
