//! Exact generating functions over rational power series, and a brute-force
//! enumeration oracle to check them against.

pub mod classes;
pub mod empty_book;
pub mod ladder;
pub mod oracle;
pub mod series;
pub mod tables;

pub use classes::{
    class_a, class_gf, d_pgf_as_printed, first_type2_index_law, first_type2_time_pgf,
    full_avalanche_pgf, t1_pgf, t1_split, t1_survival, PathClass, T1Split,
};
pub use empty_book::{
    first_trade_pgf_empty, first_trade_pgf_empty_as_printed, EmptyBookPgf, LowerIndex,
};
pub use ladder::{
    count_first_passage_paths, first_passage_phi, pgf_r, phi_polynomial, simplified_avalanche_pgf,
    simplified_moments, simplified_moments_from_pgf, simplified_variance_as_printed, survival_r,
    survival_r_by_sum, EpsilonPrime, LadderError, Moments,
};
pub use oracle::{
    brute_force_avalanche, brute_force_first_trade, brute_force_first_trade_split, AvalancheOracle,
    OracleError, TradeSplit,
};
pub use series::{rational, RationalSeries, SeriesError};
pub use tables::CellCheck;
