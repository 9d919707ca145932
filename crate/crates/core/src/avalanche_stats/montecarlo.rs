//! Seeded Monte Carlo estimates of avalanche and first-trade distributions.
//!
//! Path `i` of a run draws its steps from `RngStream { master_seed, stream_index: i }`
//! and is simulated only until the requested quantity is resolved or the
//! horizon is reached. Per-path results are merged with commutative counts,
//! so a run is reproducible for any number of worker threads.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use super::avalanche::{AvalancheMode, Epsilon, WindowTracker};
use crate::walk_and_book::{AskTracker, BookState, InitMode, RngStream, SpreadParam, TradeKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("n_paths must be at least 1")]
    NoPaths,
    #[error("horizon must be at least 1 step")]
    ZeroHorizon,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MomentsError {
    #[error("no uncensored samples; moments are undefined")]
    NoSamples,
    #[error("need at least 2 uncensored samples, got {0}")]
    TooFewSamples(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    SimplifiedLength,
    FullLength,
    /// Time of the first trade after time 0.
    FirstTradeTime,
    /// 1-based index, among trades after time 0, of the first Type II trade.
    FirstTypeIIIndex,
    /// Time of the first Type II trade after time 0.
    TimeToFirstTypeII,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::SimplifiedLength,
        Quantity::FullLength,
        Quantity::FirstTradeTime,
        Quantity::FirstTypeIIIndex,
        Quantity::TimeToFirstTypeII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::SimplifiedLength => "simplified-length",
            Quantity::FullLength => "full-length",
            Quantity::FirstTradeTime => "first-trade-time",
            Quantity::FirstTypeIIIndex => "first-type2-index",
            Quantity::TimeToFirstTypeII => "time-to-first-type2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AvalancheConfig {
    pub mu: SpreadParam,
    pub epsilon: Epsilon,
    pub horizon: u64,
    pub n_paths: u64,
    pub init_mode: InitMode,
    pub master_seed: u64,
}

impl AvalancheConfig {
    /// Full-book config with the default horizon `64 epsilon + 64 mu^2`.
    pub fn new(mu: SpreadParam, epsilon: Epsilon, n_paths: u64, master_seed: u64) -> Self {
        Self {
            mu,
            epsilon,
            horizon: Self::default_horizon(mu, epsilon),
            n_paths,
            init_mode: InitMode::FullBook,
            master_seed,
        }
    }

    pub fn default_horizon(mu: SpreadParam, epsilon: Epsilon) -> u64 {
        64 * epsilon.get() + 64 * mu.ticks() as u64 * mu.ticks() as u64
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_mode(mut self, mode: InitMode) -> Self {
        self.init_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_paths == 0 {
            return Err(ConfigError::NoPaths);
        }
        if self.horizon == 0 {
            return Err(ConfigError::ZeroHorizon);
        }
        Ok(())
    }
}

/// Tally of a nonnegative integer quantity over simulated paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    pub counts: BTreeMap<u64, u64>,
    /// Uncensored samples; equals the sum of `counts`.
    pub n_samples: u64,
    pub censored: u64,
    pub master_seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleMoments {
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
}

impl EmpiricalDistribution {
    pub fn from_samples(samples: impl IntoIterator<Item = Option<u64>>, master_seed: u64) -> Self {
        let mut tally = Tally::default();
        for s in samples {
            tally.push(s);
        }
        tally.into_distribution(master_seed)
    }

    pub fn n_paths(&self) -> u64 {
        self.n_samples + self.censored
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// `p_hat = count / n_samples`; 0 when there are no samples.
    pub fn probability(&self, value: u64) -> f64 {
        if self.n_samples == 0 {
            return 0.0;
        }
        self.count(value) as f64 / self.n_samples as f64
    }

    /// Binomial standard error `sqrt(p (1 - p) / n)` evaluated at `p`.
    pub fn binomial_se(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.n_samples as f64).sqrt()
    }

    /// Normal-approximation interval `p_hat -/+ z sqrt(p_hat (1 - p_hat) / n)`.
    pub fn confidence_interval(&self, value: u64, z: f64) -> (f64, f64) {
        let p = self.probability(value);
        let half = z * self.binomial_se(p);
        (p - half, p + half)
    }

    /// Estimate of `P[X > value]`.
    pub fn tail_probability(&self, value: u64) -> f64 {
        if self.n_samples == 0 {
            return 0.0;
        }
        let above: u64 = self.counts.range(value + 1..).map(|(_, &c)| c).sum();
        above as f64 / self.n_samples as f64
    }

    /// Unbiased mean and variance of the uncensored samples with analytic
    /// standard errors.
    pub fn sample_moments(&self) -> Result<SampleMoments, MomentsError> {
        let n = self.n_samples;
        match n {
            0 => return Err(MomentsError::NoSamples),
            1 => return Err(MomentsError::TooFewSamples(1)),
            _ => {}
        }
        let nf = n as f64;
        let mean = self
            .counts
            .iter()
            .map(|(&v, &c)| v as f64 * c as f64)
            .sum::<f64>()
            / nf;
        let central = |k: i32| {
            self.counts
                .iter()
                .map(|(&v, &c)| (v as f64 - mean).powi(k) * c as f64)
                .sum::<f64>()
                / nf
        };
        let m2 = central(2);
        let m4 = central(4);
        let variance = m2 * nf / (nf - 1.0);
        let var_of_var = ((m4 - (nf - 3.0) / (nf - 1.0) * variance * variance) / nf).max(0.0);
        Ok(SampleMoments {
            mean,
            variance,
            mean_se: (variance / nf).sqrt(),
            variance_se: var_of_var.sqrt(),
        })
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    counts: BTreeMap<u64, u64>,
    n_samples: u64,
    censored: u64,
}

impl Tally {
    fn push(&mut self, sample: Option<u64>) {
        match sample {
            Some(v) => {
                *self.counts.entry(v).or_insert(0) += 1;
                self.n_samples += 1;
            }
            None => self.censored += 1,
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (v, c) in other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
        self.n_samples += other.n_samples;
        self.censored += other.censored;
        self
    }

    fn into_distribution(self, master_seed: u64) -> EmpiricalDistribution {
        EmpiricalDistribution {
            counts: self.counts,
            n_samples: self.n_samples,
            censored: self.censored,
            master_seed,
        }
    }
}

/// Trade source for one path: the best-ask recursion for a full book, the
/// explicit volume map for an empty one.
enum Market {
    Full { ask: AskTracker, last_level: i64 },
    Empty { book: BookState, price: i64 },
}

impl Market {
    fn open(mode: InitMode, mu: SpreadParam, epsilon: Epsilon) -> Self {
        match mode {
            InitMode::FullBook => Market::Full {
                ask: AskTracker::new(mu),
                last_level: 0,
            },
            InitMode::EmptyBook => Market::Empty {
                book: BookState::open(InitMode::EmptyBook, mu, epsilon.get()).0,
                price: 0,
            },
        }
    }

    #[inline]
    fn step(&mut self, up: bool) -> Option<TradeKind> {
        match self {
            Market::Full { ask, last_level } => {
                if !ask.step(up) {
                    return None;
                }
                let level = ask.price();
                let kind = if level > *last_level {
                    TradeKind::TypeI
                } else {
                    TradeKind::TypeII
                };
                *last_level = level;
                Some(kind)
            }
            Market::Empty { book, price } => {
                *price += if up { 1 } else { -1 };
                book.step(*price).expect("unit step").map(|t| t.kind)
            }
        }
    }
}

/// Simulates path `index` until `quantity` resolves; `None` if censored by the horizon.
pub fn simulate_path(config: &AvalancheConfig, quantity: Quantity, index: u64) -> Option<u64> {
    let mut steps = RngStream::new(config.master_seed, index).steps();
    let eps = config.epsilon;
    let full_book = config.init_mode == InitMode::FullBook;

    if quantity == Quantity::SimplifiedLength {
        let mut window = WindowTracker::new(eps, 0);
        let (mut price, mut max) = (0i64, 0i64);
        for n in 1..=config.horizon {
            price += if steps.next_up() { 1 } else { -1 };
            let ladder = price > max;
            max = max.max(price);
            let hit = ladder.then_some(TradeKind::TypeI);
            if let Some(r) = window.observe(n, hit, AvalancheMode::Simplified) {
                return Some(r.length);
            }
        }
        return None;
    }

    let mut market = Market::open(config.init_mode, config.mu, eps);
    let mut window = full_book.then(|| WindowTracker::new(eps, 0));
    let mut trades_after_zero = 0u64;
    for n in 1..=config.horizon {
        let trade = market.step(steps.next_up());
        match quantity {
            Quantity::FullLength => match (&mut window, trade) {
                (Some(w), _) => {
                    if let Some(r) = w.observe(n, trade, AvalancheMode::Full) {
                        return Some(r.length);
                    }
                }
                // Empty book: the avalanche is anchored at the first trade.
                (None, Some(_)) => window = Some(WindowTracker::new(eps, n)),
                (None, None) => {}
            },
            Quantity::FirstTradeTime => {
                if trade.is_some() {
                    return Some(n);
                }
            }
            Quantity::FirstTypeIIIndex => {
                if let Some(kind) = trade {
                    trades_after_zero += 1;
                    if kind == TradeKind::TypeII {
                        return Some(trades_after_zero);
                    }
                }
            }
            Quantity::TimeToFirstTypeII => {
                if trade == Some(TradeKind::TypeII) {
                    return Some(n);
                }
            }
            Quantity::SimplifiedLength => unreachable!(),
        }
    }
    None
}

/// Monte Carlo distribution of `quantity` over `config.n_paths` seeded paths.
pub fn estimate_distribution(
    config: &AvalancheConfig,
    quantity: Quantity,
) -> Result<EmpiricalDistribution, ConfigError> {
    config.validate()?;
    let tally = (0..config.n_paths)
        .into_par_iter()
        .fold(Tally::default, |mut t, i| {
            t.push(simulate_path(config, quantity, i));
            t
        })
        .reduce(Tally::default, Tally::merge);
    Ok(tally.into_distribution(config.master_seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avalanche_stats::avalanche::{full_avalanche_length, simplified_avalanche_length};
    use crate::walk_and_book::{detect_trades, generate_walk};

    fn config(m: i64, e: u64, n: u64) -> AvalancheConfig {
        AvalancheConfig::new(SpreadParam::new(m).unwrap(), Epsilon::new(e).unwrap(), n, 7)
    }

    #[test]
    fn default_horizon() {
        assert_eq!(config(2, 3, 1).horizon, 64 * 3 + 64 * 4);
    }

    #[test]
    fn invalid_configs() {
        assert_eq!(
            estimate_distribution(&config(1, 1, 0), Quantity::FullLength),
            Err(ConfigError::NoPaths)
        );
        assert_eq!(
            estimate_distribution(&config(1, 1, 5).with_horizon(0), Quantity::FullLength),
            Err(ConfigError::ZeroHorizon)
        );
    }

    #[test]
    fn online_simulation_matches_batch_functions() {
        for (m, e) in [(1, 1), (2, 3), (3, 2)] {
            let cfg = config(m, e, 1).with_horizon(200);
            let mu = cfg.mu;
            for i in 0..300 {
                let path = generate_walk(&RngStream::new(cfg.master_seed, i), 200);
                assert_eq!(
                    simulate_path(&cfg, Quantity::SimplifiedLength, i),
                    simplified_avalanche_length(&path, cfg.epsilon).length()
                );
                assert_eq!(
                    simulate_path(&cfg, Quantity::FullLength, i),
                    full_avalanche_length(&path, mu, cfg.epsilon, InitMode::FullBook).length()
                );
                let trades = detect_trades(&path, mu, InitMode::FullBook, e);
                let after: Vec<_> = trades.iter().filter(|t| t.time > 0).collect();
                assert_eq!(
                    simulate_path(&cfg, Quantity::FirstTradeTime, i),
                    after.first().map(|t| t.time)
                );
                let first2 = after.iter().position(|t| t.kind == TradeKind::TypeII);
                assert_eq!(
                    simulate_path(&cfg, Quantity::FirstTypeIIIndex, i),
                    first2.map(|k| k as u64 + 1)
                );
                assert_eq!(
                    simulate_path(&cfg, Quantity::TimeToFirstTypeII, i),
                    first2.map(|k| after[k].time)
                );

                let empty = cfg.with_mode(InitMode::EmptyBook);
                assert_eq!(
                    simulate_path(&empty, Quantity::FullLength, i),
                    full_avalanche_length(&path, mu, cfg.epsilon, InitMode::EmptyBook).length()
                );
            }
        }
    }

    #[test]
    fn tallies_are_consistent() {
        let d = estimate_distribution(&config(2, 2, 2000), Quantity::FullLength).unwrap();
        assert_eq!(d.counts.values().sum::<u64>(), d.n_samples);
        assert_eq!(d.n_paths(), 2000);
        let total: f64 = d.counts.keys().map(|&v| d.probability(v)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let (lo, hi) = d.confidence_interval(0, 4.0);
        assert!(lo < d.probability(0) && d.probability(0) < hi);
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let cfg = config(2, 3, 3000);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_distribution(&cfg, Quantity::FullLength).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn degenerate_distribution_has_zero_variance() {
        let d = EmpiricalDistribution::from_samples([Some(4), Some(4), Some(4)], 0);
        let m = d.sample_moments().unwrap();
        assert_eq!((m.mean, m.variance), (4.0, 0.0));
    }

    #[test]
    fn moments_need_samples() {
        let d = EmpiricalDistribution::from_samples([None, None], 0);
        assert_eq!(d.sample_moments(), Err(MomentsError::NoSamples));
        let d = EmpiricalDistribution::from_samples([Some(1), None], 0);
        assert_eq!(d.sample_moments(), Err(MomentsError::TooFewSamples(1)));
    }

    #[test]
    fn sample_moments_small_case() {
        let d = EmpiricalDistribution::from_samples([Some(1), Some(2), Some(3), Some(6)], 0);
        let m = d.sample_moments().unwrap();
        assert!((m.mean - 3.0).abs() < 1e-12);
        // Deviations -2, -1, 0, 3: sum of squares 14 over 3.
        assert!((m.variance - 14.0 / 3.0).abs() < 1e-12);
        assert!((d.tail_probability(2) - 0.5).abs() < 1e-12);
    }
}
