//! Exhaustive path enumeration through the order-book dynamics.
//!
//! Every path of up to `max_len` steps is replayed with [`BookState`]; a
//! branch stops as soon as its outcome is decided, and an outcome decided at
//! depth `n` carries weight `2^-n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::avalanche_stats::{AvalancheMode, Epsilon, WindowTracker};
use crate::walk_and_book::{BookState, InitMode, SpreadParam, TradeKind};

/// Longest enumeration accepted: `2^26` leaves.
pub const MAX_ORACLE_LEN: usize = 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration over paths of length {requested} refused; the limit is {limit}")]
    TooLong { requested: usize, limit: usize },
}

fn check_len(max_len: usize) -> Result<(), OracleError> {
    if max_len > MAX_ORACLE_LEN {
        Err(OracleError::TooLong {
            requested: max_len,
            limit: MAX_ORACLE_LEN,
        })
    } else {
        Ok(())
    }
}

/// `count / 2^n`.
fn weight(count: u64, n: usize) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::one() << n)
}

/// Visits every path depth-first. `decide` is called after each step with the
/// new state and depth; returning `false` stops that branch.
fn enumerate<S: Clone>(root: S, max_len: usize, step: impl Fn(&mut S, bool, usize) -> bool) {
    let mut stack = vec![(root, 0usize)];
    while let Some((state, depth)) = stack.pop() {
        if depth == max_len {
            continue;
        }
        for up in [false, true] {
            let mut child = state.clone();
            if step(&mut child, up, depth + 1) {
                stack.push((child, depth + 1));
            }
        }
    }
}

#[derive(Clone)]
struct Walker {
    book: BookState,
    price: i64,
}

impl Walker {
    fn open(mode: InitMode, mu: SpreadParam, flash_window: u64) -> Self {
        Self {
            book: BookState::open(mode, mu, flash_window).0,
            price: 0,
        }
    }

    fn step(&mut self, up: bool) -> Option<TradeKind> {
        self.price += if up { 1 } else { -1 };
        self.book
            .step(self.price)
            .expect("unit step")
            .map(|t| t.kind)
    }
}

/// Exact first-trade probabilities split by trade type; index `n` is the time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeSplit {
    pub type1: Vec<BigRational>,
    pub type2: Vec<BigRational>,
}

pub fn brute_force_first_trade_split(
    mu: SpreadParam,
    mode: InitMode,
    max_len: usize,
) -> Result<TradeSplit, OracleError> {
    check_len(max_len)?;
    let counts = std::cell::RefCell::new(vec![[0u64; 2]; max_len + 1]);
    enumerate(Walker::open(mode, mu, 1), max_len, |w, up, n| {
        match w.step(up) {
            Some(kind) => {
                counts.borrow_mut()[n][usize::from(kind == TradeKind::TypeII)] += 1;
                false
            }
            None => true,
        }
    });
    let counts = counts.into_inner();
    Ok(TradeSplit {
        type1: counts
            .iter()
            .enumerate()
            .map(|(n, c)| weight(c[0], n))
            .collect(),
        type2: counts
            .iter()
            .enumerate()
            .map(|(n, c)| weight(c[1], n))
            .collect(),
    })
}

/// Exact `P[T1 = n]` (first trade after time 0) for `n = 0..=max_len`.
pub fn brute_force_first_trade(
    mu: SpreadParam,
    mode: InitMode,
    max_len: usize,
) -> Result<Vec<BigRational>, OracleError> {
    let split = brute_force_first_trade_split(mu, mode, max_len)?;
    Ok(split
        .type1
        .into_iter()
        .zip(split.type2)
        .map(|(a, b)| a + b)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvalancheOracle {
    /// `P[L* = k]` for every `k <= resolved_through`.
    pub probabilities: BTreeMap<u64, BigRational>,
    pub resolved_through: u64,
    /// Probability of all longer or undecided avalanches.
    pub unresolved_mass: BigRational,
}

/// Exact law of the first full avalanche of a full book, for lengths that are
/// decided within `max_len` steps (`k <= max_len - epsilon`).
pub fn brute_force_avalanche(
    mu: SpreadParam,
    epsilon: Epsilon,
    max_len: usize,
) -> Result<AvalancheOracle, OracleError> {
    check_len(max_len)?;
    let resolved_through = (max_len as u64).saturating_sub(epsilon.get());
    let scaled = std::cell::RefCell::new(BTreeMap::<u64, u64>::new());
    let root = (
        Walker::open(InitMode::FullBook, mu, epsilon.get()),
        WindowTracker::new(epsilon, 0),
    );
    enumerate(root, max_len, |(w, window), up, n| {
        let trade = w.step(up);
        match window.observe(n as u64, trade, AvalancheMode::Full) {
            Some(r) => {
                *scaled.borrow_mut().entry(r.length).or_insert(0) += 1u64 << (max_len - n);
                false
            }
            None => true,
        }
    });
    let mut probabilities = BTreeMap::new();
    let mut covered = BigRational::zero();
    for k in 0..=resolved_through {
        let c = scaled.borrow().get(&k).copied().unwrap_or(0);
        let p = weight(c, max_len);
        covered += &p;
        probabilities.insert(k, p);
    }
    Ok(AvalancheOracle {
        probabilities,
        resolved_through,
        unresolved_mass: BigRational::one() - covered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::series::rational;

    fn mu(m: i64) -> SpreadParam {
        SpreadParam::new(m).unwrap()
    }

    fn eps(e: u64) -> Epsilon {
        Epsilon::new(e).unwrap()
    }

    #[test]
    fn refuses_long_enumerations() {
        assert_eq!(
            brute_force_first_trade(mu(1), InitMode::FullBook, 27),
            Err(OracleError::TooLong {
                requested: 27,
                limit: 26
            })
        );
    }

    #[test]
    fn first_trade_examples() {
        let full2 = brute_force_first_trade(mu(2), InitMode::FullBook, 6).unwrap();
        assert_eq!(full2[4], rational(1, 16));
        let full3 = brute_force_first_trade(mu(3), InitMode::FullBook, 4).unwrap();
        assert_eq!(full3[2], rational(0, 1));
        let empty1 = brute_force_first_trade(mu(1), InitMode::EmptyBook, 5).unwrap();
        assert_eq!(empty1[3], rational(1, 8));
    }

    #[test]
    fn avalanche_examples() {
        let o = brute_force_avalanche(mu(1), eps(1), 10).unwrap();
        assert_eq!(o.probabilities[&1], rational(1, 4));
        let o = brute_force_avalanche(mu(3), eps(4), 12).unwrap();
        assert_eq!(o.probabilities[&3], rational(3, 32));
        let o = brute_force_avalanche(mu(1), eps(3), 14).unwrap();
        assert_eq!(o.probabilities[&8], rational(81, 2048));
        assert_eq!(o.resolved_through, 11);
        let total: BigRational = o.probabilities.values().sum::<BigRational>() + &o.unresolved_mass;
        assert_eq!(total, BigRational::one());
    }
}
