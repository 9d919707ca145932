//! Trading excursions and the path classes A, B, C.
//!
//! A trading excursion is the path from time 0 up to the first trade after 0
//! in an initially full book. Class membership is stated on paths shifted to
//! start at 0.

use thiserror::Error;

use super::book::{detect_trades, InitMode, SpreadParam, TradeKind};
use super::walk::WalkPath;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExcursionError {
    #[error("no trade after time 0 along the given path")]
    NoTrade,
    #[error(
        "first trade after time 0 happens at {trade_time}, before the path ends at {path_len}"
    )]
    TradeBeforeEnd { trade_time: u64, path_len: usize },
    #[error("the terminal trade is Type I; only Type II excursions decompose")]
    TypeOneTerminal,
}

/// Interior strictly above `-mu` and at most 0.
fn interior_in_band(interior: &[i64], mu: i64) -> bool {
    interior.iter().all(|&s| -mu < s && s <= 0)
}

/// Class A: interior levels in `(-mu, 0]`, final level `+1`.
pub fn in_class_a(path: &WalkPath, mu: SpreadParam) -> bool {
    let s = path.levels();
    let n = s.len() - 1;
    n >= 1 && s[n] == 1 && interior_in_band(&s[1..n], mu.ticks())
}

/// Class B: interior levels in `(-mu, 0]`, back at 0 one step before the end, final level `-1`.
pub fn in_class_b(path: &WalkPath, mu: SpreadParam) -> bool {
    let s = path.levels();
    let n = s.len() - 1;
    n >= 1 && s[n] == -1 && s[n - 1] == 0 && interior_in_band(&s[1..n], mu.ticks())
}

/// Class C: members of A whose pre-terminal minimum is exactly `1 - mu`.
pub fn in_class_c(path: &WalkPath, mu: SpreadParam) -> bool {
    let s = path.levels();
    let n = s.len() - 1;
    in_class_a(path, mu) && s[..n].iter().copied().min() == Some(1 - mu.ticks())
}

/// Prefix of `path` up to and including the first trade after time 0 (full book).
pub fn first_trading_excursion(path: &WalkPath, mu: SpreadParam) -> Option<WalkPath> {
    detect_trades(path, mu, InitMode::FullBook, 1)
        .into_iter()
        .find(|t| t.time > 0)
        .map(|t| path.segment(0, t.time as usize))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Type2Decomposition {
    /// `K` pieces, each shifted to start at 0 and in class B.
    pub segments: Vec<WalkPath>,
    /// Final piece, shifted to start at 0 and in class C.
    pub tail: WalkPath,
}

impl Type2Decomposition {
    pub fn depth(&self) -> usize {
        self.segments.len()
    }

    /// Concatenation of the pieces, which gives back the excursion.
    pub fn reassemble(&self) -> WalkPath {
        self.segments
            .iter()
            .fold(WalkPath::origin(), |acc, seg| acc.concat(seg))
            .concat(&self.tail)
    }
}

/// Splits a Type II trading excursion into `K = -S(T-1)` class-B pieces and a class-C tail.
///
/// Piece `k` ends one step after the last visit of level `-(k-1)` before `T`.
pub fn decompose_type2_excursion(
    excursion: &WalkPath,
    mu: SpreadParam,
) -> Result<Type2Decomposition, ExcursionError> {
    let trade = detect_trades(excursion, mu, InitMode::FullBook, 1)
        .into_iter()
        .find(|t| t.time > 0)
        .ok_or(ExcursionError::NoTrade)?;
    let end = excursion.len();
    if trade.time as usize != end {
        return Err(ExcursionError::TradeBeforeEnd {
            trade_time: trade.time,
            path_len: end,
        });
    }
    if trade.kind == TradeKind::TypeI {
        return Err(ExcursionError::TypeOneTerminal);
    }

    let s = excursion.levels();
    let depth = -s[end - 1];
    debug_assert!(depth >= 1);
    let mut cuts = vec![0usize];
    for k in 1..=depth {
        let target = -(k - 1);
        let last_visit = (0..end)
            .rev()
            .find(|&n| s[n] == target)
            .expect("a walk ending below the origin visits every level in between");
        cuts.push(last_visit + 1);
    }
    let segments = cuts
        .windows(2)
        .map(|w| excursion.segment(w[0], w[1]))
        .collect();
    let tail = excursion.segment(*cuts.last().unwrap(), end);
    Ok(Type2Decomposition { segments, tail })
}
