//! Avalanche windowing over trade times.
//!
//! Starting from the anchor trade, consecutive gaps of at most `epsilon` are
//! summed; the avalanche ends at the first gap longer than `epsilon`. A path
//! that stops before that longer gap is confirmed is censored.

use thiserror::Error;

use crate::walk_and_book::{
    detect_trades, simplified_trading_times, InitMode, SpreadParam, TradeEvent, TradeKind, WalkPath,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("avalanche window must be at least 1 time step, got {0}")]
    ZeroWindow(u64),
}

/// Longest gap between trades that keeps an avalanche going, in time steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Epsilon(u64);

impl Epsilon {
    pub fn new(steps: u64) -> Result<Self, WindowError> {
        if steps == 0 {
            Err(WindowError::ZeroWindow(0))
        } else {
            Ok(Self(steps))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AvalancheMode {
    /// Gaps between new maxima of the walk.
    Simplified,
    /// Gaps between all trades, Type I and Type II.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AvalancheRecord {
    pub length: u64,
    pub trade_count: u64,
    pub mode: AvalancheMode,
    pub contains_flash_crash: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AvalancheOutcome {
    Complete(AvalancheRecord),
    /// The path ended at `observed` steps before the closing gap was confirmed.
    Censored {
        observed: u64,
    },
}

impl AvalancheOutcome {
    pub fn record(&self) -> Option<&AvalancheRecord> {
        match self {
            Self::Complete(r) => Some(r),
            Self::Censored { .. } => None,
        }
    }

    pub fn length(&self) -> Option<u64> {
        self.record().map(|r| r.length)
    }
}

/// Online avalanche window: feed every time step after the anchor.
#[derive(Clone, Copy, Debug)]
pub struct WindowTracker {
    epsilon: u64,
    anchor: u64,
    last: u64,
    count: u64,
    flash: bool,
}

impl WindowTracker {
    pub fn new(epsilon: Epsilon, anchor: u64) -> Self {
        Self {
            epsilon: epsilon.get(),
            anchor,
            last: anchor,
            count: 0,
            flash: false,
        }
    }

    /// Observes time `n` (strictly after the last observed time). `trade` is
    /// `Some(kind)` when a trade happens at `n`. Returns the avalanche once the
    /// closing gap is confirmed.
    #[inline]
    pub fn observe(
        &mut self,
        n: u64,
        trade: Option<TradeKind>,
        mode: AvalancheMode,
    ) -> Option<AvalancheRecord> {
        match trade {
            Some(kind) => {
                debug_assert!(n - self.last <= self.epsilon);
                self.count += 1;
                self.last = n;
                self.flash |= kind == TradeKind::TypeII;
                None
            }
            None if n - self.last >= self.epsilon => Some(AvalancheRecord {
                length: self.last - self.anchor,
                trade_count: self.count,
                mode,
                contains_flash_crash: self.flash,
            }),
            None => None,
        }
    }
}

/// Windows a sorted list of trades after `anchor` over a path of `path_len` steps.
fn window_trades(
    trades: impl IntoIterator<Item = (u64, TradeKind)>,
    anchor: u64,
    path_len: u64,
    epsilon: Epsilon,
    mode: AvalancheMode,
) -> AvalancheOutcome {
    let eps = epsilon.get();
    let mut last = anchor;
    let mut count = 0;
    let mut flash = false;
    let finish = |last: u64, count: u64, flash: bool| {
        AvalancheOutcome::Complete(AvalancheRecord {
            length: last - anchor,
            trade_count: count,
            mode,
            contains_flash_crash: flash,
        })
    };
    for (time, kind) in trades {
        if time <= anchor {
            continue;
        }
        if time - last > eps {
            return finish(last, count, flash);
        }
        count += 1;
        last = time;
        flash |= kind == TradeKind::TypeII;
    }
    if path_len >= last + eps {
        finish(last, count, flash)
    } else {
        AvalancheOutcome::Censored { observed: path_len }
    }
}

/// First simplified avalanche: ladder gaps `R_i` summed while `R_i <= epsilon`.
pub fn simplified_avalanche_length(path: &WalkPath, epsilon: Epsilon) -> AvalancheOutcome {
    let ladder = simplified_trading_times(path);
    window_trades(
        ladder.into_iter().map(|t| (t, TradeKind::TypeI)),
        0,
        path.len() as u64,
        epsilon,
        AvalancheMode::Simplified,
    )
}

/// Same as [`simplified_avalanche_length`], computed from the full-book trade
/// list restricted to trades at a new maximum level.
pub fn simplified_avalanche_from_trades(
    path: &WalkPath,
    mu: SpreadParam,
    epsilon: Epsilon,
) -> AvalancheOutcome {
    let mut max = 0;
    let maxima = detect_trades(path, mu, InitMode::FullBook, epsilon.get())
        .into_iter()
        .filter(|t| {
            let new_max = t.level > max;
            max = max.max(t.level);
            new_max
        })
        .map(|t| (t.time, t.kind));
    window_trades(
        maxima,
        0,
        path.len() as u64,
        epsilon,
        AvalancheMode::Simplified,
    )
}

/// First full avalanche over all trades.
///
/// A full book is anchored at the opening trade at time 0. An empty book is
/// anchored at its first trade, after which it behaves like a full book; a
/// path without any trade is censored.
pub fn full_avalanche_length(
    path: &WalkPath,
    mu: SpreadParam,
    epsilon: Epsilon,
    mode: InitMode,
) -> AvalancheOutcome {
    let trades: Vec<TradeEvent> = detect_trades(path, mu, mode, epsilon.get());
    let anchor = match mode {
        InitMode::FullBook => 0,
        InitMode::EmptyBook => match trades.first() {
            Some(t) => t.time,
            None => {
                return AvalancheOutcome::Censored {
                    observed: path.len() as u64,
                }
            }
        },
    };
    window_trades(
        trades.iter().map(|t| (t.time, t.kind)),
        anchor,
        path.len() as u64,
        epsilon,
        AvalancheMode::Full,
    )
}
