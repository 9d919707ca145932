//! Ask-side order book driven by the mid-price walk.
//!
//! At every step the order resting at the previous price (if any) is gone,
//! and one new order is placed `mu` ticks above the previous price. A trade
//! happens whenever the new price lands on a level with positive volume.
//!
//! The full book starts with one order on every level `u >= 0`. Besides the
//! explicit volume map it runs the best-ask recursion
//! `a(n+1) = a(n) + [a(n) = S(n)] - [a(n) = S(n) + mu + 1]` and checks at every
//! step that both descriptions agree.

use std::collections::BTreeMap;

use thiserror::Error;

use super::walk::WalkPath;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BookError {
    #[error("spread parameter must be at least 1, got {0}")]
    InvalidSpread(i64),
    #[error("price moved from {from} to {to} at time {time}; steps must be +1 or -1")]
    NonUnitStep { time: u64, from: i64, to: i64 },
}

/// Displacement (in ticks) above the mid-price at which new orders are placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpreadParam(u32);

impl SpreadParam {
    pub fn new(mu: i64) -> Result<Self, BookError> {
        if mu >= 1 && mu <= u32::MAX as i64 {
            Ok(Self(mu as u32))
        } else {
            Err(BookError::InvalidSpread(mu))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn ticks(self) -> i64 {
        self.0 as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitMode {
    FullBook,
    EmptyBook,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TradeKind {
    TypeI,
    TypeII,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TradeEvent {
    pub time: u64,
    pub level: i64,
    pub kind: TradeKind,
    /// Time since the previous trade; 0 for the opening trade of a full book.
    pub intertrade_gap: u64,
    pub flash_crash: bool,
}

/// Presence counts per tick level.
#[derive(Clone, Debug)]
struct VolumeMap {
    counts: BTreeMap<i64, u32>,
    // Levels at or above this one still hold their single initial order and
    // have not been written to `counts` yet. `None` for an empty book.
    untouched_from: Option<i64>,
}

impl VolumeMap {
    fn new(mode: InitMode) -> Self {
        Self {
            counts: BTreeMap::new(),
            untouched_from: match mode {
                InitMode::FullBook => Some(0),
                InitMode::EmptyBook => None,
            },
        }
    }

    fn get(&self, level: i64) -> u32 {
        match self.counts.get(&level) {
            Some(&c) => c,
            None => match self.untouched_from {
                Some(f) if level >= f => 1,
                _ => 0,
            },
        }
    }

    fn materialize(&mut self, level: i64) {
        if let Some(f) = self.untouched_from {
            if level >= f {
                for l in f..=level {
                    self.counts.insert(l, 1);
                }
                self.untouched_from = Some(level + 1);
            }
        }
    }

    fn clear(&mut self, level: i64) {
        self.materialize(level);
        self.counts.remove(&level);
    }

    fn add(&mut self, level: i64) {
        self.materialize(level);
        *self.counts.entry(level).or_insert(0) += 1;
    }

    fn lowest_positive(&self) -> Option<i64> {
        self.counts
            .iter()
            .find(|(_, &c)| c > 0)
            .map(|(&l, _)| l)
            .or(self.untouched_from)
    }

    /// First level where "positive volume" and "level >= ask" disagree.
    fn mismatch_against(&self, ask: i64) -> Option<i64> {
        if let Some(f) = self.untouched_from {
            if f < ask {
                return Some(f);
            }
        }
        if let Some((&l, _)) = self.counts.iter().find(|(&l, &c)| (c > 0) != (l >= ask)) {
            return Some(l);
        }
        let upper = self.untouched_from.unwrap_or(ask);
        (ask..upper).find(|l| !self.counts.contains_key(l))
    }
}

/// Order-book state at time `n`.
#[derive(Clone, Debug)]
pub struct BookState {
    time: u64,
    price: i64,
    mode: InitMode,
    mu: SpreadParam,
    flash_window: u64,
    alpha: i64,
    volume: VolumeMap,
    last_trade_time: u64,
    last_trade_level: i64,
    audit: bool,
}

impl BookState {
    /// Book at time 0 with the mid-price at 0, together with the trade that
    /// happens at time 0 (only a full book has volume there).
    ///
    /// `flash_window` is the ε used to flag Type II trades as flash crashes.
    pub fn open(mode: InitMode, mu: SpreadParam, flash_window: u64) -> (Self, Option<TradeEvent>) {
        let state = Self {
            time: 0,
            price: 0,
            mode,
            mu,
            flash_window,
            alpha: 0,
            volume: VolumeMap::new(mode),
            last_trade_time: 0,
            last_trade_level: 0,
            audit: false,
        };
        let opening = (state.volume.get(0) > 0).then_some(TradeEvent {
            time: 0,
            level: 0,
            kind: TradeKind::TypeII,
            intertrade_gap: 0,
            flash_crash: false,
        });
        (state, opening)
    }

    /// Enables the full scan of the volume map against the best ask after
    /// every step. Costs O(visited range) per step.
    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit = audit;
        self
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn price(&self) -> i64 {
        self.price
    }

    pub fn mode(&self) -> InitMode {
        self.mode
    }

    /// Best ask: the recursion value for a full book, the lowest level with
    /// volume for an empty book.
    pub fn best_ask(&self) -> Option<i64> {
        match self.mode {
            InitMode::FullBook => Some(self.alpha),
            InitMode::EmptyBook => self.volume.lowest_positive(),
        }
    }

    pub fn volume_at(&self, level: i64) -> u32 {
        self.volume.get(level)
    }

    /// Advances one step to `new_price`, returning the trade at the new time if any.
    ///
    /// Panics if the volume rule and the best-ask recursion ever disagree.
    pub fn step(&mut self, new_price: i64) -> Result<Option<TradeEvent>, BookError> {
        let prev = self.price;
        if (new_price - prev).abs() != 1 {
            return Err(BookError::NonUnitStep {
                time: self.time + 1,
                from: prev,
                to: new_price,
            });
        }
        let mu = self.mu.ticks();
        self.volume.clear(prev);
        self.volume.add(prev + mu);
        if self.alpha == prev {
            self.alpha += 1;
        } else if self.alpha == prev + mu + 1 {
            self.alpha -= 1;
        }
        self.time += 1;
        self.price = new_price;

        let traded = self.volume.get(new_price) > 0;
        if self.mode == InitMode::FullBook {
            self.check_full_book(traded);
        }
        if !traded {
            return Ok(None);
        }
        let kind = if new_price > self.last_trade_level {
            TradeKind::TypeI
        } else {
            TradeKind::TypeII
        };
        let gap = self.time - self.last_trade_time;
        self.last_trade_time = self.time;
        self.last_trade_level = new_price;
        Ok(Some(TradeEvent {
            time: self.time,
            level: new_price,
            kind,
            intertrade_gap: gap,
            flash_crash: kind == TradeKind::TypeII && gap <= self.flash_window,
        }))
    }

    fn check_full_book(&self, traded: bool) {
        let (s, a) = (self.price, self.alpha);
        assert_eq!(
            traded,
            a == s,
            "volume rule and best-ask recursion disagree at time {} (price {s}, ask {a})",
            self.time
        );
        if let Err(msg) = self.consistency(self.audit) {
            panic!("{msg}");
        }
    }

    /// Checks the full-book invariants: the ask stays within `[S, S + mu + 1]`
    /// and, when `scan` is set, positive volume sits exactly on levels `>= ask`.
    /// Always `Ok` for an empty book.
    pub fn consistency(&self, scan: bool) -> Result<(), String> {
        if self.mode == InitMode::EmptyBook {
            return Ok(());
        }
        let (s, a, mu) = (self.price, self.alpha, self.mu.ticks());
        if !(s <= a && a <= s + mu + 1) {
            return Err(format!(
                "best ask {a} left [{s}, {}] at time {}",
                s + mu + 1,
                self.time
            ));
        }
        if scan {
            if let Some(l) = self.volume.mismatch_against(a) {
                return Err(format!(
                    "volume at level {l} inconsistent with best ask {a} at time {}",
                    self.time
                ));
            }
        }
        Ok(())
    }
}

/// Best-ask recursion alone: O(1) state for a full book.
#[derive(Clone, Copy, Debug)]
pub struct AskTracker {
    alpha: i64,
    price: i64,
    mu: i64,
}

impl AskTracker {
    pub fn new(mu: SpreadParam) -> Self {
        Self {
            alpha: 0,
            price: 0,
            mu: mu.ticks(),
        }
    }

    pub fn price(&self) -> i64 {
        self.price
    }

    /// Moves the price one tick and reports whether a trade happens at the new time.
    #[inline]
    pub fn step(&mut self, up: bool) -> bool {
        if self.alpha == self.price {
            self.alpha += 1;
        } else if self.alpha == self.price + self.mu + 1 {
            self.alpha -= 1;
        }
        self.price += if up { 1 } else { -1 };
        self.alpha == self.price
    }
}

/// All trades along `path`, in time order, including the opening trade of a full book.
pub fn detect_trades(
    path: &WalkPath,
    mu: SpreadParam,
    mode: InitMode,
    epsilon: u64,
) -> Vec<TradeEvent> {
    let (mut book, opening) = BookState::open(mode, mu, epsilon);
    let mut trades: Vec<TradeEvent> = opening.into_iter().collect();
    for &s in &path.levels()[1..] {
        if let Some(t) = book.step(s).expect("validated path") {
            trades.push(t);
        }
    }
    trades
}

/// Same as [`detect_trades`] with the full volume/ask scan after every step.
pub fn detect_trades_audited(
    path: &WalkPath,
    mu: SpreadParam,
    mode: InitMode,
    epsilon: u64,
) -> Vec<TradeEvent> {
    let (book, opening) = BookState::open(mode, mu, epsilon);
    let mut book = book.with_audit(true);
    let mut trades: Vec<TradeEvent> = opening.into_iter().collect();
    for &s in &path.levels()[1..] {
        if let Some(t) = book.step(s).expect("validated path") {
            trades.push(t);
        }
    }
    trades
}

/// Strict ascending ladder times of the walk.
pub fn simplified_trading_times(path: &WalkPath) -> Vec<u64> {
    let mut max = 0i64;
    let mut out = Vec::new();
    for (n, &s) in path.levels().iter().enumerate().skip(1) {
        if s > max {
            max = s;
            out.push(n as u64);
        }
    }
    out
}
