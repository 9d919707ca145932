//! Simple symmetric random walk paths and their seeded step streams.
//!
//! Every simulated path owns one [`RngStream`]: a ChaCha8 generator keyed by
//! the run's master seed with the path index selecting the ChaCha stream.
//! A path therefore depends only on `(master_seed, stream_index)` and never
//! on the order in which workers pick paths up.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("a path must contain at least its starting point")]
    Empty,
    #[error("path must start at level 0, found {0}")]
    NonZeroStart(i64),
    #[error("step {index} moves from {from} to {to}; increments must be +1 or -1")]
    NonUnitStep { index: usize, from: i64, to: i64 },
}

/// A finite trajectory `S_0, ..., S_n` of the mid-price walk, in ticks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WalkPath {
    levels: Vec<i64>,
}

impl WalkPath {
    /// Validates `levels` as a walk path: starts at 0, unit increments.
    pub fn new(levels: Vec<i64>) -> Result<Self, PathError> {
        match levels.first() {
            None => return Err(PathError::Empty),
            Some(&s0) if s0 != 0 => return Err(PathError::NonZeroStart(s0)),
            _ => {}
        }
        for (i, w) in levels.windows(2).enumerate() {
            if (w[1] - w[0]).abs() != 1 {
                return Err(PathError::NonUnitStep {
                    index: i + 1,
                    from: w[0],
                    to: w[1],
                });
            }
        }
        Ok(Self { levels })
    }

    /// The single-point path `{0}`.
    pub fn origin() -> Self {
        Self { levels: vec![0] }
    }

    /// Builds a path from its increments, `true` meaning an up-step.
    pub fn from_ups<I: IntoIterator<Item = bool>>(ups: I) -> Self {
        let mut levels = vec![0i64];
        let mut s = 0i64;
        for up in ups {
            s += if up { 1 } else { -1 };
            levels.push(s);
        }
        Self { levels }
    }

    /// Path of length `len` whose step `j` (1-based) is up iff bit `j-1` of `mask` is set.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        Self::from_ups((0..len).map(|j| mask >> j & 1 == 1))
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    /// Number of steps `n` (the path visits `n + 1` levels).
    pub fn len(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn level(&self, n: usize) -> i64 {
        self.levels[n]
    }

    pub fn last(&self) -> i64 {
        *self.levels.last().expect("path is never empty")
    }

    /// The stretch between times `from` and `to`, shifted to start at 0.
    pub fn segment(&self, from: usize, to: usize) -> WalkPath {
        let base = self.levels[from];
        Self {
            levels: self.levels[from..=to].iter().map(|s| s - base).collect(),
        }
    }

    /// Glues `other` onto the end of `self`.
    pub fn concat(&self, other: &WalkPath) -> WalkPath {
        let base = self.last();
        let mut levels = self.levels.clone();
        levels.extend(other.levels[1..].iter().map(|s| s + base));
        Self { levels }
    }

    pub fn min(&self) -> i64 {
        *self.levels.iter().min().expect("path is never empty")
    }

    pub fn max(&self) -> i64 {
        *self.levels.iter().max().expect("path is never empty")
    }
}

/// Identifies the random source of one simulated path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Infinite iterator over the ±1 increments of this stream's walk.
    pub fn steps(&self) -> StepSource {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        StepSource {
            rng,
            word: 0,
            remaining: 0,
        }
    }
}

/// Fair coin flips drawn 64 at a time from a ChaCha8 word.
pub struct StepSource {
    rng: ChaCha8Rng,
    word: u64,
    remaining: u32,
}

impl StepSource {
    #[inline]
    pub fn next_up(&mut self) -> bool {
        if self.remaining == 0 {
            self.word = self.rng.next_u64();
            self.remaining = 64;
        }
        let up = self.word & 1 == 1;
        self.word >>= 1;
        self.remaining -= 1;
        up
    }
}

impl Iterator for StepSource {
    type Item = i64;

    #[inline]
    fn next(&mut self) -> Option<i64> {
        Some(if self.next_up() { 1 } else { -1 })
    }
}

/// Draws `horizon` steps of the walk attached to `rng`.
pub fn generate_walk(rng: &RngStream, horizon: usize) -> WalkPath {
    WalkPath::from_ups(rng.steps().take(horizon).map(|d| d > 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(WalkPath::new(vec![]), Err(PathError::Empty));
        assert_eq!(WalkPath::new(vec![1, 2]), Err(PathError::NonZeroStart(1)));
        assert!(matches!(
            WalkPath::new(vec![0, 1, 3]),
            Err(PathError::NonUnitStep { index: 2, .. })
        ));
        assert!(WalkPath::new(vec![0, -1, 0, 1]).is_ok());
    }

    #[test]
    fn horizon_zero_is_the_origin() {
        assert_eq!(generate_walk(&RngStream::new(3, 9), 0), WalkPath::origin());
    }

    #[test]
    fn single_step_is_stable() {
        let a = generate_walk(&RngStream::new(11, 0), 1);
        let b = generate_walk(&RngStream::new(11, 0), 1);
        assert_eq!(a, b);
        assert!(a.levels() == [0, 1] || a.levels() == [0, -1]);
    }

    #[test]
    fn increments_are_unit() {
        for idx in 0..50 {
            let p = generate_walk(&RngStream::new(5, idx), 10);
            assert_eq!(p.levels()[0], 0);
            assert!(WalkPath::new(p.levels().to_vec()).is_ok());
        }
    }

    #[test]
    fn streams_differ() {
        let a = generate_walk(&RngStream::new(1, 0), 256);
        let b = generate_walk(&RngStream::new(1, 1), 256);
        let c = generate_walk(&RngStream::new(2, 0), 256);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn mean_of_s100_is_centered() {
        // sd of the sample mean of S_100 over 10^6 paths is 10 / 1000
        let n = 1_000_000u64;
        let total: i64 = (0..n)
            .map(|i| RngStream::new(2024, i).steps().take(100).sum::<i64>())
            .sum();
        let mean = total as f64 / n as f64;
        assert!(mean.abs() < 4.0 * 0.01, "mean {mean}");
    }

    #[test]
    fn segment_and_concat_round_trip() {
        let p = WalkPath::new(vec![0, -1, -2, -1, 0, 1]).unwrap();
        let a = p.segment(0, 2);
        let b = p.segment(2, 5);
        assert_eq!(b.levels(), &[0, 1, 2, 3]);
        assert_eq!(a.concat(&b), p);
    }
}
