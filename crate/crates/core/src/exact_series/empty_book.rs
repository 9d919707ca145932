//! Time to the first trade when the book starts empty.
//!
//! With an empty book the first trade happens at the first time `T` with
//! `S(T) - min(S(0..T)) = mu`, at level `min + mu`. It is Type I exactly when
//! that level is positive, i.e. the minimum before the trade is above `-mu`.
//!
//! Split the path at the first visit of its final minimum `m = k - mu`:
//!
//! * before it, `G*_k`: the walk reaches a new minimum `k - mu` for the first
//!   time without any rise of `mu` above its running minimum;
//! * after it, `F`: the walk rises `mu` above `m` without going below `m`.
//!
//! Once the walk first reaches `-mu` without a trade, the problem restarts
//! from scratch relative to that level, so
//! `E[z^T] = (sum_{k=1..mu} G*_k F) / (1 - G*_0)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::classes::{class_gf, PathClass};
use super::series::{dyadic, RationalSeries};
use crate::walk_and_book::SpreadParam;

#[derive(Clone, Debug)]
pub struct EmptyBookPgf {
    pub type1: RationalSeries,
    pub type2: RationalSeries,
    pub total: RationalSeries,
}

/// `G*_k`: first arrival at the new minimum `k - mu` with every rise above the
/// running minimum staying below `mu`. `G*_mu = 1` (the empty path).
pub fn first_minimum_gf(mu: SpreadParam, k: i64, order: usize) -> RationalSeries {
    let m = mu.ticks();
    assert!((0..=m).contains(&k), "k must lie in 0..=mu");
    let target = k - m;
    if target == 0 {
        return RationalSeries::one(order);
    }
    // State: running minimum `low` in target+1..=0 and rise `d = s - low` in 0..mu.
    let lows = (-target) as usize;
    let rises = m as usize;
    let idx = |low: i64, d: i64| ((-low) as usize) * rises + d as usize;
    let mut cnt = vec![BigUint::zero(); lows * rises];
    cnt[idx(0, 0)] = BigUint::one();
    let mut hits = vec![BigUint::zero(); order + 1];
    for hit in hits.iter_mut().skip(1) {
        let mut next = vec![BigUint::zero(); lows * rises];
        for low in (target + 1)..=0 {
            for d in 0..m {
                let c = &cnt[idx(low, d)];
                if c.is_zero() {
                    continue;
                }
                if d + 1 < m {
                    next[idx(low, d + 1)] += c;
                }
                if d > 0 {
                    next[idx(low, d - 1)] += c;
                } else if low - 1 == target {
                    *hit += c;
                } else {
                    next[idx(low - 1, 0)] += c;
                }
            }
        }
        cnt = next;
    }
    RationalSeries::from_coeffs(
        hits.iter().enumerate().map(|(n, c)| dyadic(c, n)).collect(),
        order,
    )
}

/// `F`: from the minimum, reach `mu` above it without going lower.
pub fn rise_gf(mu: SpreadParam, order: usize) -> RationalSeries {
    let m = mu.ticks() as usize;
    let mut cnt = vec![BigUint::zero(); m];
    cnt[0] = BigUint::one();
    let mut hits = vec![BigUint::zero(); order + 1];
    for hit in hits.iter_mut().skip(1) {
        let mut next = vec![BigUint::zero(); m];
        for d in 0..m {
            let c = &cnt[d];
            if c.is_zero() {
                continue;
            }
            if d + 1 == m {
                *hit += c;
            } else {
                next[d + 1] += c;
            }
            if d > 0 {
                next[d - 1] += c;
            }
        }
        cnt = next;
    }
    RationalSeries::from_coeffs(
        hits.iter().enumerate().map(|(n, c)| dyadic(c, n)).collect(),
        order,
    )
}

/// Series of `E[z^T]` for the first trade of an initially empty book, split by type.
pub fn first_trade_pgf_empty(mu: SpreadParam, order: usize) -> EmptyBookPgf {
    let f = rise_gf(mu, order);
    let mut type1 = RationalSeries::zero(order);
    for k in 1..=mu.ticks() {
        type1 = type1.add(&first_minimum_gf(mu, k, order).mul(&f));
    }
    let restart = RationalSeries::one(order).sub(&first_minimum_gf(mu, 0, order));
    let total = type1.mul(&restart.reciprocal().expect("constant term is 1"));
    EmptyBookPgf {
        type2: total.sub(&type1),
        type1,
        total,
    }
}

/// Lower summation limit in the printed first-trade formula, which is ambiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerIndex {
    Zero,
    One,
}

/// Printed path class `G_{mu,k}`: from 0, levels strictly between `k - mu`
/// and `mu` at interior times, ending at `k - mu` after at least one step.
pub fn printed_g_gf(mu: SpreadParam, k: i64, order: usize) -> RationalSeries {
    let m = mu.ticks();
    let target = k - m;
    // Interior levels target+1 ..= m-1.
    let lo = target + 1;
    let width = (m - 1 - lo + 1).max(0) as usize;
    let mut hits = vec![BigUint::zero(); order + 1];
    // Step 1 from 0.
    let mut cnt = vec![BigUint::zero(); width];
    for s in [1i64, -1] {
        if order == 0 {
            break;
        }
        if s == target {
            hits[1] += BigUint::one();
        } else if s >= lo && s < m {
            cnt[(s - lo) as usize] += BigUint::one();
        }
    }
    for hit in hits.iter_mut().skip(2) {
        let mut next = vec![BigUint::zero(); width];
        for (i, c) in cnt.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = lo + i as i64;
            for t in [s + 1, s - 1] {
                if t == target {
                    *hit += c;
                } else if t >= lo && t < m {
                    next[(t - lo) as usize] += c;
                }
            }
        }
        cnt = next;
    }
    RationalSeries::from_coeffs(
        hits.iter().enumerate().map(|(n, c)| dyadic(c, n)).collect(),
        order,
    )
}

/// The printed first-trade formula `sum_k G_{mu,k} F + B C / (1 - B)` under
/// the given lower summation limit. Kept for the comparison report only.
pub fn first_trade_pgf_empty_as_printed(
    mu: SpreadParam,
    lower: LowerIndex,
    order: usize,
) -> RationalSeries {
    let f = rise_gf(mu, order);
    let start = match lower {
        LowerIndex::Zero => 0,
        LowerIndex::One => 1,
    };
    let mut total = RationalSeries::zero(order);
    for k in start..=mu.ticks() {
        total = total.add(&printed_g_gf(mu, k, order).mul(&f));
    }
    let b = class_gf(PathClass::B, mu, order);
    let c = class_gf(PathClass::C, mu, order);
    let one_minus_b = RationalSeries::one(order).sub(&b);
    total.add(
        &b.mul(&one_minus_b.reciprocal().expect("constant term is 1"))
            .mul(&c),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::oracle::{brute_force_first_trade_split, TradeSplit};
    use crate::exact_series::series::rational;
    use crate::walk_and_book::InitMode;
    use num_rational::BigRational;

    fn mu(m: i64) -> SpreadParam {
        SpreadParam::new(m).unwrap()
    }

    #[test]
    fn mu1_is_geometric() {
        let p = first_trade_pgf_empty(mu(1), 30);
        for n in 1..=30 {
            assert_eq!(p.total.coeff(n), rational(1, 1 << n));
        }
    }

    #[test]
    fn mu2_small_times() {
        let p = first_trade_pgf_empty(mu(2), 10);
        assert_eq!(p.total.coeff(1), rational(0, 1));
        assert_eq!(p.total.coeff(2), rational(1, 4));
    }

    #[test]
    fn matches_enumeration_by_type() {
        for m in 1..=4 {
            let n = 16;
            let p = first_trade_pgf_empty(mu(m), n);
            let TradeSplit { type1, type2 } =
                brute_force_first_trade_split(mu(m), InitMode::EmptyBook, n).unwrap();
            for t in 1..=n {
                assert_eq!(p.type1.coeff(t), type1[t], "mu {m} n {t} type I");
                assert_eq!(p.type2.coeff(t), type2[t], "mu {m} n {t} type II");
            }
        }
    }

    #[test]
    fn total_mass_approaches_one() {
        for m in 1..=3 {
            let p = first_trade_pgf_empty(mu(m), 400);
            assert!(p.total.is_probability_series());
            let mass = p.total.partial_sum(400);
            assert!(BigRational::one() - mass < rational(1, 1000), "mu {m}");
        }
    }

    #[test]
    fn printed_readings_disagree_with_enumeration() {
        // mu = 1: the printed class for k = mu is empty, so both readings lose the Type I mass.
        let truth = first_trade_pgf_empty(mu(1), 12).total;
        for lower in [LowerIndex::Zero, LowerIndex::One] {
            assert_ne!(first_trade_pgf_empty_as_printed(mu(1), lower, 12), truth);
        }
    }

    #[test]
    fn rise_is_gamblers_ruin() {
        // mu = 2: the paths are U (DU)^j U.
        let f = rise_gf(mu(2), 9);
        assert_eq!(f.coeff(2), rational(1, 4));
        assert_eq!(f.coeff(3), rational(0, 1));
        assert_eq!(f.coeff(4), rational(1, 16));
        assert_eq!(f.coeff(6), rational(1, 64));
    }
}
