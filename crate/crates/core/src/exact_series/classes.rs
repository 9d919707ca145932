//! Generating functions of the path classes A, B, C and of the first trade
//! time of a full book, from barrier-restricted path counts.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::series::{dyadic, RationalSeries};
use crate::walk_and_book::SpreadParam;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathClass {
    /// Interior in `(-mu, 0]`, ends at +1.
    A,
    /// Interior in `(-mu, 0]`, at 0 one step before the end, ends at -1.
    B,
    /// Class A paths whose minimum before the last step is `1 - mu`.
    C,
}

/// Counts of length-`n` paths from 0 whose levels at times `1..n-1` stay in
/// `[1 - mu, 0]`, split by whether level `1 - mu` was visited (time 0 included)
/// and ending at 0 at time `n - 1`. Index `n` runs over `1..=order`.
fn band_counts_at_zero(mu: i64, order: usize) -> (Vec<BigUint>, Vec<BigUint>) {
    let width = mu as usize; // levels 1 - mu ..= 0, stored as index level + mu - 1
    let zero_idx = width - 1;
    let floor_idx = 0;
    // [visited floor?][index]
    let mut cnt = vec![vec![BigUint::zero(); width]; 2];
    cnt[usize::from(zero_idx == floor_idx)][zero_idx] = BigUint::one();
    let mut touched = vec![BigUint::zero(); order + 1];
    let mut untouched = vec![BigUint::zero(); order + 1];
    for n in 1..=order {
        untouched[n] = cnt[0][zero_idx].clone();
        touched[n] = cnt[1][zero_idx].clone();
        let mut next = vec![vec![BigUint::zero(); width]; 2];
        for flag in 0..2 {
            for i in 0..width {
                let c = &cnt[flag][i];
                if c.is_zero() {
                    continue;
                }
                if i + 1 < width {
                    next[flag][i + 1] += c;
                }
                if i > 0 {
                    let f = if i - 1 == floor_idx { 1 } else { flag };
                    next[f][i - 1] += c;
                }
            }
        }
        cnt = next;
    }
    (touched, untouched)
}

fn counts_to_series(counts: &[BigUint], order: usize) -> RationalSeries {
    RationalSeries::from_coeffs(
        counts
            .iter()
            .enumerate()
            .map(|(n, c)| dyadic(c, n))
            .collect(),
        order,
    )
}

/// Probability generating function of a path class, truncated at `order`.
pub fn class_gf(class: PathClass, mu: SpreadParam, order: usize) -> RationalSeries {
    let (touched, untouched) = band_counts_at_zero(mu.ticks(), order);
    let counts: Vec<BigUint> = match class {
        // A ends with an up-step from 0, B with a down-step from 0: same counts.
        PathClass::A | PathClass::B => touched.iter().zip(&untouched).map(|(t, u)| t + u).collect(),
        PathClass::C => touched,
    };
    counts_to_series(&counts, order)
}

/// `A_mu`, with `A_0 = 0`.
pub fn class_a(mu: u32, order: usize) -> RationalSeries {
    match mu {
        0 => RationalSeries::zero(order),
        m => class_gf(PathClass::A, SpreadParam::new(m as i64).unwrap(), order),
    }
}

/// `B / (1 - B) * C`: first trade after 0 is Type II.
fn type2_part(a: &RationalSeries, c: &RationalSeries) -> RationalSeries {
    let one_minus_b = RationalSeries::one(a.order()).sub(a);
    a.mul(&one_minus_b.reciprocal().expect("constant term is 1"))
        .mul(c)
}

/// Series of `E[z^T1] = A + B / (1 - B) * C` for a full book.
pub fn t1_pgf(mu: SpreadParam, order: usize) -> RationalSeries {
    let split = t1_split(mu, order);
    split.type1.add(&split.type2)
}

#[derive(Clone, Debug)]
pub struct T1Split {
    /// `E[z^T1; first trade after 0 is Type I] = A`.
    pub type1: RationalSeries,
    /// `E[z^T1; first trade after 0 is Type II] = B C / (1 - B)`.
    pub type2: RationalSeries,
}

pub fn t1_split(mu: SpreadParam, order: usize) -> T1Split {
    let a = class_gf(PathClass::A, mu, order);
    let b = class_gf(PathClass::B, mu, order);
    let c = class_gf(PathClass::C, mu, order);
    T1Split {
        type1: a,
        type2: type2_part(&b, &c),
    }
}

/// `X / (1 - X)` with `X` the Type II part of `T1`, as stated for the first
/// Type II trade. Kept for comparison; see [`first_type2_time_pgf`] and
/// [`first_type2_index_law`].
pub fn d_pgf_as_printed(mu: SpreadParam, order: usize) -> RationalSeries {
    let x = t1_split(mu, order).type2;
    let one_minus_x = RationalSeries::one(order).sub(&x);
    x.mul(&one_minus_x.reciprocal().expect("constant term is 1"))
}

/// Series of `E[z^tau_D]`, the time of the first Type II trade after 0: any
/// number of Type I excursions followed by a Type II one, `X / (1 - A)`.
pub fn first_type2_time_pgf(mu: SpreadParam, order: usize) -> RationalSeries {
    let split = t1_split(mu, order);
    let one_minus_a = RationalSeries::one(order).sub(&split.type1);
    split
        .type2
        .mul(&one_minus_a.reciprocal().expect("constant term is 1"))
}

/// `P[D = i]` for `i = 1..=max_index`, where `D` is the index of the first
/// Type II trade among trades after 0. Trading excursions are independent
/// and each is Type II with probability `1 / (mu + 1)`.
pub fn first_type2_index_law(mu: SpreadParam, max_index: usize) -> Vec<BigRational> {
    let m = BigRational::from_integer(mu.ticks().into());
    let p2 = (&m + BigRational::one()).recip();
    let p1 = &m * &p2;
    let mut out = Vec::with_capacity(max_index);
    let mut w = p2;
    for _ in 0..max_index {
        out.push(w.clone());
        w *= &p1;
    }
    out
}

/// `q_epsilon = P[T1 > epsilon] = 1 - sum_{k <= epsilon} p_k`.
pub fn t1_survival(mu: SpreadParam, epsilon: u64) -> BigRational {
    let t = t1_pgf(mu, epsilon as usize);
    BigRational::one() - t.partial_sum(epsilon as usize)
}

/// Series of `E[z^L*] = q_epsilon / (1 - sum_{k <= epsilon} p_k z^k)`.
pub fn full_avalanche_pgf(mu: SpreadParam, epsilon: u64, order: usize) -> RationalSeries {
    let e = epsilon as usize;
    let t = t1_pgf(mu, e);
    let q = BigRational::one() - t.partial_sum(e);
    let mut denom = RationalSeries::one(order);
    for k in 1..=e.min(order) {
        let p = t.coeff(k);
        if !p.is_zero() {
            denom = denom.sub(&RationalSeries::monomial(p, k, order));
        }
    }
    denom.reciprocal().expect("constant term is 1").scale(&q)
}
