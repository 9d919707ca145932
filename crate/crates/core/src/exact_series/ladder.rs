//! Ladder-time law of the walk and the simplified avalanche length.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::series::{RationalSeries, SeriesError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LadderError {
    #[error("epsilon must be at least 1, got {0}")]
    ZeroEpsilon(u64),
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow2(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::one() << n)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Probability that the walk first reaches level `r` at time `n`:
/// `(r / n) C(n, (n + r) / 2) 2^-n`, zero when `n < r` or the parities differ.
pub fn first_passage_phi(r: u64, n: u64) -> BigRational {
    if r == 0 || n < r || !(n + r).is_multiple_of(2) {
        return BigRational::zero();
    }
    ratio(binomial(n, (n + r) / 2) * r, BigUint::from(n) << n)
}

/// Number of first-passage paths to +1 of length `k`: `C(k, (k + 1) / 2) / k` for odd `k`.
pub fn count_first_passage_paths(k: u64) -> BigUint {
    if k.is_multiple_of(2) {
        return BigUint::zero();
    }
    binomial(k, k.div_ceil(2)) / k
}

/// Window `epsilon` together with its odd reduction `2 floor((epsilon - 1) / 2) + 1`.
///
/// Ladder gaps are odd, so `epsilon` and its odd reduction give the same law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpsilonPrime {
    epsilon: u64,
    odd: u64,
}

impl EpsilonPrime {
    pub fn new(epsilon: u64) -> Result<Self, LadderError> {
        if epsilon == 0 {
            return Err(LadderError::ZeroEpsilon(0));
        }
        Ok(Self {
            epsilon,
            odd: 2 * ((epsilon - 1) / 2) + 1,
        })
    }

    pub fn epsilon(self) -> u64 {
        self.epsilon
    }

    pub fn odd(self) -> u64 {
        self.odd
    }
}

/// Series of `E[z^R]` for the first ladder gap: coefficients `phi(1, n)`.
pub fn pgf_r(order: usize) -> RationalSeries {
    RationalSeries::from_coeffs(
        (0..=order as u64)
            .map(|n| first_passage_phi(1, n))
            .collect(),
        order,
    )
}

/// `P[R > epsilon]` from the closed form
/// `(3 + e') / (2 + e') C(2 + e', (3 + e') / 2) / 2^(2 + e')`.
pub fn survival_r(eps: EpsilonPrime) -> BigRational {
    let e = eps.odd();
    ratio(
        binomial(2 + e, (3 + e) / 2) * (3 + e),
        BigUint::from(2 + e) << (2 + e),
    )
}

/// `P[R > epsilon] = 1 - sum_{n <= epsilon} phi(1, n)`.
pub fn survival_r_by_sum(epsilon: u64) -> BigRational {
    (1..=epsilon).fold(BigRational::one(), |acc, n| acc - first_passage_phi(1, n))
}

/// `Phi(z) = sum_{odd n <= e'} phi(1, n) z^n` as a series of order `e'`.
pub fn phi_polynomial(eps: EpsilonPrime) -> RationalSeries {
    let e = eps.odd();
    RationalSeries::from_coeffs(
        (0..=e).map(|n| first_passage_phi(1, n)).collect(),
        e as usize,
    )
}

/// Series of `E[z^L] = (1 - Phi(1)) / (1 - Phi(z))` for the simplified avalanche.
pub fn simplified_avalanche_pgf(eps: EpsilonPrime, order: usize) -> RationalSeries {
    let phi = phi_polynomial(eps);
    let q = survival_r(eps);
    let mut denom = RationalSeries::one(order);
    for (n, c) in phi.coeffs().iter().enumerate().take(order + 1) {
        if !c.is_zero() {
            denom = denom.sub(&RationalSeries::monomial(c.clone(), n, order));
        }
    }
    denom.reciprocal().expect("constant term is 1").scale(&q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub mean: BigRational,
    pub variance: BigRational,
}

/// Mean and variance from the closed forms, with the middle variance term's
/// binomial `C(2 + e', (3 + e') / 2)` (the same one as in the mean).
pub fn simplified_moments(eps: EpsilonPrime) -> Moments {
    let e = eps.odd();
    let c = ratio(binomial(2 + e, (3 + e) / 2), BigUint::one());
    let two_pow = pow2(2 + e);
    let mean = big(2 + e) - big(2 + e) / big(3 + e) * &two_pow / &c;
    let variance = rational_u(4, 3) * big(2 + 3 * e + e * e)
        - big(6 + 7 * e + 2 * e * e) / big(3 + e) * &two_pow / &c
        + big((2 + e) * (2 + e)) / big((3 + e) * (3 + e)) * pow2(4 + 2 * e) / (&c * &c);
    Moments { mean, variance }
}

/// The variance closed form exactly as printed, with `C(2 + e', 3 + e')` in
/// the middle term. That binomial is 0, so this always fails.
pub fn simplified_variance_as_printed(eps: EpsilonPrime) -> Result<BigRational, SeriesError> {
    let e = eps.odd();
    let middle_binomial = binomial(2 + e, 3 + e);
    if middle_binomial.is_zero() {
        return Err(SeriesError::DivisionByZero("C(2 + e', 3 + e') = 0"));
    }
    let c = ratio(binomial(2 + e, (3 + e) / 2), BigUint::one());
    Ok(rational_u(4, 3) * big(2 + 3 * e + e * e)
        - big(6 + 7 * e + 2 * e * e) / big(3 + e) * pow2(2 + e)
            / ratio(middle_binomial, BigUint::one())
        + big((2 + e) * (2 + e)) / big((3 + e) * (3 + e)) * pow2(4 + 2 * e) / (&c * &c))
}

/// Mean and variance from derivatives of `G(z) = (1 - Phi(1)) / (1 - Phi(z))` at 1:
/// `G' = Phi' / (1 - Phi)`, `G'' = Phi'' / (1 - Phi) + 2 Phi'^2 / (1 - Phi)^2`.
pub fn simplified_moments_from_pgf(eps: EpsilonPrime) -> Moments {
    let phi = phi_polynomial(eps);
    let one = BigRational::one();
    let d1 = phi.derivative();
    let d2 = d1.derivative();
    let q = &one - phi.eval(&one);
    let p1 = d1.eval(&one);
    let p2 = d2.eval(&one);
    let g1 = &p1 / &q;
    let g2 = &p2 / &q + BigRational::from_integer(2.into()) * &p1 * &p1 / (&q * &q);
    Moments {
        variance: &g2 + &g1 - &g1 * &g1,
        mean: g1,
    }
}

fn rational_u(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Whether the reduced denominator of `x` is a power of two.
pub fn is_dyadic(x: &BigRational) -> bool {
    x.denom().magnitude().count_ones() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::series::rational;
    use proptest::prelude::*;

    fn ep(e: u64) -> EpsilonPrime {
        EpsilonPrime::new(e).unwrap()
    }

    #[test]
    fn phi_values() {
        assert_eq!(first_passage_phi(1, 1), rational(1, 2));
        assert_eq!(first_passage_phi(1, 3), rational(1, 8));
        assert_eq!(first_passage_phi(1, 2), rational(0, 1));
        assert_eq!(first_passage_phi(3, 1), rational(0, 1));
        assert_eq!(first_passage_phi(2, 2), rational(1, 4));
    }

    #[test]
    fn path_counts() {
        assert_eq!(count_first_passage_paths(1), BigUint::from(1u8));
        assert_eq!(count_first_passage_paths(5), BigUint::from(2u8));
        assert_eq!(count_first_passage_paths(4), BigUint::zero());
    }

    #[test]
    fn path_counts_match_enumeration() {
        for k in 1..=15u64 {
            let brute = (0..1u32 << k)
                .filter(|mask| {
                    let mut s = 0i64;
                    for j in 0..k {
                        s += if mask >> j & 1 == 1 { 1 } else { -1 };
                        if s == 1 {
                            return j == k - 1;
                        }
                    }
                    false
                })
                .count();
            assert_eq!(
                count_first_passage_paths(k),
                BigUint::from(brute),
                "k = {k}"
            );
            assert_eq!(
                first_passage_phi(1, k),
                BigRational::new(BigInt::from(brute), BigInt::one() << k)
            );
        }
    }

    #[test]
    fn epsilon_prime() {
        assert_eq!(EpsilonPrime::new(0), Err(LadderError::ZeroEpsilon(0)));
        let pairs = [(1, 1), (2, 1), (3, 3), (4, 3), (9, 9), (10, 9)];
        for (e, odd) in pairs {
            assert_eq!(ep(e).odd(), odd);
        }
    }

    #[test]
    fn pgf_r_coefficients() {
        let r = pgf_r(51);
        assert_eq!(r.coeff(1), rational(1, 2));
        assert_eq!(r.coeff(2), rational(0, 1));
        let mut prev = BigRational::zero();
        for n in 1..=51 {
            let s = r.partial_sum(n);
            assert!(s >= prev && s < BigRational::one());
            prev = s;
        }
    }

    #[test]
    fn survival_values() {
        assert_eq!(survival_r(ep(1)), rational(1, 2));
        assert_eq!(survival_r(ep(3)), rational(3, 8));
        assert_eq!(survival_r(ep(2)), rational(1, 2));
        for e in 1..=40 {
            assert_eq!(survival_r(ep(e)), survival_r_by_sum(e), "epsilon {e}");
        }
    }

    #[test]
    fn phi_polynomial_values() {
        assert_eq!(
            phi_polynomial(ep(1)).coeffs(),
            &[rational(0, 1), rational(1, 2)]
        );
        let p3 = phi_polynomial(ep(3));
        assert_eq!(p3.coeff(1), rational(1, 2));
        assert_eq!(p3.coeff(3), rational(1, 8));
        assert_eq!(p3.order(), 3);
        for e in 1..=12 {
            let p = phi_polynomial(ep(e));
            assert_eq!(
                p.eval(&BigRational::one()) + survival_r(ep(e)),
                BigRational::one()
            );
        }
    }

    #[test]
    fn simplified_pgf_small_windows() {
        let one = simplified_avalanche_pgf(ep(1), 30);
        for n in 0..=30 {
            assert_eq!(one.coeff(n), rational(1, 2i64.pow(n as u32 + 1)));
        }
        assert_eq!(simplified_avalanche_pgf(ep(2), 30), one);
        for e in [3, 6, 11] {
            let s = simplified_avalanche_pgf(ep(e), 200);
            assert!(s.is_probability_series());
            assert_eq!(s.coeff(0), survival_r(ep(e)));
        }
    }

    #[test]
    fn moments_small() {
        let m1 = simplified_moments(ep(1));
        assert_eq!(m1.mean, rational(1, 1));
        assert_eq!(m1.variance, rational(2, 1));
        assert_eq!(simplified_moments(ep(3)).mean, rational(7, 3));
    }

    #[test]
    fn moments_match_geometric_oracle_at_one() {
        // L_1 = number of consecutive unit ladder gaps: P(L = k) = 2^-(k+1).
        let mut mean = BigRational::zero();
        let mut second = BigRational::zero();
        for k in 0..400u64 {
            let p = BigRational::new(BigInt::one(), BigInt::one() << (k + 1));
            mean += big(k) * &p;
            second += big(k * k) * &p;
        }
        let var = &second - &mean * &mean;
        let m = simplified_moments(ep(1));
        let tol = rational(1, 1_000_000_000);
        assert!((&mean - &m.mean).abs() < tol);
        assert!((&var - &m.variance).abs() < tol);
    }

    #[test]
    fn printed_variance_fails() {
        for e in 1..=9 {
            assert!(matches!(
                simplified_variance_as_printed(ep(e)),
                Err(SeriesError::DivisionByZero(_))
            ));
        }
    }

    use num_traits::Signed;

    proptest! {
        #[test]
        fn closed_form_moments_match_pgf(e in 1u64..40) {
            prop_assert_eq!(simplified_moments(ep(e)), simplified_moments_from_pgf(ep(e)));
        }

        #[test]
        fn parity_trick(e in 1u64..60) {
            let odd = ep(e).odd();
            prop_assert_eq!(odd % 2, 1);
            prop_assert!(odd == e || odd + 1 == e);
            prop_assert_eq!(survival_r_by_sum(e), survival_r_by_sum(odd));
        }

        #[test]
        fn phi_vanishes_off_parity(r in 1u64..10, n in 1u64..40) {
            let v = first_passage_phi(r, n);
            if n < r || (n + r) % 2 == 1 {
                prop_assert!(v.is_zero());
            } else {
                prop_assert!(v > BigRational::zero());
                prop_assert!(is_dyadic(&v));
            }
        }
    }
}
