//! Truncated power series with exact rational coefficients.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("reciprocal needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
}

/// `sum_{n <= order} c_n z^n`, exact through `order`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<BigRational>,
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `count / 2^n`.
pub fn dyadic(count: &BigUint, n: usize) -> BigRational {
    BigRational::new(BigInt::from(count.clone()), BigInt::one() << n)
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigRational::one(), 0, order)
    }

    /// `c z^power`, truncated at `order`.
    pub fn monomial(c: BigRational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Pads with zeros or truncates so that exactly `order + 1` coefficients remain.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rational(c, 1)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs
            .get(n)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(
            self.coeffs[..=order.min(self.order())].to_vec(),
            order.min(self.order()),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order)
                .map(|n| &self.coeffs[n] + &other.coeffs[n])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order)
                .map(|n| &self.coeffs[n] - &other.coeffs[n])
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Integer numerators over one common denominator, through `order`.
    fn scaled(&self, order: usize) -> (Vec<BigInt>, BigInt) {
        let coeffs = &self.coeffs[..=order.min(self.order())];
        let common = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let nums = coeffs
            .iter()
            .map(|c| c.numer() * (&common / c.denom()))
            .collect();
        (nums, common)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let (a, da) = self.scaled(order);
        let (b, db) = other.scaled(order);
        let denom = da * db;
        let coeffs = (0..=order)
            .map(|n| {
                let mut acc = BigInt::zero();
                for i in 0..=n {
                    if !a[i].is_zero() && !b[n - i].is_zero() {
                        acc += &a[i] * &b[n - i];
                    }
                }
                BigRational::new(acc, denom.clone())
            })
            .collect();
        Self { coeffs }
    }

    /// `1 / self`. With `self = A / d` over integers, `1 / A` has coefficients
    /// `R_n / A_0^(n+1)` where `R_0 = 1` and
    /// `R_n = -sum_{k=1..n} A_k R_{n-k} A_0^(k-1)`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let order = self.order();
        let (a, d) = self.scaled(order);
        let mut powers = vec![BigInt::one()];
        for k in 1..=order + 1 {
            let next = &powers[k - 1] * &a[0];
            powers.push(next);
        }
        let mut r = vec![BigInt::one()];
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                if !a[k].is_zero() {
                    acc += &a[k] * &r[n - k] * &powers[k - 1];
                }
            }
            r.push(-acc);
        }
        let coeffs = r
            .into_iter()
            .enumerate()
            .map(|(n, rn)| BigRational::new(rn * &d, powers[n + 1].clone()))
            .collect();
        Ok(Self { coeffs })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.reciprocal()?))
    }

    /// `sum_{n <= upto} c_n`.
    pub fn partial_sum(&self, upto: usize) -> BigRational {
        self.coeffs
            .iter()
            .take(upto + 1)
            .fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// Value of the truncated polynomial at `z`.
    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    /// Formal derivative, exact through `order - 1`.
    pub fn derivative(&self) -> Self {
        let order = self.order().max(1);
        Self::from_coeffs(
            (1..self.coeffs.len())
                .map(|n| &self.coeffs[n] * BigRational::from_integer(BigInt::from(n)))
                .collect(),
            order - 1,
        )
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Every coefficient has a power-of-two denominator.
    pub fn is_dyadic(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.denom().magnitude().count_ones() == 1)
    }

    /// Coefficients in `[0, 1]` and every partial sum at most 1.
    pub fn is_probability_series(&self) -> bool {
        let mut acc = BigRational::zero();
        for c in &self.coeffs {
            if c.is_negative() || *c > BigRational::one() {
                return false;
            }
            acc += c;
            if acc > BigRational::one() {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| format!("({c})z^{n}"))
            .collect();
        write!(f, "[{} + O(z^{})]", terms.join(" + "), self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn geometric_reciprocal() {
        let s = RationalSeries::from_coeffs(vec![rational(1, 1), rational(-1, 2)], 10);
        let r = s.reciprocal().unwrap();
        for n in 0..=10 {
            assert_eq!(r.coeff(n), rational(1, 1 << n));
        }
        assert!(r.is_dyadic());
    }

    #[test]
    fn zero_constant_term() {
        let s = RationalSeries::monomial(rational(1, 2), 1, 5);
        assert_eq!(s.reciprocal(), Err(SeriesError::ZeroConstantTerm));
    }

    #[test]
    fn probability_checks() {
        let s = RationalSeries::from_coeffs(vec![rational(1, 2), rational(1, 2)], 3);
        assert!(s.is_probability_series());
        let s = RationalSeries::from_coeffs(vec![rational(3, 4), rational(1, 2)], 3);
        assert!(!s.is_probability_series());
        assert!(!RationalSeries::from_coeffs(vec![rational(1, 3)], 1).is_dyadic());
    }

    #[test]
    fn derivative_and_eval() {
        let s = RationalSeries::from_i64(&[1, 2, 3], 2);
        assert_eq!(s.derivative().coeffs(), &[rational(2, 1), rational(6, 1)]);
        assert_eq!(s.eval(&rational(1, 2)), rational(11, 4));
    }

    fn small_series(order: usize) -> impl Strategy<Value = RationalSeries> {
        prop::collection::vec((-20i64..20, 1i64..9), order + 1).prop_map(move |v| {
            RationalSeries::from_coeffs(v.into_iter().map(|(p, q)| rational(p, q)).collect(), order)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_matches_naive_convolution(a in small_series(8), b in small_series(8)) {
            let prod = a.mul(&b);
            for n in 0..=8 {
                let mut naive = BigRational::zero();
                for i in 0..=n {
                    naive += a.coeff(i) * b.coeff(n - i);
                }
                prop_assert_eq!(prod.coeff(n), naive);
            }
        }

        #[test]
        fn reciprocal_is_inverse(a in small_series(10)) {
            prop_assume!(!a.coeff(0).is_zero());
            let r = a.reciprocal().unwrap();
            prop_assert_eq!(a.mul(&r), RationalSeries::one(10));
        }

        #[test]
        fn add_sub_round_trip(a in small_series(6), b in small_series(6)) {
            prop_assert_eq!(a.add(&b).sub(&b), a);
        }
    }
}
