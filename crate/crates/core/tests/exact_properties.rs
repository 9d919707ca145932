use lob_avalanche::avalanche_stats::Epsilon;
use lob_avalanche::exact_series::{
    brute_force_avalanche, brute_force_first_trade, class_gf, first_type2_index_law,
    first_type2_time_pgf, full_avalanche_pgf, rational, t1_pgf, PathClass,
};
use lob_avalanche::walk_and_book::{InitMode, SpreadParam};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn mu(m: i64) -> SpreadParam {
    SpreadParam::new(m).unwrap()
}

#[test]
fn first_trade_series_equals_enumeration_up_to_twenty_steps() {
    for m in 1..=7 {
        let series = t1_pgf(mu(m), 20);
        let brute = brute_force_first_trade(mu(m), InitMode::FullBook, 20).unwrap();
        for (n, b) in brute.iter().enumerate().skip(1) {
            assert_eq!(&series.coeff(n), b, "mu {m} n {n}");
        }
    }
}

#[test]
fn avalanche_series_equals_enumeration_where_resolved() {
    for m in 1..=3 {
        for e in 1..=4 {
            let o = brute_force_avalanche(mu(m), Epsilon::new(e).unwrap(), 20).unwrap();
            let series = full_avalanche_pgf(mu(m), e, o.resolved_through as usize);
            for (&k, p) in &o.probabilities {
                assert_eq!(&series.coeff(k as usize), p, "mu {m} eps {e} k {k}");
            }
        }
    }
}

#[test]
fn first_type2_time_matches_enumeration() {
    // tau_D for mu = 1 at small n, from the index law and the series.
    let s = first_type2_time_pgf(mu(1), 6);
    assert_eq!(s.coeff(1), rational(0, 1));
    assert_eq!(s.coeff(3), rational(1, 4));
    let law = first_type2_index_law(mu(2), 3);
    assert_eq!(law[0], rational(1, 3));
    assert_eq!(law[1], rational(2, 9));
}

proptest! {
    #[test]
    fn series_are_dyadic_and_sub_stochastic(m in 1i64..6, e in 1u64..10, order in 1usize..60) {
        let s = full_avalanche_pgf(mu(m), e, order);
        prop_assert!(s.is_dyadic());
        let mass = s.partial_sum(order);
        prop_assert!(mass <= BigRational::one());
        prop_assert!(s.coeffs().iter().all(|c| *c >= BigRational::zero()));
    }

    #[test]
    fn class_c_is_nonnegative_difference(m in 1i64..7, order in 1usize..50) {
        let c = class_gf(PathClass::C, mu(m), order);
        prop_assert!(c.coeffs().iter().all(|x| *x >= BigRational::zero()));
        prop_assert!(c.is_dyadic());
    }
}
