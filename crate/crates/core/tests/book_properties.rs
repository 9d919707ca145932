use lob_avalanche::walk_and_book::{
    detect_trades, detect_trades_audited, generate_walk, simplified_trading_times, AskTracker,
    BookState, InitMode, RngStream, SpreadParam, TradeKind, WalkPath,
};
use proptest::prelude::*;

fn path_strategy() -> impl Strategy<Value = WalkPath> {
    prop::collection::vec(any::<bool>(), 1..300).prop_map(WalkPath::from_ups)
}

proptest! {
    #[test]
    fn ask_stays_in_band_and_matches_volume(path in path_strategy(), m in 1i64..6) {
        let mu = SpreadParam::new(m).unwrap();
        let (book, _) = BookState::open(InitMode::FullBook, mu, 1);
        let mut book = book.with_audit(true);
        for &s in &path.levels()[1..] {
            book.step(s).unwrap();
            let ask = book.best_ask().unwrap();
            prop_assert!(s <= ask && ask <= s + m + 1);
            prop_assert!(book.consistency(true).is_ok());
            for u in (s - m - 2)..=(s + m + 2) {
                prop_assert_eq!(book.volume_at(u) > 0, u >= ask, "level {}", u);
            }
        }
    }

    #[test]
    fn volume_trades_equal_recursion_trades(path in path_strategy(), m in 1i64..6) {
        let mu = SpreadParam::new(m).unwrap();
        let by_volume: Vec<u64> = detect_trades_audited(&path, mu, InitMode::FullBook, 1)
            .iter()
            .map(|t| t.time)
            .filter(|&t| t > 0)
            .collect();
        let mut ask = AskTracker::new(mu);
        let by_recursion: Vec<u64> = path
            .levels()
            .windows(2)
            .enumerate()
            .filter_map(|(i, w)| ask.step(w[1] > w[0]).then_some(i as u64 + 1))
            .collect();
        prop_assert_eq!(by_volume, by_recursion);
    }

    #[test]
    fn ladder_times_are_type_one_trades(path in path_strategy(), m in 1i64..6) {
        let trades = detect_trades(&path, SpreadParam::new(m).unwrap(), InitMode::FullBook, 1);
        for t in simplified_trading_times(&path) {
            let hit = trades.iter().find(|e| e.time == t);
            prop_assert!(matches!(hit, Some(e) if e.kind == TradeKind::TypeI), "time {}", t);
        }
    }

    #[test]
    fn new_high_trades_do_not_depend_on_spread(path in path_strategy(), m in 1i64..5, extra in 1i64..4) {
        // Type I trades at a new maximum are the ladder times for every spread.
        let new_highs = |mu: i64| -> Vec<u64> {
            let mut high = 0;
            detect_trades(&path, SpreadParam::new(mu).unwrap(), InitMode::FullBook, 1)
                .into_iter()
                .filter(|t| {
                    let fresh = t.kind == TradeKind::TypeI && t.level > high;
                    high = high.max(t.level);
                    fresh
                })
                .map(|t| t.time)
                .collect()
        };
        prop_assert_eq!(new_highs(m), simplified_trading_times(&path));
        prop_assert_eq!(new_highs(m), new_highs(m + extra));
    }

    #[test]
    fn detection_is_deterministic(seed in any::<u64>(), m in 1i64..5, e in 1u64..6) {
        let path = generate_walk(&RngStream::new(seed, 3), 200);
        let mu = SpreadParam::new(m).unwrap();
        for mode in [InitMode::FullBook, InitMode::EmptyBook] {
            prop_assert_eq!(detect_trades(&path, mu, mode, e), detect_trades(&path, mu, mode, e));
        }
    }

    #[test]
    fn gaps_and_flash_flags_are_consistent(path in path_strategy(), m in 1i64..5, e in 1u64..6) {
        let trades = detect_trades(&path, SpreadParam::new(m).unwrap(), InitMode::FullBook, e);
        for w in trades.windows(2) {
            prop_assert_eq!(w[1].intertrade_gap, w[1].time - w[0].time);
            prop_assert_eq!(w[1].kind == TradeKind::TypeI, w[1].level > w[0].level);
            prop_assert_eq!(w[1].flash_crash, w[1].kind == TradeKind::TypeII && w[1].intertrade_gap <= e);
        }
    }
}

#[test]
fn type_one_after_a_type_two_depends_on_spread() {
    // mu = 1 trades at -2 (Type II) and then at -1, which is above the
    // previous trade and so Type I. mu = 2 has no trade at time 5.
    let path = WalkPath::new(vec![0, -1, -2, -3, -2, -1, 0]).unwrap();
    let type_one = |m: i64| -> Vec<u64> {
        detect_trades(&path, SpreadParam::new(m).unwrap(), InitMode::FullBook, 1)
            .into_iter()
            .filter(|t| t.kind == TradeKind::TypeI)
            .map(|t| t.time)
            .collect()
    };
    assert_eq!(type_one(1), vec![5, 6]);
    assert_eq!(type_one(2), vec![6]);
}

#[test]
fn same_stream_same_walk() {
    let a = generate_walk(&RngStream::new(9, 4), 1000);
    let b = generate_walk(&RngStream::new(9, 4), 1000);
    let c = generate_walk(&RngStream::new(9, 5), 1000);
    assert_eq!(a, b);
    assert_ne!(a, c);
}
