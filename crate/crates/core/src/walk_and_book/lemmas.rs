//! Exhaustive structural checks over every walk path up to a given length.

use super::book::{BookState, InitMode, SpreadParam, TradeKind};
use super::excursion::{decompose_type2_excursion, in_class_b, in_class_c};
use super::walk::WalkPath;

/// Outcome of one structural property over all enumerated cases.
#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub name: &'static str,
    pub mu: SpreadParam,
    pub max_len: usize,
    pub cases: u64,
    /// First few counterexamples, if any.
    pub violations: Vec<String>,
    pub violation_count: u64,
}

impl LemmaReport {
    fn new(name: &'static str, mu: SpreadParam, max_len: usize) -> Self {
        Self {
            name,
            mu,
            max_len,
            cases: 0,
            violations: Vec::new(),
            violation_count: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < 8 {
                self.violations.push(describe());
            }
        }
    }
}

struct Node {
    book: BookState,
    levels: Vec<i64>,
    running_max: i64,
    first_trade_seen: bool,
}

struct Reports {
    ask_bounds: LemmaReport,
    trade_equivalence: LemmaReport,
    ladder_type_one: LemmaReport,
    type_one_iff: LemmaReport,
    type_two_down: LemmaReport,
    decomposition: LemmaReport,
}

/// Enumerates all `2^max_len` full-book paths of `max_len` steps (and every
/// prefix) and checks:
///
/// * `S <= ask <= S + mu + 1` and positive volume exactly on levels `>= ask`;
/// * a trade happens iff `ask = S`;
/// * every new strict maximum is a Type I trade;
/// * the first trade after 0 is Type I iff the pre-trade path has max 0, min `> -mu`
///   and the trade is at +1;
/// * a Type II first trade implies max `<= 0` and min `<= -mu` over the excursion;
/// * Type II first excursions split into class-B pieces and a class-C tail and reassemble.
pub fn check_structural_lemmas(mu: SpreadParam, max_len: usize) -> Vec<LemmaReport> {
    let mut reports = Reports {
        ask_bounds: LemmaReport::new("ask bounds and volume/ask equivalence", mu, max_len),
        trade_equivalence: LemmaReport::new("trade by volume iff ask equals price", mu, max_len),
        ladder_type_one: LemmaReport::new("strict ladder times are Type I trades", mu, max_len),
        type_one_iff: LemmaReport::new("first trade Type I characterization", mu, max_len),
        type_two_down: LemmaReport::new("first trade Type II goes down to -mu", mu, max_len),
        decomposition: LemmaReport::new("Type II excursion decomposition round trip", mu, max_len),
    };
    let (book, _) = BookState::open(InitMode::FullBook, mu, 1);
    let root = Node {
        book,
        levels: vec![0],
        running_max: 0,
        first_trade_seen: false,
    };
    visit(root, mu, max_len, &mut reports);
    vec![
        reports.ask_bounds,
        reports.trade_equivalence,
        reports.ladder_type_one,
        reports.type_one_iff,
        reports.type_two_down,
        reports.decomposition,
    ]
}

fn visit(node: Node, mu: SpreadParam, max_len: usize, reports: &mut Reports) {
    if node.levels.len() > max_len {
        return;
    }
    for up in [true, false] {
        let s = *node.levels.last().unwrap() + if up { 1 } else { -1 };
        let mut book = node.book.clone();
        let ask_before = book.best_ask().unwrap();
        let prev = book.price();
        let trade = book.step(s).expect("unit step");
        let mut levels = node.levels.clone();
        levels.push(s);
        let n = levels.len() - 1;

        let consistency = book.consistency(true);
        reports
            .ask_bounds
            .record(consistency.is_ok(), || consistency.clone().unwrap_err());
        let ask = book.best_ask().unwrap();
        reports
            .trade_equivalence
            .record(trade.is_some() == (ask == s), || {
                format!("{levels:?}: trade {trade:?}, ask {ask} (was {ask_before} at price {prev})")
            });
        if s > node.running_max {
            let ok = matches!(trade, Some(t) if t.kind == TradeKind::TypeI);
            reports.ladder_type_one.record(ok, || {
                format!("{levels:?}: new maximum at {n} gave {trade:?}")
            });
        }

        let mut first_trade_seen = node.first_trade_seen;
        if let (Some(t), false) = (trade, first_trade_seen) {
            first_trade_seen = true;
            check_first_excursion(&levels, t.kind, mu, reports);
        }

        visit(
            Node {
                book,
                levels,
                running_max: node.running_max.max(s),
                first_trade_seen,
            },
            mu,
            max_len,
            reports,
        );
    }
}

fn check_first_excursion(levels: &[i64], kind: TradeKind, mu: SpreadParam, reports: &mut Reports) {
    let n = levels.len() - 1;
    let pre = &levels[..n];
    let pre_max = *pre.iter().max().unwrap();
    let pre_min = *pre.iter().min().unwrap();
    let predicted_type_one = pre_max == 0 && levels[n] == 1 && pre_min > -mu.ticks();
    reports
        .type_one_iff
        .record(predicted_type_one == (kind == TradeKind::TypeI), || {
            format!("{levels:?}: trade is {kind:?}")
        });
    if kind != TradeKind::TypeII {
        return;
    }
    let all_max = *levels.iter().max().unwrap();
    let all_min = *levels.iter().min().unwrap();
    reports
        .type_two_down
        .record(all_max <= 0 && all_min <= -mu.ticks(), || {
            format!("{levels:?}: max {all_max}, min {all_min}")
        });

    let excursion = WalkPath::new(levels.to_vec()).expect("enumerated path");
    let outcome = decompose_type2_excursion(&excursion, mu);
    let ok = match &outcome {
        Ok(d) => {
            d.depth() as i64 == -levels[n - 1]
                && d.segments.iter().all(|seg| in_class_b(seg, mu))
                && in_class_c(&d.tail, mu)
                && d.reassemble() == excursion
        }
        Err(_) => false,
    };
    reports
        .decomposition
        .record(ok, || format!("{levels:?}: {outcome:?}"));
}
