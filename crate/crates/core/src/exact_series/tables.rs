//! Reference probability tables and cell-by-cell reproduction.

use num_rational::BigRational;

use super::classes::{full_avalanche_pgf, t1_pgf, t1_survival};
use super::series::{rational, RationalSeries};
use crate::walk_and_book::SpreadParam;

/// `P[T1 = n]`, rows `mu = 1..=7`, columns `n = 1..=10`.
pub const FIRST_TRADE: [[&str; 10]; 7] = [
    [
        "1/2", "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256", "1/512", "1/1024",
    ],
    [
        "1/2", "0", "1/8", "1/16", "1/16", "3/64", "5/128", "1/32", "13/512", "21/1024",
    ],
    [
        "1/2", "0", "1/8", "0", "1/16", "1/64", "5/128", "5/256", "7/256", "19/1024",
    ],
    [
        "1/2", "0", "1/8", "0", "1/16", "0", "5/128", "1/256", "7/256", "7/1024",
    ],
    [
        "1/2", "0", "1/8", "0", "1/16", "0", "5/128", "0", "7/256", "1/1024",
    ],
    [
        "1/2", "0", "1/8", "0", "1/16", "0", "5/128", "0", "7/256", "0",
    ],
    [
        "1/2", "0", "1/8", "0", "1/16", "0", "5/128", "0", "7/256", "0",
    ],
];

/// `P[T1 > epsilon]`, rows `mu = 1..=7`, columns `epsilon = 1..=9`.
pub const FIRST_TRADE_SURVIVAL: [[&str; 9]; 7] = [
    [
        "1/2", "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256", "1/512",
    ],
    [
        "1/2", "1/2", "3/8", "5/16", "1/4", "13/64", "21/128", "17/128", "55/512",
    ],
    [
        "1/2", "1/2", "3/8", "3/8", "5/16", "19/64", "33/128", "61/256", "27/128",
    ],
    [
        "1/2", "1/2", "3/8", "3/8", "5/16", "5/16", "35/128", "69/256", "31/128",
    ],
    [
        "1/2", "1/2", "3/8", "3/8", "5/16", "5/16", "35/128", "35/128", "63/256",
    ],
    [
        "1/2", "1/2", "3/8", "3/8", "5/16", "5/16", "35/128", "35/128", "63/256",
    ],
    [
        "1/2", "1/2", "3/8", "3/8", "5/16", "5/16", "35/128", "35/128", "63/256",
    ],
];

/// Full avalanche PGF as `numerator / (d_0 + d_1 z + ...)`, rows `mu = 1..=4`,
/// columns `epsilon = 1..=5`.
pub const FULL_AVALANCHE_FORMS: [[(i64, &[i64]); 5]; 4] = [
    [
        (1, &[2, -1]),
        (1, &[4, -2, -1]),
        (1, &[8, -4, -2, -1]),
        (1, &[16, -8, -4, -2, -1]),
        (1, &[32, -16, -8, -4, -2, -1]),
    ],
    [
        (1, &[2, -1]),
        (1, &[2, -1]),
        (3, &[8, -4, 0, -1]),
        (5, &[16, -8, 0, -2, -1]),
        (4, &[16, -8, 0, -2, -1, -1]),
    ],
    [
        (1, &[2, -1]),
        (1, &[2, -1]),
        (3, &[8, -4, 0, -1]),
        (3, &[8, -4, 0, -1]),
        (5, &[16, -8, 0, -2, 0, -1]),
    ],
    [
        (1, &[2, -1]),
        (1, &[2, -1]),
        (3, &[8, -4, 0, -1]),
        (3, &[8, -4, 0, -1]),
        (5, &[16, -8, 0, -2, 0, -1]),
    ],
];

/// `P[L* = k]` for `k = 1..=8`, rows `epsilon = 1..=5`.
pub type AvalancheTable = [[&'static str; 8]; 5];

pub const FULL_AVALANCHE_MU1: AvalancheTable = [
    [
        "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256", "1/512",
    ],
    [
        "1/8", "1/8", "3/32", "5/64", "1/16", "13/256", "21/512", "17/512",
    ],
    [
        "1/16", "1/16", "1/16", "7/128", "13/256", "3/64", "11/256", "81/2048",
    ],
    [
        "1/32", "1/32", "1/32", "1/32", "15/512", "29/1024", "7/256", "27/1024",
    ],
    [
        "1/64", "1/64", "1/64", "1/64", "1/64", "31/2048", "61/4096", "15/1024",
    ],
];

pub const FULL_AVALANCHE_MU2: AvalancheTable = [
    [
        "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256", "1/512",
    ],
    [
        "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256", "1/512",
    ],
    [
        "3/16", "3/32", "3/32", "9/128", "3/64", "9/256", "27/1024", "39/2048",
    ],
    [
        "5/32", "5/64", "5/64", "5/64", "15/256", "45/1024", "75/2048", "125/4096",
    ],
    [
        "1/8", "1/16", "1/16", "1/16", "1/16", "13/256", "21/512", "37/1024",
    ],
];

/// Shared by `mu = 3` and `mu = 4`.
pub const FULL_AVALANCHE_MU3: AvalancheTable = [
    [
        "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256", "1/512",
    ],
    [
        "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256", "1/512",
    ],
    [
        "3/16", "3/32", "3/32", "9/128", "3/64", "9/256", "27/1024", "39/2048",
    ],
    [
        "3/16", "3/32", "3/32", "9/128", "3/64", "9/256", "27/1024", "39/2048",
    ],
    [
        "5/32", "5/64", "5/64", "15/256", "15/256", "25/512", "75/2048", "125/4096",
    ],
];

pub fn parse_fraction(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((n, d)) => rational(n.trim().parse().unwrap(), d.trim().parse().unwrap()),
        None => rational(s.trim().parse().unwrap(), 1),
    }
}

/// One compared cell: `label` names row and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellCheck {
    pub label: String,
    pub expected: BigRational,
    pub computed: BigRational,
}

impl CellCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.computed
    }
}

fn spread(m: usize) -> SpreadParam {
    SpreadParam::new(m as i64).expect("table rows start at 1")
}

/// Every cell of the `P[T1 = n]` table against the series coefficients.
pub fn check_first_trade_table() -> Vec<CellCheck> {
    let mut out = Vec::new();
    for (row, cells) in FIRST_TRADE.iter().enumerate() {
        let t = t1_pgf(spread(row + 1), 10);
        for (col, cell) in cells.iter().enumerate() {
            out.push(CellCheck {
                label: format!("mu={} n={}", row + 1, col + 1),
                expected: parse_fraction(cell),
                computed: t.coeff(col + 1),
            });
        }
    }
    out
}

/// Every cell of the `P[T1 > epsilon]` table.
pub fn check_survival_table() -> Vec<CellCheck> {
    let mut out = Vec::new();
    for (row, cells) in FIRST_TRADE_SURVIVAL.iter().enumerate() {
        for (col, cell) in cells.iter().enumerate() {
            out.push(CellCheck {
                label: format!("mu={} eps={}", row + 1, col + 1),
                expected: parse_fraction(cell),
                computed: t1_survival(spread(row + 1), col as u64 + 1),
            });
        }
    }
    out
}

/// Expansion of a printed rational form `numerator / denominator(z)`.
pub fn expand_form(numerator: i64, denominator: &[i64], order: usize) -> RationalSeries {
    RationalSeries::from_i64(&[numerator], order)
        .div(&RationalSeries::from_i64(denominator, order))
        .expect("printed denominators have a nonzero constant term")
}

/// Each printed rational form, compared coefficientwise through `order`.
/// One check per coefficient; labels carry the form and the power.
pub fn check_full_avalanche_forms(order: usize) -> Vec<CellCheck> {
    let mut out = Vec::new();
    for (row, forms) in FULL_AVALANCHE_FORMS.iter().enumerate() {
        for (col, (num, den)) in forms.iter().enumerate() {
            let expected = expand_form(*num, den, order);
            let computed = full_avalanche_pgf(spread(row + 1), col as u64 + 1, order);
            for n in 0..=order {
                out.push(CellCheck {
                    label: format!("mu={} eps={} z^{}", row + 1, col + 1, n),
                    expected: expected.coeff(n),
                    computed: computed.coeff(n),
                });
            }
        }
    }
    out
}

/// Tables of `P[L* = k]` for `mu = 1, 2, 3, 4`.
pub fn check_full_avalanche_tables() -> Vec<CellCheck> {
    let tables: [(usize, &AvalancheTable); 4] = [
        (1, &FULL_AVALANCHE_MU1),
        (2, &FULL_AVALANCHE_MU2),
        (3, &FULL_AVALANCHE_MU3),
        (4, &FULL_AVALANCHE_MU3),
    ];
    let mut out = Vec::new();
    for (m, table) in tables {
        for (row, cells) in table.iter().enumerate() {
            let s = full_avalanche_pgf(spread(m), row as u64 + 1, 8);
            for (col, cell) in cells.iter().enumerate() {
                out.push(CellCheck {
                    label: format!("mu={m} eps={} k={}", row + 1, col + 1),
                    expected: parse_fraction(cell),
                    computed: s.coeff(col + 1),
                });
            }
        }
    }
    out
}
