//! Cross-layer verification suites: exact tables, enumeration oracles,
//! Monte Carlo agreement and continuum limits. Each check carries its
//! expected and actual values as text so reports can print them as is.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::avalanche_stats::{estimate_distribution, AvalancheConfig, Epsilon, Quantity};
use crate::exact_series::tables::{
    check_first_trade_table, check_full_avalanche_forms, check_full_avalanche_tables,
    check_survival_table, FULL_AVALANCHE_FORMS,
};
use crate::exact_series::{
    brute_force_avalanche, brute_force_first_trade_split, first_trade_pgf_empty,
    full_avalanche_pgf, rational, simplified_moments, simplified_moments_from_pgf,
    simplified_variance_as_printed, t1_pgf, t1_split, t1_survival, CellCheck, EpsilonPrime,
};
use crate::scaling_limits::{
    convergence_study_simplified, convergence_study_t1, h_laplace_closed, h_laplace_integral,
    simplified_limit_moments_fd, LaplaceArg, StudyBudget,
};
use crate::walk_and_book::{check_structural_lemmas, InitMode, SpreadParam};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Tables,
    Oracle,
    MonteCarlo,
    Limits,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Tables,
        Suite::Oracle,
        Suite::MonteCarlo,
        Suite::Limits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Oracle => "oracle",
            Suite::MonteCarlo => "montecarlo",
            Suite::Limits => "limits",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Budget {
    Quick,
    Full,
}

/// Sizes behind a budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Effort {
    pub oracle_len: usize,
    pub lemma_len: usize,
    pub mc_paths: u64,
}

impl Budget {
    pub fn effort(self) -> Effort {
        match self {
            Budget::Quick => Effort {
                oracle_len: 18,
                lemma_len: 14,
                mc_paths: 100_000,
            },
            Budget::Full => Effort {
                oracle_len: 20,
                lemma_len: 16,
                mc_paths: 1_000_000,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: expected {}, got {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite.name(),
            self.name,
            self.expected,
            self.actual
        )
    }
}

fn check(
    suite: Suite,
    name: String,
    expected: impl ToString,
    actual: impl ToString,
    passed: bool,
) -> Check {
    Check {
        suite,
        name,
        expected: expected.to_string(),
        actual: actual.to_string(),
        passed,
    }
}

fn spread(m: i64) -> SpreadParam {
    SpreadParam::new(m).expect("positive spread")
}

fn window(e: u64) -> Epsilon {
    Epsilon::new(e).expect("positive window")
}

fn from_cells(suite: Suite, prefix: &str, cells: Vec<CellCheck>) -> Vec<Check> {
    cells
        .into_iter()
        .map(|c| {
            let passed = c.passed();
            check(
                suite,
                format!("{prefix} {}", c.label),
                c.expected,
                c.computed,
                passed,
            )
        })
        .collect()
}

pub fn run_suite(suite: Suite, budget: Budget, seed: u64) -> Vec<Check> {
    let effort = budget.effort();
    match suite {
        Suite::Tables => {
            let mut out = table_checks();
            out.extend(moment_checks());
            out.extend(type_one_mass_checks(400));
            out
        }
        Suite::Oracle => {
            let mut out = oracle_checks(effort.oracle_len);
            out.extend(lemma_checks(effort.lemma_len));
            out
        }
        Suite::MonteCarlo => montecarlo_checks(effort.mc_paths, seed),
        Suite::Limits => limit_checks(),
    }
}

/// First-trade table, survival table, the printed rational forms through
/// order 32 (one check per form) and the avalanche tables.
pub fn table_checks() -> Vec<Check> {
    let s = Suite::Tables;
    let mut out = from_cells(s, "P[T1=n]", check_first_trade_table());
    out.extend(from_cells(s, "P[T1>eps]", check_survival_table()));
    let forms = check_full_avalanche_forms(32);
    for (i, chunk) in forms.chunks(33).enumerate() {
        let (m, e) = (i / 5 + 1, i % 5 + 1);
        let (num, den) = FULL_AVALANCHE_FORMS[m - 1][e - 1];
        let bad: Vec<&CellCheck> = chunk.iter().filter(|c| !c.passed()).collect();
        out.push(check(
            s,
            format!("form mu={m} eps={e} through z^32"),
            format!("{num}/{den:?}"),
            if bad.is_empty() {
                "all 33 coefficients equal".to_string()
            } else {
                format!("{} differ, first {}", bad.len(), bad[0].label)
            },
            bad.is_empty(),
        ));
    }
    out.extend(from_cells(s, "P[L*=k]", check_full_avalanche_tables()));
    out
}

/// Closed-form moments against the PGF derivatives, the geometric case and
/// the printed variance formula.
pub fn moment_checks() -> Vec<Check> {
    let s = Suite::Tables;
    let mut out = Vec::new();
    for e in 1..=9 {
        let eps = EpsilonPrime::new(e).expect("positive");
        let closed = simplified_moments(eps);
        let pgf = simplified_moments_from_pgf(eps);
        out.push(check(
            s,
            format!("moments eps={e} closed form = PGF derivatives"),
            format!("{} / {}", pgf.mean, pgf.variance),
            format!("{} / {}", closed.mean, closed.variance),
            closed == pgf,
        ));
    }
    let m1 = simplified_moments(EpsilonPrime::new(1).expect("positive"));
    out.push(check(
        s,
        "moments eps=1 geometric".into(),
        "1 / 2",
        format!("{} / {}", m1.mean, m1.variance),
        m1.mean == rational(1, 1) && m1.variance == rational(2, 1),
    ));
    let printed = simplified_variance_as_printed(EpsilonPrime::new(1).expect("positive"));
    out.push(check(
        s,
        "printed variance binomial C(2+e', 3+e') is zero".into(),
        "division by zero",
        match &printed {
            Ok(v) => v.to_string(),
            Err(e) => e.to_string(),
        },
        printed.is_err(),
    ));
    out
}

/// Truncated Type I mass `A_mu(1)` through `order` against `mu / (mu + 1)`.
pub fn type_one_mass_checks(order: usize) -> Vec<Check> {
    (1..=4)
        .map(|m| {
            let mass = t1_split(spread(m), order).type1.partial_sum(order);
            let target = rational(m, m + 1);
            let gap = (&target - &mass).to_f64().unwrap_or(f64::NAN);
            check(
                Suite::Tables,
                format!("P[first trade Type I] mu={m} order {order}"),
                format!("{target} within 1e-3"),
                format!("{:.6}", mass.to_f64().unwrap_or(f64::NAN)),
                (0.0..=1e-3).contains(&gap),
            )
        })
        .collect()
}

/// Exact equality of the series with enumeration of all paths up to `max_len`.
pub fn oracle_checks(max_len: usize) -> Vec<Check> {
    let s = Suite::Oracle;
    let mut out = Vec::new();
    for m in 1..=3 {
        let mu = spread(m);
        let series = t1_pgf(mu, max_len);
        let brute =
            brute_force_first_trade_split(mu, InitMode::FullBook, max_len).expect("within limit");
        let bad = (1..=max_len).find(|&n| series.coeff(n) != &brute.type1[n] + &brute.type2[n]);
        out.push(oracle_check(
            s,
            format!("full book T1 mu={m} n<={max_len}"),
            bad,
        ));

        let empty = first_trade_pgf_empty(mu, max_len);
        let brute =
            brute_force_first_trade_split(mu, InitMode::EmptyBook, max_len).expect("within limit");
        let bad = (1..=max_len).find(|&n| {
            empty.type1.coeff(n) != brute.type1[n] || empty.type2.coeff(n) != brute.type2[n]
        });
        out.push(oracle_check(
            s,
            format!("empty book T by type mu={m} n<={max_len}"),
            bad,
        ));
    }
    for m in 1..=2 {
        for e in 1..=3u64 {
            let o = brute_force_avalanche(spread(m), window(e), max_len).expect("within limit");
            let series = full_avalanche_pgf(spread(m), e, o.resolved_through as usize);
            let bad = o
                .probabilities
                .iter()
                .find(|(&k, p)| &series.coeff(k as usize) != *p)
                .map(|(&k, _)| k as usize);
            let mass: BigRational =
                o.probabilities.values().sum::<BigRational>() + &o.unresolved_mass;
            out.push(oracle_check(
                s,
                format!("full avalanche mu={m} eps={e} k<={}", o.resolved_through),
                bad.or((!mass.is_one()).then_some(usize::MAX)),
            ));
        }
    }
    out
}

fn oracle_check(suite: Suite, name: String, first_mismatch: Option<usize>) -> Check {
    check(
        suite,
        name,
        "exact equality",
        match first_mismatch {
            None => "equal".to_string(),
            Some(n) => format!("first difference at {n}"),
        },
        first_mismatch.is_none(),
    )
}

/// Exhaustive structural checks over every path up to `max_len` steps.
pub fn lemma_checks(max_len: usize) -> Vec<Check> {
    (1..=3)
        .flat_map(|m| check_structural_lemmas(spread(m), max_len))
        .map(|r| {
            check(
                Suite::Oracle,
                format!("{} mu={} len<={}", r.name, r.mu.get(), r.max_len),
                "0 violations",
                format!("{} violations in {} cases", r.violation_count, r.cases),
                r.passed(),
            )
        })
        .collect()
}

/// `|p_hat - p| <= 4 sqrt(p (1 - p) / n)`.
fn band_check(name: String, exact: &BigRational, hits: u64, n: u64) -> Check {
    let p = exact.to_f64().unwrap_or(f64::NAN);
    let p_hat = hits as f64 / n as f64;
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    let z = (p_hat - p).abs() / sigma;
    check(
        Suite::MonteCarlo,
        name,
        format!("{exact} (~{p:.6})"),
        format!("{p_hat:.6} ({z:.2} sigma)"),
        z <= 4.0,
    )
}

/// [`distribution_band_checks`] and [`type_one_share_checks`].
pub fn montecarlo_checks(n_paths: u64, seed: u64) -> Vec<Check> {
    let mut out = distribution_band_checks(n_paths, seed);
    out.extend(type_one_share_checks(n_paths, seed));
    out
}

/// Every first-trade, survival and avalanche probability of at least 1/1024
/// against a 4-sigma binomial band.
pub fn distribution_band_checks(n_paths: u64, seed: u64) -> Vec<Check> {
    let floor = rational(1, 1024);
    let mut out = Vec::new();
    for m in 1..=7 {
        let mu = spread(m);
        let cfg = AvalancheConfig::new(mu, window(1), n_paths, seed);
        let dist = estimate_distribution(&cfg, Quantity::FirstTradeTime).expect("valid config");
        let series = t1_pgf(mu, 10);
        for n in 1..=10u64 {
            let p = series.coeff(n as usize);
            if p >= floor {
                out.push(band_check(
                    format!("P[T1={n}] mu={m}"),
                    &p,
                    dist.count(n),
                    n_paths,
                ));
            }
        }
        for e in 1..=9u64 {
            let q = t1_survival(mu, e);
            if q >= floor {
                let above: u64 =
                    dist.counts.range(e + 1..).map(|(_, c)| c).sum::<u64>() + dist.censored;
                out.push(band_check(format!("P[T1>{e}] mu={m}"), &q, above, n_paths));
            }
        }
    }
    for m in 1..=4 {
        for e in 1..=5u64 {
            let cfg = AvalancheConfig::new(spread(m), window(e), n_paths, seed);
            let dist = estimate_distribution(&cfg, Quantity::FullLength).expect("valid config");
            let series = full_avalanche_pgf(spread(m), e, 32);
            for k in 0..=32u64 {
                let p = series.coeff(k as usize);
                if p >= floor {
                    out.push(band_check(
                        format!("P[L*={k}] mu={m} eps={e}"),
                        &p,
                        dist.count(k),
                        n_paths,
                    ));
                }
            }
        }
    }
    out
}

/// Share of paths whose first trade after 0 is Type I, against `mu / (mu + 1)`.
pub fn type_one_share_checks(n_paths: u64, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=4 {
        let cfg = AvalancheConfig::new(spread(m), window(1), n_paths, seed);
        let dist = estimate_distribution(&cfg, Quantity::FirstTypeIIIndex).expect("valid config");
        let type_one = n_paths - dist.count(1);
        out.push(band_check(
            format!("P[first trade Type I] mu={m}"),
            &rational(m, m + 1),
            type_one,
            n_paths,
        ));
    }
    out
}

fn tolerance_check(name: String, expected: String, actual: f64, passed: bool) -> Check {
    check(
        Suite::Limits,
        name,
        expected,
        format!("{actual:.6}"),
        passed,
    )
}

/// Convergence of the discrete transforms and identities of the limits.
pub fn limit_checks() -> Vec<Check> {
    let mut out = Vec::new();
    match convergence_study_t1(1.0, 1.0, &[100, 1_000, 10_000], StudyBudget::default()) {
        Ok(study) => {
            let order = study.report.fitted_order;
            out.push(tolerance_check(
                "T1 transform fitted order, mu=1 s=1".into(),
                "0.5 +/- 0.15".into(),
                order,
                (order - 0.5).abs() <= 0.15,
            ));
            let last = study.report.rows.last().expect("three rows");
            out.push(tolerance_check(
                "T1 transform at n=1e4".into(),
                format!("{:.6} +/- 0.05", last.limit_value),
                last.discrete_value,
                last.scaled_error <= 0.05,
            ));
        }
        Err(e) => out.push(check(
            Suite::Limits,
            "T1 transform study".into(),
            "report",
            e,
            false,
        )),
    }
    match convergence_study_simplified(1.0, 1.0, &[100, 1_000, 10_000]) {
        Ok(study) => {
            let row = &study.report.rows[2];
            let rel = (row.discrete_value / row.limit_value - 1.0).abs();
            out.push(tolerance_check(
                "simplified transform at n=1e4, lambda=eps=1".into(),
                format!("{:.6} within 1%", row.limit_value),
                row.discrete_value,
                rel < 0.01,
            ));
            let surv = study.survival[2].scaled_survival;
            out.push(tolerance_check(
                "sqrt(n) P[R>n] at n=1e4".into(),
                format!("{:.6} within 1%", study.survival_limit),
                surv,
                (surv / study.survival_limit - 1.0).abs() < 0.01,
            ));
        }
        Err(e) => out.push(check(
            Suite::Limits,
            "simplified study".into(),
            "report",
            e,
            false,
        )),
    }
    for lambda in [0.5, 1.0, 2.0] {
        for mu in [0.5, 1.0, 2.0] {
            let arg = LaplaceArg::new(lambda, 1.0, mu).expect("positive");
            let closed = h_laplace_closed(lambda, mu);
            let name = format!("int (1-e^-lx) h = sqrt(2l) tanh(mu sqrt(2l)), l={lambda} mu={mu}");
            match h_laplace_integral(&arg) {
                Ok(v) => out.push(tolerance_check(
                    name,
                    format!("{closed:.9} +/- 1e-6"),
                    v,
                    (v - closed).abs() < 1e-6,
                )),
                Err(e) => out.push(check(Suite::Limits, name, closed, e, false)),
            }
        }
    }
    for eps in [0.5, 1.0, 2.0] {
        let (mean, var) = simplified_limit_moments_fd(eps, 1e-3);
        out.push(tolerance_check(
            format!("simplified limit mean, eps={eps}"),
            format!("{eps} (rel 1e-4)"),
            mean,
            (mean / eps - 1.0).abs() < 1e-4,
        ));
        let target = 4.0 / 3.0 * eps * eps;
        out.push(tolerance_check(
            format!("simplified limit variance, eps={eps}"),
            format!("{target:.6} (rel 1e-4)"),
            var,
            (var / target - 1.0).abs() < 1e-4,
        ));
    }
    out
}
