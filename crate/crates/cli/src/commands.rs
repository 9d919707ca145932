//! One function per subcommand.

use lob_avalanche::avalanche_stats::{estimate_distribution, AvalancheConfig, Epsilon, Quantity};
use lob_avalanche::exact_series::{
    class_gf, first_trade_pgf_empty, full_avalanche_pgf, simplified_avalanche_pgf,
    simplified_moments, t1_pgf, t1_survival, EpsilonPrime, PathClass,
};
use lob_avalanche::scaling_limits::{
    convergence_study_simplified, convergence_study_t1, excursion_density_g, full_limit_laplace,
    h_at, hyperbolic_coefficients, simplified_limit_laplace, ConvergenceReport, LaplaceArg,
    StudyBudget,
};
use lob_avalanche::verify::{run_suite, Budget, Suite};
use lob_avalanche::walk_and_book::{InitMode, SpreadParam};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use clap::Parser;

use crate::args::{
    BudgetArg, Cli, Command, ExactArgs, ExactTarget, LimitArgs, LimitTarget, QuantityArg,
    RerunArgs, SimulateArgs, SuiteArg, VerifyArgs,
};
use crate::error::{usage, CliError};
use crate::output::{sig12, OutputDir, RunContext, RunManifest};

fn spread(mu: Option<i64>) -> Result<SpreadParam, CliError> {
    let mu = mu.ok_or_else(|| usage("this target needs --mu"))?;
    SpreadParam::new(mu).map_err(usage)
}

fn window(eps: Option<u64>) -> Result<u64, CliError> {
    let eps = eps.ok_or_else(|| usage("this target needs --epsilon"))?;
    Epsilon::new(eps).map_err(usage)?;
    Ok(eps)
}

fn config_json<T: serde::Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

pub fn simulate(args: &SimulateArgs, ctx: &RunContext) -> Result<RunManifest, CliError> {
    let mu = SpreadParam::new(args.mu).map_err(usage)?;
    let epsilon = Epsilon::new(args.epsilon).map_err(usage)?;
    if args.z.is_nan() || args.z <= 0.0 {
        return Err(usage("--z must be positive"));
    }
    let mut config = AvalancheConfig::new(mu, epsilon, args.paths, args.seed);
    if let Some(h) = args.horizon {
        config = config.with_horizon(h);
    }
    if args.empty_book {
        config = config.with_mode(InitMode::EmptyBook);
    }
    let quantity = match args.quantity {
        QuantityArg::Simplified => Quantity::SimplifiedLength,
        QuantityArg::Full => Quantity::FullLength,
        QuantityArg::T1 => Quantity::FirstTradeTime,
        QuantityArg::DIndex => Quantity::FirstTypeIIIndex,
        QuantityArg::TauD => Quantity::TimeToFirstTypeII,
    };
    config.validate().map_err(usage)?;
    let mut out = OutputDir::prepare(&args.output, &["distribution.csv"])?;
    let dist = estimate_distribution(&config, quantity).map_err(usage)?;
    let rows = dist.counts.iter().map(|(&value, &count)| {
        let p = dist.probability(value);
        let se = dist.binomial_se(p);
        vec![
            value.to_string(),
            count.to_string(),
            sig12(p),
            sig12(se),
            sig12(p - args.z * se),
            sig12(p + args.z * se),
        ]
    });
    out.write_csv(
        "distribution.csv",
        &["value", "count", "p_hat", "std_error", "ci_low", "ci_high"],
        rows,
    )?;
    let mut cfg = config_json(args);
    cfg["horizon"] = json!(config.horizon);
    cfg["mode"] = json!(if args.empty_book {
        "empty-book"
    } else {
        "full-book"
    });
    let summary = json!({
        "quantity": quantity.name(),
        "n_paths": dist.n_paths(),
        "uncensored": dist.n_samples,
        "censored_count": dist.censored,
    });
    let manifest = out.finish(ctx, cfg, summary)?;
    println!(
        "{}: {} paths, {} censored -> {}",
        quantity.name(),
        dist.n_paths(),
        dist.censored,
        out_path(&args.output.out, "distribution.csv")
    );
    Ok(manifest)
}

fn out_path(dir: &std::path::Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn frac(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `num/den` cells, each followed by a decimal cell when asked.
fn rational_cells(values: &[BigRational], decimal: bool) -> Vec<String> {
    let mut cells = Vec::new();
    for v in values {
        cells.push(frac(v));
        if decimal {
            cells.push(sig12(v.to_f64().unwrap_or(f64::NAN)));
        }
    }
    cells
}

fn header(key: &str, columns: &[&str], decimal: bool) -> Vec<String> {
    let mut h = vec![key.to_string()];
    for c in columns {
        h.push(c.to_string());
        if decimal {
            h.push(format!("{c}_decimal"));
        }
    }
    h
}

type KeyedRow = (u64, Vec<BigRational>);

pub fn exact(args: &ExactArgs, ctx: &RunContext) -> Result<RunManifest, CliError> {
    let order = args.order;
    let (key, columns, rows): (&str, Vec<&str>, Vec<KeyedRow>) = match args.target {
        ExactTarget::T1 => {
            let s = t1_pgf(spread(args.mu)?, order);
            (
                "n",
                vec!["probability"],
                (1..=order).map(|n| (n as u64, vec![s.coeff(n)])).collect(),
            )
        }
        ExactTarget::Q => {
            let mu = spread(args.mu)?;
            let eps: Vec<u64> = match args.epsilon {
                Some(_) => vec![window(args.epsilon)?],
                None => (1..=order as u64).collect(),
            };
            (
                "epsilon",
                vec!["q"],
                eps.into_iter()
                    .map(|e| (e, vec![t1_survival(mu, e)]))
                    .collect(),
            )
        }
        ExactTarget::SimplifiedPgf => {
            let eps = EpsilonPrime::new(window(args.epsilon)?).map_err(usage)?;
            let s = simplified_avalanche_pgf(eps, order);
            (
                "k",
                vec!["probability"],
                (0..=order).map(|k| (k as u64, vec![s.coeff(k)])).collect(),
            )
        }
        ExactTarget::FullPgf => {
            let s = full_avalanche_pgf(spread(args.mu)?, window(args.epsilon)?, order);
            (
                "k",
                vec!["probability"],
                (0..=order).map(|k| (k as u64, vec![s.coeff(k)])).collect(),
            )
        }
        ExactTarget::Moments => {
            let eps: Vec<u64> = match args.epsilon {
                Some(_) => vec![window(args.epsilon)?],
                None => (1..=9).collect(),
            };
            let rows = eps
                .into_iter()
                .map(|e| {
                    let m = simplified_moments(EpsilonPrime::new(e).expect("checked"));
                    (e, vec![m.mean, m.variance])
                })
                .collect();
            ("epsilon", vec!["mean", "variance"], rows)
        }
        ExactTarget::EmptyT1 => {
            let p = first_trade_pgf_empty(spread(args.mu)?, order);
            let rows = (1..=order)
                .map(|n| {
                    (
                        n as u64,
                        vec![p.type1.coeff(n), p.type2.coeff(n), p.total.coeff(n)],
                    )
                })
                .collect();
            ("n", vec!["type1", "type2", "total"], rows)
        }
        ExactTarget::Classes => {
            let mu = spread(args.mu)?;
            let [a, b, c] =
                [PathClass::A, PathClass::B, PathClass::C].map(|k| class_gf(k, mu, order));
            let rows = (0..=order)
                .map(|n| (n as u64, vec![a.coeff(n), b.coeff(n), c.coeff(n)]))
                .collect();
            ("n", vec!["a", "b", "c"], rows)
        }
    };
    let mut out = OutputDir::prepare(&args.output, &["exact.csv"])?;
    let head = header(key, &columns, args.decimal);
    let head: Vec<&str> = head.iter().map(String::as_str).collect();
    out.write_csv(
        "exact.csv",
        &head,
        rows.iter().map(|(k, vals)| {
            let mut row = vec![k.to_string()];
            row.extend(rational_cells(vals, args.decimal));
            row
        }),
    )?;
    let manifest = out.finish(ctx, config_json(args), json!({ "rows": rows.len() }))?;
    println!(
        "{} rows -> {}",
        rows.len(),
        out_path(&args.output.out, "exact.csv")
    );
    Ok(manifest)
}

pub fn verify(args: &VerifyArgs, ctx: &RunContext) -> Result<Option<RunManifest>, CliError> {
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::Tables => vec![Suite::Tables],
        SuiteArg::Oracle => vec![Suite::Oracle],
        SuiteArg::Montecarlo => vec![Suite::MonteCarlo],
        SuiteArg::Limits => vec![Suite::Limits],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let budget = match args.budget {
        BudgetArg::Quick => Budget::Quick,
        BudgetArg::Full => Budget::Full,
    };
    let out = match &args.out {
        Some(dir) => Some(OutputDir::prepare(
            &crate::args::OutputArgs {
                out: dir.clone(),
                force: args.force,
            },
            &["verify.csv"],
        )?),
        None => None,
    };
    let checks: Vec<_> = suites
        .into_iter()
        .flat_map(|s| run_suite(s, budget, args.seed))
        .collect();
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!(
        "{} checks, {} passed, {} failed",
        checks.len(),
        checks.len() - failed,
        failed
    );
    let mut manifest = None;
    if let Some(mut out) = out {
        out.write_csv(
            "verify.csv",
            &["suite", "check", "expected", "actual", "status"],
            checks.iter().map(|c| {
                vec![
                    c.suite.name().to_string(),
                    c.name.clone(),
                    c.expected.clone(),
                    c.actual.clone(),
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                ]
            }),
        )?;
        manifest = Some(out.finish(
            ctx,
            config_json(args),
            json!({ "checks": checks.len(), "failed": failed }),
        )?);
    }
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: checks.len(),
        });
    }
    Ok(manifest)
}

fn report_rows(report: &ConvergenceReport) -> Vec<Vec<String>> {
    report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                sig12(r.discrete_value),
                sig12(r.limit_value),
                sig12(r.scaled_error),
                sig12(report.fitted_order),
            ]
        })
        .collect()
}

const REPORT_HEADER: [&str; 5] = [
    "n",
    "discrete_value",
    "limit_value",
    "scaled_error",
    "fitted_order",
];

pub fn limit(args: &LimitArgs, ctx: &RunContext) -> Result<RunManifest, CliError> {
    if args.lambda_grid.is_empty() {
        return Err(usage("--lambda-grid needs at least one value"));
    }
    let (head, rows): (Vec<&str>, Vec<Vec<String>>) = match args.target {
        LimitTarget::Simplified => {
            let rows = args
                .lambda_grid
                .iter()
                .map(|&l| {
                    let a = LaplaceArg::unbounded(l, args.epsilon).map_err(usage)?;
                    Ok(vec![
                        sig12(l),
                        sig12(args.epsilon),
                        sig12(simplified_limit_laplace(&a)),
                    ])
                })
                .collect::<Result<_, CliError>>()?;
            (vec!["lambda", "epsilon", "value"], rows)
        }
        LimitTarget::Full => {
            let rows = args
                .lambda_grid
                .iter()
                .map(|&l| {
                    let a = LaplaceArg::new(l, args.epsilon, args.mu).map_err(usage)?;
                    let v =
                        full_limit_laplace(&a).map_err(|e| CliError::Numerical(e.to_string()))?;
                    Ok(vec![
                        sig12(l),
                        sig12(args.epsilon),
                        sig12(args.mu),
                        sig12(v),
                    ])
                })
                .collect::<Result<_, CliError>>()?;
            (vec!["lambda", "epsilon", "mu", "value"], rows)
        }
        LimitTarget::H => {
            let rows = args
                .x_grid
                .iter()
                .map(|&x| {
                    let g = excursion_density_g(x).map_err(usage)?;
                    let h = h_at(x, args.mu).map_err(usage)?;
                    Ok(vec![sig12(x), sig12(args.mu), sig12(g), sig12(h)])
                })
                .collect::<Result<_, CliError>>()?;
            (vec!["x", "mu", "g", "h"], rows)
        }
        LimitTarget::Hyperbolic => {
            let rows = args
                .lambda_grid
                .iter()
                .map(|&s| {
                    let t = hyperbolic_coefficients(s, args.mu).map_err(usage)?;
                    Ok(vec![
                        sig12(s),
                        sig12(args.mu),
                        sig12(t.tanh_term),
                        sig12(t.coth_term),
                        sig12(t.csch_term),
                        sig12(t.sech_sq_term),
                        sig12(t.sech_sq_half_term),
                        sig12(t.identity_residual),
                    ])
                })
                .collect::<Result<_, CliError>>()?;
            (
                vec![
                    "s",
                    "mu",
                    "tanh_term",
                    "coth_term",
                    "csch_term",
                    "sech_sq_term",
                    "sech_sq_half_term",
                    "identity_residual",
                ],
                rows,
            )
        }
        LimitTarget::ConvergeT1 => {
            let s = args.lambda_grid[0];
            let study = convergence_study_t1(args.mu, s, &args.n_grid, StudyBudget::default())
                .map_err(usage)?;
            (REPORT_HEADER.to_vec(), report_rows(&study.report))
        }
        LimitTarget::ConvergeSimplified => {
            let l = args.lambda_grid[0];
            let study =
                convergence_study_simplified(args.epsilon, l, &args.n_grid).map_err(usage)?;
            (REPORT_HEADER.to_vec(), report_rows(&study.report))
        }
    };
    let mut out = OutputDir::prepare(&args.output, &["limit.csv"])?;
    out.write_csv("limit.csv", &head, rows.clone())?;
    let manifest = out.finish(ctx, config_json(args), json!({ "rows": rows.len() }))?;
    for r in &rows {
        println!("{}", r.join(","));
    }
    Ok(manifest)
}

/// Recorded arguments with any output flags removed.
fn strip_output_flags(argv: &[String]) -> Vec<String> {
    let mut kept = Vec::new();
    let mut skip_next = false;
    for a in argv {
        if skip_next {
            skip_next = false;
        } else if a == "--out" {
            skip_next = true;
        } else if a != "--force" && !a.starts_with("--out=") {
            kept.push(a.clone());
        }
    }
    kept
}

/// Re-executes a recorded run into a new directory and compares digests.
pub fn rerun(args: &RerunArgs) -> Result<(), CliError> {
    let old = RunManifest::load(&args.manifest)?;
    let mut argv = strip_output_flags(&old.command_line);
    if argv.first().map(String::as_str) == Some("rerun") {
        return Err(usage("the manifest records a rerun, not a computation"));
    }
    argv.push("--out".into());
    argv.push(args.output.out.display().to_string());
    if args.output.force {
        argv.push("--force".into());
    }
    let cli = Cli::try_parse_from(std::iter::once("lobav".to_string()).chain(argv.clone()))
        .map_err(|e| usage(format!("recorded command line no longer parses: {e}")))?;
    let ctx = RunContext::new(argv);
    let new = dispatch(&cli.command, &ctx)?
        .ok_or_else(|| usage("the recorded command wrote no manifest"))?;
    let mut mismatched = 0;
    for file in &old.outputs {
        let status = match new.outputs.iter().find(|f| f.path == file.path) {
            Some(f) if f.sha256 == file.sha256 => "identical",
            Some(_) => "differs",
            None => "missing",
        };
        if status != "identical" {
            mismatched += 1;
        }
        println!("{}: {status}", file.path);
    }
    if mismatched > 0 {
        return Err(CliError::Verification {
            failed: mismatched,
            total: old.outputs.len(),
        });
    }
    Ok(())
}

/// Runs one subcommand; returns the manifest when one was written.
pub fn dispatch(command: &Command, ctx: &RunContext) -> Result<Option<RunManifest>, CliError> {
    match command {
        Command::Simulate(a) => simulate(a, ctx).map(Some),
        Command::Exact(a) => exact(a, ctx).map(Some),
        Command::Verify(a) => verify(a, ctx),
        Command::Limit(a) => limit(a, ctx).map(Some),
        Command::Rerun(a) => rerun(a).map(|_| None),
    }
}
