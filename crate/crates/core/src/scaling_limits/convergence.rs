//! Discrete-to-continuum convergence studies.
//!
//! The discrete transforms are evaluated in double precision at
//! `z = exp(-s/n)`. Class A values come from the band dynamic program, summed
//! until the certified tail `z^(N+1) * (mass still inside the band)` is below
//! tolerance. The simplified avalanche transform is a finite polynomial.

use rayon::prelude::*;
use thiserror::Error;

use super::density::{LaplaceArg, LimitError};
use super::hyperbolic::hyperbolic_coefficients;
use super::transforms::simplified_limit_laplace;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvergenceError {
    #[error(transparent)]
    Parameter(#[from] LimitError),
    #[error("n = {n} gives a discrete spread of 0; need floor(mu sqrt(n)) >= 1")]
    SpreadTooSmall { n: u64 },
    #[error("n = {n} gives an empty window; need floor(n epsilon) >= 1")]
    WindowTooSmall { n: u64 },
    #[error("tail below {tol:e} needs about {required} terms, above the limit of {max_terms}")]
    TailNotCertified {
        tol: f64,
        required: u64,
        max_terms: u64,
    },
    #[error("need at least two grid points to fit an order, got {0}")]
    GridTooShort(usize),
}

/// Truncation budget for the series evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudyBudget {
    pub tail_tol: f64,
    pub max_terms: u64,
}

impl Default for StudyBudget {
    fn default() -> Self {
        Self {
            tail_tol: 1e-13,
            max_terms: 50_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// `A_m(z)` summed from the band dynamic program: paths with levels in
/// `[1 - m, 0]` that step up from 0.
pub fn band_series_at(
    m: u64,
    z: f64,
    budget: StudyBudget,
) -> Result<SeriesValue, ConvergenceError> {
    assert!(z > 0.0 && z < 1.0, "z must lie in (0, 1)");
    if m == 0 {
        return Ok(SeriesValue {
            value: 0.0,
            tail_bound: 0.0,
            terms: 0,
        });
    }
    // Worst case (no mass leaves the band): z^N < tol.
    let required = (budget.tail_tol.ln() / z.ln()).ceil() as u64;
    if required > budget.max_terms {
        return Err(ConvergenceError::TailNotCertified {
            tol: budget.tail_tol,
            required,
            max_terms: budget.max_terms,
        });
    }
    let width = m as usize;
    // Index i holds level -i.
    let mut mass = vec![0.0f64; width];
    let mut next = vec![0.0f64; width];
    mass[0] = 1.0;
    let mut value = 0.0;
    let mut zn = 1.0;
    let mut terms = 0;
    loop {
        terms += 1;
        zn *= z;
        value += 0.5 * mass[0] * zn;
        next.fill(0.0);
        for i in 0..width {
            let p = 0.5 * mass[i];
            if i + 1 < width {
                next[i + 1] += p;
            }
            if i > 0 {
                next[i - 1] += p;
            }
        }
        std::mem::swap(&mut mass, &mut next);
        let inside: f64 = mass.iter().sum();
        let tail_bound = zn * z * inside;
        if tail_bound < budget.tail_tol || terms >= required {
            return Ok(SeriesValue {
                value,
                tail_bound,
                terms,
            });
        }
    }
}

/// First-trade transforms of a full book with spread `m` at `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FirstTradeAt {
    /// `E[z^T1]`
    pub total: f64,
    /// `A`: first trade after 0 is Type I.
    pub type1: f64,
    /// `B C / (1 - B)`: first trade after 0 is Type II.
    pub type2: f64,
    /// `E[z^tau_D] = X / (1 - A)`, time of the first Type II trade.
    pub first_type2_time: f64,
}

pub fn first_trade_at(
    m: u64,
    z: f64,
    budget: StudyBudget,
) -> Result<FirstTradeAt, ConvergenceError> {
    let a = band_series_at(m, z, budget)?.value;
    let below = band_series_at(m - 1, z, budget)?.value;
    let type2 = a / (1.0 - a) * (a - below);
    Ok(FirstTradeAt {
        total: a + type2,
        type1: a,
        type2,
        first_type2_time: type2 / (1.0 - a),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub discrete_value: f64,
    pub limit_value: f64,
    pub scaled_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Minus the least-squares slope of `ln error` against `ln n`.
    pub fitted_order: f64,
}

impl ConvergenceReport {
    fn new(rows: Vec<ConvergenceRow>) -> Result<Self, ConvergenceError> {
        if rows.len() < 2 {
            return Err(ConvergenceError::GridTooShort(rows.len()));
        }
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| ((r.n as f64).ln(), r.scaled_error.ln()))
            .collect();
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Ok(Self {
            rows,
            fitted_order: -sxy / sxx,
        })
    }

    /// `e(n_i) / e(n_{i+1})` for consecutive grid points.
    pub fn error_ratios(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| w[0].scaled_error / w[1].scaled_error)
            .collect()
    }

    pub fn errors_shrink(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].scaled_error < w[0].scaled_error)
    }
}

/// Discrete counterparts of the hyperbolic limits at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperbolicRow {
    pub n: u64,
    pub discrete_spread: u64,
    /// `sqrt(n) (1 - A)` against the coth term.
    pub coth_discrete: f64,
    pub coth_limit: f64,
    /// `sqrt(n) X` against the csch term.
    pub csch_discrete: f64,
    pub csch_limit: f64,
    /// `E[exp(-s tau_D / n)]` against both sech^2 readings.
    pub first_type2_discrete: f64,
    pub sech_sq_printed: f64,
    pub sech_sq_half: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstTradeStudy {
    /// `r_n = sqrt(n) (1 - E[exp(-s T1 / n)])` against `sqrt(2s) tanh(mu sqrt(2s))`.
    pub report: ConvergenceReport,
    pub hyperbolic: Vec<HyperbolicRow>,
}

impl FirstTradeStudy {
    /// Mean distance of the discrete first Type II transform to the printed
    /// `sech^2` reading and to the `sech^2(mu sqrt(2s))` reading.
    pub fn sech_reading_errors(&self) -> (f64, f64) {
        let k = self.hyperbolic.len() as f64;
        let printed = self
            .hyperbolic
            .iter()
            .map(|h| (h.first_type2_discrete - h.sech_sq_printed).abs())
            .sum::<f64>();
        let half = self
            .hyperbolic
            .iter()
            .map(|h| (h.first_type2_discrete - h.sech_sq_half).abs())
            .sum::<f64>();
        (printed / k, half / k)
    }
}

pub fn convergence_study_t1(
    mu: f64,
    s: f64,
    n_grid: &[u64],
    budget: StudyBudget,
) -> Result<FirstTradeStudy, ConvergenceError> {
    let limits = hyperbolic_coefficients(s, mu)?;
    let points: Vec<(ConvergenceRow, HyperbolicRow)> = n_grid
        .par_iter()
        .map(|&n| {
            let root = (n as f64).sqrt();
            let m = (mu * root).floor() as u64;
            if m == 0 {
                return Err(ConvergenceError::SpreadTooSmall { n });
            }
            let at = first_trade_at(m, (-s / n as f64).exp(), budget)?;
            let r = root * (1.0 - at.total);
            Ok((
                ConvergenceRow {
                    n,
                    discrete_value: r,
                    limit_value: limits.tanh_term,
                    scaled_error: (r - limits.tanh_term).abs(),
                },
                HyperbolicRow {
                    n,
                    discrete_spread: m,
                    coth_discrete: root * (1.0 - at.type1),
                    coth_limit: limits.coth_term,
                    csch_discrete: root * at.type2,
                    csch_limit: limits.csch_term,
                    first_type2_discrete: at.first_type2_time,
                    sech_sq_printed: limits.sech_sq_term,
                    sech_sq_half: limits.sech_sq_half_term,
                },
            ))
        })
        .collect::<Result<_, _>>()?;
    let (rows, hyperbolic) = points.into_iter().unzip();
    Ok(FirstTradeStudy {
        report: ConvergenceReport::new(rows)?,
        hyperbolic,
    })
}

/// Ladder-gap law in double precision: `(phi_k for odd k <= eps', P[R > eps])`.
fn ladder_law(eps: u64) -> (Vec<(u64, f64)>, f64) {
    let top = 2 * ((eps - 1) / 2) + 1;
    let mut phi = Vec::with_capacity((top as usize).div_ceil(2));
    let mut p = 0.5;
    let mut j = 0u64;
    while 2 * j < top {
        phi.push((2 * j + 1, p));
        p *= (2 * j + 1) as f64 / (2 * (j + 2)) as f64;
        j += 1;
    }
    let survival = 1.0 - phi.iter().map(|(_, f)| f).sum::<f64>();
    (phi, survival)
}

/// `E[z^L]` of the simplified avalanche for window `eps` in double precision.
pub fn simplified_pgf_at(eps: u64, z: f64) -> f64 {
    let (phi, survival) = ladder_law(eps);
    let inside: f64 = phi.iter().map(|&(k, f)| f * z.powf(k as f64)).sum();
    survival / (1.0 - inside)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurvivalRow {
    pub n: u64,
    /// `sqrt(n) P[R > n eps]`
    pub scaled_survival: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplifiedStudy {
    pub report: ConvergenceReport,
    pub survival: Vec<SurvivalRow>,
    /// `int_eps^inf g = sqrt(2 / (pi eps))`
    pub survival_limit: f64,
}

pub fn convergence_study_simplified(
    epsilon: f64,
    lambda: f64,
    n_grid: &[u64],
) -> Result<SimplifiedStudy, ConvergenceError> {
    let arg = LaplaceArg::unbounded(lambda, epsilon)?;
    let limit = simplified_limit_laplace(&arg);
    let points: Vec<(ConvergenceRow, SurvivalRow)> = n_grid
        .par_iter()
        .map(|&n| {
            let eps = (n as f64 * epsilon).floor() as u64;
            if eps == 0 {
                return Err(ConvergenceError::WindowTooSmall { n });
            }
            let v = simplified_pgf_at(eps, (-lambda / n as f64).exp());
            Ok((
                ConvergenceRow {
                    n,
                    discrete_value: v,
                    limit_value: limit,
                    scaled_error: (v - limit).abs(),
                },
                SurvivalRow {
                    n,
                    scaled_survival: (n as f64).sqrt() * ladder_law(eps).1,
                },
            ))
        })
        .collect::<Result<_, _>>()?;
    let (rows, survival) = points.into_iter().unzip();
    Ok(SimplifiedStudy {
        report: ConvergenceReport::new(rows)?,
        survival,
        survival_limit: (2.0 / (std::f64::consts::PI * epsilon)).sqrt(),
    })
}
