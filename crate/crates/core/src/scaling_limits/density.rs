//! Excursion densities: `g` for unrestricted excursions and `h` for
//! excursions that trade before reaching depth `mu`.
//!
//! `h(x) = g(x) + 2 sum_{k>=1} (-1)^k [g(x) - 2 sqrt(2/pi) k^2 mu^2 x^(-5/2)] exp(-2 k^2 mu^2 / x)`.
//! Summing the images costs little for small `x`; for large `x` they cancel,
//! and the equivalent eigenfunction expansion
//! `h(x) = (2/mu) sum_{k>=0} a_k exp(-a_k x)`, `a_k = (2k+1)^2 pi^2 / (8 mu^2)`,
//! converges fast instead.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimitError {
    #[error("{name} must be a positive number, got {value}")]
    NotPositive { name: &'static str, value: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, LimitError> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(LimitError::NotPositive { name, value })
    }
}

/// Continuum parameters of a Laplace transform evaluation: `lambda` (1/time),
/// window `epsilon` (time) and spread `mu` (space). `mu` may be infinite,
/// which stands for the limit without a barrier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceArg {
    lambda: f64,
    epsilon: f64,
    mu: f64,
}

impl LaplaceArg {
    pub fn new(lambda: f64, epsilon: f64, mu: f64) -> Result<Self, LimitError> {
        Ok(Self {
            lambda: positive("lambda", lambda)?,
            epsilon: positive("epsilon", epsilon)?,
            mu: positive("mu", mu)?,
        })
    }

    /// No barrier: `mu = inf`.
    pub fn unbounded(lambda: f64, epsilon: f64) -> Result<Self, LimitError> {
        Self::new(lambda, epsilon, f64::INFINITY)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self, LimitError> {
        Self::new(lambda, self.epsilon, self.mu)
    }
}

/// Truncation of the series for `h`: terms are summed up to `k_max`, and the
/// first omitted term must be below `abs_tol` relative to `g(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesTail {
    pub k_max: u32,
    pub abs_tol: f64,
}

impl SeriesTail {
    pub const DEFAULT_TOL: f64 = 1e-16;

    /// Smallest `k_max` whose first omitted factor is below `abs_tol` at `x`.
    pub fn for_point(x: f64, mu: f64, abs_tol: f64) -> Self {
        let k_max = if use_images(x, mu) {
            // exp(-2 k^2 mu^2 / x) < tol
            ((x * -abs_tol.ln() / (2.0 * mu * mu)).sqrt()).ceil() as u32
        } else {
            // exp(-a_k x) < tol, ignoring the polynomial prefactor.
            let a0 = PI * PI / (8.0 * mu * mu);
            let ratio = (-abs_tol.ln() + 2.0 * (1.0 + a0 * x).ln()) / (a0 * x);
            ((ratio.sqrt() - 1.0) / 2.0).ceil().max(0.0) as u32
        };
        Self {
            k_max: k_max.max(1) + 1,
            abs_tol,
        }
    }
}

/// Switch point between the two representations of `h`.
fn use_images(x: f64, mu: f64) -> bool {
    x <= 4.0 * mu * mu / PI
}

/// `g(x) = x^(-3/2) / sqrt(2 pi)`.
pub fn excursion_density_g(x: f64) -> Result<f64, LimitError> {
    let x = positive("x", x)?;
    Ok(g_unchecked(x))
}

fn g_unchecked(x: f64) -> f64 {
    x.powf(-1.5) / (2.0 * PI).sqrt()
}

/// `h(x) - g(x)`, the image correction. Computed directly so that it stays
/// meaningful far below the resolution of `g`.
pub fn h_minus_g(x: f64, mu: f64, tail: SeriesTail) -> Result<f64, LimitError> {
    let x = positive("x", x)?;
    let mu = positive("mu", mu)?;
    if mu.is_infinite() {
        return Ok(0.0);
    }
    if use_images(x, mu) {
        let g = g_unchecked(x);
        let c = 2.0 * (2.0 / PI).sqrt() * mu * mu * x.powf(-2.5);
        let mut sum = 0.0;
        for k in 1..=tail.k_max {
            let k2 = f64::from(k).powi(2);
            let term = 2.0 * (g - c * k2) * (-2.0 * k2 * mu * mu / x).exp();
            sum += if k % 2 == 1 { -term } else { term };
        }
        Ok(sum)
    } else {
        Ok(spectral_h(x, mu, tail.k_max) - g_unchecked(x))
    }
}

fn spectral_h(x: f64, mu: f64, k_max: u32) -> f64 {
    (0..=k_max)
        .map(|k| {
            let a = (f64::from(2 * k + 1) * PI).powi(2) / (8.0 * mu * mu);
            2.0 / mu * a * (-a * x).exp()
        })
        .sum()
}

pub fn h_density(x: f64, mu: f64, tail: SeriesTail) -> Result<f64, LimitError> {
    let x = positive("x", x)?;
    let mu = positive("mu", mu)?;
    if mu.is_infinite() {
        return Ok(g_unchecked(x));
    }
    if use_images(x, mu) {
        Ok(g_unchecked(x) + h_minus_g(x, mu, tail)?)
    } else {
        Ok(spectral_h(x, mu, tail.k_max))
    }
}

/// `h(x)` with the default truncation for that point.
pub fn h_at(x: f64, mu: f64) -> Result<f64, LimitError> {
    h_density(x, mu, SeriesTail::for_point(x, mu, SeriesTail::DEFAULT_TOL))
}
