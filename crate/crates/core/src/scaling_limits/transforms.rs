//! Laplace transforms of the scaled avalanche lengths.

use std::f64::consts::PI;

use super::density::{h_at, LaplaceArg};
use super::quad::{integrate_sqrt_endpoint, integrate_to_infinity, QuadError};
use super::special::erf;

/// Absolute tolerance used for every quadrature here.
pub const QUAD_TOL: f64 = 1e-11;

/// `psi(u) = sqrt(pi u) erf(sqrt u) + exp(-u)`, extended to `u < 0` through
/// its power series `exp(-u) + 2 sum_n (-1)^n u^(n+1) / (n! (2n+1))`.
pub fn psi(u: f64) -> f64 {
    if u > 1.0 {
        return (PI * u).sqrt() * erf(u.sqrt()) + (-u).exp();
    }
    let mut sum = 0.0;
    let mut power = u; // (-1)^n u^(n+1) / n!
    for n in 0..60 {
        let term = power / f64::from(2 * n + 1);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
        power *= -u / f64::from(n + 1);
    }
    (-u).exp() + 2.0 * sum
}

/// `E[exp(-lambda L)]` for the scaled simplified avalanche length:
/// `1 / (sqrt(lambda eps pi) erf(sqrt(lambda eps)) + exp(-lambda eps))`.
pub fn simplified_limit_laplace(arg: &LaplaceArg) -> f64 {
    1.0 / psi(arg.lambda() * arg.epsilon())
}

/// Mean and variance of the simplified limit from central differences of
/// its Laplace transform at `lambda = 0` with step `step`.
pub fn simplified_limit_moments_fd(epsilon: f64, step: f64) -> (f64, f64) {
    let l = |lambda: f64| 1.0 / psi(lambda * epsilon);
    let (lm, l0, lp) = (l(-step), l(0.0), l(step));
    let first = (lp - lm) / (2.0 * step);
    let second = (lp - 2.0 * l0 + lm) / (step * step);
    (-first, second - first * first)
}

fn h_or_g(x: f64, mu: f64) -> f64 {
    h_at(x, mu).expect("x and mu are positive here")
}

/// `int_0^eps (1 - exp(-lambda x)) h(x) dx`.
pub fn h_small_part(arg: &LaplaceArg) -> Result<f64, QuadError> {
    let (lambda, mu) = (arg.lambda(), arg.mu());
    integrate_sqrt_endpoint(
        |x| -(-lambda * x).exp_m1() * h_or_g(x, mu),
        arg.epsilon(),
        QUAD_TOL,
    )
    .map(|q| q.value)
}

/// `int_eps^inf h(x) dx`.
pub fn h_tail_mass(arg: &LaplaceArg) -> Result<f64, QuadError> {
    let mu = arg.mu();
    integrate_to_infinity(|x| h_or_g(x, mu), arg.epsilon(), QUAD_TOL).map(|q| q.value)
}

/// `int_eps^inf (1 - exp(-lambda x)) h(x) dx`.
pub fn h_large_part(arg: &LaplaceArg) -> Result<f64, QuadError> {
    let (lambda, mu) = (arg.lambda(), arg.mu());
    integrate_to_infinity(
        |x| -(-lambda * x).exp_m1() * h_or_g(x, mu),
        arg.epsilon(),
        QUAD_TOL,
    )
    .map(|q| q.value)
}

/// `int_0^inf (1 - exp(-lambda x)) h(x) dx` by quadrature, split at `eps`.
pub fn h_laplace_integral(arg: &LaplaceArg) -> Result<f64, QuadError> {
    Ok(h_small_part(arg)? + h_large_part(arg)?)
}

/// Closed form of [`h_laplace_integral`]: `sqrt(2 lambda) tanh(mu sqrt(2 lambda))`.
pub fn h_laplace_closed(lambda: f64, mu: f64) -> f64 {
    let r = (2.0 * lambda).sqrt();
    if mu.is_infinite() {
        r
    } else {
        r * (mu * r).tanh()
    }
}

/// `E[exp(-lambda L*)]` for the scaled full avalanche length:
/// `int_eps^inf h / (int_0^eps (1 - exp(-lambda x)) h + int_eps^inf h)`.
pub fn full_limit_laplace(arg: &LaplaceArg) -> Result<f64, QuadError> {
    let tail = h_tail_mass(arg)?;
    Ok(tail / (h_small_part(arg)? + tail))
}

/// The small part assembled the other way: closed transform minus the
/// quadrature over `[eps, inf)`.
pub fn h_small_part_complement(arg: &LaplaceArg) -> Result<f64, QuadError> {
    Ok(h_laplace_closed(arg.lambda(), arg.mu()) - h_large_part(arg)?)
}
