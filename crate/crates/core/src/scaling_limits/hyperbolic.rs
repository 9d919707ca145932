//! Hyperbolic limits of the first-trade transforms.
//!
//! With `x = mu sqrt(2s)`, as `n -> inf` and the spread scaled like `sqrt(n)`:
//! `sqrt(n) (1 - A)` tends to `sqrt(2s) coth(x)`, `sqrt(n) (1 - E[z^T1])` to
//! `sqrt(2s) tanh(x)`, and the Type II part, scaled by `sqrt(n)`, to
//! `2 sqrt(2s) csch(2x)`. The three agree through `coth(x) - 2 csch(2x) = tanh(x)`.

use super::density::{LaplaceArg, LimitError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperbolicTerms {
    /// `sqrt(2s) tanh(mu sqrt(2s))`
    pub tanh_term: f64,
    /// `sqrt(2s) coth(mu sqrt(2s))`
    pub coth_term: f64,
    /// `2 sqrt(2s) csch(2 mu sqrt(2s))`
    pub csch_term: f64,
    /// `sech(2 mu sqrt(2s))^2`, the stated limit for the first Type II time.
    pub sech_sq_term: f64,
    /// `sech(mu sqrt(2s))^2`, the reading the discrete data support.
    pub sech_sq_half_term: f64,
    /// `|coth - 2 csch(2 .) - tanh|` at `mu sqrt(2s)`, scaled by `sqrt(2s)`.
    pub identity_residual: f64,
}

pub fn hyperbolic_coefficients(s: f64, mu: f64) -> Result<HyperbolicTerms, LimitError> {
    // Reuse the positivity checks of LaplaceArg; epsilon is not involved.
    let arg = LaplaceArg::new(s, 1.0, mu)?;
    let r = (2.0 * arg.lambda()).sqrt();
    let x = arg.mu() * r;
    let tanh_term = r * x.tanh();
    let coth_term = r / x.tanh();
    let csch_term = 2.0 * r / (2.0 * x).sinh();
    let sech2 = |y: f64| {
        let c = y.cosh();
        1.0 / (c * c)
    };
    Ok(HyperbolicTerms {
        tanh_term,
        coth_term,
        csch_term,
        sech_sq_term: sech2(2.0 * x),
        sech_sq_half_term: sech2(x),
        identity_residual: (coth_term - csch_term - tanh_term).abs(),
    })
}

/// `A_m(z) = sinh(m t) / sinh((m+1) t)` with `cosh t = 1/z`, `0 < z <= 1`:
/// the value at `z` of the generating function of class A for spread `m`.
pub fn band_gf_closed_form(m: u64, z: f64) -> f64 {
    assert!(z > 0.0 && z <= 1.0, "z must lie in (0, 1]");
    if m == 0 {
        return 0.0;
    }
    let t = (1.0 / z).acosh();
    if t == 0.0 {
        return m as f64 / (m as f64 + 1.0);
    }
    let m = m as f64;
    // e^-t (1 - e^(-2mt)) / (1 - e^(-2(m+1)t)), stable for large m t.
    (-t).exp() * (-2.0 * m * t).exp_m1() / (-2.0 * (m + 1.0) * t).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::class_a;

    #[test]
    fn identity_on_log_grid() {
        for mu in [0.25, 1.0, 4.0] {
            for i in 0..=60 {
                let s = 10f64.powf(-3.0 + 0.1 * f64::from(i));
                let t = hyperbolic_coefficients(s, mu).unwrap();
                assert!(t.identity_residual < 1e-12, "s {s} mu {mu}");
            }
        }
    }

    #[test]
    fn small_s_slope() {
        // tanh term = 2 mu s + O(s^2).
        let mu = 1.5;
        let h = 1e-6;
        let slope = (hyperbolic_coefficients(2.0 * h, mu).unwrap().tanh_term
            - hyperbolic_coefficients(h, mu).unwrap().tanh_term)
            / h;
        assert!((slope - 2.0 * mu).abs() < 1e-4);
    }

    #[test]
    fn wide_spread_limit() {
        let t = hyperbolic_coefficients(0.7, 1e3).unwrap();
        assert!((t.tanh_term - (1.4f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(hyperbolic_coefficients(0.0, 1.0).is_err());
        assert!(hyperbolic_coefficients(1.0, -1.0).is_err());
    }

    #[test]
    fn closed_form_matches_exact_series() {
        for m in 1..6u32 {
            for z in [0.3, 0.6, 0.9] {
                let exact = class_a(m, 400).eval_f64(z);
                assert!(
                    (band_gf_closed_form(u64::from(m), z) - exact).abs() < 1e-12,
                    "m {m} z {z}"
                );
            }
        }
        assert!((band_gf_closed_form(3, 1.0) - 0.75).abs() < 1e-15);
    }
}
