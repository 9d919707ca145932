//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not reach {requested:e}: error estimate {achieved:e} after {intervals} intervals")]
    NotConverged {
        value: f64,
        achieved: f64,
        requested: f64,
        intervals: usize,
    },
    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

const MAX_INTERVALS: usize = 4000;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the odd-indexed Kronrod nodes and the centre.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Result<Piece, QuadError> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite { at: x })
        }
    };
    let fc = eval(centre)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let pair = eval(centre - dx)? + eval(centre + dx)?;
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Ok(Piece {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// `int_a^b f` to absolute tolerance `abs_tol`, bisecting the interval with
/// the largest error estimate until the summed estimate is below tolerance.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<Quadrature, QuadError> {
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut pieces = vec![gk15(&f, a, b)?];
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        if error <= abs_tol {
            return Ok(Quadrature { value, error });
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(QuadError::NotConverged {
                value,
                achieved: error,
                requested: abs_tol,
                intervals: pieces.len(),
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one interval");
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Interval cannot be split further in double precision.
            return Err(QuadError::NotConverged {
                value,
                achieved: error,
                requested: abs_tol,
                intervals: pieces.len() + 1,
            });
        }
        pieces.push(gk15(&f, p.a, mid)?);
        pieces.push(gk15(&f, mid, p.b)?);
    }
}

/// `int_0^b f` for an integrand with an `x^(-1/2)`-type endpoint at 0, via
/// `x = u^2`, which makes the transformed integrand bounded.
pub fn integrate_sqrt_endpoint(
    f: impl Fn(f64) -> f64,
    b: f64,
    abs_tol: f64,
) -> Result<Quadrature, QuadError> {
    integrate(
        |u| if u == 0.0 { 0.0 } else { 2.0 * u * f(u * u) },
        0.0,
        b.sqrt(),
        abs_tol,
    )
}

/// `int_a^inf f` for `a > 0`, via `x = a / v^2`, which maps an `x^(-3/2)`
/// tail to a constant on `(0, 1]`.
pub fn integrate_to_infinity(
    f: impl Fn(f64) -> f64,
    a: f64,
    abs_tol: f64,
) -> Result<Quadrature, QuadError> {
    assert!(a > 0.0, "lower limit must be positive");
    integrate(
        |v| {
            if v == 0.0 {
                return 0.0;
            }
            let x = a / (v * v);
            let y = f(x) * 2.0 * a / (v * v * v);
            if y.is_finite() {
                y
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
    )
}
