//! Continuum limits: error function, quadrature, excursion densities, limit
//! Laplace transforms, hyperbolic asymptotics and convergence studies.

pub mod convergence;
pub mod density;
pub mod hyperbolic;
pub mod quad;
pub mod special;
pub mod transforms;

pub use convergence::{
    band_series_at, convergence_study_simplified, convergence_study_t1, first_trade_at,
    simplified_pgf_at, ConvergenceError, ConvergenceReport, ConvergenceRow, FirstTradeAt,
    FirstTradeStudy, HyperbolicRow, SeriesValue, SimplifiedStudy, StudyBudget, SurvivalRow,
};
pub use density::{
    excursion_density_g, h_at, h_density, h_minus_g, LaplaceArg, LimitError, SeriesTail,
};
pub use hyperbolic::{band_gf_closed_form, hyperbolic_coefficients, HyperbolicTerms};
pub use quad::{integrate, integrate_sqrt_endpoint, integrate_to_infinity, QuadError, Quadrature};
pub use special::{erf, erfc};
pub use transforms::{
    full_limit_laplace, h_laplace_closed, h_laplace_integral, h_large_part, h_small_part,
    h_small_part_complement, h_tail_mass, psi, simplified_limit_laplace,
    simplified_limit_moments_fd,
};
