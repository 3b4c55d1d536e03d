use thiserror::Error;

/// Errors raised by the solvers and the profile layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("eta0 = {eta} is below 1.01; use the eta = 1 threshold or the exact solver")]
    RegimeViolation { eta: f64 },

    #[error("bisection bracket [{lo:e}, {hi:e}] does not change sign")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian at K = {k}, kappa = {kappa:e}")]
    DegenerateRoot { k: f64, kappa: f64 },

    #[error("divergent amplitudes: |G+| = {g_plus:e}, |F-| = {f_minus:e}")]
    DivergentAmplitudes { g_plus: f64, f_minus: f64 },

    #[error("integration produced a non-finite value at x = {x}")]
    IntegrationFailure { x: f64 },

    #[error("degenerate spectral singularity: Im(a b*) = {im_ab:e}")]
    DegenerateSingularity { im_ab: f64 },

    #[error("sigma = 0: the linear theory gives no intensity scale")]
    ZeroKerr,

    #[error("gamma too large: quadratic term {quadratic:e} dominates slope {slope:e}")]
    GammaTooLarge { slope: f64, quadratic: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of an iterative solver, as opposed to bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::BracketFailure { .. }
                | Error::NoConvergence { .. }
                | Error::DegenerateRoot { .. }
                | Error::IntegrationFailure { .. }
                | Error::DegenerateSingularity { .. }
                | Error::GammaTooLarge { .. }
        )
    }
}
