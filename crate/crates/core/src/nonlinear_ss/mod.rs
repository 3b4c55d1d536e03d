//! First-order Kerr perturbation theory around a linear spectral singularity.

mod coefficients;
mod emission;
mod first_order;
mod oracle;

pub use coefficients::{
    gradient_finite_difference, perturbation_coefficients, perturbation_coefficients_with,
    ModeCoefficients, PerturbationResult,
};
pub use emission::{
    emission, homogeneous_emission, slab_intensity_coefficient, EmissionCurve, WEAK_NONLINEARITY,
};
pub use first_order::{
    first_order_correction, first_order_correction_with, first_order_quadrature,
    FirstOrderSolution, QuadratureFirstOrder,
};
pub use oracle::{
    nonlinear_oracle, nonlinear_oracle_with, OracleEstimate, OracleOptions, OracleSample,
};
