//! Spectral singularities of PT-symmetric bilayer slabs: lasing thresholds,
//! exact singular wavenumbers and first-order Kerr corrections.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod helmholtz;
pub mod linear_ss;
pub mod nonlinear_ss;
pub mod numeric;
pub mod ode;
pub mod profiles;

pub use error::{Error, Result};
pub use linear_ss::{Regime, Residual, ThresholdSolution};
pub use profiles::{BilayerIndex, KerrMedium, Mode, ModeFamily, ProfileDoc, SlabGeometry};
