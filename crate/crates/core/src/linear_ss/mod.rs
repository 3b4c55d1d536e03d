//! Linear spectral singularities: lasing thresholds of the PT bilayer and of
//! the homogeneous reference slab.

mod asymptotic;
mod exact;
mod homogeneous;
mod sweep;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::profiles::{BilayerIndex, Mode};

pub use asymptotic::{
    bilayer_threshold_eta1, bilayer_threshold_general, eta1_upper_bound, general_upper_bound,
    GENERAL_REGIME_MIN_ETA,
};
pub use exact::{bilayer_ss_exact, exact_residuals, ExactOptions};
pub use homogeneous::{
    homogeneous_threshold, homogeneous_threshold_eta1, homogeneous_threshold_self_consistent,
    homogeneous_threshold_weak,
};
pub use sweep::{
    bilayer_threshold, sweep, SlabKind, SweepAxis, SweepCurve, SweepParams, SweepPoint,
};

/// How a threshold was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Bilayer with η = 1, asymptotic threshold condition.
    Eta1,
    /// Bilayer with η − 1 ≫ |κ|, asymptotic threshold condition.
    General,
    /// Bilayer, full two-equation root.
    Exact,
    /// Homogeneous gain slab.
    Homogeneous,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Eta1 => "eta1",
            Regime::General => "general",
            Regime::Exact => "exact",
            Regime::Homogeneous => "homogeneous",
        }
    }
}

/// Residual attached to a threshold solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Residual {
    /// `|U|` and `|V|` of the closed-form `G₊`.
    Uv { u: f64, v: f64 },
    /// Residual of a one-dimensional threshold condition.
    Scalar(f64),
}

impl Residual {
    pub fn max(&self) -> f64 {
        match *self {
            Residual::Uv { u, v } => u.abs().max(v.abs()),
            Residual::Scalar(r) => r.abs(),
        }
    }
}

/// A lasing threshold at one mode.
///
/// `kappa0` follows the gain-first convention (κ₀ < 0 puts the gain in the
/// layer `0 < x < 1/2`); `(K₀, −κ₀)` is the self-dual partner, see
/// [`ThresholdSolution::partner`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSolution {
    pub mode: Mode,
    pub eta: f64,
    pub kappa0: f64,
    pub g0_cm_inv: f64,
    pub regime: Regime,
    pub residual: Residual,
    pub upper_bound_g0: Option<f64>,
    /// Thickness the scaled wavenumber refers to (a for the bilayer, L for
    /// the homogeneous slab).
    pub thickness_um: f64,
}

impl ThresholdSolution {
    pub fn index(&self) -> Result<BilayerIndex> {
        BilayerIndex::new(self.eta, self.kappa0)
    }

    pub fn k0(&self) -> f64 {
        self.mode.k0
    }

    pub fn alpha(&self) -> f64 {
        self.kappa0 / self.eta
    }

    pub fn beta(&self) -> f64 {
        let n2 = self.eta * self.eta + self.kappa0 * self.kappa0;
        (n2 - 1.0) / (n2 + 1.0)
    }

    /// The mirrored solution `(K₀, −κ₀)`.
    pub fn partner(&self) -> Self {
        Self {
            kappa0: -self.kappa0,
            ..*self
        }
    }
}
