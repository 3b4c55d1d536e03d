use std::f64::consts::PI;

use super::{Regime, Residual, ThresholdSolution};
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::profiles::{gain_from_kappa, mode_k, Mode, ModeFamily, UM_PER_CM};

/// Lower end of the η − 1 ≫ |κ| regime.
pub const GENERAL_REGIME_MIN_ETA: f64 = 1.01;

const KAPPA_FLOOR: f64 = 1e-16;
const KAPPA_REL_TOL: f64 = 1e-14;

fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
}

fn check_thickness(a_um: f64) -> Result<()> {
    if !(a_um > 0.0 && a_um.is_finite()) {
        return Err(Error::Domain(format!(
            "thickness must be positive, got {a_um}"
        )));
    }
    Ok(())
}

/// `(4/a) ln(4√2 π a/λ₀)` in cm⁻¹.
pub fn eta1_upper_bound(a_um: f64, lambda0_um: f64) -> f64 {
    4.0 / a_um * (4.0 * 2f64.sqrt() * PI * a_um / lambda0_um).ln() * UM_PER_CM
}

/// `(2/a) ln[8πη(η²+1)a / ((η²−1)λ₀)]` in cm⁻¹.
pub fn general_upper_bound(eta: f64, a_um: f64, lambda0_um: f64) -> f64 {
    let e2 = eta * eta;
    2.0 / a_um * (8.0 * PI * eta * (e2 + 1.0) * a_um / ((e2 - 1.0) * lambda0_um)).ln() * UM_PER_CM
}

/// Bilayer with η = 1: `K₀ = (2m+1)π` and `|κ₀|` from `cosh((2m+1)πκ) = 1/κ²`.
pub fn bilayer_threshold_eta1(m: u32, a_um: f64) -> Result<ThresholdSolution> {
    check_thickness(a_um)?;
    let k0 = mode_k(ModeFamily::Eta1, 1.0, m);
    // log form keeps cosh finite for large modes
    let condition = |kappa: f64| ln_cosh(k0 * kappa) + 2.0 * kappa.ln();
    let magnitude = bisect(condition, KAPPA_FLOOR, 1.0, KAPPA_REL_TOL)?;
    let mode = Mode::from_k(m, k0, a_um);
    let kappa0 = -magnitude;
    Ok(ThresholdSolution {
        mode,
        eta: 1.0,
        kappa0,
        g0_cm_inv: gain_from_kappa(kappa0, k0, a_um)?,
        regime: Regime::Eta1,
        residual: Residual::Scalar(condition(magnitude)),
        upper_bound_g0: Some(eta1_upper_bound(a_um, mode.lambda0_um)),
        thickness_um: a_um,
    })
}

/// Bilayer with η − 1 ≫ |κ|: `K₀ ≈ (2m+½)π/η` and `|κ₀|` from
/// `(m+¼)π|κ| + (η/2) ln|κ| = (η/2) ln(2η(η²+1)/(η²−1))`.
pub fn bilayer_threshold_general(eta: f64, m: u32, a_um: f64) -> Result<ThresholdSolution> {
    check_thickness(a_um)?;
    if !(eta >= GENERAL_REGIME_MIN_ETA) {
        return Err(Error::RegimeViolation { eta });
    }
    if eta >= 4.0 {
        return Err(Error::Domain(format!("eta must be below 4, got {eta}")));
    }
    let e2 = eta * eta;
    let target = 0.5 * eta * (2.0 * eta * (e2 + 1.0) / (e2 - 1.0)).ln();
    let slope = (m as f64 + 0.25) * PI;
    let condition = |kappa: f64| slope * kappa + 0.5 * eta * kappa.ln() - target;
    let magnitude = bisect(condition, KAPPA_FLOOR, 0.5, KAPPA_REL_TOL)?;
    let k0 = mode_k(ModeFamily::General, eta, m);
    let mode = Mode::from_k(m, k0, a_um);
    let kappa0 = -magnitude;
    Ok(ThresholdSolution {
        mode,
        eta,
        kappa0,
        g0_cm_inv: gain_from_kappa(kappa0, k0, a_um)?,
        regime: Regime::General,
        residual: Residual::Scalar(condition(magnitude)),
        upper_bound_g0: Some(general_upper_bound(eta, a_um, mode.lambda0_um)),
        thickness_um: a_um,
    })
}
