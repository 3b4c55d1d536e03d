//! Threshold of a homogeneous gain slab of thickness `L`.

use std::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;

use super::{Regime, Residual, ThresholdSolution, GENERAL_REGIME_MIN_ETA};
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::profiles::{kappa_from_gain, Mode, UM_PER_CM};

fn check(eta0: f64, l_um: f64, lambda_um: f64) -> Result<()> {
    if !(eta0 >= 1.0 && eta0.is_finite()) {
        return Err(Error::Domain(format!(
            "eta0 must be at least 1, got {eta0}"
        )));
    }
    if !(l_um > 0.0 && l_um.is_finite()) {
        return Err(Error::Domain(format!(
            "slab thickness must be positive, got {l_um}"
        )));
    }
    if !(lambda_um > 0.0 && lambda_um.is_finite()) {
        return Err(Error::NoSolution(format!(
            "no lasing wavelength at lambda = {lambda_um}"
        )));
    }
    Ok(())
}

/// `|(𝔫+1)/(𝔫−1)|` with `𝔫 = η + iκ`.
fn mirror_ratio(eta: f64, kappa: f64) -> f64 {
    let n = Complex64::new(eta, kappa);
    ((n + 1.0) / (n - 1.0)).norm()
}

fn build(
    eta0: f64,
    l_um: f64,
    lambda_um: f64,
    g_um_inv: f64,
    residual: f64,
) -> Result<ThresholdSolution> {
    let k = TAU * l_um / lambda_um;
    let kappa0 = kappa_from_gain(g_um_inv * UM_PER_CM, k, l_um)?;
    let n = Complex64::new(eta0, kappa0);
    let phase = ((n + 1.0) / (n - 1.0)).arg();
    let m = ((eta0 * k - phase) / TAU).round().max(0.0) as u32;
    Ok(ThresholdSolution {
        mode: Mode {
            m,
            k0: k,
            lambda0_um: lambda_um,
        },
        eta: eta0,
        kappa0,
        g0_cm_inv: g_um_inv * UM_PER_CM,
        regime: Regime::Homogeneous,
        residual: Residual::Scalar(residual),
        upper_bound_g0: None,
        thickness_um: l_um,
    })
}

/// Weak-gain form `g₀ ≈ (2/L) ln((η₀+1)/(η₀−1))`.
pub fn homogeneous_threshold_weak(
    eta0: f64,
    l_um: f64,
    lambda_um: f64,
) -> Result<ThresholdSolution> {
    check(eta0, l_um, lambda_um)?;
    if eta0 <= 1.0 {
        return Err(Error::Domain("the weak-gain form needs eta0 > 1".into()));
    }
    let g = 2.0 / l_um * ((eta0 + 1.0) / (eta0 - 1.0)).ln();
    build(eta0, l_um, lambda_um, g, 0.0)
}

/// η₀ = 1: `g₀ + (4/a) ln(a g₀) = (4/a) ln(8πa/λ₀)` with `a = 2L`.
pub fn homogeneous_threshold_eta1(l_um: f64, lambda_um: f64) -> Result<ThresholdSolution> {
    check(1.0, l_um, lambda_um)?;
    let a = 2.0 * l_um;
    let rhs = 4.0 / a * (8.0 * PI * a / lambda_um).ln();
    let condition = |g: f64| g + 4.0 / a * (a * g).ln() - rhs;
    let hi = (2.0 * rhs.abs()).max(2.0 / a);
    let g = bisect(condition, 1e-300, hi, 1e-15)
        .map_err(|_| Error::NoSolution(format!("no eta0 = 1 threshold at lambda = {lambda_um}")))?;
    build(1.0, l_um, lambda_um, g, condition(g))
}

/// Solves `g₀ = (2/L) ln|(𝔫₀+1)/(𝔫₀−1)|` with `κ₀ = −g₀λ₀/4π` self-consistently.
pub fn homogeneous_threshold_self_consistent(
    eta0: f64,
    l_um: f64,
    lambda_um: f64,
) -> Result<ThresholdSolution> {
    check(eta0, l_um, lambda_um)?;
    let kappa_of = |g: f64| -g * lambda_um / (2.0 * TAU);
    let condition = |g: f64| g - 2.0 / l_um * mirror_ratio(eta0, kappa_of(g)).ln();
    // the right side decreases in g, so the root sits below its g → 0 value
    let hi = if eta0 > 1.0 {
        2.0 / l_um * ((eta0 + 1.0) / (eta0 - 1.0)).ln() * 1.5 + 1.0 / l_um
    } else {
        2.0 / l_um * ((8.0 * PI * l_um / lambda_um).ln().abs() + LN_2 + 2.0) + 1.0 / l_um
    };
    // a tiny |κ| keeps |𝔫₀−1|² from underflowing at η₀ = 1
    let g = bisect(condition, 1e-9 / l_um, hi, 1e-15).map_err(|_| {
        Error::NoSolution(format!(
            "no threshold at eta0 = {eta0}, lambda = {lambda_um}"
        ))
    })?;
    build(eta0, l_um, lambda_um, g, condition(g))
}

/// Homogeneous threshold, dispatching on η₀: the η₀ = 1 form at η₀ = 1, the
/// weak-gain form for η₀ ≥ 1.01, the self-consistent equation in between.
pub fn homogeneous_threshold(eta0: f64, l_um: f64, lambda_um: f64) -> Result<ThresholdSolution> {
    if eta0 == 1.0 {
        homogeneous_threshold_eta1(l_um, lambda_um)
    } else if eta0 >= GENERAL_REGIME_MIN_ETA {
        homogeneous_threshold_weak(eta0, l_um, lambda_um)
    } else {
        homogeneous_threshold_self_consistent(eta0, l_um, lambda_um)
    }
}
