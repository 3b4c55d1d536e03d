//! The linearized singularity condition `𝔞K₁ + 𝔟κ₁ = |N₊|²𝔠` and the
//! intensity and wavelength-shift coefficients built from it.

use num_complex::Complex64;
use serde::Serialize;

use super::first_order::first_order_correction_with;
use crate::error::{Error, Result};
use crate::helmholtz::{gplus_gradient, gplus_linear};
use crate::linear_ss::{Regime, ThresholdSolution};
use crate::numeric::solve2;
use crate::profiles::BilayerIndex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationResult {
    /// `𝔞 = ∂(G₊⁽⁰⁾/N₊)/∂K`.
    pub a_coef: Complex64,
    /// `𝔟 = ∂(G₊⁽⁰⁾/N₊)/∂κ`.
    pub b_coef: Complex64,
    /// `𝔠 = −G₊⁽¹⁾/(N₊|N₊|²)`.
    pub c_coef: Complex64,
    /// K₁ per unit `|N₊|²`.
    pub k1_per_n2: f64,
    /// κ₁ per unit `|N₊|²`.
    pub kappa1_per_n2: f64,
    /// Output intensity coefficient 𝒜 in `I = 𝒜(g−g₀)/(σg₀)`.
    pub intensity_coef: f64,
    /// Wavelength shift coefficient ℬ in `δλ = −ℬ(g−g₀)λ₀/g₀`.
    pub shift_coef: f64,
}

fn im_cross(x: Complex64, y: Complex64) -> f64 {
    (x * y.conj()).im
}

impl PerturbationResult {
    /// `|𝔞K₁ + 𝔟κ₁ − 𝔠|` for `|N₊| = 1`.
    pub fn linear_residual(&self) -> f64 {
        (self.a_coef * self.k1_per_n2 + self.b_coef * self.kappa1_per_n2 - self.c_coef).norm()
    }
}

/// Export record for intensity plots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCoefficients {
    pub m: u32,
    #[serde(rename = "K0")]
    pub k0: f64,
    pub kappa0: f64,
    pub g0_cm_inv: f64,
    #[serde(rename = "A_coef")]
    pub a_coef: f64,
    #[serde(rename = "B_coef")]
    pub b_coef: f64,
}

impl ModeCoefficients {
    pub fn new(ss: &ThresholdSolution, pr: &PerturbationResult) -> Self {
        Self {
            m: ss.mode.m,
            k0: ss.k0(),
            kappa0: ss.kappa0,
            g0_cm_inv: ss.g0_cm_inv,
            a_coef: pr.intensity_coef,
            b_coef: pr.shift_coef,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain numeric record")
    }
}

/// Central finite differences of `G₊⁽⁰⁾/N₊` with steps of `1e−6` in the
/// phases `ηK` and `κK`.
pub fn gradient_finite_difference(index: BilayerIndex, k: f64) -> Result<(Complex64, Complex64)> {
    let g = |kk: f64, kappa: f64| -> Result<Complex64> {
        Ok(gplus_linear(
            BilayerIndex {
                eta: index.eta,
                kappa,
            },
            kk,
        )?
        .per_n_plus)
    };
    let hk = 1e-6 / index.eta;
    let hq = 1e-6 / k;
    let dk = (g(k + hk, index.kappa)? - g(k - hk, index.kappa)?) / (2.0 * hk);
    let dq = (g(k, index.kappa + hq)? - g(k, index.kappa - hq)?) / (2.0 * hq);
    Ok((dk, dq))
}

/// Coefficients at an exact threshold, with `N₊ = 1`.
pub fn perturbation_coefficients(ss: &ThresholdSolution) -> Result<PerturbationResult> {
    perturbation_coefficients_with(ss, Complex64::new(1.0, 0.0))
}

/// Same, building ζ⁽¹⁾ for the amplitude `n_plus`. The result does not depend
/// on `n_plus` beyond rounding.
pub fn perturbation_coefficients_with(
    ss: &ThresholdSolution,
    n_plus: Complex64,
) -> Result<PerturbationResult> {
    if ss.regime != Regime::Exact {
        return Err(Error::Domain(format!(
            "perturbation coefficients need an exact threshold, got regime {}",
            ss.regime.as_str()
        )));
    }
    if n_plus.norm() == 0.0 {
        return Err(Error::Domain("N+ must be nonzero".into()));
    }
    let index = ss.index()?;
    let k0 = ss.k0();
    let (a, b) = gplus_gradient(index, k0);
    let first = first_order_correction_with(index, k0, n_plus)?;
    let c = -first.g_plus() / (n_plus * n_plus.norm_sqr());

    let im_ab = im_cross(a, b);
    if !(im_ab.abs() > 1e-12 * a.norm() * b.norm()) {
        return Err(Error::DegenerateSingularity { im_ab });
    }
    let [k1, kappa1] = solve2([[a.re, b.re], [a.im, b.im]], [c.re, c.im])
        .ok_or(Error::DegenerateSingularity { im_ab })?;

    // r = 2K₀²/(a g₀) = K₀/|κ₀|
    let r = k0 / ss.kappa0.abs();
    let (im_bc, im_ac) = (im_cross(b, c), im_cross(a, c));
    let intensity_coef = im_ab / (2.0 * k0 * (im_bc + r * im_ac));
    let shift_coef = 1.0 / (r * im_ac / im_bc + 1.0);
    Ok(PerturbationResult {
        a_coef: a,
        b_coef: b,
        c_coef: c,
        k1_per_n2: k1,
        kappa1_per_n2: kappa1,
        intensity_coef,
        shift_coef,
    })
}
