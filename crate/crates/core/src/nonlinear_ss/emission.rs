//! Output intensity and wavelength shift above threshold.

use std::io::Write;

use super::coefficients::PerturbationResult;
use crate::error::{Error, Result};
use crate::linear_ss::{homogeneous_threshold_weak, ThresholdSolution};
use crate::numeric::fmt_sig;

/// Largest `|γ||N₊|²/K₀² = 2|σ|I` accepted as weakly nonlinear.
pub const WEAK_NONLINEARITY: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionCurve {
    pub g0_cm_inv: f64,
    pub g_cm_inv: Vec<f64>,
    /// `I = |N₊|²/2`.
    pub intensity: Vec<f64>,
    /// Wavelength shift in micrometers; NaN where no shift model is available.
    pub dlambda_um: Vec<f64>,
    /// Points that are below threshold or violate `|γ||N₊|² ≪ K₀²`.
    pub flagged: Vec<bool>,
}

impl EmissionCurve {
    /// CSV with header `g_cm_inv,intensity,dlambda_um`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "g_cm_inv,intensity,dlambda_um")?;
        for ((g, i), d) in self
            .g_cm_inv
            .iter()
            .zip(&self.intensity)
            .zip(&self.dlambda_um)
        {
            writeln!(
                out,
                "{},{},{}",
                fmt_sig(*g, 9),
                fmt_sig(*i, 9),
                fmt_sig(*d, 9)
            )?;
        }
        Ok(())
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma == 0.0 {
        return Err(Error::ZeroKerr);
    }
    if !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma must be finite, got {sigma}")));
    }
    Ok(())
}

fn curve(
    g0: f64,
    coef: f64,
    sigma: f64,
    g_range: &[f64],
    shift: impl Fn(f64) -> f64,
) -> Result<EmissionCurve> {
    check_sigma(sigma)?;
    if g_range.iter().any(|g| !g.is_finite()) {
        return Err(Error::Domain("gain samples must be finite".into()));
    }
    let intensity: Vec<f64> = g_range
        .iter()
        .map(|g| coef * (g - g0) / (sigma * g0))
        .collect();
    let flagged = g_range
        .iter()
        .zip(&intensity)
        .map(|(g, i)| *g < g0 || *i < 0.0 || 2.0 * sigma.abs() * i.abs() > WEAK_NONLINEARITY)
        .collect();
    Ok(EmissionCurve {
        g0_cm_inv: g0,
        g_cm_inv: g_range.to_vec(),
        intensity,
        dlambda_um: g_range.iter().map(|&g| shift(g)).collect(),
        flagged,
    })
}

/// `I(g) = 𝒜(g−g₀)/(σg₀)` and `δλ(g) = −ℬ(g−g₀)λ₀/g₀` for a bilayer threshold.
pub fn emission(
    ss: &ThresholdSolution,
    pr: &PerturbationResult,
    sigma: f64,
    g_range: &[f64],
) -> Result<EmissionCurve> {
    let (g0, lambda0) = (ss.g0_cm_inv, ss.mode.lambda0_um);
    let b = pr.shift_coef;
    curve(g0, pr.intensity_coef, sigma, g_range, |g| {
        -b * (g - g0) * lambda0 / g0
    })
}

/// `η₀²(η₀²−1) ln²((η₀+1)/(η₀−1)) / 12`, the intensity coefficient of a
/// homogeneous Kerr slab.
pub fn slab_intensity_coefficient(eta0: f64) -> Result<f64> {
    if !(eta0 > 1.0 && eta0.is_finite()) {
        return Err(Error::Domain(format!(
            "slab coefficient needs eta0 > 1, got {eta0}"
        )));
    }
    let e2 = eta0 * eta0;
    let l = ((eta0 + 1.0) / (eta0 - 1.0)).ln();
    Ok(e2 * (e2 - 1.0) * l * l / 12.0)
}

/// Emission of a homogeneous slab of thickness `L` lasing near `lambda_um`.
/// The slab model carries no wavelength shift, so `dlambda_um` is NaN.
pub fn homogeneous_emission(
    eta0: f64,
    l_um: f64,
    lambda_um: f64,
    sigma: f64,
    g_range: &[f64],
) -> Result<EmissionCurve> {
    let coef = slab_intensity_coefficient(eta0)?;
    let ss = homogeneous_threshold_weak(eta0, l_um, lambda_um)?;
    curve(ss.g0_cm_inv, coef, sigma, g_range, |_| f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_ss::{bilayer_ss_exact, bilayer_threshold_general};
    use crate::nonlinear_ss::perturbation_coefficients;

    fn setup() -> (ThresholdSolution, PerturbationResult) {
        let guess = bilayer_threshold_general(3.0, 3000, 1000.0).unwrap();
        let ss = bilayer_ss_exact(3.0, 1000.0, &guess).unwrap();
        let pr = perturbation_coefficients(&ss).unwrap();
        (ss, pr)
    }

    #[test]
    fn threshold_and_doubling() {
        let (ss, pr) = setup();
        let g0 = ss.g0_cm_inv;
        let c = emission(&ss, &pr, 0.5, &[g0, 2.0 * g0]).unwrap();
        assert_eq!(c.intensity[0], 0.0);
        assert_eq!(c.dlambda_um[0], 0.0);
        assert!(
            (c.intensity[1] - pr.intensity_coef / 0.5).abs()
                < 1e-15 * c.intensity[1].abs().max(1.0)
        );
    }

    #[test]
    fn affine_in_gain() {
        let (ss, pr) = setup();
        let g: Vec<f64> = (0..20)
            .map(|i| ss.g0_cm_inv * (1.0 + 0.05 * i as f64))
            .collect();
        let c = emission(&ss, &pr, 1e-3, &g).unwrap();
        for y in [&c.intensity, &c.dlambda_um] {
            let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for w in y.windows(3) {
                assert!((w[2] - 2.0 * w[1] + w[0]).abs() < 1e-13 * scale);
            }
        }
    }

    #[test]
    fn zero_kerr_rejected() {
        let (ss, pr) = setup();
        assert_eq!(emission(&ss, &pr, 0.0, &[200.0]), Err(Error::ZeroKerr));
    }

    #[test]
    fn strong_points_flagged() {
        let (ss, pr) = setup();
        let g0 = ss.g0_cm_inv;
        let c = emission(&ss, &pr, 1.0, &[0.5 * g0, g0, 1e6 * g0]).unwrap();
        assert!(c.flagged[0]);
        assert!(!c.flagged[1]);
        assert_eq!(c.flagged[2], 2.0 * c.intensity[2].abs() > WEAK_NONLINEARITY);
    }

    #[test]
    fn slab_coefficients() {
        assert!((slab_intensity_coefficient(3.0).unwrap() - 2.883).abs() < 1e-3);
        assert!((slab_intensity_coefficient(2.0).unwrap() - 1.207).abs() < 1e-3);
        assert!(slab_intensity_coefficient(1.0).is_err());
        let c = homogeneous_emission(3.0, 500.0, 1.0, 2.0, &[27.7258872, 55.4517744]).unwrap();
        assert!(c.intensity[0].abs() < 1e-7);
        assert!((c.intensity[1] - slab_intensity_coefficient(3.0).unwrap() / 2.0).abs() < 1e-7);
        assert!(c.dlambda_um[0].is_nan());
    }

    #[test]
    fn csv_header_and_rows() {
        let (ss, pr) = setup();
        let c = emission(&ss, &pr, 1.0, &[ss.g0_cm_inv]).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "g_cm_inv,intensity,dlambda_um");
        assert_eq!(lines.len(), 2);
        assert!(lines[1].ends_with(",0,0"));
    }
}
