//! Direct check of the first-order shifts K₁, κ₁ against the full nonlinear
//! problem, solved by shooting.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linear_ss::ThresholdSolution;
use crate::numeric::solve2;
use crate::ode::{converged_steps, outgoing_init, shoot};
use crate::profiles::BilayerIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    /// Values of `|γ||N₊|²/K₀²` to sample.
    pub ratios: Vec<f64>,
    /// Relative tolerance used to pick the RK4 step count.
    pub rel_tol: f64,
    /// Fixed RK4 step count, overriding `rel_tol`.
    pub steps: Option<usize>,
    pub max_iter: usize,
    /// Largest accepted `|s₁ x_max / s₀|` in the linear fit `s(x) = s₀ + s₁x`.
    pub max_curvature: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            ratios: vec![1e-8, 1e-7, 1e-6],
            rel_tol: 1e-9,
            steps: None,
            max_iter: 30,
            max_curvature: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    /// Effective strength `γ|N₊|²`.
    pub strength: f64,
    pub k: f64,
    pub kappa: f64,
    /// `(K − K₀)/(γ|N₊|²)`.
    pub k_slope: f64,
    /// `(κ − κ₀)/(γ|N₊|²)`.
    pub kappa_slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    /// Extrapolated K₁ per unit `|N₊|²`.
    pub k1: f64,
    /// Extrapolated κ₁ per unit `|N₊|²`.
    pub kappa1: f64,
    /// Linear root `(K₀, κ₀)` of the discretized problem.
    pub baseline: (f64, f64),
    pub samples: Vec<OracleSample>,
    pub steps: usize,
}

struct Shooter {
    eta: f64,
    steps: usize,
}

impl Shooter {
    /// `(ψ'(0) + iKψ(0)) / (K N₊)` for the outgoing solution from `x = 1`.
    fn mismatch(&self, k: f64, kappa: f64, strength: f64) -> Result<Complex64> {
        let index = BilayerIndex::new(self.eta, kappa)?;
        let one = Complex64::new(1.0, 0.0);
        let (v, d) = shoot(index, k, strength, outgoing_init(k, one), self.steps)?;
        Ok((d + Complex64::new(0.0, k) * v) / k)
    }

    fn jacobian(&self, k: f64, kappa: f64, at: Complex64) -> Result<[[f64; 2]; 2]> {
        let hk = 1e-6 / self.eta;
        let hq = 1e-6 / k;
        let dk = (self.mismatch(k + hk, kappa, 0.0)? - at) / hk;
        let dq = (self.mismatch(k, kappa + hq, 0.0)? - at) / hq;
        Ok([[dk.re, dq.re], [dk.im, dq.im]])
    }

    /// Chord Newton from `(k, kappa)` with a fixed Jacobian.
    fn solve(
        &self,
        mut k: f64,
        mut kappa: f64,
        strength: f64,
        jac: [[f64; 2]; 2],
        max_iter: usize,
    ) -> Result<(f64, f64)> {
        let mut last = f64::INFINITY;
        for _ in 0..max_iter {
            let f = self.mismatch(k, kappa, strength)?;
            let step = solve2(jac, [-f.re, -f.im]).ok_or(Error::DegenerateRoot { k, kappa })?;
            k += step[0];
            kappa += step[1];
            let size = (step[0] * self.eta).abs().max((step[1] * k).abs());
            if size < 1e-13 * k || (size < 1e-10 && size >= 0.5 * last) {
                return Ok((k, kappa));
            }
            last = size;
        }
        Err(Error::NoConvergence {
            iterations: max_iter,
            residual: last,
        })
    }
}

/// Weighted least squares `s(x) = s₀ + s₁x`, weights `x²`.
fn fit(points: &[(f64, f64)]) -> (f64, f64) {
    let (mut sw, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let w = x * x;
        sw += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * y;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    let s1 = (sw * sxy - sx * sy) / det;
    let s0 = (sy - s1 * sx) / sw;
    (s0, s1)
}

pub fn nonlinear_oracle(ss: &ThresholdSolution, sigma: f64) -> Result<OracleEstimate> {
    nonlinear_oracle_with(ss, sigma, &OracleOptions::default())
}

/// Solves the nonlinear singularity condition for several intensities at
/// fixed σ and extrapolates the shifts per unit `γ|N₊|²` to zero intensity.
///
/// At fixed `γ = −σK₀²` each sample uses `|N₊|² = ratio/|σ|`; the nonlinear
/// term enters only through `γ|N₊|²`, so the shooting runs with `N₊ = 1` and
/// that effective strength.
pub fn nonlinear_oracle_with(
    ss: &ThresholdSolution,
    sigma: f64,
    options: &OracleOptions,
) -> Result<OracleEstimate> {
    let (k0, kappa0) = (ss.k0(), ss.kappa0);
    let index = ss.index()?;
    if sigma == 0.0 {
        return Ok(OracleEstimate {
            k1: 0.0,
            kappa1: 0.0,
            baseline: (k0, kappa0),
            samples: Vec::new(),
            steps: 0,
        });
    }
    if options.ratios.len() < 3 {
        return Err(Error::Domain(
            "the oracle needs at least three intensities".into(),
        ));
    }
    if options.ratios.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(Error::Domain("intensity ratios must lie in (0, 1)".into()));
    }
    let steps = match options.steps {
        Some(s) => s,
        None => converged_steps(
            index,
            k0,
            0.0,
            outgoing_init(k0, Complex64::new(1.0, 0.0)),
            options.rel_tol,
        )?,
    };
    let shooter = Shooter { eta: ss.eta, steps };

    let f0 = shooter.mismatch(k0, kappa0, 0.0)?;
    let jac = shooter.jacobian(k0, kappa0, f0)?;
    let (kb, qb) = shooter.solve(k0, kappa0, 0.0, jac, options.max_iter)?;
    let fb = shooter.mismatch(kb, qb, 0.0)?;
    let jac = shooter.jacobian(kb, qb, fb)?;

    let gamma_sign = -sigma.signum();
    let samples = options
        .ratios
        .par_iter()
        .map(|&ratio| {
            let strength = gamma_sign * ratio * k0 * k0;
            let (k, kappa) = shooter.solve(kb, qb, strength, jac, options.max_iter)?;
            Ok(OracleSample {
                strength,
                k,
                kappa,
                k_slope: (k - kb) / strength,
                kappa_slope: (kappa - qb) / strength,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let x_max = samples.iter().fold(0.0f64, |m, s| m.max(s.strength.abs()));
    let check = |points: Vec<(f64, f64)>| -> Result<f64> {
        let (s0, s1) = fit(&points);
        if (s1 * x_max).abs() > options.max_curvature * s0.abs() {
            return Err(Error::GammaTooLarge {
                slope: s0,
                quadratic: s1,
            });
        }
        Ok(s0)
    };
    let k1 = check(samples.iter().map(|s| (s.strength, s.k_slope)).collect())?;
    let kappa1 = check(
        samples
            .iter()
            .map(|s| (s.strength, s.kappa_slope))
            .collect(),
    )?;
    Ok(OracleEstimate {
        k1,
        kappa1,
        baseline: (kb, qb),
        samples,
        steps,
    })
}
