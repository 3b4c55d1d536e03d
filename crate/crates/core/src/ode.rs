//! Fixed-step RK4 integration of `ψ'' + K²𝔫(x)²ψ = γ|ψ|²ψ` from `x = 1`
//! down to `x = 0`. Used as an oracle for the closed-form solutions.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::fmt_sig;
use crate::profiles::BilayerIndex;

/// Integration options. `steps` fixes the total RK4 step count; when absent
/// it is chosen from the local wavenumber and then confirmed by step doubling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub samples: usize,
    pub rel_tol: f64,
    pub steps: Option<usize>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            samples: 1001,
            rel_tol: 1e-10,
            steps: None,
        }
    }
}

/// The solution sampled on an ascending grid over `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSolution {
    pub x: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub dpsi: Vec<Complex64>,
    /// Total RK4 steps used for the returned samples.
    pub steps: usize,
}

impl SampledSolution {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,re_psi,im_psi,re_dpsi,im_dpsi")?;
        for ((x, p), d) in self.x.iter().zip(&self.psi).zip(&self.dpsi) {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_sig(*x, 9),
                fmt_sig(p.re, 9),
                fmt_sig(p.im, 9),
                fmt_sig(d.re, 9),
                fmt_sig(d.im, 9)
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct Rhs {
    n2k2: Complex64,
    gamma: f64,
}

impl Rhs {
    #[inline]
    fn eval(&self, psi: Complex64, dpsi: Complex64) -> (Complex64, Complex64) {
        (dpsi, -self.n2k2 * psi + self.gamma * psi.norm_sqr() * psi)
    }
}

#[inline]
fn rk4_step(rhs: Rhs, h: f64, psi: Complex64, dpsi: Complex64) -> (Complex64, Complex64) {
    let (k1p, k1d) = rhs.eval(psi, dpsi);
    let (k2p, k2d) = rhs.eval(psi + 0.5 * h * k1p, dpsi + 0.5 * h * k1d);
    let (k3p, k3d) = rhs.eval(psi + 0.5 * h * k2p, dpsi + 0.5 * h * k2d);
    let (k4p, k4d) = rhs.eval(psi + h * k3p, dpsi + h * k3d);
    (
        psi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        dpsi + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d),
    )
}

fn layer_rhs(index: BilayerIndex, k: f64, gamma: f64, left: bool) -> Rhs {
    let n = if left { index.z() } else { index.z().conj() };
    Rhs {
        n2k2: n * n * k * k,
        gamma,
    }
}

/// Step count estimate for RK4 phase error below `rel_tol` at wavenumber `ω`.
fn estimate_steps(index: BilayerIndex, k: f64, rel_tol: f64) -> usize {
    let omega = k * index.z().norm().max(1.0);
    let per_unit = omega * (omega / (120.0 * rel_tol)).powf(0.25);
    (per_unit.ceil() as usize).max(200)
}

/// Integrates from the outgoing data `init = (ψ(1), ψ'(1))` to `x = 0` with
/// `steps` equal RK4 steps (rounded up to even), returning `(ψ(0), ψ'(0))`.
pub fn shoot(
    index: BilayerIndex,
    k: f64,
    gamma: f64,
    init: (Complex64, Complex64),
    steps: usize,
) -> Result<(Complex64, Complex64)> {
    let half = steps.div_ceil(2).max(1);
    let h = -0.5 / half as f64;
    let (mut psi, mut dpsi) = init;
    for left in [false, true] {
        let rhs = layer_rhs(index, k, gamma, left);
        for _ in 0..half {
            (psi, dpsi) = rk4_step(rhs, h, psi, dpsi);
        }
        if !(psi.is_finite() && dpsi.is_finite()) {
            return Err(Error::IntegrationFailure {
                x: if left { 0.0 } else { 0.5 },
            });
        }
    }
    Ok((psi, dpsi))
}

fn endpoint_change(a: (Complex64, Complex64), b: (Complex64, Complex64), omega: f64) -> f64 {
    let num = (a.0 - b.0).norm().max((a.1 - b.1).norm() / omega);
    let den = b.0.norm().max(b.1.norm() / omega).max(1e-300);
    num / den
}

/// Picks a step count whose endpoint changes by less than `rel_tol` under
/// doubling. Returns the count and the endpoint at that count.
pub fn converged_steps(
    index: BilayerIndex,
    k: f64,
    gamma: f64,
    init: (Complex64, Complex64),
    rel_tol: f64,
) -> Result<usize> {
    let omega = k * index.z().norm().max(1.0);
    let mut steps = estimate_steps(index, k, rel_tol);
    let mut coarse = shoot(index, k, gamma, init, steps)?;
    for _ in 0..6 {
        let fine = shoot(index, k, gamma, init, 2 * steps)?;
        let change = endpoint_change(coarse, fine, omega);
        steps *= 2;
        if change < rel_tol {
            return Ok(steps);
        }
        coarse = fine;
    }
    Err(Error::NoConvergence {
        iterations: steps,
        residual: f64::NAN,
    })
}

/// Integrates right-to-left and samples the solution.
///
/// `options.samples` (at least 100) is rounded up to an odd count so that
/// `x = 1/2` is a grid point and no RK4 step straddles the interface.
pub fn ode_oracle(
    index: BilayerIndex,
    k: f64,
    gamma: f64,
    init: (Complex64, Complex64),
    options: OdeOptions,
) -> Result<SampledSolution> {
    if options.samples < 100 {
        return Err(Error::Domain(format!(
            "need at least 100 samples, got {}",
            options.samples
        )));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("K must be positive, got {k}")));
    }
    let steps = match options.steps {
        Some(s) => s,
        None => converged_steps(index, k, gamma, init, options.rel_tol)?,
    };
    let intervals_half = (options.samples - 1).div_ceil(2);
    let sub = steps.div_ceil(2 * intervals_half).max(1);
    let n = 2 * intervals_half + 1;
    let h = -0.5 / (intervals_half * sub) as f64;

    let mut psi_out = vec![Complex64::new(0.0, 0.0); n];
    let mut dpsi_out = psi_out.clone();
    let (mut psi, mut dpsi) = init;
    psi_out[n - 1] = psi;
    dpsi_out[n - 1] = dpsi;
    let mut idx = n - 1;
    for left in [false, true] {
        let rhs = layer_rhs(index, k, gamma, left);
        for _ in 0..intervals_half {
            for _ in 0..sub {
                (psi, dpsi) = rk4_step(rhs, h, psi, dpsi);
            }
            idx -= 1;
            if !(psi.is_finite() && dpsi.is_finite()) {
                return Err(Error::IntegrationFailure {
                    x: idx as f64 / (n - 1) as f64,
                });
            }
            psi_out[idx] = psi;
            dpsi_out[idx] = dpsi;
        }
    }
    let x = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    Ok(SampledSolution {
        x,
        psi: psi_out,
        dpsi: dpsi_out,
        steps: 2 * intervals_half * sub,
    })
}

/// Outgoing data at `x = 1` for transmitted amplitude `n_plus`.
pub fn outgoing_init(k: f64, n_plus: Complex64) -> (Complex64, Complex64) {
    let v = Complex64::new(0.0, k).exp() * n_plus;
    (v, Complex64::new(0.0, k) * v)
}
