//! Full root of `U(K) = V(K) = 0` by damped Newton in `(K, κ)`.
//!
//! The iteration runs on the reduced phase `θ = ηK − 2πn` rather than on
//! `K` itself: at `K ~ 10⁴` one ulp of `K` already moves `cos(ηK)` by
//! ~10⁻¹², so residuals below that floor are only reachable with the phase
//! carried separately.

use std::f64::consts::TAU;

use super::{Regime, Residual, ThresholdSolution};
use crate::error::{Error, Result};
use crate::helmholtz::gplus_linear;
use crate::numeric::solve2;
use crate::profiles::{gain_from_kappa, BilayerIndex, Mode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
        }
    }
}

/// `α²cosh(κK) + cos(ηK)` and `αβ sinh(κK) − sin(ηK)`.
pub fn exact_residuals(eta: f64, k: f64, kappa: f64) -> [f64; 2] {
    let idx = BilayerIndex { eta, kappa };
    let (alpha, beta) = (idx.alpha(), idx.beta());
    let (s, c) = (eta * k).sin_cos();
    [
        alpha * alpha * (kappa * k).cosh() + c,
        alpha * beta * (kappa * k).sinh() - s,
    ]
}

struct Reduced {
    eta: f64,
    turns: f64,
}

impl Reduced {
    fn k(&self, theta: f64) -> f64 {
        (TAU * self.turns + theta) / self.eta
    }

    fn residual(&self, theta: f64, kappa: f64) -> [f64; 2] {
        let idx = BilayerIndex {
            eta: self.eta,
            kappa,
        };
        let (alpha, beta) = (idx.alpha(), idx.beta());
        let x = kappa * self.k(theta);
        let (s, c) = theta.sin_cos();
        [alpha * alpha * x.cosh() + c, alpha * beta * x.sinh() - s]
    }

    fn jacobian(&self, theta: f64, kappa: f64) -> [[f64; 2]; 2] {
        let eta = self.eta;
        let k = self.k(theta);
        let idx = BilayerIndex { eta, kappa };
        let (alpha, beta) = (idx.alpha(), idx.beta());
        let n2p1 = eta * eta + kappa * kappa + 1.0;
        let dbeta = 4.0 * kappa / (n2p1 * n2p1);
        let x = kappa * k;
        let (sh, ch) = (x.sinh(), x.cosh());
        let (s, c) = theta.sin_cos();
        [
            [
                alpha * alpha * sh * kappa / eta - s,
                2.0 * alpha / eta * ch + alpha * alpha * sh * k,
            ],
            [
                alpha * beta * ch * kappa / eta - c,
                (beta / eta + alpha * dbeta) * sh + alpha * beta * ch * k,
            ],
        ]
    }
}

fn max_abs(r: [f64; 2]) -> f64 {
    r[0].abs().max(r[1].abs())
}

/// Refines an asymptotic threshold into the exact bilayer singularity.
pub fn bilayer_ss_exact(
    eta: f64,
    a_um: f64,
    guess: &ThresholdSolution,
) -> Result<ThresholdSolution> {
    bilayer_ss_exact_with(eta, a_um, guess, ExactOptions::default())
}

pub fn bilayer_ss_exact_with(
    eta: f64,
    a_um: f64,
    guess: &ThresholdSolution,
    options: ExactOptions,
) -> Result<ThresholdSolution> {
    BilayerIndex::new(eta, guess.kappa0)?;
    if !(a_um > 0.0) {
        return Err(Error::Domain(format!(
            "thickness must be positive, got {a_um}"
        )));
    }
    let turns = (eta * guess.k0() / TAU).round();
    let reduced = Reduced { eta, turns };
    let mut theta = eta * guess.k0() - TAU * turns;
    let mut kappa = -guess.kappa0.abs();
    let mut r = reduced.residual(theta, kappa);
    let mut converged = false;
    for _ in 0..options.max_iter {
        if max_abs(r) < options.tol {
            converged = true;
            break;
        }
        let jac = reduced.jacobian(theta, kappa);
        let step = solve2(jac, [-r[0], -r[1]]).ok_or(Error::DegenerateRoot {
            k: reduced.k(theta),
            kappa,
        })?;
        let mut damping = 1.0;
        loop {
            let (t_new, q_new) = (theta + damping * step[0], kappa + damping * step[1]);
            let r_new = reduced.residual(t_new, q_new);
            if max_abs(r_new) < max_abs(r) || damping < 1e-6 {
                theta = t_new;
                kappa = q_new;
                r = r_new;
                break;
            }
            damping *= 0.5;
        }
    }
    if !converged && max_abs(r) >= options.tol {
        return Err(Error::NoConvergence {
            iterations: options.max_iter,
            residual: max_abs(r),
        });
    }
    let k0 = reduced.k(theta);
    let idx = BilayerIndex::new(eta, kappa)?;
    let g = gplus_linear(idx, k0)?;
    Ok(ThresholdSolution {
        mode: Mode::from_k(guess.mode.m, k0, a_um),
        eta,
        kappa0: kappa,
        g0_cm_inv: gain_from_kappa(-kappa.abs(), k0, a_um)?,
        regime: Regime::Exact,
        residual: Residual::Uv {
            u: g.u.abs(),
            v: g.v.abs(),
        },
        upper_bound_g0: guess.upper_bound_g0,
        thickness_um: a_um,
    })
}
