//! First-order Kerr correction ζ⁽¹⁾ of the outgoing solution ζ.
//!
//! With `ψ'' + K²𝔫²ψ = γ|ψ|²ψ` and ψ = ζ⁽⁰⁾ + γζ⁽¹⁾ + O(γ²), the correction
//! solves `ζ⁽¹⁾'' + K²𝔫²ζ⁽¹⁾ = |ζ⁽⁰⁾|²ζ⁽⁰⁾` with zero data at `x = 1`:
//!
//! * right half: `ζ_r⁽¹⁾(x) = ∫₁ˣ 𝒢_r(x−y) f(y) dy`, `𝒢_r(u) = sin(𝔷*Ku)/(𝔷*K)`
//! * left half: `ζ_l⁽¹⁾(x) = ∫_{1/2}ˣ 𝒢_l(x−y) f(y) dy + Ã e^{i𝔷Kx} + B̃ e^{−i𝔷Kx}`
//!
//! where `f = |ζ⁽⁰⁾|²ζ⁽⁰⁾` and Ã, B̃ carry `P = ζ_r⁽¹⁾(1/2)`, `Q = ζ_r⁽¹⁾'(1/2)`
//! across the interface.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::helmholtz::{build_zeta, PiecewiseSolution};
use crate::numeric::{exp_integral, integrate};
use crate::profiles::BilayerIndex;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `|ζ⁽⁰⁾|²ζ⁽⁰⁾` on one half as `Σ cⱼ e^{sⱼ y}`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct CubicSource {
    coef: [Complex64; 6],
    rate: [Complex64; 6],
}

impl CubicSource {
    /// Expansion of `|p e^{iwy} + q e^{−iwy}|² (p e^{iwy} + q e^{−iwy})`.
    fn new(w: Complex64, p: Complex64, q: Complex64) -> Self {
        let wb = w.conj();
        let (pb, qb) = (p.conj(), q.conj());
        Self {
            coef: [
                p * p * pb,
                p * p * qb,
                2.0 * p * q * pb,
                2.0 * p * q * qb,
                q * q * pb,
                q * q * qb,
            ],
            rate: [
                I * (2.0 * w - wb),
                I * (2.0 * w + wb),
                -I * wb,
                I * wb,
                -I * (2.0 * w + wb),
                I * (wb - 2.0 * w),
            ],
        }
    }

    fn eval(&self, y: f64) -> Complex64 {
        self.coef
            .iter()
            .zip(&self.rate)
            .map(|(c, s)| c * (s * y).exp())
            .sum()
    }

    /// `∫_{x0}^{x} 𝒢(x−y) f(y) dy` and its x-derivative for `𝒢(u) = sin(wu)/w`.
    fn green_integral(&self, w: Complex64, x0: f64, x: f64) -> (Complex64, Complex64) {
        let h = x - x0;
        // ∫_{x0}^{x} e^{ik(x−y)} e^{cy} dy = e^{cx} (1 − e^{−(c−ik)h}) / (c − ik)
        let wave = |k: Complex64, c: Complex64| (c * x).exp() * exp_integral(-(c - I * k), h);
        let mut value = Complex64::new(0.0, 0.0);
        let mut slope = Complex64::new(0.0, 0.0);
        for (c, s) in self.coef.iter().zip(&self.rate) {
            let up = wave(w, *s);
            let down = wave(-w, *s);
            value += c * (up - down);
            slope += c * (up + down);
        }
        (value / (2.0 * I * w), 0.5 * slope)
    }
}

/// ζ⁽¹⁾ in closed form, built for a given transmitted amplitude `N₊`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderSolution {
    pub zeta0: PiecewiseSolution,
    pub p: Complex64,
    pub q: Complex64,
    pub tilde_a: Complex64,
    pub tilde_b: Complex64,
    left: CubicSource,
    right: CubicSource,
}

impl FirstOrderSolution {
    fn wavenumbers(&self) -> (Complex64, Complex64) {
        let z = self.zeta0.index.z();
        (z * self.zeta0.k, z.conj() * self.zeta0.k)
    }

    /// `ζ⁽¹⁾(x)` and `ζ⁽¹⁾'(x)`.
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let (wl, wr) = self.wavenumbers();
        if x >= 0.5 {
            self.right.green_integral(wr, 1.0, x)
        } else {
            let (v, d) = self.left.green_integral(wl, 0.5, x);
            let up = self.tilde_a * (I * wl * x).exp();
            let down = self.tilde_b * (-I * wl * x).exp();
            (v + up + down, d + I * wl * (up - down))
        }
    }

    /// `G₊⁽¹⁾ = ζ⁽¹⁾'(0) + iKζ⁽¹⁾(0)`.
    pub fn g_plus(&self) -> Complex64 {
        let (v, d) = self.eval(0.0);
        d + I * self.zeta0.k * v
    }

    /// The source `|ζ⁽⁰⁾|²ζ⁽⁰⁾` from its exponential expansion.
    pub fn source(&self, x: f64) -> Complex64 {
        if x >= 0.5 {
            self.right.eval(x)
        } else {
            self.left.eval(x)
        }
    }
}

/// ζ⁽¹⁾ for `N₊ = 1`.
pub fn first_order_correction(index: BilayerIndex, k: f64) -> Result<FirstOrderSolution> {
    first_order_correction_with(index, k, Complex64::new(1.0, 0.0))
}

pub fn first_order_correction_with(
    index: BilayerIndex,
    k: f64,
    n_plus: Complex64,
) -> Result<FirstOrderSolution> {
    let zeta0 = build_zeta(index, k, n_plus)?;
    let z = index.z();
    let (wl, wr) = (z * k, z.conj() * k);
    let left = CubicSource::new(wl, zeta0.a, zeta0.b);
    let right = CubicSource::new(wr, zeta0.c, zeta0.d);
    let (p, q) = right.green_integral(wr, 1.0, 0.5);
    let tilde_a = 0.5 * (-I * wl * 0.5).exp() * (p - I * q / wl);
    let tilde_b = 0.5 * (I * wl * 0.5).exp() * (p + I * q / wl);
    let out = FirstOrderSolution {
        zeta0,
        p,
        q,
        tilde_a,
        tilde_b,
        left,
        right,
    };
    if !(p.is_finite() && q.is_finite() && out.g_plus().is_finite()) {
        return Err(Error::IntegrationFailure { x: 0.5 });
    }
    Ok(out)
}

/// P, Q and G₊⁽¹⁾ by adaptive quadrature of the Green integrals, with the
/// source taken directly from ζ⁽⁰⁾.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureFirstOrder {
    pub p: Complex64,
    pub q: Complex64,
    pub g_plus: Complex64,
}

pub fn first_order_quadrature(
    index: BilayerIndex,
    k: f64,
    n_plus: Complex64,
) -> Result<QuadratureFirstOrder> {
    let zeta0 = build_zeta(index, k, n_plus)?;
    let z = index.z();
    let (wl, wr) = (z * k, z.conj() * k);
    let source = |y: f64| {
        let (v, _) = zeta0.eval(y);
        v.norm_sqr() * v
    };
    // about one panel per oscillation of the fastest term
    let panels = (2.0 * index.eta * k / std::f64::consts::PI).ceil() as usize + 8;
    let peak = (0..=200)
        .map(|i| source(i as f64 / 200.0).norm())
        .fold(0.0, f64::max);
    // relative to the bound peak/2 on the cosine integrals; the integrand
    // itself carries a phase error of order K·ε
    let tol = 1e-11 * 0.5 * peak;

    let green = |w: Complex64, x: f64, y: f64, f: Complex64| {
        let arg = w * (x - y);
        (arg.sin() / w * f, arg.cos() * f)
    };
    let p = -integrate(
        |y| green(wr, 0.5, y, source(y)).0,
        0.5,
        1.0,
        panels,
        tol / wr.norm(),
    );
    let q = -integrate(|y| green(wr, 0.5, y, source(y)).1, 0.5, 1.0, panels, tol);
    let tilde_a = 0.5 * (-I * wl * 0.5).exp() * (p - I * q / wl);
    let tilde_b = 0.5 * (I * wl * 0.5).exp() * (p + I * q / wl);
    let v = -integrate(
        |y| green(wl, 0.0, y, source(y)).0,
        0.0,
        0.5,
        panels,
        tol / wl.norm(),
    ) + tilde_a
        + tilde_b;
    let d = -integrate(|y| green(wl, 0.0, y, source(y)).1, 0.0, 0.5, panels, tol)
        + I * wl * (tilde_a - tilde_b);
    Ok(QuadratureFirstOrder {
        p,
        q,
        g_plus: d + I * k * v,
    })
}
