//! Exact piecewise solutions of `ψ'' + K²𝔫(x)²ψ = 0` on the PT bilayer and
//! the scattering data built from them.
//!
//! Two Jost-type solutions are used. ζ carries purely outgoing data at the
//! right edge (`ζ(1) = e^{iK}N₊`, `ζ'(1) = iK e^{iK}N₊`); ξ carries purely
//! outgoing data at the left edge (`ξ(0) = N₋`, `ξ'(0) = −iK N₋`). Amplitudes
//! are normalized to `N₊ = N₋ = 1` unless stated otherwise.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profiles::BilayerIndex;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `C e^{ipx} + D e^{−ipx}` matching value `v` and slope `d` at `x0`.
pub(crate) fn match_plane_waves(
    p: Complex64,
    x0: f64,
    v: Complex64,
    d: Complex64,
) -> [Complex64; 2] {
    let slope = d / (I * p);
    [
        (-I * p * x0).exp() * (v + slope) * 0.5,
        (I * p * x0).exp() * (v - slope) * 0.5,
    ]
}

/// A two-piece plane-wave solution:
/// `A e^{i𝔷Kx} + B e^{−i𝔷Kx}` on `[0, 1/2]` and
/// `C e^{i𝔷*Kx} + D e^{−i𝔷*Kx}` on `[1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseSolution {
    pub index: BilayerIndex,
    pub k: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    /// Transmitted amplitude the solution was built for (N₊ for ζ, N₋ for ξ).
    pub amplitude: Complex64,
}

impl PiecewiseSolution {
    /// Value and derivative at `x`.
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let (p, first, second) = if x <= 0.5 {
            (self.index.z() * self.k, self.a, self.b)
        } else {
            (self.index.z().conj() * self.k, self.c, self.d)
        };
        let up = first * (I * p * x).exp();
        let down = second * (-I * p * x).exp();
        (up + down, I * p * (up - down))
    }

    /// Value and derivative at `x = 1/2` from each side.
    pub fn interface_jump(&self) -> ((Complex64, Complex64), (Complex64, Complex64)) {
        let pl = self.index.z() * self.k;
        let pr = self.index.z().conj() * self.k;
        let l = (
            self.a * (I * pl * 0.5).exp() + self.b * (-I * pl * 0.5).exp(),
            I * pl * (self.a * (I * pl * 0.5).exp() - self.b * (-I * pl * 0.5).exp()),
        );
        let r = (
            self.c * (I * pr * 0.5).exp() + self.d * (-I * pr * 0.5).exp(),
            I * pr * (self.c * (I * pr * 0.5).exp() - self.d * (-I * pr * 0.5).exp()),
        );
        (l, r)
    }

    /// `ψ'(0) + iKψ(0)`.
    pub fn g_plus(&self) -> Complex64 {
        let (v, d) = self.eval(0.0);
        d + I * self.k * v
    }

    /// `ψ'(0) − iKψ(0)`.
    pub fn g_minus(&self) -> Complex64 {
        let (v, d) = self.eval(0.0);
        d - I * self.k * v
    }

    /// `ψ'(1) + iKψ(1)`.
    pub fn f_plus(&self) -> Complex64 {
        let (v, d) = self.eval(1.0);
        d + I * self.k * v
    }

    /// `ψ'(1) − iKψ(1)`.
    pub fn f_minus(&self) -> Complex64 {
        let (v, d) = self.eval(1.0);
        d - I * self.k * v
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("K must be positive, got {k}")));
    }
    Ok(())
}

/// The solution ζ with outgoing data at `x = 1`, coefficients in closed form.
pub fn build_zeta(index: BilayerIndex, k: f64, n_plus: Complex64) -> Result<PiecewiseSolution> {
    check_k(k)?;
    let z = index.z();
    if z.norm() == 0.0 {
        return Err(Error::Domain("refractive index vanishes".into()));
    }
    let zc = z.conj();
    let zsum = Complex64::new(2.0 * index.eta, 0.0);
    let zdiff = Complex64::new(0.0, 2.0 * index.kappa);
    let phase_sum = Complex64::new(index.eta * k, 0.0);
    let phase_diff = Complex64::new(0.0, index.kappa * k);
    let pre = n_plus * (I * k).exp() / (4.0 * z.norm_sqr());
    let a = pre
        * (zdiff * (zc - 1.0) * (-I * phase_diff).exp()
            + zsum * (zc + 1.0) * (-I * phase_sum).exp());
    let b = pre
        * (zdiff * (zc + 1.0) * (I * phase_diff).exp() + zsum * (zc - 1.0) * (I * phase_sum).exp());
    let c = n_plus * (-I * (zc - 1.0) * k).exp() * (zc + 1.0) / (2.0 * zc);
    let d = n_plus * (I * (zc + 1.0) * k).exp() * (zc - 1.0) / (2.0 * zc);
    Ok(PiecewiseSolution {
        index,
        k,
        a,
        b,
        c,
        d,
        amplitude: n_plus,
    })
}

/// The solution ξ with outgoing data at `x = 0`, propagated by interface matching.
pub fn build_xi(index: BilayerIndex, k: f64, n_minus: Complex64) -> Result<PiecewiseSolution> {
    check_k(k)?;
    let z = index.z();
    let [a, b] = match_plane_waves(z * k, 0.0, n_minus, -I * k * n_minus);
    let pl = z * k;
    let v = a * (I * pl * 0.5).exp() + b * (-I * pl * 0.5).exp();
    let d = I * pl * (a * (I * pl * 0.5).exp() - b * (-I * pl * 0.5).exp());
    let [c, dd] = match_plane_waves(z.conj() * k, 0.5, v, d);
    Ok(PiecewiseSolution {
        index,
        k,
        a,
        b,
        c,
        d: dd,
        amplitude: n_minus,
    })
}

/// `G₊/N₊ = e^{iK} K (U + iV)/(η² + κ²)` together with `U` and `V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPlus {
    pub per_n_plus: Complex64,
    pub u: f64,
    pub v: f64,
}

/// `U`, `V` and their partial derivatives in `K` and `κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UvJet {
    pub u: f64,
    pub v: f64,
    pub du_dk: f64,
    pub dv_dk: f64,
    pub du_dkappa: f64,
    pub dv_dkappa: f64,
}

pub fn uv_jet(index: BilayerIndex, k: f64) -> UvJet {
    let (eta, kappa) = (index.eta, index.kappa);
    let n2 = eta * eta + kappa * kappa;
    let (s, c) = (eta * k).sin_cos();
    let (sh, ch) = ((kappa * k).sinh(), (kappa * k).cosh());
    UvJet {
        u: (n2 + 1.0) * eta * s - (n2 - 1.0) * kappa * sh,
        v: 2.0 * (eta * eta * c + kappa * kappa * ch),
        du_dk: (n2 + 1.0) * eta * eta * c - (n2 - 1.0) * kappa * kappa * ch,
        dv_dk: 2.0 * (-eta.powi(3) * s + kappa.powi(3) * sh),
        du_dkappa: 2.0 * kappa * eta * s
            - (2.0 * kappa * kappa * sh + (n2 - 1.0) * (sh + kappa * k * ch)),
        dv_dkappa: 2.0 * (2.0 * kappa * ch + kappa * kappa * k * sh),
    }
}

/// Closed-form `G₊` per unit `N₊`.
pub fn gplus_linear(index: BilayerIndex, k: f64) -> Result<GPlus> {
    check_k(k)?;
    let jet = uv_jet(index, k);
    let n2 = index.eta * index.eta + index.kappa * index.kappa;
    let per_n_plus = (I * k).exp() * k * Complex64::new(jet.u, jet.v) / n2;
    Ok(GPlus {
        per_n_plus,
        u: jet.u,
        v: jet.v,
    })
}

/// Analytic `∂(G₊/N₊)/∂K` and `∂(G₊/N₊)/∂κ` at fixed η.
pub fn gplus_gradient(index: BilayerIndex, k: f64) -> (Complex64, Complex64) {
    let jet = uv_jet(index, k);
    let kappa = index.kappa;
    let n2 = index.eta * index.eta + kappa * kappa;
    let phase = (I * k).exp();
    let w = Complex64::new(jet.u, jet.v);
    let dw_dk = Complex64::new(jet.du_dk, jet.dv_dk);
    let dw_dkappa = Complex64::new(jet.du_dkappa, jet.dv_dkappa);
    let d_k = phase * ((I * k + 1.0) * w + k * dw_dk) / n2;
    let d_kappa = phase * k * (dw_dkappa / n2 - 2.0 * kappa * w / (n2 * n2));
    (d_k, d_kappa)
}

/// 2x2 complex transfer matrix mapping left plane-wave amplitudes
/// `(e^{iKx}, e^{−iKx})` to right ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(pub [[Complex64; 2]; 2]);

impl TransferMatrix {
    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn m22(&self) -> Complex64 {
        self.0[1][1]
    }
}

fn outside_amplitudes(k: f64, x: f64, v: Complex64, d: Complex64) -> [Complex64; 2] {
    let slope = d / (I * k);
    [
        (-I * k * x).exp() * (v + slope) * 0.5,
        (I * k * x).exp() * (v - slope) * 0.5,
    ]
}

/// Transfer matrix assembled from the ζ and ξ solutions.
pub fn transfer_matrix(zeta: &PiecewiseSolution, xi: &PiecewiseSolution) -> TransferMatrix {
    let k = zeta.k;
    let side = |s: &PiecewiseSolution, x: f64| {
        let (v, d) = s.eval(x);
        outside_amplitudes(k, x, v, d)
    };
    let (lz, lx) = (side(zeta, 0.0), side(xi, 0.0));
    let (rz, rx) = (side(zeta, 1.0), side(xi, 1.0));
    let det = lz[0] * lx[1] - lx[0] * lz[1];
    let inv = [[lx[1] / det, -lx[0] / det], [-lz[1] / det, lz[0] / det]];
    let right = [[rz[0], rx[0]], [rz[1], rx[1]]];
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = right[i][0] * inv[0][j] + right[i][1] * inv[1][j];
        }
    }
    TransferMatrix(m)
}

/// Reflection and transmission amplitudes plus the transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringData {
    pub k: f64,
    pub r_left: Complex64,
    pub r_right: Complex64,
    /// `T^l = 2iK N₊/G₊`.
    pub t: Complex64,
    /// `T^r = −2iK e^{−iK} N₋/F₋`, equal to `t` for linear media.
    pub t_right: Complex64,
    pub transfer: TransferMatrix,
    pub g_plus: Complex64,
    pub f_minus: Complex64,
}

impl ScatteringData {
    /// `|G₊| < 1e−8 K`: the amplitudes are dominated by the singular residual.
    pub fn is_near_singular(&self) -> bool {
        self.g_plus.norm() < 1e-8 * self.k
    }
}

/// Scattering amplitudes at real `K`.
///
/// Fails only when `G₊` or `F₋` vanishes outright. Close to a spectral
/// singularity the data are still returned, carrying the residuals `g_plus`
/// and `f_minus`; check [`ScatteringData::is_near_singular`].
pub fn scattering(index: BilayerIndex, k: f64) -> Result<ScatteringData> {
    let one = Complex64::new(1.0, 0.0);
    let zeta = build_zeta(index, k, one)?;
    let xi = build_xi(index, k, one)?;
    let g_plus = zeta.g_plus();
    let f_minus = xi.f_minus();
    if g_plus.norm() == 0.0 || f_minus.norm() == 0.0 || !(g_plus.is_finite() && f_minus.is_finite())
    {
        return Err(Error::DivergentAmplitudes {
            g_plus: g_plus.norm(),
            f_minus: f_minus.norm(),
        });
    }
    let r_left = -zeta.g_minus() / g_plus;
    let r_right = -(-2.0 * I * k).exp() * xi.f_plus() / f_minus;
    let t = 2.0 * I * k / g_plus;
    let t_right = -2.0 * I * k * (-I * k).exp() / f_minus;
    Ok(ScatteringData {
        k,
        r_left,
        r_right,
        t,
        t_right,
        transfer: transfer_matrix(&zeta, &xi),
        g_plus,
        f_minus,
    })
}
