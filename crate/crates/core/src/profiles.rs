//! Slab geometry, bilayer refractive index, Kerr strength and lasing modes.
//!
//! Lengths are carried in micrometers throughout. Gain coefficients are
//! reported in cm⁻¹. The scaled coordinate `x` runs over `[0, 1]` across
//! the slab; the gain layer (κ < 0) occupies `0 < x < layer_split`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Micrometers per centimeter.
pub const UM_PER_CM: f64 = 1e4;

/// Slab thickness and the point where the index switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabGeometry {
    thickness_um: f64,
    layer_split: f64,
}

impl SlabGeometry {
    pub fn new(thickness_um: f64, layer_split: f64) -> Result<Self> {
        if !(thickness_um > 0.0 && thickness_um.is_finite()) {
            return Err(Error::Domain(format!(
                "thickness must be positive, got {thickness_um}"
            )));
        }
        if !(layer_split > 0.0 && layer_split < 1.0) {
            return Err(Error::Domain(format!(
                "layer split must lie in (0, 1), got {layer_split}"
            )));
        }
        Ok(Self {
            thickness_um,
            layer_split,
        })
    }

    /// A PT bilayer of total thickness `a`, split at the midpoint.
    pub fn bilayer(thickness_um: f64) -> Result<Self> {
        Self::new(thickness_um, 0.5)
    }

    pub fn thickness_um(&self) -> f64 {
        self.thickness_um
    }

    pub fn layer_split(&self) -> f64 {
        self.layer_split
    }

    /// Scaled coordinate of a physical position `X` (slab centered at 0).
    pub fn scaled(&self, position_um: f64) -> f64 {
        position_um / self.thickness_um + 0.5
    }
}

/// Complex index `η + iκ` on the first layer and its conjugate on the second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilayerIndex {
    pub eta: f64,
    pub kappa: f64,
}

impl BilayerIndex {
    pub fn new(eta: f64, kappa: f64) -> Result<Self> {
        if !(1.0..4.0).contains(&eta) {
            return Err(Error::Domain(format!(
                "eta must satisfy 1 <= eta < 4, got {eta}"
            )));
        }
        if !(kappa.abs() < 1.0) {
            return Err(Error::Domain(format!("|kappa| must be small, got {kappa}")));
        }
        Ok(Self { eta, kappa })
    }

    /// Real-index slab (no gain or loss).
    pub fn lossless(eta: f64) -> Result<Self> {
        Self::new(eta, 0.0)
    }

    /// The left-layer index 𝔷 = η + iκ.
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.eta, self.kappa)
    }

    /// Index at scaled position `x`, split at the midpoint.
    pub fn at(&self, x: f64) -> Complex64 {
        if x <= 0.5 {
            self.z()
        } else {
            self.z().conj()
        }
    }

    /// The mirrored configuration with gain and loss layers swapped.
    pub fn mirrored(&self) -> Self {
        Self {
            eta: self.eta,
            kappa: -self.kappa,
        }
    }

    /// α = κ/η.
    pub fn alpha(&self) -> f64 {
        self.kappa / self.eta
    }

    /// β = (|𝔷|² − 1)/(|𝔷|² + 1).
    pub fn beta(&self) -> f64 {
        let n2 = self.eta * self.eta + self.kappa * self.kappa;
        (n2 - 1.0) / (n2 + 1.0)
    }
}

/// Kerr coefficient σ of `n² → n² + σ|ψ|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrMedium {
    pub sigma: f64,
}

impl KerrMedium {
    /// Dimensionless strength γ = −σK².
    pub fn gamma(&self, k: f64) -> f64 {
        -self.sigma * k * k
    }

    /// Whether `|γ| ≪ K²` holds with margin `ratio`.
    pub fn is_weak(&self, ratio: f64) -> bool {
        self.sigma.abs() < ratio
    }
}

/// A lasing mode: mode number, scaled wavenumber `K₀ = a k₀` and wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub m: u32,
    pub k0: f64,
    pub lambda0_um: f64,
}

impl Mode {
    pub fn from_k(m: u32, k0: f64, thickness_um: f64) -> Self {
        Self {
            m,
            k0,
            lambda0_um: 2.0 * PI * thickness_um / k0,
        }
    }
}

/// Which closed-form mode condition to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeFamily {
    /// η = 1: `K₀ = (2m+1)π`.
    Eta1,
    /// η − 1 ≫ |κ|: `K₀ ≈ (2m+1/2)π/η`.
    General,
}

/// Scaled wavenumber of mode `m` for the given family.
pub fn mode_k(family: ModeFamily, eta: f64, m: u32) -> f64 {
    let m = m as f64;
    match family {
        ModeFamily::Eta1 => (2.0 * m + 1.0) * PI,
        ModeFamily::General => (2.0 * m + 0.5) * PI / eta,
    }
}

/// Mode number whose wavelength lies closest to `lambda_um`.
pub fn nearest_mode(family: ModeFamily, a_um: f64, eta: f64, lambda_um: f64) -> Result<u32> {
    if !(a_um > 0.0 && lambda_um > 0.0) {
        return Err(Error::Domain(
            "thickness and wavelength must be positive".into(),
        ));
    }
    let m = match family {
        ModeFamily::Eta1 => a_um / lambda_um - 0.5,
        ModeFamily::General => eta * a_um / lambda_um - 0.25,
    };
    Ok(m.round().max(0.0) as u32)
}

/// Gain coefficient `g = −2Kκ/a` in cm⁻¹ for `a` in micrometers.
pub fn gain_from_kappa(kappa: f64, k: f64, a_um: f64) -> Result<f64> {
    if !(a_um > 0.0) || !(k > 0.0) {
        return Err(Error::Domain(format!(
            "need a > 0 and K > 0, got a = {a_um}, K = {k}"
        )));
    }
    Ok(-2.0 * k * kappa / a_um * UM_PER_CM)
}

/// Inverse of [`gain_from_kappa`]: `κ = −a g / 2K`.
pub fn kappa_from_gain(g_cm_inv: f64, k: f64, a_um: f64) -> Result<f64> {
    if !(a_um > 0.0) || !(k > 0.0) {
        return Err(Error::Domain(format!(
            "need a > 0 and K > 0, got a = {a_um}, K = {k}"
        )));
    }
    Ok(-a_um * g_cm_inv / UM_PER_CM / (2.0 * k))
}

/// All modes of `family` whose wavelength falls in `[lambda_min, lambda_max]`.
pub fn mode_window(
    a_um: f64,
    eta: f64,
    lambda_min_um: f64,
    lambda_max_um: f64,
    family: ModeFamily,
) -> Result<Vec<Mode>> {
    if !(a_um > 0.0) {
        return Err(Error::Domain(format!(
            "thickness must be positive, got {a_um}"
        )));
    }
    if !(lambda_min_um > 0.0 && lambda_min_um < lambda_max_um) {
        return Err(Error::Domain(format!(
            "need 0 < lambda_min < lambda_max, got [{lambda_min_um}, {lambda_max_um}]"
        )));
    }
    let offset = match family {
        ModeFamily::Eta1 => 0.5,
        ModeFamily::General => 0.25,
    };
    let scale = match family {
        ModeFamily::Eta1 => a_um,
        ModeFamily::General => eta * a_um,
    };
    // λ decreases with m, so the window maps onto [m_lo, m_hi]
    let m_lo = (scale / lambda_max_um - offset).ceil().max(0.0) as u32;
    let m_hi = (scale / lambda_min_um - offset).floor();
    if m_hi < 0.0 {
        return Ok(Vec::new());
    }
    let m_hi = m_hi as u32;
    let modes = (m_lo.saturating_sub(1)..=m_hi + 1)
        .map(|m| Mode::from_k(m, mode_k(family, eta, m), a_um))
        .filter(|mode| mode.lambda0_um >= lambda_min_um && mode.lambda0_um <= lambda_max_um)
        .collect();
    Ok(modes)
}

/// The on-disk profile document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub a_um: f64,
    pub eta: f64,
    pub kappa: f64,
    pub sigma: f64,
}

impl Default for ProfileDoc {
    fn default() -> Self {
        Self {
            a_um: 1000.0,
            eta: 3.0,
            kappa: 0.0,
            sigma: 0.0,
        }
    }
}

impl ProfileDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProfileDoc =
            serde_json::from_str(text).map_err(|e| Error::Domain(format!("profile JSON: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry()?;
        self.index()?;
        if !self.sigma.is_finite() {
            return Err(Error::Domain("sigma must be finite".into()));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<SlabGeometry> {
        SlabGeometry::bilayer(self.a_um)
    }

    pub fn index(&self) -> Result<BilayerIndex> {
        BilayerIndex::new(self.eta, self.kappa)
    }

    pub fn kerr(&self) -> KerrMedium {
        KerrMedium { sigma: self.sigma }
    }
}
