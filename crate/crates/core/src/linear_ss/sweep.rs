//! Threshold curves over a range of modes or a grid of refractive indices.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    bilayer_ss_exact, bilayer_threshold_eta1, bilayer_threshold_general, homogeneous_threshold,
    ThresholdSolution, GENERAL_REGIME_MIN_ETA,
};
use crate::error::{Error, Result};
use crate::numeric::fmt_sig;
use crate::profiles::{mode_k, nearest_mode, ModeFamily};

/// Bilayer threshold at mode `m`: the asymptotic root for η, optionally
/// refined by the exact solver.
pub fn bilayer_threshold(eta: f64, m: u32, a_um: f64, refine: bool) -> Result<ThresholdSolution> {
    let guess = if eta == 1.0 {
        bilayer_threshold_eta1(m, a_um)?
    } else {
        bilayer_threshold_general(eta, m, a_um)?
    };
    if refine {
        bilayer_ss_exact(eta, a_um, &guess)
    } else {
        Ok(guess)
    }
}

fn family(eta: f64) -> ModeFamily {
    if eta == 1.0 {
        ModeFamily::Eta1
    } else {
        ModeFamily::General
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    /// Wavelength axis: one point per mode number in `m_min..=m_max`.
    Lambda { m_min: u32, m_max: u32 },
    /// Index axis: one point per η on `grid`, each at the mode nearest `lambda_um`.
    Eta { grid: Vec<f64>, lambda_um: f64 },
}

impl SweepAxis {
    /// `n` evenly spaced η values on `[lo, hi]`.
    pub fn eta_linspace(lo: f64, hi: f64, n: usize, lambda_um: f64) -> Result<Self> {
        if !(lo < hi) || n < 2 {
            return Err(Error::Domain(format!(
                "empty eta range {lo}:{hi} with {n} points"
            )));
        }
        let grid = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        Ok(SweepAxis::Eta { grid, lambda_um })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Lambda { .. } => "lambda0",
            SweepAxis::Eta { .. } => "eta0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlabKind {
    Bilayer,
    Homogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParams {
    /// Bilayer thickness `a`. On the wavelength axis its modes also fix the
    /// wavelengths at which a homogeneous slab is evaluated.
    pub a_um: f64,
    /// Homogeneous slab thickness `L`.
    pub l_um: f64,
    /// Index used on the wavelength axis.
    pub eta: f64,
    /// Refine bilayer points with the exact solver.
    pub exact: bool,
    /// Worker cap; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            a_um: 1000.0,
            l_um: 500.0,
            eta: 1.0,
            exact: true,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub abscissa: f64,
    pub solution: Option<ThresholdSolution>,
    pub error: Option<String>,
}

impl SweepPoint {
    pub fn g0(&self) -> Option<f64> {
        self.solution.map(|s| s.g0_cm_inv)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub axis: &'static str,
    pub slab_kind: SlabKind,
    /// Sorted by strictly increasing abscissa.
    pub points: Vec<SweepPoint>,
}

impl SweepCurve {
    pub fn gaps(&self) -> usize {
        self.points.iter().filter(|p| p.solution.is_none()).count()
    }

    /// `(abscissa, g₀)` for the points that solved.
    pub fn values(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| p.g0().map(|g| (p.abscissa, g)))
            .collect()
    }

    /// CSV with header `abscissa,g0_cm_inv,kappa0,K0,residual`; failed points
    /// carry `nan` in every column after the abscissa.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "abscissa,g0_cm_inv,kappa0,K0,residual")?;
        for p in &self.points {
            let x = fmt_sig(p.abscissa, 9);
            match &p.solution {
                Some(s) => writeln!(
                    out,
                    "{x},{},{},{},{}",
                    fmt_sig(s.g0_cm_inv, 9),
                    fmt_sig(s.kappa0, 9),
                    fmt_sig(s.k0(), 9),
                    fmt_sig(s.residual.max(), 9)
                )?,
                None => writeln!(out, "{x},nan,nan,nan,nan")?,
            }
        }
        Ok(())
    }
}

struct Job {
    abscissa: f64,
    run: Box<dyn Fn() -> Result<ThresholdSolution> + Send + Sync>,
}

fn jobs(axis: &SweepAxis, kind: SlabKind, p: SweepParams) -> Result<Vec<Job>> {
    let mut out = Vec::new();
    match axis {
        SweepAxis::Lambda { m_min, m_max } => {
            if m_min > m_max {
                return Err(Error::Domain(format!("empty mode range {m_min}..={m_max}")));
            }
            let eta = p.eta;
            for m in *m_min..=*m_max {
                let lambda = 2.0 * std::f64::consts::PI * p.a_um / mode_k(family(eta), eta, m);
                let run: Box<dyn Fn() -> Result<ThresholdSolution> + Send + Sync> = match kind {
                    SlabKind::Bilayer => {
                        Box::new(move || bilayer_threshold(eta, m, p.a_um, p.exact))
                    }
                    SlabKind::Homogeneous => {
                        Box::new(move || homogeneous_threshold(eta, p.l_um, lambda))
                    }
                };
                out.push(Job {
                    abscissa: lambda,
                    run,
                });
            }
        }
        SweepAxis::Eta { grid, lambda_um } => {
            if grid.is_empty() {
                return Err(Error::Domain("empty eta grid".into()));
            }
            let lambda = *lambda_um;
            for &eta in grid {
                if !(eta >= 1.0) {
                    return Err(Error::Domain(format!("eta must be at least 1, got {eta}")));
                }
                let run: Box<dyn Fn() -> Result<ThresholdSolution> + Send + Sync> = match kind {
                    SlabKind::Bilayer => {
                        if eta != 1.0 && eta < GENERAL_REGIME_MIN_ETA && !p.exact {
                            return Err(Error::RegimeViolation { eta });
                        }
                        Box::new(move || {
                            let m = nearest_mode(family(eta), p.a_um, eta, lambda)?;
                            bilayer_threshold(eta, m, p.a_um, p.exact)
                        })
                    }
                    SlabKind::Homogeneous => {
                        Box::new(move || homogeneous_threshold(eta, p.l_um, lambda))
                    }
                };
                out.push(Job { abscissa: eta, run });
            }
        }
    }
    out.sort_by(|a, b| a.abscissa.total_cmp(&b.abscissa));
    if out.windows(2).any(|w| !(w[0].abscissa < w[1].abscissa)) {
        return Err(Error::Domain("sweep abscissae must be distinct".into()));
    }
    Ok(out)
}

/// Evaluates every grid point independently (in parallel) and assembles the
/// curve in abscissa order. Per-point failures become gaps.
pub fn sweep(axis: &SweepAxis, slab_kind: SlabKind, params: SweepParams) -> Result<SweepCurve> {
    if !(params.a_um > 0.0 && params.l_um > 0.0) {
        return Err(Error::Domain("thicknesses must be positive".into()));
    }
    let jobs = jobs(axis, slab_kind, params)?;
    let eval = || -> Vec<SweepPoint> {
        jobs.par_iter()
            .map(|job| match (job.run)() {
                Ok(s) => SweepPoint {
                    abscissa: job.abscissa,
                    solution: Some(s),
                    error: None,
                },
                Err(e) => SweepPoint {
                    abscissa: job.abscissa,
                    solution: None,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    };
    let points = match params.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Domain(e.to_string()))?
            .install(eval),
        None => eval(),
    };
    Ok(SweepCurve {
        axis: axis.name(),
        slab_kind,
        points,
    })
}
