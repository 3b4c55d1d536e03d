use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ss_optics::ProfileDoc;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "ss-optics",
    version,
    about = "Lasing thresholds and Kerr emission of PT-symmetric bilayer slabs"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command. Values given here override the profile
/// file, which overrides the built-in defaults.
#[derive(Debug, Args)]
pub struct Common {
    /// Profile JSON with fields a_um, eta, kappa, sigma.
    #[arg(long, global = true)]
    pub profile: Option<PathBuf>,
    /// Output file for the command's artifact.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long, global = true)]
    pub force: bool,
    /// Override a profile field, e.g. `--set eta=2.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    #[arg(long, global = true)]
    pub eta: Option<f64>,
    #[arg(long = "a-um", global = true)]
    pub a_um: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Target wavelength in micrometers.
    #[arg(long = "lambda-um", global = true, default_value_t = 1.0)]
    pub lambda_um: f64,
    /// Write the effective profile JSON to this path.
    #[arg(long = "write-profile", global = true)]
    pub write_profile: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List lasing modes in a wavelength window.
    Modes {
        #[arg(long = "lambda-min", default_value_t = 0.999)]
        lambda_min: f64,
        #[arg(long = "lambda-max", default_value_t = 1.001)]
        lambda_max: f64,
    },
    /// Asymptotic threshold at a mode, refined by the exact solver.
    Threshold {
        /// Mode number; defaults to the mode nearest --lambda-um.
        #[arg(long)]
        m: Option<u32>,
        /// Homogeneous slab thickness for the comparison row.
        #[arg(long = "l-um")]
        l_um: Option<f64>,
    },
    /// Exact bilayer spectral singularity only.
    Exact {
        #[arg(long)]
        m: Option<u32>,
    },
    /// Threshold curve over wavelength (mode range) or refractive index.
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        /// `lo:hi`; micrometers for the lambda axis, η for the eta axis (hi excluded).
        #[arg(long)]
        range: Option<String>,
        /// Mode range `m_min:m_max` for the lambda axis.
        #[arg(long)]
        modes: Option<String>,
        /// Grid size for the eta axis.
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Slab::Bilayer)]
        slab: Slab,
        /// Homogeneous slab thickness; defaults to a/2.
        #[arg(long = "l-um")]
        l_um: Option<f64>,
        /// Skip the exact refinement of bilayer points.
        #[arg(long)]
        asymptotic: bool,
    },
    /// Emission curve above threshold and intensity coefficients per mode.
    Emission {
        #[arg(long)]
        m: Option<u32>,
        /// Gain samples `lo:hi` in cm⁻¹; defaults to `g0:2g0`.
        #[arg(long = "g-range")]
        g_range: Option<String>,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Modes `m_min:m_max[:step]` for the coefficient table.
        #[arg(long)]
        modes: Option<String>,
        /// JSON file for the coefficient table.
        #[arg(long = "coef-out")]
        coef_out: Option<PathBuf>,
    },
    /// Run the ODE and nonlinear oracles and report agreement.
    OracleCheck {
        #[arg(long)]
        m: Option<u32>,
        /// Random linear cases compared against the ODE oracle.
        #[arg(long, default_value_t = 10)]
        cases: usize,
        #[arg(long, default_value_t = 20)]
        seed: u64,
        /// Skip the nonlinear shooting oracle.
        #[arg(long = "skip-nonlinear")]
        skip_nonlinear: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    Lambda,
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Slab {
    Bilayer,
    Homogeneous,
}

fn apply(doc: &mut ProfileDoc, key: &str, value: f64) -> Result<(), CliError> {
    match key {
        "a_um" => doc.a_um = value,
        "eta" => doc.eta = value,
        "kappa" => doc.kappa = value,
        "sigma" => doc.sigma = value,
        _ => return Err(CliError::validation(format!("unknown profile key `{key}`"))),
    }
    Ok(())
}

impl Common {
    /// Defaults, then the profile file, then `--set`, then the named flags.
    pub fn resolve(&self) -> Result<ProfileDoc, CliError> {
        let mut doc = match &self.profile {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
                ProfileDoc::from_json(&text)?
            }
            None => ProfileDoc::default(),
        };
        for item in &self.overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::validation(format!("expected KEY=VALUE, got `{item}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::validation(format!("`{value}` is not a number")))?;
            apply(&mut doc, key.trim(), value)?;
        }
        for (key, value) in [
            ("a_um", self.a_um),
            ("eta", self.eta),
            ("kappa", self.kappa),
            ("sigma", self.sigma),
        ] {
            if let Some(v) = value {
                apply(&mut doc, key, v)?;
            }
        }
        doc.validate()?;
        if !(self.lambda_um > 0.0 && self.lambda_um.is_finite()) {
            return Err(CliError::validation(format!(
                "lambda must be positive, got {}",
                self.lambda_um
            )));
        }
        Ok(doc)
    }
}

/// Parses `lo:hi` or `lo:hi:step`.
pub fn parse_range(text: &str) -> Result<(f64, f64, Option<f64>), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::validation(format!("bad range `{text}`")))
    };
    match parts.as_slice() {
        [lo, hi] => Ok((num(lo)?, num(hi)?, None)),
        [lo, hi, step] => Ok((num(lo)?, num(hi)?, Some(num(step)?))),
        _ => Err(CliError::validation(format!(
            "expected lo:hi, got `{text}`"
        ))),
    }
}
