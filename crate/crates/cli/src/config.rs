//! Run configuration: command-line flags layered over an optional JSON file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use rdexact::diffusivity::SolveOptions;
use rdexact::model::{
    anchors_from_rate, consistency_constants, Anchors, ReactionKind, ReactionModel,
};
use rdexact::spatial::Dimension;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config file {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Fisher,
    Huxley,
    Fhn,
}

impl From<ModelArg> for ReactionKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Fisher => ReactionKind::Fisher,
            ModelArg::Huxley => ReactionKind::Huxley,
            ModelArg::Fhn => ReactionKind::FitzhughNagumo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Flags shared by every subcommand. Each one overrides the same key in the
/// `--config` file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON file with any of the keys below (flags win)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelArg>,
    /// Growth rate s
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Threshold density of the Fitzhugh-Nagumo term
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    /// Helmholtz wavenumber, kappa = K^2
    #[arg(long = "K", global = true, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Temporal decay rate (exclusive with --D0)
    #[arg(long = "A", global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Diffusivity at zero density (exclusive with --A)
    #[arg(long = "D0", global = true, allow_hyphen_values = true)]
    pub d0: Option<f64>,
    #[arg(long, global = true)]
    pub theta_max: Option<f64>,
    /// Number of theta grid points of the diffusivity profile
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Relative tolerance of the profile integrator
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output directory (or report file for JSON-only commands)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Spatial dimension N (1, 2 or 3)
    #[arg(long, global = true)]
    pub dim: Option<u8>,
}

/// The file form of [`CommonArgs`].
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<ModelArg>,
    s: Option<f64>,
    theta1: Option<f64>,
    #[serde(rename = "K")]
    k: Option<f64>,
    #[serde(rename = "A")]
    a: Option<f64>,
    #[serde(rename = "D0")]
    d0: Option<f64>,
    theta_max: Option<f64>,
    grid: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    dim: Option<u8>,
}

impl CommonArgs {
    /// Flags layered over the config file, if one was given.
    pub fn merged(&self) -> Result<CommonArgs, ConfigError> {
        let Some(path) = &self.config else {
            return Ok(self.clone());
        };
        let file = load(path)?;
        Ok(CommonArgs {
            config: None,
            model: self.model.or(file.model),
            s: self.s.or(file.s),
            theta1: self.theta1.or(file.theta1),
            k: self.k.or(file.k),
            a: self.a.or(file.a),
            d0: self.d0.or(file.d0),
            theta_max: self.theta_max.or(file.theta_max),
            grid: self.grid.or(file.grid),
            tol: self.tol.or(file.tol),
            out: self.out.clone().or(file.out),
            format: self.format.or(file.format),
            dim: self.dim.or(file.dim),
        })
    }
}

fn load(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// A fully resolved configuration for one reaction model.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ReactionModel,
    pub anchors: Anchors,
    pub solve: SolveOptions,
    pub out: PathBuf,
    pub format: Format,
    pub dim: Dimension,
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> anyhow::Result<Self> {
        let kind: ReactionKind = args
            .model
            .ok_or_else(|| ConfigError::Invalid("--model is required".into()))?
            .into();
        let s = args.s.unwrap_or(match kind {
            ReactionKind::FitzhughNagumo => 0.5,
            _ => 1.0,
        });
        let model = ReactionModel::new(kind, s, args.theta1.unwrap_or(-1.0))?;
        let k = args.k.unwrap_or(1.0);
        let anchors = match (args.a, args.d0) {
            (Some(a), None) => anchors_from_rate(&model, k, a)?,
            (None, Some(d0)) => consistency_constants(&model, k, d0)?,
            _ => {
                return Err(
                    ConfigError::Invalid("exactly one of --A and --D0 is required".into()).into(),
                )
            }
        };
        let mut solve = SolveOptions::for_kind(kind);
        if let Some(theta_max) = args.theta_max {
            solve.theta_max = theta_max;
        }
        if let Some(grid) = args.grid {
            solve.grid_points = grid;
        }
        let tol = args.tol.unwrap_or(solve.rtol);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(ConfigError::Invalid(format!("--tol must be positive, got {tol}")).into());
        }
        let dim = Dimension::try_from(args.dim.unwrap_or(2))?;
        Ok(Self {
            model,
            anchors,
            solve: solve.with_tol(tol),
            out: args.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            format: args.format.unwrap_or_default(),
            dim,
        })
    }
}
