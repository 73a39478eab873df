//! Process exit codes, one per class of failure.

use rdexact::diffusivity::DiffusivityError;
use rdexact::genetics::GeneticsError;
use rdexact::model::ModelError;
use rdexact::solution::SolutionError;
use rdexact::spatial::SpatialError;
use rdexact::verify::VerifyError;

use crate::config::ConfigError;

pub const INADMISSIBLE: u8 = 2;
pub const BLOW_UP: u8 = 3;
pub const MODEL: u8 = 4;
pub const DIFFUSIVITY: u8 = 5;
pub const SPATIAL: u8 = 6;
pub const SOLUTION: u8 = 7;
pub const GENETICS: u8 = 8;
pub const VERIFY: u8 = 9;
pub const CONFIG: u8 = 10;
pub const IO: u8 = 11;
pub const CHECK_FAILED: u8 = 12;
pub const USAGE: u8 = 64;

/// A verification run completed but at least one check failed.
#[derive(Debug)]
pub struct ChecksFailed(pub usize);

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} check(s) failed", self.0)
    }
}

impl std::error::Error for ChecksFailed {}

fn model(e: &ModelError) -> u8 {
    match e {
        ModelError::NonDecayingRate { .. } | ModelError::NonPositiveAnchor { .. } => INADMISSIBLE,
        _ => MODEL,
    }
}

fn diffusivity(e: &DiffusivityError) -> u8 {
    match e {
        DiffusivityError::BlowUp { .. } => BLOW_UP,
        DiffusivityError::Inadmissible { .. } => INADMISSIBLE,
        DiffusivityError::Model(m) => model(m),
        _ => DIFFUSIVITY,
    }
}

fn solution(e: &SolutionError) -> u8 {
    match e {
        SolutionError::InadmissibleParams { .. } => INADMISSIBLE,
        SolutionError::Spatial(_) => SPATIAL,
        SolutionError::Diffusivity(d) => diffusivity(d),
        _ => SOLUTION,
    }
}

fn verify(e: &VerifyError) -> u8 {
    match e {
        VerifyError::Solution(s) => solution(s),
        VerifyError::Diffusivity(d) => diffusivity(d),
        _ => VERIFY,
    }
}

fn library(e: &rdexact::Error) -> u8 {
    match e {
        rdexact::Error::Model(e) => model(e),
        rdexact::Error::Diffusivity(e) => diffusivity(e),
        rdexact::Error::Spatial(_) => SPATIAL,
        rdexact::Error::Solution(e) => solution(e),
        rdexact::Error::Genetics(_) => GENETICS,
        rdexact::Error::Verify(e) => verify(e),
    }
}

pub fn code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ChecksFailed>().is_some() {
        CHECK_FAILED
    } else if let Some(e) = err.downcast_ref::<rdexact::Error>() {
        library(e)
    } else if let Some(e) = err.downcast_ref::<ModelError>() {
        model(e)
    } else if let Some(e) = err.downcast_ref::<DiffusivityError>() {
        diffusivity(e)
    } else if err.downcast_ref::<SpatialError>().is_some() {
        SPATIAL
    } else if let Some(e) = err.downcast_ref::<SolutionError>() {
        solution(e)
    } else if err.downcast_ref::<GeneticsError>().is_some() {
        GENETICS
    } else if let Some(e) = err.downcast_ref::<VerifyError>() {
        verify(e)
    } else if err.downcast_ref::<ConfigError>().is_some() {
        CONFIG
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        IO
    } else {
        1
    }
}
