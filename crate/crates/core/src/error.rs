use thiserror::Error;

use crate::diffusivity::DiffusivityError;
use crate::genetics::GeneticsError;
use crate::model::ModelError;
use crate::solution::SolutionError;
use crate::spatial::SpatialError;
use crate::verify::VerifyError;

/// Any error raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Diffusivity(#[from] DiffusivityError),
    #[error(transparent)]
    Spatial(#[from] SpatialError),
    #[error(transparent)]
    Solution(#[from] SolutionError),
    #[error(transparent)]
    Genetics(#[from] GeneticsError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
