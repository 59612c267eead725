//! Deformation (differentiate and eliminate `w`) and its inverse.

mod deform;
mod linalg;
mod undeform;

pub use deform::{deform, deform_coefficients, deform_iter, DeformResult, NewApparent};
pub use linalg::nullspace;
pub use undeform::{undeform, Target, UndeformResult};

use crate::ode::OdeError;
use crate::polyrat::{BigRat, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("P_n is identically zero: the equation does not contain w and is already a derivative")]
    AlreadyIntegrated,
    #[error("stage {stage}: {source}")]
    AtStage {
        stage: usize,
        #[source]
        source: Box<TransformError>,
    },
    #[error("no apparent singular points found and none supplied")]
    NothingToRemove,
    #[error("no antecedent equation exists for the given apparent points: {0}")]
    NotRemovable(String),
    #[error("multiplicity of the factor at {0} must be supplied for equations of order above 2")]
    MultiplicityRequired(BigRat),
    #[error("undeform needs an equation of order at least 2, got {0}")]
    OrderTooLow(usize),
    #[error(transparent)]
    Ode(#[from] OdeError),
}

impl From<PolyError> for TransformError {
    fn from(e: PolyError) -> Self {
        TransformError::Ode(OdeError::Poly(e))
    }
}

impl TransformError {
    pub fn code(&self) -> &'static str {
        match self {
            TransformError::AlreadyIntegrated => "AlreadyIntegrated",
            TransformError::AtStage { source, .. } => source.code(),
            TransformError::NothingToRemove => "NothingToRemove",
            TransformError::NotRemovable(_) => "NotRemovable",
            TransformError::MultiplicityRequired(_) => "MultiplicityRequired",
            TransformError::OrderTooLow(_) => "OrderTooLow",
            TransformError::Ode(e) => e.code(),
        }
    }
}
