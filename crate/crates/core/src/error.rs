use thiserror::Error;

use crate::category::Violation;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("not a category: {} violation(s), first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("functors are not parallel")]
    NotParallel,
    #[error("marking is not on the given category")]
    ForeignMarking,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("ill-formed presentation: {0}")]
    IllFormed(String),
    #[error("closure did not stabilize within {limit} morphisms (category may be infinite)")]
    BudgetExceeded { limit: usize },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CorrespondenceError {
    #[error("degree map is not functorial at morphism {0}")]
    NotFunctorial(String),
    #[error("morphism {0} does not go between consecutive degrees")]
    BadDegrees(String),
    #[error("expected a base of length {expected}, found {found}")]
    BadBase { expected: usize, found: usize },
    #[error("boundary fibers do not agree")]
    BoundaryMismatch,
    #[error("correspondence is not cocartesian: object {object} has no cocartesian lift to degree {level}")]
    NotCocartesian { object: String, level: usize },
    #[error("correspondence is not cartesian: object {object} has no cartesian lift from degree {level}")]
    NotCartesian { object: String, level: usize },
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("internal contradiction: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LocalizationError {
    #[error("marking does not satisfy a calculus of fractions")]
    NoFractions,
    #[error("marked morphism {0} crosses fibers")]
    NotFiberSupported(String),
    #[error("zig-zag closure did not converge at depth {depth}")]
    NotConverged { depth: usize },
    #[error("functor does not invert marked morphism {0}")]
    NotInverting(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DerivedError {
    #[error("result not certified: {0}")]
    NotCertified(String),
    #[error("functor does not carry {0} into the target marking")]
    NotPreserving(String),
    #[error("derived functor missing: {0}")]
    DerivedMissing(String),
    #[error("not an adjoint pair")]
    NotAdjoint,
    #[error("hypothesis {0} of the resolution criterion failed")]
    BulletFailed(u8),
    #[error("family hypothesis failed at {0}")]
    HypothesisFailed(String),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
    #[error(transparent)]
    Localization(LocalizationError),
}

impl From<LocalizationError> for DerivedError {
    fn from(e: LocalizationError) -> Self {
        match e {
            LocalizationError::NotConverged { depth } => {
                DerivedError::NotCertified(format!("zig-zag localization did not converge at depth {depth}"))
            }
            other => DerivedError::Localization(other),
        }
    }
}
