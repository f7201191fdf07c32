use thiserror::Error;

use crate::exactalg::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("the curves share a common component")]
    CommonComponent,
    #[error("curve is not reduced (squarefree)")]
    NotSquarefree,
    #[error("point is not unibranched: {0}")]
    NotUnibranched(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl GeomError {
    pub fn is_budget(&self) -> bool {
        matches!(self, GeomError::Algebra(AlgebraError::BudgetExceeded(_)))
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, GeomError::Internal(_))
    }
}

pub type GeomResult<T> = Result<T, GeomError>;
