use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice enumeration would visit {0} points, above the budget")]
    BudgetExceeded(u128),
    #[error("start point is rejected by the membership oracle")]
    NotInBody,
    #[error("no rejection found along the chord within radius {0}")]
    Unbounded(f64),
    #[error("isotropic rounding did not terminate after {0} iterations")]
    IterationLimit(usize),
    #[error("perturb-round-reject failed {0} times in a row")]
    RejectionBudgetExceeded(usize),
    #[error("sampler failure: {0}")]
    SamplerFailure(String),
    #[error("constraint of degree {needed} exceeds basis degree {max}")]
    DegreeOverflow { needed: usize, max: usize },
    #[error("ellipsoid search hit its iteration cap of {0}")]
    IterationCap(usize),
    #[error("covariance matrix is not positive semidefinite")]
    NotPsd,
    #[error("operator does not satisfy the required constraints: {0}")]
    ConstraintUnverified(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag for error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::NotInBody => "not_in_body",
            Error::Unbounded(_) => "unbounded",
            Error::IterationLimit(_) => "iteration_limit",
            Error::RejectionBudgetExceeded(_) => "rejection_budget_exceeded",
            Error::SamplerFailure(_) => "sampler_failure",
            Error::DegreeOverflow { .. } => "degree_overflow",
            Error::IterationCap(_) => "iteration_cap",
            Error::NotPsd => "not_psd",
            Error::ConstraintUnverified(_) => "constraint_unverified",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
