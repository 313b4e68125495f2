use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("operator and state do not match: {0}")]
    Mismatch(String),

    #[error("point is off the mass shell (residual {residual:e})")]
    OffShell { residual: f64 },

    #[error("point is not on the cone (residual {residual:e})")]
    OffCone { residual: f64 },

    #[error("point touches the boundary of the cone: {0}")]
    Boundary(String),

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),

    #[error("map is not a radial diffeomorphism onto the full cone: {0}")]
    NotRadial(String),

    #[error("factorization failed: {0}")]
    FactorizationFailed(String),

    #[error("scale is undefined: {0}")]
    UndefinedScale(String),

    #[error("image leaves the representable domain: {0}")]
    Truncated(String),

    #[error("finite-difference estimate is not converged: {0}")]
    Accuracy(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
