use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("matrix is not Hermitian at entry ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("state is not positive semidefinite: {0}")]
    NotPsd(String),
    #[error("negative diagonal entry at index {0}")]
    NegativeDiagonal(usize),
    #[error("cannot parse cone expression {expr:?}: {reason}")]
    ConeParse { expr: String, reason: String },
    #[error("expression {0:?} does not name a cone of the lattice")]
    UnknownCone(String),
    #[error("cannot parse inequality {0:?}")]
    IneqParse(String),
    #[error("polyhedron is not pointed; lineality direction {0:?}")]
    NotPointed(Vec<i64>),
    #[error("integer overflow during ray enumeration")]
    Overflow,
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
