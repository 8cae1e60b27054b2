use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("region is empty")]
    EmptyRegion,

    #[error("regions are too close: distance {distance} < {required}")]
    RegionsTooClose { distance: usize, required: usize },

    #[error("regions overlap")]
    OverlappingRegions,

    #[error("regions belong to different lattices")]
    LatticeMismatch,

    #[error("site {site} is out of range for a lattice of {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Bohr frequency binning is ambiguous near omega = {omega}")]
    DegenerateBinning { omega: f64 },

    #[error("NotPrimitive: null-space dimension {null_dim}, minimal stationary eigenvalue {min_eig:e}")]
    NotPrimitive { null_dim: usize, min_eig: f64 },

    #[error("reference state is singular (minimal eigenvalue {min_eig:e})")]
    SingularSigma { min_eig: f64 },

    #[error("operator is not positive definite (minimal eigenvalue {min_eig:e})")]
    NotPositive { min_eig: f64 },

    #[error("Hamiltonian must be positive definite for the thermal bound (minimal eigenvalue {min_eig:e})")]
    NonPositiveH { min_eig: f64 },

    #[error("optimization did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("NotStable: drift has an eigenvalue with real part {max_real:e} >= 0")]
    NotStable { max_real: f64 },

    #[error("blocks must have equal size, found |A| = {a} and |B| = {b}")]
    UnequalBlocks { a: usize, b: usize },

    #[error("observable support is not contained in the restriction region")]
    SupportNotContained,

    #[error("NoCrossing: deviation never exceeded {epsilon:e} at distance {distance}")]
    NoCrossing { distance: usize, epsilon: f64 },

    #[error("insufficient rows for a fit: {found} usable, {required} required")]
    InsufficientRows { found: usize, required: usize },

    #[error("dense eigensolver limit exceeded: superoperator dimension {dim} > {limit}")]
    DenseLimitExceeded { dim: usize, limit: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("model validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Model-level errors map to exit code 2, numerical failures to 3.
    pub fn is_model_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Validation(_)
                | Error::Io(_)
                | Error::Json(_)
                | Error::EmptyRegion
                | Error::SiteOutOfRange { .. }
                | Error::LatticeMismatch
                | Error::OverlappingRegions
                | Error::RegionsTooClose { .. }
                | Error::UnequalBlocks { .. }
                | Error::SupportNotContained
                | Error::ShapeMismatch(_)
                | Error::DimensionMismatch { .. }
        )
    }
}
