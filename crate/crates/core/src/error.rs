use thiserror::Error;

/// Errors produced anywhere in the spectrum pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("Hamiltonian is not definite: {0}")]
    NotDefinite(String),
    #[error("invalid number of Lanczos steps: {0}")]
    InvalidSteps(usize),
    #[error("starting vector is zero")]
    ZeroStartVector,
    #[error("operation requires a real-valued Hamiltonian")]
    NotRealField,
    #[error("inner product became indefinite at step {step} (radicand {radicand:e})")]
    IndefiniteInnerProduct { step: usize, radicand: f64 },
    #[error("Lanczos basis was not retained")]
    BasisNotRetained,
    #[error("at least {required} Lanczos steps are required, got {got}")]
    InsufficientSteps { required: usize, got: usize },
    #[error("Lanczos run broke down at step {0}; the Gauss rule is already exact")]
    BreakdownExact(usize),
    #[error("tridiagonal eigensolver did not converge for eigenvalue {0}")]
    ConvergenceFailure(usize),
    #[error("{0} nonpositive quadrature nodes, at most one is admissible")]
    MultipleNonpositiveNodes(usize),
    #[error("GMG Lanczos requires an even step count, got {0}")]
    OddStepCount(usize),
    #[error("projected matrix is numerically singular")]
    SingularProjection,
    #[error("C-neutral vector met at step {0}")]
    NeutralVectorBreakdown(usize),
    #[error("2x2 Gram block is not positive definite at step {0}")]
    GramFactorizationFailure(usize),
    #[error("curve has zero norm on the sampling grid")]
    ZeroNormCurve,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::StructureViolation(_) => "StructureViolation",
            Error::NotDefinite(_) => "NotDefinite",
            Error::InvalidSteps(_) => "InvalidSteps",
            Error::ZeroStartVector => "ZeroStartVector",
            Error::NotRealField => "NotRealField",
            Error::IndefiniteInnerProduct { .. } => "IndefiniteInnerProduct",
            Error::BasisNotRetained => "BasisNotRetained",
            Error::InsufficientSteps { .. } => "InsufficientSteps",
            Error::BreakdownExact(_) => "BreakdownExact",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::MultipleNonpositiveNodes(_) => "MultipleNonpositiveNodes",
            Error::OddStepCount(_) => "OddStepCount",
            Error::SingularProjection => "SingularProjection",
            Error::NeutralVectorBreakdown(_) => "NeutralVectorBreakdown",
            Error::GramFactorizationFailure(_) => "GramFactorizationFailure",
            Error::ZeroNormCurve => "ZeroNormCurve",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
        }
    }
}
