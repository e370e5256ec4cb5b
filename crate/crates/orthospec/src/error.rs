use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("singular Gram matrix")]
    SingularGram,
    #[error("Gram matrix is not symmetric with even diagonal")]
    NotEvenIntegral,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is isotropic")]
    IsotropicXi,
    #[error("vector is not in the dual lattice")]
    NotInDual,
    #[error("need at least {min}, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error("invalid dihedral index {nu} for p = {p}")]
    InvalidNu { p: u64, nu: u64 },
    #[error("element is not 2-torsion")]
    NotTwoTorsion,
    #[error("unsupported anisotropic dimension {0}")]
    UnsupportedN0(usize),
    #[error("pole of the Euler factor at eigenvalue {0}")]
    PoleHit(Complex64),
    #[error("quadratic character must {0}")]
    BadParity(&'static str),
    #[error("Satake point is not tempered")]
    NotTempered,
    #[error("grid too coarse: N and 2N differ by {0:e}")]
    GridTooCoarse(f64),
    #[error("Plancherel normalization has not been set")]
    UnsetNormalization,
    #[error("argument outside the domain: {0}")]
    OutOfDomain(String),
    #[error("missing derivative value for even m")]
    MissingDerivative,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("integral did not converge: {0}")]
    NonConvergent(String),
    #[error("bound violated at {0}")]
    BoundViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
