use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Laguerre upper index {0} (must exceed -1)")]
    InvalidIndex(f64),
    #[error("argument {0} outside the domain of {1}")]
    Domain(f64, &'static str),
    #[error("quadrature did not converge on [{a}, {b}]: estimated error {estimate:.3e} > tolerance {tol:.3e}")]
    NoConvergence { a: f64, b: f64, estimate: f64, tol: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("state n={n} is not bound (only {count} bound states exist)")]
    NoBoundState { n: usize, count: usize },
    #[error("x = {0} lies outside the composition domain")]
    OutOfDomain(f64),
    #[error("composition domain error: {0}")]
    Composition(String),
    #[error("potential is singular at interior node x = {0}")]
    SingularPotential(f64),
    #[error("non-positive mass {mass} at half-node x = {x}")]
    NonPositiveMass { x: f64, mass: f64 },
    #[error("requested {k} eigenpairs from a matrix of dimension {dim}")]
    EigenCount { k: usize, dim: usize },
    #[error("eigensolver failed to converge: {0}")]
    EigenConvergence(String),
    #[error("length mismatch: expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("grid needs at least {needed} points, got {got}")]
    InvalidGrid { needed: usize, got: usize },
    #[error("convergence study needs at least {needed} resolutions, got {got}")]
    InsufficientResolutions { needed: usize, got: usize },
    #[error("unknown mass profile specification: {0}")]
    ProfileSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
