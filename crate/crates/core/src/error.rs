use thiserror::Error;

use crate::padic::Ball;
use crate::ratfunc::DenFactor;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("angular component undefined at zero")]
    AngularAtZero,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("center coordinate {0} is not in Z[1/p]")]
    NotInZp(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid character: {0}")]
    BadCharacter(String),
    #[error("resolution too coarse for ball {0}")]
    ResolutionTooCoarse(Ball),
    #[error("invalid resolution: {0}")]
    BadResolution(String),
    #[error("pole hit: factor {0} vanishes at the evaluation point")]
    PoleHit(DenFactor),
    #[error("exact expansion requires rational β")]
    IrrationalBeta,
    #[error("zeta of zero polynomial")]
    ZeroPolynomial,
    #[error("oracle valid only in the convergence half-plane")]
    OutsideConvergence,
    #[error("Re(β) must be positive")]
    NonPositiveBeta,
    #[error("zeta function not certified on {} ball(s), first {}", .0.len(), .0.first().map(|b| b.to_string()).unwrap_or_default())]
    Uncertified(Vec<Ball>),
    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
