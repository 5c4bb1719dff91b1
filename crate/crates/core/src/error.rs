use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("bad character label `{0}`")]
    Label(String),
    #[error("{0} is not an admissible fundamental discriminant")]
    NotFundamental(i64),
    #[error("character mod {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("parity violation: psi(-1)*rho(-1) = {product} but (-1)^k = {expected} for k = {k}")]
    Parity { k: i64, product: i64, expected: i64 },
    #[error("L(s, chi) has a pole at s = 1 for trivial chi")]
    Pole,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("outside absolute convergence: k + 2s = {0} must exceed 2")]
    Convergence(String),
    #[error("truncation too short: n_max = {have}, need at least {required}")]
    Truncation { have: usize, required: usize },
    #[error("not an element of Gamma0({level}): {reason}")]
    GroupElement { level: u64, reason: String },
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
