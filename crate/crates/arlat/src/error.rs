use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision error: {0}")]
    Precision(String),
    #[error("prime {p} divides the polynomial discriminant; the monogenic order may be non-maximal there")]
    NonMaximalOrder { p: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inadmissible lattice spec: {0}")]
    Inadmissible(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
