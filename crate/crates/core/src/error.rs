//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::dsl::DslError;

/// Everything that can go wrong while building a state or evaluating its
/// phase properties.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("nonlinearity function vanishes at n = {n}")]
    ZeroNonlinearity { n: u64 },

    #[error("spectrum value e_{n} = {value} is not positive")]
    NonpositiveSpectrum { n: u64, value: f64 },

    #[error("spectrum value e_{n} = {value} is negative")]
    NegativeSpectrum { n: u64, value: f64 },

    #[error("spectrum ground level e_0 = {value} is not zero")]
    SpectrumGroundNotZero { value: f64 },

    #[error("evaluator returned a non-finite value at n = {n}")]
    NonFinite { n: u64 },

    #[error("series term exceeds the representable range at n = {n}")]
    Overflow { n: u64 },

    #[error("normalization series did not converge within {n_cap} terms at |z| = {z_mag}")]
    NotConverged { z_mag: f64, n_cap: usize },

    #[error("|z| = {z_mag} is outside the convergence disk of radius {radius}")]
    DomainExceeded { z_mag: f64, radius: f64 },

    #[error("invalid parameter {name} = {value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Expression(#[from] DslError),
}

impl Error {
    /// Stable name of the error variant, used for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroNonlinearity { .. } => "ZeroNonlinearity",
            Error::NonpositiveSpectrum { .. } => "NonpositiveSpectrum",
            Error::NegativeSpectrum { .. } => "NegativeSpectrum",
            Error::SpectrumGroundNotZero { .. } => "SpectrumGroundNotZero",
            Error::NonFinite { .. } => "NonFinite",
            Error::Overflow { .. } => "Overflow",
            Error::NotConverged { .. } => "NotConverged",
            Error::DomainExceeded { .. } => "DomainExceeded",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Expression(e) => e.name(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
