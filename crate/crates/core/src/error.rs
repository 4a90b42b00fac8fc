use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    #[error("thermal length is infinite at temperature {0}; use the zero-temperature path")]
    InfiniteThermalLength(f64),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("unsupported geometry case: {0}")]
    UnsupportedCase(String),

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("mode spectra cannot be paired: {0}")]
    Pairing(String),

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("csv output failed: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, CasimirError>;

impl From<csv::Error> for CasimirError {
    fn from(e: csv::Error) -> Self {
        CasimirError::Csv(e.to_string())
    }
}

impl From<std::io::Error> for CasimirError {
    fn from(e: std::io::Error) -> Self {
        CasimirError::Csv(e.to_string())
    }
}
