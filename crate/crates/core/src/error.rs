use alloc::string::String;

/// Errors produced by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A point or parameter lies outside the region where a formula is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A constructor precondition was violated; the message names the bound.
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    /// Malformed or inconsistent sampled input (empty, unordered, non-finite).
    #[error("invalid input: {0}")]
    Input(String),
    /// Operation not defined for the requested case (e.g. p = 2 scaling).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The nonlinear solve failed even after the Picard fallback.
    #[error("solver failure at t = {t}: {message}")]
    Solver { t: f64, message: String },
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! inadmissible {
    ($($arg:tt)*) => { $crate::Error::Inadmissible(alloc::format!($($arg)*)) };
}
macro_rules! bad_input {
    ($($arg:tt)*) => { $crate::Error::Input(alloc::format!($($arg)*)) };
}
pub(crate) use {bad_input, domain, inadmissible};
