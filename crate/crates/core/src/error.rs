use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error in {func}: {arg} = {value}")]
    Domain {
        func: &'static str,
        arg: &'static str,
        value: f64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{what} did not converge after {iterations} iterations (bracket width {width:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        width: f64,
    },

    /// The brute-force truncation box is larger than the configured cap.
    #[error("truncation box has {cells} cells, cap is {cap}")]
    Resource { cells: u128, cap: u128 },
}

impl Error {
    pub(crate) fn domain(func: &'static str, arg: &'static str, value: f64) -> Self {
        Error::Domain { func, arg, value }
    }
}
