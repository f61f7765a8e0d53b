use thiserror::Error;

/// Failures raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: argument outside domain ({detail})")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: no convergence after {terms} terms, tail estimate {tail:e}")]
    Convergence {
        op: &'static str,
        terms: usize,
        tail: f64,
    },

    #[error("angular grid too coarse: band limit {k_max} needs {needed} nodes, got {got}")]
    Aliasing {
        k_max: i64,
        needed: usize,
        got: usize,
    },

    #[error("radial grid has {0} nodes, at least 5 are required")]
    GridTooSmall(usize),

    #[error("datum carries relative mass {mass:e} beyond r = {r_max}")]
    Truncation { mass: f64, r_max: f64 },

    #[error("negative-energy sector is not available for {0}")]
    UnsupportedSector(&'static str),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}
