use thiserror::Error;

/// Errors raised by the chain, solver and scan routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),

    #[error("{n_sites} sites exceed the dense solver cap of {max_sites} sites (2^N <= 4096)")]
    Capacity { n_sites: usize, max_sites: usize },

    #[error(
        "ground space is degenerate (gap {gap:.3e} at b_z = {b_z}); \
         add a Zeeman tie-break field b_z > 0 to lift it"
    )]
    DegenerateGround { gap: f64, b_z: f64 },

    #[error("gamma = -1 is the level crossing; choose gamma < -1 or gamma > -1")]
    BranchAmbiguity,

    #[error("maximal overlap is zero, entanglement would be infinite")]
    InfiniteEntanglement,

    #[error("polynomial fit failed: {0}")]
    Fit(String),

    #[error("curves do not cross on [{lo}, {hi}]")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("no adjacent pair changes e_log2 by more than {threshold}")]
    NoJump { threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
