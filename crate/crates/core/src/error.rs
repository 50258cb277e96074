//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by geometry, grid construction, solvers and checks.
///
/// `Precondition` is deliberately distinct from a failed check: a failed
/// check means the inequality under test does not hold, while a violated
/// precondition means the check was not applicable to the supplied data
/// (callers map the two to different exit codes).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate bounding box: {0}")]
    DegenerateBbox(String),

    #[error("profile evaluated outside its validity interval: s = {s}, valid on [{lo}, {hi}]")]
    ProfileRange { s: f64, lo: f64, hi: f64 },

    #[error("arclength inverse: target {v} is outside the reachable range")]
    ArclengthRange { v: f64 },

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("domain mask is disconnected: {unreached} inside nodes unreachable from the anchor")]
    DisconnectedDomain { unreached: usize },

    #[error("contact loop residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    LoopResidual { residual: f64, threshold: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ball of radius {radius} around {center:?} exceeds the grid bounding box")]
    BallExceedsBbox { radius: f64, center: Vec<f64> },

    #[error("linear system is numerically singular at pivot {0}")]
    SingularSystem(usize),

    #[error("linear solver stalled: residual {residual:.3e} after {iterations} iterations")]
    LinearStall { residual: f64, iterations: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that signal misuse of a check rather than a numerical
    /// failure (bad orderings, nonpositive fields, out-of-range radii).
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_))
    }
}
