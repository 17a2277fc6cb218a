use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid model or balloon parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The u-radicand is non-positive everywhere: no classically allowed motion.
    #[error("no classical motion for the given constants of motion")]
    NoClassicalMotion,

    /// The radicand has several positivity intervals and no seed selects one.
    #[error("radicand has {count} allowed intervals; pass a seed inside the intended well")]
    MultipleWells { count: usize },

    /// The allowed interval reaches the poles of the balloon (|u| -> infinity).
    #[error("motion is unbounded in u (allowed interval reaches |u| = {limit})")]
    UnboundedMotion { limit: f64 },

    /// (J_v, J_psi) lies on a region boundary.
    #[error("({j_v}, {j_psi}) lies on a region boundary")]
    Boundary { j_v: f64, j_psi: f64 },

    /// The adaptive integrator could not make progress.
    #[error("integration diverged at t = {t}: {reason}")]
    Divergence { t: f64, reason: String },

    /// A quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    QuadratureNotConverged { estimate: f64, error: f64 },
}

impl Error {
    /// True for failures of the numerics or of the physics (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoClassicalMotion
                | Error::MultipleWells { .. }
                | Error::UnboundedMotion { .. }
                | Error::Divergence { .. }
                | Error::QuadratureNotConverged { .. }
        )
    }
}
