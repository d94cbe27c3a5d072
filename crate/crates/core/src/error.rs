use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no equal-split crossing of |R| and |T| found in (0, {search_limit}]")]
    NoCrossing { search_limit: f64 },

    #[error("incomplete scattering: residual excitation {residual:.3e} at t_end = {t_end}; extend the duration")]
    IncompleteScattering { residual: f64, t_end: f64 },

    #[error("integrator instability: norm gain {gain:.3e} at t = {time}")]
    IntegratorInstability { gain: f64, time: f64 },

    #[error("degenerate scattering: output norm {norm:.3e} for input state {state}")]
    DegenerateScattering { state: usize, norm: f64 },

    #[error("degenerate protocol: success probability {success_prob:.3e}")]
    DegenerateProtocol { success_prob: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Short stable identifier used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::NoCrossing { .. } => "no-crossing",
            Error::IncompleteScattering { .. } => "incomplete-scattering",
            Error::IntegratorInstability { .. } => "integrator-instability",
            Error::DegenerateScattering { .. } => "degenerate-scattering",
            Error::DegenerateProtocol { .. } => "degenerate-protocol",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code: 2 for bad input, 3 for numeric failure, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 2,
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}
