use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A pulse program whose time step does not resolve the dynamics.
    #[error("unresolved time step: {0}")]
    Resolution(String),

    /// A trace too short or too flat to measure an oscillation frequency.
    #[error("insufficient trace: {0}")]
    Trace(String),

    /// A spectrum whose ground multiplet has no definite total J.
    #[error("mixed multiplet: <J^2> = {j_squared} is not J(J+1) for any J")]
    MixedMultiplet { j_squared: f64 },

    #[error("calibration did not converge: best fidelity {fidelity:.4} at omega = {omega:.6e} rad/s, duration = {duration:.6e} s")]
    Convergence { fidelity: f64, omega: f64, duration: f64 },

    /// The readout protocol was asked to run outside the regime where the
    /// lower pseudospin state is the ground state.
    #[error("protocol precondition: {0}")]
    Protocol(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "E_DOMAIN",
            Error::Resolution(_) => "E_RESOLUTION",
            Error::Trace(_) => "E_TRACE",
            Error::MixedMultiplet { .. } => "E_MIXED_MULTIPLET",
            Error::Convergence { .. } => "E_CONVERGENCE",
            Error::Protocol(_) => "E_PROTOCOL_PRECONDITION",
        }
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
