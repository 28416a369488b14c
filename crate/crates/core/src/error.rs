use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("operation requires DM axis {expected}, got {got}")]
    WrongAxis {
        expected: &'static str,
        got: &'static str,
    },
    #[error("closed form for the x-axis model requires Jz <= J (J = {j}, Jz = {jz})")]
    JzExceedsJ { j: f64, jz: f64 },
    #[error("partition function is undefined at T = 0")]
    ZeroTemperature,
    #[error("invalid temperature {0}")]
    InvalidTemperature(f64),
    #[error("invalid coupling parameters: {0}")]
    InvalidParams(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("no entangled region: Jz <= -w")]
    NoEntangledRegion,
    #[error("no sign change found in the search interval")]
    NoBracket,
    #[error("concurrence vanishes at every scanned temperature")]
    NeverEntangled,
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("unknown preset '{0}' (expected fig1..fig6)")]
    UnknownPreset(String),
    #[error("malformed sweep CSV: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("output closed by reader")]
    BrokenPipe,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            Error::BrokenPipe
        } else {
            Error::Io(e.to_string())
        }
    }
}

impl Error {
    /// True for failures of an iterative solver or a missing entangled phase,
    /// as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_)
                | Error::NoEntangledRegion
                | Error::NoBracket
                | Error::NeverEntangled
        )
    }
}
