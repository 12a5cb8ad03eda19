use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the simulator, trainer, or experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operator is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("control and target must differ (both are qubit {0})")]
    SameControlTarget(usize),
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("probability must lie in [0, 1], got {0}")]
    Probability(f64),
    #[error("Kraus operators are not complete (residual {0:.3e})")]
    IncompleteKraus(f64),
    #[error("register of {0} qubits exceeds the supported maximum of {max}", max = crate::MAX_QUBITS)]
    RegisterTooLarge(usize),
    #[error("invalid lattice: {0}")]
    Lattice(String),
    #[error("interpolation parameter must lie in [0, 1], got {0}")]
    InterpolationRange(f64),
    #[error("eigensolver did not converge: {0}")]
    Eigen(String),
    #[error("invalid circuit: {0}")]
    Circuit(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("objective became non-finite ({0})")]
    NonFinite(String),
    #[error("training diverged at epoch {epoch}: loss is {loss}")]
    Diverged { epoch: usize, loss: f64 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
