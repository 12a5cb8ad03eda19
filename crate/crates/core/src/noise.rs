//! Kraus-form noise channels.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C1};
use crate::state::{check_qubit, DensityMatrix};

pub const COMPLETENESS_TOLERANCE: f64 = 1e-10;

/// A CPTP map `rho -> sum_k K_k rho K_k†` acting on `targets`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    name: &'static str,
    operators: Vec<CMatrix>,
    targets: Vec<usize>,
}

impl KrausChannel {
    /// Validates shapes and completeness `sum K† K = I` to 1e-10.
    pub fn new(name: &'static str, operators: Vec<CMatrix>, targets: Vec<usize>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::Empty("Kraus operator list"));
        }
        if targets.is_empty() {
            return Err(Error::Empty("channel targets"));
        }
        let dim = 1usize << targets.len();
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &operators {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::Dimension(format!(
                    "{}x{} Kraus operator on {} target(s)",
                    k.rows(),
                    k.cols(),
                    targets.len()
                )));
            }
            sum.axpy(C1, &k.adjoint().matmul(k)?)?;
        }
        let residual = sum.max_abs_diff(&CMatrix::identity(dim))?;
        if residual > COMPLETENESS_TOLERANCE {
            return Err(Error::IncompleteKraus(residual));
        }
        Ok(KrausChannel {
            name,
            operators,
            targets,
        })
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// The same operators moved to other qubits.
    pub fn retarget(&self, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != self.targets.len() {
            return Err(Error::Dimension(format!(
                "channel acts on {} qubit(s), {} targets given",
                self.targets.len(),
                targets.len()
            )));
        }
        Ok(KrausChannel {
            name: self.name,
            operators: self.operators.clone(),
            targets,
        })
    }

    /// `max |sum K† K - I|`
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.operators[0].rows();
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &self.operators {
            sum.axpy(C1, &k.adjoint().matmul(k).expect("square"))
                .expect("same shape");
        }
        sum.max_abs_diff(&CMatrix::identity(dim))
            .expect("same shape")
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for &t in &self.targets {
            check_qubit(t, n_qubits)?;
        }
        Ok(())
    }
}

/// Amplitude damping on qubit 0 with decay probability `p`:
/// `K0 = [[1, 0], [0, sqrt(1-p)]]`, `K1 = [[0, sqrt(p)], [0, 0]]`.
pub fn amplitude_damping(p: f64) -> Result<KrausChannel> {
    amplitude_damping_on(p, 0)
}

pub fn amplitude_damping_on(p: f64, qubit: usize) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Probability(p));
    }
    let k0 = CMatrix::from_real_rows(&[[1.0, 0.0], [0.0, (1.0 - p).sqrt()]]);
    let k1 = CMatrix::from_real_rows(&[[0.0, p.sqrt()], [0.0, 0.0]]);
    KrausChannel::new("amplitude_damping", vec![k0, k1], vec![qubit])
}

impl DensityMatrix {
    pub fn apply_channel(&mut self, ch: &KrausChannel) -> Result<()> {
        ch.validate(self.n_qubits())?;
        self.apply_kraus(ch.targets(), ch.operators())
    }
}

/// `rho -> sum_k K_k rho K_k†`, returning a fresh state.
pub fn apply_channel(state: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    let mut out = state.clone();
    out.apply_channel(ch)?;
    Ok(out)
}
