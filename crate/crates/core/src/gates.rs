//! Rotation and CNOT gates under the half-angle convention
//! `R_a(angle) = exp(-i angle/2 sigma_a)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C0, C1, CI};
use crate::pauli::Pauli;
use crate::state::{check_qubit, DensityMatrix, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "RX",
            Axis::Y => "RY",
            Axis::Z => "RZ",
        }
    }
}

/// `exp(-i angle/2 sigma)` for the Pauli matrix of `axis`.
pub fn rotation_matrix(axis: Axis, angle: f64) -> Result<CMatrix> {
    if !angle.is_finite() {
        return Err(Error::NonFiniteAngle(angle));
    }
    let (s, c) = (angle / 2.0).sin_cos();
    let cos = C1 * c;
    let m = match axis {
        Axis::X => CMatrix::from_rows(&[[cos, -CI * s], [-CI * s, cos]]),
        Axis::Y => CMatrix::from_rows(&[[cos, -C1 * s], [C1 * s, cos]]),
        Axis::Z => CMatrix::from_rows(&[[cos - CI * s, C0], [C0, cos + CI * s]]),
    };
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Rotation {
        axis: Axis,
        target: usize,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn rx(target: usize, angle: f64) -> Self {
        Gate::Rotation {
            axis: Axis::X,
            target,
            angle,
        }
    }

    pub fn ry(target: usize, angle: f64) -> Self {
        Gate::Rotation {
            axis: Axis::Y,
            target,
            angle,
        }
    }

    pub fn rz(target: usize, angle: f64) -> Self {
        Gate::Rotation {
            axis: Axis::Z,
            target,
            angle,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::Rotation { target, .. } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        match *self {
            Gate::Rotation { target, angle, .. } => {
                check_qubit(target, n_qubits)?;
                if !angle.is_finite() {
                    return Err(Error::NonFiniteAngle(angle));
                }
            }
            Gate::Cnot { control, target } => {
                check_qubit(control, n_qubits)?;
                check_qubit(target, n_qubits)?;
                if control == target {
                    return Err(Error::SameControlTarget(control));
                }
            }
        }
        Ok(())
    }

    /// Local matrix on `targets()` (control first for CNOT).
    pub fn matrix(&self) -> Result<CMatrix> {
        match *self {
            Gate::Rotation { axis, angle, .. } => rotation_matrix(axis, angle),
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::SameControlTarget(control));
                }
                Ok(CMatrix::from_real_rows(&[
                    [1.0, 0.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 0.0],
                    [0.0, 0.0, 0.0, 1.0],
                    [0.0, 0.0, 1.0, 0.0],
                ]))
            }
        }
    }

    /// Full `2^n x 2^n` matrix, built column by column from basis states.
    pub fn embed(&self, n_qubits: usize) -> Result<CMatrix> {
        self.validate(n_qubits)?;
        let d = 1usize << n_qubits;
        let mut out = CMatrix::zeros(d, d);
        for col in 0..d {
            let bits: Vec<u8> = (0..n_qubits)
                .map(|q| ((col >> (n_qubits - 1 - q)) & 1) as u8)
                .collect();
            let mut s = StateVector::basis(&bits)?;
            s.apply_gate(self)?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                out[(row, col)] = *a;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Rotation {
                axis,
                target,
                angle,
            } => write!(f, "{} q{} {:.17e}", axis.name(), target, angle),
            Gate::Cnot { control, target } => write!(f, "CNOT q{control} q{target}"),
        }
    }
}

impl StateVector {
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.n_qubits())?;
        match *g {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            Gate::Rotation { target, .. } => self.apply_unitary(&[target], &g.matrix()?),
        }
    }
}

impl DensityMatrix {
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.n_qubits())?;
        match *g {
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            Gate::Rotation { target, .. } => self.apply_unitary(&[target], &g.matrix()?),
        }
    }
}

/// `rho -> U rho U†`, returning a fresh state.
pub fn apply_gate(state: &DensityMatrix, g: &Gate) -> Result<DensityMatrix> {
    let mut out = state.clone();
    out.apply_gate(g)?;
    Ok(out)
}
