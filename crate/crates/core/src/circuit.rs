//! Binding and simulating [`CircuitIR`]s.
//!
//! Two routes compute the same readout. The Schrödinger route evolves a
//! density matrix forward through every instruction. The Heisenberg route
//! pulls the observable back through the circuit once,
//! `O' = Phi†(O)`, after which each encoded input costs a single
//! `<psi(x)|O'|psi(x)>`. Training uses the latter for feature-free circuits.

use crate::ansatz::{CircuitIR, Instruction, ParamSet};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::linalg::CMatrix;
use crate::noise::KrausChannel;
use crate::state::{conjugate_local, qubit_mask, DensityMatrix, StateVector};

#[derive(Clone, Debug, PartialEq)]
pub enum BoundOp<'a> {
    Gate(Gate),
    Channel(&'a KrausChannel),
}

/// Resolves parameter and feature slots into concrete gates.
pub fn bind<'a>(
    circuit: &'a CircuitIR,
    params: &ParamSet,
    features: Option<&[f64]>,
) -> Result<Vec<BoundOp<'a>>> {
    if params.layout() != circuit.layout() {
        return Err(Error::Params(format!(
            "parameter set has {} slots, circuit expects {}",
            params.len(),
            circuit.layout().len()
        )));
    }
    circuit
        .instructions()
        .iter()
        .map(|ins| match ins {
            Instruction::Gate(g) => Ok(BoundOp::Gate(*g)),
            Instruction::Channel(ch) => Ok(BoundOp::Channel(ch)),
            Instruction::Param(p) => {
                let v = params.get(p.slot).expect("validated slot");
                let angle = p.scale * v;
                if !angle.is_finite() {
                    return Err(Error::NonFiniteAngle(angle));
                }
                Ok(BoundOp::Gate(Gate::Rotation {
                    axis: p.axis,
                    target: p.target,
                    angle,
                }))
            }
            Instruction::Feature(f) => {
                let x = features.ok_or_else(|| {
                    Error::Circuit("circuit has feature slots but no input was given".into())
                })?;
                let v = *x.get(f.feature).ok_or_else(|| {
                    Error::Dimension(format!(
                        "feature {} requested from a {}-dimensional input",
                        f.feature,
                        x.len()
                    ))
                })?;
                Ok(BoundOp::Gate(Gate::Rotation {
                    axis: f.axis,
                    target: f.target,
                    angle: f.scale * v,
                }))
            }
        })
        .collect()
}

pub fn simulate_from(
    circuit: &CircuitIR,
    params: &ParamSet,
    features: Option<&[f64]>,
    mut state: DensityMatrix,
) -> Result<DensityMatrix> {
    if state.n_qubits() != circuit.n_qubits() {
        return Err(Error::Dimension(format!(
            "{}-qubit state through a {}-qubit circuit",
            state.n_qubits(),
            circuit.n_qubits()
        )));
    }
    for op in bind(circuit, params, features)? {
        match op {
            BoundOp::Gate(g) => state.apply_gate(&g)?,
            BoundOp::Channel(ch) => state.apply_channel(ch)?,
        }
    }
    Ok(state)
}

/// Evolves `|0...0><0...0|` through the circuit.
pub fn simulate(
    circuit: &CircuitIR,
    params: &ParamSet,
    features: Option<&[f64]>,
) -> Result<DensityMatrix> {
    simulate_from(
        circuit,
        params,
        features,
        DensityMatrix::zero(circuit.n_qubits())?,
    )
}

/// State-vector evolution of a channel-free circuit.
pub fn simulate_pure(
    circuit: &CircuitIR,
    params: &ParamSet,
    features: Option<&[f64]>,
) -> Result<StateVector> {
    let mut psi = StateVector::zero(circuit.n_qubits())?;
    for op in bind(circuit, params, features)? {
        match op {
            BoundOp::Gate(g) => psi.apply_gate(&g)?,
            BoundOp::Channel(_) => {
                return Err(Error::Circuit("state vectors cannot carry channels".into()))
            }
        }
    }
    Ok(psi)
}

/// Dense unitary of a channel-free circuit, built from embedded gate
/// matrices (independent of the local-update kernels).
pub fn unitary(
    circuit: &CircuitIR,
    params: &ParamSet,
    features: Option<&[f64]>,
) -> Result<CMatrix> {
    let n = circuit.n_qubits();
    let mut u = CMatrix::identity(1 << n);
    for op in bind(circuit, params, features)? {
        match op {
            BoundOp::Gate(g) => u = g.embed(n)?.matmul(&u)?,
            BoundOp::Channel(_) => {
                return Err(Error::Circuit("a noisy circuit has no unitary".into()))
            }
        }
    }
    Ok(u)
}

/// Heisenberg-picture observable `Phi†(O)` for a feature-free circuit, so
/// that `tr(Phi(rho) O) = tr(rho O')` for every input state `rho`.
pub fn pull_back_observable(
    circuit: &CircuitIR,
    params: &ParamSet,
    observable: &CMatrix,
) -> Result<CMatrix> {
    if circuit.has_features() {
        return Err(Error::Circuit(
            "feature slots must be bound before pulling back an observable".into(),
        ));
    }
    let n = circuit.n_qubits();
    let d = 1usize << n;
    if observable.rows() != d || observable.cols() != d {
        return Err(Error::Dimension(format!(
            "{}x{} observable for a {n}-qubit circuit",
            observable.rows(),
            observable.cols()
        )));
    }
    let mut o = observable.clone();
    for op in bind(circuit, params, None)?.into_iter().rev() {
        match op {
            BoundOp::Gate(Gate::Cnot { control, target }) => {
                let c = qubit_mask(n, control);
                let t = qubit_mask(n, target);
                let perm = |i: usize| if i & c != 0 { i ^ t } else { i };
                let old = o.clone();
                for i in 0..d {
                    for j in 0..d {
                        o[(perm(i), perm(j))] = old[(i, j)];
                    }
                }
            }
            BoundOp::Gate(g @ Gate::Rotation { target, .. }) => {
                let u_dag = g.matrix()?.adjoint();
                conjugate_local(&mut o, n, &[target], &u_dag);
            }
            BoundOp::Channel(ch) => {
                let mut acc = CMatrix::zeros(d, d);
                for k in ch.operators() {
                    let mut term = o.clone();
                    conjugate_local(&mut term, n, ch.targets(), &k.adjoint());
                    acc.axpy(crate::linalg::C1, &term)?;
                }
                o = acc;
            }
        }
    }
    Ok(o)
}
