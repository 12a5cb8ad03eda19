//! Loss, central finite-difference gradients, gradient descent, and the
//! training loop.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{angle_encode, readout, CircuitIR, ParamSet};
use crate::circuit::{pull_back_observable, simulate};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{CMatrix, C0};
use crate::state::{qubit_mask, StateVector};

/// How the model output is read from the final state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Readout {
    /// `<Z>` of one qubit.
    Qubit(usize),
    /// Mean of `<Z_q>` over all qubits.
    MeanZ,
}

impl Readout {
    /// The readout as a diagonal observable.
    pub fn observable(self, n_qubits: usize) -> Result<CMatrix> {
        let d = 1usize << n_qubits;
        let diag: Vec<f64> = match self {
            Readout::Qubit(q) => {
                crate::state::check_qubit(q, n_qubits)?;
                let m = qubit_mask(n_qubits, q);
                (0..d)
                    .map(|i| if i & m == 0 { 1.0 } else { -1.0 })
                    .collect()
            }
            Readout::MeanZ => (0..d)
                .map(|i| {
                    let ones = i.count_ones() as f64;
                    (n_qubits as f64 - 2.0 * ones) / n_qubits as f64
                })
                .collect(),
        };
        let mut o = CMatrix::zeros(d, d);
        for (i, v) in diag.into_iter().enumerate() {
            o[(i, i)].re = v;
        }
        Ok(o)
    }
}

/// A trainable circuit with its encoding width and readout rule. Inputs are
/// angle-encoded in front of the circuit.
#[derive(Clone, Debug)]
pub struct Model {
    circuit: CircuitIR,
    readout: Readout,
}

impl Model {
    pub fn new(circuit: CircuitIR, readout: Readout) -> Result<Self> {
        readout.observable(circuit.n_qubits())?;
        Ok(Model { circuit, readout })
    }

    pub fn circuit(&self) -> &CircuitIR {
        &self.circuit
    }

    pub fn readout_rule(&self) -> Readout {
        self.readout
    }

    /// Encode, bind, simulate the density matrix, read out.
    pub fn predict(&self, params: &ParamSet, x: &[f64]) -> Result<f64> {
        let full = self
            .circuit
            .with_prefix(angle_encode(x, self.circuit.n_qubits())?)?;
        let rho = simulate(&full, params, Some(x))?;
        match self.readout {
            Readout::Qubit(q) => readout(&rho, q),
            Readout::MeanZ => {
                let n = rho.n_qubits();
                let sum = (0..n).map(|q| readout(&rho, q)).sum::<Result<f64>>()?;
                Ok(sum / n as f64)
            }
        }
    }

    /// Encoded input states, reusable across parameter updates.
    pub fn encode_batch(&self, inputs: &[Vec<f64>]) -> Result<EncodedBatch> {
        let n = self.circuit.n_qubits();
        let states = inputs
            .iter()
            .map(|x| {
                let mut psi = StateVector::zero(n)?;
                for ins in angle_encode(x, n)? {
                    if let crate::ansatz::Instruction::Gate(g) = ins {
                        psi.apply_gate(&g)?;
                    }
                }
                Ok(psi)
            })
            .collect::<Result<_>>()?;
        Ok(EncodedBatch {
            inputs: inputs.to_vec(),
            states,
        })
    }

    /// Predictions for a whole batch. Feature-free circuits go through the
    /// pulled-back observable; others are simulated per sample.
    pub fn predict_batch(
        &self,
        params: &ParamSet,
        batch: &EncodedBatch,
        exec: Exec,
    ) -> Result<Vec<f64>> {
        if self.circuit.has_features() {
            return exec.try_map(&batch.inputs, |x| self.predict(params, x));
        }
        let obs = self.readout.observable(self.circuit.n_qubits())?;
        let pulled = pull_back_observable(&self.circuit, params, &obs)?;
        Ok(batch
            .states
            .iter()
            .map(|psi| quadratic_form(&pulled, psi.amplitudes()).clamp(-1.0, 1.0))
            .collect())
    }
}

/// Inputs together with their encoded states.
#[derive(Clone, Debug)]
pub struct EncodedBatch {
    inputs: Vec<Vec<f64>>,
    states: Vec<StateVector>,
}

impl EncodedBatch {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }
}

/// `Re <v|M|v>`
fn quadratic_form(m: &CMatrix, v: &[num_complex::Complex64]) -> f64 {
    let mut acc = C0;
    for (i, vi) in v.iter().enumerate() {
        let row: num_complex::Complex64 = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
        acc += vi.conj() * row;
    }
    acc.re
}

/// Free-function form of [`Model::predict`].
pub fn predict(model: &Model, params: &ParamSet, x: &[f64]) -> Result<f64> {
    model.predict(params, x)
}

/// Mean absolute error `(1/W) sum |y~_k - y_k|`.
pub fn loss(predictions: &[f64], labels: &[f64]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::Empty("prediction list"));
    }
    if predictions.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    let total: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(p, y)| (p - y).abs())
        .sum();
    Ok(total / predictions.len() as f64)
}

/// Central difference `(f(p + step e_j) - f(p - step e_j)) / (2 step)`;
/// evaluates the objective exactly twice.
pub fn fd_gradient<F>(objective: F, params: &ParamSet, j: usize, step: f64) -> Result<f64>
where
    F: Fn(&ParamSet) -> Result<f64>,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Params(format!("finite-difference step {step}")));
    }
    let v = *params
        .values()
        .get(j)
        .ok_or_else(|| Error::Params(format!("slot {j} out of {}", params.len())))?;
    let plus = objective(&params.with_value(j, v + step))?;
    let minus = objective(&params.with_value(j, v - step))?;
    if !plus.is_finite() || !minus.is_finite() {
        return Err(Error::NonFinite(format!(
            "objective at slot {j}: {plus} / {minus}"
        )));
    }
    Ok((plus - minus) / (2.0 * step))
}

/// `p - rate * g`, elementwise over every group.
pub fn sgd_step(params: &ParamSet, grads: &[f64], rate: f64) -> Result<ParamSet> {
    if grads.len() != params.len() {
        return Err(Error::Dimension(format!(
            "{} gradients for {} parameters",
            grads.len(),
            params.len()
        )));
    }
    let values = params
        .values()
        .iter()
        .zip(grads)
        .map(|(p, g)| p - rate * g)
        .collect();
    params.with_values(values)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Batch {
    #[default]
    Full,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub decision_boundary: f64,
    pub batch: Batch,
    pub noise: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.2,
            epochs: 300,
            fd_step: 1e-3,
            seed: 42,
            decision_boundary: 0.3,
            batch: Batch::Full,
            noise: 0.05,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate {} must be non-negative",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(Error::Config(format!(
                "fd step {} must be positive",
                self.fd_step
            )));
        }
        if !(0.0..1.0).contains(&self.decision_boundary) {
            return Err(Error::Config(format!(
                "decision boundary {} outside [0, 1)",
                self.decision_boundary
            )));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::Probability(self.noise));
        }
        Ok(())
    }
}

/// Inputs and labels; the first `n_train` rows are the training split.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub inputs: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub n_train: usize,
    pub n_test: usize,
}

impl Dataset {
    pub fn new(
        inputs: Vec<Vec<f64>>,
        labels: Vec<f64>,
        n_train: usize,
        n_test: usize,
    ) -> Result<Self> {
        if inputs.len() != labels.len() {
            return Err(Error::Dimension(format!(
                "{} inputs for {} labels",
                inputs.len(),
                labels.len()
            )));
        }
        if n_train + n_test != inputs.len() {
            return Err(Error::Dimension(format!(
                "split {n_train} + {n_test} does not cover {} rows",
                inputs.len()
            )));
        }
        if n_train == 0 {
            return Err(Error::Empty("training split"));
        }
        Ok(Dataset {
            inputs,
            labels,
            n_train,
            n_test,
        })
    }

    pub fn train(&self) -> (&[Vec<f64>], &[f64]) {
        (&self.inputs[..self.n_train], &self.labels[..self.n_train])
    }

    pub fn test(&self) -> (&[Vec<f64>], &[f64]) {
        (&self.inputs[self.n_train..], &self.labels[self.n_train..])
    }
}

/// Score reported for each split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    MeanAbsoluteError,
    Accuracy,
}

impl Metric {
    pub fn evaluate(self, predictions: &[f64], labels: &[f64]) -> Result<f64> {
        match self {
            Metric::MeanAbsoluteError => loss(predictions, labels),
            Metric::Accuracy => accuracy(predictions, labels),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::MeanAbsoluteError => "mae",
            Metric::Accuracy => "accuracy",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub loss_curve: Vec<f64>,
    pub initial_params: ParamSet,
    pub final_params: ParamSet,
    pub metric: Metric,
    pub initial_train_metric: f64,
    pub initial_test_metric: f64,
    pub train_metric: f64,
    pub test_metric: f64,
    pub train_predictions: Vec<f64>,
    pub test_predictions: Vec<f64>,
    pub config_echo: TrainConfig,
}

/// Uniform draws in `[0, 2 pi)` from the seed.
pub fn initial_params(circuit: &CircuitIR, seed: u64) -> ParamSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..circuit.layout().len())
        .map(|_| rng.gen_range(0.0..TAU))
        .collect();
    ParamSet::new(circuit.layout().clone(), values).expect("finite draws")
}

/// Reduces each slot into its own period when the circuit defines one.
fn wrap(circuit: &CircuitIR, params: ParamSet) -> ParamSet {
    let layout = params.layout().clone();
    let values = params
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let slot = layout.slot(i).expect("in range");
            match circuit.slot_period(slot) {
                Some(period) => v.rem_euclid(period),
                None => v,
            }
        })
        .collect();
    ParamSet::new(layout, values).expect("finite values")
}

/// Full-batch gradient descent on the mean absolute error.
///
/// Every epoch records the loss at the current parameters, then evaluates
/// all `2 * |slots|` shifted objectives (in parallel under
/// [`Exec::Parallel`]) and takes one step.
pub fn train(
    model: &Model,
    data: &Dataset,
    cfg: &TrainConfig,
    metric: Metric,
    exec: Exec,
) -> Result<RunRecord> {
    cfg.validate()?;
    let (train_x, train_y) = data.train();
    let (test_x, test_y) = data.test();
    let train_batch = model.encode_batch(train_x)?;
    let test_batch = model.encode_batch(test_x)?;
    let inner = if model.circuit().has_features() {
        exec
    } else {
        Exec::Sequential
    };
    let objective = |p: &ParamSet| -> Result<f64> {
        loss(&model.predict_batch(p, &train_batch, inner)?, train_y)
    };

    let initial = wrap(model.circuit(), initial_params(model.circuit(), cfg.seed));
    let score = |p: &ParamSet, batch: &EncodedBatch, labels: &[f64]| -> Result<(f64, Vec<f64>)> {
        if batch.is_empty() {
            return Ok((f64::NAN, Vec::new()));
        }
        let preds = model.predict_batch(p, batch, inner)?;
        Ok((metric.evaluate(&preds, labels)?, preds))
    };
    let (initial_train_metric, _) = score(&initial, &train_batch, train_y)?;
    let (initial_test_metric, _) = score(&initial, &test_batch, test_y)?;

    let mut params = initial.clone();
    let mut loss_curve = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let current = objective(&params)?;
        if !current.is_finite() {
            return Err(Error::Diverged {
                epoch,
                loss: current,
            });
        }
        loss_curve.push(current);
        let grads = exec.try_map_range(params.len(), |j| {
            fd_gradient(objective, &params, j, cfg.fd_step)
        })?;
        params = wrap(
            model.circuit(),
            sgd_step(&params, &grads, cfg.learning_rate)?,
        );
    }

    let (train_metric, train_predictions) = score(&params, &train_batch, train_y)?;
    let (test_metric, test_predictions) = score(&params, &test_batch, test_y)?;
    Ok(RunRecord {
        loss_curve,
        initial_params: initial,
        final_params: params,
        metric,
        initial_train_metric,
        initial_test_metric,
        train_metric,
        test_metric,
        train_predictions,
        test_predictions,
        config_echo: cfg.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Positive,
    Negative,
    Reject,
}

impl Label {
    pub fn value(self) -> Option<f64> {
        match self {
            Label::Positive => Some(1.0),
            Label::Negative => Some(-1.0),
            Label::Reject => None,
        }
    }
}

/// Sign rule used for scoring: `+1` when `prediction >= 0`, else `-1`.
/// `g` only has to be a valid boundary width; it plays no part in the sign.
pub fn classify(prediction: f64, g: f64) -> Label {
    debug_assert!((0.0..1.0).contains(&g));
    if prediction >= 0.0 {
        Label::Positive
    } else {
        Label::Negative
    }
}

/// Like [`classify`] but rejects predictions inside the band `|y| < g`.
pub fn classify_banded(prediction: f64, g: f64) -> Label {
    if prediction.abs() < g {
        Label::Reject
    } else {
        classify(prediction, g)
    }
}

/// Fraction of predictions whose sign (ties to `+1`) matches the label's.
pub fn accuracy(predictions: &[f64], labels: &[f64]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::Empty("prediction list"));
    }
    if predictions.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    let hits = predictions
        .iter()
        .zip(labels)
        .filter(|(&p, &y)| classify(p, 0.0) == classify(y, 0.0))
        .count();
    Ok(hits as f64 / predictions.len() as f64)
}
