//! Parameterized circuits: the AHL layered ansatz obtained by exponentiating
//! `H_b`, `H_olap` and `H_redun` term by term, the two baseline QNN neurons,
//! angle encoding, and Z readout.
//!
//! Bound rotation angle = `scale * slot value`. The AHL scales
//! (`2 pi V_n`, `pi J_jk`, `2 hbar`) make every bound gate equal the matching
//! term exponential exactly under the half-angle rotation convention, e.g.
//! `RX(2 pi V_n theta) = exp(-i pi V_n theta X_n)`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::gates::{Axis, Gate};
use crate::hamiltonian::LatticeSpec;
use crate::linalg::CMatrix;
use crate::noise::{amplitude_damping_on, KrausChannel};
use crate::state::{check_qubit, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamGroup {
    Theta,
    Rho,
    Gamma,
    Alpha,
}

impl ParamGroup {
    pub fn name(self) -> &'static str {
        match self {
            ParamGroup::Theta => "theta",
            ParamGroup::Rho => "rho",
            ParamGroup::Gamma => "gamma",
            ParamGroup::Alpha => "alpha",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParamSlot {
    pub group: ParamGroup,
    pub layer: usize,
}

impl ParamSlot {
    pub fn new(group: ParamGroup, layer: usize) -> Self {
        ParamSlot { group, layer }
    }
}

impl fmt::Display for ParamSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.group.name(), self.layer)
    }
}

/// Which parameter groups exist and how many layers each spans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamLayout {
    groups: Vec<ParamGroup>,
    layers: usize,
}

impl ParamLayout {
    pub fn new(groups: Vec<ParamGroup>, layers: usize) -> Result<Self> {
        if layers == 0 {
            return Err(Error::Params("layer count must be at least 1".into()));
        }
        if groups.is_empty() {
            return Err(Error::Params("no parameter groups".into()));
        }
        Ok(ParamLayout { groups, layers })
    }

    pub fn ahl(layers: usize) -> Result<Self> {
        Self::new(
            vec![ParamGroup::Theta, ParamGroup::Rho, ParamGroup::Gamma],
            layers,
        )
    }

    pub fn qnn(layers: usize) -> Result<Self> {
        Self::new(vec![ParamGroup::Alpha, ParamGroup::Theta], layers)
    }

    pub fn groups(&self) -> &[ParamGroup] {
        &self.groups
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn len(&self) -> usize {
        self.groups.len() * self.layers
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat, group-major index of a slot.
    pub fn index(&self, slot: ParamSlot) -> Option<usize> {
        let g = self.groups.iter().position(|&g| g == slot.group)?;
        (slot.layer < self.layers).then_some(g * self.layers + slot.layer)
    }

    pub fn slot(&self, index: usize) -> Option<ParamSlot> {
        (index < self.len()).then(|| ParamSlot {
            group: self.groups[index / self.layers],
            layer: index % self.layers,
        })
    }
}

/// Trainable values laid out group-major: all `theta`, then all `rho`, ...
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet {
    layout: ParamLayout,
    values: Vec<f64>,
}

impl ParamSet {
    pub fn new(layout: ParamLayout, values: Vec<f64>) -> Result<Self> {
        if values.len() != layout.len() {
            return Err(Error::Params(format!(
                "{} values for {} slots",
                values.len(),
                layout.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Params(format!("non-finite value {v}")));
        }
        Ok(ParamSet { layout, values })
    }

    pub fn zeros(layout: ParamLayout) -> Self {
        let values = vec![0.0; layout.len()];
        ParamSet { layout, values }
    }

    /// AHL parameters from per-group vectors of equal length `L`.
    pub fn from_groups(theta: Vec<f64>, rho: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        if theta.len() != rho.len() || rho.len() != gamma.len() {
            return Err(Error::Params("group lengths differ".into()));
        }
        let layout = ParamLayout::ahl(theta.len())?;
        Self::new(layout, [theta, rho, gamma].concat())
    }

    pub fn layout(&self) -> &ParamLayout {
        &self.layout
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, slot: ParamSlot) -> Option<f64> {
        self.layout.index(slot).map(|i| self.values[i])
    }

    pub fn group(&self, group: ParamGroup) -> Option<&[f64]> {
        let g = self.layout.groups.iter().position(|&x| x == group)?;
        let l = self.layout.layers;
        Some(&self.values[g * l..(g + 1) * l])
    }

    /// Copy with entry `index` replaced.
    pub fn with_value(&self, index: usize, value: f64) -> ParamSet {
        let mut out = self.clone();
        out.values[index] = value;
        out
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<ParamSet> {
        ParamSet::new(self.layout.clone(), values)
    }
}

/// A rotation whose angle is `scale * params[slot]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamGate {
    pub axis: Axis,
    pub target: usize,
    pub slot: ParamSlot,
    pub scale: f64,
}

/// A rotation whose angle is `scale * x[feature]`, bound per sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureGate {
    pub axis: Axis,
    pub target: usize,
    pub feature: usize,
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Gate(Gate),
    Channel(KrausChannel),
    Param(ParamGate),
    Feature(FeatureGate),
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Gate(g) => write!(f, "{g}"),
            Instruction::Channel(ch) => {
                write!(f, "CHANNEL {}", ch.name())?;
                for t in ch.targets() {
                    write!(f, " q{t}")?;
                }
                Ok(())
            }
            Instruction::Param(p) => write!(
                f,
                "{} q{} {:.17e}*{}",
                p.axis.name(),
                p.target,
                p.scale,
                p.slot
            ),
            Instruction::Feature(x) => write!(
                f,
                "{} q{} {:.17e}*x[{}]",
                x.axis.name(),
                x.target,
                x.scale,
                x.feature
            ),
        }
    }
}

/// Ordered instruction list plus the parameter layout its slots refer to.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitIR {
    n_qubits: usize,
    layout: ParamLayout,
    instructions: Vec<Instruction>,
    /// Instruction index one past the end of each layer.
    layer_ends: Vec<usize>,
}

impl CircuitIR {
    pub fn new(
        n_qubits: usize,
        layout: ParamLayout,
        layers: Vec<Vec<Instruction>>,
    ) -> Result<Self> {
        let mut instructions = Vec::new();
        let mut layer_ends = Vec::new();
        for layer in layers {
            instructions.extend(layer);
            layer_ends.push(instructions.len());
        }
        let c = CircuitIR {
            n_qubits,
            layout,
            instructions,
            layer_ends,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > crate::MAX_QUBITS {
            return Err(Error::Circuit(format!(
                "unsupported register width {}",
                self.n_qubits
            )));
        }
        for ins in &self.instructions {
            match ins {
                Instruction::Gate(g) => g.validate(self.n_qubits)?,
                Instruction::Channel(ch) => ch.validate(self.n_qubits)?,
                Instruction::Param(p) => {
                    check_qubit(p.target, self.n_qubits)?;
                    if self.layout.index(p.slot).is_none() {
                        return Err(Error::Circuit(format!("slot {} not in layout", p.slot)));
                    }
                    if !p.scale.is_finite() {
                        return Err(Error::Circuit(format!("non-finite scale on {}", p.slot)));
                    }
                }
                Instruction::Feature(x) => {
                    check_qubit(x.target, self.n_qubits)?;
                    if !x.scale.is_finite() {
                        return Err(Error::Circuit("non-finite feature scale".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layout(&self) -> &ParamLayout {
        &self.layout
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn n_layers(&self) -> usize {
        self.layer_ends.len()
    }

    pub fn layer(&self, index: usize) -> &[Instruction] {
        let start = if index == 0 {
            0
        } else {
            self.layer_ends[index - 1]
        };
        &self.instructions[start..self.layer_ends[index]]
    }

    pub fn has_channels(&self) -> bool {
        self.instructions
            .iter()
            .any(|i| matches!(i, Instruction::Channel(_)))
    }

    pub fn has_features(&self) -> bool {
        self.instructions
            .iter()
            .any(|i| matches!(i, Instruction::Feature(_)))
    }

    pub fn gate_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| !matches!(i, Instruction::Channel(_)))
            .count()
    }

    /// Appends one single-qubit channel per qubit, built by `make(qubit)`,
    /// after every layer.
    pub fn with_layer_channels(
        &self,
        make: impl Fn(usize) -> Result<KrausChannel>,
    ) -> Result<CircuitIR> {
        let mut layers = Vec::with_capacity(self.n_layers());
        for l in 0..self.n_layers() {
            let mut layer = self.layer(l).to_vec();
            for q in 0..self.n_qubits {
                layer.push(Instruction::Channel(make(q)?));
            }
            layers.push(layer);
        }
        CircuitIR::new(self.n_qubits, self.layout.clone(), layers)
    }

    /// Amplitude damping of strength `p` on every qubit after every layer.
    pub fn with_layer_damping(&self, p: f64) -> Result<CircuitIR> {
        self.with_layer_channels(|q| amplitude_damping_on(p, q))
    }

    /// Prepends instructions (e.g. an encoding) as part of the first layer.
    pub fn with_prefix(&self, prefix: Vec<Instruction>) -> Result<CircuitIR> {
        let mut layers: Vec<Vec<Instruction>> = (0..self.n_layers())
            .map(|l| self.layer(l).to_vec())
            .collect();
        if layers.is_empty() {
            layers.push(Vec::new());
        }
        let mut first = prefix;
        first.append(&mut layers[0]);
        layers[0] = first;
        CircuitIR::new(self.n_qubits, self.layout.clone(), layers)
    }

    /// The angle period shared by every gate that reads `slot`, if all of
    /// them use the same |scale|; density-matrix action is `2 pi`-periodic
    /// in each bound angle.
    pub fn slot_period(&self, slot: ParamSlot) -> Option<f64> {
        let mut scale: Option<f64> = None;
        for ins in &self.instructions {
            if let Instruction::Param(p) = ins {
                if p.slot == slot {
                    let s = p.scale.abs();
                    match scale {
                        None => scale = Some(s),
                        Some(prev) if prev == s => {}
                        Some(_) => return None,
                    }
                }
            }
        }
        scale.filter(|&s| s > 0.0).map(|s| 2.0 * PI / s)
    }

    /// One instruction per line.
    pub fn listing(&self) -> String {
        let mut out = format!(
            "# qubits={} layers={} params={}\n",
            self.n_qubits,
            self.n_layers(),
            self.layout.len()
        );
        for (l, _) in self.layer_ends.iter().enumerate() {
            out.push_str(&format!("# layer {l}\n"));
            for ins in self.layer(l) {
                out.push_str(&ins.to_string());
                out.push('\n');
            }
        }
        out
    }
}

fn param(axis: Axis, target: usize, group: ParamGroup, layer: usize, scale: f64) -> Instruction {
    Instruction::Param(ParamGate {
        axis,
        target,
        slot: ParamSlot::new(group, layer),
        scale,
    })
}

/// One AHL layer: the `theta` block `exp(-i H_b theta)`, the `rho` block
/// `exp(-i H_olap rho)` with a CNOT entangling each coupled pair, and the
/// `gamma` block `exp(-i H_redun gamma)`.
pub fn ahl_layer(spec: &LatticeSpec, alpha: usize) -> Result<Vec<Instruction>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(2 * spec.n_x_ops + 3 * spec.couplings.len());
    for (n, &v) in spec.nuclear_shifts.iter().enumerate() {
        out.push(param(
            Axis::X,
            spec.x_qubit(n),
            ParamGroup::Theta,
            alpha,
            2.0 * PI * v,
        ));
    }
    for c in &spec.couplings {
        let (zq, xq) = (spec.z_qubit(c.z), spec.x_qubit(c.x));
        out.push(param(Axis::Z, zq, ParamGroup::Rho, alpha, PI * c.strength));
        out.push(param(Axis::X, xq, ParamGroup::Rho, alpha, PI * c.strength));
        out.push(Instruction::Gate(Gate::cnot(zq, xq)));
    }
    for n in 0..spec.n_x_ops {
        out.push(param(
            Axis::X,
            spec.x_qubit(n),
            ParamGroup::Gamma,
            alpha,
            2.0 * spec.hbar,
        ));
    }
    Ok(out)
}

/// Dense product of the `group` rotations in layer `alpha`, bound from
/// `params`. CNOTs are left out.
pub fn ahl_block_unitary(
    spec: &LatticeSpec,
    params: &ParamSet,
    group: ParamGroup,
    alpha: usize,
) -> Result<CMatrix> {
    let n = spec.n_qubits();
    let mut u = CMatrix::identity(1 << n);
    for ins in ahl_layer(spec, alpha)? {
        let Instruction::Param(pg) = ins else {
            continue;
        };
        if pg.slot.group != group {
            continue;
        }
        let value = params
            .get(pg.slot)
            .ok_or_else(|| Error::Params(format!("missing slot {}", pg.slot)))?;
        let g = Gate::Rotation {
            axis: pg.axis,
            target: pg.target,
            angle: pg.scale * value,
        };
        u = g.embed(n)?.matmul(&u)?;
    }
    Ok(u)
}

/// `L` AHL layers, optionally followed by per-qubit amplitude damping of
/// strength `noise` after each layer.
pub fn build_ahl_circuit(
    spec: &LatticeSpec,
    layers: usize,
    noise: Option<f64>,
) -> Result<CircuitIR> {
    let layout = ParamLayout::ahl(layers)?;
    let blocks = (0..layers)
        .map(|a| ahl_layer(spec, a))
        .collect::<Result<Vec<_>>>()?;
    let circuit = CircuitIR::new(spec.n_qubits(), layout, blocks)?;
    match noise {
        Some(p) => circuit.with_layer_damping(p),
        None => Ok(circuit),
    }
}

/// Function-fitting QNN neuron on two qubits:
/// `RX(a) q0, RX(a) q1, RZ(t) q0, CNOT(0, 1), RX(t) q1` per layer.
pub fn build_qnn_sim_circuit(layers: usize) -> Result<CircuitIR> {
    let layout = ParamLayout::qnn(layers)?;
    let blocks = (0..layers)
        .map(|a| {
            vec![
                param(Axis::X, 0, ParamGroup::Alpha, a, 1.0),
                param(Axis::X, 1, ParamGroup::Alpha, a, 1.0),
                param(Axis::Z, 0, ParamGroup::Theta, a, 1.0),
                Instruction::Gate(Gate::cnot(0, 1)),
                param(Axis::X, 1, ParamGroup::Theta, a, 1.0),
            ]
        })
        .collect();
    CircuitIR::new(2, layout, blocks)
}

/// Classification QNN neuron on two qubits:
/// `RX(a) q0, RX(a) q1, CNOT(0, 1), RY(t) q1, CNOT(0, 1)` per layer.
pub fn build_qnn_cls_circuit(layers: usize) -> Result<CircuitIR> {
    build_qnn_cls_circuit_on(2, layers)
}

/// The classification neuron widened to `n_qubits`: `RX(a)` on every qubit,
/// then `CNOT, RY(t), CNOT` down the chain of neighboring pairs. Two qubits
/// reproduce [`build_qnn_cls_circuit`].
pub fn build_qnn_cls_circuit_on(n_qubits: usize, layers: usize) -> Result<CircuitIR> {
    if n_qubits < 2 {
        return Err(Error::Circuit("the QNN neuron needs two qubits".into()));
    }
    let layout = ParamLayout::qnn(layers)?;
    let blocks = (0..layers)
        .map(|a| {
            let mut layer: Vec<Instruction> = (0..n_qubits)
                .map(|q| param(Axis::X, q, ParamGroup::Alpha, a, 1.0))
                .collect();
            for q in 0..n_qubits - 1 {
                layer.push(Instruction::Gate(Gate::cnot(q, q + 1)));
                layer.push(param(Axis::Y, q + 1, ParamGroup::Theta, a, 1.0));
                layer.push(Instruction::Gate(Gate::cnot(q, q + 1)));
            }
            layer
        })
        .collect();
    CircuitIR::new(n_qubits, layout, blocks)
}

/// Angle encoding: feature `i` becomes `RX(x_i)` on qubit `i mod n_qubits`;
/// features past the register width wrap into further rounds.
pub fn angle_encode(x: &[f64], n_qubits: usize) -> Result<Vec<Instruction>> {
    if x.is_empty() {
        return Err(Error::Empty("feature vector"));
    }
    if n_qubits == 0 {
        return Err(Error::Empty("qubit register"));
    }
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            if !v.is_finite() {
                return Err(Error::NonFiniteAngle(v));
            }
            Ok(Instruction::Gate(Gate::rx(i % n_qubits, v)))
        })
        .collect()
}

/// Feature-slot form of [`angle_encode`] for `n_features` inputs, bound
/// per sample at simulation time.
pub fn angle_encode_slots(n_features: usize, n_qubits: usize) -> Result<Vec<Instruction>> {
    if n_features == 0 {
        return Err(Error::Empty("feature vector"));
    }
    Ok((0..n_features)
        .map(|i| {
            Instruction::Feature(FeatureGate {
                axis: Axis::X,
                target: i % n_qubits,
                feature: i,
                scale: 1.0,
            })
        })
        .collect())
}

/// `<Z_qubit>`, clamped to `[-1, 1]` against rounding.
pub fn readout(state: &DensityMatrix, qubit: usize) -> Result<f64> {
    Ok(state.z_expectation(qubit)?.clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_layer_sequence() {
        let layer = ahl_layer(&LatticeSpec::two_qubit(), 0).unwrap();
        let text: Vec<String> = layer.iter().map(|i| i.to_string()).collect();
        assert_eq!(text.len(), 5);
        assert!(text[0].starts_with("RX q1") && text[0].ends_with("theta[0]"));
        assert!(text[1].starts_with("RZ q0") && text[1].ends_with("rho[0]"));
        assert!(text[2].starts_with("RX q1") && text[2].ends_with("rho[0]"));
        assert_eq!(text[3], "CNOT q0 q1");
        assert!(text[4].starts_with("RX q1") && text[4].ends_with("gamma[0]"));
    }

    #[test]
    fn chain_layer_gate_order() {
        let spec = LatticeSpec::chain(2).unwrap().with_unit_angle_scales();
        let layer = ahl_layer(&spec, 0).unwrap();
        let text: Vec<String> = layer.iter().map(|i| i.to_string()).collect();
        let heads: Vec<&str> = text.iter().map(|t| &t[..5]).collect();
        assert_eq!(
            heads,
            ["RX q0", "RX q1", "RZ q0", "RX q1", "CNOT ", "RX q0", "RX q1"]
        );

        // RX(rho) on the target commutes with the CNOT, so this order equals
        // RZ, CNOT, RX.
        let c = build_ahl_circuit(&spec, 1, None).unwrap();
        let (t, r, g) = (0.3, -1.1, 0.8);
        let p = ParamSet::from_groups(vec![t], vec![r], vec![g]).unwrap();
        let u = crate::circuit::unitary(&c, &p, None).unwrap();
        let reordered = [
            Gate::rx(0, t),
            Gate::rx(1, t),
            Gate::rz(0, r),
            Gate::cnot(0, 1),
            Gate::rx(1, r),
            Gate::rx(0, g),
            Gate::rx(1, g),
        ];
        let mut want = crate::linalg::CMatrix::identity(4);
        for gate in reordered {
            want = gate.embed(2).unwrap().matmul(&want).unwrap();
        }
        assert!(u.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn blocks_match_hamiltonian_exponentials() {
        use crate::hamiltonian::{build_h_b, build_h_olap, build_h_redun, exponential};
        let spec = LatticeSpec::three_qubit();
        let p = ParamSet::from_groups(vec![0.3, -1.2], vec![0.8, 2.0], vec![1.7, 0.4]).unwrap();
        let cases = [
            (ParamGroup::Theta, build_h_b(&spec).unwrap(), 1, -1.2),
            (ParamGroup::Rho, build_h_olap(&spec).unwrap(), 0, 0.8),
            (ParamGroup::Gamma, build_h_redun(&spec).unwrap(), 0, 1.7),
        ];
        for (group, h, alpha, t) in cases {
            let block = ahl_block_unitary(&spec, &p, group, alpha).unwrap();
            let want = exponential(&h, t).unwrap();
            assert!(block.max_abs_diff(&want).unwrap() < 1e-10, "{group:?}");
        }
    }

    #[test]
    fn layer_gate_count_formula() {
        let spec = LatticeSpec::square(2).unwrap();
        let n = spec.n_x_ops;
        let c = spec.couplings.len();
        assert_eq!(ahl_layer(&spec, 0).unwrap().len(), n + 2 * c + c + n);
    }

    #[test]
    fn parameter_count_laws() {
        let ahl = build_ahl_circuit(&LatticeSpec::two_qubit(), 10, None).unwrap();
        assert_eq!(ahl.layout().len(), 30);
        assert_eq!(build_qnn_sim_circuit(10).unwrap().layout().len(), 20);
        assert_eq!(build_qnn_cls_circuit(10).unwrap().layout().len(), 20);
        let one = build_ahl_circuit(&LatticeSpec::two_qubit(), 1, None).unwrap();
        assert_eq!(one.gate_count(), 5);
        assert_eq!(build_qnn_sim_circuit(1).unwrap().gate_count(), 5);
        assert_eq!(build_qnn_cls_circuit(1).unwrap().gate_count(), 5);
        assert_eq!(build_qnn_sim_circuit(1).unwrap().layout().len(), 2);
    }

    #[test]
    fn zero_layers_rejected() {
        assert!(build_ahl_circuit(&LatticeSpec::two_qubit(), 0, None).is_err());
        assert!(build_qnn_sim_circuit(0).is_err());
        assert!(build_qnn_cls_circuit(0).is_err());
    }

    #[test]
    fn noise_adds_one_channel_per_qubit_per_layer() {
        let c = build_ahl_circuit(&LatticeSpec::two_qubit(), 3, Some(0.05)).unwrap();
        let channels = c
            .instructions()
            .iter()
            .filter(|i| matches!(i, Instruction::Channel(_)))
            .count();
        assert_eq!(channels, 6);
        assert_eq!(c.gate_count(), 15);
        assert!(build_ahl_circuit(&LatticeSpec::two_qubit(), 1, Some(1.2)).is_err());
    }

    #[test]
    fn slot_periods() {
        let c = build_ahl_circuit(&LatticeSpec::two_qubit(), 1, None).unwrap();
        let p = |g| c.slot_period(ParamSlot::new(g, 0)).unwrap();
        assert!((p(ParamGroup::Theta) - 1.0).abs() < 1e-15);
        assert!((p(ParamGroup::Rho) - 2.0).abs() < 1e-15);
        assert!((p(ParamGroup::Gamma) - PI).abs() < 1e-15);
        let mut spec = LatticeSpec::four_qubit();
        spec.nuclear_shifts = vec![1.0, 0.5];
        let c = build_ahl_circuit(&spec, 1, None).unwrap();
        assert_eq!(c.slot_period(ParamSlot::new(ParamGroup::Theta, 0)), None);
    }

    #[test]
    fn layout_indexing() {
        let l = ParamLayout::ahl(4).unwrap();
        assert_eq!(l.index(ParamSlot::new(ParamGroup::Rho, 2)), Some(6));
        assert_eq!(l.slot(11), Some(ParamSlot::new(ParamGroup::Gamma, 3)));
        assert_eq!(l.index(ParamSlot::new(ParamGroup::Alpha, 0)), None);
        assert_eq!(l.index(ParamSlot::new(ParamGroup::Theta, 4)), None);
        let p = ParamSet::from_groups(vec![1.0], vec![2.0], vec![3.0]).unwrap();
        assert_eq!(p.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(p.group(ParamGroup::Rho), Some(&[2.0][..]));
        assert!(ParamSet::from_groups(vec![1.0], vec![], vec![3.0]).is_err());
        assert!(ParamSet::new(l, vec![f64::NAN; 12]).is_err());
    }

    #[test]
    fn encoding_errors_and_wrapping() {
        assert!(angle_encode(&[], 2).is_err());
        let e = angle_encode(&[0.1, 0.2, 0.3], 2).unwrap();
        let targets: Vec<_> = e
            .iter()
            .map(|i| match i {
                Instruction::Gate(Gate::Rotation { target, .. }) => *target,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(targets, vec![0, 1, 0]);
    }

    #[test]
    fn readout_range_and_errors() {
        let rho = DensityMatrix::zero(2).unwrap();
        assert_eq!(readout(&rho, 1).unwrap(), 1.0);
        assert!(readout(&rho, 2).is_err());
        assert_eq!(
            readout(&DensityMatrix::maximally_mixed(2).unwrap(), 0).unwrap(),
            0.0
        );
    }

    #[test]
    fn invalid_slot_rejected() {
        let layout = ParamLayout::qnn(1).unwrap();
        let bad = vec![vec![param(Axis::X, 0, ParamGroup::Gamma, 0, 1.0)]];
        assert!(CircuitIR::new(1, layout, bad).is_err());
    }

    #[test]
    fn listing_is_line_per_instruction() {
        let c = build_ahl_circuit(&LatticeSpec::two_qubit(), 2, Some(0.1)).unwrap();
        let text = c.listing();
        let body = text.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(body, c.instructions().len());
    }
}
