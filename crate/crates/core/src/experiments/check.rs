//! Fast invariant checks run by `ahl-sim check`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, ModelKind, Task};
use super::data::{gen_cosine, gen_nonlinear_classes, in_band};
use super::output::{render_svg, PlotSpec, Series, SeriesStyle};
use super::run::train_experiment;
use crate::ansatz::{
    ahl_block_unitary, build_ahl_circuit, readout, CircuitIR, Instruction, ParamGate, ParamGroup,
    ParamLayout, ParamSet, ParamSlot,
};
use crate::circuit::{simulate, unitary};
use crate::eigen::{eigen_residual, eigh};
use crate::error::Result;
use crate::exec::Exec;
use crate::gates::Axis;
use crate::hamiltonian::{
    build_h_b, build_h_p, build_h_redun, exponential, ground_state, interpolate, LatticeSpec,
};
use crate::linalg::CMatrix;
use crate::noise::amplitude_damping_on;
use crate::state::{DensityMatrix, StateVector};
use crate::training::{fd_gradient, initial_params};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

const SEED: u64 = 7;

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let data = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    CMatrix::from_vec(dim, dim, data).expect("square data")
}

/// `A A^dagger / tr(A A^dagger)`.
pub fn random_density(rng: &mut ChaCha8Rng, n_qubits: usize) -> Result<DensityMatrix> {
    let a = random_matrix(rng, 1 << n_qubits);
    let m = a.matmul(&a.adjoint())?;
    let tr = m.trace()?.re;
    DensityMatrix::from_matrix(m.scale_real(1.0 / tr))
}

fn cptp() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    let mut worst_kraus = 0.0_f64;
    for _ in 0..200 {
        let rho = random_density(&mut rng, 2)?;
        for k in 0..=10 {
            let ch = amplitude_damping_on(k as f64 / 10.0, rng.gen_range(0..2))?;
            worst_kraus = worst_kraus.max(ch.completeness_residual());
            let mut out = rho.clone();
            out.apply_channel(&ch)?;
            let d = out.diagnostics();
            worst = worst
                .max((d.trace - 1.0).norm())
                .max(d.hermiticity_residual)
                .max(-d.min_eigenvalue);
        }
    }
    Ok((
        worst <= 1e-10 && worst_kraus <= 1e-10,
        format!("trace/hermiticity/positivity {worst:.1e}, completeness {worst_kraus:.1e}"),
    ))
}

fn decomposition() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    for spec in [LatticeSpec::two_qubit(), LatticeSpec::chain(2)?] {
        let h_b = build_h_b(&spec)?;
        let h_r = build_h_redun(&spec)?;
        for _ in 0..50 {
            let values: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let p = ParamSet::new(ParamLayout::ahl(2)?, values)?;
            for alpha in 0..2 {
                let theta = p
                    .get(ParamSlot::new(ParamGroup::Theta, alpha))
                    .unwrap_or(0.0);
                let gamma = p
                    .get(ParamSlot::new(ParamGroup::Gamma, alpha))
                    .unwrap_or(0.0);
                let a = ahl_block_unitary(&spec, &p, ParamGroup::Theta, alpha)?;
                let b = ahl_block_unitary(&spec, &p, ParamGroup::Gamma, alpha)?;
                worst = worst
                    .max(a.max_abs_diff(&exponential(&h_b, theta)?)?)
                    .max(b.max_abs_diff(&exponential(&h_r, gamma)?)?);
            }
        }
    }
    Ok((worst <= 1e-10, format!("max block deviation {worst:.1e}")))
}

fn unitarity() -> Result<(bool, String)> {
    let spec = LatticeSpec::chain(3)?.with_unit_angle_scales();
    let c = build_ahl_circuit(&spec, 3, None)?;
    let mut worst = 0.0_f64;
    for seed in 0..5 {
        let u = unitary(&c, &initial_params(&c, seed), None)?;
        worst = worst.max(u.unitarity_residual());
    }
    Ok((worst <= 1e-10, format!("max |U^dagger U - I| {worst:.1e}")))
}

fn gradient() -> Result<(bool, String)> {
    let layout = ParamLayout::new(vec![ParamGroup::Theta], 1)?;
    let c = CircuitIR::new(
        1,
        layout.clone(),
        vec![vec![Instruction::Param(ParamGate {
            axis: Axis::X,
            target: 0,
            slot: ParamSlot::new(ParamGroup::Theta, 0),
            scale: 1.0,
        })]],
    )?;
    let f = |q: &ParamSet| readout(&simulate(&c, q, None)?, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let t: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let p = ParamSet::new(layout.clone(), vec![t])?;
        let fd = fd_gradient(f, &p, 0, 1e-4)?;
        let shift =
            (f(&p.with_value(0, t + FRAC_PI_2))? - f(&p.with_value(0, t - FRAC_PI_2))?) / 2.0;
        worst = worst.max((fd - shift).abs());
    }
    Ok((worst <= 1e-4, format!("max |fd - shift| {worst:.1e}")))
}

fn adiabatic() -> Result<(bool, String)> {
    let spec = LatticeSpec::three_qubit();
    let (h_b, h_p) = (build_h_b(&spec)?, build_h_p(&spec)?);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_res = 0.0_f64;
    let mut variational_ok = true;
    for k in 0..=4 {
        let h = interpolate(&h_b, &h_p, k as f64 / 4.0)?;
        let g = ground_state(&h)?;
        let m = h.matrix()?;
        worst_res = worst_res.max(eigen_residual(&m, g.energy, &g.vector)?);
        let lowest = eigh(&m)?
            .values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        variational_ok &= (lowest - g.energy).abs() <= 1e-8;
        for _ in 0..20 {
            let amps: Vec<Complex64> = (0..m.rows())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let amps = amps.into_iter().map(|a| a / norm).collect();
            let psi = StateVector::from_amplitudes(amps)?;
            variational_ok &= h.expectation_pure(&psi)? >= g.energy - 1e-10;
        }
    }
    Ok((
        worst_res <= 1e-8 && variational_ok,
        format!("eigen residual {worst_res:.1e}, variational bound held: {variational_ok}"),
    ))
}

fn datasets() -> Result<(bool, String)> {
    let a = gen_cosine(20, 10, 3)?;
    let b = gen_cosine(20, 10, 3)?;
    let c = gen_nonlinear_classes(450, 300, 150, 0.3, 3)?;
    let clean = c.inputs.iter().all(|p| !in_band([p[0], p[1]], 0.3));
    let pos = c.labels.iter().filter(|&&y| y > 0.0).count();
    let balanced = (pos as f64 / 450.0 - 0.5).abs() <= 0.05;
    Ok((
        a == b && clean && balanced,
        format!("pure: {}, band clear: {clean}, positives {pos}/450", a == b),
    ))
}

fn determinism() -> Result<(bool, String)> {
    let mut cfg = ExperimentConfig::defaults(Task::Cos, ModelKind::Rqnn);
    cfg.depth = 2;
    cfg.n_train = 20;
    cfg.n_test = 10;
    cfg.epochs = 5;
    let a = train_experiment(&cfg, Exec::Parallel)?;
    let b = train_experiment(&cfg, Exec::Sequential)?;
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    let same_loss = bits(&a.run.loss_curve) == bits(&b.run.loss_curve);
    let spec = PlotSpec {
        title: "loss".into(),
        x_label: "epoch".into(),
        y_label: "loss".into(),
        series: vec![Series {
            label: "rqnn".into(),
            style: SeriesStyle::Line,
            points: a
                .run
                .loss_curve
                .iter()
                .enumerate()
                .map(|(e, l)| (e as f64, *l))
                .collect(),
        }],
    };
    let same_svg = render_svg(&spec)? == render_svg(&spec)?;
    Ok((
        same_loss && same_svg,
        format!("loss curves bit-equal: {same_loss}, SVG bytes equal: {same_svg}"),
    ))
}

type Check = fn() -> Result<(bool, String)>;

/// Runs every check; a check that errors counts as failed.
pub fn run_checks() -> Vec<CheckResult> {
    let checks: [(&'static str, Check); 7] = [
        ("amplitude damping is CPTP", cptp),
        ("AHL blocks equal Hamiltonian exponentials", decomposition),
        ("noiseless circuits are unitary", unitarity),
        ("finite difference matches parameter shift", gradient),
        ("adiabatic ground energies", adiabatic),
        ("datasets are pure and band-free", datasets),
        ("training and plots are deterministic", determinism),
    ];
    checks
        .into_iter()
        .map(|(name, f)| match f() {
            Ok((passed, detail)) => CheckResult {
                name,
                passed,
                detail,
            },
            Err(e) => CheckResult {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for r in run_checks() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
