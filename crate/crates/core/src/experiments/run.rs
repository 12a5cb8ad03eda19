//! Builds the model for a config, trains it, and writes its artifacts.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use super::config::{ExperimentConfig, ModelKind, Preset, Task};
use super::data::{gen_cosine, gen_damped_sine, gen_nonlinear_classes};
use super::output::{
    accuracy_csv, compare_table, emit_plot, fit_csv, loss_csv, points_csv, write_file, CompareRow,
    PlotSpec, Series, SeriesStyle,
};
use crate::ansatz::{build_ahl_circuit, build_qnn_cls_circuit_on, build_qnn_sim_circuit};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hamiltonian::LatticeSpec;
use crate::training::{train, Dataset, Metric, Model, Readout, RunRecord};

/// A finished run: its config, the training record, and the raw dataset.
#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub run: RunRecord,
    pub dataset: Dataset,
}

pub fn metric_for(task: Task) -> Metric {
    if task.is_regression() {
        Metric::MeanAbsoluteError
    } else {
        Metric::Accuracy
    }
}

fn damping(p: f64) -> Option<f64> {
    (p > 0.0).then_some(p)
}

/// Circuit and readout for `cfg`.
pub fn build_model(cfg: &ExperimentConfig) -> Result<Model> {
    cfg.validate()?;
    let n = if cfg.task.is_regression() {
        2
    } else {
        cfg.n_qubits
    };
    let circuit = match cfg.model {
        ModelKind::Rqnn => {
            let spec = LatticeSpec::chain(n)?.with_unit_angle_scales();
            build_ahl_circuit(&spec, cfg.depth, damping(cfg.noise))?
        }
        ModelKind::Qnn => {
            let c = if cfg.task.is_regression() {
                build_qnn_sim_circuit(cfg.depth)?
            } else {
                build_qnn_cls_circuit_on(n, cfg.depth)?
            };
            match damping(cfg.noise) {
                Some(p) => c.with_layer_damping(p)?,
                None => c,
            }
        }
    };
    let readout = if cfg.task.is_regression() {
        Readout::Qubit(0)
    } else {
        Readout::Qubit(n - 1)
    };
    Model::new(circuit, readout)
}

/// The dataset for `cfg`, in its natural coordinates.
pub fn dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    match cfg.task {
        Task::Cos => gen_cosine(cfg.n_train, cfg.n_test, cfg.seed),
        Task::DampedSine => gen_damped_sine(cfg.n_train, cfg.n_test, cfg.seed),
        Task::Classify => gen_nonlinear_classes(
            cfg.n_train + cfg.n_test,
            cfg.n_train,
            cfg.n_test,
            cfg.decision_boundary,
            cfg.seed,
        ),
    }
}

/// Rotation angles fed to the encoder. Planar points are centred, scaled
/// by `pi`, and repeated across the register.
pub fn encode_features(task: Task, n_qubits: usize, raw: &[f64]) -> Vec<f64> {
    match task {
        Task::Cos | Task::DampedSine => raw.to_vec(),
        Task::Classify => (0..n_qubits.max(raw.len()))
            .map(|i| PI * (raw[i % raw.len()] - 0.5))
            .collect(),
    }
}

fn model_inputs(cfg: &ExperimentConfig, raw: &Dataset) -> Result<Dataset> {
    let inputs = raw
        .inputs
        .iter()
        .map(|x| encode_features(cfg.task, cfg.n_qubits, x))
        .collect();
    Dataset::new(inputs, raw.labels.clone(), raw.n_train, raw.n_test)
}

/// Trains without touching the filesystem.
pub fn train_experiment(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentRecord> {
    let model = build_model(cfg)?;
    let raw = dataset(cfg)?;
    let data = model_inputs(cfg, &raw)?;
    let run = train(
        &model,
        &data,
        &cfg.train_config(),
        metric_for(cfg.task),
        exec,
    )?;
    Ok(ExperimentRecord {
        config: cfg.clone(),
        run,
        dataset: raw,
    })
}

fn join_values(v: &[f64]) -> String {
    v.iter()
        .map(|x| super::output::fmt17(*x))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn summary_text(rec: &ExperimentRecord) -> String {
    use super::output::fmt17;
    let r = &rec.run;
    let m = r.metric.name();
    let mut out = rec.config.to_text();
    out.push_str(&format!(
        "initial_loss={}\nfinal_loss={}\ninitial_train_{m}={}\ninitial_test_{m}={}\ntrain_{m}={}\ntest_{m}={}\nn_params={}\nfinal_params={}\n",
        fmt17(r.loss_curve[0]),
        fmt17(*r.loss_curve.last().unwrap_or(&f64::NAN)),
        fmt17(r.initial_train_metric),
        fmt17(r.initial_test_metric),
        fmt17(r.train_metric),
        fmt17(r.test_metric),
        r.final_params.len(),
        join_values(r.final_params.values()),
    ));
    out
}

fn loss_series(label: &str, curve: &[f64]) -> Series {
    Series {
        label: label.to_string(),
        style: SeriesStyle::Line,
        points: curve
            .iter()
            .enumerate()
            .map(|(e, l)| (e as f64, *l))
            .collect(),
    }
}

fn sorted_by_x(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

/// Writes config, CSVs, summary, circuit listing, and plots into
/// `output_dir`. Returns the written paths.
pub fn write_artifacts(rec: &ExperimentRecord) -> Result<Vec<PathBuf>> {
    let cfg = &rec.config;
    let dir = &cfg.output_dir;
    let r = &rec.run;
    let mut written = Vec::new();
    let mut put = |name: &str, text: &str| -> Result<()> {
        let path = dir.join(name);
        write_file(&path, text)?;
        written.push(path);
        Ok(())
    };
    put("config.txt", &cfg.to_text())?;
    put("loss.csv", &loss_csv(&r.loss_curve))?;
    put("summary.txt", &summary_text(rec))?;
    put("circuit.txt", &build_model(cfg)?.circuit().listing())?;

    let (test_x, test_y) = rec.dataset.test();
    let mut plots = vec![(
        "loss.svg",
        PlotSpec {
            title: format!("{} training loss", cfg.name),
            x_label: "epoch".into(),
            y_label: "MAE loss".into(),
            series: vec![loss_series(&cfg.model.to_string(), &r.loss_curve)],
        },
    )];
    if cfg.task.is_regression() {
        let xs: Vec<f64> = test_x.iter().map(|x| x[0]).collect();
        put(
            "predictions.csv",
            &fit_csv(&xs, test_y, &r.test_predictions)?,
        )?;
        plots.push((
            "fit.svg",
            PlotSpec {
                title: format!("{} test fit", cfg.name),
                x_label: "x".into(),
                y_label: "y".into(),
                series: vec![
                    Series {
                        label: "target".into(),
                        style: SeriesStyle::Line,
                        points: sorted_by_x(&xs, test_y),
                    },
                    Series {
                        label: cfg.model.to_string(),
                        style: SeriesStyle::Line,
                        points: sorted_by_x(&xs, &r.test_predictions),
                    },
                ],
            },
        ));
    } else {
        put(
            "predictions.csv",
            &points_csv(test_x, test_y, &r.test_predictions)?,
        )?;
        put(
            "accuracy.csv",
            &accuracy_csv(&[
                (cfg.model, "train", r.train_metric),
                (cfg.model, "test", r.test_metric),
            ]),
        )?;
        let side = |positive: bool| -> Vec<(f64, f64)> {
            test_x
                .iter()
                .zip(&r.test_predictions)
                .filter(|(_, p)| (**p >= 0.0) == positive)
                .map(|(x, _)| (x[0], x[1]))
                .collect()
        };
        let series: Vec<Series> = [("predicted +1", true), ("predicted -1", false)]
            .into_iter()
            .map(|(label, s)| Series {
                label: label.into(),
                style: SeriesStyle::Points,
                points: side(s),
            })
            .filter(|s| !s.points.is_empty())
            .collect();
        plots.push((
            "classes.svg",
            PlotSpec {
                title: format!("{} test predictions", cfg.name),
                x_label: "x1".into(),
                y_label: "x2".into(),
                series,
            },
        ));
    }
    for (name, spec) in plots {
        let path = dir.join(name);
        emit_plot(&spec, &path)?;
        written.push(path);
    }
    Ok(written)
}

/// Trains `cfg` and writes its artifacts.
pub fn run_experiment(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentRecord> {
    let rec = train_experiment(cfg, exec)?;
    write_artifacts(&rec)?;
    Ok(rec)
}

/// Directory shared by a preset's runs.
pub fn preset_dir(preset: &Preset) -> Option<PathBuf> {
    let first = preset.runs.first()?.output_dir.parent()?.to_path_buf();
    preset
        .runs
        .iter()
        .all(|r| r.output_dir.parent() == Some(first.as_path()))
        .then_some(first)
}

pub fn compare_rows(records: &[ExperimentRecord]) -> Vec<CompareRow> {
    records
        .iter()
        .map(|r| CompareRow {
            model: r.config.model,
            train: r.run.train_metric,
            test: r.run.test_metric,
        })
        .collect()
}

/// Writes a comparison table and overlaid loss curves next to the runs.
pub fn write_preset_artifacts(dir: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let Some(first) = records.first() else {
        return Err(Error::Empty("preset records"));
    };
    let has = |k| records.iter().any(|r| r.config.model == k);
    if has(ModelKind::Rqnn) && has(ModelKind::Qnn) {
        let table = compare_table(&compare_rows(records), first.run.metric)?;
        write_file(&dir.join("compare_table.csv"), &table)?;
    }
    let spec = PlotSpec {
        title: "training loss".into(),
        x_label: "epoch".into(),
        y_label: "MAE loss".into(),
        series: records
            .iter()
            .map(|r| loss_series(&r.config.name, &r.run.loss_curve))
            .collect(),
    };
    emit_plot(&spec, &dir.join("loss.svg"))
}

/// Runs every config of `preset` in order.
pub fn run_preset(preset: &Preset, exec: Exec) -> Result<Vec<ExperimentRecord>> {
    let records = preset
        .runs
        .iter()
        .map(|cfg| run_experiment(cfg, exec))
        .collect::<Result<Vec<_>>>()?;
    if records.len() > 1 {
        if let Some(dir) = preset_dir(preset) {
            write_preset_artifacts(&dir, &records)?;
        }
    }
    Ok(records)
}
