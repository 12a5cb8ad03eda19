//! Experiment configuration, the flat `key=value` file format, and presets.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::training::{Batch, TrainConfig};
use crate::MAX_QUBITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Cos,
    DampedSine,
    Classify,
}

impl Task {
    pub fn is_regression(self) -> bool {
        !matches!(self, Task::Classify)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Cos => "cos",
            Task::DampedSine => "damped_sine",
            Task::Classify => "classify",
        })
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cos" => Ok(Task::Cos),
            "damped_sine" => Ok(Task::DampedSine),
            "classify" => Ok(Task::Classify),
            _ => Err(Error::Config(format!(
                "unknown task `{s}` (expected cos, damped_sine or classify)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelKind {
    Rqnn,
    Qnn,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Rqnn => "rqnn",
            ModelKind::Qnn => "qnn",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rqnn" => Ok(ModelKind::Rqnn),
            "qnn" => Ok(ModelKind::Qnn),
            _ => Err(Error::Config(format!(
                "unknown model `{s}` (expected rqnn or qnn)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub task: Task,
    pub model: ModelKind,
    pub depth: usize,
    pub n_qubits: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub fd_step: f64,
    pub noise: f64,
    pub decision_boundary: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
}

pub const DEFAULT_SEED: u64 = 42;

impl ExperimentConfig {
    /// Defaults for a task: regression runs use 2 qubits, 600/200 points,
    /// `R = 0.2`, 300 epochs and depth 10; classification uses 4 qubits,
    /// 300/150 points, `R = 0.1`, 100 epochs and a single layer.
    pub fn defaults(task: Task, model: ModelKind) -> Self {
        let (depth, n_qubits, n_train, n_test, learning_rate, epochs) = match task {
            Task::Cos | Task::DampedSine => (10, 2, 600, 200, 0.2, 300),
            Task::Classify => (1, 4, 300, 150, 0.1, 100),
        };
        let name = format!("{task}-{model}-L{depth}");
        ExperimentConfig {
            output_dir: PathBuf::from("results").join(&name),
            name,
            task,
            model,
            depth,
            n_qubits,
            n_train,
            n_test,
            learning_rate,
            epochs,
            fd_step: 1e-3,
            noise: 0.05,
            decision_boundary: 0.3,
            seed: DEFAULT_SEED,
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            fd_step: self.fd_step,
            seed: self.seed,
            decision_boundary: self.decision_boundary,
            batch: Batch::Full,
            noise: self.noise,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.train_config().validate()?;
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::Config(format!("invalid run name `{}`", self.name)));
        }
        if self.depth == 0 {
            return Err(Error::Config("depth must be at least 1".into()));
        }
        if self.n_train == 0 {
            return Err(Error::Config("n_train must be at least 1".into()));
        }
        match self.task {
            Task::Cos | Task::DampedSine if self.n_qubits != 2 => Err(Error::Config(format!(
                "regression circuits are 2-qubit, got n_qubits = {}",
                self.n_qubits
            ))),
            Task::Classify if !(2..=MAX_QUBITS).contains(&self.n_qubits) => {
                Err(Error::Config(format!(
                    "classification needs 2..={MAX_QUBITS} qubits, got {}",
                    self.n_qubits
                )))
            }
            _ => Ok(()),
        }
    }

    /// Parses `key=value` lines. Blank lines and `#` comments are skipped.
    /// `task` and `model` pick the defaults; every other key overrides one
    /// field. Unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got `{line}`", i + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if pairs.iter().any(|(_, seen, _)| *seen == k) {
                return Err(Error::Config(format!("line {}: repeated key `{k}`", i + 1)));
            }
            pairs.push((i + 1, k, v));
        }
        let lookup = |key: &str| pairs.iter().find(|(_, k, _)| *k == key).map(|(_, _, v)| *v);
        let task = lookup("task")
            .ok_or_else(|| Error::Config("missing required key `task`".into()))?
            .parse()?;
        let model = lookup("model")
            .map(str::parse)
            .transpose()?
            .unwrap_or(ModelKind::Rqnn);
        let mut cfg = Self::defaults(task, model);
        let named = lookup("name").is_some();
        let placed = lookup("output_dir").is_some();
        for (line, k, v) in &pairs {
            cfg.set(k, v)
                .map_err(|e| Error::Config(format!("line {line}: {e}")))?;
        }
        if !named {
            cfg.name = format!("{}-{}-L{}", cfg.task, cfg.model, cfg.depth);
        }
        if !placed {
            cfg.output_dir = PathBuf::from("results").join(&cfg.name);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
        }
        match key {
            "name" => self.name = value.to_string(),
            "task" => self.task = value.parse()?,
            "model" => self.model = value.parse()?,
            "depth" => self.depth = num(key, value)?,
            "n_qubits" => self.n_qubits = num(key, value)?,
            "n_train" => self.n_train = num(key, value)?,
            "n_test" => self.n_test = num(key, value)?,
            "learning_rate" => self.learning_rate = num(key, value)?,
            "epochs" => self.epochs = num(key, value)?,
            "fd_step" => self.fd_step = num(key, value)?,
            "noise" => self.noise = num(key, value)?,
            "decision_boundary" => self.decision_boundary = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// The config in the same format [`ExperimentConfig::parse`] reads.
    pub fn to_text(&self) -> String {
        format!(
            "name={}\ntask={}\nmodel={}\ndepth={}\nn_qubits={}\nn_train={}\nn_test={}\n\
             learning_rate={}\nepochs={}\nfd_step={}\nnoise={}\ndecision_boundary={}\nseed={}\n\
             output_dir={}\n",
            self.name,
            self.task,
            self.model,
            self.depth,
            self.n_qubits,
            self.n_train,
            self.n_test,
            self.learning_rate,
            self.epochs,
            self.fd_step,
            self.noise,
            self.decision_boundary,
            self.seed,
            self.output_dir.display()
        )
    }
}

/// A named group of runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: String,
    pub description: &'static str,
    pub runs: Vec<ExperimentConfig>,
}

impl Preset {
    fn new(name: &str, description: &'static str, runs: Vec<ExperimentConfig>) -> Self {
        let mut runs = runs;
        for r in &mut runs {
            r.output_dir = PathBuf::from("results").join(name).join(&r.name);
        }
        Preset {
            name: name.to_string(),
            description,
            runs,
        }
    }

    /// Points every run at `base/<run name>`.
    pub fn with_base_dir(mut self, base: impl Into<PathBuf>) -> Self {
        let base = base.into();
        for r in &mut self.runs {
            r.output_dir = base.join(&r.name);
        }
        self
    }
}

fn run(name: &str, task: Task, model: ModelKind, depth: usize, noise: f64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::defaults(task, model);
    cfg.name = name.to_string();
    cfg.depth = depth;
    cfg.noise = noise;
    cfg
}

/// The four experiment groups.
pub fn presets() -> Vec<Preset> {
    use ModelKind::{Qnn, Rqnn};
    vec![
        Preset::new(
            "exp01",
            "RQNN on cos(x) at depths 2, 6, 10 with damping 0.05, and depth 10 without noise",
            vec![
                run("exp01-d2", Task::Cos, Rqnn, 2, 0.05),
                run("exp01-d6", Task::Cos, Rqnn, 6, 0.05),
                run("exp01-d10", Task::Cos, Rqnn, 10, 0.05),
                run("exp01-noise-free", Task::Cos, Rqnn, 10, 0.0),
            ],
        ),
        Preset::new(
            "exp02",
            "RQNN vs QNN on cos(x), depth 10, damping 0.05",
            vec![
                run("exp02-rqnn", Task::Cos, Rqnn, 10, 0.05),
                run("exp02-qnn", Task::Cos, Qnn, 10, 0.05),
            ],
        ),
        Preset::new(
            "exp03",
            "RQNN vs QNN on the damped sine, depth 10, damping 0.05",
            vec![
                run("exp03-rqnn", Task::DampedSine, Rqnn, 10, 0.05),
                run("exp03-qnn", Task::DampedSine, Qnn, 10, 0.05),
            ],
        ),
        Preset::new(
            "cls",
            "RQNN vs QNN disk classification, 4 qubits, 450/300/150, g = 0.3, damping 0.05",
            vec![
                run("cls-rqnn", Task::Classify, Rqnn, 1, 0.05),
                run("cls-qnn", Task::Classify, Qnn, 1, 0.05),
            ],
        ),
    ]
}

/// A preset by name, or a single run of one (e.g. `exp01-d10`).
pub fn preset(name: &str) -> Result<Preset> {
    let all = presets();
    if let Some(p) = all.iter().find(|p| p.name == name) {
        return Ok(p.clone());
    }
    for p in &all {
        if let Some(r) = p.runs.iter().find(|r| r.name == name) {
            return Ok(Preset {
                name: name.to_string(),
                description: p.description,
                runs: vec![r.clone()],
            });
        }
    }
    Err(Error::Config(format!("unknown preset `{name}`")))
}
