use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use ahl_core::exec::Exec;
use ahl_core::experiments::check::run_checks;
use ahl_core::experiments::run::preset_dir;
use ahl_core::experiments::{preset, presets, run_preset, ExperimentConfig, ModelKind, Preset};
use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "ahl-sim",
    version,
    about = "Train and compare AHL-based quantum neural networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a preset, a single run of a preset, or a key=value config file.
    Run(RunArgs),
    /// List the built-in presets.
    Presets,
    /// Run the invariant suite.
    Check,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Preset name (see `ahl-sim presets`), run name, or path to a config file.
    target: String,
    /// Seed for data, initial parameters, and training.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory. Preset runs go to subdirectories named after each run.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Amplitude damping strength applied after every layer.
    #[arg(long)]
    noise: Option<f64>,
    /// Number of ansatz layers.
    #[arg(long)]
    depth: Option<usize>,
    /// Keep only runs of this model; for single-model targets, switch the model.
    #[arg(long)]
    model: Option<ModelKind>,
    /// Evaluate gradients on one thread.
    #[arg(long)]
    sequential: bool,
}

fn load_target(args: &RunArgs) -> Result<Preset> {
    let path = Path::new(&args.target);
    if path.is_file() {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = ExperimentConfig::parse(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if let Some(out) = &args.out {
            cfg.output_dir = out.clone();
        }
        return Ok(Preset {
            name: cfg.name.clone(),
            description: "config file",
            runs: vec![cfg],
        });
    }
    let mut p = preset(&args.target)
        .with_context(|| format!("`{}` is neither a file nor a preset", args.target))?;
    if let Some(out) = &args.out {
        p = p.with_base_dir(out);
    }
    Ok(p)
}

fn apply_overrides(mut p: Preset, args: &RunArgs) -> Result<Preset> {
    if let Some(kind) = args.model {
        if p.runs.iter().any(|r| r.model == kind) && p.runs.iter().any(|r| r.model != kind) {
            p.runs.retain(|r| r.model == kind);
        } else {
            for r in &mut p.runs {
                r.model = kind;
            }
        }
    }
    for r in &mut p.runs {
        if let Some(s) = args.seed {
            r.seed = s;
        }
        if let Some(n) = args.noise {
            r.noise = n;
        }
        if let Some(d) = args.depth {
            r.depth = d;
        }
        r.validate()
            .with_context(|| format!("invalid settings for run `{}`", r.name))?;
    }
    Ok(p)
}

fn run(args: RunArgs) -> Result<()> {
    let p = apply_overrides(load_target(&args)?, &args)?;
    let exec = if args.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let start = Instant::now();
    let records = run_preset(&p, exec)?;
    for rec in &records {
        let r = &rec.run;
        let m = r.metric.name();
        println!(
            "{}: loss {:.6} -> {:.6}, train_{m} {:.4}, test_{m} {:.4} ({})",
            rec.config.name,
            r.loss_curve[0],
            r.loss_curve.last().copied().unwrap_or(f64::NAN),
            r.train_metric,
            r.test_metric,
            rec.config.output_dir.display()
        );
    }
    if records.len() > 1 {
        if let Some(dir) = preset_dir(&p) {
            let table = dir.join("compare_table.csv");
            if table.is_file() {
                print!("{}", std::fs::read_to_string(&table)?);
            }
        }
    }
    eprintln!("finished in {:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn list_presets() {
    for p in presets() {
        println!("{}: {}", p.name, p.description);
        for r in &p.runs {
            println!(
                "  {} task={} model={} depth={} noise={} epochs={}",
                r.name, r.task, r.model, r.depth, r.noise, r.epochs
            );
        }
    }
}

fn check() -> bool {
    let results = run_checks();
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    failed == 0
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Presets => {
            list_presets();
            Ok(())
        }
        Command::Check => {
            if check() {
                Ok(())
            } else {
                Err(anyhow::anyhow!("invariant check failed"))
            }
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(target: &str, extra: &[&str]) -> RunArgs {
        let mut v = vec!["ahl-sim", "run", target];
        v.extend_from_slice(extra);
        match Cli::try_parse_from(v).unwrap().command {
            Command::Run(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn model_filters_mixed_presets() {
        let a = args("cls", &["--model", "qnn"]);
        let p = apply_overrides(load_target(&a).unwrap(), &a).unwrap();
        assert_eq!(p.runs.len(), 1);
        assert_eq!(p.runs[0].model, ModelKind::Qnn);
    }

    #[test]
    fn model_switches_single_model_presets() {
        let a = args("exp01", &["--model", "qnn", "--seed", "9", "--depth", "3"]);
        let p = apply_overrides(load_target(&a).unwrap(), &a).unwrap();
        assert_eq!(p.runs.len(), 4);
        assert!(p
            .runs
            .iter()
            .all(|r| r.model == ModelKind::Qnn && r.seed == 9 && r.depth == 3));
    }

    #[test]
    fn bad_overrides_rejected() {
        let a = args("exp02", &["--noise", "1.5"]);
        assert!(apply_overrides(load_target(&a).unwrap(), &a).is_err());
        assert!(load_target(&args("no-such-preset", &[])).is_err());
        if let Ok(cli) = Cli::try_parse_from(["ahl-sim", "run", "cls", "--model", "mlp"]) {
            panic!("accepted {cli:?}");
        }
    }

    #[test]
    fn out_redirects_runs() {
        let a = args("exp02", &["--out", "/tmp/x"]);
        let p = load_target(&a).unwrap();
        assert_eq!(p.runs[0].output_dir, PathBuf::from("/tmp/x/exp02-rqnn"));
        assert_eq!(preset_dir(&p), Some(PathBuf::from("/tmp/x")));
    }
}
