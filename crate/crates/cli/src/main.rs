//! `mfc`: runs the built-in scenarios or JSON scenario files and writes
//! CSV logs plus a JSON sidecar with the metrics.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mfc_core::sim::{compute_metrics, emit_csv, preset, preset_names, read_csv, run_scenario, Metrics, Scenario};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "mfc", version, about = "Model-free control scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a scenario file.
    Run {
        /// Preset name or path to a JSON scenario.
        target: String,
        /// Override the noise seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "MFC_OUT_DIR", default_value = ".")]
        out: PathBuf,
    },
    /// List the built-in presets.
    ListPresets,
    /// Print a preset as a JSON scenario file.
    DumpPreset { name: String },
    /// Run every *.json scenario in a directory, in parallel.
    Batch {
        dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "MFC_OUT_DIR", default_value = ".")]
        out: PathBuf,
    },
    /// Recompute metrics from a CSV log.
    Metrics { csv: PathBuf },
}

enum Failure {
    Config(String),
    Diverged(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Diverged(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Diverged(m) => m,
        }
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn load(target: &str) -> Result<Scenario, Failure> {
    if preset_names().contains(&target) {
        return preset(target).map_err(config);
    }
    let path = Path::new(target);
    if !path.is_file() {
        return Err(Failure::Config(format!(
            "{target:?} is neither a preset ({}) nor a scenario file",
            preset_names().join(", ")
        )));
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// Runs one scenario and writes `<name>.csv` and `<name>.json` into `out`.
fn execute(scenario: Scenario, seed: Option<u64>, out: &Path) -> Result<Metrics, Failure> {
    let scenario = match seed {
        Some(s) => scenario.with_seed(s),
        None => scenario,
    };
    let ts = run_scenario(&scenario).map_err(config)?;
    let metrics = compute_metrics(&ts).map_err(config)?;
    fs::create_dir_all(out).map_err(|e| Failure::Config(format!("{}: {e}", out.display())))?;
    emit_csv(&ts, &out.join(format!("{}.csv", scenario.name))).map_err(config)?;
    let sidecar = serde_json::json!({
        "scenario": scenario,
        "seed": scenario.seed,
        "metrics": metrics,
    });
    let path = out.join(format!("{}.json", scenario.name));
    let text = serde_json::to_string_pretty(&sidecar).map_err(config)?;
    fs::write(&path, text + "\n").map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    if metrics.diverged {
        let t = ts.t.last().copied().unwrap_or(0.0);
        return Err(Failure::Diverged(format!("{} diverged at t = {t}", scenario.name)));
    }
    Ok(metrics)
}

fn summary(name: &str, m: &Metrics) -> String {
    let loops: Vec<String> = m
        .loops
        .iter()
        .map(|l| {
            let mut s = format!("rmse_tail {:.4e} max|e| {:.4e} energy {:.4e}", l.rmse_tail, l.max_abs_e, l.control_energy);
            if let Some(c) = l.cross_coupling {
                s += &format!(" coupling {c:.4e}");
            }
            s
        })
        .collect();
    format!("{name}: {}", loops.join(" | "))
}

fn batch(dir: &Path, seed: Option<u64>, out: &Path) -> Result<(), Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Config(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Failure::Config(format!("{}: no *.json scenarios", dir.display())));
    }
    let results: Vec<(PathBuf, Result<Metrics, Failure>)> = files
        .into_par_iter()
        .map(|p| {
            let r = load(&p.to_string_lossy()).and_then(|s| {
                let name = s.name.clone();
                execute(s, seed, out).inspect(|m| println!("{}", summary(&name, m)))
            });
            (p, r)
        })
        .collect();
    // config errors outrank divergence
    let mut worst: Option<Failure> = None;
    for (p, r) in results {
        if let Err(f) = r {
            eprintln!("{}: {}", p.display(), f.message());
            if worst.as_ref().is_none_or(|w| f.code() < w.code()) {
                worst = Some(f);
            }
        }
    }
    worst.map_or(Ok(()), Err)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { target, seed, out } => {
            let scenario = load(&target)?;
            let name = scenario.name.clone();
            let m = execute(scenario, seed, &out)?;
            println!("{}", summary(&name, &m));
        }
        Command::ListPresets => {
            for name in preset_names() {
                let s = preset(name).map_err(config)?;
                println!("{name:<16} {}", s.description);
            }
        }
        Command::DumpPreset { name } => println!("{}", preset(&name).map_err(config)?.to_json()),
        Command::Batch { dir, seed, out } => batch(&dir, seed, &out)?,
        Command::Metrics { csv } => {
            let ts = read_csv(&csv).map_err(config)?;
            let m = compute_metrics(&ts).map_err(config)?;
            println!("{}", serde_json::to_string_pretty(&m).map_err(config)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
