use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use cefrscore::runner::{self, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "cefrscore",
    version,
    about = "CEFR proficiency classification experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<(ExperimentConfig, PathBuf)> {
        let mut cfg = ExperimentConfig::from_file(&self.config)
            .with_context(|| format!("reading {}", self.config.display()))?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        let out = self.out.clone().unwrap_or_else(|| cfg.output.clone());
        Ok((cfg, out))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print corpus counts and per-dimension label histograms.
    Stats(Common),
    /// Train and evaluate every configured cell; write CSV/JSON reports.
    Run(Common),
    /// Write the fold manifests a run would use.
    ExportFolds(Common),
    /// Score an external predictions TSV against the corpus labels.
    ScorePredictions {
        #[command(flatten)]
        common: Common,
        /// Predictions file; overrides the config's `predictions`.
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Stats(common) => {
            let (cfg, _) = common.load()?;
            let stats = runner::stats(&cfg)?;
            print!("{stats}");
            if stats.total == 0 {
                eprintln!("no documents found under {}", cfg.corpus.display());
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Run(common) => {
            let (cfg, out) = common.load()?;
            let output = runner::run(cfg, &out)?;
            for r in &output.reports {
                println!(
                    "{}\t{}\t{}\t{}\tmean={:.4}\tstd={:.4}",
                    r.scenario, r.dimension, r.feature_set, r.classifier, r.mean, r.std
                );
            }
            println!("wrote {}", output.csv_path.display());
            println!("wrote {}", output.json_path.display());
        }
        Command::ExportFolds(common) => {
            let (cfg, out) = common.load()?;
            for path in runner::export_folds(cfg, &out)? {
                println!("wrote {}", path.display());
            }
        }
        Command::ScorePredictions {
            common,
            predictions,
        } => {
            let (cfg, out) = common.load()?;
            let output = runner::score_predictions(cfg, predictions, &out)?;
            for r in &output.reports {
                println!("{}\t{}\tmean={:.4}", r.scenario, r.dimension, r.mean);
                for (lang, s) in &r.per_language {
                    println!("  {lang}\tmean={:.4}", s.mean);
                }
            }
            println!("wrote {}", output.csv_path.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}
