//! Batch front end: `train`, `assign`, `metrics` and `synth`.

pub mod config;
pub mod io;
pub mod run;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{ModelKind, RunConfig, SomConfig};
pub use io::{ingest_csv, Codebook, EdgeRecord, KeyValues, UnitRecord};
pub use run::{export, load_exported, render_artifacts, train, ExportedModel, TrainedModel, OUTPUT_ENV};

use crate::error::{Error, Result};
use crate::synth::{generate, SynthKind, SynthSpec};

#[derive(Debug, Parser)]
#[command(name = "selforg", version, about = "Self-organizing network clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model and write codebook, edges, assignments, metrics and config.
    Train(TrainArgs),
    /// Assign dataset rows to the units of a trained model.
    Assign(ApplyArgs),
    /// Score a trained model on a dataset.
    Metrics(ApplyArgs),
    /// Generate a synthetic dataset as CSV.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// `key = value` config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, env = OUTPUT_ENV)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub has_header: bool,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    /// Directory written by `train`.
    #[arg(long)]
    pub from: PathBuf,
    /// Dataset to score; defaults to the one used for training.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub has_header: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthKindArg {
    Uniform,
    Mixture,
    Ring,
    TwoSquares,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKindArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Box corner for `uniform`, e.g. `0,0`.
    #[arg(long, default_value = "0,0")]
    pub low: String,
    #[arg(long, default_value = "1,1")]
    pub high: String,
    /// Mixture centers separated by `;`, e.g. `0,0;5,5`.
    #[arg(long)]
    pub centers: Option<String>,
    /// One sigma per center, comma separated.
    #[arg(long)]
    pub sigmas: Option<String>,
    /// One weight per center; uniform when absent.
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, default_value = "0,0")]
    pub center: String,
    #[arg(long, default_value_t = 0.5)]
    pub inner: f64,
    #[arg(long, default_value_t = 1.0)]
    pub outer: f64,
    #[arg(long, default_value_t = 1.0)]
    pub side: f64,
    #[arg(long, default_value_t = 3.0)]
    pub gap: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_list(name: &'static str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::param(name, format!("bad number `{t}`"))))
        .collect()
}

impl SynthArgs {
    pub fn spec(&self) -> Result<SynthSpec> {
        let kind = match self.kind {
            SynthKindArg::Uniform => SynthKind::UniformRect {
                low: parse_list("low", &self.low)?,
                high: parse_list("high", &self.high)?,
            },
            SynthKindArg::Mixture => {
                let centers = self
                    .centers
                    .as_deref()
                    .ok_or_else(|| Error::param("centers", "required for a mixture"))?
                    .split(';')
                    .map(|c| parse_list("centers", c))
                    .collect::<Result<Vec<_>>>()?;
                let k = centers.len();
                let sigmas = match &self.sigmas {
                    Some(s) => parse_list("sigmas", s)?,
                    None => vec![1.0; k],
                };
                let weights = match &self.weights {
                    Some(w) => parse_list("weights", w)?,
                    None => vec![1.0 / k as f64; k],
                };
                SynthKind::GaussianMixture { centers, sigmas, weights }
            }
            SynthKindArg::Ring => {
                let c = parse_list("center", &self.center)?;
                let [x, y] = c[..] else {
                    return Err(Error::param("center", "needs two coordinates"));
                };
                SynthKind::Ring {
                    center: [x, y],
                    inner: self.inner,
                    outer: self.outer,
                }
            }
            SynthKindArg::TwoSquares => SynthKind::TwoSquares {
                side: self.side,
                gap: self.gap,
            },
        };
        Ok(SynthSpec::new(kind, self.n, self.seed))
    }
}

impl TrainArgs {
    /// Defaults, then the config file, then flags, then `--set` overrides.
    pub fn config(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(path, self.model)?,
            None => RunConfig::new(
                self.model
                    .ok_or_else(|| Error::Config("`--model` or a config file naming a model is required".into()))?,
            ),
        };
        if let Some(d) = &self.data {
            config.data = Some(d.clone());
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(o) = &self.out {
            config.out = Some(o.clone());
        }
        if self.has_header {
            config.has_header = true;
        }
        config.apply_overrides(&self.set)?;
        Ok(config)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => io::write_all(&[(path.to_path_buf(), text.to_string())]),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io(Path::new("<stdout>"), e)),
    }
}

fn apply_data(args: &ApplyArgs, config: &RunConfig) -> Result<crate::Dataset> {
    match &args.data {
        Some(path) => ingest_csv(path, args.has_header),
        None => run::load_data(config),
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Train(args) => {
            let config = args.config()?;
            let dir = run::run(&config)?;
            eprintln!("wrote {}", dir.display());
            Ok(())
        }
        Command::Assign(args) => {
            let (config, model) = load_exported(&args.from)?;
            let data = apply_data(args, &config)?;
            emit(args.out.as_deref(), &io::assignments_csv(&model.assign(&data)?))
        }
        Command::Metrics(args) => {
            let (config, model) = load_exported(&args.from)?;
            let data = apply_data(args, &config)?;
            emit(args.out.as_deref(), &io::key_values_text(&model.metrics(&data)?))
        }
        Command::Synth(args) => {
            let data = generate(&args.spec()?)?;
            emit(args.out.as_deref(), &io::dataset_csv(&data))
        }
    }
}

/// Entry point for the binary. Exit code 1 on runtime errors, 2 on usage errors.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("selforg").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("c.txt");
        std::fs::write(&file, "model = gng\nseed = 3\ngng.max_age = 7\n").unwrap();
        let file = file.to_str().unwrap();
        let cli = parse(&["train", "--config", file, "--seed", "9", "--set", "gng.max_age=11", "--out", "o"]);
        let Command::Train(args) = cli.command else { panic!() };
        let c = args.config().unwrap();
        assert_eq!((c.model, c.seed, c.gng.max_age), (ModelKind::Gng, 9, 11));
        assert_eq!(c.out, Some(PathBuf::from("o")));
    }

    #[test]
    fn synth_specs_from_flags() {
        let cli = parse(&["synth", "--kind", "mixture", "--n", "5", "--centers", "0,0;4,4", "--sigmas", "1,2"]);
        let Command::Synth(args) = cli.command else { panic!() };
        let spec = args.spec().unwrap();
        assert_eq!(
            spec.kind,
            SynthKind::GaussianMixture {
                centers: vec![vec![0.0, 0.0], vec![4.0, 4.0]],
                sigmas: vec![1.0, 2.0],
                weights: vec![0.5, 0.5],
            }
        );
        let cli = parse(&["synth", "--kind", "ring", "--n", "5", "--center", "1"]);
        let Command::Synth(args) = cli.command else { panic!() };
        assert!(args.spec().is_err());
    }

    #[test]
    fn missing_model_is_an_error() {
        let cli = parse(&["train", "--data", "x.csv"]);
        let Command::Train(args) = cli.command else { panic!() };
        assert!(args.config().is_err());
    }
}
