//! Run configuration: a flat `key = value` namespace with a default for every key.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cli::io::{format_f64, read_key_values, KeyValues};
use crate::common::{DecayKind, DecaySchedule};
use crate::error::{Error, Result};
use crate::gcs::GcsParams;
use crate::gng::GngParams;
use crate::som::{SomParams, Topology};
use crate::sota::{SotaMetric, SotaParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Som,
    Gcs,
    Gng,
    Sota,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Som => "som",
            ModelKind::Gcs => "gcs",
            ModelKind::Gng => "gng",
            ModelKind::Sota => "sota",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "som" => Ok(ModelKind::Som),
            "gcs" => Ok(ModelKind::Gcs),
            "gng" => Ok(ModelKind::Gng),
            "sota" => Ok(ModelKind::Sota),
            other => Err(Error::Config(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SomConfig {
    pub width: usize,
    pub height: usize,
    pub topology: Topology,
    pub steps: usize,
    pub alpha_kind: DecayKind,
    pub alpha_initial: f64,
    pub alpha_final: f64,
    pub radius_kind: DecayKind,
    pub radius_initial: f64,
    pub radius_final: f64,
}

impl Default for SomConfig {
    fn default() -> Self {
        SomConfig {
            width: 10,
            height: 10,
            topology: Topology::Rectangular,
            steps: 10_000,
            alpha_kind: DecayKind::Linear,
            alpha_initial: 0.5,
            alpha_final: 0.01,
            radius_kind: DecayKind::Linear,
            radius_initial: 5.0,
            radius_final: 0.0,
        }
    }
}

impl SomConfig {
    pub fn params(&self) -> Result<SomParams> {
        SomParams::new(
            DecaySchedule::new(self.alpha_kind, self.alpha_initial, self.alpha_final, self.steps)?,
            DecaySchedule::new(self.radius_kind, self.radius_initial, self.radius_final, self.steps)?,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub data: Option<PathBuf>,
    pub has_header: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub som: SomConfig,
    pub gcs: GcsParams,
    pub gcs_presentations: usize,
    pub gng: GngParams,
    pub gng_presentations: usize,
    pub sota: SotaParams,
    pub sota_metric: SotaMetric,
    /// Symbols per position when `sota.metric = profile`.
    pub sota_alphabet: usize,
}

impl RunConfig {
    pub fn new(model: ModelKind) -> Self {
        RunConfig {
            model,
            data: None,
            has_header: false,
            seed: 0,
            out: None,
            som: SomConfig::default(),
            gcs: GcsParams {
                delete_every: 100,
                ..GcsParams::default()
            },
            gcs_presentations: 10_000,
            gng: GngParams::default(),
            gng_presentations: 20_000,
            sota: SotaParams::default(),
            sota_metric: SotaMetric::Euclidean,
            sota_alphabet: 4,
        }
    }

    /// Reads a config file onto the defaults. The file must name a model unless
    /// `model` is given, in which case `model` wins.
    pub fn from_file(path: &Path, model: Option<ModelKind>) -> Result<Self> {
        let pairs = read_key_values(path)?;
        Self::from_pairs(&pairs, model)
    }

    pub fn from_pairs(pairs: &KeyValues, model: Option<ModelKind>) -> Result<Self> {
        let file_model = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "model")
            .map(|(_, v)| v.parse::<ModelKind>())
            .transpose()?;
        let kind = model
            .or(file_model)
            .ok_or_else(|| Error::Config("no model given".into()))?;
        let mut config = RunConfig::new(kind);
        for (k, v) in pairs {
            config.set(k, v)?;
        }
        config.model = kind;
        Ok(config)
    }

    /// Sets one key. Unknown keys and unparsable values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
        }
        fn parse_bool(key: &str, value: &str) -> Result<bool> {
            match value {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(Error::Config(format!("`{key}`: expected true or false, got `{value}`"))),
            }
        }
        let v = value;
        match key {
            "model" => self.model = parse(key, v)?,
            "data" => self.data = Some(PathBuf::from(v)),
            "has_header" => self.has_header = parse_bool(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),

            "som.width" => self.som.width = parse(key, v)?,
            "som.height" => self.som.height = parse(key, v)?,
            "som.topology" => self.som.topology = parse(key, v)?,
            "som.steps" => self.som.steps = parse(key, v)?,
            "som.alpha_kind" => self.som.alpha_kind = parse(key, v)?,
            "som.alpha_initial" => self.som.alpha_initial = parse(key, v)?,
            "som.alpha_final" => self.som.alpha_final = parse(key, v)?,
            "som.radius_kind" => self.som.radius_kind = parse(key, v)?,
            "som.radius_initial" => self.som.radius_initial = parse(key, v)?,
            "som.radius_final" => self.som.radius_final = parse(key, v)?,

            "gcs.k" => self.gcs.k = parse(key, v)?,
            "gcs.eps_b" => self.gcs.eps_b = parse(key, v)?,
            "gcs.eps_n" => self.gcs.eps_n = parse(key, v)?,
            "gcs.counter_decay" => self.gcs.counter_decay = parse(key, v)?,
            "gcs.insert_every" => self.gcs.insert_every = parse(key, v)?,
            "gcs.delete_every" => self.gcs.delete_every = parse(key, v)?,
            "gcs.delete_threshold" => self.gcs.delete_threshold = parse(key, v)?,
            "gcs.max_nodes" => self.gcs.max_nodes = parse(key, v)?,
            "gcs.presentations" => self.gcs_presentations = parse(key, v)?,

            "gng.eps_b" => self.gng.eps_b = parse(key, v)?,
            "gng.eps_n" => self.gng.eps_n = parse(key, v)?,
            "gng.max_age" => self.gng.max_age = parse(key, v)?,
            "gng.insert_every" => self.gng.insert_every = parse(key, v)?,
            "gng.alpha_split" => self.gng.alpha_split = parse(key, v)?,
            "gng.beta_decay" => self.gng.beta_decay = parse(key, v)?,
            "gng.max_nodes" => self.gng.max_nodes = parse(key, v)?,
            "gng.presentations" => self.gng_presentations = parse(key, v)?,

            "sota.eta_winner" => self.sota.eta_winner = parse(key, v)?,
            "sota.eta_sister" => self.sota.eta_sister = parse(key, v)?,
            "sota.eta_mother" => self.sota.eta_mother = parse(key, v)?,
            "sota.cycle_presentations" => {
                let n: usize = parse(key, v)?;
                self.sota.cycle_presentations = (n > 0).then_some(n);
            }
            "sota.resource_threshold" => self.sota.resource_threshold = parse(key, v)?,
            "sota.max_leaves" => self.sota.max_leaves = parse(key, v)?,
            "sota.metric" => {
                let symbols = self.sota_alphabet;
                self.sota_metric = match parse::<SotaMetric>(key, v)? {
                    SotaMetric::Euclidean => SotaMetric::Euclidean,
                    SotaMetric::Profile { .. } => SotaMetric::Profile { symbols },
                };
            }
            "sota.alphabet" => {
                let symbols: usize = parse(key, v)?;
                if symbols == 0 {
                    return Err(Error::Config("`sota.alphabet` must be >= 1".into()));
                }
                self.sota_alphabet = symbols;
                if let SotaMetric::Profile { .. } = self.sota_metric {
                    self.sota_metric = SotaMetric::Profile { symbols };
                }
            }
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key=value` overrides such as those given with `--set`.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        for o in overrides {
            let o = o.as_ref();
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Every key with its resolved value, in a stable order. Parsing the
    /// result with [`RunConfig::from_pairs`] reproduces this config.
    pub fn to_pairs(&self) -> KeyValues {
        let mut kv: Vec<(&str, String)> = vec![("model", self.model.to_string())];
        if let Some(d) = &self.data {
            kv.push(("data", d.display().to_string()));
        }
        kv.push(("has_header", self.has_header.to_string()));
        kv.push(("seed", self.seed.to_string()));
        if let Some(o) = &self.out {
            kv.push(("out", o.display().to_string()));
        }
        let f = |v: f64| format_f64(v);
        let s = &self.som;
        kv.extend([
            ("som.width", s.width.to_string()),
            ("som.height", s.height.to_string()),
            ("som.topology", s.topology.to_string()),
            ("som.steps", s.steps.to_string()),
            ("som.alpha_kind", s.alpha_kind.to_string()),
            ("som.alpha_initial", f(s.alpha_initial)),
            ("som.alpha_final", f(s.alpha_final)),
            ("som.radius_kind", s.radius_kind.to_string()),
            ("som.radius_initial", f(s.radius_initial)),
            ("som.radius_final", f(s.radius_final)),
        ]);
        let g = &self.gcs;
        kv.extend([
            ("gcs.k", g.k.to_string()),
            ("gcs.eps_b", f(g.eps_b)),
            ("gcs.eps_n", f(g.eps_n)),
            ("gcs.counter_decay", f(g.counter_decay)),
            ("gcs.insert_every", g.insert_every.to_string()),
            ("gcs.delete_every", g.delete_every.to_string()),
            ("gcs.delete_threshold", f(g.delete_threshold)),
            ("gcs.max_nodes", g.max_nodes.to_string()),
            ("gcs.presentations", self.gcs_presentations.to_string()),
        ]);
        let n = &self.gng;
        kv.extend([
            ("gng.eps_b", f(n.eps_b)),
            ("gng.eps_n", f(n.eps_n)),
            ("gng.max_age", n.max_age.to_string()),
            ("gng.insert_every", n.insert_every.to_string()),
            ("gng.alpha_split", f(n.alpha_split)),
            ("gng.beta_decay", f(n.beta_decay)),
            ("gng.max_nodes", n.max_nodes.to_string()),
            ("gng.presentations", self.gng_presentations.to_string()),
        ]);
        let t = &self.sota;
        kv.extend([
            ("sota.eta_winner", f(t.eta_winner)),
            ("sota.eta_sister", f(t.eta_sister)),
            ("sota.eta_mother", f(t.eta_mother)),
            ("sota.cycle_presentations", t.cycle_presentations.unwrap_or(0).to_string()),
            ("sota.resource_threshold", f(t.resource_threshold)),
            ("sota.max_leaves", t.max_leaves.to_string()),
            ("sota.alphabet", self.sota_alphabet.to_string()),
            ("sota.metric", self.sota_metric.to_string()),
        ]);
        kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}
