//! Training orchestration and artifact export.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::cli::config::{ModelKind, RunConfig};
use crate::cli::io::{
    assignments_csv, edges_text, format_f64, key_values_text, read_codebook, read_edges, write_all, Codebook,
    EdgeRecord, KeyValues, UnitRecord,
};
use crate::common::{squared_distance_unchecked, Dataset, RandomStream, Vector};
use crate::error::{Error, Result};
use crate::gcs::{gcs_train, GcsNetwork};
use crate::gng::{gng_train, GngGraph};
use crate::metrics::{self, component_count};
use crate::som::{som_init, som_train, SomGrid, Topology};
use crate::sota::{sota_train, SotaMetric, SotaTree};

pub const CODEBOOK_FILE: &str = "codebook.csv";
pub const EDGES_FILE: &str = "edges.txt";
pub const ASSIGNMENTS_FILE: &str = "assignments.csv";
pub const METRICS_FILE: &str = "metrics.txt";
pub const CONFIG_FILE: &str = "config.txt";

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Som(SomGrid),
    Gcs(GcsNetwork),
    Gng(GngGraph),
    Sota(SotaTree),
}

/// Trains the configured model on `data`.
pub fn train(config: &RunConfig, data: &Dataset) -> Result<TrainedModel> {
    let mut rng = RandomStream::new(config.seed);
    Ok(match config.model {
        ModelKind::Som => {
            let s = &config.som;
            let params = s.params()?;
            let grid = som_init(s.width, s.height, s.topology, data, &mut rng)?;
            TrainedModel::Som(som_train(data, &params, grid, &mut rng)?)
        }
        ModelKind::Gcs => TrainedModel::Gcs(gcs_train(data, &config.gcs, &mut rng, config.gcs_presentations)?),
        ModelKind::Gng => TrainedModel::Gng(gng_train(data, &config.gng, &mut rng, config.gng_presentations)?),
        ModelKind::Sota => TrainedModel::Sota(sota_train(data, &config.sota, config.sota_metric)?.tree),
    })
}

/// A model flattened to what the export files hold.
#[derive(Debug, Clone, PartialEq)]
pub struct ExportedModel {
    pub kind: ModelKind,
    pub codebook: Codebook,
    pub edges: Vec<EdgeRecord>,
    /// Grid shape for SOM exports.
    pub grid: Option<(usize, usize, Topology)>,
    /// Distance used for competition; only SOTA can use a non-Euclidean one.
    pub metric: SotaMetric,
}

impl ExportedModel {
    /// Units that compete for inputs: all of them, except only leaves for SOTA.
    pub fn competing_units(&self) -> Vec<&UnitRecord> {
        match self.kind {
            ModelKind::Sota => {
                let parents: BTreeSet<usize> = self.edges.iter().map(|e| e.a).collect();
                self.codebook.units.iter().filter(|u| !parents.contains(&u.id)).collect()
            }
            _ => self.codebook.units.iter().collect(),
        }
    }

    /// Unit id of the best match for every row, with its distance.
    fn matches(&self, data: &Dataset) -> Result<Vec<(usize, f64)>> {
        let units = self.competing_units();
        if units.is_empty() {
            return Err(Error::NotEnoughUnits { required: 1, found: 0 });
        }
        data.check_dim(self.codebook.dim())?;
        if self.metric == SotaMetric::Euclidean {
            let vectors: Vec<&[f64]> = units.iter().map(|u| u.w.as_slice()).collect();
            let winners = metrics::assignments(&vectors, data)?;
            return Ok(winners
                .into_iter()
                .zip(data.iter())
                .map(|(i, x)| (units[i].id, squared_distance_unchecked(&units[i].w, x).sqrt()))
                .collect());
        }
        self.metric.check_dataset(data)?;
        data.iter()
            .map(|x| {
                let mut best: Option<(usize, f64)> = None;
                for u in &units {
                    let d = self.metric.distance(x, &u.w)?;
                    if best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((u.id, d));
                    }
                }
                Ok(best.expect("at least one unit"))
            })
            .collect()
    }

    /// Unit id of the best match for every row.
    pub fn assign(&self, data: &Dataset) -> Result<Vec<usize>> {
        Ok(self.matches(data)?.into_iter().map(|(id, _)| id).collect())
    }

    fn som_grid(&self) -> Result<Option<SomGrid>> {
        let Some((w, h, topology)) = self.grid else {
            return Ok(None);
        };
        let mut units: Vec<&UnitRecord> = self.codebook.units.iter().collect();
        units.sort_by_key(|u| u.id);
        if units.iter().enumerate().any(|(i, u)| u.id != i) {
            return Err(Error::Config("SOM codebook ids must be 0..width*height".into()));
        }
        let codebook: Vec<Vector> = units.into_iter().map(|u| u.w.clone()).collect();
        SomGrid::new(w, h, topology, codebook).map(Some)
    }

    /// Metrics of the competing units against `data`, as ordered key/value pairs.
    pub fn metrics(&self, data: &Dataset) -> Result<KeyValues> {
        let units = self.competing_units();
        let report = match self.som_grid()? {
            Some(grid) => metrics::MetricReport::for_grid(&grid, data)?,
            None => {
                let matches = self.matches(data)?;
                let n = data.len() as f64;
                let winners: BTreeSet<usize> = matches.iter().map(|m| m.0).collect();
                metrics::MetricReport {
                    quantization_error: matches.iter().map(|m| m.1).sum::<f64>() / n,
                    squared_quantization_error: matches.iter().map(|m| m.1 * m.1).sum::<f64>() / n,
                    topographic_error: None,
                    dead_units: units.len() - winners.len(),
                    n_units: units.len(),
                    n_inputs: data.len(),
                }
            }
        };
        let mut kv: Vec<(&str, String)> = vec![
            ("model", self.kind.to_string()),
            ("n_inputs", report.n_inputs.to_string()),
            ("n_units", report.n_units.to_string()),
            ("quantization_error", format_f64(report.quantization_error)),
            ("quantization_error_squared", format_f64(report.squared_quantization_error)),
            ("dead_units", report.dead_units.to_string()),
        ];
        if let Some(te) = report.topographic_error {
            kv.push(("topographic_error", format_f64(te)));
        }
        kv.push(("n_edges", self.edges.len().to_string()));
        match self.kind {
            ModelKind::Gcs | ModelKind::Gng => {
                let ids = self.codebook.units.iter().map(|u| u.id);
                let components = component_count(ids, self.edges.iter().map(|e| (e.a, e.b)));
                kv.push(("components", components.to_string()));
            }
            ModelKind::Sota => {
                kv.push(("n_nodes", self.codebook.units.len().to_string()));
                let max = units.iter().map(|u| u.value).fold(0.0, f64::max);
                kv.push(("max_resource", format_f64(max)));
            }
            ModelKind::Som => {}
        }
        Ok(kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

/// Flattens a trained model. SOM units carry their hit counts on `data`.
pub fn export(model: &TrainedModel, data: &Dataset) -> Result<ExportedModel> {
    let record = |id: usize, w: &Vector, value: f64| UnitRecord { id, w: w.clone(), value };
    Ok(match model {
        TrainedModel::Som(grid) => {
            let mut hits = vec![0usize; grid.len()];
            for c in metrics::assignments(grid.codebook(), data)? {
                hits[c] += 1;
            }
            let units = grid
                .codebook()
                .iter()
                .enumerate()
                .map(|(i, w)| record(i, w, hits[i] as f64))
                .collect();
            let mut edges = Vec::new();
            for a in 0..grid.len() {
                for b in grid.grid_neighbors(a, 1.0)? {
                    if b > a {
                        edges.push(EdgeRecord { a, b, tag: None });
                    }
                }
            }
            ExportedModel {
                kind: ModelKind::Som,
                codebook: Codebook { value_name: "hits".into(), units },
                edges,
                grid: Some((grid.width(), grid.height(), grid.topology())),
                metric: SotaMetric::Euclidean,
            }
        }
        TrainedModel::Gcs(net) => ExportedModel {
            kind: ModelKind::Gcs,
            codebook: Codebook {
                value_name: "counter".into(),
                units: net.nodes().map(|n| record(n.id, &n.w, n.counter)).collect(),
            },
            edges: net.edges().into_iter().map(|(a, b)| EdgeRecord { a, b, tag: None }).collect(),
            grid: None,
            metric: SotaMetric::Euclidean,
        },
        TrainedModel::Gng(g) => ExportedModel {
            kind: ModelKind::Gng,
            codebook: Codebook {
                value_name: "error".into(),
                units: g.nodes().map(|n| record(n.id, &n.w, n.error)).collect(),
            },
            edges: g
                .edges()
                .map(|(a, b, age)| EdgeRecord { a, b, tag: Some(u64::from(age)) })
                .collect(),
            grid: None,
            metric: SotaMetric::Euclidean,
        },
        TrainedModel::Sota(tree) => ExportedModel {
            kind: ModelKind::Sota,
            codebook: Codebook {
                value_name: "resource".into(),
                units: tree.nodes().iter().map(|n| record(n.id, &n.profile, n.resource)).collect(),
            },
            edges: tree
                .edges()
                .into_iter()
                .map(|(p, c)| EdgeRecord {
                    a: p,
                    b: c,
                    tag: Some(u64::from(tree.nodes()[c].frozen)),
                })
                .collect(),
            grid: None,
            metric: tree.metric(),
        },
    })
}

/// Reads an exported model back from a run directory.
pub fn load_exported(dir: &Path) -> Result<(RunConfig, ExportedModel)> {
    let config = RunConfig::from_file(&dir.join(CONFIG_FILE), None)?;
    let codebook = read_codebook(&dir.join(CODEBOOK_FILE))?;
    let edges = read_edges(&dir.join(EDGES_FILE))?;
    let grid = (config.model == ModelKind::Som).then_some((config.som.width, config.som.height, config.som.topology));
    let exported = ExportedModel {
        kind: config.model,
        codebook,
        edges,
        grid,
        metric: if config.model == ModelKind::Sota { config.sota_metric } else { SotaMetric::Euclidean },
    };
    Ok((config, exported))
}

/// Loads the configured dataset.
pub fn load_data(config: &RunConfig) -> Result<Dataset> {
    let path = config
        .data
        .as_ref()
        .ok_or_else(|| Error::Config("no dataset given".into()))?;
    crate::cli::io::ingest_csv(path, config.has_header)
}

/// Output directory: the config's `out`, else the environment default.
pub fn output_dir(config: &RunConfig) -> PathBuf {
    config.out.clone().unwrap_or_else(default_output_dir)
}

pub const OUTPUT_ENV: &str = "SELFORG_OUT";

pub fn default_output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("selforg-out"))
}

/// File contents produced by a training run, keyed by file name.
pub fn render_artifacts(config: &RunConfig, data: &Dataset, model: &TrainedModel) -> Result<Vec<(&'static str, String)>> {
    let exported = export(model, data)?;
    let assignments = exported.assign(data)?;
    let metrics = exported.metrics(data)?;
    Ok(vec![
        (CODEBOOK_FILE, exported.codebook.to_csv()),
        (EDGES_FILE, edges_text(&exported.edges)),
        (ASSIGNMENTS_FILE, assignments_csv(&assignments)),
        (METRICS_FILE, key_values_text(&metrics)),
        (CONFIG_FILE, key_values_text(&config.to_pairs())),
    ])
}

/// Trains and writes the full artifact set. Returns the output directory.
///
/// Everything is computed before the first file is written, and files already
/// written are removed if a later write fails.
pub fn run(config: &RunConfig) -> Result<PathBuf> {
    let data = load_data(config)?;
    let model = train(config, &data)?;
    let files = render_artifacts(config, &data, &model)?;
    let dir = output_dir(config);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let files: Vec<(PathBuf, String)> = files.into_iter().map(|(name, text)| (dir.join(name), text)).collect();
    write_all(&files)?;
    Ok(dir)
}
