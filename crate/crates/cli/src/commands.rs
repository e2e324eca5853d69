//! The four subcommands as plain functions returning serializable output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use rtd_core::baselines::{kendall_tau, linear_cka};
use rtd_core::crossgraph::Form;
use rtd_core::persistence::{Bar, EngineConfig};
use rtd_core::rtd::{r_cross_barcode, rtd_from_barcode, rtd_score, CrossBarcodeOptions, RtdConfig, RtdReport};
use rtd_core::synthetic::{make_cluster_family, make_ring_family, CloudFamily};
use rtd_core::{Error as CoreError, PointCloud};
use serde::{Deserialize, Serialize};

use crate::args::{BarcodeArgs, BenchArgs, CompareArgs, InputArgs, Suite, SynthArgs};
use crate::error::CliError;
use crate::io::{file_sha256, read_cloud, sha256_hex, write_cloud};
use crate::json;

pub const REPORT_SCHEMA: &str = "rtd-report/1";
pub const BARCODE_SCHEMA: &str = "rtd-barcode/1";
pub const EXPERIMENT_SCHEMA: &str = "rtd-experiment/1";
pub const SYNTH_SCHEMA: &str = "rtd-synth/1";

pub const CLUSTER_RADIUS: f64 = 10.0;
pub const RING_RADII: (f64, f64) = (0.5, 1.5);
pub const REFERENCE_CLUSTERS: usize = 1;
pub const REFERENCE_RINGS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest<C> {
    pub command: String,
    pub config: C,
    pub inputs: Vec<InputDigest>,
    pub version: String,
    /// Wall-clock time; the only field that varies between identical runs.
    pub duration_seconds: f64,
}

impl<C> Manifest<C> {
    fn new(command: &str, config: C, inputs: Vec<InputDigest>, started: Instant) -> Self {
        Self {
            command: command.to_string(),
            config,
            inputs,
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareOutput {
    pub schema: String,
    pub manifest: Manifest<RtdConfig>,
    pub report: RtdReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarcodeConfig {
    pub dim: usize,
    pub quantile: f64,
    pub form: Form,
    pub engine: EngineConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarcodeOutput {
    pub schema: String,
    pub manifest: Manifest<BarcodeConfig>,
    /// Sorted by dimension, birth, death.
    pub bars: Vec<Bar>,
    pub rtd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    pub name: String,
    pub values: Vec<f64>,
    /// Rank correlation with the ground truth; `None` if one side is constant.
    pub kendall_tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub suite: String,
    /// Label of the cloud every condition is compared against.
    pub reference: usize,
    pub labels: Vec<usize>,
    /// Expected ordering of the conditions.
    pub ground_truth: Vec<f64>,
    pub measures: Vec<Measure>,
}

impl ExperimentTable {
    pub fn measure(&self, name: &str) -> Option<&Measure> {
        self.measures.iter().find(|m| m.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchConfig {
    pub suite: &'static str,
    pub points: usize,
    pub rtd: RtdConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOutput {
    pub schema: String,
    pub manifest: Manifest<BenchConfig>,
    pub table: ExperimentTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SynthConfig {
    pub suite: &'static str,
    pub points: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthFile {
    pub name: String,
    /// Condition value; `None` for the base cloud.
    pub label: Option<usize>,
    pub points: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthOutput {
    pub schema: String,
    pub manifest: Manifest<SynthConfig>,
    pub files: Vec<SynthFile>,
}

/// Turns a library error about unequal clouds into the CLI's exit-3 error.
fn lift(err: CoreError) -> anyhow::Error {
    match err {
        CoreError::CorrespondenceViolated { left, right } => CliError::SizeMismatch { left, right }.into(),
        other => other.into(),
    }
}

fn load_pair(inputs: &InputArgs) -> Result<(PointCloud, PointCloud, Vec<InputDigest>)> {
    let a = read_cloud(&inputs.file_a, inputs.header)?;
    let b = read_cloud(&inputs.file_b, inputs.header)?;
    if a.len() != b.len() {
        return Err(CliError::SizeMismatch {
            left: a.len(),
            right: b.len(),
        }
        .into());
    }
    let digests = [&inputs.file_a, &inputs.file_b]
        .into_iter()
        .map(|p| {
            Ok(InputDigest {
                path: p.display().to_string(),
                sha256: file_sha256(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((a, b, digests))
}

pub fn compare(args: &CompareArgs) -> Result<CompareOutput> {
    let started = Instant::now();
    let (a, b, inputs) = load_pair(&args.inputs)?;
    let config = args.score.config();
    let report = rtd_score(&a, &b, &config).map_err(lift)?;
    Ok(CompareOutput {
        schema: REPORT_SCHEMA.into(),
        manifest: Manifest::new("compare", config, inputs, started),
        report,
    })
}

pub fn barcode(args: &BarcodeArgs) -> Result<BarcodeOutput> {
    let started = Instant::now();
    let (a, b, inputs) = load_pair(&args.inputs)?;
    let config = BarcodeConfig {
        dim: args.engine.dim,
        quantile: args.engine.quantile,
        form: args.engine.form.into(),
        engine: args.engine.engine(),
    };
    let opts = CrossBarcodeOptions {
        dim: config.dim,
        form: config.form,
        quantile: config.quantile,
        bypass_degenerate: false,
        engine: config.engine,
    };
    let bars = r_cross_barcode(&a, &b, &opts).map_err(lift)?;
    let rtd = rtd_from_barcode(&bars, config.dim)?;
    if let Some(path) = &args.svg {
        fs::write(path, crate::svg::barcode_svg(&bars)).map_err(|source| CliError::Unwritable {
            path: path.clone(),
            source,
        })?;
    }
    Ok(BarcodeOutput {
        schema: BARCODE_SCHEMA.into(),
        manifest: Manifest::new("barcode", config, inputs, started),
        bars: bars.into_bars(),
        rtd,
    })
}

fn default_points(suite: Suite) -> usize {
    match suite {
        Suite::Clusters => 300,
        Suite::Rings => 500,
    }
}

/// The family for a suite: clusters 1..=12 or rings 1..=5.
pub fn family(suite: Suite, points: usize, seed: u64) -> rtd_core::Result<CloudFamily> {
    match suite {
        Suite::Clusters => make_cluster_family(&(1..=12).collect::<Vec<_>>(), points, CLUSTER_RADIUS, seed),
        Suite::Rings => make_ring_family(&(1..=5).collect::<Vec<_>>(), points, RING_RADII.0, RING_RADII.1, seed),
    }
}

fn tau_or_none(truth: &[f64], values: &[f64]) -> Result<Option<f64>> {
    match kendall_tau(truth, values) {
        Ok(t) => Ok(Some(t)),
        Err(CoreError::UndefinedCorrelation) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Compares the reference cloud of the suite with every other condition by
/// RTD and by `1 - CKA`, and rank-correlates both with the ground truth
/// (cluster count, or distance from five rings).
pub fn bench_table(suite: Suite, points: usize, config: &RtdConfig) -> Result<ExperimentTable> {
    let fam = family(suite, points, config.seed)?;
    let (reference, conditions): (usize, Vec<usize>) = match suite {
        Suite::Clusters => (REFERENCE_CLUSTERS, (2..=12).collect()),
        Suite::Rings => (REFERENCE_RINGS, (1..=5).collect()),
    };
    let ground_truth: Vec<f64> = conditions
        .iter()
        .map(|&c| match suite {
            Suite::Clusters => c as f64,
            Suite::Rings => reference.abs_diff(c) as f64,
        })
        .collect();
    let base = fam.variant(reference).context("reference cloud missing")?;
    let mut rtd = Vec::with_capacity(conditions.len());
    let mut cka = Vec::with_capacity(conditions.len());
    for &c in &conditions {
        let other = fam.variant(c).context("condition cloud missing")?;
        rtd.push(rtd_score(base, other, config)?.rtd_score);
        cka.push(1.0 - linear_cka(base, other)?);
    }
    let measures = vec![
        Measure {
            name: "rtd".into(),
            kendall_tau: tau_or_none(&ground_truth, &rtd)?,
            values: rtd,
        },
        Measure {
            name: "1-cka".into(),
            kendall_tau: tau_or_none(&ground_truth, &cka)?,
            values: cka,
        },
    ];
    Ok(ExperimentTable {
        suite: suite.name().into(),
        reference,
        labels: conditions,
        ground_truth,
        measures,
    })
}

pub fn bench(args: &BenchArgs) -> Result<ExperimentOutput> {
    let started = Instant::now();
    let points = args.points.unwrap_or_else(|| default_points(args.suite));
    let config = args.score.config();
    let table = bench_table(args.suite, points, &config)?;
    let bench_config = BenchConfig {
        suite: args.suite.name(),
        points,
        rtd: config,
    };
    Ok(ExperimentOutput {
        schema: EXPERIMENT_SCHEMA.into(),
        manifest: Manifest::new("bench", bench_config, Vec::new(), started),
        table,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |t| format!("{t:.4}"))
}

/// Aligned plain-text rendering of an experiment table.
pub fn render_table(table: &ExperimentTable) -> String {
    let mut out = String::new();
    let label = match table.suite.as_str() {
        "clusters" => "clusters",
        _ => "rings",
    };
    write!(out, "{label:>9} {:>8}", "truth").unwrap();
    for m in &table.measures {
        write!(out, " {:>14}", m.name).unwrap();
    }
    out.push('\n');
    for (row, (l, t)) in table.labels.iter().zip(&table.ground_truth).enumerate() {
        write!(out, "{l:>9} {t:>8}").unwrap();
        for m in &table.measures {
            write!(out, " {:>14.6}", m.values[row]).unwrap();
        }
        out.push('\n');
    }
    write!(out, "{:>9} {:>8}", "tau", "").unwrap();
    for m in &table.measures {
        write!(out, " {:>14}", fmt_opt(m.kendall_tau)).unwrap();
    }
    out.push('\n');
    out
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Unwritable {
        path: path.to_path_buf(),
        source,
    })
}

pub fn synth(args: &SynthArgs) -> Result<SynthOutput> {
    let started = Instant::now();
    let points = args.points.unwrap_or_else(|| default_points(args.suite));
    let fam = family(args.suite, points, args.seed)?;
    create_dir(&args.out)?;

    let name = args.suite.name();
    let mut clouds = vec![("base.csv".to_string(), None, &fam.base)];
    for v in &fam.variants {
        clouds.push((format!("{name}-{:02}.csv", v.label), Some(v.label), &v.cloud));
    }
    let mut files = Vec::with_capacity(clouds.len());
    for (file, label, cloud) in clouds {
        let path = args.out.join(&file);
        write_cloud(&path, cloud)?;
        files.push(SynthFile {
            name: file,
            label,
            points: cloud.len(),
            sha256: file_sha256(&path)?,
        });
    }
    let config = SynthConfig {
        suite: name,
        points,
        seed: args.seed,
    };
    let output = SynthOutput {
        schema: SYNTH_SCHEMA.into(),
        manifest: Manifest::new("synth", config, Vec::new(), started),
        files,
    };
    let manifest_path = args.out.join("manifest.json");
    fs::write(&manifest_path, json::to_string(&output)?).map_err(|source| CliError::Unwritable {
        path: manifest_path,
        source,
    })?;
    Ok(output)
}

/// Digest of a JSON document with the wall-clock field removed, for
/// comparing runs.
pub fn stable_digest(json_text: &str) -> Result<String> {
    let mut value: serde_json::Value = serde_json::from_str(json_text)?;
    if let Some(m) = value.get_mut("manifest").and_then(|m| m.as_object_mut()) {
        m.remove("duration_seconds");
    }
    Ok(sha256_hex(serde_json::to_string(&value)?.as_bytes()))
}
