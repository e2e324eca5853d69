//! R-Cross-Barcodes and the RTD score.
//!
//! Both clouds are reduced to distance matrices normalized by their own
//! quantile, glued into the augmented matrix, and fed to the persistence
//! engine. Bars of the resulting barcode mark scales at which the two clouds
//! disagree; RTD sums their lengths.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crossgraph::{augmented_matrix, Form};
use crate::error::{Error, Result};
use crate::geometry::{pairwise_distances, quantile_normalize, quantile_scale, PointCloud, WeightMatrix};
use crate::persistence::{vr_barcode_with, Barcode, EngineConfig};

pub const DEFAULT_QUANTILE: f64 = 0.9;

/// Settings for a single cross-barcode computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossBarcodeOptions {
    pub dim: usize,
    pub form: Form,
    pub quantile: f64,
    /// Leave a zero-scale cloud unnormalized instead of failing. Needed when
    /// one cloud collapses to a single point.
    pub bypass_degenerate: bool,
    pub engine: EngineConfig,
}

impl Default for CrossBarcodeOptions {
    fn default() -> Self {
        Self {
            dim: 1,
            form: Form::Algorithm1,
            quantile: DEFAULT_QUANTILE,
            bypass_degenerate: false,
            engine: EngineConfig::default(),
        }
    }
}

/// Pairwise distances divided by their `q`-quantile.
pub fn normalized_distances(cloud: &PointCloud, q: f64, bypass_degenerate: bool) -> Result<WeightMatrix> {
    let w = pairwise_distances(cloud)?;
    if bypass_degenerate && matches!(quantile_scale(&w, q), Err(Error::ZeroScale)) {
        return Ok(w);
    }
    quantile_normalize(&w, q)
}

/// Full barcode, dimensions `0..=max_dim`, of the augmented matrix built from
/// two already normalized weight matrices.
pub fn cross_barcode_of_matrices(
    w: &WeightMatrix,
    w_tilde: &WeightMatrix,
    max_dim: usize,
    form: Form,
    engine: &EngineConfig,
) -> Result<Barcode> {
    let aug = augmented_matrix(w, w_tilde, form)?;
    vr_barcode_with(&aug.matrix, max_dim, engine)
}

fn check_correspondence(p: &PointCloud, p_tilde: &PointCloud) -> Result<()> {
    if p.len() != p_tilde.len() {
        return Err(Error::CorrespondenceViolated {
            left: p.len(),
            right: p_tilde.len(),
        });
    }
    Ok(())
}

/// R-Cross-Barcode of `(p, p_tilde)` in dimension `opts.dim`.
pub fn r_cross_barcode(p: &PointCloud, p_tilde: &PointCloud, opts: &CrossBarcodeOptions) -> Result<Barcode> {
    check_correspondence(p, p_tilde)?;
    let w = normalized_distances(p, opts.quantile, opts.bypass_degenerate)?;
    let w_tilde = normalized_distances(p_tilde, opts.quantile, opts.bypass_degenerate)?;
    let full = cross_barcode_of_matrices(&w, &w_tilde, opts.dim, opts.form, &opts.engine)?;
    Ok(full.in_dim(opts.dim))
}

/// Sum of bar lengths in dimension `dim`. An infinite bar there means the
/// augmented complex was built wrong, so it is reported as an error.
pub fn rtd_from_barcode(barcode: &Barcode, dim: usize) -> Result<f64> {
    let mut total = 0.0;
    for bar in barcode.bars().iter().filter(|b| b.dim == dim) {
        if bar.is_infinite() {
            return Err(Error::InfiniteBar { dim, birth: bar.birth });
        }
        total += bar.length();
    }
    Ok(total)
}

/// Directional RTD in dimension `opts.dim`.
pub fn rtd_i(p: &PointCloud, p_tilde: &PointCloud, opts: &CrossBarcodeOptions) -> Result<f64> {
    rtd_from_barcode(&r_cross_barcode(p, p_tilde, opts)?, opts.dim)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RtdConfig {
    pub batch_size: usize,
    pub batches: usize,
    pub dim: usize,
    pub quantile: f64,
    pub form: Form,
    pub seed: u64,
    pub symmetric: bool,
    pub engine: EngineConfig,
}

impl Default for RtdConfig {
    fn default() -> Self {
        Self {
            batch_size: 500,
            batches: 10,
            dim: 1,
            quantile: DEFAULT_QUANTILE,
            form: Form::Algorithm1,
            seed: 0,
            symmetric: true,
            engine: EngineConfig::default(),
        }
    }
}

impl RtdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter("batch size must be positive".into()));
        }
        if self.batches == 0 {
            return Err(Error::InvalidParameter("batch count must be positive".into()));
        }
        if self.dim == 0 {
            return Err(Error::InvalidParameter("homology dimension must be at least 1".into()));
        }
        if !(self.quantile > 0.0 && self.quantile <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "quantile must lie in (0, 1], got {}",
                self.quantile
            )));
        }
        Ok(())
    }

    fn cross_options(&self) -> CrossBarcodeOptions {
        CrossBarcodeOptions {
            dim: self.dim,
            form: self.form,
            quantile: self.quantile,
            bypass_degenerate: false,
            engine: self.engine,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarcodeSummary {
    pub bars: usize,
    pub max_length: f64,
}

impl BarcodeSummary {
    fn of(barcode: &Barcode) -> Self {
        Self {
            bars: barcode.len(),
            max_length: barcode.max_finite_length(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchResult {
    pub index: usize,
    /// Number of points in the batch.
    pub points: usize,
    pub forward: f64,
    pub backward: Option<f64>,
    pub forward_summary: BarcodeSummary,
    pub backward_summary: Option<BarcodeSummary>,
}

impl BatchResult {
    /// The batch's contribution to the score.
    pub fn score(&self) -> f64 {
        match self.backward {
            Some(b) => (self.forward + b) / 2.0,
            None => self.forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtdReport {
    pub config: RtdConfig,
    /// Batches actually computed; 1 when the clouds fit in one batch.
    pub batches_run: usize,
    pub per_batch: Vec<BatchResult>,
    pub mean_forward: f64,
    pub mean_backward: Option<f64>,
    pub rtd_score: f64,
    /// Population standard deviation of the per-batch scores.
    pub score_std: f64,
}

/// Point indices of batch `j`: the whole cloud if it fits in one batch,
/// otherwise `batch_size` distinct indices drawn from a stream derived from
/// the seed and the batch index, sorted ascending.
pub fn batch_indices(cloud_size: usize, config: &RtdConfig, j: usize) -> Vec<usize> {
    if cloud_size <= config.batch_size {
        return (0..cloud_size).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(j as u64);
    let mut picked = index::sample(&mut rng, cloud_size, config.batch_size).into_vec();
    picked.sort_unstable();
    picked
}

fn run_direction(a: &PointCloud, b: &PointCloud, opts: &CrossBarcodeOptions) -> Result<(f64, BarcodeSummary)> {
    let barcode = r_cross_barcode(a, b, opts)?;
    Ok((rtd_from_barcode(&barcode, opts.dim)?, BarcodeSummary::of(&barcode)))
}

fn run_batch(p: &PointCloud, p_tilde: &PointCloud, config: &RtdConfig, j: usize) -> Result<BatchResult> {
    let indices = batch_indices(p.len(), config, j);
    let sp = p.select(&indices);
    let st = p_tilde.select(&indices);
    let opts = config.cross_options();
    let (fwd, bwd) = if config.symmetric {
        let (f, b) = rayon::join(|| run_direction(&sp, &st, &opts), || run_direction(&st, &sp, &opts));
        (f?, Some(b?))
    } else {
        (run_direction(&sp, &st, &opts)?, None)
    };
    Ok(BatchResult {
        index: j,
        points: indices.len(),
        forward: fwd.0,
        backward: bwd.map(|b| b.0),
        forward_summary: fwd.1,
        backward_summary: bwd.map(|b| b.1),
    })
}

fn mean(values: impl Iterator<Item = f64>, count: usize) -> f64 {
    values.sum::<f64>() / count as f64
}

/// Batched, optionally symmetrized RTD between two corresponding clouds.
/// Batches run in parallel; the result depends only on the inputs and
/// `config`.
pub fn rtd_score(p: &PointCloud, p_tilde: &PointCloud, config: &RtdConfig) -> Result<RtdReport> {
    config.validate()?;
    check_correspondence(p, p_tilde)?;
    let batches_run = if p.len() <= config.batch_size { 1 } else { config.batches };
    let per_batch = (0..batches_run)
        .into_par_iter()
        .map(|j| run_batch(p, p_tilde, config, j))
        .collect::<Result<Vec<_>>>()?;

    let n = per_batch.len();
    let mean_forward = mean(per_batch.iter().map(|b| b.forward), n);
    let mean_backward = config
        .symmetric
        .then(|| mean(per_batch.iter().map(|b| b.backward.unwrap_or(0.0)), n));
    let rtd_score = match mean_backward {
        Some(b) => (mean_forward + b) / 2.0,
        None => mean_forward,
    };
    let batch_mean = mean(per_batch.iter().map(BatchResult::score), n);
    let variance = mean(per_batch.iter().map(|b| (b.score() - batch_mean).powi(2)), n);
    Ok(RtdReport {
        config: *config,
        batches_run,
        per_batch,
        mean_forward,
        mean_backward,
        rtd_score,
        score_std: variance.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_barcode;
    use crate::persistence::Bar;
    use crate::synthetic::make_cluster_family;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn random_cloud(seed: u64, n: usize, d: usize) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointCloud::new(
            (0..n)
                .map(|_| (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identical_clouds_give_empty_barcode_and_zero_score() {
        let p = random_cloud(1, 40, 3);
        for dim in 1..=2 {
            let opts = CrossBarcodeOptions { dim, ..Default::default() };
            assert!(r_cross_barcode(&p, &p, &opts).unwrap().is_empty());
        }
        let report = rtd_score(&p, &p, &RtdConfig::default()).unwrap();
        assert_eq!(report.rtd_score, 0.0);
        assert_eq!(report.batches_run, 1);
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let p = random_cloud(1, 5, 2);
        let q = random_cloud(2, 6, 2);
        let err = r_cross_barcode(&p, &q, &CrossBarcodeOptions::default()).unwrap_err();
        assert!(err.to_string().starts_with("correspondence violated"));
        assert!(rtd_score(&p, &q, &RtdConfig::default()).is_err());
    }

    #[test]
    fn collapsed_cloud_needs_bypass() {
        let p = random_cloud(3, 10, 2);
        let z = PointCloud::new(vec![vec![1.0, 1.0]; 10]).unwrap();
        let opts = CrossBarcodeOptions::default();
        assert_eq!(r_cross_barcode(&p, &z, &opts), Err(Error::ZeroScale));
        let opts = CrossBarcodeOptions {
            bypass_degenerate: true,
            ..opts
        };
        let got = r_cross_barcode(&p, &z, &opts).unwrap();
        let w = normalized_distances(&p, DEFAULT_QUANTILE, false).unwrap();
        let expected: Vec<Bar> = naive_barcode(&w, 0)
            .unwrap()
            .finite()
            .bars()
            .iter()
            .map(|b| Bar::new(1, b.birth, b.death))
            .collect();
        assert_eq!(got, Barcode::from_bars(expected));
    }

    #[test]
    fn single_loop_pair_gives_one_bar() {
        // Three clusters {1,3}, {2}, {4} in w; w~ additionally merges 2 and 4
        // early, before w merges 2 with the rest.
        let w = WeightMatrix::from_rows(&[
            vec![0.0, 6.0, 1.0, 3.0],
            vec![6.0, 0.0, 4.0, 5.0],
            vec![1.0, 4.0, 0.0, 3.5],
            vec![3.0, 5.0, 3.5, 0.0],
        ])
        .unwrap();
        let mut rows = w.to_rows();
        rows[1][3] = 2.0;
        rows[3][1] = 2.0;
        let wt = WeightMatrix::from_rows(&rows).unwrap();
        let engine = EngineConfig::default();
        let got = cross_barcode_of_matrices(&w, &wt, 1, Form::Algorithm1, &engine)
            .unwrap()
            .in_dim(1);
        assert_eq!(got.bars(), &[Bar::new(1, 2.0, 4.0)]);
        assert_eq!(rtd_from_barcode(&got, 1).unwrap(), 2.0);
    }

    #[test]
    fn infinite_bar_is_an_error() {
        let b = Barcode::from_bars(vec![Bar::new(1, 0.5, f64::INFINITY)]);
        assert_eq!(rtd_from_barcode(&b, 1), Err(Error::InfiniteBar { dim: 1, birth: 0.5 }));
        assert_eq!(rtd_from_barcode(&b, 2), Ok(0.0));
    }

    #[test]
    fn more_clusters_mean_larger_rtd() {
        let family = make_cluster_family(&[1, 2, 12], 60, 10.0, 7).unwrap();
        let opts = CrossBarcodeOptions::default();
        let base = &family.variants[0].cloud;
        let two = rtd_i(base, &family.variants[1].cloud, &opts).unwrap();
        let twelve = rtd_i(base, &family.variants[2].cloud, &opts).unwrap();
        assert!(two > 0.0);
        assert!(two < twelve, "{two} vs {twelve}");
    }

    #[test]
    fn swap_symmetry_is_exact() {
        let p = random_cloud(11, 30, 2);
        let q = random_cloud(12, 30, 2);
        let cfg = RtdConfig {
            batch_size: 20,
            batches: 3,
            ..Default::default()
        };
        let a = rtd_score(&p, &q, &cfg).unwrap();
        let b = rtd_score(&q, &p, &cfg).unwrap();
        assert_eq!(a.rtd_score.to_bits(), b.rtd_score.to_bits());
        assert_eq!(a.mean_forward, b.mean_backward.unwrap());
    }

    #[test]
    fn batches_are_deterministic_and_distinct() {
        let cfg = RtdConfig {
            batch_size: 10,
            batches: 4,
            seed: 5,
            ..Default::default()
        };
        let first: Vec<_> = (0..4).map(|j| batch_indices(50, &cfg, j)).collect();
        let again: Vec<_> = (0..4).map(|j| batch_indices(50, &cfg, j)).collect();
        assert_eq!(first, again);
        assert_ne!(first[0], first[1]);
        for b in &first {
            assert_eq!(b.len(), 10);
            assert!(b.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(batch_indices(8, &cfg, 3), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn one_way_score_is_forward_mean() {
        let p = random_cloud(21, 25, 2);
        let q = random_cloud(22, 25, 2);
        let cfg = RtdConfig {
            symmetric: false,
            ..Default::default()
        };
        let r = rtd_score(&p, &q, &cfg).unwrap();
        assert_eq!(r.mean_backward, None);
        assert_eq!(r.rtd_score, r.mean_forward);
        let direct = rtd_i(&p, &q, &CrossBarcodeOptions::default()).unwrap();
        assert_eq!(r.rtd_score, direct);
    }

    #[test]
    fn power_of_two_scaling_is_exact() {
        let p = random_cloud(31, 30, 3);
        let q = random_cloud(32, 30, 3);
        let cfg = RtdConfig::default();
        let base = rtd_score(&p, &q, &cfg).unwrap().rtd_score;
        let scaled = rtd_score(&p.scaled(4.0), &q.scaled(0.125), &cfg).unwrap().rtd_score;
        assert_eq!(base.to_bits(), scaled.to_bits());
    }

    #[test]
    fn invalid_config_is_rejected() {
        let p = random_cloud(1, 5, 2);
        for cfg in [
            RtdConfig { batch_size: 0, ..Default::default() },
            RtdConfig { batches: 0, ..Default::default() },
            RtdConfig { dim: 0, ..Default::default() },
            RtdConfig { quantile: 0.0, ..Default::default() },
        ] {
            assert!(matches!(rtd_score(&p, &p, &cfg), Err(Error::InvalidParameter(_))));
        }
    }
}
