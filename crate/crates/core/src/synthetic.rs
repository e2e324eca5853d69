//! Deterministic "clusters" and "rings" point-cloud families.
//!
//! Every variant keeps the point order of its base cloud: point `i` of a
//! variant is a rigid translation or a radial rescaling of base point `i`.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    /// Condition value: cluster count or ring count.
    pub label: usize,
    pub cloud: PointCloud,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudFamily {
    pub base: PointCloud,
    pub variants: Vec<Variant>,
    pub seed: u64,
}

impl CloudFamily {
    pub fn variant(&self, label: usize) -> Option<&PointCloud> {
        self.variants.iter().find(|v| v.label == label).map(|v| &v.cloud)
    }
}

/// Start of each of `k` contiguous blocks covering `0..n`; the first `n % k`
/// blocks get one extra point.
fn block_of(i: usize, n: usize, k: usize) -> usize {
    let (small, extra) = (n / k, n % k);
    let big_span = extra * (small + 1);
    if i < big_span {
        i / (small + 1)
    } else {
        extra + (i - big_span) / small
    }
}

/// `n` standard-normal points in the plane, split into `k` index blocks, each
/// block moved to an equally spaced point on the circle of radius `radius`.
/// With `k = 1` the whole cloud moves to `(radius, 0)`.
pub fn make_cluster_family(k_values: &[usize], n: usize, radius: f64, seed: u64) -> Result<CloudFamily> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be finite, got {radius}")));
    }
    for &k in k_values {
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "cluster count must lie in 1..={n}, got {k}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = PointCloud::new(
        (0..n)
            .map(|_| vec![rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)])
            .collect(),
    )?;
    let variants = k_values
        .iter()
        .map(|&k| {
            let centers: Vec<(f64, f64)> = (0..k)
                .map(|j| {
                    let angle = TAU * j as f64 / k as f64;
                    (radius * angle.cos(), radius * angle.sin())
                })
                .collect();
            let cloud = base.map_points(|i, p| {
                let (cx, cy) = centers[block_of(i, n, k)];
                vec![p[0] + cx, p[1] + cy]
            })?;
            Ok(Variant { label: k, cloud })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CloudFamily { base, variants, seed })
}

/// How points are spread over the rings of a ring variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RingAssignment {
    /// Point `i` sits on ring `i mod r`. Every pair of ring counts scrambles
    /// ring membership, so the reference drifts away from all variants at once.
    Modulo,
    /// Point `i` first gets a ring `i mod R` among the `R` rings of the finest
    /// variant in the family; a variant with `r` rings merges those into `r`
    /// groups, ring `(i mod R) * r / R`. Fewer rings means more merging.
    Nested,
}

/// `n` points at uniform random angles on the unit circle. The variant with
/// `r` rings keeps every angle and moves each point onto one of `r` rings
/// spread evenly over radii `r_min..=r_max`; a single ring is the unit circle.
/// Ring membership follows [`RingAssignment::Nested`].
pub fn make_ring_family(ring_counts: &[usize], n: usize, r_min: f64, r_max: f64, seed: u64) -> Result<CloudFamily> {
    make_ring_family_with(ring_counts, n, r_min, r_max, seed, RingAssignment::Nested)
}

pub fn make_ring_family_with(
    ring_counts: &[usize],
    n: usize,
    r_min: f64,
    r_max: f64,
    seed: u64,
    assignment: RingAssignment,
) -> Result<CloudFamily> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if !(r_min.is_finite() && r_max.is_finite() && 0.0 < r_min && r_min <= r_max) {
        return Err(Error::InvalidParameter(format!(
            "ring radii must satisfy 0 < r_min <= r_max, got {r_min} and {r_max}"
        )));
    }
    if let Some(&bad) = ring_counts.iter().find(|&&r| r == 0) {
        return Err(Error::InvalidParameter(format!("ring count must be positive, got {bad}")));
    }
    let finest = ring_counts.iter().copied().max().unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
    let on_circle = |radius: &dyn Fn(usize) -> f64| -> Result<PointCloud> {
        PointCloud::new(
            angles
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let r = radius(i);
                    vec![r * a.cos(), r * a.sin()]
                })
                .collect(),
        )
    };
    let base = on_circle(&|_| 1.0)?;
    let variants = ring_counts
        .iter()
        .map(|&r| {
            let cloud = if r == 1 {
                base.clone()
            } else {
                let step = (r_max - r_min) / (r - 1) as f64;
                let ring = |i: usize| match assignment {
                    RingAssignment::Modulo => i % r,
                    RingAssignment::Nested => (i % finest) * r / finest,
                };
                on_circle(&|i| r_min + ring(i) as f64 * step)?
            };
            Ok(Variant { label: r, cloud })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CloudFamily { base, variants, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pairwise_distances;
    use crate::persistence::zero_dim_barcode;

    #[test]
    fn blocks_are_contiguous_and_balanced() {
        for (n, k) in [(300, 7), (10, 3), (5, 5), (12, 1)] {
            let blocks: Vec<usize> = (0..n).map(|i| block_of(i, n, k)).collect();
            assert!(blocks.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1));
            assert_eq!(blocks[n - 1], k - 1);
            for j in 0..k {
                let size = blocks.iter().filter(|&&b| b == j).count();
                assert!(size == n / k || size == n.div_ceil(k));
            }
        }
    }

    #[test]
    fn single_cluster_is_a_shift() {
        let f = make_cluster_family(&[1], 50, 10.0, 3).unwrap();
        let v = f.variant(1).unwrap();
        for (a, b) in f.base.points().zip(v.points()) {
            assert_eq!(b, &[a[0] + 10.0, a[1] + 0.0]);
        }
    }

    #[test]
    fn two_clusters_have_one_long_zero_dim_bar() {
        let f = make_cluster_family(&[2], 300, 10.0, 0).unwrap();
        let v = f.variant(2).unwrap();
        let bars = zero_dim_barcode(&pairwise_distances(v).unwrap()).unwrap();
        let long: Vec<_> = bars.finite().bars().iter().filter(|b| b.death > 5.0).copied().collect();
        assert_eq!(long.len(), 1);
        // Centers are 20 apart and each cluster has unit spread.
        assert!(long[0].death > 10.0 && long[0].death < 20.0, "{}", long[0]);
        let left = v.points().take(150).all(|p| p[0] > 0.0);
        let right = v.points().skip(150).all(|p| p[0] < 0.0);
        assert!(left && right);
    }

    #[test]
    fn rings_keep_angles() {
        let f = make_ring_family(&[1, 3, 5], 500, 0.5, 1.5, 9).unwrap();
        assert_eq!(f.variant(1).unwrap(), &f.base);
        for p in f.base.points() {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
        }
        let five = f.variant(5).unwrap();
        for (i, (p, b)) in five.points().zip(f.base.points()).enumerate() {
            let expected = 0.5 + (i % 5) as f64 * 0.25;
            assert!((p[0].hypot(p[1]) - expected).abs() < 1e-12);
            // Same direction as the base point.
            assert!((p[0] * b[1] - p[1] * b[0]).abs() < 1e-12);
            assert!(p[0] * b[0] + p[1] * b[1] > 0.0);
        }
    }

    #[test]
    fn nested_rings_merge_neighbours() {
        let f = make_ring_family(&[1, 2, 3, 4, 5], 100, 0.5, 1.5, 4).unwrap();
        let radius = |r: usize, i: usize| {
            let p = f.variant(r).unwrap().points().nth(i).unwrap();
            p[0].hypot(p[1])
        };
        // Finest ring of point i is i mod 5; four rings merge the two innermost.
        for i in 0..10 {
            let expected = [0.5, 0.5, 0.5 + 1.0 / 3.0, 0.5 + 2.0 / 3.0, 1.5][i % 5];
            assert!((radius(4, i) - expected).abs() < 1e-12, "{i}");
        }
        // Points sharing one of the five finest rings share a ring everywhere.
        for i in 0..100 {
            for r in 1..=5 {
                assert!((radius(r, i) - radius(r, i % 5)).abs() < 1e-12);
            }
        }
        let modulo = make_ring_family_with(&[5], 100, 0.5, 1.5, 4, RingAssignment::Modulo).unwrap();
        assert_eq!(modulo.variant(5), f.variant(5));
    }

    #[test]
    fn families_are_deterministic() {
        let a = make_cluster_family(&[1, 4, 12], 300, 10.0, 42).unwrap();
        let b = make_cluster_family(&[1, 4, 12], 300, 10.0, 42).unwrap();
        assert_eq!(a, b);
        let c = make_cluster_family(&[1, 4, 12], 300, 10.0, 43).unwrap();
        assert_ne!(a.base, c.base);
        let r1 = make_ring_family(&[2, 4], 100, 0.5, 1.5, 1).unwrap();
        assert_ne!(r1, make_ring_family_with(&[2, 4], 100, 0.5, 1.5, 1, RingAssignment::Modulo).unwrap());
        let r2 = make_ring_family(&[2, 4], 100, 0.5, 1.5, 1).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(make_cluster_family(&[0], 10, 10.0, 0).is_err());
        assert!(make_cluster_family(&[11], 10, 10.0, 0).is_err());
        assert!(make_ring_family(&[0], 10, 0.5, 1.5, 0).is_err());
        assert!(make_ring_family(&[2], 10, 1.5, 0.5, 0).is_err());
    }
}
