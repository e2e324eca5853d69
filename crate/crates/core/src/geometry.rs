//! Point clouds, distance matrices and quantile scale normalization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `N` points in `D`-dimensional space. Point `i` of one cloud corresponds to
/// point `i` of every other cloud it is compared with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptyInput)?.len();
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "points must have at least one coordinate".into(),
            ));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::RaggedCloud {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            if let Some(axis) = p.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFiniteCoordinate { point: index, axis });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self { dim, coords })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.points().map(<[f64]>::to_vec).collect()
    }

    /// The sub-cloud made of the given points, in the given order.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud {
            dim: self.dim,
            coords,
        }
    }

    /// Applies `f` to every point. `f` must return vectors of one common length.
    pub fn map_points<F>(&self, mut f: F) -> Result<PointCloud>
    where
        F: FnMut(usize, &[f64]) -> Vec<f64>,
    {
        PointCloud::new(self.points().enumerate().map(|(i, p)| f(i, p)).collect())
    }

    /// Multiplies every coordinate by `c`.
    pub fn scaled(&self, c: f64) -> PointCloud {
        PointCloud {
            dim: self.dim,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }
}

/// Symmetric `N x N` matrix of nonnegative weights with zero diagonal.
/// `f64::INFINITY` marks an absent edge.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    /// Builds a matrix from row-major entries, checking every invariant.
    pub fn new(n: usize, mut data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for size {n}, got {}",
                n * n,
                data.len()
            )));
        }
        for v in data.iter_mut() {
            // -0.0 and 0.0 must be one filtration value.
            if *v == 0.0 {
                *v = 0.0;
            }
        }
        let m = Self { n, data };
        m.validate()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    /// Builds a matrix from a function of the upper-triangular index pair
    /// `(i, j)` with `i < j`; the diagonal is zero.
    pub fn from_upper<F>(n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub(crate) fn from_raw_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let v = self.data[i * n + j];
                if v.is_nan() {
                    return Err(Error::NanEntry { row: i, col: j });
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "diagonal entry ({i}, {i}) is {v}"
                    )));
                }
                if v < 0.0 {
                    return Err(Error::InvalidMatrix(format!(
                        "negative entry {v} at ({i}, {j})"
                    )));
                }
                if v != self.data[j * n + i] {
                    return Err(Error::InvalidMatrix(format!(
                        "asymmetric entries at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Entries strictly above the diagonal, row by row.
    pub fn upper_entries(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| self.get(i, j)))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// Multiplies every entry by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive and finite, got {c}"
            )));
        }
        Ok(Self {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        })
    }

    /// The submatrix on the given vertices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        let mut data = Vec::with_capacity(k * k);
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j));
            }
        }
        Self { n: k, data }
    }
}

/// Euclidean distance matrix of a cloud.
pub fn pairwise_distances(cloud: &PointCloud) -> Result<WeightMatrix> {
    let n = cloud.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        let a = cloud.point(i);
        for j in i + 1..n {
            let b = cloud.point(j);
            let d = a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    Ok(WeightMatrix::from_raw_unchecked(n, data))
}

/// Nearest-rank quantile: the element at index `ceil(q * M) - 1` of the
/// ascending sort of the `M` values.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "quantile level must lie in (0, 1], got {q}"
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "quantile of non-finite values".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let rank = nearest_rank(q, m);
    Ok(sorted[rank - 1])
}

/// `ceil(q * m)` clamped to `1..=m`. Products within rounding noise of an
/// integer are snapped to it, so `0.9 * 10` is rank 9 and not 10.
fn nearest_rank(q: f64, m: usize) -> usize {
    let x = q * m as f64;
    let nearest = x.round();
    let rank = if (x - nearest).abs() <= 1e-9 * x.max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    (rank as usize).clamp(1, m)
}

/// Scale of a weight matrix: the `q`-quantile of its finite strictly-upper
/// entries.
pub fn quantile_scale(w: &WeightMatrix, q: f64) -> Result<f64> {
    let upper: Vec<f64> = w.upper_entries().filter(|v| v.is_finite()).collect();
    if upper.is_empty() {
        return Err(Error::ZeroScale);
    }
    let s = quantile(&upper, q)?;
    if s > 0.0 {
        Ok(s)
    } else {
        Err(Error::ZeroScale)
    }
}

/// Divides `w` by its `q`-quantile scale.
pub fn quantile_normalize(w: &WeightMatrix, q: f64) -> Result<WeightMatrix> {
    let s = quantile_scale(w, q)?;
    Ok(WeightMatrix::from_raw_unchecked(
        w.n,
        w.data.iter().map(|v| v / s).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        PointCloud::new(
            (0..n)
                .map(|_| (0..d).map(|_| rng.random_range(-5.0..5.0)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn three_four_five() {
        let c = PointCloud::new(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let w = pairwise_distances(&c).unwrap();
        assert_eq!(w.to_rows(), vec![vec![0.0, 5.0], vec![5.0, 0.0]]);
    }

    #[test]
    fn single_point_distance() {
        let c = PointCloud::new(vec![vec![1.5, -2.0, 7.0]]).unwrap();
        assert_eq!(pairwise_distances(&c).unwrap().to_rows(), vec![vec![0.0]]);
    }

    #[test]
    fn empty_cloud_rejected() {
        assert_eq!(PointCloud::new(vec![]), Err(Error::EmptyInput));
    }

    #[test]
    fn ragged_and_non_finite_rejected() {
        assert!(matches!(
            PointCloud::new(vec![vec![0.0, 1.0], vec![2.0]]),
            Err(Error::RaggedCloud { index: 1, .. })
        ));
        assert!(matches!(
            PointCloud::new(vec![vec![0.0, f64::NAN]]),
            Err(Error::NonFiniteCoordinate { point: 0, axis: 1 })
        ));
    }

    #[test]
    fn distances_match_brute_force_table() {
        let c = random_cloud(5, 3, 11);
        let w = pairwise_distances(&c).unwrap();
        let pts = c.to_rows();
        for (i, a) in pts.iter().enumerate() {
            for (j, b) in pts.iter().enumerate() {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += (a[k] - b[k]).powi(2);
                }
                assert!((w.get(i, j) - acc.sqrt()).abs() < 1e-12);
            }
        }
        assert!(WeightMatrix::new(w.size(), w.as_slice().to_vec()).is_ok());
    }

    #[test]
    fn quantile_examples() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(quantile(&v, 0.9).unwrap(), 9.0);
        assert_eq!(quantile(&[7.0], 0.9).unwrap(), 7.0);
        assert_eq!(quantile(&[3.0, 1.0, 2.0], 0.5).unwrap(), 2.0);
        assert_eq!(quantile(&v, 1.0).unwrap(), 10.0);
        assert_eq!(quantile(&[], 0.9), Err(Error::EmptyInput));
        assert!(quantile(&v, 0.0).is_err());
    }

    #[test]
    fn normalize_single_pair() {
        let w = WeightMatrix::from_rows(&[vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let n = quantile_normalize(&w, 0.9).unwrap();
        assert_eq!(n.to_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn normalize_divides_by_ninth_of_ten() {
        // 5 vertices have 10 upper entries; fill them with 1..=10.
        let mut next = 0.0;
        let w = WeightMatrix::from_upper(5, |_, _| {
            next += 1.0;
            next
        })
        .unwrap();
        let n = quantile_normalize(&w, 0.9).unwrap();
        for (a, b) in n.as_slice().iter().zip(w.as_slice()) {
            assert_eq!(*a, b / 9.0);
        }
    }

    #[test]
    fn normalize_matches_counting_quantile() {
        let c = random_cloud(20, 2, 5);
        let w = pairwise_distances(&c).unwrap();
        let upper: Vec<f64> = w.upper_entries().collect();
        // Smallest entry that at least ceil(0.9 * 190) = 171 entries do not exceed.
        let s = upper
            .iter()
            .copied()
            .filter(|&v| upper.iter().filter(|&&u| u <= v).count() >= 171)
            .fold(f64::INFINITY, f64::min);
        let n = quantile_normalize(&w, 0.9).unwrap();
        for (a, b) in n.as_slice().iter().zip(w.as_slice()) {
            assert_eq!(*a, b / s);
        }
    }

    #[test]
    fn zero_scale_rejected() {
        assert_eq!(
            quantile_normalize(&WeightMatrix::zeros(3), 0.9),
            Err(Error::ZeroScale)
        );
        assert_eq!(
            quantile_normalize(&WeightMatrix::zeros(1), 0.9),
            Err(Error::ZeroScale)
        );
    }

    #[test]
    fn matrix_validation() {
        assert!(matches!(
            WeightMatrix::from_rows(&[vec![0.0, f64::NAN], vec![f64::NAN, 0.0]]),
            Err(Error::NanEntry { row: 0, col: 1 })
        ));
        assert!(WeightMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(WeightMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(WeightMatrix::from_rows(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(WeightMatrix::from_rows(&[
            vec![0.0, f64::INFINITY],
            vec![f64::INFINITY, 0.0]
        ])
        .is_ok());
    }

    proptest! {
        #[test]
        fn triangle_inequality(seed in any::<u64>(), n in 3usize..12, d in 1usize..6) {
            let w = pairwise_distances(&random_cloud(n, d, seed)).unwrap();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        prop_assert!(w.get(i, k) <= w.get(i, j) + w.get(j, k) + 1e-12);
                    }
                }
            }
        }

        #[test]
        fn quantile_permutation_invariant(
            mut values in prop::collection::vec(-1e6f64..1e6, 1..40),
            q in 0.01f64..=1.0,
            seed in any::<u64>(),
        ) {
            let before = quantile(&values, q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in (1..values.len()).rev() {
                values.swap(i, rng.random_range(0..=i));
            }
            prop_assert_eq!(before, quantile(&values, q).unwrap());
        }

        #[test]
        fn normalization_exact_under_binary_scaling(seed in any::<u64>(), e in -20i32..20) {
            let w = pairwise_distances(&random_cloud(9, 3, seed)).unwrap();
            let c = 2f64.powi(e);
            prop_assert_eq!(
                quantile_normalize(&w.scaled(c).unwrap(), 0.9).unwrap(),
                quantile_normalize(&w, 0.9).unwrap()
            );
        }
    }
}
