//! Vietoris-Rips persistence over Z/2.
//!
//! A simplex enters the filtration at the largest weight among its edges;
//! simplices with an infinite edge never enter. Dimension 0 is computed with
//! a union-find pass over the edges (Kruskal), higher dimensions by reducing
//! the coboundary matrix with clearing, one dimension at a time from low to
//! high, enumerating cofacets lazily from their colexicographic index. A
//! boundary-matrix reduction with the twist optimization is available as an
//! alternative engine through [`Reduction::HomologyTwist`].
//!
//! Bars of zero length are dropped.

mod binomial;
mod cohomology;
mod twist;
mod union_find;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WeightMatrix;

pub(crate) use binomial::binomial_u128;

/// Default cap on the number of simplices of dimension `0..=max_dim + 1`.
pub const DEFAULT_MAX_SIMPLICES: u64 = 1 << 32;

/// One persistence interval. `death` is `f64::INFINITY` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    #[serde(with = "extended_real")]
    pub death: f64,
}

impl Bar {
    pub fn new(dim: usize, birth: f64, death: f64) -> Self {
        Self { dim, birth, death }
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death == f64::INFINITY
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.birth.total_cmp(&other.birth))
            .then(self.death.total_cmp(&other.death))
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "H{}: [{}, inf)", self.dim, self.birth)
        } else {
            write!(f, "H{}: [{}, {})", self.dim, self.birth, self.death)
        }
    }
}

/// `+inf` travels as JSON `null`.
mod extended_real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// A multiset of bars, kept sorted by `(dim, birth, death)` so that two
/// barcodes are equal as multisets iff they compare equal.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    /// Sorts the bars and drops those of zero length.
    pub fn from_bars(mut bars: Vec<Bar>) -> Self {
        bars.retain(|b| b.death != b.birth);
        bars.sort_by(Bar::canonical_cmp);
        Self { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn into_bars(self) -> Vec<Bar> {
        self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn in_dim(&self, dim: usize) -> Barcode {
        Barcode {
            bars: self.bars.iter().filter(|b| b.dim == dim).copied().collect(),
        }
    }

    pub fn finite(&self) -> Barcode {
        Barcode {
            bars: self.bars.iter().filter(|b| !b.is_infinite()).copied().collect(),
        }
    }

    /// Same bars with every dimension shifted by `delta` (which may be negative).
    pub fn shift_dims(&self, delta: isize) -> Barcode {
        Barcode::from_bars(
            self.bars
                .iter()
                .map(|b| Bar::new((b.dim as isize + delta) as usize, b.birth, b.death))
                .collect(),
        )
    }

    /// Sum of `death - birth` over finite bars.
    pub fn total_finite_length(&self) -> f64 {
        self.bars
            .iter()
            .filter(|b| !b.is_infinite())
            .map(Bar::length)
            .sum()
    }

    pub fn max_finite_length(&self) -> f64 {
        self.bars
            .iter()
            .filter(|b| !b.is_infinite())
            .map(Bar::length)
            .fold(0.0, f64::max)
    }
}

/// A simplex of a Vietoris-Rips filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    /// Ascending vertex indices.
    pub vertices: Vec<usize>,
    pub filtration: f64,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Filtration order used throughout: value, then dimension, then vertex
    /// tuple lexicographically.
    pub fn filtration_cmp(&self, other: &Self) -> Ordering {
        self.filtration
            .total_cmp(&other.filtration)
            .then(self.vertices.len().cmp(&other.vertices.len()))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

/// Every simplex of dimension `<= max_dim` with finite filtration value,
/// sorted by [`Simplex::filtration_cmp`].
pub fn vr_filtration(m: &WeightMatrix, max_dim: usize) -> Vec<Simplex> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(max_dim + 1);
    for v in 0..m.size() {
        stack.push(v);
        extend_cliques(m, max_dim, &mut stack, 0.0, &mut out);
        stack.pop();
    }
    out.sort_by(Simplex::filtration_cmp);
    out
}

fn extend_cliques(
    m: &WeightMatrix,
    max_dim: usize,
    stack: &mut Vec<usize>,
    value: f64,
    out: &mut Vec<Simplex>,
) {
    out.push(Simplex {
        vertices: stack.clone(),
        filtration: value,
    });
    if stack.len() > max_dim {
        return;
    }
    let last = *stack.last().expect("non-empty");
    for v in last + 1..m.size() {
        let mut next = value;
        for &u in stack.iter() {
            next = next.max(m.get(u, v));
        }
        if next.is_finite() {
            stack.push(v);
            extend_cliques(m, max_dim, stack, next, out);
            stack.pop();
        }
    }
}

/// Reduction algorithm for dimensions `>= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// Coboundary reduction with clearing, dimensions ascending; cofacets are
    /// generated on the fly and never stored for the whole complex.
    #[default]
    Cohomology,
    /// Boundary reduction with the twist (clearing) optimization, dimensions
    /// descending. Materializes the filtration; meant for small inputs.
    HomologyTwist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Upper bound on the number of simplices of dimension `0..=max_dim + 1`
    /// (counted as if every edge were finite).
    pub max_simplices: u64,
    pub reduction: Reduction,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            max_simplices: DEFAULT_MAX_SIMPLICES,
            reduction: Reduction::Cohomology,
        }
    }
}

/// Number of simplices of dimension `0..=top_dim` on `n` vertices.
pub fn simplex_count(n: usize, top_dim: usize) -> u128 {
    (1..=top_dim + 1)
        .map(|k| binomial_u128(n, k))
        .fold(0u128, u128::saturating_add)
}

fn check_size(m: &WeightMatrix, max_dim: usize, cap: u64) -> Result<()> {
    let count = simplex_count(m.size(), max_dim + 1);
    if count > u128::from(cap) {
        return Err(Error::InstanceTooLarge { count, cap });
    }
    Ok(())
}

fn check_finite_or_inf(m: &WeightMatrix) -> Result<()> {
    let n = m.size();
    for (k, v) in m.as_slice().iter().enumerate() {
        if v.is_nan() {
            return Err(Error::NanEntry {
                row: k / n,
                col: k % n,
            });
        }
    }
    Ok(())
}

/// Barcode of the Vietoris-Rips filtration of `m` in dimensions `0..=max_dim`
/// with the default engine configuration.
pub fn vr_barcode(m: &WeightMatrix, max_dim: usize) -> Result<Barcode> {
    vr_barcode_with(m, max_dim, &EngineConfig::default())
}

pub fn vr_barcode_with(m: &WeightMatrix, max_dim: usize, config: &EngineConfig) -> Result<Barcode> {
    check_finite_or_inf(m)?;
    check_size(m, max_dim, config.max_simplices)?;
    if m.size() == 0 {
        return Ok(Barcode::default());
    }
    let bars = match config.reduction {
        Reduction::Cohomology => cohomology::barcode(m, max_dim)?,
        Reduction::HomologyTwist => twist::barcode(m, max_dim),
    };
    Ok(Barcode::from_bars(bars))
}

/// Dimension-0 barcode by Kruskal's algorithm.
pub fn zero_dim_barcode(m: &WeightMatrix) -> Result<Barcode> {
    check_finite_or_inf(m)?;
    Ok(Barcode::from_bars(cohomology::zero_dim(m).bars))
}
