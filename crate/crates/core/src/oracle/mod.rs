//! Slow reference computations for small complexes.
//!
//! Nothing here shares code with the persistence engine: simplices are
//! enumerated as plain vertex subsets, and every rank is computed by dense
//! Gaussian elimination over Z/2. These functions exist to check the engine
//! and the exact sequence relating the cross-barcode to the two input
//! filtrations.

mod z2;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::crossgraph::{augmented_matrix, min_union, Form};
use crate::error::{Error, Result};
use crate::geometry::WeightMatrix;
use crate::persistence::{Bar, Barcode};
use z2::BitVec;

/// Vertex limit of [`naive_barcode`], [`betti_at`] and [`map_rank`].
pub const ORACLE_MAX_VERTICES: usize = 12;

/// Point limit of [`exactness_check`]; the augmented complex has `2N + 1` vertices.
pub const EXACTNESS_MAX_POINTS: usize = 7;

/// Betti numbers at a fixed threshold, indexed by dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRanks {
    pub betti: Vec<usize>,
}

fn guard(m: &WeightMatrix, limit: usize) -> Result<()> {
    if m.size() > limit {
        return Err(Error::OracleTooLarge {
            limit,
            found: m.size(),
        });
    }
    Ok(())
}

/// All vertex subsets of size `1..=top_dim + 1`, in lexicographic order,
/// paired with the largest edge weight among their vertices.
fn all_simplices(m: &WeightMatrix, top_dim: usize) -> Vec<(Vec<usize>, f64)> {
    let n = m.size();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let vertices: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if vertices.len() > top_dim + 1 {
            continue;
        }
        let mut value = 0.0f64;
        for (a, &u) in vertices.iter().enumerate() {
            for &v in &vertices[a + 1..] {
                value = value.max(m.get(u, v));
            }
        }
        out.push((vertices, value));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn facets(vertices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..vertices.len()).map(move |skip| {
        vertices
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != skip)
            .map(|(_, &v)| v)
            .collect()
    })
}

/// Barcode by the textbook reduction of the full boundary matrix: no
/// clearing, no shortcuts. At most [`ORACLE_MAX_VERTICES`] vertices.
pub fn naive_barcode(m: &WeightMatrix, max_dim: usize) -> Result<Barcode> {
    guard(m, ORACLE_MAX_VERTICES)?;
    Ok(naive_barcode_unchecked(m, max_dim))
}

fn naive_barcode_unchecked(m: &WeightMatrix, max_dim: usize) -> Barcode {
    let mut simplices: Vec<(Vec<usize>, f64)> = all_simplices(m, max_dim + 1)
        .into_iter()
        .filter(|(_, v)| v.is_finite())
        .collect();
    simplices.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then(a.0.len().cmp(&b.0.len()))
            .then_with(|| a.0.cmp(&b.0))
    });
    let total = simplices.len();
    let position: HashMap<Vec<usize>, usize> = simplices
        .iter()
        .enumerate()
        .map(|(k, (s, _))| (s.clone(), k))
        .collect();

    let mut columns: Vec<BitVec> = Vec::with_capacity(total);
    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    let mut paired_low: Vec<Option<usize>> = vec![None; total];
    for (j, (vertices, _)) in simplices.iter().enumerate() {
        let mut col = BitVec::zeros(total);
        if vertices.len() > 1 {
            for f in facets(vertices) {
                col.flip(position[&f]);
            }
        }
        while let Some(low) = col.last_one() {
            match low_owner.get(&low) {
                Some(&k) => col.xor_assign(&columns[k]),
                None => break,
            }
        }
        if let Some(low) = col.last_one() {
            low_owner.insert(low, j);
            paired_low[j] = Some(low);
        }
        columns.push(col);
    }

    let mut bars = Vec::new();
    for (j, (vertices, value)) in simplices.iter().enumerate() {
        let dim = vertices.len() - 1;
        if let Some(low) = paired_low[j] {
            let (birth_simplex, birth) = &simplices[low];
            bars.push(Bar::new(birth_simplex.len() - 1, *birth, *value));
        } else if dim <= max_dim && !low_owner.contains_key(&j) {
            bars.push(Bar::new(dim, *value, f64::INFINITY));
        }
    }
    Barcode::from_bars(bars)
}

/// Chain groups of `R_alpha(m)` in dimensions `0..=top_dim`.
struct Complex {
    by_dim: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Complex {
    fn at(m: &WeightMatrix, alpha: f64, top_dim: usize) -> Self {
        let mut by_dim = vec![Vec::new(); top_dim + 1];
        for (s, v) in all_simplices(m, top_dim) {
            if v <= alpha {
                by_dim[s.len() - 1].push(s);
            }
        }
        let index = by_dim
            .iter()
            .map(|list| {
                list.iter()
                    .enumerate()
                    .map(|(k, s)| (s.clone(), k))
                    .collect()
            })
            .collect();
        Self { by_dim, index }
    }

    fn count(&self, dim: usize) -> usize {
        self.by_dim[dim].len()
    }

    /// Boundary of `simplex` as a vector over the `(dim - 1)`-simplices of `self`.
    fn boundary_of(&self, simplex: &[usize]) -> BitVec {
        let dim = simplex.len() - 1;
        let mut v = BitVec::zeros(self.count(dim - 1));
        for f in facets(simplex) {
            v.flip(self.index[dim - 1][&f]);
        }
        v
    }

    /// Images of the `dim`-simplices under the boundary map.
    fn boundary_images(&self, dim: usize) -> Vec<BitVec> {
        if dim == 0 {
            return self.by_dim[0]
                .iter()
                .map(|_| BitVec::zeros(0))
                .collect();
        }
        self.by_dim[dim]
            .iter()
            .map(|s| self.boundary_of(s))
            .collect()
    }

    fn boundary_rank(&self, dim: usize) -> usize {
        if dim == 0 || dim >= self.by_dim.len() {
            0
        } else {
            z2::rank(&self.boundary_images(dim))
        }
    }

    fn betti(&self, dim: usize) -> usize {
        self.count(dim) - self.boundary_rank(dim) - self.boundary_rank(dim + 1)
    }
}

/// Betti numbers of `R_alpha(m)` in dimensions `0..=max_dim`.
pub fn betti_at(m: &WeightMatrix, alpha: f64, max_dim: usize) -> Result<HomologyRanks> {
    guard(m, ORACLE_MAX_VERTICES)?;
    Ok(betti_unchecked(m, alpha, max_dim))
}

fn betti_unchecked(m: &WeightMatrix, alpha: f64, max_dim: usize) -> HomologyRanks {
    let complex = Complex::at(m, alpha, max_dim + 1);
    HomologyRanks {
        betti: (0..=max_dim).map(|d| complex.betti(d)).collect(),
    }
}

fn check_inclusion(m_sub: &WeightMatrix, m_sup: &WeightMatrix) -> Result<()> {
    if m_sub.size() != m_sup.size() {
        return Err(Error::SizeMismatch {
            left: m_sub.size(),
            right: m_sup.size(),
        });
    }
    for i in 0..m_sub.size() {
        for j in 0..m_sub.size() {
            if m_sub.get(i, j) < m_sup.get(i, j) {
                return Err(Error::InclusionViolated {
                    row: i,
                    col: j,
                    sub: m_sub.get(i, j),
                    sup: m_sup.get(i, j),
                });
            }
        }
    }
    Ok(())
}

/// Rank of `H_dim(R_alpha(m_sub)) -> H_dim(R_alpha(m_sup))` induced by the
/// inclusion; requires `m_sub >= m_sup` entry-wise.
pub fn map_rank(m_sub: &WeightMatrix, m_sup: &WeightMatrix, alpha: f64, dim: usize) -> Result<usize> {
    guard(m_sub, ORACLE_MAX_VERTICES)?;
    check_inclusion(m_sub, m_sup)?;
    Ok(map_rank_unchecked(m_sub, m_sup, alpha, dim))
}

fn map_rank_unchecked(m_sub: &WeightMatrix, m_sup: &WeightMatrix, alpha: f64, dim: usize) -> usize {
    let sub = Complex::at(m_sub, alpha, dim + 1);
    let sup = Complex::at(m_sup, alpha, dim + 1);
    let to_sup = |simplex: &[usize]| sup.index[dim][simplex];

    // Cycles of the sub-complex, written in the chain basis of the super-complex.
    let cycles: Vec<BitVec> = z2::kernel(&sub.boundary_images(dim))
        .into_iter()
        .map(|combo| {
            let mut v = BitVec::zeros(sup.count(dim));
            for (k, s) in sub.by_dim[dim].iter().enumerate() {
                if combo.get(k) {
                    v.flip(to_sup(s));
                }
            }
            v
        })
        .collect();
    let boundaries: Vec<BitVec> = sup.by_dim[dim + 1]
        .iter()
        .map(|s| sup.boundary_of(s))
        .collect();
    let base = z2::rank(&boundaries);
    let mut both = boundaries;
    both.extend(cycles);
    z2::rank(&both) - base
}

/// The three terms of the rank identity in one degree `k >= 1`:
/// `dim H_k(cross) = dim Ker(H_{k-1}(w) -> H_{k-1}(min)) + dim Coker(H_k(w) -> H_k(min))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessTerms {
    pub cross_betti: usize,
    pub kernel: usize,
    pub cokernel: usize,
}

impl ExactnessTerms {
    pub fn holds(&self) -> bool {
        self.cross_betti == self.kernel + self.cokernel
    }
}

pub fn exactness_terms(
    w: &WeightMatrix,
    w_tilde: &WeightMatrix,
    alpha: f64,
    degree: usize,
) -> Result<ExactnessTerms> {
    if degree == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    guard(w, EXACTNESS_MAX_POINTS)?;
    let union = min_union(w, w_tilde)?;
    let cross = augmented_matrix(w, w_tilde, Form::Algorithm1)?.matrix;

    let cross_betti = betti_unchecked(&cross, alpha, degree).betti[degree];
    let below = degree - 1;
    let kernel =
        betti_unchecked(w, alpha, below).betti[below] - map_rank_unchecked(w, &union, alpha, below);
    let cokernel = betti_unchecked(&union, alpha, degree).betti[degree]
        - map_rank_unchecked(w, &union, alpha, degree);
    Ok(ExactnessTerms {
        cross_betti,
        kernel,
        cokernel,
    })
}

/// Checks `dim H_1(R_alpha(cross)) = dim Ker(H_0 map) + dim Coker(H_1 map)`
/// for the inclusion `R_alpha(w) -> R_alpha(min(w, w~))`.
pub fn exactness_check(w: &WeightMatrix, w_tilde: &WeightMatrix, alpha: f64) -> Result<bool> {
    Ok(exactness_terms(w, w_tilde, alpha, 1)?.holds())
}

/// Distinct finite entries of the given matrices in ascending order, followed
/// by one value above the largest. Homology is constant between consecutive
/// thresholds, so these cover every distinct complex.
pub fn critical_thresholds(matrices: &[&WeightMatrix]) -> Vec<f64> {
    let mut values: Vec<f64> = matrices
        .iter()
        .flat_map(|m| m.as_slice().iter().copied())
        .filter(|v| v.is_finite())
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let top = values.last().copied().unwrap_or(0.0);
    values.push(top + 1.0);
    values
}
