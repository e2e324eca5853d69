use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::binomial::BinomialTable;
use super::union_find::UnionFind;
use super::Bar;
use crate::error::Result;
use crate::geometry::WeightMatrix;

/// A simplex of fixed dimension: filtration value and colex index.
///
/// Within one dimension the filtration order is value ascending, then index
/// descending. `Ord` puts the *earliest* simplex on top of a max-heap, so
/// sorting ascending yields reverse filtration order.
#[derive(Debug, Clone, Copy)]
struct Entry {
    diam: f64,
    index: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .diam
            .total_cmp(&self.diam)
            .then(self.index.cmp(&other.index))
    }
}

pub(super) struct ZeroDim {
    pub bars: Vec<Bar>,
    /// Finite edges that did not merge components, in reverse filtration order.
    columns: Vec<Entry>,
}

pub(super) fn zero_dim(m: &WeightMatrix) -> ZeroDim {
    let n = m.size();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 1..n {
        let base = (i * (i - 1) / 2) as u64;
        for j in 0..i {
            let d = m.get(i, j);
            if d.is_finite() {
                edges.push((
                    Entry {
                        diam: d,
                        index: base + j as u64,
                    },
                    i,
                    j,
                ));
            }
        }
    }
    // Filtration order: earliest first.
    edges.sort_unstable_by(|a, b| b.0.cmp(&a.0));

    let mut uf = UnionFind::new(n);
    let mut bars = Vec::new();
    let mut columns = Vec::new();
    for &(e, i, j) in &edges {
        if uf.union(i, j) {
            if e.diam > 0.0 {
                bars.push(Bar::new(0, 0.0, e.diam));
            }
        } else {
            columns.push(e);
        }
    }
    let roots: HashSet<usize> = (0..n).map(|v| uf.find(v)).collect();
    bars.extend((0..roots.len()).map(|_| Bar::new(0, 0.0, f64::INFINITY)));
    columns.reverse();
    ZeroDim { bars, columns }
}

/// Lazily enumerates the cofacets of one simplex in descending index order.
struct Cofacets<'a> {
    binom: &'a BinomialTable,
    m: &'a WeightMatrix,
    vertices: &'a [usize],
    diam: f64,
    idx_below: u64,
    idx_above: u64,
    v: isize,
    k: usize,
}

impl<'a> Cofacets<'a> {
    fn new(
        binom: &'a BinomialTable,
        m: &'a WeightMatrix,
        simplex: Entry,
        vertices: &'a [usize],
    ) -> Self {
        Self {
            binom,
            m,
            vertices,
            diam: simplex.diam,
            idx_below: simplex.index,
            idx_above: 0,
            v: m.size() as isize - 1,
            k: vertices.len(),
        }
    }
}

impl Iterator for Cofacets<'_> {
    /// Cofacet with its filtration value, possibly infinite.
    type Item = Entry;

    fn next(&mut self) -> Option<Entry> {
        if self.v < self.k as isize {
            return None;
        }
        let mut v = self.v as usize;
        // Skip the simplex's own vertices, moving their contribution from
        // position k to position k + 1.
        while self.k > 0 && self.binom.get(v, self.k) <= self.idx_below {
            self.idx_below -= self.binom.get(v, self.k);
            self.idx_above += self.binom.get(v, self.k + 1);
            self.k -= 1;
            if v == 0 {
                self.v = -1;
                return None;
            }
            v -= 1;
        }
        self.v = v as isize - 1;
        let index = self.idx_above + self.binom.get(v, self.k + 1) + self.idx_below;
        let row = self.m.row(v);
        let diam = self.vertices.iter().fold(self.diam, |acc, &u| acc.max(row[u]));
        Some(Entry { diam, index })
    }
}

/// Pops the top of the heap after cancelling equal entries in pairs, and
/// pushes it back.
fn get_pivot(heap: &mut BinaryHeap<Entry>) -> Option<Entry> {
    let pivot = pop_pivot(heap)?;
    heap.push(pivot);
    Some(pivot)
}

fn pop_pivot(heap: &mut BinaryHeap<Entry>) -> Option<Entry> {
    loop {
        let top = heap.pop()?;
        match heap.peek() {
            Some(next) if next.index == top.index => {
                heap.pop();
            }
            _ => return Some(top),
        }
    }
}

/// What a processed column reduced to.
struct Pivot {
    column: Entry,
    /// Extra columns added during reduction, mod 2; `None` if the column
    /// was already reduced.
    extra: Option<u32>,
}

struct Reducer<'a> {
    m: &'a WeightMatrix,
    binom: BinomialTable,
    scratch: Vec<usize>,
}

impl<'a> Reducer<'a> {
    fn push_coboundary(&mut self, simplex: Entry, dim: usize, heap: &mut BinaryHeap<Entry>) {
        self.binom.vertices(simplex.index, dim, &mut self.scratch);
        let vertices = std::mem::take(&mut self.scratch);
        heap.extend(
            Cofacets::new(&self.binom, self.m, simplex, &vertices).filter(|c| c.diam.is_finite()),
        );
        self.scratch = vertices;
    }

    /// Reduces the coboundary columns of `dim`-simplices; returns the bars
    /// found and the set of cofacets that became pivots.
    fn reduce(&mut self, columns: &[Entry], dim: usize, bars: &mut Vec<Bar>) -> HashSet<u64> {
        let mut pivots: HashMap<u64, Pivot> = HashMap::new();
        let mut extras: Vec<Vec<Entry>> = Vec::new();
        let mut cofacets = Vec::new();
        let mut working: Vec<Entry> = Vec::new();

        for &column in columns {
            // The first cofacet of equal value is the pivot of the unreduced
            // column; if nobody owns it the column is already reduced.
            self.binom.vertices(column.index, dim, &mut self.scratch);
            let vertices = std::mem::take(&mut self.scratch);
            cofacets.clear();
            let mut emergent = None;
            let mut it = Cofacets::new(&self.binom, self.m, column, &vertices);
            for c in it.by_ref() {
                if c.diam == column.diam {
                    if pivots.contains_key(&c.index) {
                        cofacets.push(c);
                    } else {
                        emergent = Some(c);
                    }
                    break;
                }
                if c.diam.is_finite() {
                    cofacets.push(c);
                }
            }
            if emergent.is_none() {
                cofacets.extend(it.filter(|c| c.diam.is_finite()));
            }
            self.scratch = vertices;
            if let Some(c) = emergent {
                pivots.insert(
                    c.index,
                    Pivot {
                        column,
                        extra: None,
                    },
                );
                continue;
            }

            let mut heap = BinaryHeap::from(std::mem::take(&mut cofacets));
            working.clear();
            loop {
                let Some(pivot) = get_pivot(&mut heap) else {
                    bars.push(Bar::new(dim, column.diam, f64::INFINITY));
                    break;
                };
                match pivots.get(&pivot.index) {
                    Some(owner) => {
                        let owner_column = owner.column;
                        let owner_extra = owner.extra;
                        working.push(owner_column);
                        self.push_coboundary(owner_column, dim, &mut heap);
                        if let Some(slot) = owner_extra {
                            let added = std::mem::take(&mut extras[slot as usize]);
                            for &e in &added {
                                working.push(e);
                                self.push_coboundary(e, dim, &mut heap);
                            }
                            extras[slot as usize] = added;
                        }
                    }
                    None => {
                        if pivot.diam > column.diam {
                            bars.push(Bar::new(dim, column.diam, pivot.diam));
                        }
                        let extra = reduce_mod_two(&mut working);
                        let slot = if extra.is_empty() {
                            None
                        } else {
                            extras.push(extra);
                            Some((extras.len() - 1) as u32)
                        };
                        pivots.insert(pivot.index, Pivot { column, extra: slot });
                        break;
                    }
                }
            }
            cofacets = heap.into_vec();
            cofacets.clear();
        }
        pivots.into_keys().collect()
    }

    /// Finite `dim`-simplices not in `cleared`, in reverse filtration order.
    fn columns(&self, dim: usize, cleared: &HashSet<u64>) -> Vec<Entry> {
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(dim + 1);
        for v in 0..self.m.size() {
            stack.push(v);
            self.collect(dim, &mut stack, 0.0, cleared, &mut out);
            stack.pop();
        }
        out.sort_unstable();
        out
    }

    fn collect(
        &self,
        dim: usize,
        stack: &mut Vec<usize>,
        diam: f64,
        cleared: &HashSet<u64>,
        out: &mut Vec<Entry>,
    ) {
        if stack.len() == dim + 1 {
            let index = self.binom.index_ascending(stack);
            if !cleared.contains(&index) {
                out.push(Entry { diam, index });
            }
            return;
        }
        let last = *stack.last().expect("non-empty");
        for v in last + 1..self.m.size() {
            let row = self.m.row(v);
            let next = stack.iter().fold(diam, |acc, &u| acc.max(row[u]));
            if next.is_finite() {
                stack.push(v);
                self.collect(dim, stack, next, cleared, out);
                stack.pop();
            }
        }
    }
}

/// Sorts and cancels duplicate entries in pairs.
fn reduce_mod_two(entries: &mut Vec<Entry>) -> Vec<Entry> {
    entries.sort_unstable_by_key(|e| e.index);
    let mut out: Vec<Entry> = Vec::with_capacity(entries.len());
    for &e in entries.iter() {
        match out.last() {
            Some(last) if last.index == e.index => {
                out.pop();
            }
            _ => out.push(e),
        }
    }
    out
}

pub(super) fn barcode(m: &WeightMatrix, max_dim: usize) -> Result<Vec<Bar>> {
    let ZeroDim { mut bars, columns } = zero_dim(m);
    if max_dim == 0 {
        return Ok(bars);
    }
    let mut reducer = Reducer {
        m,
        binom: BinomialTable::new(m.size(), max_dim + 2)?,
        scratch: Vec::new(),
    };
    let mut columns = columns;
    for dim in 1..=max_dim {
        let pivots = reducer.reduce(&columns, dim, &mut bars);
        if dim < max_dim {
            columns = reducer.columns(dim + 1, &pivots);
        }
    }
    Ok(bars)
}
