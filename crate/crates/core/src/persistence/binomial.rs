//! Combinatorial number system: a `k`-simplex with vertices
//! `v_k > ... > v_0` has index `C(v_k, k+1) + ... + C(v_0, 1)`, its rank in
//! colexicographic order.

use crate::error::{Error, Result};

/// Table of `C(v, k)` for `v <= n`, `k <= max_k`.
#[derive(Debug, Clone)]
pub(crate) struct BinomialTable {
    n: usize,
    max_k: usize,
    table: Vec<u64>,
}

impl BinomialTable {
    /// Fails if some `C(v, k)` in range overflows `u64`.
    pub(crate) fn new(n: usize, max_k: usize) -> Result<Self> {
        let width = n + 1;
        let mut table = vec![0u64; width * (max_k + 1)];
        for v in 0..=n {
            table[v] = 1;
            for k in 1..=max_k.min(v) {
                let a = table[(k - 1) * width + v - 1];
                let b = if k <= v - 1 { table[k * width + v - 1] } else { 0 };
                table[k * width + v] = a.checked_add(b).ok_or(Error::InstanceTooLarge {
                    count: u128::from(u64::MAX) + 1,
                    cap: u64::MAX,
                })?;
            }
        }
        Ok(Self { n, max_k, table })
    }

    /// `C(v, k)`, zero when `v < k`.
    #[inline]
    pub(crate) fn get(&self, v: usize, k: usize) -> u64 {
        debug_assert!(v <= self.n && k <= self.max_k);
        self.table[k * (self.n + 1) + v]
    }

    /// Largest `v < top` with `C(v, k) <= idx`.
    fn max_vertex(&self, idx: u64, k: usize, top: usize) -> usize {
        // C(k - 1, k) = 0 <= idx always holds, so the answer is at least k - 1.
        let (mut lo, mut hi) = (k - 1, top - 1);
        while lo < hi {
            let mid = hi - (hi - lo) / 2;
            if self.get(mid, k) <= idx {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    /// Vertices of the `dim`-simplex with the given index, in descending order.
    pub(crate) fn vertices(&self, mut idx: u64, dim: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut top = self.n;
        for k in (1..=dim + 1).rev() {
            let v = self.max_vertex(idx, k, top);
            out.push(v);
            idx -= self.get(v, k);
            top = v;
        }
    }

    /// Index of a simplex given its vertices in ascending order.
    pub(crate) fn index_ascending(&self, vertices: &[usize]) -> u64 {
        vertices
            .iter()
            .enumerate()
            .map(|(pos, &v)| self.get(v, pos + 1))
            .sum()
    }
}

/// `C(n, k)` in 128-bit arithmetic, saturating.
pub(crate) fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
