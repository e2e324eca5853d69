//! Dense linear algebra over Z/2 on bit-packed vectors.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub(crate) fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub(crate) fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[cfg(test)]
    pub(crate) fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Highest set bit.
    pub(crate) fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * 64 + 63 - w.leading_zeros() as usize)
    }
}

/// Rank of a set of vectors by Gaussian elimination.
pub(crate) fn rank(vectors: &[BitVec]) -> usize {
    let mut basis: Vec<BitVec> = Vec::new();
    let mut pivot_of: Vec<usize> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        loop {
            let Some(top) = v.last_one() else { break };
            match pivot_of.iter().position(|&p| p == top) {
                Some(k) => v.xor_assign(&basis[k]),
                None => {
                    pivot_of.push(top);
                    basis.push(v);
                    break;
                }
            }
        }
    }
    basis.len()
}

/// Basis of the kernel of the linear map sending basis vector `i` of the
/// domain (of dimension `images.len()`) to `images[i]`.
pub(crate) fn kernel(images: &[BitVec]) -> Vec<BitVec> {
    let n = images.len();
    // Rows: (image, combination of domain vectors producing it).
    let mut reduced: Vec<(BitVec, BitVec)> = Vec::new();
    let mut out = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut image = img.clone();
        let mut combo = BitVec::zeros(n);
        combo.flip(i);
        loop {
            let Some(top) = image.last_one() else {
                out.push(combo);
                break;
            };
            match reduced.iter().find(|(r, _)| r.last_one() == Some(top)) {
                Some((r, c)) => {
                    image.xor_assign(r);
                    combo.xor_assign(c);
                }
                None => {
                    reduced.push((image, combo));
                    break;
                }
            }
        }
    }
    out
}
