//! The union graph `min(w, w~)` and the augmented graph on doubled vertices
//! whose Vietoris-Rips barcode is the R-Cross-Barcode.
//!
//! Vertex layout of the augmented matrix: `A_0..A_{N-1}` first, then
//! `A'_0..A'_{N-1}`, then (full form only) the extra vertex `O`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WeightMatrix;

/// Which augmented matrix to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// `2N + 1` vertices: `A` block `w`, extra vertex `O` joined to every `A_i` at 0.
    #[default]
    Algorithm1,
    /// `2N` vertices: `A` block all zero, no `O`.
    Reduced,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Algorithm1 => "algorithm1",
            Form::Reduced => "reduced",
        })
    }
}

impl FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algorithm1" => Ok(Form::Algorithm1),
            "reduced" => Ok(Form::Reduced),
            other => Err(Error::InvalidParameter(format!(
                "unknown form {other:?}, expected algorithm1 or reduced"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedMatrix {
    pub form: Form,
    pub matrix: WeightMatrix,
    pub origin_size: usize,
}

impl AugmentedMatrix {
    /// Vertex index of `A_i`.
    pub fn a(&self, i: usize) -> usize {
        i
    }

    /// Vertex index of `A'_i`.
    pub fn a_prime(&self, i: usize) -> usize {
        self.origin_size + i
    }

    /// Vertex index of `O`, present only in the full form.
    pub fn o(&self) -> Option<usize> {
        match self.form {
            Form::Algorithm1 => Some(2 * self.origin_size),
            Form::Reduced => None,
        }
    }
}

fn check_same_size(w: &WeightMatrix, w_tilde: &WeightMatrix) -> Result<usize> {
    if w.size() != w_tilde.size() {
        return Err(Error::SizeMismatch {
            left: w.size(),
            right: w_tilde.size(),
        });
    }
    Ok(w.size())
}

/// Element-wise minimum: an edge is present at threshold `a` if it is
/// present in at least one of the two graphs.
pub fn min_union(w: &WeightMatrix, w_tilde: &WeightMatrix) -> Result<WeightMatrix> {
    let n = check_same_size(w, w_tilde)?;
    let data = w
        .as_slice()
        .iter()
        .zip(w_tilde.as_slice())
        .map(|(a, b)| a.min(*b))
        .collect();
    Ok(WeightMatrix::from_raw_unchecked(n, data))
}

/// Builds the augmented weight matrix of the pair `(w, w_tilde)`.
///
/// For `i < j`: `d(A_i, A'_j) = w_ij`, `d(A_j, A'_i) = +inf`,
/// `d(A_i, A'_i) = 0`, `d(A'_i, A'_j) = min(w_ij, w~_ij)`. In the full form
/// `d(A_i, A_j) = w_ij`, `d(O, A_i) = 0` and `d(O, A'_i) = +inf`; the reduced
/// form drops `O` and sets the `A` block to zero.
pub fn augmented_matrix(
    w: &WeightMatrix,
    w_tilde: &WeightMatrix,
    form: Form,
) -> Result<AugmentedMatrix> {
    let n = check_same_size(w, w_tilde)?;
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let size = match form {
        Form::Algorithm1 => 2 * n + 1,
        Form::Reduced => 2 * n,
    };
    let mut data = vec![0.0; size * size];
    let mut set = |r: usize, c: usize, v: f64| {
        data[r * size + c] = v;
        data[c * size + r] = v;
    };
    for i in 0..n {
        for j in 0..n {
            let a_block = match form {
                Form::Algorithm1 => w.get(i, j),
                Form::Reduced => 0.0,
            };
            set(i, j, a_block);
            set(n + i, n + j, w.get(i, j).min(w_tilde.get(i, j)));
            let cross = match i.cmp(&j) {
                std::cmp::Ordering::Less => w.get(i, j),
                std::cmp::Ordering::Equal => 0.0,
                std::cmp::Ordering::Greater => f64::INFINITY,
            };
            set(i, n + j, cross);
        }
    }
    if form == Form::Algorithm1 {
        let o = 2 * n;
        for i in 0..n {
            set(o, i, 0.0);
            set(o, n + i, f64::INFINITY);
        }
    }
    Ok(AugmentedMatrix {
        form,
        matrix: WeightMatrix::from_raw_unchecked(size, data),
        origin_size: n,
    })
}
