//! Reference similarity measures: linear CKA, normalized disagreement and
//! Kendall's tau-b.

use crate::error::{Error, Result};
use crate::geometry::PointCloud;

/// Rows are examples, columns are features.
pub type RepresentationMatrix = PointCloud;

/// Column-centered copy as a dense row-major buffer.
fn centered(x: &RepresentationMatrix) -> Vec<f64> {
    let (n, d) = (x.len(), x.dim());
    let mut means = vec![0.0; d];
    for p in x.points() {
        for (m, v) in means.iter_mut().zip(p) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n as f64;
    }
    let mut out = Vec::with_capacity(n * d);
    for p in x.points() {
        out.extend(p.iter().zip(&means).map(|(v, m)| v - m));
    }
    out
}

/// `A^T B` for row-major `n x da` and `n x db` buffers; returns `da x db`.
fn cross_product(a: &[f64], da: usize, b: &[f64], db: usize) -> Vec<f64> {
    let n = a.len() / da;
    let mut out = vec![0.0; da * db];
    for r in 0..n {
        let ra = &a[r * da..(r + 1) * da];
        let rb = &b[r * db..(r + 1) * db];
        for (i, &x) in ra.iter().enumerate() {
            let row = &mut out[i * db..(i + 1) * db];
            for (o, &y) in row.iter_mut().zip(rb) {
                *o += x * y;
            }
        }
    }
    out
}

fn frobenius_sq(m: &[f64]) -> f64 {
    m.iter().map(|v| v * v).sum()
}

/// Linear centered kernel alignment, computed from feature-space cross
/// products so the `N x N` Gram matrices are never formed.
pub fn linear_cka(x: &RepresentationMatrix, y: &RepresentationMatrix) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter("CKA needs at least two examples".into()));
    }
    let (xc, yc) = (centered(x), centered(y));
    if xc.iter().all(|&v| v == 0.0) || yc.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateRepresentation);
    }
    let (dx, dy) = (x.dim(), y.dim());
    let yx = frobenius_sq(&cross_product(&yc, dy, &xc, dx));
    let xx = frobenius_sq(&cross_product(&xc, dx, &xc, dx)).sqrt();
    let yy = frobenius_sq(&cross_product(&yc, dy, &yc, dy)).sqrt();
    Ok(yx / (xx * yy))
}

/// Fraction of positions where the labels differ, divided by `1 - a`.
pub fn disagreement(labels_a: &[i64], labels_b: &[i64], mean_accuracy: f64) -> Result<f64> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::SizeMismatch {
            left: labels_a.len(),
            right: labels_b.len(),
        });
    }
    if labels_a.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(0.0..1.0).contains(&mean_accuracy) {
        return Err(Error::InvalidParameter(format!(
            "mean accuracy must lie in [0, 1), got {mean_accuracy}"
        )));
    }
    let mismatched = labels_a.iter().zip(labels_b).filter(|(a, b)| a != b).count();
    Ok(mismatched as f64 / labels_a.len() as f64 / (1.0 - mean_accuracy))
}

/// Kendall's tau-b, corrected for ties in either argument. Quadratic in the
/// length, which is fine for the handful of conditions it ranks.
pub fn kendall_tau(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::SizeMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::InvalidParameter("Kendall tau needs at least two values".into()));
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter("Kendall tau input contains NaN".into()));
    }
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut untied_x, mut untied_y) = (0i64, 0i64);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let dx = xs[i].partial_cmp(&xs[j]).expect("no NaN");
            let dy = ys[i].partial_cmp(&ys[j]).expect("no NaN");
            if dx.is_ne() {
                untied_x += 1;
            }
            if dy.is_ne() {
                untied_y += 1;
            }
            if dx.is_ne() && dy.is_ne() {
                if dx == dy {
                    concordant += 1;
                } else {
                    discordant += 1;
                }
            }
        }
    }
    if untied_x == 0 || untied_y == 0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((concordant - discordant) as f64 / ((untied_x as f64) * (untied_y as f64)).sqrt())
}
