use std::collections::HashMap;

use super::{vr_filtration, Bar};
use crate::geometry::WeightMatrix;

/// Z/2 sum of two sorted columns.
fn add_columns(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Boundary-matrix reduction over the materialized filtration, reducing the
/// highest dimension first and clearing the columns of simplices that became
/// pivots one dimension up.
pub(super) fn barcode(m: &WeightMatrix, max_dim: usize) -> Vec<Bar> {
    let simplices = vr_filtration(m, max_dim + 1);
    let position: HashMap<&[usize], usize> = simplices
        .iter()
        .enumerate()
        .map(|(k, s)| (s.vertices.as_slice(), k))
        .collect();

    let total = simplices.len();
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 2];
    for (k, s) in simplices.iter().enumerate() {
        by_dim[s.dim()].push(k);
    }

    // owner[row] = column whose reduced form has its lowest entry at row.
    let mut owner: Vec<Option<usize>> = vec![None; total];
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut cleared = vec![false; total];
    let mut negative = vec![false; total];
    let mut facet = Vec::new();
    let mut sum = Vec::new();

    for dim in (1..=max_dim + 1).rev() {
        for &j in &by_dim[dim] {
            if cleared[j] {
                continue;
            }
            let vertices = &simplices[j].vertices;
            let mut column: Vec<usize> = (0..vertices.len())
                .map(|skip| {
                    facet.clear();
                    facet.extend(
                        vertices
                            .iter()
                            .enumerate()
                            .filter(|&(p, _)| p != skip)
                            .map(|(_, &v)| v),
                    );
                    position[facet.as_slice()]
                })
                .collect();
            column.sort_unstable();
            while let Some(&low) = column.last() {
                match owner[low] {
                    Some(k) => {
                        add_columns(&column, &reduced[k], &mut sum);
                        std::mem::swap(&mut column, &mut sum);
                    }
                    None => break,
                }
            }
            if let Some(&low) = column.last() {
                owner[low] = Some(j);
                cleared[low] = true;
                negative[j] = true;
                reduced[j] = column;
            }
        }
    }

    let mut bars = Vec::new();
    for (k, s) in simplices.iter().enumerate() {
        let dim = s.dim();
        if dim > max_dim || negative[k] {
            continue;
        }
        match owner[k] {
            Some(j) => bars.push(Bar::new(dim, s.filtration, simplices[j].filtration)),
            None => bars.push(Bar::new(dim, s.filtration, f64::INFINITY)),
        }
    }
    bars
}
