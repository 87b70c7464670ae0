//! Exact Gaussian elimination on rectangular row lists: RREF, rank,
//! determinant, kernels and linear solves.  No pivot tolerances are needed;
//! everything is over an exact field.

use crate::field::{Field, FieldElement};

/// Reduce `rows` in place to reduced row-echelon form; returns the pivot
/// columns in order.  Zero rows are removed.
pub fn rref(field: Field, rows: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(&rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let t = field.mul(&factor, &rows[r][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: Field, mut rows: Vec<Vec<FieldElement>>) -> usize {
    rref(field, &mut rows).len()
}

/// Determinant of a square row list by fraction-free-style elimination
/// (plain division works since we are over a field).
pub fn det(field: Field, mut rows: Vec<Vec<FieldElement>>) -> FieldElement {
    let n = rows.len();
    let mut acc = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !field.is_zero(&rows[i][c])) else {
            return field.zero();
        };
        if pr != c {
            rows.swap(c, pr);
            acc = field.neg(&acc);
        }
        acc = field.mul(&acc, &rows[c][c]);
        let inv = field.inv(&rows[c][c]).expect("pivot is nonzero");
        for i in c + 1..n {
            if field.is_zero(&rows[i][c]) {
                continue;
            }
            let factor = field.mul(&rows[i][c], &inv);
            for j in c..n {
                let t = field.mul(&factor, &rows[c][j]);
                rows[i][j] = field.sub(&rows[i][j], &t);
            }
        }
    }
    acc
}

/// Basis of { x : A x = 0 } for the matrix with the given rows.
pub fn kernel_basis(field: Field, rows: Vec<Vec<FieldElement>>, ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut rows = rows;
    let pivots = rref(field, &mut rows);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            // x_pc = -A[r][free]
            v[pc] = field.neg(&rows[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// One solution of A x = b, if any.
pub fn solve(
    field: Field,
    rows: &[Vec<FieldElement>],
    b: &[FieldElement],
    ncols: usize,
) -> Option<Vec<FieldElement>> {
    let mut aug: Vec<Vec<FieldElement>> = rows
        .iter()
        .zip(b)
        .map(|(r, e)| {
            let mut r = r.clone();
            r.push(e.clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut aug);
    if pivots.contains(&ncols) {
        return None; // inconsistent: pivot in the augmented column
    }
    let mut x = vec![field.zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some(x)
}
