//! Codimension-n subspaces of the null cone and the exhaustive
//! minimal-subspace oracle on tiny fields.
//!
//! For a normalized map, the canonical subspaces are V_X = {M : MX = 0} and
//! V^X = {M : X^T M = 0} for vectors X supported inside one equivalence
//! class.  The oracle enumerates ALL subspaces of the right codimension (by
//! reduced-row-echelon pivot patterns, which kills duplicates by
//! construction), tests cone membership by full enumeration of subspace
//! elements, and compares against the predicted set; for a non-normalized
//! input the predictions are transported through the normalization witness.

use crate::equiv::{self, Side};
use crate::error::Error;
use crate::field::{Field, FieldElement};
use crate::groupmap::GroupMap;
use crate::linalg;
use crate::matrix::SquareMatrix;
use crate::Result;
use rayon::prelude::*;

/// A linear subspace of Mat_n(F), stored as an independent basis plus the
/// canonical RREF of the vectorized basis (canonical form: set equality is
/// RREF equality).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSubspace {
    n: usize,
    field: Field,
    basis: Vec<SquareMatrix>,
    rref: Vec<Vec<FieldElement>>,
}

impl MatrixSubspace {
    pub fn from_basis(n: usize, field: Field, mats: Vec<SquareMatrix>) -> Result<MatrixSubspace> {
        let mut rows: Vec<Vec<FieldElement>> = mats.iter().map(|m| m.vectorize()).collect();
        let before = rows.len();
        linalg::rref(field, &mut rows);
        if rows.len() != before {
            return Err(Error::Parse("basis matrices are linearly dependent".into()));
        }
        Ok(MatrixSubspace {
            n,
            field,
            basis: mats,
            rref: rows,
        })
    }

    fn from_rref(n: usize, field: Field, rref: Vec<Vec<FieldElement>>) -> MatrixSubspace {
        let basis = rref
            .iter()
            .map(|v| SquareMatrix::from_vectorized(n, field, v).expect("length n^2"))
            .collect();
        MatrixSubspace {
            n,
            field,
            basis,
            rref,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rref.len()
    }

    pub fn codim(&self) -> usize {
        self.n * self.n - self.dim()
    }

    pub fn basis(&self) -> &[SquareMatrix] {
        &self.basis
    }

    /// Canonical form; equal sets of matrices have equal RREFs.
    pub fn canonical_rows(&self) -> &[Vec<FieldElement>] {
        &self.rref
    }

    /// Image under the entrywise product M -> A * M (A nonzero everywhere);
    /// a linear bijection, so subspaces map to subspaces.
    pub fn hadamard_transport(&self, a: &SquareMatrix) -> Result<MatrixSubspace> {
        let mats = self
            .basis
            .iter()
            .map(|m| a.hadamard(m))
            .collect::<Result<Vec<_>>>()?;
        MatrixSubspace::from_basis(self.n, self.field, mats)
    }
}

/// V_X (column side: {M : MX = 0}) or V^X (row side: {M : X^T M = 0});
/// codimension n for nonzero X.
pub fn v_x_basis(x: &[FieldElement], side: Side, field: Field) -> Result<MatrixSubspace> {
    let n = x.len();
    if x.iter().all(|e| field.is_zero(e)) {
        return Err(Error::ZeroVector);
    }
    // rows of M range over the orthogonal complement of X
    let complement = linalg::kernel_basis(field, vec![x.to_vec()], n);
    debug_assert_eq!(complement.len(), n - 1);
    let mut mats = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for k in &complement {
            let mut m = SquareMatrix::zero(n, field);
            for (j, v) in k.iter().enumerate() {
                match side {
                    Side::Column => m.set(i, j, v.clone()),
                    Side::Row => m.set(j, i, v.clone()),
                }
            }
            mats.push(m);
        }
    }
    MatrixSubspace::from_basis(n, field, mats)
}

/// Support of X inside one class of the relevant partition of a normalized
/// map.
pub fn is_adapted_vector(f_norm: &GroupMap, x: &[FieldElement], side: Side) -> Result<bool> {
    if !equiv::is_normalized(f_norm) {
        return Err(Error::NotNormalized);
    }
    let field = f_norm.field();
    let support: Vec<usize> = (0..x.len())
        .filter(|&i| !field.is_zero(&x[i]))
        .collect();
    if support.is_empty() {
        return Err(Error::ZeroVector);
    }
    let parts = equiv::partitions(f_norm);
    let classes = match side {
        Side::Column => &parts.column_classes,
        Side::Row => &parts.row_classes,
    };
    Ok(classes
        .iter()
        .any(|c| support.iter().all(|i| c.contains(i))))
}

/// Default element-enumeration budget for cone membership.
pub const DEFAULT_BUDGET: u128 = 1 << 26;

/// True iff the functional vanishes on every element of S (full enumeration
/// over the subspace; finite fields only).
pub fn subspace_in_cone(f: &GroupMap, s: &MatrixSubspace, budget: u128) -> Result<bool> {
    let Some(q) = f.field().order() else {
        return Err(Error::InfiniteField);
    };
    let size = (q as u128)
        .checked_pow(s.dim() as u32)
        .ok_or(Error::BudgetExceeded(u128::MAX, budget))?;
    if size > budget {
        return Err(Error::BudgetExceeded(size, budget));
    }
    Ok(cone_scan(f, &s.rref))
}

/// Core scan: walks all field-coefficient combinations of the basis rows by
/// an incremental odometer and evaluates the functional at each element.
/// The permutation table is hoisted out of the 50M-element hot loop.
fn cone_scan(f: &GroupMap, basis: &[Vec<FieldElement>]) -> bool {
    let field = f.field();
    let n = f.n();
    let q = field.order().expect("finite field") as usize;
    let dim = basis.len();
    let nn = n * n;
    let perms: Vec<Vec<usize>> = crate::perm::Permutation::all(n)
        .iter()
        .map(|s| s.images().to_vec())
        .collect();
    let values = f.values();
    let mut current = vec![field.zero(); nn];
    let mut counters = vec![0usize; dim];
    loop {
        // f~ at the current element, entries addressed column-stacked
        let mut acc = field.zero();
        for (r, img) in perms.iter().enumerate() {
            let mut term = values[r].clone();
            for (j, &i) in img.iter().enumerate() {
                if field.is_zero(&term) {
                    break;
                }
                term = field.mul(&term, &current[j * n + i]);
            }
            acc = field.add(&acc, &term);
        }
        if !field.is_zero(&acc) {
            return false;
        }
        // odometer step: advance the lowest counter, adding the basis row on
        // each increment so the current element stays in sync (q additions of
        // a row cancel exactly in characteristic q)
        let mut pos = 0usize;
        loop {
            if pos == dim {
                return true;
            }
            for (c, b) in current.iter_mut().zip(&basis[pos]) {
                *c = field.add(c, b);
            }
            counters[pos] += 1;
            if counters[pos] < q {
                break;
            }
            counters[pos] = 0;
            pos += 1;
        }
    }
}

/// Enumerate all `dim`-dimensional subspaces of F^ambient as RREF row sets,
/// grouped by pivot-column pattern.  The visitor gets the RREF rows.
fn rref_patterns(ambient: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..dim).collect();
    if dim == 0 {
        return vec![Vec::new()];
    }
    if dim > ambient {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next combination of pivot columns
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != ambient - dim + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for k in i + 1..dim {
            cur[k] = cur[k - 1] + 1;
        }
    }
}

fn free_positions(pivots: &[usize], ambient: usize) -> Vec<(usize, usize)> {
    // positions (row, col) right of the row's pivot and not pivot columns
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut free = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..ambient {
            if !pivot_set.contains(&c) {
                free.push((r, c));
            }
        }
    }
    free
}

/// Visit every `dim`-dimensional subspace of F^ambient exactly once, as RREF
/// rows.  Pivot patterns are processed in parallel; per-pattern results come
/// back in deterministic order.
fn enumerate_subspaces<T: Send>(
    field: Field,
    ambient: usize,
    dim: usize,
    per_subspace: impl Fn(&[Vec<FieldElement>]) -> Option<T> + Sync,
) -> Vec<T> {
    let q = field.order().expect("finite field");
    let patterns = rref_patterns(ambient, dim);
    let perpattern: Vec<Vec<T>> = patterns
        .par_iter()
        .map(|pivots| {
            let free = free_positions(pivots, ambient);
            let mut rows = vec![vec![field.zero(); ambient]; dim];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = field.one();
            }
            let mut found = Vec::new();
            let mut counters = vec![0u64; free.len()];
            loop {
                if let Some(t) = per_subspace(&rows) {
                    found.push(t);
                }
                // odometer over free entries
                let mut pos = 0usize;
                loop {
                    if pos == free.len() {
                        return found;
                    }
                    counters[pos] += 1;
                    let (r, c) = free[pos];
                    if counters[pos] < q {
                        rows[r][c] = field.from_i64(counters[pos] as i64);
                        break;
                    }
                    counters[pos] = 0;
                    rows[r][c] = field.zero();
                    pos += 1;
                }
            }
        })
        .collect();
    perpattern.into_iter().flatten().collect()
}

/// Label attached to each subspace found by the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleLabel {
    /// Transported V_X for the normalized form, with the adapted vector X.
    VX(Vec<FieldElement>),
    /// Transported V^X, with the adapted vector X.
    VXT(Vec<FieldElement>),
    /// In the cone but not predicted: a counterexample to the dimension
    /// theorems (must never occur).
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSubspace {
    pub subspace: MatrixSubspace,
    pub label: OracleLabel,
}

/// Projective representatives (first nonzero entry 1) of vectors supported
/// in one class.
fn adapted_projective_vectors(
    field: Field,
    classes: &[Vec<usize>],
    n: usize,
) -> Vec<Vec<FieldElement>> {
    let q = field.order().expect("finite field");
    let mut out = Vec::new();
    for class in classes {
        // enumerate nonzero coordinate vectors over the class support with
        // first nonzero entry = 1
        let k = class.len();
        let mut counters = vec![0u64; k];
        loop {
            // advance
            let mut pos = 0usize;
            loop {
                if pos == k {
                    counters = Vec::new();
                    break;
                }
                counters[pos] += 1;
                if counters[pos] < q {
                    break;
                }
                counters[pos] = 0;
                pos += 1;
            }
            if counters.is_empty() {
                break;
            }
            let first_nonzero = counters.iter().position(|&c| c != 0).expect("nonzero");
            if counters[first_nonzero] != 1 {
                continue; // not the projective representative
            }
            let mut v = vec![field.zero(); n];
            for (slot, &idx) in class.iter().enumerate() {
                v[idx] = field.from_i64(counters[slot] as i64);
            }
            out.push(v);
        }
    }
    out
}

/// Exhaustively find every codimension-n subspace inside the null cone and
/// label it against the predicted set {V_X, V^X : X adapted for the
/// normalized form}, transported through the normalization witness.
/// Restricted to GF(2) with n <= 3 and GF(3) with n <= 2.
pub fn minimal_subspace_oracle(f: &GroupMap) -> Result<Vec<LabeledSubspace>> {
    let n = f.n();
    let field = f.field();
    match field.order() {
        Some(2) if n <= 3 => {}
        Some(3) if n <= 2 => {}
        Some(_) => {
            return Err(Error::ScaleTooLarge(format!(
                "oracle supports GF(2) up to n = 3 and GF(3) up to n = 2, got {} n = {}",
                field.describe(),
                n
            )))
        }
        None => return Err(Error::InfiniteField),
    }
    // predictions for the normalized form, moved through the H-witness:
    // g = f.A means g~(M) = f~(A * M), so M in C(g) gives A * M in C(f)
    let w = equiv::normalize(f);
    let parts = equiv::partitions(&w.g);
    let mut predicted: Vec<(MatrixSubspace, OracleLabel)> = Vec::new();
    for x in adapted_projective_vectors(field, &parts.column_classes, n) {
        let s = v_x_basis(&x, Side::Column, field)?.hadamard_transport(&w.a)?;
        predicted.push((s, OracleLabel::VX(x)));
    }
    for x in adapted_projective_vectors(field, &parts.row_classes, n) {
        let s = v_x_basis(&x, Side::Row, field)?.hadamard_transport(&w.a)?;
        predicted.push((s, OracleLabel::VXT(x)));
    }
    let dim = n * n - n;
    let f_shared = f.clone();
    let found: Vec<Vec<Vec<FieldElement>>> = enumerate_subspaces(field, n * n, dim, |rows| {
        if cone_scan(&f_shared, rows) {
            Some(rows.to_vec())
        } else {
            None
        }
    });
    let mut out = Vec::with_capacity(found.len());
    for rows in found {
        let s = MatrixSubspace::from_rref(n, field, rows);
        let label = predicted
            .iter()
            .find(|(p, _)| p.canonical_rows() == s.canonical_rows())
            .map(|(_, l)| l.clone())
            .unwrap_or(OracleLabel::Other);
        out.push(LabeledSubspace { subspace: s, label });
    }
    Ok(out)
}

/// Scan ALL subspaces of the given codimension and count how many lie in the
/// cone (the codimension n-1 spot check expects zero).
pub fn codim_check(f: &GroupMap, codim: usize) -> Result<(usize, usize)> {
    let n = f.n();
    let field = f.field();
    if field.order().is_none() {
        return Err(Error::InfiniteField);
    }
    let q = field.order().unwrap();
    if codim > n * n {
        return Err(Error::DimensionMismatch(codim, n * n));
    }
    let dim = n * n - codim;
    let size = (q as u128)
        .checked_pow(dim as u32)
        .filter(|&s| s <= DEFAULT_BUDGET)
        .ok_or(Error::ScaleTooLarge(format!("q^dim too large, q={q} dim={dim}")))?;
    let _ = size;
    let f_shared = f.clone();
    let hits = enumerate_subspaces(field, n * n, dim, |rows| {
        if cone_scan(&f_shared, rows) {
            Some(())
        } else {
            None
        }
    });
    // total count of subspaces scanned: Gaussian binomial [n^2 choose dim]_q
    let total = gaussian_binomial(q as u128, n * n, dim);
    Ok((total as usize, hits.len()))
}

/// Gaussian binomial coefficient [m choose k]_q.
pub fn gaussian_binomial(q: u128, m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((m - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}
