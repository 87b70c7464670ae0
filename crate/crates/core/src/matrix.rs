//! Square matrices over an exact field: Hadamard operations, products,
//! permutation matrices, rank and determinant.

use crate::error::Error;
use crate::field::{Field, FieldElement};
use crate::linalg;
use crate::perm::Permutation;
use crate::Result;

/// n x n matrix, row-major entries, all in one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareMatrix {
    n: usize,
    field: Field,
    entries: Vec<FieldElement>,
}

impl SquareMatrix {
    pub fn zero(n: usize, field: Field) -> Self {
        SquareMatrix {
            n,
            field,
            entries: vec![field.zero(); n * n],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zero(n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// The all-ones matrix E, the identity for the Hadamard product.
    pub fn all_ones(n: usize, field: Field) -> Self {
        SquareMatrix {
            n,
            field,
            entries: vec![field.one(); n * n],
        }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch(r.len(), n));
            }
        }
        Ok(SquareMatrix {
            n,
            field,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Permutation matrix P_s = (delta_{i,s(j)}): column j has its 1 in row s(j).
    pub fn perm_matrix(s: &Permutation, field: Field) -> Self {
        let n = s.degree();
        let mut m = Self::zero(n, field);
        for j in 0..n {
            m.set(s.apply(j), j, field.one());
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<FieldElement> {
        (0..self.n).map(|j| self.entry(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.n).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    fn check_compatible(&self, other: &SquareMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.describe(),
                other.field.describe(),
            ));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_compatible(other)?;
        Ok(SquareMatrix {
            n: self.n,
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| self.field.mul(a, b))
                .collect(),
        })
    }

    /// Entrywise inverse; every entry must be nonzero.
    pub fn hadamard_inverse(&self) -> Result<SquareMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.n {
            for j in 0..self.n {
                if self.field.is_zero(self.entry(i, j)) {
                    return Err(Error::ZeroEntry(i + 1, j + 1));
                }
                entries.push(self.field.inv(self.entry(i, j))?);
            }
        }
        Ok(SquareMatrix {
            n: self.n,
            field: self.field,
            entries,
        })
    }

    pub fn has_no_zero_entry(&self) -> bool {
        self.entries.iter().all(|e| !self.field.is_zero(e))
    }

    /// Ordinary matrix product.
    pub fn mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_compatible(other)?;
        let f = self.field;
        let mut out = Self::zero(self.n, f);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = f.zero();
                for k in 0..self.n {
                    acc = f.add(&acc, &f.mul(self.entry(i, k), other.entry(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SquareMatrix {
        let mut out = Self::zero(self.n, self.field);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.entry(i, j).clone());
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &FieldElement) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|e| self.field.mul(c, e)).collect(),
        }
    }

    /// M X as a column vector.
    pub fn mul_vec(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.field;
        (0..self.n)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.n {
                    acc = f.add(&acc, &f.mul(self.entry(i, j), &x[j]));
                }
                acc
            })
            .collect()
    }

    /// Rank over the field by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        linalg::rank(self.field, self.rows())
    }

    pub fn det(&self) -> FieldElement {
        linalg::det(self.field, self.rows())
    }

    pub fn is_invertible(&self) -> bool {
        !self.field.is_zero(&self.det())
    }

    /// Rank-1 outer product X Y^T.
    pub fn outer(field: Field, x: &[FieldElement], y: &[FieldElement]) -> Result<SquareMatrix> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(x.len(), y.len()));
        }
        let n = x.len();
        let mut m = Self::zero(n, field);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, field.mul(&x[i], &y[j]));
            }
        }
        Ok(m)
    }

    /// Column-stacked vectorization: entry (i,j) lands at position j*n + i.
    pub fn vectorize(&self) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for j in 0..self.n {
            for i in 0..self.n {
                out.push(self.entry(i, j).clone());
            }
        }
        out
    }

    /// Inverse of `vectorize`.
    pub fn from_vectorized(n: usize, field: Field, v: &[FieldElement]) -> Result<SquareMatrix> {
        if v.len() != n * n {
            return Err(Error::DimensionMismatch(v.len(), n * n));
        }
        let mut m = Self::zero(n, field);
        for j in 0..n {
            for i in 0..n {
                m.set(i, j, v[j * n + i].clone());
            }
        }
        Ok(m)
    }
}

/// Position of entry (i,j) in the column-stacked vectorization.
pub fn vec_index(n: usize, i: usize, j: usize) -> usize {
    j * n + i
}
