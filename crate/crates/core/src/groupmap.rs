//! Nowhere-zero maps f : S_n -> F* as dense n!-value tables, with the group
//! actions on them: the Hadamard action f.A, the permutation-Hadamard action
//! f.(A,t,t'), the transpose f^T, centrality, and the sgn/nfix form fit.
//!
//! Values are indexed by the lexicographic rank of the permutation's one-line
//! notation.  Every algorithm downstream needs arbitrary pointwise access, so
//! the dense table (degree capped at 8) beats any symbolic representation.

use crate::error::Error;
use crate::field::{Field, FieldElement};
use crate::matrix::SquareMatrix;
use crate::perm::{check_degree, factorial, Permutation};
use crate::Result;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMap {
    n: usize,
    field: Field,
    values: Vec<FieldElement>,
}

impl GroupMap {
    /// Validates the value count and that no value is zero.
    pub fn new(n: usize, field: Field, values: Vec<FieldElement>) -> Result<GroupMap> {
        check_degree(n)?;
        if values.len() != factorial(n) {
            return Err(Error::WrongValueCount(values.len(), factorial(n)));
        }
        if let Some(r) = values.iter().position(|v| field.is_zero(v)) {
            return Err(Error::ZeroValue(r));
        }
        Ok(GroupMap { n, field, values })
    }

    pub fn from_fn(
        n: usize,
        field: Field,
        f: impl Fn(&Permutation) -> FieldElement,
    ) -> Result<GroupMap> {
        check_degree(n)?;
        let values = Permutation::all(n).iter().map(|s| f(s)).collect();
        GroupMap::new(n, field, values)
    }

    /// The signature map; its functional is the determinant.
    pub fn sgn(n: usize, field: Field) -> Result<GroupMap> {
        GroupMap::from_fn(n, field, |s| field.from_i64(s.sgn()))
    }

    /// The constant map 1; its functional is the permanent.
    pub fn one(n: usize, field: Field) -> Result<GroupMap> {
        GroupMap::from_fn(n, field, |_| field.one())
    }

    /// s -> alpha * beta^nfix(s) * sgn(s).
    pub fn sgn_nfix(n: usize, field: Field, alpha: &FieldElement, beta: &FieldElement) -> Result<GroupMap> {
        if field.is_zero(alpha) || field.is_zero(beta) {
            return Err(Error::ZeroValue(0));
        }
        let mut out = Vec::with_capacity(factorial(n));
        for s in Permutation::all(n) {
            let b = field.pow(beta, s.nfix() as i64)?;
            let v = field.mul(alpha, &field.mul(&b, &field.from_i64(s.sgn())));
            out.push(v);
        }
        GroupMap::new(n, field, out)
    }

    /// Example family with column classes {1,2} and [3,n], n >= 5:
    /// sgn(s)*x when {s(1),s(2)} is {2,n} or {1,n}, else sgn(s).
    pub fn example_g(n: usize, field: Field, x: &FieldElement) -> Result<GroupMap> {
        if n < 5 {
            return Err(Error::NeedsDegreeAtLeast(5));
        }
        if field.is_zero(x) || field.is_one(x) {
            return Err(Error::Parse("ex-g needs x outside {0,1}".into()));
        }
        GroupMap::from_fn(n, field, |s| {
            let (a, b) = (s.apply(0).min(s.apply(1)), s.apply(0).max(s.apply(1)));
            let sign = field.from_i64(s.sgn());
            if b == n - 1 && (a == 0 || a == 1) {
                field.mul(&sign, x)
            } else {
                sign
            }
        })
    }

    /// Example family with column classes {1,2} and [3,n] and all row classes
    /// singletons (for distinct x_i), n >= 4: sgn(s)*x_i when
    /// {s(1),s(2)} = {i,n}, else sgn(s).
    pub fn example_h(n: usize, field: Field, xs: &[FieldElement]) -> Result<GroupMap> {
        if n < 4 {
            return Err(Error::NeedsDegreeAtLeast(4));
        }
        if xs.len() != n - 1 {
            return Err(Error::WrongValueCount(xs.len(), n - 1));
        }
        if xs.iter().any(|x| field.is_zero(x)) {
            return Err(Error::ZeroValue(0));
        }
        GroupMap::from_fn(n, field, |s| {
            let (a, b) = (s.apply(0).min(s.apply(1)), s.apply(0).max(s.apply(1)));
            let sign = field.from_i64(s.sgn());
            if b == n - 1 {
                field.mul(&sign, &xs[a])
            } else {
                sign
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn value(&self, s: &Permutation) -> &FieldElement {
        &self.values[s.lex_rank()]
    }

    pub fn value_at_rank(&self, r: usize) -> &FieldElement {
        &self.values[r]
    }

    pub fn scalar_mul(&self, c: &FieldElement) -> Result<GroupMap> {
        if self.field.is_zero(c) {
            return Err(Error::ZeroValue(0));
        }
        GroupMap::new(
            self.n,
            self.field,
            self.values.iter().map(|v| self.field.mul(c, v)).collect(),
        )
    }

    /// f^T : s -> f(s^-1); involutive.
    pub fn transpose_map(&self) -> GroupMap {
        let mut values = vec![self.field.zero(); self.values.len()];
        for (r, s) in Permutation::all(self.n).iter().enumerate() {
            values[s.inverse().lex_rank()] = self.values[r].clone();
        }
        GroupMap {
            n: self.n,
            field: self.field,
            values,
        }
    }

    fn check_action_matrix(&self, a: &SquareMatrix) -> Result<()> {
        if a.field() != self.field {
            return Err(Error::FieldMismatch(
                a.field().describe(),
                self.field.describe(),
            ));
        }
        if a.n() != self.n {
            return Err(Error::DimensionMismatch(a.n(), self.n));
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if self.field.is_zero(a.entry(i, j)) {
                    return Err(Error::ZeroEntry(i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    /// The Hadamard action f.A : s -> f(s) prod_k a_{s(k),k}; its functional
    /// is M -> f~(A * M) (entrywise product).
    pub fn h_action(&self, a: &SquareMatrix) -> Result<GroupMap> {
        self.check_action_matrix(a)?;
        let mut values = Vec::with_capacity(self.values.len());
        for (r, s) in Permutation::all(self.n).iter().enumerate() {
            let mut v = self.values[r].clone();
            for k in 0..self.n {
                v = self.field.mul(&v, a.entry(s.apply(k), k));
            }
            values.push(v);
        }
        Ok(GroupMap {
            n: self.n,
            field: self.field,
            values,
        })
    }

    /// The permutation-Hadamard action
    /// f.(A,t,t') : s -> f(r) prod_k a_{r(k),k} with r = t s t'^-1; its
    /// functional is M -> f~(A * (P_t M P_t'^-1)).
    pub fn ph_action(
        &self,
        a: &SquareMatrix,
        t: &Permutation,
        t_prime: &Permutation,
    ) -> Result<GroupMap> {
        self.check_action_matrix(a)?;
        if t.degree() != self.n || t_prime.degree() != self.n {
            return Err(Error::DegreeMismatch(t.degree(), self.n));
        }
        let tp_inv = t_prime.inverse();
        let mut values = Vec::with_capacity(self.values.len());
        for s in Permutation::all(self.n) {
            let r = t.compose(&s)?.compose(&tp_inv)?;
            let mut v = self.value(&r).clone();
            for k in 0..self.n {
                v = self.field.mul(&v, a.entry(r.apply(k), k));
            }
            values.push(v);
        }
        Ok(GroupMap {
            n: self.n,
            field: self.field,
            values,
        })
    }

    /// True iff f is constant on every conjugacy class (grouped by cycle type).
    pub fn is_central(&self) -> bool {
        self.central_class_values().is_some()
    }

    /// Cycle type -> common value, or None when some class is not constant.
    pub fn central_class_values(&self) -> Option<BTreeMap<Vec<usize>, FieldElement>> {
        let mut classes: BTreeMap<Vec<usize>, FieldElement> = BTreeMap::new();
        for (r, s) in Permutation::all(self.n).iter().enumerate() {
            let key = s.cycle_type();
            match classes.get(&key) {
                None => {
                    classes.insert(key, self.values[r].clone());
                }
                Some(v) => {
                    if v != &self.values[r] {
                        return None;
                    }
                }
            }
        }
        Some(classes)
    }

    /// Scalars (alpha, beta) with f(s) = alpha * beta^nfix(s) * sgn(s) for all
    /// s, when they exist.  Candidates come from class-value ratios at nfix
    /// values differing by one, then a full verification pass decides.
    pub fn fit_sgn_nfix_form(&self) -> Result<Option<(FieldElement, FieldElement)>> {
        if self.n < 3 {
            return Err(Error::NeedsDegreeAtLeast(3));
        }
        let classes = self.central_class_values().ok_or(Error::NotCentral)?;
        // per class: (nfix, sign-corrected value v = f * sgn); the fit then
        // reads v(c) = alpha * beta^nfix(c)
        let f = self.field;
        let mut by_nfix: BTreeMap<usize, FieldElement> = BTreeMap::new();
        for (key, value) in &classes {
            let nfix = key.iter().filter(|&&l| l == 1).count();
            let parity = key.iter().map(|l| l - 1).sum::<usize>() % 2;
            let sign = if parity == 0 { 1 } else { -1 };
            let v = f.mul(value, &f.from_i64(sign));
            if let Some(prev) = by_nfix.get(&nfix) {
                if prev != &v {
                    return Ok(None); // two classes with equal nfix disagree
                }
            } else {
                by_nfix.insert(nfix, v);
            }
        }
        let nfixes: Vec<usize> = by_nfix.keys().copied().collect();
        let pair = nfixes
            .windows(2)
            .find(|w| w[1] == w[0] + 1)
            .map(|w| (w[0], w[1]))
            .expect("degree >= 3 always has classes at consecutive nfix values");
        let beta = f.div(&by_nfix[&pair.1], &by_nfix[&pair.0])?;
        let alpha = f.div(&by_nfix[&self.n], &f.pow(&beta, self.n as i64)?)?;
        for (&nfix, v) in &by_nfix {
            let expect = f.mul(&alpha, &f.pow(&beta, nfix as i64)?);
            if &expect != v {
                return Ok(None);
            }
        }
        Ok(Some((alpha, beta)))
    }
}
