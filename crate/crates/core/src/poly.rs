//! Schur functional evaluation and exact multivariate expansion.
//!
//! `eval` computes f~(M) = sum_s f(s) prod_j m_{s(j),j} directly, O(n * n!).
//! `polynomial_of` and `expand_composed` produce exact polynomials in the n^2
//! matrix entries for identity testing at n <= 4; `probabilistic_equal` is
//! the seeded randomized fallback for larger n.
//!
//! Exponent vectors are indexed like the column-stacked vectorization of M:
//! the variable for entry (i,j) sits at position j*n + i.

use crate::error::Error;
use crate::field::{Field, FieldElement};
use crate::groupmap::GroupMap;
use crate::matrix::{vec_index, SquareMatrix};
use crate::perm::Permutation;
use crate::rng::Xorshift64Star;
use crate::transform::TransformationMatrix;
use crate::Result;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Exact value of the Schur functional of f at M.
pub fn eval(f: &GroupMap, m: &SquareMatrix) -> Result<FieldElement> {
    if m.field() != f.field() {
        return Err(Error::FieldMismatch(
            m.field().describe(),
            f.field().describe(),
        ));
    }
    if m.n() != f.n() {
        return Err(Error::DimensionMismatch(m.n(), f.n()));
    }
    let field = f.field();
    let mut acc = field.zero();
    for (r, s) in Permutation::all(f.n()).iter().enumerate() {
        let mut term = f.value_at_rank(r).clone();
        for j in 0..f.n() {
            if field.is_zero(&term) {
                break;
            }
            term = field.mul(&term, m.entry(s.apply(j), j));
        }
        acc = field.add(&acc, &term);
    }
    Ok(acc)
}

/// Sparse polynomial in the n^2 entries of an n x n matrix, homogeneous of
/// total degree n.  Terms are keyed by packed exponent vectors and kept in
/// sorted order, so iteration and serialization are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultPoly {
    n: usize,
    field: Field,
    terms: BTreeMap<Vec<u8>, FieldElement>,
}

impl MultPoly {
    pub fn zero(n: usize, field: Field) -> Self {
        MultPoly {
            n,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_vars(&self) -> usize {
        self.n * self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, FieldElement> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_term(&mut self, exp: Vec<u8>, coef: FieldElement) {
        if self.field.is_zero(&coef) {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &coef);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scalar_mul(&self, c: &FieldElement) -> MultPoly {
        let mut out = MultPoly::zero(self.n, self.field);
        for (e, v) in &self.terms {
            out.insert_term(e.clone(), self.field.mul(c, v));
        }
        out
    }

    pub fn sub(&self, other: &MultPoly) -> MultPoly {
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.insert_term(e.clone(), self.field.neg(v));
        }
        out
    }

    /// Evaluate at a concrete matrix.
    pub fn eval_at(&self, m: &SquareMatrix) -> Result<FieldElement> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch(m.n(), self.n));
        }
        let f = self.field;
        let vars = m.vectorize();
        let mut acc = f.zero();
        for (exp, coef) in &self.terms {
            let mut t = coef.clone();
            for (v, &e) in vars.iter().zip(exp.iter()) {
                for _ in 0..e {
                    t = f.mul(&t, v);
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }
}

/// The n!-term multilinear polynomial of f~; evaluating it at M equals
/// `eval(f, M)`.
pub fn polynomial_of(f: &GroupMap) -> MultPoly {
    let n = f.n();
    let mut out = MultPoly::zero(n, f.field());
    for (r, s) in Permutation::all(n).iter().enumerate() {
        let mut exp = vec![0u8; n * n];
        for j in 0..n {
            exp[vec_index(n, s.apply(j), j)] = 1;
        }
        out.insert_term(exp, f.value_at_rank(r).clone());
    }
    out
}

/// The exact polynomial M -> g~(U(M)): each factor (U(M))_{s(j),j} is a
/// linear form in the entries of M, and the n-fold products are expanded and
/// collected.  Exact mode is capped at n <= 4.
pub fn expand_composed(g: &GroupMap, u: &TransformationMatrix) -> Result<MultPoly> {
    let n = g.n();
    if u.field() != g.field() {
        return Err(Error::FieldMismatch(
            u.field().describe(),
            g.field().describe(),
        ));
    }
    if u.n() != n {
        return Err(Error::DimensionMismatch(u.n(), n));
    }
    if n > 4 {
        return Err(Error::ExactModeTooLarge(n));
    }
    let field = g.field();
    let nv = n * n;
    let perms = Permutation::all(n);
    // one expansion per permutation, merged in rank order for determinism
    let partials: Vec<BTreeMap<Vec<u8>, FieldElement>> = perms
        .par_iter()
        .enumerate()
        .map(|(r, s)| {
            let mut acc: BTreeMap<Vec<u8>, FieldElement> = BTreeMap::new();
            acc.insert(vec![0u8; nv], g.value_at_rank(r).clone());
            for j in 0..n {
                let row = vec_index(n, s.apply(j), j);
                let mut next: BTreeMap<Vec<u8>, FieldElement> = BTreeMap::new();
                for (exp, coef) in &acc {
                    for var in 0..nv {
                        let w = u.entry(row, var);
                        if field.is_zero(w) {
                            continue;
                        }
                        let mut e2 = exp.clone();
                        e2[var] += 1;
                        let c2 = field.mul(coef, w);
                        match next.entry(e2) {
                            std::collections::btree_map::Entry::Vacant(en) => {
                                en.insert(c2);
                            }
                            std::collections::btree_map::Entry::Occupied(mut en) => {
                                let s = field.add(en.get(), &c2);
                                if field.is_zero(&s) {
                                    en.remove();
                                } else {
                                    *en.get_mut() = s;
                                }
                            }
                        }
                    }
                }
                acc = next;
            }
            acc
        })
        .collect();
    let mut out = MultPoly::zero(n, field);
    for part in partials {
        for (e, c) in part {
            out.insert_term(e, c);
        }
    }
    Ok(out)
}

/// The scalar a with p = a * q, if one exists (q must be nonzero).  The
/// candidate comes from any shared leading term and is then verified on every
/// term of both polynomials.
pub fn proportional(p: &MultPoly, q: &MultPoly) -> Result<Option<FieldElement>> {
    if p.n_vars() != q.n_vars() {
        return Err(Error::DimensionMismatch(p.n_vars(), q.n_vars()));
    }
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.num_terms() != q.num_terms() {
        return Ok(None);
    }
    let field = p.field;
    let (e0, qc0) = q.terms.iter().next().expect("q nonzero");
    let Some(pc0) = p.terms.get(e0) else {
        return Ok(None);
    };
    let alpha = field.div(pc0, qc0)?;
    for (e, qc) in &q.terms {
        match p.terms.get(e) {
            Some(pc) if *pc == field.mul(&alpha, qc) => {}
            _ => return Ok(None),
        }
    }
    Ok(Some(alpha))
}

/// Verdict of the randomized identity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbVerdict {
    /// No counterexample in the given trials; error probability at most
    /// (n/p)^trials over GF(p).
    EqualWhp,
    /// A concrete matrix M with g~(U(M)) != f~(M).
    Unequal(SquareMatrix),
}

/// Tests g~(U(M)) = f~(M) at `trials` seeded uniform matrices.
pub fn probabilistic_equal(
    g: &GroupMap,
    u: &TransformationMatrix,
    f: &GroupMap,
    trials: u64,
    seed: u64,
) -> Result<ProbVerdict> {
    let n = f.n();
    if g.n() != n || u.n() != n {
        return Err(Error::DimensionMismatch(g.n(), n));
    }
    if g.field() != f.field() || u.field() != f.field() {
        return Err(Error::FieldMismatch(
            g.field().describe(),
            f.field().describe(),
        ));
    }
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let field = f.field();
    if let Some(p) = field.order() {
        if p <= 4 * n as u64 {
            return Err(Error::FieldTooSmall(p));
        }
    }
    // rationals: sample integer entries from [0, 8n], error <= (n/(8n+1))^trials
    let bound = 8 * n as u64;
    let mut rng = Xorshift64Star::new(seed);
    for _ in 0..trials {
        let mut m = SquareMatrix::zero(n, field);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, field.sample(&mut rng, bound));
            }
        }
        let lhs = eval(g, &u.apply(&m)?)?;
        let rhs = eval(f, &m)?;
        if lhs != rhs {
            return Ok(ProbVerdict::Unequal(m));
        }
    }
    Ok(ProbVerdict::EqualWhp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xorshift64Star;
    use crate::testutil::{random_map, random_matrix, random_matrix_nonzero};

    fn gf(p: u64) -> Field {
        Field::gfp(p).unwrap()
    }

    #[test]
    fn eval_recovers_map_on_permutation_matrices() {
        let f = gf(7);
        for n in 1..=4 {
            let m = crate::testutil::random_map(n, f, &mut Xorshift64Star::new(n as u64));
            for s in Permutation::all(n) {
                let p = SquareMatrix::perm_matrix(&s, f);
                assert_eq!(&eval(&m, &p).unwrap(), m.value(&s));
            }
        }
    }

    #[test]
    fn eval_determinant_and_permanent() {
        let f = gf(5);
        let sgn = GroupMap::sgn(3, f).unwrap();
        assert_eq!(eval(&sgn, &SquareMatrix::identity(3, f)).unwrap(), f.one());
        // n = 2 worked instance: ad + alpha*cb at alpha=2, M=[[1,2],[3,4]] is 1 mod 5
        let alpha = f.from_i64(2);
        let m2 = GroupMap::from_fn(2, f, |s| {
            if s.is_identity() {
                f.one()
            } else {
                alpha.clone()
            }
        })
        .unwrap();
        let m = SquareMatrix::from_rows(
            f,
            vec![
                vec![f.from_i64(1), f.from_i64(2)],
                vec![f.from_i64(3), f.from_i64(4)],
            ],
        )
        .unwrap();
        assert_eq!(eval(&m2, &m).unwrap(), f.one());
        // and it matches f(id) * det(A * M) with A = [[1,-alpha],[1,1]]
        let a = SquareMatrix::from_rows(
            f,
            vec![vec![f.one(), f.neg(&alpha)], vec![f.one(), f.one()]],
        )
        .unwrap();
        assert_eq!(eval(&m2, &m).unwrap(), a.hadamard(&m).unwrap().det());
    }

    #[test]
    fn eval_is_h_action_compatible() {
        let f = gf(11);
        let mut rng = Xorshift64Star::new(9);
        for _ in 0..5 {
            let map = random_map(3, f, &mut rng);
            let a = random_matrix_nonzero(3, f, &mut rng);
            let m = random_matrix(3, f, &mut rng);
            let lhs = eval(&map.h_action(&a).unwrap(), &m).unwrap();
            let rhs = eval(&map, &a.hadamard(&m).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn eval_transpose_compatible() {
        let f = gf(11);
        let mut rng = Xorshift64Star::new(10);
        for n in 2..=4 {
            let map = random_map(n, f, &mut rng);
            let m = random_matrix(n, f, &mut rng);
            assert_eq!(
                eval(&map.transpose_map(), &m).unwrap(),
                eval(&map, &m.transpose()).unwrap()
            );
        }
    }

    #[test]
    fn eval_column_multilinearity() {
        let f = gf(13);
        let mut rng = Xorshift64Star::new(11);
        let map = random_map(3, f, &mut rng);
        let lambda = f.from_i64(5);
        let mu = f.from_i64(9);
        let u: Vec<_> = (0..3).map(|_| f.sample(&mut rng, 16)).collect();
        let v: Vec<_> = (0..3).map(|_| f.sample(&mut rng, 16)).collect();
        let base = random_matrix(3, f, &mut rng);
        let with_col = |col: Vec<FieldElement>| {
            let mut m = base.clone();
            for i in 0..3 {
                m.set(i, 1, col[i].clone());
            }
            m
        };
        let mixed: Vec<_> = (0..3)
            .map(|i| f.add(&f.mul(&lambda, &u[i]), &f.mul(&mu, &v[i])))
            .collect();
        let lhs = eval(&map, &with_col(mixed)).unwrap();
        let rhs = f.add(
            &f.mul(&lambda, &eval(&map, &with_col(u.clone())).unwrap()),
            &f.mul(&mu, &eval(&map, &with_col(v.clone())).unwrap()),
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn polynomial_of_shapes() {
        let f = gf(5);
        // S_1: a single term f(id) x_{1,1}
        let m1 = GroupMap::new(1, f, vec![f.from_i64(3)]).unwrap();
        let p1 = polynomial_of(&m1);
        assert_eq!(p1.num_terms(), 1);
        assert_eq!(p1.terms().get(&vec![1u8]), Some(&f.from_i64(3)));
        // sgn at n = 2: x11 x22 - x21 x12
        let p = polynomial_of(&GroupMap::sgn(2, f).unwrap());
        assert_eq!(p.num_terms(), 2);
        let mut e_diag = vec![0u8; 4];
        e_diag[vec_index(2, 0, 0)] = 1;
        e_diag[vec_index(2, 1, 1)] = 1;
        let mut e_anti = vec![0u8; 4];
        e_anti[vec_index(2, 1, 0)] = 1;
        e_anti[vec_index(2, 0, 1)] = 1;
        assert_eq!(p.terms().get(&e_diag), Some(&f.one()));
        assert_eq!(p.terms().get(&e_anti), Some(&f.from_i64(-1)));
        // permanent at n = 3: six monomials, all coefficients 1
        let p = polynomial_of(&GroupMap::one(3, f).unwrap());
        assert_eq!(p.num_terms(), 6);
        assert!(p.terms().values().all(|c| f.is_one(c)));
    }

    #[test]
    fn polynomial_matches_eval() {
        let f = gf(11);
        let mut rng = Xorshift64Star::new(12);
        for n in 1..=4 {
            let map = random_map(n, f, &mut rng);
            let poly = polynomial_of(&map);
            for _ in 0..4 {
                let m = random_matrix(n, f, &mut rng);
                assert_eq!(poly.eval_at(&m).unwrap(), eval(&map, &m).unwrap());
            }
        }
    }

    #[test]
    fn proportional_basic() {
        let f = gf(7);
        let det = polynomial_of(&GroupMap::sgn(3, f).unwrap());
        let twice = det.scalar_mul(&f.from_i64(2));
        assert_eq!(proportional(&twice, &det).unwrap(), Some(f.from_i64(2)));
        assert_eq!(proportional(&det, &det).unwrap(), Some(f.one()));
        let per = polynomial_of(&GroupMap::one(3, f).unwrap());
        assert_eq!(proportional(&det, &per).unwrap(), None);
        let zero = MultPoly::zero(3, f);
        assert_eq!(proportional(&det, &zero), Err(Error::ZeroPolynomial));
    }
}
