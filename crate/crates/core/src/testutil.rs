//! Shared helpers for unit and integration tests: seeded random maps,
//! matrices and permutations.

use crate::field::{Field, FieldElement};
use crate::groupmap::GroupMap;
use crate::matrix::SquareMatrix;
use crate::perm::{factorial, Permutation};
use crate::rng::Xorshift64Star;

pub(crate) fn random_matrix_nonzero(
    n: usize,
    field: Field,
    rng: &mut Xorshift64Star,
) -> SquareMatrix {
    let mut m = SquareMatrix::zero(n, field);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, field.sample_nonzero(rng, 16));
        }
    }
    m
}

pub(crate) fn random_matrix(n: usize, field: Field, rng: &mut Xorshift64Star) -> SquareMatrix {
    let mut m = SquareMatrix::zero(n, field);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, field.sample(rng, 16));
        }
    }
    m
}

pub(crate) fn random_invertible(n: usize, field: Field, rng: &mut Xorshift64Star) -> SquareMatrix {
    loop {
        let m = random_matrix(n, field, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

pub(crate) fn random_map(n: usize, field: Field, rng: &mut Xorshift64Star) -> GroupMap {
    GroupMap::from_fn(n, field, |_| field.sample_nonzero(rng, 16)).unwrap()
}

/// Random central map: one value per conjugacy class.
pub(crate) fn random_central_map(n: usize, field: Field, rng: &mut Xorshift64Star) -> GroupMap {
    use std::collections::BTreeMap;
    let mut by_class: BTreeMap<Vec<usize>, FieldElement> = BTreeMap::new();
    for s in Permutation::all(n) {
        by_class
            .entry(s.cycle_type())
            .or_insert_with(|| field.sample_nonzero(rng, 16));
    }
    GroupMap::from_fn(n, field, |s| by_class[&s.cycle_type()].clone()).unwrap()
}

pub(crate) fn random_perm(n: usize, rng: &mut Xorshift64Star) -> Permutation {
    Permutation::lex_unrank(n, rng.below(factorial(n) as u64) as usize).unwrap()
}

pub(crate) fn random_nonzero_vec(
    n: usize,
    field: Field,
    rng: &mut Xorshift64Star,
) -> Vec<FieldElement> {
    loop {
        let v: Vec<FieldElement> = (0..n).map(|_| field.sample(rng, 16)).collect();
        if v.iter().any(|e| !field.is_zero(e)) {
            return v;
        }
    }
}
