//! Column/row equivalence of indices with witness vectors, the induced
//! partitions, and the constructive H-/PH-normalization pipeline.
//!
//! Two columns i, j are equivalent when the functional vanishes on every
//! matrix whose j-th column is a fixed entrywise scaling Z of the i-th; the
//! finite criterion is that -f(s t_{i,j})/f(s) is constant on each fiber
//! {s : s(i)=k, s(j)=l} and the fiber ratios factor as z_l / z_k.  The fiber
//! scan runs over all n! permutations; correctness outranks speed at these
//! sizes.

use crate::error::Error;
use crate::field::FieldElement;
use crate::groupmap::GroupMap;
use crate::matrix::SquareMatrix;
use crate::perm::Permutation;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Column,
    Row,
}

/// Witness that indices i and j are equivalent: the scaling vector Z,
/// anchored at z_1 = 1 (Z is only determined up to a nonzero scalar).
/// Indices are 0-based here; the JSON boundary is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivWitness {
    pub i: usize,
    pub j: usize,
    pub side: Side,
    pub z: Vec<FieldElement>,
}

impl EquivWitness {
    /// Exhaustive check of the defining identity over all n! permutations:
    /// column side f(s t_{i,j}) = -(z_{s(j)}/z_{s(i)}) f(s); row side the
    /// analogue on f^T.
    pub fn verify(&self, f: &GroupMap) -> bool {
        let base = match self.side {
            Side::Column => f.clone(),
            Side::Row => f.transpose_map(),
        };
        let field = f.field();
        let t = Permutation::transposition(f.n(), self.i, self.j);
        Permutation::all(f.n()).iter().all(|s| {
            let st = s.compose(&t).expect("equal degrees");
            let ratio = field
                .div(&self.z[s.apply(self.j)], &self.z[s.apply(self.i)])
                .expect("witness entries are nonzero");
            base.value(&st) == &field.neg(&field.mul(&ratio, base.value(s)))
        })
    }
}

fn check_pair(f: &GroupMap, i: usize, j: usize) -> Result<()> {
    let n = f.n();
    if i >= n {
        return Err(Error::IndexOutOfRange(i + 1, n));
    }
    if j >= n {
        return Err(Error::IndexOutOfRange(j + 1, n));
    }
    if i == j {
        return Err(Error::IndicesEqual);
    }
    Ok(())
}

/// Witness for column equivalence of i and j, or None.
pub fn column_witness(f: &GroupMap, i: usize, j: usize) -> Result<Option<EquivWitness>> {
    check_pair(f, i, j)?;
    Ok(column_witness_unchecked(f, i, j, Side::Column))
}

/// Row equivalence is column equivalence of the transpose map.
pub fn row_witness(f: &GroupMap, i: usize, j: usize) -> Result<Option<EquivWitness>> {
    check_pair(f, i, j)?;
    Ok(column_witness_unchecked(&f.transpose_map(), i, j, Side::Row))
}

fn column_witness_unchecked(f: &GroupMap, i: usize, j: usize, side: Side) -> Option<EquivWitness> {
    let n = f.n();
    let field = f.field();
    let t = Permutation::transposition(n, i, j);
    // fiber ratios r[k][l] = -f(s t_{i,j})/f(s) on the fiber s(i)=k, s(j)=l
    let mut ratios: Vec<Vec<Option<FieldElement>>> = vec![vec![None; n]; n];
    for s in Permutation::all(n) {
        let st = s.compose(&t).expect("equal degrees");
        let rho = field
            .neg(&field.div(f.value(&st), f.value(&s)).expect("values nonzero"));
        let (k, l) = (s.apply(i), s.apply(j));
        match &ratios[k][l] {
            None => ratios[k][l] = Some(rho),
            Some(prev) if *prev == rho => {}
            Some(_) => return None,
        }
    }
    // anchor z_1 = 1 and read z_l off the first row of ratios
    let mut z = vec![field.one(); n];
    for (l, zl) in z.iter_mut().enumerate().skip(1) {
        *zl = ratios[0][l].clone().expect("every fiber is populated");
    }
    // global consistency: r[k][l] = z_l / z_k for all pairs
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            let expect = field.div(&z[l], &z[k]).expect("z entries nonzero");
            if ratios[k][l].as_ref() != Some(&expect) {
                return None;
            }
        }
    }
    Some(EquivWitness { i, j, side, z })
}

/// The column and row partitions with cardinality lists (sizes in
/// non-increasing order).  Classes are presented sorted, ordered by least
/// element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPair {
    pub column_classes: Vec<Vec<usize>>,
    pub row_classes: Vec<Vec<usize>>,
    pub c_list: Vec<usize>,
    pub r_list: Vec<usize>,
}

fn classes_of(f: &GroupMap, side: Side) -> Vec<Vec<usize>> {
    let n = f.n();
    let base = match side {
        Side::Column => f.clone(),
        Side::Row => f.transpose_map(),
    };
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) != find(&mut parent, j)
                && column_witness_unchecked(&base, i, j, Side::Column).is_some()
            {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..n {
        let r = find(&mut parent, x);
        classes.entry(r).or_default().push(x);
    }
    classes.into_values().collect()
}

pub fn partitions(f: &GroupMap) -> PartitionPair {
    let column_classes = classes_of(f, Side::Column);
    let row_classes = classes_of(f, Side::Row);
    let list = |cs: &[Vec<usize>]| {
        let mut l: Vec<usize> = cs.iter().map(|c| c.len()).collect();
        l.sort_unstable_by(|a, b| b.cmp(a));
        l
    };
    PartitionPair {
        c_list: list(&column_classes),
        r_list: list(&row_classes),
        column_classes,
        row_classes,
    }
}

/// True iff both partitions are all singletons.
pub fn is_rigid(f: &GroupMap) -> bool {
    let p = partitions(f);
    p.column_classes.iter().all(|c| c.len() == 1) && p.row_classes.iter().all(|c| c.len() == 1)
}

fn pairs_normalized(f: &GroupMap, classes: &[Vec<usize>], side: Side) -> bool {
    let base = match side {
        Side::Column => f.clone(),
        Side::Row => f.transpose_map(),
    };
    let field = f.field();
    for class in classes {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                let t = Permutation::transposition(f.n(), i, j);
                for s in Permutation::all(f.n()) {
                    let st = s.compose(&t).expect("equal degrees");
                    if base.value(&st) != &field.neg(base.value(&s)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn is_column_normalized(f: &GroupMap) -> bool {
    pairs_normalized(f, &classes_of(f, Side::Column), Side::Column)
}

pub fn is_row_normalized(f: &GroupMap) -> bool {
    pairs_normalized(f, &classes_of(f, Side::Row), Side::Row)
}

pub fn is_normalized(f: &GroupMap) -> bool {
    is_column_normalized(f) && is_row_normalized(f)
}

fn classes_are_ordered_intervals(classes: &[Vec<usize>]) -> bool {
    // classes come ordered by least element; they must tile 0..n as intervals
    // with non-increasing sizes
    let mut next = 0usize;
    let mut prev_size = usize::MAX;
    for c in classes {
        if c.first() != Some(&next) || *c.last().unwrap() != next + c.len() - 1 {
            return false;
        }
        if c.len() > prev_size {
            return false;
        }
        prev_size = c.len();
        next += c.len();
    }
    true
}

pub fn is_fully_normalized(f: &GroupMap) -> bool {
    let p = partitions(f);
    classes_are_ordered_intervals(&p.column_classes)
        && classes_are_ordered_intervals(&p.row_classes)
        && is_normalized(f)
}

/// Witness that `g` is obtained from the input by the PH-action:
/// `g = f.(A, tau, tau_prime)` exactly (for plain H-normalization both
/// permutations are the identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationWitness {
    pub a: SquareMatrix,
    pub tau: Permutation,
    pub tau_prime: Permutation,
    pub g: GroupMap,
}

impl NormalizationWitness {
    /// Re-apply the recorded action to `f`; equals `self.g` when the witness
    /// belongs to `f`.
    pub fn replay(&self, f: &GroupMap) -> Result<GroupMap> {
        f.ph_action(&self.a, &self.tau, &self.tau_prime)
    }
}

/// H-normalization: builds the column-step matrix from class-minimum
/// witnesses (columns outside the minima set get their witness vector,
/// minima get all-ones), then the row-step matrix on the column-normalized
/// map, and returns g = f.(A * B) together with the combined matrix.
pub fn normalize(f: &GroupMap) -> NormalizationWitness {
    let n = f.n();
    let field = f.field();
    let cols = classes_of(f, Side::Column);
    let mut a = SquareMatrix::all_ones(n, field);
    for class in &cols {
        let min = class[0];
        for &k in &class[1..] {
            let w = column_witness_unchecked(f, min, k, Side::Column)
                .expect("k is in the class of min");
            for i in 0..n {
                a.set(i, k, w.z[i].clone());
            }
        }
    }
    let g1 = f.h_action(&a).expect("witness entries are nonzero");
    debug_assert!(is_column_normalized(&g1));

    let rows = classes_of(&g1, Side::Row);
    let mut b = SquareMatrix::all_ones(n, field);
    for class in &rows {
        let min = class[0];
        for &i in &class[1..] {
            let w = column_witness_unchecked(&g1.transpose_map(), min, i, Side::Row)
                .expect("i is in the class of min");
            for j in 0..n {
                b.set(i, j, w.z[j].clone());
            }
        }
    }
    let g = g1.h_action(&b).expect("witness entries are nonzero");
    assert!(is_normalized(&g), "normalization postcondition");
    let combined = a.hadamard(&b).expect("same shape");
    NormalizationWitness {
        a: combined,
        tau: Permutation::identity(n),
        tau_prime: Permutation::identity(n),
        g,
    }
}

/// Sort classes by (size desc, least element asc) and build the permutation
/// mapping each class onto its target interval, ascending to ascending.
fn interval_sorter(classes: &[Vec<usize>], n: usize) -> (Permutation, Vec<Vec<usize>>) {
    let mut order: Vec<&Vec<usize>> = classes.iter().collect();
    order.sort_by_key(|c| (std::cmp::Reverse(c.len()), c[0]));
    let mut images = vec![0usize; n];
    let mut start = 0usize;
    let mut intervals = Vec::new();
    for class in order {
        intervals.push((start..start + class.len()).collect());
        for (offset, &e) in class.iter().enumerate() {
            images[e] = start + offset;
        }
        start += class.len();
    }
    (
        Permutation::from_images(images).expect("bijection by construction"),
        intervals,
    )
}

/// PH-normalization: H-normalize, then permute classes onto intervals in
/// non-increasing order of cardinality (ties broken by least original
/// element).  The result satisfies `g = f.(A, tau, tau_prime)`.
pub fn fully_normalize(f: &GroupMap) -> NormalizationWitness {
    let w = normalize(f);
    let g = &w.g;
    let n = f.n();
    let cols = classes_of(g, Side::Column);
    let rows = classes_of(g, Side::Row);
    // h ~ M -> g~(P_{tp} M P_t) with t(col class) = interval and
    // tp^{-1}(row class) = interval; in PH-action terms h = g.(E, tp, t^{-1})
    let (t, _) = interval_sorter(&cols, n);
    let (tp_inv, _) = interval_sorter(&rows, n);
    let tp = tp_inv.inverse();
    let e = SquareMatrix::all_ones(n, f.field());
    let h = g
        .ph_action(&e, &tp, &t.inverse())
        .expect("all-ones matrix is valid");
    assert!(is_fully_normalized(&h), "full normalization postcondition");
    let witness = NormalizationWitness {
        a: w.a,
        tau: tp,
        tau_prime: t.inverse(),
        g: h,
    };
    debug_assert_eq!(witness.replay(f).expect("valid action"), witness.g);
    witness
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::rng::Xorshift64Star;
    use crate::testutil::{random_map, random_matrix_nonzero, random_perm};

    fn gf(p: u64) -> Field {
        Field::gfp(p).unwrap()
    }

    #[test]
    fn sgn_has_all_ones_witnesses_and_one_class() {
        let f = gf(7);
        for n in 2..=4 {
            let sgn = GroupMap::sgn(n, f).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let w = column_witness(&sgn, i, j).unwrap().unwrap();
                    assert!(w.z.iter().all(|z| f.is_one(z)));
                    assert!(w.verify(&sgn));
                    assert!(row_witness(&sgn, i, j).unwrap().is_some());
                }
            }
            let p = partitions(&sgn);
            assert_eq!(p.column_classes, vec![(0..n).collect::<Vec<_>>()]);
            assert_eq!(p.row_classes, vec![(0..n).collect::<Vec<_>>()]);
            assert_eq!(p.c_list, vec![n]);
            assert!(!is_rigid(&sgn));
        }
    }

    #[test]
    fn permanent_is_rigid_from_degree_three() {
        let f = gf(5);
        let one = GroupMap::one(3, f).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(column_witness(&one, i, j).unwrap().is_none());
                    assert!(row_witness(&one, i, j).unwrap().is_none());
                }
            }
        }
        assert!(is_rigid(&one));
        let p = partitions(&one);
        assert_eq!(p.c_list, vec![1, 1, 1]);
    }

    #[test]
    fn degree_two_is_never_rigid() {
        let f = gf(7);
        let mut rng = Xorshift64Star::new(5);
        for _ in 0..10 {
            let m = random_map(2, f, &mut rng);
            let w = column_witness(&m, 0, 1).unwrap().unwrap();
            // z_2 / z_1 = -f(t)/f(id)
            let t = Permutation::transposition(2, 0, 1);
            let expect = f
                .neg(&f.div(m.value(&t), m.value(&Permutation::identity(2))).unwrap());
            assert_eq!(f.div(&w.z[1], &w.z[0]).unwrap(), expect);
            assert!(!is_rigid(&m));
        }
    }

    #[test]
    fn witness_errors() {
        let f = gf(5);
        let m = GroupMap::one(3, f).unwrap();
        assert_eq!(column_witness(&m, 0, 0), Err(Error::IndicesEqual));
        assert_eq!(column_witness(&m, 0, 3), Err(Error::IndexOutOfRange(4, 3)));
    }

    #[test]
    fn witness_symmetry_and_transitivity() {
        let f = gf(7);
        let sgn_nfix = GroupMap::sgn_nfix(4, f, &f.from_i64(2), &f.from_i64(3)).unwrap();
        // single column class; witnesses compose and invert
        let w01 = column_witness(&sgn_nfix, 0, 1).unwrap().unwrap();
        let w10 = column_witness(&sgn_nfix, 1, 0).unwrap().unwrap();
        // Z' = Z^[-1] up to scalar: z'_k * z_k constant
        let prods: Vec<_> = (0..4)
            .map(|k| f.mul(&w01.z[k], &w10.z[k]))
            .collect();
        assert!(prods.iter().all(|p| p == &prods[0]));
        // witnesses for (0,1) and (1,2) compose to one for (0,2) with Z * Z'
        let w12 = column_witness(&sgn_nfix, 1, 2).unwrap().unwrap();
        let composed: Vec<_> = (0..4)
            .map(|k| f.mul(&w01.z[k], &w12.z[k]))
            .collect();
        let w = EquivWitness {
            i: 0,
            j: 2,
            side: Side::Column,
            z: composed,
        };
        assert!(w.verify(&sgn_nfix));
    }

    #[test]
    fn partitions_invariant_under_h_action() {
        let f = gf(7);
        let mut rng = Xorshift64Star::new(6);
        for n in 2..=4 {
            let m = random_map(n, f, &mut rng);
            let a = random_matrix_nonzero(n, f, &mut rng);
            assert_eq!(partitions(&m), partitions(&m.h_action(&a).unwrap()));
        }
    }

    #[test]
    fn partitions_transport_under_ph_action() {
        let f = gf(7);
        let mut rng = Xorshift64Star::new(7);
        let n = 4;
        let m = GroupMap::example_h(
            n,
            f,
            &[f.from_i64(1), f.from_i64(2), f.from_i64(3)],
        )
        .unwrap();
        let a = random_matrix_nonzero(n, f, &mut rng);
        let t = random_perm(n, &mut rng);
        let tp = random_perm(n, &mut rng);
        let g = m.ph_action(&a, &t, &tp).unwrap();
        let pf = partitions(&m);
        let pg = partitions(&g);
        // column classes move by tau_prime^{-1}, row classes by tau^{-1}
        let map_classes = |cs: &[Vec<usize>], s: &Permutation| {
            let mut out: Vec<Vec<usize>> = cs
                .iter()
                .map(|c| {
                    let mut v: Vec<usize> = c.iter().map(|&x| s.inverse().apply(x)).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            out.sort();
            out
        };
        assert_eq!(pg.column_classes, map_classes(&pf.column_classes, &tp));
        assert_eq!(pg.row_classes, map_classes(&pf.row_classes, &t));
    }

    #[test]
    fn no_class_of_size_n_minus_one() {
        let f = gf(7);
        let mut rng = Xorshift64Star::new(8);
        for n in 3..=5 {
            for _ in 0..6 {
                let m = random_map(n, f, &mut rng);
                let p = partitions(&m);
                assert!(p.c_list.iter().all(|&s| s != n - 1));
                assert!(p.r_list.iter().all(|&s| s != n - 1));
            }
        }
    }

    #[test]
    fn four_by_four_row_implication() {
        let f = gf(7);
        let mut rng = Xorshift64Star::new(9);
        // family with column classes {1,2},{3,4}: sgn(s)*x when s({1,2})={1,2}
        for x_raw in [2i64, 3, 4, 5] {
            let x = f.from_i64(x_raw);
            let base = GroupMap::from_fn(4, f, |s| {
                let img: std::collections::BTreeSet<usize> =
                    [s.apply(0), s.apply(1)].into_iter().collect();
                let sign = f.from_i64(s.sgn());
                if img == [0usize, 1].into_iter().collect() {
                    f.mul(&sign, &x)
                } else {
                    sign
                }
            })
            .unwrap();
            // H-perturbations keep both partitions
            for _ in 0..3 {
                let a = random_matrix_nonzero(4, f, &mut rng);
                let m = base.h_action(&a).unwrap();
                let p = partitions(&m);
                assert_eq!(p.column_classes, vec![vec![0, 1], vec![2, 3]]);
                let r01 = p.row_classes.iter().any(|c| c.contains(&0) && c.contains(&1));
                assert!(r01, "hypothesis of the 4x4 implication");
                let r23 = p.row_classes.iter().any(|c| c.contains(&2) && c.contains(&3));
                assert!(r23, "conclusion of the 4x4 implication");
            }
        }
    }

    #[test]
    fn section_2_5_partitions() {
        let f = gf(7);
        // g at n = 5: columns {1,2},{3,4,5}; rows {1,2},{3,4},{5}
        let g = GroupMap::example_g(5, f, &f.from_i64(2)).unwrap();
        let p = partitions(&g);
        assert_eq!(p.column_classes, vec![vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(p.row_classes, vec![vec![0, 1], vec![2, 3], vec![4]]);
        // h at n = 4 with x = (1,2,3): columns {1,2},{3,4}; rows singletons
        let h = GroupMap::example_h(4, f, &[f.from_i64(1), f.from_i64(2), f.from_i64(3)])
            .unwrap();
        let p = partitions(&h);
        assert_eq!(p.column_classes, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(p.row_classes, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn normalize_fixes_sgn_and_central_maps() {
        let f = gf(7);
        let sgn = GroupMap::sgn(3, f).unwrap();
        let w = normalize(&sgn);
        assert_eq!(w.a, SquareMatrix::all_ones(3, f));
        assert_eq!(w.g, sgn);
        // beta^nfix * sgn normalizes to a scalar multiple of sgn
        let m = GroupMap::sgn_nfix(4, f, &f.one(), &f.from_i64(3)).unwrap();
        let w = normalize(&m);
        let scaled = GroupMap::sgn(4, f)
            .unwrap()
            .scalar_mul(w.g.value(&Permutation::identity(4)))
            .unwrap();
        assert_eq!(w.g, scaled);
        // degree 2: normalized g has g(t) = -g(id)
        let mut rng = Xorshift64Star::new(10);
        let m = random_map(2, f, &mut rng);
        let w = normalize(&m);
        let t = Permutation::transposition(2, 0, 1);
        assert_eq!(
            w.g.value(&t),
            &f.neg(w.g.value(&Permutation::identity(2)))
        );
    }

    #[test]
    fn normalize_replays_and_verifies() {
        let f = gf(11);
        let mut rng = Xorshift64Star::new(11);
        for n in 2..=4 {
            for _ in 0..4 {
                let m = random_map(n, f, &mut rng);
                let w = normalize(&m);
                assert!(is_normalized(&w.g));
                assert_eq!(w.replay(&m).unwrap(), w.g);
            }
        }
    }

    #[test]
    fn fully_normalize_sorts_classes() {
        let f = gf(7);
        let base = GroupMap::sgn_nfix(4, f, &f.one(), &f.one()).unwrap(); // = sgn
        let w = fully_normalize(&base);
        assert!(w.tau.is_identity() && w.tau_prime.is_identity());
        let g5 = GroupMap::example_g(5, f, &f.from_i64(3)).unwrap();
        let w = fully_normalize(&g5);
        let p = partitions(&w.g);
        assert_eq!(p.column_classes, vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(p.row_classes, vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(w.replay(&g5).unwrap(), w.g);
        assert!(is_fully_normalized(&w.g));
    }

    #[test]
    fn fully_normalize_unscrambles_classes() {
        // scramble a fully-normalized map with column classes {1,2},{3,4}
        // into one with classes {2,4},{1,3}, then recover intervals
        let f = gf(7);
        let x = f.from_i64(2);
        let base = GroupMap::from_fn(4, f, |s| {
            let img: std::collections::BTreeSet<usize> =
                [s.apply(0), s.apply(1)].into_iter().collect();
            let sign = f.from_i64(s.sgn());
            if img == [0usize, 1].into_iter().collect() {
                f.mul(&sign, &x)
            } else {
                sign
            }
        })
        .unwrap();
        assert!(is_fully_normalized(&base));
        let tp = Permutation::from_images(vec![2, 0, 3, 1]).unwrap();
        let e = SquareMatrix::all_ones(4, f);
        let scrambled = base
            .ph_action(&e, &Permutation::identity(4), &tp)
            .unwrap();
        assert_eq!(
            partitions(&scrambled).column_classes,
            vec![vec![0, 2], vec![1, 3]]
        );
        let w = fully_normalize(&scrambled);
        assert_eq!(
            partitions(&w.g).column_classes,
            vec![vec![0, 1], vec![2, 3]]
        );
        assert_eq!(w.replay(&scrambled).unwrap(), w.g);
    }

    #[test]
    fn fully_normalize_random_roundtrip() {
        let f = gf(11);
        let mut rng = Xorshift64Star::new(12);
        for _ in 0..6 {
            let m = random_map(4, f, &mut rng);
            let w = fully_normalize(&m);
            assert!(is_fully_normalized(&w.g));
            assert_eq!(w.replay(&m).unwrap(), w.g);
            // interval/cardinality ordering
            let p = partitions(&w.g);
            let sizes: Vec<usize> = p.column_classes.iter().map(|c| c.len()).collect();
            assert_eq!(sizes, p.c_list);
        }
    }
}
