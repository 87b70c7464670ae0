//! Coherent permutations of a central map and the normal subgroup they form.
//!
//! A permutation t is f-coherent when some matrix A with nonzero entries
//! satisfies f(s t) = f(s) prod_j a_{s(j),j} for every s; the set G_f of
//! coherent permutations is a normal subgroup, so over S_n it is trivial,
//! the Klein group (n = 4 only), alternating, or full.  Over GF(p) coherence
//! of a single permutation is decided by the multiplicative product solver;
//! the subgroup itself is classified by central-equivalence fits, and the two
//! routes are cross-checked against each other.

use crate::error::Error;
use crate::field::{Field, FieldElement};
use crate::groupmap::GroupMap;
use crate::matrix::SquareMatrix;
use crate::perm::{factorial, Permutation};
use crate::solver::ProductSystemSolver;
use crate::Result;
use std::collections::BTreeMap;

/// A coherent permutation together with an adapted matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceWitness {
    pub tau: Permutation,
    pub a: SquareMatrix,
}

impl CoherenceWitness {
    /// Exhaustive check of f(s tau) = f(s) prod_j a_{s(j),j} over all of S_n.
    pub fn verify(&self, f: &GroupMap) -> bool {
        if self.tau.degree() != f.n() || self.a.n() != f.n() || !self.a.has_no_zero_entry() {
            return false;
        }
        let field = f.field();
        Permutation::all(f.n()).iter().all(|s| {
            let st = s.compose(&self.tau).expect("equal degrees");
            let mut prod = f.value(s).clone();
            for j in 0..f.n() {
                prod = field.mul(&prod, self.a.entry(s.apply(j), j));
            }
            f.value(&st) == &prod
        })
    }
}

/// Three-valued coherence answer; `Unknown` only occurs for non-central maps
/// over the rationals, where the multiplicative system has no decision
/// procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoherenceStatus {
    Coherent(CoherenceWitness),
    NotCoherent,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupTag {
    Trivial,
    KleinK4,
    Alternating,
    Full,
}

/// The subgroup G_f of all f-coherent permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgroupDescriptor {
    pub tag: SubgroupTag,
    pub n: usize,
}

impl SubgroupDescriptor {
    pub fn contains(&self, t: &Permutation) -> bool {
        match self.tag {
            SubgroupTag::Trivial => t.is_identity(),
            SubgroupTag::Full => true,
            SubgroupTag::Alternating => t.is_even(),
            SubgroupTag::KleinK4 => t.is_identity() || t.cycle_type() == vec![2, 2],
        }
    }

    pub fn tag_str(&self) -> &'static str {
        match self.tag {
            SubgroupTag::Trivial => "trivial",
            SubgroupTag::KleinK4 => "klein-K4",
            SubgroupTag::Alternating => "alternating",
            SubgroupTag::Full => "full",
        }
    }
}

/// Decide coherence of tau.  Over GF(p) the product solver always decides;
/// over the rationals central maps go through the classification fast paths
/// and non-central maps come back `Unknown`.
pub fn is_f_coherent(f: &GroupMap, tau: &Permutation) -> Result<CoherenceStatus> {
    if tau.degree() != f.n() {
        return Err(Error::DegreeMismatch(tau.degree(), f.n()));
    }
    if f.field().is_finite() {
        let solver = ProductSystemSolver::new(f.n(), f.field())?;
        return is_coherent_with_solver(f, tau, &solver);
    }
    if !f.is_central() {
        return Ok(CoherenceStatus::Unknown);
    }
    // rational central path: classify G_f, then construct a witness when the
    // tag admits tau
    let gf = compute_gf(f)?;
    if !gf.contains(tau) {
        return Ok(CoherenceStatus::NotCoherent);
    }
    let w = central_witness(f, tau, &gf)?;
    assert!(w.verify(f), "constructed witness must verify");
    Ok(CoherenceStatus::Coherent(w))
}

fn is_coherent_with_solver(
    f: &GroupMap,
    tau: &Permutation,
    solver: &ProductSystemSolver,
) -> Result<CoherenceStatus> {
    let field = f.field();
    let rhs: Vec<FieldElement> = Permutation::all(f.n())
        .iter()
        .map(|s| {
            let st = s.compose(tau).expect("equal degrees");
            field.div(f.value(&st), f.value(s)).expect("values nonzero")
        })
        .collect();
    match solver.solve(&rhs)? {
        Some(a) => {
            let w = CoherenceWitness {
                tau: tau.clone(),
                a,
            };
            assert!(w.verify(f), "solver witness must verify");
            Ok(CoherenceStatus::Coherent(w))
        }
        None => Ok(CoherenceStatus::NotCoherent),
    }
}

/// The explicit matrix adapted to the 3-cycle (1 2 3) of a central map on
/// S_3: off-pattern entries 1, with a = f((1 2 3))/f(id) placed so every
/// generalized diagonal product matches the class ratio.
pub fn three_cycle_adapted(f: &GroupMap) -> Result<CoherenceWitness> {
    if f.n() != 3 {
        return Err(Error::WrongDegree(3));
    }
    if !f.is_central() {
        return Err(Error::NotCentral);
    }
    let field = f.field();
    let tau = Permutation::cycle(3, &[0, 1, 2]);
    let alpha = field.div(f.value(&tau), f.value(&Permutation::identity(3)))?;
    let mut a = SquareMatrix::all_ones(3, field);
    a.set(0, 1, field.inv(&alpha)?);
    a.set(2, 2, alpha);
    let w = CoherenceWitness { tau, a };
    assert!(w.verify(f), "three-cycle matrix must verify");
    Ok(w)
}

/// Adapted matrix for the double transposition (1 2)(3 4) of a central map
/// on S_4, which exists iff f(id) = a^2 f((1 2)(3 4)) for
/// a = f((1 2))/f((1 2 3 4)).
pub fn k4_adapted(f: &GroupMap) -> Result<Option<CoherenceWitness>> {
    if f.n() != 4 {
        return Err(Error::WrongDegree(4));
    }
    if !f.is_central() {
        return Err(Error::NotCentral);
    }
    let field = f.field();
    let t12 = Permutation::transposition(4, 0, 1);
    let four_cycle = Permutation::cycle(4, &[0, 1, 2, 3]);
    let dt = Permutation::cycle(4, &[0, 1]).compose(&Permutation::cycle(4, &[2, 3]))?;
    let alpha = field.div(f.value(&t12), f.value(&four_cycle))?;
    let cond = field.mul(&field.mul(&alpha, &alpha), f.value(&dt));
    if f.value(&Permutation::identity(4)) != &cond {
        return Ok(None);
    }
    let mut a = SquareMatrix::all_ones(4, field);
    a.set(0, 1, alpha.clone());
    a.set(1, 0, alpha.clone());
    let alpha_inv = field.inv(&alpha)?;
    a.set(2, 2, alpha_inv.clone());
    a.set(3, 3, alpha_inv);
    let w = CoherenceWitness { tau: dt, a };
    assert!(w.verify(f), "Klein matrix must verify");
    Ok(Some(w))
}

/// Witness for s t with matrix A * (B P_s^-1), from witnesses (s, A), (t, B).
pub fn compose_adapted(
    f: &GroupMap,
    w1: &CoherenceWitness,
    w2: &CoherenceWitness,
) -> Result<CoherenceWitness> {
    if !w1.verify(f) || !w2.verify(f) {
        return Err(Error::InvalidWitness);
    }
    let field = f.field();
    let p_s_inv = SquareMatrix::perm_matrix(&w1.tau.inverse(), field);
    let a = w1.a.hadamard(&w2.a.mul(&p_s_inv)?)?;
    let w = CoherenceWitness {
        tau: w1.tau.compose(&w2.tau)?,
        a,
    };
    assert!(w.verify(f), "composed witness must verify");
    Ok(w)
}

/// Witness for u t u^-1 with matrix P_u A P_u^-1.
pub fn conjugate_adapted(
    f: &GroupMap,
    w: &CoherenceWitness,
    u: &Permutation,
) -> Result<CoherenceWitness> {
    if !w.verify(f) {
        return Err(Error::InvalidWitness);
    }
    let field = f.field();
    let pu = SquareMatrix::perm_matrix(u, field);
    let pu_inv = SquareMatrix::perm_matrix(&u.inverse(), field);
    let a = pu.mul(&w.a)?.mul(&pu_inv)?;
    let out = CoherenceWitness {
        tau: u.compose(&w.tau)?.compose(&u.inverse())?,
        a,
    };
    assert!(out.verify(f), "conjugated witness must verify");
    Ok(out)
}

/// Transport a witness for f to one for g(s) = alpha^nfix(s) * beta * f(s):
/// with B the alpha-diagonal matrix and C the beta-first-row matrix and
/// D = B * C, the matrix D^[-1] * A * (D P_s^-1) is adapted for g.
pub fn transport_central_equiv(
    f: &GroupMap,
    g_params: (&FieldElement, &FieldElement),
    w: &CoherenceWitness,
) -> Result<CoherenceWitness> {
    if !w.verify(f) {
        return Err(Error::InvalidWitness);
    }
    let field = f.field();
    let (alpha, beta) = g_params;
    let n = f.n();
    let g = GroupMap::from_fn(n, field, |s| {
        let a = field.pow(alpha, s.nfix() as i64).expect("alpha nonzero");
        field.mul(&a, &field.mul(beta, f.value(s)))
    })?;
    let mut d = SquareMatrix::all_ones(n, field);
    for i in 0..n {
        d.set(i, i, alpha.clone());
    }
    for j in 0..n {
        d.set(0, j, field.mul(d.entry(0, j), beta));
    }
    let p_s_inv = SquareMatrix::perm_matrix(&w.tau.inverse(), field);
    let a = d
        .hadamard_inverse()?
        .hadamard(&w.a)?
        .hadamard(&d.mul(&p_s_inv)?)?;
    let out = CoherenceWitness {
        tau: w.tau.clone(),
        a,
    };
    assert!(out.verify(&g), "transported witness must verify");
    Ok(out)
}

/// Fit f(s) = alpha^nfix(s) * beta * target(s) for a central f against a
/// central reference; candidates from class ratios at adjacent nfix values
/// (square roots only enter at n = 2), then full verification.
pub fn fit_central_equiv(f: &GroupMap, target: &GroupMap) -> Result<Option<(FieldElement, FieldElement)>> {
    let field = f.field();
    let cf = f.central_class_values().ok_or(Error::NotCentral)?;
    let ct = target.central_class_values().ok_or(Error::NotCentral)?;
    let mut by_nfix: BTreeMap<usize, FieldElement> = BTreeMap::new();
    for (key, v) in &cf {
        let nfix = key.iter().filter(|&&l| l == 1).count();
        let h = field.div(v, &ct[key])?;
        if let Some(prev) = by_nfix.get(&nfix) {
            if prev != &h {
                return Ok(None);
            }
        } else {
            by_nfix.insert(nfix, h);
        }
    }
    let n = f.n();
    let nfixes: Vec<usize> = by_nfix.keys().copied().collect();
    let alpha = if let Some(w) = nfixes.windows(2).find(|w| w[1] == w[0] + 1) {
        field.div(&by_nfix[&w[1]], &by_nfix[&w[0]])?
    } else {
        // only at n = 2 (nfix values 0 and 2): alpha^2 is known, a square
        // root may or may not exist in the field
        let ratio = field.div(&by_nfix[&n], &by_nfix[&0])?;
        match field.sqrt(&ratio) {
            Some(r) => r,
            None => return Ok(None),
        }
    };
    // try the candidate and, at n = 2, its negative
    for cand in [alpha.clone(), field.neg(&alpha)] {
        if field.is_zero(&cand) {
            continue;
        }
        let beta = field.div(&by_nfix[&n], &field.pow(&cand, n as i64)?)?;
        let ok = by_nfix.iter().all(|(&nf, h)| {
            field.mul(&field.pow(&cand, nf as i64).expect("nonzero"), &beta) == *h
        });
        if ok {
            return Ok(Some((cand, beta)));
        }
    }
    Ok(None)
}

/// The two-value class function fit: f(s) = alpha^nfix(s) * (u on even, v on
/// odd permutations); needs n >= 4 so adjacent-nfix even classes exist.
fn fit_two_value(f: &GroupMap) -> Result<Option<(FieldElement, FieldElement, FieldElement)>> {
    let field = f.field();
    let n = f.n();
    if n < 4 {
        return Err(Error::NeedsDegreeAtLeast(4));
    }
    let cf = f.central_class_values().ok_or(Error::NotCentral)?;
    let mut even: BTreeMap<usize, FieldElement> = BTreeMap::new();
    let mut odd: BTreeMap<usize, FieldElement> = BTreeMap::new();
    for (key, v) in &cf {
        let nfix = key.iter().filter(|&&l| l == 1).count();
        let parity = key.iter().map(|l| l - 1).sum::<usize>() % 2;
        let side = if parity == 0 { &mut even } else { &mut odd };
        if let Some(prev) = side.get(&nfix) {
            if prev != v {
                return Ok(None);
            }
        } else {
            side.insert(nfix, v.clone());
        }
    }
    // 3-cycles (nfix n-3) and double transpositions (nfix n-4), both even
    let alpha = field.div(&even[&(n - 3)], &even[&(n - 4)])?;
    let u = field.div(&even[&n], &field.pow(&alpha, n as i64)?)?;
    let v = {
        let (nf, val) = odd.iter().next().expect("odd classes exist");
        field.div(val, &field.pow(&alpha, *nf as i64)?)?
    };
    let check = |side: &BTreeMap<usize, FieldElement>, base: &FieldElement| {
        side.iter().all(|(&nf, val)| {
            &field.mul(&field.pow(&alpha, nf as i64).expect("nonzero"), base) == val
        })
    };
    if check(&even, &u) && check(&odd, &v) {
        Ok(Some((alpha, u, v)))
    } else {
        Ok(None)
    }
}

/// Classify G_f for a central map via the published criteria; over GF(p)
/// every verdict is cross-checked against the generic solver on a generator
/// of the claimed subgroup and on a representative outside it.
pub fn compute_gf(f: &GroupMap) -> Result<SubgroupDescriptor> {
    if !f.is_central() {
        return Err(Error::NotCentral);
    }
    let n = f.n();
    if n < 2 {
        return Err(Error::NeedsDegreeAtLeast(2));
    }
    let field = f.field();
    let tag = if n == 2 {
        // the two defining equations decouple and are always solvable
        SubgroupTag::Full
    } else {
        let one = GroupMap::one(n, field)?;
        let sgn = GroupMap::sgn(n, field)?;
        let full = fit_central_equiv(f, &one)?.is_some() || fit_central_equiv(f, &sgn)?.is_some();
        if full {
            SubgroupTag::Full
        } else if n == 3 {
            // the 3-cycle is always coherent on S_3
            SubgroupTag::Alternating
        } else if fit_two_value(f)?.is_some() {
            SubgroupTag::Alternating
        } else if n == 4 && k4_adapted(f)?.is_some() {
            SubgroupTag::KleinK4
        } else {
            SubgroupTag::Trivial
        }
    };
    let out = SubgroupDescriptor { tag, n };
    if field.is_finite() {
        cross_check_gf(f, &out)?;
    }
    Ok(out)
}

/// Solver-based confirmation: a transposition decides full, a 3-cycle
/// decides alternating-or-more, a double transposition decides the Klein
/// inclusion (n = 4).
fn cross_check_gf(f: &GroupMap, d: &SubgroupDescriptor) -> Result<()> {
    let n = f.n();
    let solver = ProductSystemSolver::new(n, f.field())?;
    let coherent = |t: &Permutation| -> Result<bool> {
        Ok(matches!(
            is_coherent_with_solver(f, t, &solver)?,
            CoherenceStatus::Coherent(_)
        ))
    };
    let transposition = Permutation::transposition(n, 0, 1);
    let has_transposition = coherent(&transposition)?;
    assert_eq!(
        has_transposition,
        d.contains(&transposition),
        "transposition coherence must match the classification"
    );
    if n >= 3 {
        let three_cycle = Permutation::cycle(n, &[0, 1, 2]);
        assert_eq!(
            coherent(&three_cycle)?,
            d.contains(&three_cycle),
            "3-cycle coherence must match the classification"
        );
    }
    if n == 4 {
        let dt = Permutation::cycle(4, &[0, 1]).compose(&Permutation::cycle(4, &[2, 3]))?;
        assert_eq!(
            coherent(&dt)?,
            d.contains(&dt),
            "double-transposition coherence must match the classification"
        );
    }
    Ok(())
}

/// Construct a witness over any field for tau inside the classified G_f of a
/// central map, by transporting the base-map witness through central
/// equivalence.
fn central_witness(
    f: &GroupMap,
    tau: &Permutation,
    gf: &SubgroupDescriptor,
) -> Result<CoherenceWitness> {
    let field = f.field();
    let n = f.n();
    if tau.is_identity() {
        let w = CoherenceWitness {
            tau: tau.clone(),
            a: SquareMatrix::all_ones(n, field),
        };
        return Ok(w);
    }
    match gf.tag {
        SubgroupTag::Trivial => Err(Error::InvalidWitness),
        SubgroupTag::Full => {
            if n == 2 {
                // direct two-equation solve: a11 a22 = f(t)/f(id),
                // a21 a12 = f(id)/f(t)
                let t = Permutation::transposition(2, 0, 1);
                let r = field.div(f.value(&t), f.value(&Permutation::identity(2)))?;
                let mut a = SquareMatrix::all_ones(2, field);
                a.set(0, 0, r.clone());
                a.set(1, 0, field.inv(&r)?);
                return Ok(CoherenceWitness {
                    tau: tau.clone(),
                    a,
                });
            }
            let one = GroupMap::one(n, field)?;
            let sgn = GroupMap::sgn(n, field)?;
            if let Some((alpha, beta)) = fit_central_equiv(f, &one)? {
                // base witness for the constant map: E for every tau
                let base = CoherenceWitness {
                    tau: tau.clone(),
                    a: SquareMatrix::all_ones(n, field),
                };
                return transport_central_equiv(&one, (&alpha, &beta), &base);
            }
            let (alpha, beta) = fit_central_equiv(f, &sgn)?.ok_or(Error::InvalidWitness)?;
            // base witness for sgn: first column sgn(tau), rest 1
            let mut a = SquareMatrix::all_ones(n, field);
            for i in 0..n {
                a.set(i, 0, field.from_i64(tau.sgn()));
            }
            let base = CoherenceWitness {
                tau: tau.clone(),
                a,
            };
            transport_central_equiv(&sgn, (&alpha, &beta), &base)
        }
        SubgroupTag::Alternating => {
            if n == 3 {
                // powers of the adapted 3-cycle matrix
                let w1 = three_cycle_adapted(f)?;
                if &w1.tau == tau {
                    return Ok(w1);
                }
                return compose_adapted(f, &w1, &w1);
            }
            let (alpha, u, v) = fit_two_value(f)?.ok_or(Error::InvalidWitness)?;
            let base_map = GroupMap::from_fn(n, field, |s| {
                if s.is_even() {
                    u.clone()
                } else {
                    v.clone()
                }
            })?;
            let base = CoherenceWitness {
                tau: tau.clone(),
                a: SquareMatrix::all_ones(n, field),
            };
            transport_central_equiv(&base_map, (&alpha, &field.one()), &base)
        }
        SubgroupTag::KleinK4 => {
            let w = k4_adapted(f)?.ok_or(Error::InvalidWitness)?;
            if &w.tau == tau {
                return Ok(w);
            }
            // the other double transpositions are conjugates of (1 2)(3 4)
            for u in Permutation::all(4) {
                let cand = u
                    .compose(&w.tau)?
                    .compose(&u.inverse())?;
                if &cand == tau {
                    return conjugate_adapted(f, &w, &u);
                }
            }
            Err(Error::InvalidWitness)
        }
    }
}
