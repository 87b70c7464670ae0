//! Multiplicative product systems over GF(p)*.
//!
//! Systems of the shape `prod_j a_{s(j),j} = h(s)` (one equation per
//! permutation, unknowns the n^2 entries of A) are decided exactly: discrete
//! logarithms turn them into linear congruences modulo p-1, and an integer
//! diagonalization U A V = D of the 0/1 incidence matrix reduces each
//! right-hand side to independent diagonal congruences.  The incidence matrix
//! only depends on n, so the expensive diagonalization is computed once and
//! reused for every right-hand side (the PH sweep feeds n!^2 of them).

use crate::error::Error;
use crate::field::{mod_pow, Field, FieldElement};
use crate::matrix::SquareMatrix;
use crate::perm::{factorial, Permutation};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Integer diagonalization D = U A V with U, V unimodular.
pub struct Diagonalization {
    rows: usize,
    cols: usize,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
}

/// Diagonalize an integer matrix by alternating row and column gcd steps.
pub fn diagonalize(mut a: Vec<Vec<BigInt>>) -> Diagonalization {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut u: Vec<Vec<BigInt>> = identity(rows);
    let mut v: Vec<Vec<BigInt>> = identity(cols);
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // locate the minimal-magnitude nonzero entry in the submatrix
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && pivot
                            .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Diagonalization { rows, cols, u, v, d: diag_of(&a, steps) };
            };
            if pi != t {
                a.swap(t, pi);
                u.swap(t, pi);
            }
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&a[i][t], &a[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let s = &a[t][j] * &q;
                        a[i][j] -= s;
                    }
                    for j in 0..rows {
                        let s = &u[t][j] * &q;
                        u[i][j] -= s;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&a[t][j], &a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let s = &row[t] * &q;
                        row[j] -= s;
                    }
                    for vr in v.iter_mut() {
                        let s = &vr[t] * &q;
                        vr[j] -= s;
                    }
                }
            }
            if a[t + 1..rows].iter().all(|r| r[t].is_zero())
                && a[t][t + 1..cols].iter().all(|x| x.is_zero())
            {
                break;
            }
        }
    }
    Diagonalization { rows, cols, u, v, d: diag_of(&a, steps) }
}

fn diag_of(a: &[Vec<BigInt>], steps: usize) -> Vec<BigInt> {
    (0..steps).map(|t| a[t][t].clone()).collect()
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Rounded division, so remainders shrink in magnitude.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

impl Diagonalization {
    /// One solution x (mod m) of A x = b (mod m), if any.
    pub fn solve_mod(&self, b: &[BigInt], m: &BigInt) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        // c = U b
        let c: Vec<BigInt> = self
            .u
            .iter()
            .map(|row| row.iter().zip(b).map(|(uu, bb)| uu * bb).sum::<BigInt>().mod_floor(m))
            .collect();
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows {
            let d = if i < self.d.len() {
                self.d[i].clone()
            } else {
                BigInt::zero()
            };
            if d.is_zero() {
                if !c[i].mod_floor(m).is_zero() {
                    return None;
                }
                continue;
            }
            // d y_i = c_i (mod m)
            let g = d.gcd(m);
            if !(&c[i] % &g).is_zero() {
                return None;
            }
            let m_red = m / &g;
            let d_red = (&d / &g).mod_floor(&m_red);
            let c_red = (&c[i] / &g).mod_floor(&m_red);
            if m_red.is_one() {
                y[i] = BigInt::zero();
            } else {
                let inv = mod_inverse(&d_red, &m_red)?;
                y[i] = (c_red * inv).mod_floor(&m_red);
            }
        }
        // x = V y
        let x: Vec<BigInt> = self
            .v
            .iter()
            .map(|row| row.iter().zip(&y).map(|(vv, yy)| vv * yy).sum::<BigInt>().mod_floor(m))
            .collect();
        Some(x)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Discrete logarithms in GF(p)* relative to a fixed generator: a full table
/// below 2^20, baby-step giant-step above.
pub struct Dlog {
    p: u64,
    pub generator: u64,
    table: Option<Vec<u32>>,
    baby: Option<(u64, HashMap<u64, u64>)>, // (step width, g^j -> j)
}

impl Dlog {
    pub fn new(p: u64) -> Dlog {
        let generator = primitive_root(p);
        if p < (1 << 20) {
            let mut table = vec![0u32; p as usize];
            let mut acc = 1u64;
            for e in 0..p - 1 {
                table[acc as usize] = e as u32;
                acc = acc * generator % p;
            }
            Dlog {
                p,
                generator,
                table: Some(table),
                baby: None,
            }
        } else {
            let w = (p as f64).sqrt().ceil() as u64 + 1;
            let mut baby = HashMap::with_capacity(w as usize);
            let mut acc = 1u64;
            for j in 0..w {
                baby.entry(acc).or_insert(j);
                acc = acc * generator % p;
            }
            Dlog {
                p,
                generator,
                table: None,
                baby: Some((w, baby)),
            }
        }
    }

    /// log_g(x) for x in GF(p)*.
    pub fn log(&self, x: u64) -> u64 {
        debug_assert!(x != 0 && x < self.p);
        if let Some(t) = &self.table {
            return t[x as usize] as u64;
        }
        let (w, baby) = self.baby.as_ref().expect("one of the modes is set");
        // x * (g^-w)^i hits the baby table for some giant step i
        let giant = mod_pow(mod_pow(self.generator, self.p - 2, self.p), *w, self.p);
        let mut cur = x;
        for i in 0..=*w {
            if let Some(j) = baby.get(&cur) {
                return (i * w + j) % (self.p - 1);
            }
            cur = cur * giant % self.p;
        }
        unreachable!("x is a unit, so its logarithm exists");
    }
}

/// Smallest primitive root mod p.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Decides systems `prod_j a_{s(j),j} = h(s)` over GF(p)*, returning a matrix
/// with nonzero entries or None.  The diagonalization of the incidence matrix
/// is cached, so repeated right-hand sides are cheap.
pub struct ProductSystemSolver {
    n: usize,
    p: u64,
    field: Field,
    dlog: Dlog,
    diag: Diagonalization,
}

impl ProductSystemSolver {
    pub fn new(n: usize, field: Field) -> Result<ProductSystemSolver> {
        let Some(p) = field.order() else {
            return Err(Error::RationalsNotDecidable);
        };
        let perms = Permutation::all(n);
        let a: Vec<Vec<BigInt>> = perms
            .iter()
            .map(|s| {
                let mut row = vec![BigInt::zero(); n * n];
                for j in 0..n {
                    row[s.apply(j) * n + j] = BigInt::one();
                }
                row
            })
            .collect();
        Ok(ProductSystemSolver {
            n,
            p,
            field,
            dlog: Dlog::new(p),
            diag: diagonalize(a),
        })
    }

    /// `rhs` gives the target value per permutation rank; every value must be
    /// nonzero.  A returned matrix is verified against every permutation.
    pub fn solve(&self, rhs: &[FieldElement]) -> Result<Option<SquareMatrix>> {
        assert_eq!(rhs.len(), factorial(self.n));
        let m = BigInt::from(self.p - 1);
        let mut b = Vec::with_capacity(rhs.len());
        for v in rhs {
            let FieldElement::Gfp(x) = v else {
                return Err(Error::RationalsNotDecidable);
            };
            if *x == 0 {
                return Err(Error::DivisionByZero);
            }
            b.push(BigInt::from(self.dlog.log(*x)));
        }
        let Some(x) = self.diag.solve_mod(&b, &m) else {
            return Ok(None);
        };
        let mut a = SquareMatrix::zero(self.n, self.field);
        for i in 0..self.n {
            for j in 0..self.n {
                let e = x[i * self.n + j].mod_floor(&m);
                let e64: u64 = e.try_into().expect("reduced below p-1");
                a.set(i, j, FieldElement::Gfp(mod_pow(self.dlog.generator, e64, self.p)));
            }
        }
        // exhaustive replay of the defining products
        for (r, s) in Permutation::all(self.n).iter().enumerate() {
            let mut prod = self.field.one();
            for j in 0..self.n {
                prod = self.field.mul(&prod, a.entry(s.apply(j), j));
            }
            if prod != rhs[r] {
                return Ok(None);
            }
        }
        Ok(Some(a))
    }
}
