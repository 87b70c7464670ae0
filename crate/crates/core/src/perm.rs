//! Permutations of {1,...,n} in one-line notation, with lexicographic
//! rank/unrank, sign, fixed-point count and cycle-type keys.
//!
//! Indices are 0-based internally; the JSON boundary (`one_line`) speaks the
//! 1-based notation `[s(1),...,s(n)]`.  Composition follows
//! `(s.compose(t))(x) = s(t(x))`, so a product written `s t` applies `t`
//! first.

use crate::error::Error;
use crate::Result;

/// Hard cap on the degree: group maps store n! values densely.
pub const MAX_DEGREE: usize = 8;

const FACTORIALS: [usize; MAX_DEGREE + 1] = [1, 1, 2, 6, 24, 120, 720, 5040, 40320];

pub fn factorial(n: usize) -> usize {
    FACTORIALS[n]
}

pub fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(n, MAX_DEGREE));
    }
    Ok(())
}

/// A permutation of {0,...,n-1}; `images[i] = s(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 0-based images; validates bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidOneLine(format!("{images:?}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based one-line notation `[s(1),...,s(n)]`.
    pub fn from_one_line(line: &[usize]) -> Result<Self> {
        if line.iter().any(|&v| v == 0) {
            return Err(Error::InvalidOneLine(format!("{line:?}")));
        }
        Self::from_images(line.iter().map(|&v| v - 1).collect())
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// s(i), 0-based.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// The transposition (i j), 0-based.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    /// The cycle (c[0] c[1] ... c[p-1]), 0-based entries.
    pub fn cycle(n: usize, c: &[usize]) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        for k in 0..c.len() {
            images[c[k]] = c[(k + 1) % c.len()];
        }
        Permutation { images }
    }

    /// (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: (0..self.degree())
                .map(|x| self.images[other.images[x]])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Signature: +1 or -1.
    pub fn sgn(&self) -> i64 {
        let mut seen = vec![false; self.degree()];
        let mut sign = 1i64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    pub fn is_even(&self) -> bool {
        self.sgn() == 1
    }

    /// Number of fixed points.
    pub fn nfix(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &v)| *i == v).count()
    }

    /// Sorted cycle-length multiset; conjugacy classes share this key.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        let mut lens = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    /// Lexicographic rank of the one-line notation, in [0, n!).
    pub fn lex_rank(&self) -> usize {
        let n = self.degree();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&v| v < self.images[i])
                .count();
            rank += smaller * factorial(n - 1 - i);
        }
        rank
    }

    /// Inverse of `lex_rank`.
    pub fn lex_unrank(n: usize, mut rank: usize) -> Result<Permutation> {
        check_degree(n)?;
        if rank >= factorial(n) {
            return Err(Error::IndexOutOfRange(rank, factorial(n) - 1));
        }
        let mut pool: Vec<usize> = (0..n).collect();
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i);
            let idx = rank / f;
            rank %= f;
            images.push(pool.remove(idx));
        }
        Ok(Permutation { images })
    }

    /// All permutations of degree n in lexicographic order; index = rank.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::with_capacity(factorial(n));
        let mut images: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation {
                images: images.clone(),
            });
            if !next_permutation(&mut images) {
                break;
            }
        }
        out
    }
}

/// Advance to the next lexicographic arrangement; false after the last one.
fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_convention() {
        // compose(id, t12) = t12 ; t12^2 = id
        let id = Permutation::identity(3);
        let t12 = Permutation::transposition(3, 0, 1);
        assert_eq!(id.compose(&t12).unwrap(), t12);
        assert_eq!(t12.compose(&t12).unwrap(), id);
        // (1 2 3) . t12 applies t12 first: hand evaluation gives [1,3,2].
        let c = Permutation::cycle(3, &[0, 1, 2]);
        let prod = c.compose(&t12).unwrap();
        assert_eq!(prod.one_line(), vec![1, 3, 2]);
    }

    #[test]
    fn sgn_and_nfix() {
        let n = 4;
        let id = Permutation::identity(n);
        assert_eq!(id.sgn(), 1);
        assert_eq!(id.nfix(), n);
        let t = Permutation::transposition(n, 1, 3);
        assert_eq!(t.sgn(), -1);
        assert_eq!(t.nfix(), n - 2);
        // sgn is a homomorphism; nfix is a class function.
        for s in Permutation::all(4) {
            for u in [
                Permutation::cycle(4, &[0, 2, 3]),
                Permutation::transposition(4, 0, 1),
            ] {
                let st = s.compose(&u).unwrap();
                assert_eq!(st.sgn(), s.sgn() * u.sgn());
                let conj = u.compose(&s).unwrap().compose(&u.inverse()).unwrap();
                assert_eq!(conj.nfix(), s.nfix());
                assert_eq!(conj.cycle_type(), s.cycle_type());
            }
        }
    }

    #[test]
    fn rank_unrank_roundtrip_exhaustive() {
        for n in 1..=5 {
            let all = Permutation::all(n);
            assert_eq!(all.len(), factorial(n));
            for (r, p) in all.iter().enumerate() {
                assert_eq!(p.lex_rank(), r);
                assert_eq!(&Permutation::lex_unrank(n, r).unwrap(), p);
            }
            // lex order is strictly increasing in one-line notation
            for w in all.windows(2) {
                assert!(w[0].images() < w[1].images());
            }
        }
    }

    #[test]
    fn inverse_and_identity() {
        for p in Permutation::all(4) {
            let inv = p.inverse();
            assert!(p.compose(&inv).unwrap().is_identity());
            assert!(inv.compose(&p).unwrap().is_identity());
        }
    }

    #[test]
    fn one_line_roundtrip() {
        let p = Permutation::from_one_line(&[2, 3, 1]).unwrap();
        assert_eq!(p.one_line(), vec![2, 3, 1]);
        assert!(Permutation::from_one_line(&[1, 1, 2]).is_err());
        assert!(Permutation::from_one_line(&[0, 1]).is_err());
        assert!(Permutation::from_one_line(&[1, 2, 4]).is_err());
    }
}
