//! Exact field arithmetic: prime fields GF(p) and arbitrary-precision rationals.
//!
//! A [`Field`] is a cheap copyable descriptor; elements are carried by
//! [`FieldElement`] and combined through the field's methods.  Prime-field
//! representatives live in `[0, p)` with `p < 2^31`, so products fit in `u64`
//! before reduction.  Rationals are kept reduced with a positive denominator,
//! which makes equality plain representation equality.

use crate::error::Error;
use crate::rng::Xorshift64Star;
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Field descriptor: GF(p) for a prime p, or the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Gfp { p: u64 },
    Rational,
}

/// A field element in canonical form.
///
/// Invariants: `Gfp` values are reduced into `[0, p)` of their field;
/// `Rational` values are reduced fractions with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Gfp(u64),
    Rational(BigRational),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// GF(p); checks primality by trial division and that p < 2^31.
    pub fn gfp(p: u64) -> Result<Field> {
        if p < 2 || p >= (1 << 31) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Gfp { p })
    }

    pub fn rational() -> Field {
        Field::Rational
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Gfp { p } => *p,
            Field::Rational => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Gfp { .. })
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Gfp { p } => Some(*p),
            Field::Rational => None,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            Field::Gfp { .. } => FieldElement::Gfp(0),
            Field::Rational => FieldElement::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> FieldElement {
        match self {
            Field::Gfp { .. } => FieldElement::Gfp(1),
            Field::Rational => FieldElement::Rational(BigRational::one()),
        }
    }

    pub fn from_i64(&self, x: i64) -> FieldElement {
        match self {
            Field::Gfp { p } => {
                let m = x.rem_euclid(*p as i64) as u64;
                FieldElement::Gfp(m)
            }
            Field::Rational => FieldElement::Rational(BigRational::from(BigInt::from(x))),
        }
    }

    fn gfp_val(&self, a: &FieldElement) -> u64 {
        match a {
            FieldElement::Gfp(v) => *v,
            FieldElement::Rational(_) => panic!("rational element used in GF(p) arithmetic"),
        }
    }

    fn rat_val<'a>(&self, a: &'a FieldElement) -> &'a BigRational {
        match a {
            FieldElement::Rational(v) => v,
            FieldElement::Gfp(_) => panic!("GF(p) element used in rational arithmetic"),
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match self {
            Field::Gfp { p } => {
                let s = self.gfp_val(a) + self.gfp_val(b);
                FieldElement::Gfp(if s >= *p { s - p } else { s })
            }
            Field::Rational => FieldElement::Rational(self.rat_val(a) + self.rat_val(b)),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match self {
            Field::Gfp { p } => {
                let (av, bv) = (self.gfp_val(a), self.gfp_val(b));
                FieldElement::Gfp(if av >= bv { av - bv } else { av + p - bv })
            }
            Field::Rational => FieldElement::Rational(self.rat_val(a) - self.rat_val(b)),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match self {
            Field::Gfp { p } => {
                let v = self.gfp_val(a);
                FieldElement::Gfp(if v == 0 { 0 } else { p - v })
            }
            Field::Rational => FieldElement::Rational(-self.rat_val(a)),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match self {
            Field::Gfp { p } => FieldElement::Gfp(self.gfp_val(a) * self.gfp_val(b) % p),
            Field::Rational => FieldElement::Rational(self.rat_val(a) * self.rat_val(b)),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Gfp { p } => Ok(FieldElement::Gfp(mod_pow(self.gfp_val(a), p - 2, *p))),
            Field::Rational => Ok(FieldElement::Rational(self.rat_val(a).recip())),
        }
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// a^k for integer k (negative k inverts first).
    pub fn pow(&self, a: &FieldElement, k: i64) -> Result<FieldElement> {
        let (base, e) = if k < 0 {
            (self.inv(a)?, k.unsigned_abs())
        } else {
            (a.clone(), k as u64)
        };
        match self {
            Field::Gfp { p } => Ok(FieldElement::Gfp(mod_pow(self.gfp_val(&base), e, *p))),
            Field::Rational => {
                let mut acc = BigRational::one();
                let b = self.rat_val(&base);
                for _ in 0..e {
                    acc *= b;
                }
                Ok(FieldElement::Rational(acc))
            }
        }
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Gfp(v) => *v == 0,
            FieldElement::Rational(v) => v.is_zero(),
        }
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Gfp(v) => *v == 1,
            FieldElement::Rational(v) => v.is_one(),
        }
    }

    /// A square root of `a`, if one exists in the field.
    ///
    /// GF(p) uses exhaustive search below 2^20 and Tonelli-Shanks above;
    /// rationals take exact integer roots of numerator and denominator.
    pub fn sqrt(&self, a: &FieldElement) -> Option<FieldElement> {
        match self {
            Field::Gfp { p } => {
                let v = self.gfp_val(a);
                if v == 0 {
                    return Some(FieldElement::Gfp(0));
                }
                if *p == 2 {
                    return Some(FieldElement::Gfp(v));
                }
                if mod_pow(v, (p - 1) / 2, *p) != 1 {
                    return None;
                }
                let r = if *p < (1 << 20) {
                    (0..*p).find(|x| x * x % p == v)?
                } else {
                    tonelli_shanks(v, *p)?
                };
                Some(FieldElement::Gfp(r.min(p - r)))
            }
            Field::Rational => {
                let q = self.rat_val(a);
                if q.is_negative() {
                    return None;
                }
                let ns = q.numer().sqrt();
                let ds = q.denom().sqrt();
                if &ns.clone() * &ns == *q.numer() && &ds.clone() * &ds == *q.denom() {
                    Some(FieldElement::Rational(BigRational::new(ns, ds)))
                } else {
                    None
                }
            }
        }
    }

    /// Uniform random element (all of the field for GF(p); for the rationals,
    /// a uniform integer in [0, 8n] chosen by the caller's bound).
    pub fn sample(&self, rng: &mut Xorshift64Star, rational_bound: u64) -> FieldElement {
        match self {
            Field::Gfp { p } => FieldElement::Gfp(rng.below(*p)),
            Field::Rational => self.from_i64(rng.below(rational_bound + 1) as i64),
        }
    }

    /// Uniform random nonzero element.
    pub fn sample_nonzero(&self, rng: &mut Xorshift64Star, rational_bound: u64) -> FieldElement {
        match self {
            Field::Gfp { p } => FieldElement::Gfp(1 + rng.below(*p - 1)),
            Field::Rational => self.from_i64(1 + rng.below(rational_bound) as i64),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Field::Gfp { p } => format!("GF({p})"),
            Field::Rational => "Q".to_string(),
        }
    }
}

/// x^e mod p with p < 2^31.
pub fn mod_pow(mut x: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    x %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * x % p;
        }
        x = x * x % p;
        e >>= 1;
    }
    acc
}

fn tonelli_shanks(n: u64, p: u64) -> Option<u64> {
    // p odd prime, n a quadratic residue.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    if s == 1 {
        return Some(mod_pow(n, (p + 1) / 4, p));
    }
    let z = (2..p).find(|&z| mod_pow(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(n, q, p);
    let mut r = mod_pow(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % p;
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}
