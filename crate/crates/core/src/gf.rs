//! Prime fields GF(p).
//!
//! A [`GF`] value is the field context: it holds the modulus and does the
//! arithmetic on raw residues (`u32` in `[0, p)`). Matrices and tensors store
//! raw residues next to their `GF` so the hot loops never carry a modulus per
//! entry. [`FieldElem`] bundles a residue with its field for callers that want
//! operator syntax.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the modulus. Products of two residues then fit in
/// a `u32` without any overflow reasoning elsewhere.
pub const DEFAULT_MODULUS_LIMIT: u32 = 1 << 15;

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GF {
    p: u32,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl GF {
    /// GF(p) with the default modulus limit.
    pub fn new(p: u32) -> Result<GF> {
        GF::with_limit(p, DEFAULT_MODULUS_LIMIT)
    }

    pub fn with_limit(p: u32, limit: u32) -> Result<GF> {
        let limit = limit.min(DEFAULT_MODULUS_LIMIT);
        if p > limit {
            return Err(Error::ModulusTooLarge { p, limit });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(GF { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    /// Residue of an arbitrary signed integer.
    #[inline]
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero(self.p));
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.from_i64(t0))
    }

    /// Inverse of a value the caller knows to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(self, a: u32) -> u32 {
        self.inv(a).expect("inverse of a nonzero residue")
    }

    pub fn div(self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// All nonzero residues in increasing order.
    pub fn units(self) -> impl Iterator<Item = u32> {
        1..self.p
    }

    /// Some `c` with `c^3 = a`, if one exists (the smallest such residue).
    pub fn cube_root(self, a: u32) -> Option<u32> {
        (0..self.p).find(|&c| self.pow(c, 3) == a)
    }

    pub fn elem(self, v: u32) -> FieldElem {
        FieldElem {
            value: v % self.p,
            field: self,
        }
    }
}

/// A residue together with its field, for operator-style arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u32,
    field: GF,
}

impl FieldElem {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> GF {
        self.field
    }

    pub fn inv(self) -> Result<FieldElem> {
        Ok(self.field.elem(self.field.inv(self.value)?))
    }

    pub fn div(self, rhs: FieldElem) -> Result<FieldElem> {
        self.check(rhs)?;
        Ok(self.field.elem(self.field.div(self.value, rhs.value)?))
    }

    pub fn pow(self, e: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.value, e))
    }

    fn check(self, rhs: FieldElem) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(self.field.p, rhs.field.p));
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Mixing fields in operator syntax is a programming error, so these panic.
macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                assert_eq!(self.field, rhs.field, "field mismatch");
                self.field.elem(self.field.$m(self.value, rhs.value))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.field.elem(self.field.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRIMES: [u32; 5] = [2, 3, 5, 7, 13];

    #[test]
    fn examples() {
        let f5 = GF::new(5).unwrap();
        assert_eq!(f5.inv(3).unwrap(), 2);
        let f2 = GF::new(2).unwrap();
        assert_eq!(f2.neg(1), 1);
        let f13 = GF::new(13).unwrap();
        assert_eq!(f13.pow(2, 12), 1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(GF::new(1), Err(Error::NotPrime(1)));
        assert_eq!(GF::new(9), Err(Error::NotPrime(9)));
        assert!(matches!(GF::new(40009), Err(Error::ModulusTooLarge { .. })));
        assert!(matches!(
            GF::with_limit(13, 7),
            Err(Error::ModulusTooLarge { p: 13, limit: 7 })
        ));
        assert_eq!(GF::new(32749).unwrap().p(), 32749);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        for p in PRIMES {
            let f = GF::new(p).unwrap();
            assert_eq!(f.inv(0), Err(Error::DivisionByZero(p)));
            assert_eq!(f.div(1, 0), Err(Error::DivisionByZero(p)));
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for p in [2u32, 3, 5, 7] {
            let f = GF::new(p).unwrap();
            for a in 0..p {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.inv(f.inv(a).unwrap()).unwrap(), a);
                }
                for b in 0..p {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in 0..p {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_involution_p13() {
        let f = GF::new(13).unwrap();
        for a in f.units() {
            assert_eq!(f.inv(f.inv(a).unwrap()).unwrap(), a);
            assert_eq!(f.pow(a, 12), 1);
        }
    }

    #[test]
    fn elem_operators() {
        let f = GF::new(7).unwrap();
        let a = f.elem(3);
        let b = f.elem(5);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((a * b).value(), 1);
        assert_eq!((-a).value(), 4);
        assert_eq!(a.div(b).unwrap().value(), f.mul(3, f.inv(5).unwrap()));
        assert!(f.elem(0).inv().is_err());
        let g = GF::new(5).unwrap();
        assert!(a.div(g.elem(1)).is_err());
    }

    #[test]
    fn cube_roots() {
        // Cubing is a bijection when 3 does not divide p - 1.
        for p in [2u32, 3, 5, 11] {
            let f = GF::new(p).unwrap();
            for a in 0..p {
                let c = f.cube_root(a).unwrap();
                assert_eq!(f.pow(c, 3), a);
            }
        }
        let f7 = GF::new(7).unwrap();
        assert_eq!(f7.cube_root(2), None);
    }
}
