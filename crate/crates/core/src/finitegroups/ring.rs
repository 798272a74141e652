//! Finite rings `Z/p^n` and finite fields `F_{p^f}` with elements encoded as
//! integers in `[0, size)`.
//!
//! Field elements are polynomials of degree `< f` over `F_p` packed as
//! `sum c_i p^i`. Fields up to 2^20 elements carry log/antilog tables built
//! from the canonical generator (the smallest code generating the unit group).

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{factorize, inv_mod, is_prime, mul_mod, pow_mod};
use crate::fpoly::Fp;

use super::GroupError;

const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `Z/p^n`
    Residue { n: u32 },
    /// `F_p[x]/(modulus)` with `deg modulus = f >= 2`
    Field { f: u32, modulus: Vec<u64> },
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u64>,
    log: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct FiniteRing {
    p: u64,
    kind: RingKind,
    size: u64,
    tables: Option<Arc<Tables>>,
    generator: Option<u64>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.kind == other.kind
    }
}
impl Eq for FiniteRing {}

impl core::hash::Hash for FiniteRing {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.kind.hash(state);
    }
}

impl FiniteRing {
    pub fn residue(p: u64, n: u32) -> Result<Self, GroupError> {
        if !is_prime(p) || n == 0 {
            return Err(GroupError::InvalidRing);
        }
        let size = p.checked_pow(n).ok_or(GroupError::InvalidRing)?;
        let mut r = FiniteRing { p, kind: RingKind::Residue { n }, size, tables: None, generator: None };
        if n == 1 {
            r.generator = Some(smallest_generator(&r));
        }
        Ok(r)
    }

    pub fn prime_field(p: u64) -> Result<Self, GroupError> {
        Self::residue(p, 1)
    }

    /// `F_{p^f}` presented by the lexicographically smallest monic irreducible.
    pub fn field(p: u64, f: u32) -> Result<Self, GroupError> {
        if f == 1 {
            return Self::residue(p, 1);
        }
        if !is_prime(p) || f == 0 {
            return Err(GroupError::InvalidRing);
        }
        let modulus = Fp::new(p).first_irreducible(f as usize);
        Self::field_with_modulus(p, &modulus)
    }

    /// `F_p[x]/(g)` for a monic irreducible `g` (constant term first).
    pub fn field_with_modulus(p: u64, modulus: &[u64]) -> Result<Self, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::InvalidRing);
        }
        let fp = Fp::new(p);
        if modulus.last() != Some(&1) || !fp.is_irreducible(modulus) {
            return Err(GroupError::InvalidRing);
        }
        let f = (modulus.len() - 1) as u32;
        if f == 1 {
            return Self::residue(p, 1);
        }
        let size = p.checked_pow(f).ok_or(GroupError::InvalidRing)?;
        let mut r = FiniteRing {
            p,
            kind: RingKind::Field { f, modulus: modulus.to_vec() },
            size,
            tables: None,
            generator: None,
        };
        let g = smallest_generator(&r);
        r.generator = Some(g);
        if size <= TABLE_LIMIT {
            let mut exp = vec![0u64; size as usize - 1];
            let mut log = vec![0u32; size as usize];
            let mut x = 1u64;
            for (k, e) in exp.iter_mut().enumerate() {
                *e = x;
                log[x as usize] = k as u32;
                x = r.mul_poly(x, g);
            }
            r.tables = Some(Arc::new(Tables { exp, log }));
        }
        Ok(r)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_field(&self) -> bool {
        !matches!(self.kind, RingKind::Residue { n } if n > 1)
    }

    /// Exponent `n` of `Z/p^n` (1 for fields).
    pub fn exponent(&self) -> u32 {
        match self.kind {
            RingKind::Residue { n } => n,
            RingKind::Field { .. } => 1,
        }
    }

    /// Degree over `F_p` of the residue field.
    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            RingKind::Residue { .. } => 1,
            RingKind::Field { f, .. } => f,
        }
    }

    pub fn residue_size(&self) -> u64 {
        self.p.pow(self.residue_degree())
    }

    /// Modulus polynomial (field case), `x` for prime fields.
    pub fn modulus(&self) -> Vec<u64> {
        match &self.kind {
            RingKind::Residue { .. } => vec![0, 1],
            RingKind::Field { modulus, .. } => modulus.clone(),
        }
    }

    /// Canonical generator of the unit group of a field.
    pub fn generator(&self) -> Option<u64> {
        self.generator
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        let m = match self.kind {
            RingKind::Residue { .. } => self.size,
            RingKind::Field { .. } => self.p,
        };
        crate::arith::reduce_i64(a, m)
    }

    pub fn coeffs(&self, a: u64) -> Vec<u64> {
        let f = self.residue_degree();
        let mut c = Vec::with_capacity(f as usize);
        let mut x = a;
        for _ in 0..f {
            c.push(x % self.p);
            x /= self.p;
        }
        c
    }

    pub fn from_coeffs(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0, |acc, &x| acc * self.p + x % self.p)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            RingKind::Residue { .. } => (a + b) % self.size,
            RingKind::Field { f, .. } => {
                let (mut x, mut y, mut out, mut pw) = (a, b, 0, 1);
                for _ in 0..f {
                    out += ((x % self.p + y % self.p) % self.p) * pw;
                    x /= self.p;
                    y /= self.p;
                    pw *= self.p;
                }
                out
            }
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        match self.kind {
            RingKind::Residue { .. } => (self.size - a % self.size) % self.size,
            RingKind::Field { f, .. } => {
                let (mut x, mut out, mut pw) = (a, 0, 1);
                for _ in 0..f {
                    out += ((self.p - x % self.p) % self.p) * pw;
                    x /= self.p;
                    pw *= self.p;
                }
                out
            }
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    fn mul_poly(&self, a: u64, b: u64) -> u64 {
        let fp = Fp::new(self.p);
        let prod = fp.mul(&trimmed(self.coeffs(a)), &trimmed(self.coeffs(b)));
        let r = fp.rem(&prod, &self.modulus());
        self.from_coeffs(&r)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            RingKind::Residue { .. } => mul_mod(a, b, self.size),
            RingKind::Field { .. } => {
                if a == 0 || b == 0 {
                    return 0;
                }
                match &self.tables {
                    Some(t) => {
                        let k = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % (self.size - 1);
                        t.exp[k as usize]
                    }
                    None => self.mul_poly(a, b),
                }
            }
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u64) -> bool {
        match self.kind {
            RingKind::Residue { .. } => !a.is_multiple_of(self.p),
            RingKind::Field { .. } => a != 0,
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        match self.kind {
            RingKind::Residue { .. } => inv_mod(a, self.size),
            RingKind::Field { .. } => match &self.tables {
                Some(t) => {
                    let k = (self.size - 1 - t.log[a as usize] as u64) % (self.size - 1);
                    Some(t.exp[k as usize])
                }
                None => Some(self.pow(a, self.size - 2)),
            },
        }
    }

    /// Order of the unit group.
    pub fn unit_count(&self) -> u64 {
        self.size / self.residue_size() * (self.residue_size() - 1)
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.size).filter(move |&a| self.is_unit(a))
    }

    /// Discrete log to the canonical generator (fields only).
    pub fn log(&self, a: u64) -> Option<u64> {
        if a == 0 || !self.is_field() {
            return None;
        }
        match (&self.kind, &self.tables) {
            (RingKind::Field { .. }, Some(t)) => Some(t.log[a as usize] as u64),
            (RingKind::Residue { .. }, _) => crate::arith::discrete_log(self.generator?, a, self.p, self.p - 1),
            _ => {
                let g = self.generator?;
                let mut x = 1;
                for k in 0..self.size - 1 {
                    if x == a {
                        return Some(k);
                    }
                    x = self.mul(x, g);
                }
                None
            }
        }
    }

    /// `a^(p^i)` (identity on `Z/p^n`).
    pub fn frobenius(&self, a: u64, i: u32) -> u64 {
        let mut x = a;
        if self.is_field() {
            for _ in 0..i {
                x = self.pow(x, self.p);
            }
        }
        x
    }

    /// Reduction map to the residue field (identity on fields).
    pub fn reduce_to_residue(&self, a: u64) -> u64 {
        match self.kind {
            RingKind::Residue { .. } => a % self.p,
            RingKind::Field { .. } => a,
        }
    }

    pub fn residue_field(&self) -> FiniteRing {
        match self.kind {
            RingKind::Residue { n } if n > 1 => Self::residue(self.p, 1).expect("prime"),
            _ => self.clone(),
        }
    }

    /// p-adic valuation of an element of `Z/p^n`, or 0/`None` in a field.
    pub fn valuation(&self, a: u64) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match self.kind {
            RingKind::Residue { .. } => Some(crate::arith::valuation(a, self.p)),
            RingKind::Field { .. } => Some(0),
        }
    }
}

fn trimmed(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn smallest_generator(r: &FiniteRing) -> u64 {
    let q = r.residue_size();
    let order = q - 1;
    let qs: Vec<u64> = factorize(order).into_iter().map(|(x, _)| x).collect();
    match r.kind {
        RingKind::Residue { .. } => {
            (1..q).find(|&g| qs.iter().all(|&l| pow_mod(g, order / l, q) != 1)).expect("cyclic")
        }
        RingKind::Field { .. } => (1..q).find(|&g| qs.iter().all(|&l| r.pow_slow(g, order / l) != 1)).expect("cyclic"),
    }
}

impl FiniteRing {
    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, b);
            }
            b = self.mul_poly(b, b);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f25_arithmetic() {
        let r = FiniteRing::field(5, 2).unwrap();
        assert_eq!(r.size(), 25);
        assert_eq!(r.modulus(), vec![2, 0, 1]);
        let g = r.generator().unwrap();
        assert_eq!(r.pow(g, 24), 1);
        assert_ne!(r.pow(g, 12), 1);
        assert_ne!(r.pow(g, 8), 1);
        for a in 1..25 {
            assert_eq!(r.mul(a, r.inv(a).unwrap()), 1);
            assert_eq!(r.mul(a, 1), a);
        }
        // x^2 = -2 = 3
        assert_eq!(r.mul(5, 5), 3);
        assert_eq!(r.frobenius(5, 2), 5);
    }

    #[test]
    fn residue_ring() {
        let r = FiniteRing::residue(5, 2).unwrap();
        assert_eq!(r.size(), 25);
        assert_eq!(r.unit_count(), 20);
        assert!(r.inv(10).is_none());
        assert_eq!(r.mul(7, r.inv(7).unwrap()), 1);
        assert_eq!(r.valuation(10), Some(1));
        assert_eq!(FiniteRing::prime_field(7).unwrap().generator(), Some(3));
    }
}
