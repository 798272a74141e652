//! Dense univariate polynomials over a prime field `F_p`, with irreducibility
//! testing and complete factorization (square-free, distinct-degree and
//! equal-degree splitting).
//!
//! Polynomials are coefficient vectors, constant term first, with no trailing
//! zeros; the zero polynomial is the empty vector.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::arith::{factorize, inv_mod, mul_mod, pow_mod};

/// Seed used by the equal-degree splitting step so factor order is reproducible.
pub const DEFAULT_SEED: u64 = 0x5EED;

pub type Poly = Vec<u64>;

/// Arithmetic context for `F_p[x]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Fp { p }
    }

    fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn from_i64(&self, coeffs: &[i64]) -> Poly {
        Self::trim(coeffs.iter().map(|&c| crate::arith::reduce_i64(c, self.p)).collect())
    }

    pub fn degree(a: &[u64]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Poly {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + y) % self.p;
        }
        Self::trim(out)
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Poly {
        let n = a.len().max(b.len());
        let mut out = vec![0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + self.p - y) % self.p;
        }
        Self::trim(out)
    }

    pub fn scale(&self, a: &[u64], c: u64) -> Poly {
        Self::trim(a.iter().map(|&x| mul_mod(x, c, self.p)).collect())
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, self.p)) % self.p;
            }
        }
        Self::trim(out)
    }

    /// Division with remainder; panics on division by zero.
    pub fn divrem(&self, a: &[u64], b: &[u64]) -> (Poly, Poly) {
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r: Poly = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), Self::trim(r));
        }
        let lead_inv = inv_mod(*b.last().unwrap(), self.p).expect("leading coefficient invertible");
        let mut q = vec![0u64; r.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + b.len() - 1], lead_inv, self.p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + self.p - mul_mod(c, bj, self.p)) % self.p;
            }
        }
        r.truncate(b.len() - 1);
        (Self::trim(q), Self::trim(r))
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> Poly {
        self.divrem(a, b).1
    }

    pub fn monic(&self, a: &[u64]) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, inv_mod(lc, self.p).expect("nonzero")),
        }
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Poly {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Extended gcd: (g, s, t) with s*a + t*b = g, g monic.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.last() {
            None => (r0, s0, t0),
            Some(&lc) => {
                let inv = inv_mod(lc, self.p).unwrap();
                (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
            }
        }
    }

    pub fn mulmod(&self, a: &[u64], b: &[u64], m: &[u64]) -> Poly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, base: &[u64], mut exp: u64, m: &[u64]) -> Poly {
        let mut acc = self.rem(&[1], m);
        let mut b = self.rem(base, m);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mulmod(&acc, &b, m);
            }
            b = self.mulmod(&b, &b, m);
            exp >>= 1;
        }
        acc
    }

    pub fn derivative(&self, a: &[u64]) -> Poly {
        Self::trim(a.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p)).collect())
    }

    pub fn eval(&self, a: &[u64], x: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    /// `x^(p^k) mod m` by repeated Frobenius.
    fn frobenius_power(&self, k: usize, m: &[u64]) -> Poly {
        let mut x = self.rem(&[0, 1], m);
        for _ in 0..k {
            x = self.powmod(&x, self.p, m);
        }
        x
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, f: &[u64]) -> bool {
        let n = match Self::degree(f) {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let f = self.monic(f);
        let x = vec![0u64, 1];
        let xpn = self.frobenius_power(n, &f);
        if !self.sub(&xpn, &x).is_empty() {
            return false;
        }
        for (q, _) in factorize(n as u64) {
            let k = n / q as usize;
            let h = self.sub(&self.frobenius_power(k, &f), &x);
            if self.gcd(&h, &f).len() != 1 {
                return false;
            }
        }
        true
    }

    /// Square-free decomposition: list of (square-free factor, multiplicity).
    pub fn squarefree_decomposition(&self, f: &[u64]) -> Vec<(Poly, u32)> {
        let f = self.monic(f);
        let mut out = Vec::new();
        self.sqf_rec(&f, 1, &mut out);
        out.sort();
        out
    }

    fn sqf_rec(&self, f: &[u64], mult: u32, out: &mut Vec<(Poly, u32)>) {
        if f.len() <= 1 {
            return;
        }
        let df = self.derivative(f);
        if df.is_empty() {
            // f = g(x^p) = g^(1/p)(x)^p
            let root: Poly = f.iter().step_by(self.p as usize).copied().collect();
            self.sqf_rec(&root, mult * self.p as u32, out);
            return;
        }
        let mut c = self.gcd(f, &df);
        let mut w = self.divrem(f, &c).0;
        let mut i = 1;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let z = self.divrem(&w, &y).0;
            if z.len() > 1 {
                out.push((self.monic(&z), i * mult));
            }
            w = y;
            c = self.divrem(&c, &w).0;
            i += 1;
        }
        if c.len() > 1 {
            let root: Poly = c.iter().step_by(self.p as usize).copied().collect();
            self.sqf_rec(&root, mult * self.p as u32, out);
        }
    }

    /// Distinct-degree factorization of a monic square-free polynomial.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let x = vec![0u64, 1];
        let mut xq = self.rem(&x, &rest);
        let mut d = 0;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                let deg = rest.len() - 1;
                out.push((rest, deg));
                break;
            }
            xq = self.powmod(&xq, self.p, &rest);
            let g = self.gcd(&self.sub(&xq, &x), &rest);
            if g.len() > 1 {
                rest = self.divrem(&rest, &g).0;
                xq = self.rem(&xq, &rest);
                out.push((g, d));
            }
        }
        out
    }

    fn random_poly(&self, deg_bound: usize, rng: &mut ChaCha8Rng) -> Poly {
        Self::trim((0..deg_bound).map(|_| rng.next_u64() % self.p).collect())
    }

    /// Split a monic square-free product of irreducibles of common degree `d`.
    pub fn equal_degree(&self, f: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = f.len() - 1;
        if n == d {
            return vec![self.monic(f)];
        }
        loop {
            let a = self.random_poly(n, rng);
            if a.len() <= 1 {
                continue;
            }
            let b = if self.p == 2 {
                // trace map a + a^2 + ... + a^(2^(d-1))
                let mut t = self.rem(&a, f);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = self.mulmod(&t, &t, f);
                    acc = self.add(&acc, &t);
                }
                acc
            } else {
                // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
                let mut t = self.rem(&a, f);
                let mut norm = t.clone();
                for _ in 1..d {
                    t = self.powmod(&t, self.p, f);
                    norm = self.mulmod(&norm, &t, f);
                }
                let h = self.powmod(&norm, (self.p - 1) / 2, f);
                self.sub(&h, &[1])
            };
            let g = self.gcd(&b, f);
            if g.len() > 1 && g.len() < f.len() {
                let other = self.divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&self.monic(&other), d, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients).
    pub fn factor(&self, f: &[u64]) -> Vec<(Poly, u32)> {
        self.factor_seeded(f, DEFAULT_SEED)
    }

    pub fn factor_seeded(&self, f: &[u64], seed: u64) -> Vec<(Poly, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (sqf, mult) in self.squarefree_decomposition(f) {
            for (block, d) in self.distinct_degree(&sqf) {
                for g in self.equal_degree(&block, d, &mut rng) {
                    out.push((g, mult));
                }
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    /// Smallest monic irreducible of degree `d` in lexicographic order of
    /// coefficients read from the constant term upward.
    pub fn first_irreducible(&self, d: usize) -> Poly {
        if d == 1 {
            return vec![0, 1];
        }
        let total = self.p.pow(d as u32);
        for code in 0..total {
            let mut c = code;
            let mut poly = Vec::with_capacity(d + 1);
            for _ in 0..d {
                poly.push(c % self.p);
                c /= self.p;
            }
            poly.push(1);
            if poly[0] != 0 && self.is_irreducible(&poly) {
                return poly;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Roots in `F_p` by exhaustive evaluation (small p) or splitting.
    pub fn roots(&self, f: &[u64]) -> Vec<u64> {
        let mut roots: Vec<u64> =
            self.factor(f).into_iter().filter(|(g, _)| g.len() == 2).map(|(g, _)| (self.p - g[0]) % self.p).collect();
        roots.sort_unstable();
        roots
    }

    pub fn pow_u64(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_x2_minus_3() {
        let f = Fp::new(11);
        let poly = f.from_i64(&[-3, 0, 1]);
        let fac = f.factor(&poly);
        assert_eq!(fac, vec![(vec![5, 1], 1), (vec![6, 1], 1)]);
        let g = Fp::new(5);
        let fac = g.factor(&g.from_i64(&[-3, 0, 1]));
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].0.len(), 3);
    }

    #[test]
    fn factor_with_multiplicity_and_char2() {
        let f = Fp::new(2);
        // (x+1)^2 (x^2+x+1)
        let a = f.mul(&f.mul(&[1, 1], &[1, 1]), &[1, 1, 1]);
        assert_eq!(f.factor(&a), vec![(vec![1, 1], 2), (vec![1, 1, 1], 1)]);
        let g = Fp::new(3);
        // x^3 - x = x (x-1)(x+1), and (x^2+1)^3
        let b = g.mul(&g.from_i64(&[0, -1, 0, 1]), &g.mul(&g.mul(&[1, 0, 1], &[1, 0, 1]), &[1, 0, 1]));
        let fac = g.factor(&b);
        assert_eq!(fac.iter().map(|(_, m)| *m).sum::<u32>(), 6);
        assert!(fac.contains(&(vec![1, 0, 1], 3)));
    }

    #[test]
    fn product_of_factors_recovers_input() {
        let f = Fp::new(7);
        let poly = f.from_i64(&[3, 1, 4, 1, 5, 9, 2, 6, 1]);
        let mut prod = vec![1u64];
        for (g, m) in f.factor(&poly) {
            assert!(f.is_irreducible(&g));
            for _ in 0..m {
                prod = f.mul(&prod, &g);
            }
        }
        assert_eq!(prod, f.monic(&poly));
    }

    #[test]
    fn first_irreducibles() {
        assert_eq!(Fp::new(5).first_irreducible(2), vec![2, 0, 1]);
        assert_eq!(Fp::new(2).first_irreducible(2), vec![1, 1, 1]);
    }
}
