//! Integer polynomials: exact arithmetic, resultants and factorization over Z
//! by Hensel lifting and factor recombination.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::primes_up_to;
use crate::fpoly::Fp;

pub type ZPoly = Vec<BigInt>;

pub fn from_i64(c: &[i64]) -> ZPoly {
    trim(c.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn derivative(a: &[BigInt]) -> ZPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

/// Exact division of `a` by `b` over Z; `None` if the quotient is not integral
/// or the remainder is nonzero.
pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let lb = b.last()?;
    let mut r: ZPoly = a.to_vec();
    if r.len() < b.len() {
        return if trim(r).is_empty() { Some(Vec::new()) } else { None };
    }
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let top = &r[k + b.len() - 1];
        let (c, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(trim(q))
    } else {
        None
    }
}

pub fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn to_fp(a: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn from_fp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Reduce coefficients into the symmetric range modulo `m`.
fn symmetric_mod(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn reduce_mod(a: &[BigInt], m: &BigInt) -> ZPoly {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn divrem_monic_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = reduce_mod(a, m);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().clone();
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * bj).mod_floor(m);
        }
        q[k] = c;
        r = trim(r);
    }
    (trim(q), r)
}

/// One lifting chain: from `f ≡ g h (mod p)` to `f ≡ G H (mod p^k)`, with `g`
/// and `h` monic and coprime mod p.
fn hensel_lift(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let fp = Fp::new(p);
    let (one, s, t) = fp.ext_gcd(g, h);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let (s, t) = (from_fp(&s), from_fp(&t));
    let (mut gz, mut hz) = (from_fp(g), from_fp(h));
    let mut pk = pb.clone();
    for _ in 1..k {
        let diff = trim(
            f.iter().zip(mul(&gz, &hz).iter().chain(core::iter::repeat(&BigInt::zero()))).map(|(a, b)| a - b).collect(),
        );
        let e: ZPoly = trim(diff.iter().map(|c| (c / &pk).mod_floor(&pb)).collect());
        if !e.is_empty() {
            let (q, dg) = divrem_monic_mod(&mul(&e, &t), &from_fp(g), &pb);
            let dh = reduce_mod(&add(&mul(&e, &s), &mul(&q, &from_fp(h))), &pb);
            gz = add(&gz, &scale(&dg, &pk));
            hz = add(&hz, &scale(&dh, &pk));
        }
        pk *= &pb;
    }
    (gz, hz)
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()).collect())
}

pub fn scale(a: &[BigInt], c: &BigInt) -> ZPoly {
    trim(a.iter().map(|x| x * c).collect())
}

fn lift_all(f: &[BigInt], factors: &[Vec<u64>], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let m = BigInt::from(p).pow(k);
        return vec![reduce_mod(f, &m)];
    }
    let fp = Fp::new(p);
    let mid = factors.len() / 2;
    let g = factors[..mid].iter().fold(vec![1u64], |acc, x| fp.mul(&acc, x));
    let h = factors[mid..].iter().fold(vec![1u64], |acc, x| fp.mul(&acc, x));
    let (gz, hz) = hensel_lift(f, &g, &h, p, k);
    let mut out = lift_all(&gz, &factors[..mid], p, k);
    out.extend(lift_all(&hz, &factors[mid..], p, k));
    out
}

/// Factor a monic square-free integer polynomial into monic irreducibles.
/// Factors are returned sorted by (degree, coefficients).
pub fn factor_monic_squarefree(f: &[BigInt]) -> Vec<ZPoly> {
    assert!(f.last().is_some_and(|c| c.is_one()), "polynomial must be monic");
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let df = derivative(f);
    // choose the prime with the fewest modular factors among a handful of candidates
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in primes_up_to(2000).into_iter().skip(1) {
        let fp = Fp::new(p);
        let fm = to_fp(f, p);
        if fp.gcd(&fm, &to_fp(&df, p)).len() != 1 {
            continue;
        }
        let facs: Vec<Vec<u64>> = fp.factor(&fm).into_iter().map(|(g, _)| g).collect();
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 8 {
            break;
        }
    }
    let (p, modfacs) = best.expect("some prime keeps the polynomial square-free");
    // Mignotte-style bound on factor coefficients
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let sqrt = norm2.sqrt() + 1u32;
    let bound = (BigInt::one() << n) * sqrt * 2u32;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }
    let mut lifted = lift_all(f, &modfacs, p, k);
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), size) {
            let cand = subset.iter().fold(vec![BigInt::one()], |acc, &i| reduce_mod(&mul(&acc, &lifted[i]), &pk));
            let cand = symmetric_mod(&cand, &pk);
            if let Some(q) = div_exact(&rest, &cand) {
                out.push(cand);
                rest = q;
                let mut idx = subset.clone();
                idx.sort_unstable_by(|a, b| b.cmp(a));
                for i in idx {
                    lifted.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Irreducibility over Q of a monic integer polynomial.
pub fn is_irreducible(f: &[BigInt]) -> bool {
    if f.len() < 2 {
        return false;
    }
    let df = derivative(f);
    if df.is_empty() {
        return false;
    }
    // a repeated factor shows up as a nontrivial gcd with the derivative
    if resultant(f, &df).is_zero() {
        return false;
    }
    factor_monic_squarefree(f).len() == 1
}

/// Resultant via the Sylvester matrix and fraction-free elimination.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_det(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                None => return BigInt::zero(),
                Some(i) => {
                    mat.swap(k, i);
                    sign = -sign;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[n - 1][n - 1]
}

/// Discriminant of a monic polynomial: (-1)^(n(n-1)/2) Res(f, f').
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let r = resultant(f, &derivative(f));
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

pub fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Cyclotomic polynomial Φ_m by exact division of x^m − 1.
pub fn cyclotomic(m: u64) -> ZPoly {
    let mut num: ZPoly = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in crate::arith::divisors(m) {
        if d < m {
            num = div_exact(&num, &cyclotomic(d)).expect("Φ_d divides x^m - 1");
        }
    }
    num
}

pub fn abs_max(f: &[BigInt]) -> BigInt {
    f.iter().map(|c| c.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x4_plus_1_is_irreducible_despite_splitting_mod_every_prime() {
        assert!(is_irreducible(&from_i64(&[1, 0, 0, 0, 1])));
        assert!(!is_irreducible(&from_i64(&[4, 0, 0, 0, 1]))); // (x^2+2x+2)(x^2-2x+2)
        assert!(!is_irreducible(&from_i64(&[-1, 0, 1])));
        assert!(is_irreducible(&from_i64(&[-3, 0, 1])));
    }

    #[test]
    fn factor_product() {
        let f = mul(&mul(&from_i64(&[1, 1, 1]), &from_i64(&[-2, 0, 0, 1])), &from_i64(&[5, -3, 1]));
        let facs = factor_monic_squarefree(&f);
        assert_eq!(facs.len(), 3);
        assert_eq!(facs.iter().fold(vec![BigInt::one()], |a, b| mul(&a, b)), f);
    }

    #[test]
    fn discriminants_and_cyclotomics() {
        assert_eq!(discriminant(&from_i64(&[-3, 0, 1])), BigInt::from(12));
        assert_eq!(discriminant(&from_i64(&[-1, -1, 0, 1])), BigInt::from(-23));
        assert_eq!(cyclotomic(12), from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(8), from_i64(&[1, 0, 0, 0, 1]));
        assert_eq!(resultant(&from_i64(&[-2, 1]), &from_i64(&[-3, 0, 1])), BigInt::from(1));
    }
}
