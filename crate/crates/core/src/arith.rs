//! Machine-word number theory: gcds, modular powers, primality, factoring of
//! small integers, primitive roots and discrete logarithms.

use alloc::vec::Vec;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Extended Euclid on signed values: returns (g, x, y) with a*x + b*y = g.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // deterministic witness set for all u64
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = alloc::vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter_map(|(k, &b)| b.then_some(k as u64)).collect()
}

/// Prime factorization by trial division, as (prime, exponent) pairs ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = alloc::vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `a` modulo `m`, where `group_order` is a multiple of it.
pub fn mult_order(a: u64, m: u64, group_order: u64) -> u64 {
    let mut ord = group_order;
    for (q, _) in factorize(group_order) {
        while ord.is_multiple_of(q) && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Smallest primitive root modulo an odd prime power `p^e`.
pub fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    debug_assert!(p > 2);
    let pe = p.pow(e);
    let phi = pe / p * (p - 1);
    let qs: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..pe)
        .find(|&g| gcd(g, p) == 1 && qs.iter().all(|&q| pow_mod(g, phi / q, pe) != 1))
        .expect("odd prime powers are cyclic")
}

/// Discrete log of `h` to base `g` modulo `m`, where `g` has order `n`.
/// Baby-step giant-step.
pub fn discrete_log(g: u64, h: u64, m: u64, n: u64) -> Option<u64> {
    if n <= 64 {
        let mut x = 1 % m;
        for k in 0..n {
            if x == h % m {
                return Some(k);
            }
            x = mul_mod(x, g, m);
        }
        return None;
    }
    let step = isqrt(n) + 1;
    let mut table = hashbrown::HashMap::with_capacity(step as usize);
    let mut x = 1 % m;
    for j in 0..step {
        table.entry(x).or_insert(j);
        x = mul_mod(x, g, m);
    }
    let factor = pow_mod(inv_mod(g, m)?, step, m);
    let mut y = h % m;
    for i in 0..=step {
        if let Some(&j) = table.get(&y) {
            let k = i * step + j;
            if k < n {
                return Some(k);
            }
        }
        y = mul_mod(y, factor, m);
    }
    None
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = x.div_ceil(2);
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    x
}

/// Chinese remainder for pairwise coprime moduli.
pub fn crt(residues: &[u64], moduli: &[u64]) -> u64 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for (&r, &mi) in residues.iter().zip(moduli) {
        // x + m * t ≡ r (mod mi)
        let mi128 = mi as u128;
        let diff = (r as u128 + mi128 - x % mi128) % mi128;
        let inv = inv_mod((m % mi128) as u64, mi).expect("moduli must be coprime") as u128;
        let t = diff * inv % mi128;
        x += m * t;
        m *= mi128;
    }
    x as u64
}

/// Kronecker symbol `(a / n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result: i8 = 1;
    let mut twos = 0;
    while n.is_multiple_of(2) {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a / n) for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol of `a` modulo an odd prime `p` via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Largest `e` with `p^e | n` (n != 0).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n != 0 && n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert_eq!(primes_up_to(30), [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(561));
        assert_eq!(factorize(360), [(2, 3), (3, 2), (5, 1)]);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(60).into_iter().skip(1) {
            for a in -20i64..20 {
                assert_eq!(kronecker(a, p), legendre(reduce_i64(a, p), p), "a={a} p={p}");
            }
        }
        // (-4 / n) is the character of Q(i)
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(8, 7), 1);
    }

    #[test]
    fn dlog_roundtrip() {
        let g = primitive_root_prime_power(7, 3);
        for h in [1u64, 2, 3, 100, 200, 342] {
            if gcd(h, 7) == 1 {
                let k = discrete_log(g, h, 343, 294).unwrap();
                assert_eq!(pow_mod(g, k, 343), h);
            }
        }
        assert_eq!(crt(&[2, 3], &[3, 5]), 8);
    }
}
