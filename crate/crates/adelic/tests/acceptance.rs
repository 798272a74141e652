//! End-to-end acceptance: every headline criterion at exact tolerance, one
//! pass/fail line each.

use std::time::{Duration, Instant};

use adelic_core::hypcheck::{HypWitness, Truth};
use adelic_image::selftest::{self, SuiteResult};
use num_traits::{One, ToPrimitive};

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(name: &'static str, budget: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let t = Instant::now();
    let (ok, detail) = f();
    let elapsed = t.elapsed();
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    let detail = if in_budget { detail } else { format!("{detail}; over budget {budget:?}") };
    Outcome { name, passed: ok && in_budget, detail, elapsed }
}

fn suite(r: SuiteResult) -> (bool, String) {
    let failed: Vec<String> =
        r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    (r.passed(), if failed.is_empty() { r.summary() } else { format!("{}; {}", r.summary(), failed.join("; ")) })
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

/// Determinantal divisors `d₃` and `d₄` of an integer 4×4 matrix.
fn divisors_3_4(m: &[Vec<i128>]) -> (i128, i128) {
    let mut d3 = 0;
    for skip_r in 0..4 {
        for skip_c in 0..4 {
            let minor: Vec<Vec<i128>> = (0..4)
                .filter(|&r| r != skip_r)
                .map(|r| (0..4).filter(|&c| c != skip_c).map(|c| m[r][c]).collect())
                .collect();
            d3 = gcd(d3, det(&minor));
        }
    }
    (d3, det(m).abs())
}

/// `a ⊗ b − 1` over Z when both exact matrices have integer entries.
fn integer_kron(w: &HypWitness) -> Option<Vec<Vec<i128>>> {
    let (a, b) = w.exact.as_ref()?;
    let int = |e: &adelic_core::hypcheck::Monomial| -> Option<i128> {
        if !e.coeff.denom().is_one() {
            return None;
        }
        let c = e.coeff.numer().to_i128()?;
        match (w.m, e.zeta_exp % w.m.max(1)) {
            (_, 0) => Some(c),
            (2, 1) => Some(-c),
            _ if c == 0 => Some(0),
            _ => None,
        }
    };
    let ae: Vec<i128> = a.entries.iter().map(int).collect::<Option<_>>()?;
    let be: Vec<i128> = b.entries.iter().map(int).collect::<Option<_>>()?;
    let mut m = vec![vec![0i128; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[2 * i + k][2 * j + l] = ae[2 * i + j] * be[2 * k + l] - i128::from(2 * i + k == 2 * j + l);
                }
            }
        }
    }
    Some(m)
}

fn hyp_battery() -> (bool, String) {
    let statuses = selftest::battery_statuses();
    let mut problems = Vec::new();
    let (mut yes, mut integral, mut implication) = (0, 0, true);
    for (pair, p, s) in &statuses {
        if s.holds_t == Truth::Yes && s.holds_v != Truth::Yes {
            implication = false;
        }
        if s.holds_v != Truth::Yes && s.holds_t != Truth::Yes {
            continue;
        }
        yes += 1;
        let Some(w) = &s.witness else {
            problems.push(format!("{pair} p = {p}: no witness"));
            continue;
        };
        let (residue, char0) = selftest::oracle_witness(w);
        let mut v_ok = char0.map_or(residue == 3, |c| c == 3);
        let mut t_ok = residue == 3 && char0.is_none_or(|c| c == 3);
        if let Some(m) = integer_kron(w) {
            integral += 1;
            let (d3, d4) = divisors_3_4(&m);
            v_ok &= d4 == 0 && d3 != 0;
            t_ok &= d4 == 0 && d3 != 0 && d3 % *p as i128 != 0;
        }
        if s.holds_v == Truth::Yes && !v_ok {
            problems.push(format!("{pair} p = {p} {:?}: V fails the oracle", s.criterion));
        }
        if s.holds_t == Truth::Yes && !t_ok {
            problems.push(format!("{pair} p = {p} {:?}: T fails the oracle", s.criterion));
        }
    }
    let ok = problems.is_empty() && implication && yes > 0;
    (
        ok,
        format!(
            "{yes} yes verdicts of {} ({integral} over Z), T implies V: {implication}{}",
            statuses.len(),
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    )
}

/// Multiply in `F_p[x]/(modulus)` with elements coded in base `p`, written
/// from scratch for the check.
fn ext_mul(p: u64, modulus: &[u64], a: u64, b: u64) -> u64 {
    let f = modulus.len() - 1;
    let digits = |x: u64| -> Vec<u64> { (0..f).map(|i| x / p.pow(i as u32) % p).collect() };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * f];
    for i in 0..f {
        for j in 0..f {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    // x^f = −Σ m_t x^t
    for k in (f..2 * f).rev() {
        let c = prod[k];
        for (t, &m) in modulus.iter().enumerate().take(f) {
            prod[k - f + t] = (prod[k - f + t] + (p - c) * m) % p;
        }
        prod[k] = 0;
    }
    prod[..f].iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn ext_neg(p: u64, f: usize, a: u64) -> u64 {
    (0..f).rev().fold(0, |acc, i| acc * p + (p - a / p.pow(i as u32) % p) % p)
}

fn papier() -> (bool, String) {
    let (ok, detail) = suite(selftest::papier());
    let sol = match selftest::papier_sqrt3(5) {
        Ok(s) => s,
        Err(e) => return (false, e),
    };
    let modulus = sol.prime.ring.modulus();
    let f = modulus.len() - 1;
    let a = sol.alpha;
    let a5 = (0..4).fold(a, |acc, _| ext_mul(5, &modulus, acc, a));
    let neg = ext_neg(5, f, a);
    (ok && f == 2 && a != 0 && a5 == neg, format!("{detail}; independent alpha^5 = {a5}, -alpha = {neg}"))
}

#[test]
fn acceptance() {
    let seed = 0;
    let outcomes = vec![
        timed("lifting lemma t = 1", Some(Duration::from_secs(30)), || suite(selftest::lifting_single(seed))),
        timed("lifting lemma t = 2", Some(Duration::from_secs(30)), || suite(selftest::lifting_pair(seed))),
        timed("negative Hyp scan (q = 5, 3)", Some(Duration::from_secs(60)), || suite(selftest::negative_hyp())),
        timed("dagger order vs enumeration", Some(Duration::from_secs(120)), || suite(selftest::dagger_orders())),
        timed("Goursat round trip", None, || suite(selftest::goursat_round_trip())),
        timed("counterexample gallery", None, || suite(selftest::counterexample_gallery())),
        timed("Papier solver", None, papier),
        timed("Hyp witnesses re-verify", None, hyp_battery),
        timed("inner-twist oracle (B = 500)", None, || {
            let r = selftest::inner_twist_oracle();
            let listed = r.checks.iter().filter(|c| c.name.ends_with("twists")).count();
            let (ok, d) = suite(r);
            (ok && listed >= 3, format!("{listed} fixtures with listed twists; {d}"))
        }),
        timed("exceptional-prime scan", None, || suite(selftest::exceptional_scan())),
    ];
    for o in &outcomes {
        println!("{} {:<32} {:>8.2?}  {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.elapsed, o.detail);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
