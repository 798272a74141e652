use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::primes_up_to;
use crate::newforms::{CompositeField, InnerTwistGroup, Newform};
use crate::numberfields::{FieldAutomorphism, Rat};

use super::ImageError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanOutcome {
    /// Every tested product vanished: the pair looks twist-degenerate.
    AllPrimesCandidate { ells: Vec<u64> },
    Candidates {
        primes: Vec<u64>,
        gcd: BigInt,
        ells: Vec<u64>,
        /// Divisors of the gcd dropped by the good-prime side conditions.
        excluded: Vec<u64>,
    },
    /// Fewer than three nonzero norms; no candidate is named.
    Insufficient { nonzero: usize },
}

/// Primes `p <= p_bound` dividing the gcd of the integer norms of
/// `∏_γ (a_ℓ(f)² − ℓ^{k_f−k_g} γ(a_ℓ(g))²)` over primes `ℓ ∈ H`.
pub fn exceptional_prime_scan(
    f: &Newform,
    g: &Newform,
    h: &[&InnerTwistGroup],
    gammas: &[FieldAutomorphism],
    l_bound: u64,
    p_bound: u64,
    composite: Option<&CompositeField>,
) -> Result<ScanOutcome, ImageError> {
    if f.weight < g.weight {
        return Err(ImageError::WeightOrder);
    }
    let c = CompositeField::for_pair(f, g, composite)?;
    let k = &c.field;
    let id = [FieldAutomorphism::identity(&g.field)];
    let gammas = if gammas.is_empty() { &id[..] } else { gammas };
    let top = l_bound.min(f.bound).min(g.bound);
    let ells: Vec<u64> = primes_up_to(top)
        .into_iter()
        .filter(|&l| !f.level.is_multiple_of(l) && !g.level.is_multiple_of(l))
        .filter(|&l| h.iter().all(|grp| grp.h_contains(l)))
        .collect();
    if ells.is_empty() {
        return Err(ImageError::NoEligibleEll);
    }
    let mut norms = Vec::new();
    for &l in &ells {
        let af = c.map_f(&f.ap[&l]);
        let af2 = k.mul(&af, &af);
        let scale = Rat::from_integer(BigInt::from(l).pow(f.weight - g.weight));
        let mut prod = k.one();
        for gamma in gammas {
            let ag = c.map_g(&gamma.apply(&g.field, &g.ap[&l]));
            let term = k.sub(&af2, &k.scale(&scale, &k.mul(&ag, &ag)));
            prod = k.mul(&prod, &term);
        }
        let n = k.norm(&prod);
        // algebraic integers have integral norms; keep the numerator regardless
        norms.push(n.numer().abs());
    }
    let nonzero: Vec<&BigInt> = norms.iter().filter(|n| !n.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(ScanOutcome::AllPrimesCandidate { ells });
    }
    if nonzero.len() < 3 {
        return Ok(ScanOutcome::Insufficient { nonzero: nonzero.len() });
    }
    let gcd = nonzero.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    let bad = |p: u64| -> bool {
        p < 5
            || f.level.is_multiple_of(p)
            || g.level.is_multiple_of(p)
            || (f.field.discriminant() % BigInt::from(p)).is_zero()
            || (g.field.discriminant() % BigInt::from(p)).is_zero()
    };
    let mut primes = Vec::new();
    let mut excluded = Vec::new();
    if !gcd.is_one() {
        for p in primes_up_to(p_bound) {
            if (&gcd % BigInt::from(p)).is_zero() {
                if bad(p) {
                    excluded.push(p);
                } else {
                    primes.push(p);
                }
            }
        }
    }
    Ok(ScanOutcome::Candidates { primes, gcd, ells, excluded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::DirichletCharacter;
    use crate::newforms::FieldCharacter;
    use crate::numberfields::NumberFieldQ;
    use alloc::string::ToString;

    fn form(label: &str, level: u64, ap: &[(u64, i64)]) -> Newform {
        let field = NumberFieldQ::rationals();
        let character = FieldCharacter::from_real(&field, DirichletCharacter::trivial(level)).unwrap();
        let ap = ap.iter().map(|&(l, a)| (l, field.from_int(a))).collect();
        Newform::new(label.to_string(), level, 2, character, field, ap, None).unwrap()
    }

    const AP11: [(u64, i64); 10] =
        [(2, -2), (3, -1), (5, 1), (7, -2), (11, 1), (13, 4), (17, -2), (19, 0), (23, -1), (29, 0)];

    #[test]
    fn self_pair_is_degenerate() {
        let f = form("11.2.a.a", 11, &AP11);
        let out = exceptional_prime_scan(&f, &f, &[], &[], 29, 100, None).unwrap();
        assert!(matches!(out, ScanOutcome::AllPrimesCandidate { .. }));
    }

    #[test]
    fn rigged_congruence_mod_7() {
        let f = form("11.2.a.a", 11, &AP11);
        // a_ℓ(g) = a_ℓ(f) + 7 t_ℓ with t_ℓ chosen to avoid other common divisors
        let t = [1, 2, 1, 1, 0, 2, 1, 1, 2, 1];
        let ap: Vec<(u64, i64)> = AP11.iter().zip(t).map(|(&(l, a), t)| (l, a + 7 * t)).collect();
        let mut g = form("rig", 13, &ap);
        g.ap.insert(11, g.field.from_int(3));
        let out = exceptional_prime_scan(&f, &g, &[], &[], 29, 1000, None).unwrap();
        let ScanOutcome::Candidates { primes, .. } = out else { panic!("{out:?}") };
        assert_eq!(primes, [7]);
    }
}
