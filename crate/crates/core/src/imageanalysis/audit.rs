use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::arith::{crt, is_prime, legendre};

use super::entangle::{LocalImageReport, Verdict};
use super::ImageError;

/// Determinant image at finite level: the index of the image in `(Z/p^e)^×`
/// at listed primes, and whether it is full at every other prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetImage {
    pub levels: Vec<(u64, u64)>,
    pub full_elsewhere: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailingHypothesis {
    EntangledPair,
    UnknownLocalImage,
    DetNotOpen,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditResult {
    pub open: bool,
    pub index_bound: Option<u128>,
    pub failing: Option<FailingHypothesis>,
    pub assumptions: Vec<String>,
}

/// Finite-level openness check: every local report full or of bounded index,
/// and the determinant image full away from finitely many levels.
pub fn adelic_openness_audit(
    reports: &[LocalImageReport],
    det: &DetImage,
    cover: &[u64],
) -> Result<AuditResult, ImageError> {
    let have: HashSet<u64> = reports.iter().map(|r| r.p).collect();
    let missing: Vec<u64> = cover.iter().copied().filter(|p| !have.contains(p)).collect();
    if !missing.is_empty() {
        return Err(ImageError::IncompleteCover { missing });
    }
    let mut assumptions = Vec::new();
    assumptions.push(String::from("full expected image at primes outside the audited set"));
    let mut index: u128 = 1;
    let mut failing = None;
    for r in reports {
        match &r.verdict {
            Verdict::FullDagger => {}
            Verdict::OpenIndexBounded(n) => index = index.saturating_mul(*n as u128),
            Verdict::Entangled(_) => {
                failing.get_or_insert(FailingHypothesis::EntangledPair);
            }
            Verdict::Unknown => {
                failing.get_or_insert(FailingHypothesis::UnknownLocalImage);
            }
        }
    }
    if failing.is_none() && !det.full_elsewhere {
        failing = Some(FailingHypothesis::DetNotOpen);
    }
    if failing.is_none() {
        for &(p, i) in &det.levels {
            index = index.saturating_mul(i as u128);
            assumptions.push(format!("determinant index {i} at {p}"));
        }
    }
    let open = failing.is_none();
    Ok(AuditResult { open, index_bound: open.then_some(index), failing, assumptions })
}

/// Exhaustive record for the all-squares-or-all-nonsquares subset of `∏ (Z/p_i)^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleRecord {
    pub primes: Vec<u64>,
    pub group_order: u64,
    /// Elements as residues modulo `∏ p_i`, sorted.
    pub elements: Vec<u64>,
    pub is_subgroup: bool,
    pub projections_surjective: bool,
    pub index: u64,
}

pub fn counterexample_subgroup(primes: &[u64]) -> Result<CounterexampleRecord, ImageError> {
    if primes.len() < 2 {
        return Err(ImageError::NeedTwoPrimes);
    }
    let distinct: HashSet<u64> = primes.iter().copied().collect();
    if distinct.len() != primes.len() || primes.iter().any(|&p| p == 2 || !is_prime(p)) {
        return Err(ImageError::BadPrimes);
    }
    let m: u64 = primes.iter().product();
    let group_order: u64 = primes.iter().map(|p| p - 1).product();
    let mut tuple = alloc::vec![1u64; primes.len()];
    let mut elements = Vec::new();
    loop {
        let signs: Vec<i8> = tuple.iter().zip(primes).map(|(&x, &p)| legendre(x, p)).collect();
        if signs.iter().all(|&s| s == 1) || signs.iter().all(|&s| s == -1) {
            elements.push(crt(&tuple, primes));
        }
        let mut i = 0;
        loop {
            if i == tuple.len() {
                elements.sort_unstable();
                return Ok(finish(primes, m, group_order, elements));
            }
            tuple[i] += 1;
            if tuple[i] < primes[i] {
                break;
            }
            tuple[i] = 1;
            i += 1;
        }
    }
}

fn finish(primes: &[u64], m: u64, group_order: u64, elements: Vec<u64>) -> CounterexampleRecord {
    let set: HashSet<u64> = elements.iter().copied().collect();
    let is_subgroup = set.contains(&1)
        && elements.iter().all(|&x| elements.iter().all(|&y| set.contains(&crate::arith::mul_mod(x, y, m))));
    let projections_surjective = primes.iter().all(|&p| {
        let image: HashSet<u64> = elements.iter().map(|x| x % p).collect();
        image.len() as u64 == p - 1
    });
    let index = group_order / elements.len().max(1) as u64;
    CounterexampleRecord { primes: primes.to_vec(), group_order, elements, is_subgroup, projections_surjective, index }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitegroups::Mat2;
    use crate::imageanalysis::entangle::{EntanglementDatum, Sign, SignRule};
    use alloc::vec;

    fn rep(p: u64, verdict: Verdict) -> LocalImageReport {
        LocalImageReport { p, verdict, evidence: vec![], witness_order: None }
    }

    #[test]
    fn audit_patterns() {
        let full = DetImage { levels: vec![], full_elsewhere: true };
        let r =
            adelic_openness_audit(&[rep(5, Verdict::FullDagger), rep(7, Verdict::FullDagger)], &full, &[5, 7]).unwrap();
        assert!(r.open);
        assert_eq!(r.index_bound, Some(1));
        let datum = EntanglementDatum {
            v: 0,
            w: 0,
            residue_degree: 1,
            frobenius: 0,
            conjugator: Mat2::IDENTITY,
            sign: Sign::Plus,
            rule: SignRule::Plus,
            exponent: 0,
        };
        let r = adelic_openness_audit(&[rep(5, Verdict::Entangled(datum))], &full, &[5]).unwrap();
        assert_eq!(r.failing, Some(FailingHypothesis::EntangledPair));
        let squares = DetImage { levels: vec![(3, 2), (5, 2), (7, 2)], full_elsewhere: false };
        let r = adelic_openness_audit(&[rep(5, Verdict::FullDagger)], &squares, &[5]).unwrap();
        assert_eq!(r.failing, Some(FailingHypothesis::DetNotOpen));
        assert!(matches!(adelic_openness_audit(&[], &full, &[5]), Err(ImageError::IncompleteCover { .. })));
    }

    #[test]
    fn counterexamples() {
        let r = counterexample_subgroup(&[3, 5]).unwrap();
        assert_eq!((r.group_order, r.elements.len(), r.index), (8, 4, 2));
        assert!(r.is_subgroup && r.projections_surjective);
        let r = counterexample_subgroup(&[3, 5, 7]).unwrap();
        assert_eq!(r.index, 4);
        assert!(r.is_subgroup && r.projections_surjective);
        assert_eq!(counterexample_subgroup(&[3]), Err(ImageError::NeedTwoPrimes));
        assert_eq!(counterexample_subgroup(&[3, 3]), Err(ImageError::BadPrimes));
    }
}
