use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use super::closure::{Constraint, Elem, Factor, SubgroupClosure, DEFAULT_BOUND};
use super::mat2::Mat2;
use super::ring::FiniteRing;
use super::GroupError;

/// Decide whether `gens` (one matrix per ring, all in `SL₂`) map onto
/// `∏ PSL₂(k_i)`. Over `Z/p^n` with `p >= 5` that is equivalent to generating
/// all of `∏ SL₂(Z/p^n)`.
pub fn is_full_sl2_lift(gens: &[Elem], rings: &[FiniteRing]) -> Result<bool, GroupError> {
    let p = rings.first().ok_or(GroupError::InvalidRing)?.p();
    if rings.iter().any(|r| r.p() != p) {
        return Err(GroupError::MixedCharacteristic);
    }
    if p < 5 {
        return Err(GroupError::SmallPrime { p });
    }
    for (i, g) in gens.iter().enumerate() {
        if g.len() != rings.len() || g.iter().zip(rings).any(|(m, r)| !r.mat_in_ring(m) || r.mat_det(m) != 1) {
            return Err(GroupError::InvalidGenerator { index: i });
        }
    }
    let residue: Vec<FiniteRing> = rings.iter().map(|r| r.residue_field()).collect();
    let ambient: Vec<Factor> = residue.iter().map(|r| Factor::new(r.clone(), Constraint::PSL2)).collect();
    let images: Vec<Elem> = gens.iter().map(|g| g.iter().zip(rings).map(|(m, r)| r.mat_reduce(m)).collect()).collect();
    let mut c = SubgroupClosure::new(images, ambient, DEFAULT_BOUND)?;
    let target = c.ambient_order();
    c.enumerate()?;
    Ok(c.order().map(|o| o as u128) == Some(target))
}

/// Uniform-ish random element of `SL₂` over a ring: choose a unit `a`
/// and `b, c` freely, then solve for `d`; falls back to a column swap when
/// needed so every draw succeeds.
pub fn random_sl2(ring: &FiniteRing, rng: &mut ChaCha8Rng) -> Mat2 {
    let q = ring.size();
    loop {
        let a = rng.next_u64() % q;
        let b = rng.next_u64() % q;
        let c = rng.next_u64() % q;
        if let Some(ai) = ring.inv(a) {
            let d = ring.mul(ring.add(1, ring.mul(b, c)), ai);
            return Mat2::new(a, b, c, d);
        }
        let d = rng.next_u64() % q;
        if let Some(ci) = ring.inv(c) {
            // ad - bc = 1  =>  b = (ad - 1)/c
            let b = ring.mul(ring.sub(ring.mul(a, d), 1), ci);
            return Mat2::new(a, b, c, d);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn unipotent_pair_lifts() {
        let z25 = FiniteRing::residue(5, 2).unwrap();
        let gens = vec![vec![Mat2::new(1, 1, 0, 1)], vec![Mat2::new(1, 0, 1, 1)]];
        assert!(is_full_sl2_lift(&gens, core::slice::from_ref(&z25)).unwrap());
        let borel = vec![vec![Mat2::new(1, 1, 0, 1)], vec![Mat2::new(2, 0, 0, 13)]];
        assert!(!is_full_sl2_lift(&borel, &[z25]).unwrap());
    }

    #[test]
    fn diagonal_embedding_is_not_full() {
        let f5 = FiniteRing::prime_field(5).unwrap();
        let u = Mat2::new(1, 1, 0, 1);
        let l = Mat2::new(1, 0, 1, 1);
        let gens = vec![vec![u, u], vec![l, l]];
        assert!(!is_full_sl2_lift(&gens, &[f5.clone(), f5.clone()]).unwrap());
        let f3 = FiniteRing::prime_field(3).unwrap();
        assert_eq!(is_full_sl2_lift(&[vec![u]], &[f3]), Err(GroupError::SmallPrime { p: 3 }));
    }
}
