use alloc::vec::Vec;

use crate::arith::{gcd, kronecker};
use crate::finitegroups::{FiniteRing, Mat2};

use super::ImageError;

/// `{diag(x^{1−k}, x̄^{1−k})}` at a prime unramified in an imaginary
/// quadratic `K`: `x ∈ F_p^× × F_p^×` when `p` splits, `x ∈ F_{p²}^×` with
/// `x̄ = x^p` when `p` is inert.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmImage {
    pub p: u64,
    pub weight: u32,
    pub split: bool,
    pub ring: FiniteRing,
    pub elements: Vec<Mat2>,
}

impl CmImage {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    /// Predicted order: `((p−1)/g)²` split, `(p²−1)/g'` inert.
    pub fn formula_order(&self) -> u64 {
        let p = self.p;
        let k1 = self.weight as u64 - 1;
        if self.split {
            let n = (p - 1) / gcd(p - 1, k1);
            n * n
        } else {
            (p * p - 1) / gcd(p * p - 1, k1)
        }
    }
}

pub fn cm_expected_image_modp(weight: u32, disc: i64, p: u64) -> Result<CmImage, ImageError> {
    if weight == 0 {
        return Err(ImageError::BadWeight);
    }
    if p < 3 || !crate::arith::is_prime(p) {
        return Err(ImageError::BadPrime { p });
    }
    let chi = kronecker(disc, p);
    if chi == 0 {
        return Err(ImageError::RamifiedInK { p });
    }
    let split = chi == 1;
    let ring = if split { FiniteRing::prime_field(p)? } else { FiniteRing::field(p, 2)? };
    let q1 = ring.unit_count();
    // 1 − k as an exponent on the unit group
    let e = (q1 as i64 - ((weight as i64 - 1) % q1 as i64)) as u64 % q1;
    let mut elements: Vec<Mat2> = if split {
        let powers: Vec<u64> = ring.units().map(|x| ring.pow(x, e)).collect();
        let mut v = Vec::new();
        for &a in &powers {
            for &b in &powers {
                v.push(Mat2::diag(a, b));
            }
        }
        v
    } else {
        ring.units()
            .map(|x| {
                let a = ring.pow(x, e);
                Mat2::diag(a, ring.frobenius(a, 1))
            })
            .collect()
    };
    elements.sort_unstable();
    elements.dedup();
    Ok(CmImage { p, weight, split, ring, elements })
}
