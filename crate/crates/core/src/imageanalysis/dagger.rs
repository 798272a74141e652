use alloc::vec::Vec;

use crate::arith::{gcd, is_prime, pow_mod};
use crate::finitegroups::{Constraint, Factor, FiniteRing, Mat2};
use crate::numberfields::{decomposition_group, prime_orbits, residue_primes, FieldAutomorphism, NumberFieldQ};

use super::ImageError;

/// One form's data at `p`: a residue field per prime of the fixed field
/// (a Γ-orbit of primes of `L`) and the weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupGSpec {
    p: u64,
    weight: u32,
    blocks: Vec<FiniteRing>,
}

impl GroupGSpec {
    /// Blocks given directly by residue degree.
    pub fn new(p: u64, weight: u32, degrees: &[u32]) -> Result<Self, ImageError> {
        if p < 5 || !is_prime(p) {
            return Err(ImageError::BadPrime { p });
        }
        if weight == 0 {
            return Err(ImageError::BadWeight);
        }
        let blocks = degrees.iter().map(|&f| FiniteRing::field(p, f)).collect::<Result<Vec<_>, _>>()?;
        Ok(GroupGSpec { p, weight, blocks })
    }

    /// Blocks from the Γ-orbits of primes of `L` above `p`. The residue degree
    /// of the fixed-field prime is `f(𝔭)/|D(𝔭)|`.
    pub fn for_field(
        field: &NumberFieldQ,
        gamma: &[FieldAutomorphism],
        p: u64,
        weight: u32,
        level: u64,
    ) -> Result<Self, ImageError> {
        if p < 5 || !is_prime(p) || level.is_multiple_of(p) {
            return Err(ImageError::BadPrime { p });
        }
        let primes = residue_primes(field, p).map_err(|_| ImageError::BadPrime { p })?;
        let id = [FieldAutomorphism::identity(field)];
        let gamma = if gamma.is_empty() { &id[..] } else { gamma };
        let orbits = prime_orbits(field, gamma, &primes)?;
        let mut degrees = Vec::with_capacity(orbits.len());
        for orbit in orbits {
            let rep = &primes[orbit[0]];
            let d = decomposition_group(field, gamma, rep)?.len() as u32;
            degrees.push(rep.residue_degree() / d);
        }
        Self::new(p, weight, &degrees)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn blocks(&self) -> &[FiniteRing] {
        &self.blocks
    }

    pub fn ambient(&self) -> Vec<Factor> {
        self.blocks.iter().map(|r| Factor::new(r.clone(), Constraint::GL2)).collect()
    }

    /// Number of admissible determinants `λ^{k−1}`, `λ ∈ F_p^×`.
    pub fn det_count(&self) -> u64 {
        (self.p - 1) / gcd(self.p - 1, self.weight as u64 - 1)
    }

    /// Whether `t ∈ F_p^×` is a `(k−1)`-th power.
    pub fn det_allowed(&self, t: u64) -> bool {
        if t == 0 || t >= self.p {
            return false;
        }
        pow_mod(t, self.det_count(), self.p) == 1
    }
}

/// The expected image `{x ∈ ∏ GL₂(k_v) : det x_v = λ^{k−1} for one λ ∈ F_p^×}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaggerGroup {
    pub spec: GroupGSpec,
    pub order: u128,
}

impl DaggerGroup {
    /// Membership in one pass over the determinants.
    pub fn contains(&self, xs: &[Mat2]) -> bool {
        let blocks = self.spec.blocks();
        if xs.len() != blocks.len() {
            return false;
        }
        let mut common = None;
        for (r, x) in blocks.iter().zip(xs) {
            if !r.mat_in_ring(x) {
                return false;
            }
            let d = r.mat_det(x);
            if *common.get_or_insert(d) != d {
                return false;
            }
        }
        common.is_some_and(|d| self.spec.det_allowed(d))
    }
}

pub fn dagger_group_modp(spec: &GroupGSpec) -> DaggerGroup {
    let sl2: u128 = spec
        .blocks()
        .iter()
        .map(|r| {
            let q = r.size() as u128;
            q * (q * q - 1)
        })
        .product();
    DaggerGroup { order: sl2 * spec.det_count() as u128, spec: spec.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn brute(spec: &GroupGSpec) -> u128 {
        // histogram of determinants per block, then sum over admissible dets
        let hists: Vec<Vec<u128>> = spec
            .blocks()
            .iter()
            .map(|r| {
                let mut h = vec![0u128; r.size() as usize];
                for m in r.gl2_elements() {
                    h[r.mat_det(&m) as usize] += 1;
                }
                h
            })
            .collect();
        (1..spec.p())
            .filter(|&t| spec.det_allowed(t))
            .map(|t| hists.iter().map(|h| h[t as usize]).product::<u128>())
            .sum()
    }

    #[test]
    fn orders_match_enumeration() {
        let s = GroupGSpec::new(5, 2, &[1]).unwrap();
        assert_eq!(dagger_group_modp(&s).order, 480);
        assert_eq!(brute(&s), 480);
        let s = GroupGSpec::new(5, 3, &[1]).unwrap();
        assert_eq!(dagger_group_modp(&s).order, 240);
        assert_eq!(brute(&s), 240);
        let s = GroupGSpec::new(5, 4, &[1, 1]).unwrap();
        assert_eq!(dagger_group_modp(&s).order, brute(&s));
        let g = dagger_group_modp(&s);
        assert!(g.contains(&[Mat2::IDENTITY, Mat2::IDENTITY]));
        assert!(!g.contains(&[Mat2::diag(2, 1), Mat2::IDENTITY]));
    }

    #[test]
    fn orbit_structure_from_field() {
        let k = NumberFieldQ::from_i64(&[-3, 0, 1]).unwrap();
        // 5 is inert, 11 splits in Q(√3)
        let inert = GroupGSpec::for_field(&k, &[], 5, 2, 1).unwrap();
        assert_eq!(inert.blocks().len(), 1);
        assert_eq!(inert.blocks()[0].size(), 25);
        let split = GroupGSpec::for_field(&k, &[], 11, 2, 1).unwrap();
        assert_eq!(split.blocks().len(), 2);
        // with the nontrivial automorphism the fixed field is Q
        let sigma = FieldAutomorphism::new(&k, k.neg(&k.generator())).unwrap();
        let both = [FieldAutomorphism::identity(&k), sigma];
        let f5 = GroupGSpec::for_field(&k, &both, 5, 2, 1).unwrap();
        assert_eq!(f5.blocks().iter().map(|r| r.size()).collect::<Vec<_>>(), [5]);
        let f11 = GroupGSpec::for_field(&k, &both, 11, 2, 1).unwrap();
        assert_eq!(f11.blocks().iter().map(|r| r.size()).collect::<Vec<_>>(), [11]);
        assert_eq!(GroupGSpec::for_field(&k, &[], 5, 2, 10), Err(ImageError::BadPrime { p: 5 }));
    }
}
