use alloc::vec::Vec;

use crate::finitegroups::{FiniteRing, Mat2};
use crate::newforms::{FieldCharacter, InnerTwist};
use crate::numberfields::{reduce, residue_action_matrix, NumberFieldQ, ResiduePrime};

use super::ImageError;

/// A residue `α ≠ 0` with `γ(α) = χ_γ(u)·α` for every inner twist whose `γ`
/// fixes `𝔭`, and the coset `diag(α, ε(u)α⁻¹)·SL₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PapierSolution {
    pub prime: ResiduePrime,
    pub u: u64,
    /// Indices of the twists in the decomposition group, with `χ_γ(u) mod 𝔭`.
    pub eigenvalues: Vec<(usize, u64)>,
    pub alpha: u64,
    pub eps_u: u64,
    pub coset: Mat2,
    /// Generator of `k_𝔭^×` fixing the embedding of roots of unity.
    pub embedding_generator: Option<u64>,
}

fn fixes_prime(field: &NumberFieldQ, t: &InnerTwist, prime: &ResiduePrime) -> Result<bool, ImageError> {
    let ring = &prime.ring;
    let y = reduce(field, t.gamma.image(), prime)?;
    let v = prime.g.iter().rev().fold(0, |acc, &c| ring.add(ring.mul(acc, y), c));
    Ok(v == 0)
}

/// Matrix of multiplication by `c` on `F_p[x]/(g)` in the power basis.
fn mult_matrix(ring: &FiniteRing, c: u64) -> Vec<Vec<u64>> {
    let f = ring.residue_degree() as usize;
    let p = ring.p();
    let cols: Vec<Vec<u64>> = (0..f).map(|j| ring.coeffs(ring.mul(c, p.pow(j as u32)))).collect();
    (0..f).map(|i| (0..f).map(|j| cols[j][i]).collect()).collect()
}

/// Basis of the null space over `F_p` in reduced echelon order.
fn null_space(p: u64, mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let fp = FiniteRing::prime_field(p).expect("prime");
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = fp.inv(rows[r][col]).expect("field");
        for x in rows[r].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let c = rows[i][col];
                for j in 0..ncols {
                    let t = fp.mul(c, rows[r][j]);
                    rows[i][j] = fp.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = alloc::vec![0u64; ncols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = fp.neg(rows[i][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solve for `α` by stacking `reduce∘γ − χ_γ(u)` over the decomposition group.
pub fn papier_coset(
    field: &NumberFieldQ,
    twists: &[InnerTwist],
    eps: &FieldCharacter,
    level: u64,
    prime: &ResiduePrime,
    u: u64,
) -> Result<PapierSolution, ImageError> {
    let p = prime.p;
    if level.is_multiple_of(p) {
        return Err(ImageError::BadPrime { p });
    }
    let ring = &prime.ring;
    let f = ring.residue_degree() as usize;
    let mut rows = Vec::new();
    let mut eigenvalues = Vec::new();
    for (i, t) in twists.iter().enumerate() {
        if !fixes_prime(field, t, prime)? {
            continue;
        }
        let c = reduce(field, &t.chi.eval(field, u as i64), prime)?;
        let a = residue_action_matrix(field, &t.gamma, prime)?;
        let m = mult_matrix(ring, c);
        for (ra, rm) in a.iter().zip(&m) {
            rows.push(ra.iter().zip(rm).map(|(&x, &y)| (x + p - y) % p).collect());
        }
        eigenvalues.push((i, c));
    }
    let basis = null_space(p, rows, f);
    let alpha = basis.first().map(|v| ring.from_coeffs(v)).ok_or(ImageError::NoSolution)?;
    let eps_u = reduce(field, &eps.eval(field, u as i64), prime)?;
    let ai = ring.inv(alpha).ok_or(ImageError::NoSolution)?;
    Ok(PapierSolution {
        prime: prime.clone(),
        u,
        eigenvalues,
        alpha,
        eps_u,
        coset: Mat2::diag(alpha, ring.mul(eps_u, ai)),
        embedding_generator: ring.generator(),
    })
}

/// Re-check `γ(α) = χ_γ(u)·α` by evaluating `α` as a polynomial in the image
/// of `γ(x)`.
pub fn papier_verify(field: &NumberFieldQ, twists: &[InnerTwist], sol: &PapierSolution) -> Result<bool, ImageError> {
    let ring = &sol.prime.ring;
    if sol.alpha == 0 {
        return Ok(false);
    }
    for t in twists {
        if !fixes_prime(field, t, &sol.prime)? {
            continue;
        }
        let y = reduce(field, t.gamma.image(), &sol.prime)?;
        let coeffs = ring.coeffs(sol.alpha);
        let ga = coeffs.iter().rev().fold(0, |acc, &c| ring.add(ring.mul(acc, y), c));
        let c = reduce(field, &t.chi.eval(field, sol.u as i64), &sol.prime)?;
        if ga != ring.mul(c, sol.alpha) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{DirichletCharacter, RootOfUnity};
    use crate::numberfields::{residue_primes, FieldAutomorphism};
    use alloc::vec;

    fn sqrt3_twists() -> (NumberFieldQ, Vec<InnerTwist>, FieldCharacter) {
        let k = NumberFieldQ::from_i64(&[-3, 0, 1]).unwrap();
        let sigma = FieldAutomorphism::new(&k, k.neg(&k.generator())).unwrap();
        // (σ, χ) with χ the character mod 3 sending 2 to −1
        let chi = DirichletCharacter::from_images(3, vec![RootOfUnity::minus_one()]).unwrap();
        let chi = FieldCharacter::from_real(&k, chi).unwrap();
        let id = InnerTwist { gamma: FieldAutomorphism::identity(&k), chi: FieldCharacter::trivial(&k, 3) };
        let eps = FieldCharacter::trivial(&k, 1);
        (k.clone(), vec![id, InnerTwist { gamma: sigma, chi }], eps)
    }

    #[test]
    fn inert_prime_gives_frobenius_eigenvector() {
        let (k, twists, eps) = sqrt3_twists();
        let pr = residue_primes(&k, 5).unwrap().remove(0);
        assert_eq!(pr.residue_degree(), 2);
        let sol = papier_coset(&k, &twists, &eps, 3, &pr, 2).unwrap();
        let r = &pr.ring;
        // independent check in F25: α^5 = −α
        assert_eq!(r.pow(sol.alpha, 5), r.neg(sol.alpha));
        assert!(papier_verify(&k, &twists, &sol).unwrap());
        // u = 1: χ(u) = 1 so α = 1 and the coset is diag(1, ε(1))
        let sol = papier_coset(&k, &twists, &eps, 3, &pr, 1).unwrap();
        assert_eq!(sol.alpha, 1);
        assert_eq!(sol.coset, Mat2::diag(1, 1));
    }

    #[test]
    fn trivial_decomposition_group() {
        let (k, twists, eps) = sqrt3_twists();
        // 11 splits; σ swaps the two primes so D is trivial
        let pr = residue_primes(&k, 11).unwrap().remove(0);
        let sol = papier_coset(&k, &twists, &eps, 3, &pr, 2).unwrap();
        assert_eq!(sol.alpha, 1);
        assert_eq!(sol.eigenvalues.len(), 1);
    }

    #[test]
    fn inconsistent_system_reports_no_solution() {
        let (k, mut twists, eps) = sqrt3_twists();
        // identity paired with a nontrivial character forces α = −α
        twists[0].chi = twists[1].chi.clone();
        let pr = residue_primes(&k, 5).unwrap().remove(0);
        assert_eq!(papier_coset(&k, &twists, &eps, 3, &pr, 2), Err(ImageError::NoSolution));
    }
}
