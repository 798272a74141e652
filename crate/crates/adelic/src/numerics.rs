//! Floating-point embeddings of coefficient fields: complex conjugation and
//! the advisory coefficient-size check.

use adelic_core::numberfields::{FieldAutomorphism, NfElem, NumberFieldQ, Rat};
use nalgebra::{Complex, DMatrix};
use num_traits::ToPrimitive;

const TOL: f64 = 1e-6;

fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Complex roots of the defining polynomial (eigenvalues of the companion matrix).
pub fn embeddings(field: &NumberFieldQ) -> Vec<Complex<f64>> {
    let poly: Vec<f64> = field.poly().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let n = poly.len() - 1;
    if n == 1 {
        return vec![Complex::new(-poly[0], 0.0)];
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -poly[i];
    }
    let mut roots: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(b.im.total_cmp(&a.im)));
    roots
}

pub fn eval(a: &NfElem, root: Complex<f64>) -> Complex<f64> {
    a.coords().iter().rev().fold(Complex::new(0.0, 0.0), |acc, c| acc * root + Complex::new(to_f64(c), 0.0))
}

/// The automorphism acting as complex conjugation under the first embedding
/// with positive imaginary part (the identity for totally real fields).
pub fn complex_conjugation(field: &NumberFieldQ, candidates: &[FieldAutomorphism]) -> Option<FieldAutomorphism> {
    let roots = embeddings(field);
    let Some(alpha) = roots.iter().copied().find(|r| r.im > TOL) else {
        return Some(FieldAutomorphism::identity(field));
    };
    candidates.iter().find(|s| (eval(s.image(), alpha) - alpha.conj()).norm() < TOL * (1.0 + alpha.norm())).cloned()
}

/// Primes `ℓ ∤ N` where some embedding of `a_ℓ` exceeds `2ℓ^{(k−1)/2}`.
pub fn ramanujan_violations<'a>(
    field: &NumberFieldQ,
    level: u64,
    weight: u32,
    ap: impl Iterator<Item = (&'a u64, &'a NfElem)>,
) -> Vec<u64> {
    let roots = embeddings(field);
    let mut out = Vec::new();
    for (&l, a) in ap {
        if level.is_multiple_of(l) {
            continue;
        }
        let bound = 2.0 * (l as f64).powf((weight as f64 - 1.0) / 2.0) + TOL;
        if roots.iter().any(|&r| eval(a, r).norm() > bound) {
            out.push(l);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugation_on_eisenstein_field() {
        let k = NumberFieldQ::from_i64(&[1, -1, 1]).unwrap();
        let conj = FieldAutomorphism::new(&k, k.sub(&k.one(), &k.generator())).unwrap();
        let id = FieldAutomorphism::identity(&k);
        assert_eq!(complex_conjugation(&k, &[id, conj.clone()]), Some(conj));
    }

    #[test]
    fn real_field_uses_identity() {
        let k = NumberFieldQ::from_i64(&[-3, 0, 1]).unwrap();
        assert_eq!(complex_conjugation(&k, &[]), Some(FieldAutomorphism::identity(&k)));
    }
}
