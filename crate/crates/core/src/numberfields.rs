//! Number fields `Q[x]/(P)` in a power basis, automorphisms given by the image
//! of the root, primes of the equation order above unramified `p`, and
//! decomposition groups.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::finitegroups::FiniteRing;
use crate::fpoly::{Fp, DEFAULT_SEED};
use crate::zpoly;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NfError {
    #[error("defining polynomial must be monic with degree >= 1")]
    NotMonic,
    #[error("defining polynomial is reducible over Q")]
    NotIrreducible,
    #[error("element has {got} coordinates, field degree is {want}")]
    WrongLength { got: usize, want: usize },
    #[error("{p} divides the polynomial discriminant or is not prime")]
    RamifiedOrBadPoly { p: u64 },
    #[error("a coordinate denominator is divisible by {p}")]
    DenominatorAtP { p: u64 },
    #[error("image of the root is not a root of the defining polynomial")]
    NotAnAutomorphism,
    #[error("automorphism list is not closed under composition")]
    NotAGroup,
    #[error("division by zero")]
    DivisionByZero,
}

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Element of a number field: power-basis coordinates, constant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NfElem(pub Vec<Rat>);

impl NfElem {
    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rat> {
        self.0.iter().skip(1).all(|c| c.is_zero()).then(|| self.0[0].clone())
    }

    /// Common denominator of all coordinates.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberFieldQ {
    poly: Vec<BigInt>,
    disc: BigInt,
}

impl NumberFieldQ {
    pub fn new(poly: &[BigInt]) -> Result<Self, NfError> {
        let poly = zpoly::trim(poly.to_vec());
        if poly.len() < 2 || !poly.last().unwrap().is_one() {
            return Err(NfError::NotMonic);
        }
        if poly.len() > 2 && !zpoly::is_irreducible(&poly) {
            return Err(NfError::NotIrreducible);
        }
        let disc = if poly.len() == 2 { BigInt::one() } else { zpoly::discriminant(&poly) };
        Ok(NumberFieldQ { poly, disc })
    }

    pub fn from_i64(poly: &[i64]) -> Result<Self, NfError> {
        Self::new(&zpoly::from_i64(poly))
    }

    /// `Q` presented as `Q[x]/(x)`.
    pub fn rationals() -> Self {
        NumberFieldQ { poly: vec![BigInt::zero(), BigInt::one()], disc: BigInt::one() }
    }

    /// `Q(ζ_m)` presented by the cyclotomic polynomial.
    pub fn cyclotomic(m: u64) -> Self {
        let poly = zpoly::cyclotomic(m);
        let disc = if poly.len() == 2 { BigInt::one() } else { zpoly::discriminant(&poly) };
        NumberFieldQ { poly, disc }
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn zero(&self) -> NfElem {
        NfElem(vec![Rat::zero(); self.degree()])
    }

    pub fn one(&self) -> NfElem {
        self.from_rational(Rat::one())
    }

    pub fn from_int(&self, n: i64) -> NfElem {
        self.from_rational(rat(n))
    }

    pub fn from_rational(&self, r: Rat) -> NfElem {
        let mut v = vec![Rat::zero(); self.degree()];
        v[0] = r;
        NfElem(v)
    }

    /// The class of `x`; in `Q = Q[x]/(x − c)` this is the rational `c`.
    pub fn generator(&self) -> NfElem {
        if self.degree() == 1 {
            return self.from_rational(Rat::from_integer(-self.poly[0].clone()));
        }
        let mut v = vec![Rat::zero(); self.degree()];
        v[1] = Rat::one();
        NfElem(v)
    }

    pub fn element(&self, coords: Vec<Rat>) -> Result<NfElem, NfError> {
        if coords.len() != self.degree() {
            return Err(NfError::WrongLength { got: coords.len(), want: self.degree() });
        }
        Ok(NfElem(coords))
    }

    pub fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &NfElem) -> NfElem {
        NfElem(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, c: &Rat, a: &NfElem) -> NfElem {
        NfElem(a.0.iter().map(|x| x * c).collect())
    }

    /// Reduce a polynomial with rational coefficients modulo the defining polynomial.
    pub fn reduce_poly(&self, mut v: Vec<Rat>) -> NfElem {
        let d = self.degree();
        while v.len() > d {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = v.len() - d;
            for (j, c) in self.poly.iter().take(d).enumerate() {
                v[k + j] -= &top * Rat::from_integer(c.clone());
            }
        }
        v.resize(d, Rat::zero());
        NfElem(v)
    }

    pub fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let d = self.degree();
        let mut out = vec![Rat::zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce_poly(out)
    }

    pub fn pow(&self, a: &NfElem, mut e: u64) -> NfElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `a`; column `j` holds `a·x^j`.
    pub fn mult_matrix(&self, a: &NfElem) -> Vec<Vec<Rat>> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut xj = self.one();
        let x = self.generator();
        for _ in 0..d {
            cols.push(self.mul(a, &xj).0);
            xj = self.mul(&xj, &x);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn norm(&self, a: &NfElem) -> Rat {
        rat_det(self.mult_matrix(a))
    }

    pub fn trace(&self, a: &NfElem) -> Rat {
        let m = self.mult_matrix(a);
        (0..self.degree()).map(|i| m[i][i].clone()).sum()
    }

    pub fn inv(&self, a: &NfElem) -> Result<NfElem, NfError> {
        let m = self.mult_matrix(a);
        let mut rhs = vec![Rat::zero(); self.degree()];
        rhs[0] = Rat::one();
        rat_solve(m, rhs).map(NfElem).ok_or(NfError::DivisionByZero)
    }

    pub fn div(&self, a: &NfElem, b: &NfElem) -> Result<NfElem, NfError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Evaluate a polynomial with integer coefficients at an element.
    pub fn eval_int_poly(&self, poly: &[BigInt], a: &NfElem) -> NfElem {
        poly.iter().rev().fold(self.zero(), |acc, c| {
            let t = self.mul(&acc, a);
            self.add(&t, &self.from_rational(Rat::from_integer(c.clone())))
        })
    }

    /// Evaluate a polynomial given by element coefficients in another field.
    pub fn eval_coords_at(&self, coords: &[Rat], a: &NfElem) -> NfElem {
        coords.iter().rev().fold(self.zero(), |acc, c| {
            let t = self.mul(&acc, a);
            self.add(&t, &self.from_rational(c.clone()))
        })
    }

    /// Order `m` of `a` as a root of unity, searching `m <= limit`.
    pub fn root_of_unity_order(&self, a: &NfElem, limit: u64) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let mut x = a.clone();
        for m in 1..=limit {
            if x == self.one() {
                return Some(m);
            }
            x = self.mul(&x, a);
        }
        None
    }
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rat_det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rat::zero();
        };
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Solve `m·x = rhs`; `None` if singular.
pub fn rat_solve(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    for k in 0..n {
        let piv = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(piv, k);
        rhs.swap(piv, k);
        let inv = m[k][k].recip();
        for j in k..n {
            m[k][j] *= &inv;
        }
        rhs[k] *= &inv;
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in k..n {
                    let t = &f * &m[k][j];
                    m[i][j] -= t;
                }
                let t = &f * &rhs[k];
                rhs[i] -= t;
            }
        }
    }
    Some(rhs)
}

/// Rank of a matrix over a number field.
pub fn nf_rank(field: &NumberFieldQ, mut rows: Vec<Vec<NfElem>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = field.inv(&rows[rank][col]).expect("nonzero");
        for j in 0..ncols {
            rows[rank][j] = field.mul(&rows[rank][j], &inv);
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let c = rows[i][col].clone();
                for j in 0..ncols {
                    let t = field.mul(&c, &rows[rank][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A field automorphism, stored as the image of the power-basis root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldAutomorphism {
    image: NfElem,
}

impl FieldAutomorphism {
    pub fn new(field: &NumberFieldQ, image: NfElem) -> Result<Self, NfError> {
        if image.0.len() != field.degree() {
            return Err(NfError::WrongLength { got: image.0.len(), want: field.degree() });
        }
        if !field.eval_int_poly(field.poly(), &image).is_zero() {
            return Err(NfError::NotAnAutomorphism);
        }
        Ok(FieldAutomorphism { image })
    }

    pub fn identity(field: &NumberFieldQ) -> Self {
        FieldAutomorphism { image: field.generator() }
    }

    pub fn image(&self) -> &NfElem {
        &self.image
    }

    pub fn is_identity(&self, field: &NumberFieldQ) -> bool {
        self.image == field.generator()
    }

    pub fn apply(&self, field: &NumberFieldQ, a: &NfElem) -> NfElem {
        if field.degree() == 1 {
            return a.clone();
        }
        field.eval_coords_at(&a.0, &self.image)
    }

    /// `self ∘ other`.
    pub fn compose(&self, field: &NumberFieldQ, other: &Self) -> Self {
        FieldAutomorphism { image: self.apply(field, &other.image) }
    }
}

/// Check that a list of automorphisms is closed under composition.
pub fn check_group(field: &NumberFieldQ, gamma: &[FieldAutomorphism]) -> Result<(), NfError> {
    for a in gamma {
        for b in gamma {
            if !gamma.contains(&a.compose(field, b)) {
                return Err(NfError::NotAGroup);
            }
        }
    }
    Ok(())
}

/// A prime of the equation order above an unramified `p`, given by a monic
/// irreducible factor `g` of the defining polynomial modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePrime {
    pub p: u64,
    pub g: Vec<u64>,
    pub ring: FiniteRing,
}

impl ResiduePrime {
    pub fn residue_degree(&self) -> u32 {
        (self.g.len() - 1) as u32
    }

    /// Image of the root `x` in the residue field.
    pub fn root_image(&self) -> u64 {
        if self.g.len() == 2 {
            (self.p - self.g[0]) % self.p
        } else {
            self.p
        }
    }
}

fn rat_mod_p(c: &Rat, p: u64) -> Result<u64, NfError> {
    let pb = BigInt::from(p);
    let den = c.denom().mod_floor(&pb).to_u64().unwrap();
    let di = crate::arith::inv_mod(den, p).ok_or(NfError::DenominatorAtP { p })?;
    let num = c.numer().mod_floor(&pb).to_u64().unwrap();
    Ok(crate::arith::mul_mod(num, di, p))
}

/// All primes above `p`, sorted by (degree, factor coefficients).
pub fn residue_primes(field: &NumberFieldQ, p: u64) -> Result<Vec<ResiduePrime>, NfError> {
    if !crate::arith::is_prime(p) || (field.disc.clone() % BigInt::from(p)).is_zero() {
        return Err(NfError::RamifiedOrBadPoly { p });
    }
    let fp = Fp::new(p);
    let pb = BigInt::from(p);
    let poly: Vec<u64> = field.poly.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    let mut out = Vec::new();
    for (g, mult) in fp.factor_seeded(&poly, DEFAULT_SEED) {
        if mult != 1 {
            return Err(NfError::RamifiedOrBadPoly { p });
        }
        let ring = FiniteRing::field_with_modulus(p, &g).map_err(|_| NfError::RamifiedOrBadPoly { p })?;
        out.push(ResiduePrime { p, g, ring });
    }
    Ok(out)
}

/// Reduction `O → F_p[x]/(g)` at a residue prime.
pub fn reduce(_field: &NumberFieldQ, a: &NfElem, prime: &ResiduePrime) -> Result<u64, NfError> {
    let ring = &prime.ring;
    let x = prime.root_image();
    let mut acc = 0u64;
    for c in a.0.iter().rev() {
        let cm = rat_mod_p(c, prime.p)?;
        acc = ring.add(ring.mul(acc, x), cm);
    }
    Ok(acc)
}

/// Evaluate `g` (coefficients mod p) at a residue-field element.
fn eval_mod_poly(ring: &FiniteRing, g: &[u64], y: u64) -> u64 {
    g.iter().rev().fold(0, |acc, &c| ring.add(ring.mul(acc, y), c))
}

/// Index in `primes` of `γ(𝔭)`.
pub fn image_prime(
    field: &NumberFieldQ,
    gamma: &FieldAutomorphism,
    prime: &ResiduePrime,
    primes: &[ResiduePrime],
) -> Result<usize, NfError> {
    for (i, q) in primes.iter().enumerate() {
        let y = reduce(field, gamma.image(), q)?;
        if eval_mod_poly(&q.ring, &prime.g, y) == 0 {
            return Ok(i);
        }
    }
    Err(NfError::NotAnAutomorphism)
}

/// Indices of the elements of `gamma` that stabilize `prime`.
pub fn decomposition_group(
    field: &NumberFieldQ,
    gamma: &[FieldAutomorphism],
    prime: &ResiduePrime,
) -> Result<Vec<usize>, NfError> {
    check_group(field, gamma)?;
    let mut out = Vec::new();
    for (i, g) in gamma.iter().enumerate() {
        let y = reduce(field, g.image(), prime)?;
        if eval_mod_poly(&prime.ring, &prime.g, y) == 0 {
            out.push(i);
        }
    }
    Ok(out)
}

/// Γ-orbits on `primes`, each a sorted list of indices, ordered by first index.
pub fn prime_orbits(
    field: &NumberFieldQ,
    gamma: &[FieldAutomorphism],
    primes: &[ResiduePrime],
) -> Result<Vec<Vec<usize>>, NfError> {
    let mut seen = vec![false; primes.len()];
    let mut out = Vec::new();
    for i in 0..primes.len() {
        if seen[i] {
            continue;
        }
        let mut orbit = Vec::new();
        for g in gamma {
            let j = image_prime(field, g, &primes[i], primes)?;
            if !orbit.contains(&j) {
                orbit.push(j);
            }
        }
        orbit.sort_unstable();
        for &j in &orbit {
            seen[j] = true;
        }
        out.push(orbit);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueFlags {
    pub f_loc_equals_l_loc: bool,
    pub residue_degree: u32,
}

pub fn residue_equality_flags(
    field: &NumberFieldQ,
    gamma: &[FieldAutomorphism],
    prime: &ResiduePrime,
) -> Result<ResidueFlags, NfError> {
    let d = decomposition_group(field, gamma, prime)?;
    Ok(ResidueFlags { f_loc_equals_l_loc: d.len() == 1, residue_degree: prime.residue_degree() })
}

/// Reduce a residue-field element's action: `y ↦ reduce(γ)(y)` as an
/// `F_p`-linear map on `F_p[x]/(g)`, for `γ` in the decomposition group.
pub fn residue_action_matrix(
    field: &NumberFieldQ,
    gamma: &FieldAutomorphism,
    prime: &ResiduePrime,
) -> Result<Vec<Vec<u64>>, NfError> {
    let ring = &prime.ring;
    let f = prime.residue_degree() as usize;
    let y = reduce(field, gamma.image(), prime)?;
    // columns: images of the basis x^j, i.e. y^j
    let mut cols = Vec::with_capacity(f);
    let mut yj = 1u64;
    for _ in 0..f {
        cols.push(ring.coeffs(yj));
        yj = ring.mul(yj, y);
    }
    Ok((0..f).map(|i| (0..f).map(|j| cols[j][i]).collect()).collect())
}

/// Largest absolute value among numerators and denominators, for diagnostics.
pub fn height(a: &NfElem) -> BigInt {
    a.0.iter().map(|c| c.numer().abs().max(c.denom().abs())).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_sqrt3() -> NumberFieldQ {
        NumberFieldQ::from_i64(&[-3, 0, 1]).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(NumberFieldQ::from_i64(&[-4, 0, 1]), Err(NfError::NotIrreducible));
        assert_eq!(NumberFieldQ::from_i64(&[1, 0, 2]), Err(NfError::NotMonic));
        let k = q_sqrt3();
        assert_eq!(k.discriminant(), &BigInt::from(12));
        let s = k.generator();
        assert_eq!(k.mul(&s, &s), k.from_int(3));
        let inv = k.inv(&k.add(&s, &k.one())).unwrap();
        // 1/(1+√3) = (√3 − 1)/2
        assert_eq!(inv, NfElem(vec![Rat::new((-1).into(), 2.into()), Rat::new(1.into(), 2.into())]));
        assert_eq!(k.norm(&s), rat(-3));
    }

    #[test]
    fn primes_of_q_sqrt3() {
        let k = q_sqrt3();
        let p11 = residue_primes(&k, 11).unwrap();
        assert_eq!(p11.len(), 2);
        assert!(p11.iter().all(|q| q.residue_degree() == 1));
        let p5 = residue_primes(&k, 5).unwrap();
        assert_eq!(p5.len(), 1);
        assert_eq!(p5[0].residue_degree(), 2);
        assert!(residue_primes(&k, 3).is_err());
        assert!(residue_primes(&k, 2).is_err());
        // (1+√3)/2 at the prime with root 5 ↦ 3
        let half = NfElem(vec![Rat::new(1.into(), 2.into()), Rat::new(1.into(), 2.into())]);
        let q5 = p11.iter().find(|q| q.root_image() == 5).unwrap();
        assert_eq!(reduce(&k, &half, q5), Ok(3));
        assert_eq!(reduce(&k, &k.generator(), &p5[0]), Ok(5));
    }

    #[test]
    fn decomposition_groups() {
        let k = q_sqrt3();
        let conj = FieldAutomorphism::new(&k, k.neg(&k.generator())).unwrap();
        let gamma = vec![FieldAutomorphism::identity(&k), conj];
        let p5 = residue_primes(&k, 5).unwrap();
        assert_eq!(decomposition_group(&k, &gamma, &p5[0]).unwrap(), vec![0, 1]);
        let p11 = residue_primes(&k, 11).unwrap();
        assert_eq!(decomposition_group(&k, &gamma, &p11[0]).unwrap(), vec![0]);
        assert_eq!(prime_orbits(&k, &gamma, &p11).unwrap(), vec![vec![0, 1]]);
        let flags = residue_equality_flags(&k, &gamma, &p5[0]).unwrap();
        assert!(!flags.f_loc_equals_l_loc);
        assert!(FieldAutomorphism::new(&k, k.from_int(2)).is_err());
    }
}
