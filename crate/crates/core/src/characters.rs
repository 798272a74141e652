//! The unit group `(Z/NZ)^×`, roots of unity in exponent form, and Dirichlet
//! characters stored by their values on a fixed generator list.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{
    discrete_log, divisors, euler_phi, factorize, gcd, inv_mod, kronecker, lcm, pow_mod, primitive_root_prime_power,
};
use crate::finitegroups::FiniteRing;

/// Value tables are only materialized below this modulus.
pub const VALUE_TABLE_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error("{u} is not a unit modulo {modulus}")]
    NotCoprime { u: u64, modulus: u64 },
    #[error("generator image has order not dividing the generator order")]
    BadImage,
    #[error("a root of unity of order {order} does not reduce into a field of size {q}")]
    NotInField { order: u64, q: u64 },
    #[error("modulus {0} is not a multiple of {1}")]
    NotAMultiple(u64, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Component {
    p: u64,
    pe: u64,
    /// local generators (mod pe) and their orders
    local: Vec<(u64, u64)>,
}

/// `(Z/NZ)^×` with a CRT generator list ordered by prime.
///
/// For `2^k`: nothing when `k = 1`, the generator 3 when `k = 2`, and `−1, 5`
/// when `k >= 3`. Odd prime powers use the smallest primitive root. Each local
/// generator is lifted to be `1` modulo the other prime-power parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroupZN {
    modulus: u64,
    gens: Vec<u64>,
    orders: Vec<u64>,
    components: Vec<Component>,
}

pub fn unit_group(n: u64) -> UnitGroupZN {
    assert!(n >= 1, "modulus must be positive");
    let mut components = Vec::new();
    for (p, e) in factorize(n) {
        let pe = p.pow(e);
        let local = if p == 2 {
            match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(pe - 1, 2), (5, pe / 4)],
            }
        } else {
            vec![(primitive_root_prime_power(p, e), pe / p * (p - 1))]
        };
        components.push(Component { p, pe, local });
    }
    let mut gens = Vec::new();
    let mut orders = Vec::new();
    for (i, c) in components.iter().enumerate() {
        for &(g, o) in &c.local {
            let residues: Vec<u64> =
                components.iter().enumerate().map(|(j, d)| if i == j { g } else { 1 % d.pe }).collect();
            let moduli: Vec<u64> = components.iter().map(|d| d.pe).collect();
            gens.push(crate::arith::crt(&residues, &moduli) % n.max(1));
            orders.push(o);
        }
    }
    UnitGroupZN { modulus: n, gens, orders, components }
}

impl UnitGroupZN {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_unit(&self, u: u64) -> bool {
        gcd(u % self.modulus, self.modulus) == 1 || self.modulus == 1
    }

    /// Exponent vector of a unit with respect to the generator list.
    pub fn encode(&self, u: u64) -> Result<Vec<u64>, CharError> {
        if !self.is_unit(u) {
            return Err(CharError::NotCoprime { u, modulus: self.modulus });
        }
        let mut out = Vec::with_capacity(self.gens.len());
        for c in &self.components {
            let x = u % c.pe;
            if c.p == 2 {
                match c.local.len() {
                    0 => {}
                    1 => out.push(if x % 4 == 3 { 1 } else { 0 }),
                    _ => {
                        let (sign, y) = if x % 4 == 3 { (1, c.pe - x) } else { (0, x) };
                        out.push(sign);
                        out.push(discrete_log(5, y, c.pe, c.pe / 4).expect("5 generates"));
                    }
                }
            } else {
                let (g, o) = c.local[0];
                out.push(discrete_log(g, x, c.pe, o).expect("primitive root"));
            }
        }
        Ok(out)
    }

    pub fn decode(&self, exps: &[u64]) -> u64 {
        self.gens.iter().zip(exps).fold(1 % self.modulus, |acc, (&g, &e)| {
            crate::arith::mul_mod(acc, pow_mod(g, e, self.modulus), self.modulus)
        })
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.modulus.max(1)).filter(move |&u| self.is_unit(u))
    }
}

/// `e^{2πi·exp/order}` stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u64,
    exp: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exp: 0 };

    pub fn new(order: u64, exp: i64) -> Self {
        assert!(order >= 1);
        let e = (exp as i128).rem_euclid(order as i128) as u64;
        let g = gcd(e, order);
        if e == 0 {
            return Self::ONE;
        }
        RootOfUnity { order: order / g, exp: e / g }
    }

    pub fn minus_one() -> Self {
        RootOfUnity { order: 2, exp: 1 }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exp(&self) -> u64 {
        self.exp
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let m = lcm(self.order, other.order);
        let e = self.exp * (m / self.order) + other.exp * (m / other.order);
        RootOfUnity::new(m, (e % m) as i64)
    }

    pub fn pow(&self, k: i64) -> RootOfUnity {
        let e = (self.exp as i128 * k as i128).rem_euclid(self.order as i128);
        RootOfUnity::new(self.order, e as i64)
    }

    pub fn inv(&self) -> RootOfUnity {
        self.pow(-1)
    }

    /// Exponent relative to a primitive `m`-th root, when the order divides `m`.
    pub fn exp_in(&self, m: u64) -> Option<u64> {
        m.is_multiple_of(self.order).then(|| self.exp * (m / self.order))
    }

    /// `(exp, order)`: the value as a fraction of a full turn.
    pub fn as_fraction(&self) -> (u64, u64) {
        (self.exp, self.order)
    }
}

/// True iff the root of unity is `1` modulo every prime above `p`, which
/// happens exactly when its order is a power of `p`.
pub fn is_one_mod_p(z: &RootOfUnity, p: u64) -> bool {
    let mut m = z.order();
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// Image of a root of unity in a finite field of characteristic `p`: the
/// `p`-power part dies and `ζ_m ↦ g^{(q−1)/m}` for the canonical generator `g`.
pub fn reduce_root_of_unity(z: &RootOfUnity, ring: &FiniteRing) -> Result<u64, CharError> {
    let p = ring.p();
    let q = ring.residue_size();
    let m = z.order();
    let mut pa = 1;
    while m.is_multiple_of(pa * p) {
        pa *= p;
    }
    let m1 = m / pa;
    if !(q - 1).is_multiple_of(m1) {
        return Err(CharError::NotInField { order: m, q });
    }
    if m1 == 1 {
        return Ok(1);
    }
    // ζ = ζ_{p^a}^{e1} ζ_{m1}^{e2} with e ≡ e2·p^a (mod m1)
    let e2 = crate::arith::mul_mod(z.exp() % m1, inv_mod(pa % m1, m1).expect("coprime"), m1);
    let g = ring.generator().ok_or(CharError::NotInField { order: m, q })?;
    Ok(ring.pow(ring.pow(g, (q - 1) / m1), e2))
}

/// Dirichlet character determined by its values on the generators of
/// [`unit_group`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    group: UnitGroupZN,
    images: Vec<RootOfUnity>,
}

impl DirichletCharacter {
    pub fn trivial(n: u64) -> Self {
        let group = unit_group(n);
        let images = vec![RootOfUnity::ONE; group.gens.len()];
        DirichletCharacter { group, images }
    }

    pub fn from_images(n: u64, images: Vec<RootOfUnity>) -> Result<Self, CharError> {
        let group = unit_group(n);
        if images.len() != group.gens.len() || images.iter().zip(&group.orders).any(|(z, &o)| o % z.order() != 0) {
            return Err(CharError::BadImage);
        }
        Ok(DirichletCharacter { group, images })
    }

    /// The quadratic character `(D/·)` of modulus `|D|`.
    pub fn kronecker(d: i64) -> Self {
        let n = d.unsigned_abs();
        let group = unit_group(n);
        let images = group
            .gens
            .iter()
            .map(|&g| if kronecker(d, g) == -1 { RootOfUnity::minus_one() } else { RootOfUnity::ONE })
            .collect();
        DirichletCharacter { group, images }
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn group(&self) -> &UnitGroupZN {
        &self.group
    }

    pub fn images(&self) -> &[RootOfUnity] {
        &self.images
    }

    pub fn eval(&self, u: u64) -> Result<RootOfUnity, CharError> {
        let exps = self.group.encode(u % self.modulus().max(1))?;
        Ok(self.images.iter().zip(exps).fold(RootOfUnity::ONE, |acc, (z, e)| acc.mul(&z.pow(e as i64))))
    }

    /// Value at an arbitrary integer, `None` when not coprime to the modulus.
    pub fn eval_i64(&self, u: i64) -> Option<RootOfUnity> {
        let m = self.modulus();
        self.eval(crate::arith::reduce_i64(u, m.max(1))).ok()
    }

    pub fn order(&self) -> u64 {
        self.images.iter().fold(1, |acc, z| lcm(acc, z.order()))
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|z| z.is_one())
    }

    /// Whether the character takes only the values ±1 and is nontrivial.
    pub fn is_quadratic(&self) -> bool {
        self.order() == 2
    }

    pub fn parity_is_odd(&self) -> bool {
        self.modulus() > 2 && self.eval(self.modulus() - 1).map(|z| !z.is_one()).unwrap_or(false)
    }

    /// The same character viewed modulo a multiple `m` of its modulus.
    pub fn extend(&self, m: u64) -> Result<Self, CharError> {
        if !m.is_multiple_of(self.modulus()) {
            return Err(CharError::NotAMultiple(m, self.modulus()));
        }
        let group = unit_group(m);
        let images = group.gens.iter().map(|&g| self.eval(g % self.modulus())).collect::<Result<Vec<_>, _>>()?;
        Ok(DirichletCharacter { group, images })
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = lcm(self.modulus(), other.modulus());
        let a = self.extend(m).expect("lcm");
        let b = other.extend(m).expect("lcm");
        let images = a.images.iter().zip(&b.images).map(|(x, y)| x.mul(y)).collect();
        DirichletCharacter { group: a.group, images }
    }

    pub fn pow(&self, k: i64) -> Self {
        DirichletCharacter { group: self.group.clone(), images: self.images.iter().map(|z| z.pow(k)).collect() }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// Galois conjugate `ζ ↦ ζ^t` applied to every value.
    pub fn conjugate_by(&self, t: i64) -> Self {
        self.pow(t)
    }

    /// Smallest `d | N` such that the character is trivial on units `≡ 1 mod d`.
    pub fn conductor(&self) -> u64 {
        let n = self.modulus();
        for d in divisors(n) {
            let trivial = (0..n / d).all(|t| {
                let u = (1 + d * t) % n;
                !self.group.is_unit(u) || self.eval(u).map(|z| z.is_one()).unwrap_or(true)
            });
            if trivial {
                return d;
            }
        }
        n
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        let c = self.conductor();
        let n = self.modulus();
        let group = unit_group(c);
        let images = group
            .gens
            .iter()
            .map(|&g| {
                let u =
                    (0..n / c.max(1)).map(|t| g + c * t).find(|&u| self.group.is_unit(u)).expect("some lift is a unit");
                self.eval(u).expect("unit")
            })
            .collect();
        DirichletCharacter { group, images }
    }

    /// Every character modulo `n`, in lexicographic order of generator exponents.
    pub fn all(n: u64) -> Vec<Self> {
        let group = unit_group(n);
        let mut out = Vec::with_capacity(euler_phi(n) as usize);
        let k = group.gens.len();
        let mut exps = vec![0u64; k];
        loop {
            let images = exps.iter().zip(&group.orders).map(|(&e, &o)| RootOfUnity::new(o, e as i64)).collect();
            out.push(DirichletCharacter { group: group.clone(), images });
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                exps[i] += 1;
                if exps[i] < group.orders[i] {
                    break;
                }
                exps[i] = 0;
            }
        }
    }

    /// Full value table indexed by residue, `None` at non-units.
    pub fn value_table(&self) -> Option<Vec<Option<RootOfUnity>>> {
        let n = self.modulus();
        (n <= VALUE_TABLE_LIMIT).then(|| (0..n).map(|u| self.eval(u).ok()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_group_examples() {
        let g4 = unit_group(4);
        assert_eq!(g4.generators(), &[3]);
        assert_eq!(g4.orders(), &[2]);
        let g15 = unit_group(15);
        assert_eq!(g15.orders(), &[2, 4]);
        assert_eq!(g15.generators(), &[11, 7]);
        let g8 = unit_group(8);
        assert_eq!(g8.generators(), &[7, 5]);
        assert_eq!(g8.orders(), &[2, 2]);
        for n in 1..200 {
            let g = unit_group(n);
            assert_eq!(g.order(), euler_phi(n));
            for u in g.units() {
                assert_eq!(g.decode(&g.encode(u).unwrap()), u % n.max(1), "n={n} u={u}");
            }
        }
    }

    #[test]
    fn character_examples() {
        let chi = DirichletCharacter::kronecker(-4);
        assert_eq!(chi.eval(3).unwrap(), RootOfUnity::minus_one());
        assert_eq!(chi.conductor(), 4);
        assert_eq!(DirichletCharacter::trivial(12).conductor(), 1);
        assert_eq!(DirichletCharacter::all(15).len(), 8);
        let ext = chi.extend(12).unwrap();
        assert_eq!(ext.conductor(), 4);
        assert_eq!(ext.primitive(), chi);
        assert!(chi.parity_is_odd());
        assert!(matches!(chi.eval(2), Err(CharError::NotCoprime { .. })));
    }

    #[test]
    fn reduction_predicate() {
        assert!(is_one_mod_p(&RootOfUnity::ONE, 7));
        assert!(is_one_mod_p(&RootOfUnity::new(5, 1), 5));
        assert!(!is_one_mod_p(&RootOfUnity::new(4, 1), 7));
        let f5 = FiniteRing::prime_field(5).unwrap();
        // ζ_4 ↦ 2^((5-1)/4) = 2
        assert_eq!(reduce_root_of_unity(&RootOfUnity::new(4, 1), &f5), Ok(2));
        assert_eq!(reduce_root_of_unity(&RootOfUnity::new(10, 5), &f5), Ok(4));
        assert_eq!(reduce_root_of_unity(&RootOfUnity::new(5, 2), &f5), Ok(1));
    }
}
