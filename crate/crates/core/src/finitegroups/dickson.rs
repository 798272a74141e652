use alloc::vec::Vec;

use hashbrown::HashSet;

use super::closure::{Constraint, SubgroupClosure};
use super::mat2::Mat2;
use super::ring::FiniteRing;
use super::GroupError;

/// Isomorphism/conjugacy class of a subgroup of `PSL₂(F_q)` from Dickson's list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Psl2Class {
    Cyclic,
    Dihedral,
    A4,
    S4,
    A5,
    Psl2Subfield(u64),
    Pgl2Subfield(u64),
    BorelContained,
    Full,
}

pub fn psl2_order(q: u64) -> u64 {
    let g = if q.is_multiple_of(2) { 1 } else { 2 };
    q * (q * q - 1) / g
}

fn is_pm_identity(ring: &FiniteRing, m: &Mat2) -> bool {
    *m == Mat2::IDENTITY || ring.mat_neg(m) == Mat2::IDENTITY
}

fn psl2_element_order(ring: &FiniteRing, m: &Mat2) -> u64 {
    let mut x = *m;
    let mut k = 1;
    while !is_pm_identity(ring, &x) {
        x = ring.mat_mul(&x, m);
        k += 1;
    }
    k
}

fn fixes_point(ring: &FiniteRing, m: &Mat2, point: Option<u64>) -> bool {
    match point {
        // (1 : 0)
        None => m.c == 0,
        // (x : 1) is fixed iff a x + b = x (c x + d)
        Some(x) => {
            let lhs = ring.add(ring.mul(m.a, x), m.b);
            let rhs = ring.mul(x, ring.add(ring.mul(m.c, x), m.d));
            lhs == rhs
        }
    }
}

/// Classify an enumerated subgroup of `PSL₂(F_q)`, `p >= 5`.
///
/// Tests run in a fixed order (full, cyclic, dihedral, exceptional, Borel,
/// subfield) and the first match wins. A5 is reported only for honest
/// subgroups with `p ∤ |G|`; order-60 groups in characteristic 5 fall through
/// to the subfield test.
pub fn dickson_classify(sub: &SubgroupClosure) -> Result<Psl2Class, GroupError> {
    let amb = sub.ambient();
    if amb.len() != 1 || amb[0].tag != Constraint::PSL2 || !amb[0].ring.is_field() {
        return Err(GroupError::NotPsl2Ambient);
    }
    let ring = &amb[0].ring;
    let p = ring.p();
    if p < 5 {
        return Err(GroupError::SmallPrime { p });
    }
    let q = ring.size();
    let f = ring.residue_degree();
    let els = sub.elements()?;
    let n = els.len() as u64;
    if n == psl2_order(q) {
        return Ok(Psl2Class::Full);
    }
    let orders: Vec<u64> = els.iter().map(|e| psl2_element_order(ring, &e[0])).collect();
    let max = *orders.iter().max().unwrap_or(&1);
    if max == n {
        return Ok(Psl2Class::Cyclic);
    }
    if n.is_multiple_of(2) && n >= 4 {
        let half = n / 2;
        if let Some(pos) = orders.iter().position(|&o| o == half) {
            let x = els[pos][0];
            let mut cyc = HashSet::new();
            let mut y = Mat2::IDENTITY;
            for _ in 0..half {
                cyc.insert(ring.psl2_canonical(&y));
                y = ring.mat_mul(&y, &x);
            }
            let dihedral = els.iter().zip(&orders).all(|(e, &o)| cyc.contains(&e[0]) || o == 2);
            if dihedral {
                return Ok(Psl2Class::Dihedral);
            }
        }
    }
    if !n.is_multiple_of(p) {
        let set: HashSet<u64> = orders.iter().copied().collect();
        let only = |allowed: &[u64]| set.iter().all(|o| allowed.contains(o));
        match n {
            12 if only(&[1, 2, 3]) => return Ok(Psl2Class::A4),
            24 if only(&[1, 2, 3, 4]) => return Ok(Psl2Class::S4),
            60 if only(&[1, 2, 3, 5]) => return Ok(Psl2Class::A5),
            _ => {}
        }
    }
    let gens = sub.generators();
    let points = core::iter::once(None).chain((0..q).map(Some));
    for pt in points {
        if gens.iter().all(|g| fixes_point(ring, &g[0], pt)) {
            return Ok(Psl2Class::BorelContained);
        }
    }
    for f1 in 1..f {
        if !f.is_multiple_of(f1) {
            continue;
        }
        let q1 = p.pow(f1);
        if n == psl2_order(q1) {
            return Ok(Psl2Class::Psl2Subfield(q1));
        }
        if f.is_multiple_of(2 * f1) && n == q1 * (q1 * q1 - 1) {
            return Ok(Psl2Class::Pgl2Subfield(q1));
        }
    }
    Err(GroupError::Unclassified)
}

/// Whether a class tag is compatible with a subgroup order inside `PSL₂(F_q)`.
pub fn class_consistent(tag: Psl2Class, order: u64, q: u64) -> bool {
    let p = crate::arith::factorize(q)[0].0;
    let total = psl2_order(q);
    if order == 0 || !total.is_multiple_of(order) {
        return false;
    }
    match tag {
        Psl2Class::Full => order == total,
        Psl2Class::Cyclic => true,
        Psl2Class::Dihedral => order.is_multiple_of(2),
        Psl2Class::A4 => order == 12,
        Psl2Class::S4 => order == 24,
        Psl2Class::A5 => order == 60,
        Psl2Class::Psl2Subfield(q1) => order == psl2_order(q1),
        Psl2Class::Pgl2Subfield(q1) => order == q1 * (q1 * q1 - 1),
        // p-group extended by a cyclic group of order dividing (q-1)/2
        Psl2Class::BorelContained => {
            let pp = crate::arith::valuation(order, p);
            let rest = order / p.pow(pp);
            ((q - 1) / 2).is_multiple_of(rest)
        }
    }
}

/// Representatives of `PGL₂(F_q)` (first nonzero entry scaled to 1), `q <= 11`.
pub fn pgl2_elements(ring: &FiniteRing) -> Result<Vec<Mat2>, GroupError> {
    let q = ring.size();
    if q > 11 || !ring.is_field() {
        return Err(GroupError::Unsupported { q });
    }
    Ok(ring.gl2_elements().into_iter().filter(|m| m.entries().iter().find(|&&e| e != 0) == Some(&1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitegroups::closure::{closure, Factor, DEFAULT_BOUND};
    use alloc::vec;

    fn psl(ring: &FiniteRing) -> Vec<Factor> {
        vec![Factor::new(ring.clone(), Constraint::PSL2)]
    }

    #[test]
    fn small_cases() {
        let f5 = FiniteRing::prime_field(5).unwrap();
        let full =
            closure(vec![vec![Mat2::new(1, 1, 0, 1)], vec![Mat2::new(1, 0, 1, 1)]], psl(&f5), DEFAULT_BOUND).unwrap();
        assert_eq!(dickson_classify(&full), Ok(Psl2Class::Full));
        let cyc = closure(vec![vec![Mat2::new(1, 1, 0, 1)]], psl(&f5), DEFAULT_BOUND).unwrap();
        assert_eq!(cyc.order(), Some(5));
        assert_eq!(dickson_classify(&cyc), Ok(Psl2Class::Cyclic));
        assert_eq!(pgl2_elements(&f5).unwrap().len(), 120);
    }

    #[test]
    fn a5_inside_psl2_f11() {
        let f11 = FiniteRing::prime_field(11).unwrap();
        // search for a pair generating an order-60 subgroup
        let sl2 = f11.sl2_elements();
        let order_of = |m: &Mat2| psl2_element_order(&f11, m);
        let fives: Vec<Mat2> = sl2.iter().copied().filter(|m| order_of(m) == 5).collect();
        let twos: Vec<Mat2> = sl2.iter().copied().filter(|m| order_of(m) == 2).collect();
        let mut found = None;
        'outer: for x in &twos {
            for y in fives.iter().take(40) {
                let c = closure(vec![vec![*x], vec![*y]], psl(&f11), DEFAULT_BOUND).unwrap();
                if c.order() == Some(60) {
                    found = Some(c);
                    break 'outer;
                }
            }
        }
        let c = found.expect("PSL2(F11) contains A5");
        assert_eq!(dickson_classify(&c), Ok(Psl2Class::A5));
        assert!(class_consistent(Psl2Class::A5, 60, 11));
    }
}
