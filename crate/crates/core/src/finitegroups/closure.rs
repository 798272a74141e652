use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::mat2::Mat2;
use super::ring::FiniteRing;
use super::GroupError;

pub const DEFAULT_BOUND: u64 = 20_000_000;

/// Constraint defining one factor of an ambient product group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    GL2,
    SL2,
    /// `SL₂` modulo `±1`, elements stored as the smaller of `M` and `−M`.
    PSL2,
    /// The unit group of the ring, element `λ` stored as `diag(λ, 1)`.
    Units,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub ring: FiniteRing,
    pub tag: Constraint,
}

impl Factor {
    pub fn new(ring: FiniteRing, tag: Constraint) -> Self {
        Factor { ring, tag }
    }

    pub fn canonical(&self, m: &Mat2) -> Mat2 {
        match self.tag {
            Constraint::PSL2 => self.ring.psl2_canonical(m),
            _ => *m,
        }
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        let r = &self.ring;
        if !r.mat_in_ring(m) {
            return false;
        }
        match self.tag {
            Constraint::GL2 => r.is_unit(r.mat_det(m)),
            Constraint::SL2 | Constraint::PSL2 => r.mat_det(m) == 1,
            Constraint::Units => m.b == 0 && m.c == 0 && m.d == 1 && r.is_unit(m.a),
        }
    }

    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        match self.tag {
            Constraint::Units => Mat2::diag(self.ring.mul(x.a, y.a), 1),
            _ => self.canonical(&self.ring.mat_mul(x, y)),
        }
    }

    pub fn inv(&self, x: &Mat2) -> Mat2 {
        match self.tag {
            Constraint::Units => Mat2::diag(self.ring.inv(x.a).expect("unit"), 1),
            _ => self.canonical(&self.ring.mat_inv(x).expect("invertible")),
        }
    }

    pub fn identity(&self) -> Mat2 {
        Mat2::IDENTITY
    }

    /// Order of the full factor group.
    pub fn order(&self) -> u64 {
        let r = &self.ring;
        let q = r.residue_size();
        let lift = r.size() / q;
        let gl2 = lift.pow(4) * (q * q - 1) * (q * q - q);
        let units = r.unit_count();
        match self.tag {
            Constraint::GL2 => gl2,
            Constraint::SL2 => gl2 / units,
            Constraint::PSL2 => {
                if r.p() == 2 {
                    gl2 / units
                } else {
                    gl2 / units / 2
                }
            }
            Constraint::Units => units,
        }
    }
}

/// Element of an ambient product: one matrix per factor.
pub type Elem = Vec<Mat2>;

pub fn elem_mul(ambient: &[Factor], x: &[Mat2], y: &[Mat2]) -> Elem {
    ambient.iter().zip(x.iter().zip(y)).map(|(f, (a, b))| f.mul(a, b)).collect()
}

pub fn elem_inv(ambient: &[Factor], x: &[Mat2]) -> Elem {
    ambient.iter().zip(x).map(|(f, a)| f.inv(a)).collect()
}

pub fn elem_identity(ambient: &[Factor]) -> Elem {
    vec![Mat2::IDENTITY; ambient.len()]
}

pub fn ambient_order(ambient: &[Factor]) -> u128 {
    ambient.iter().map(|f| f.order() as u128).product()
}

/// A finite subgroup of a product of matrix groups, given by generators and
/// optionally enumerated.
#[derive(Clone, Debug)]
pub struct SubgroupClosure {
    ambient: Vec<Factor>,
    generators: Vec<Elem>,
    elements: Option<Vec<Elem>>,
    index: Option<HashMap<Elem, usize>>,
    bound: u64,
}

impl SubgroupClosure {
    /// A generator set checked against the ambient constraints, not yet enumerated.
    pub fn new(gens: Vec<Elem>, ambient: Vec<Factor>, bound: u64) -> Result<Self, GroupError> {
        if bound == 0 {
            return Err(GroupError::OverflowBound { bound });
        }
        let mut canon = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if g.len() != ambient.len() || !g.iter().zip(&ambient).all(|(m, f)| f.contains(m)) {
                return Err(GroupError::InvalidGenerator { index: i });
            }
            canon.push(g.iter().zip(&ambient).map(|(m, f)| f.canonical(m)).collect());
        }
        Ok(SubgroupClosure { ambient, generators: canon, elements: None, index: None, bound })
    }

    /// Breadth-first enumeration from the identity, generators tried in index order.
    pub fn enumerate(&mut self) -> Result<(), GroupError> {
        if self.elements.is_some() {
            return Ok(());
        }
        let id = elem_identity(&self.ambient);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for g in &self.generators {
                let y = elem_mul(&self.ambient, &x, g);
                if !index.contains_key(&y) {
                    if elements.len() as u64 >= self.bound {
                        return Err(GroupError::OverflowBound { bound: self.bound });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
        }
        self.elements = Some(elements);
        self.index = Some(index);
        Ok(())
    }

    pub fn ambient(&self) -> &[Factor] {
        &self.ambient
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn elements(&self) -> Result<&[Elem], GroupError> {
        self.elements.as_deref().ok_or(GroupError::NotEnumerated)
    }

    pub fn order(&self) -> Option<u64> {
        self.elements.as_ref().map(|e| e.len() as u64)
    }

    pub fn contains(&self, x: &[Mat2]) -> Result<bool, GroupError> {
        let index = self.index.as_ref().ok_or(GroupError::NotEnumerated)?;
        let canon: Elem = x.iter().zip(&self.ambient).map(|(m, f)| f.canonical(m)).collect();
        Ok(index.contains_key(&canon))
    }

    pub fn position(&self, x: &[Mat2]) -> Option<usize> {
        self.index.as_ref()?.get(x).copied()
    }

    pub fn ambient_order(&self) -> u128 {
        ambient_order(&self.ambient)
    }

    /// Image under projection to the listed factors, enumerated.
    pub fn project(&self, factors: &[usize]) -> Result<SubgroupClosure, GroupError> {
        let amb: Vec<Factor> = factors.iter().map(|&i| self.ambient[i].clone()).collect();
        let gens: Vec<Elem> = self.generators.iter().map(|g| factors.iter().map(|&i| g[i]).collect()).collect();
        let mut sub = SubgroupClosure::new(gens, amb, self.bound)?;
        sub.enumerate()?;
        Ok(sub)
    }

    /// Wrap an element set that is already known to be a subgroup. The set
    /// doubles as the generator list; `verify_subgroup` can confirm it.
    pub fn from_elements(elements: Vec<Elem>, ambient: Vec<Factor>, bound: u64) -> Result<Self, GroupError> {
        let mut c = SubgroupClosure::new(elements, ambient, bound)?;
        if c.generators.len() as u64 > bound {
            return Err(GroupError::OverflowBound { bound });
        }
        let mut index = HashMap::with_capacity(c.generators.len());
        let mut elements = Vec::with_capacity(c.generators.len());
        for g in &c.generators {
            if !index.contains_key(g) {
                index.insert(g.clone(), elements.len());
                elements.push(g.clone());
            }
        }
        c.elements = Some(elements);
        c.index = Some(index);
        Ok(c)
    }

    /// Check closure under products and inverses plus identity membership.
    pub fn verify_subgroup(&self) -> Result<bool, GroupError> {
        let els = self.elements()?;
        let id = elem_identity(&self.ambient);
        if !self.contains(&id)? {
            return Ok(false);
        }
        for x in els {
            if !self.contains(&elem_inv(&self.ambient, x))? {
                return Ok(false);
            }
            for g in &self.generators {
                if !self.contains(&elem_mul(&self.ambient, x, g))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Enumerate the closure of `gens` inside `ambient`.
pub fn closure(gens: Vec<Elem>, ambient: Vec<Factor>, bound: u64) -> Result<SubgroupClosure, GroupError> {
    let mut c = SubgroupClosure::new(gens, ambient, bound)?;
    c.enumerate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unipotents() -> Vec<Elem> {
        vec![vec![Mat2::new(1, 1, 0, 1)], vec![Mat2::new(1, 0, 1, 1)]]
    }

    #[test]
    fn sl2_f5_and_z25() {
        let f5 = FiniteRing::prime_field(5).unwrap();
        let c = closure(unipotents(), vec![Factor::new(f5, Constraint::SL2)], DEFAULT_BOUND).unwrap();
        assert_eq!(c.order(), Some(120));
        assert!(c.verify_subgroup().unwrap());
        let z25 = FiniteRing::residue(5, 2).unwrap();
        let c = closure(unipotents(), vec![Factor::new(z25, Constraint::SL2)], DEFAULT_BOUND).unwrap();
        assert_eq!(c.order(), Some(15000));
        assert_eq!(c.ambient_order(), 15000);
    }

    #[test]
    fn identity_and_errors() {
        let f5 = FiniteRing::prime_field(5).unwrap();
        let amb = vec![Factor::new(f5.clone(), Constraint::SL2)];
        let c = closure(vec![vec![Mat2::IDENTITY]], amb.clone(), 10).unwrap();
        assert_eq!(c.order(), Some(1));
        assert_eq!(
            closure(vec![vec![Mat2::diag(2, 1)]], amb.clone(), 10).unwrap_err(),
            GroupError::InvalidGenerator { index: 0 }
        );
        assert_eq!(closure(unipotents(), amb, 50).unwrap_err(), GroupError::OverflowBound { bound: 50 });
        let psl = vec![Factor::new(f5, Constraint::PSL2)];
        assert_eq!(closure(unipotents(), psl, 100).unwrap().order(), Some(60));
    }
}
