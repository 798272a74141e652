//! Newforms as coefficient tables over their coefficient field, inner twists
//! and their group law, self-twists, and twist-relation evidence for pairs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{factorize, gcd, is_prime, lcm, primes_up_to};
use crate::characters::{unit_group, CharError, DirichletCharacter, RootOfUnity};
use crate::numberfields::{FieldAutomorphism, NfElem, NfError, NumberFieldQ, Rat};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NewformError {
    #[error("character modulus {modulus} does not divide the level {level}")]
    CharacterModulus { modulus: u64, level: u64 },
    #[error("missing coefficient a_{0}")]
    MissingCoefficient(u64),
    #[error("character value for generator {0} is missing or inconsistent")]
    BadCharacterValue(usize),
    #[error("requested bound {requested} exceeds the coefficient bound {available}")]
    BoundTooLarge { requested: u64, available: u64 },
    #[error("primes up to {bound} do not determine characters modulo {modulus}")]
    BoundTooSmall { bound: u64, modulus: u64 },
    #[error("character conductor {conductor} violates the twist conductor rule for level {level}")]
    ConductorViolation { conductor: u64, level: u64 },
    #[error("detected inner twists are not closed under the group law")]
    NotClosed,
    #[error("coefficient fields differ and no composite presentation was supplied")]
    IncompatibleFields,
    #[error("invalid composite presentation")]
    BadComposite,
    #[error(transparent)]
    Field(#[from] NfError),
    #[error(transparent)]
    Character(#[from] CharError),
}

/// A Dirichlet character together with its generator values inside a number field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCharacter {
    pub chi: DirichletCharacter,
    pub values: Vec<NfElem>,
}

impl FieldCharacter {
    pub fn trivial(field: &NumberFieldQ, n: u64) -> Self {
        let chi = DirichletCharacter::trivial(n);
        let values = vec![field.one(); chi.images().len()];
        FieldCharacter { chi, values }
    }

    /// Values for a character of order <= 2 are forced to ±1.
    pub fn from_real(field: &NumberFieldQ, chi: DirichletCharacter) -> Option<Self> {
        let values = chi
            .images()
            .iter()
            .map(|z| match z.order() {
                1 => Some(field.one()),
                2 => Some(field.from_int(-1)),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(FieldCharacter { chi, values })
    }

    pub fn modulus(&self) -> u64 {
        self.chi.modulus()
    }

    /// Value at `u` as a field element; zero when `u` is not a unit.
    pub fn eval(&self, field: &NumberFieldQ, u: i64) -> NfElem {
        let m = self.modulus();
        let u = crate::arith::reduce_i64(u, m.max(1));
        match self.chi.group().encode(u) {
            Err(_) => field.zero(),
            Ok(exps) => self.values.iter().zip(exps).fold(field.one(), |acc, (v, e)| field.mul(&acc, &field.pow(v, e))),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.chi.is_trivial()
    }

    pub fn inv(&self, field: &NumberFieldQ) -> Self {
        FieldCharacter {
            chi: self.chi.inv(),
            values: self.values.iter().map(|v| field.inv(v).expect("root of unity")).collect(),
        }
    }

    /// `χ^σ`: apply a field automorphism to every value. The exponent form is
    /// recomputed by comparing against powers of the original value.
    pub fn conjugate(&self, field: &NumberFieldQ, sigma: &FieldAutomorphism) -> Self {
        let mut images = Vec::with_capacity(self.values.len());
        let mut values = Vec::with_capacity(self.values.len());
        for (z, v) in self.chi.images().iter().zip(&self.values) {
            let w = sigma.apply(field, v);
            let k = (0..z.order())
                .find(|&k| field.pow(v, k) == w)
                .expect("automorphisms permute roots of unity of a given order");
            images.push(z.pow(k as i64));
            values.push(w);
        }
        FieldCharacter { chi: DirichletCharacter::from_images(self.modulus(), images).expect("same orders"), values }
    }

    pub fn mul(&self, field: &NumberFieldQ, other: &Self) -> Self {
        let m = lcm(self.modulus(), other.modulus());
        let chi = self.chi.mul(&other.chi);
        let values = chi
            .group()
            .generators()
            .iter()
            .map(|&g| field.mul(&self.eval(field, g as i64), &other.eval(field, g as i64)))
            .collect();
        debug_assert_eq!(chi.modulus(), m);
        FieldCharacter { chi, values }
    }

    /// The same character viewed modulo a multiple of its modulus.
    pub fn extend(&self, field: &NumberFieldQ, m: u64) -> Result<Self, CharError> {
        let chi = self.chi.extend(m)?;
        let values = chi.group().generators().iter().map(|&g| self.eval(field, g as i64)).collect();
        Ok(FieldCharacter { chi, values })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Newform {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub character: FieldCharacter,
    pub field: NumberFieldQ,
    /// `a_ℓ` for every prime `ℓ <= bound`.
    pub ap: BTreeMap<u64, NfElem>,
    pub bound: u64,
    pub cm_disc: Option<i64>,
}

impl Newform {
    pub fn new(
        label: String,
        level: u64,
        weight: u32,
        character: FieldCharacter,
        field: NumberFieldQ,
        ap: BTreeMap<u64, NfElem>,
        cm_disc: Option<i64>,
    ) -> Result<Self, NewformError> {
        let modulus = character.modulus();
        if modulus == 0 || !level.is_multiple_of(modulus) {
            return Err(NewformError::CharacterModulus { modulus, level });
        }
        for (i, (z, v)) in character.chi.images().iter().zip(&character.values).enumerate() {
            if v.coords().len() != field.degree() || field.root_of_unity_order(v, z.order()) != Some(z.order()) {
                return Err(NewformError::BadCharacterValue(i));
            }
        }
        let bound = ap.keys().copied().max().unwrap_or(0);
        for l in primes_up_to(bound) {
            match ap.get(&l) {
                None => return Err(NewformError::MissingCoefficient(l)),
                Some(a) if a.coords().len() != field.degree() => {
                    return Err(NfError::WrongLength { got: a.coords().len(), want: field.degree() }.into())
                }
                _ => {}
            }
        }
        Ok(Newform { label, level, weight, character, field, ap, bound, cm_disc })
    }

    /// Modulus for twisting characters: `N` for odd level, `4N` otherwise.
    pub fn twist_modulus(&self) -> u64 {
        twist_modulus(self.level, self.level)
    }

    pub fn a(&self, l: u64) -> Option<&NfElem> {
        self.ap.get(&l)
    }

    /// `ε(ℓ)` as a field element.
    pub fn eps(&self, l: u64) -> NfElem {
        self.character.eval(&self.field, l as i64)
    }

    /// `a_n` reconstructed from the prime coefficients by Hecke multiplicativity.
    pub fn coefficient(&self, n: u64) -> Option<NfElem> {
        let field = &self.field;
        let mut acc = field.one();
        for (l, e) in factorize(n) {
            let al = self.ap.get(&l)?;
            let mut prev = field.one();
            let mut cur = al.clone();
            let coef = if self.level.is_multiple_of(l) {
                None
            } else {
                let lk = BigInt::from(l).pow(self.weight.saturating_sub(1));
                Some(field.scale(&Rat::from_integer(lk), &self.eps(l)))
            };
            for _ in 1..e {
                let next = match &coef {
                    None => field.mul(&cur, al),
                    Some(c) => field.sub(&field.mul(&cur, al), &field.mul(c, &prev)),
                };
                prev = cur;
                cur = next;
            }
            acc = field.mul(&acc, &cur);
        }
        Some(acc)
    }
}

pub fn twist_modulus(n1: u64, n2: u64) -> u64 {
    let m = lcm(n1, n2);
    if n1 % 2 == 1 && n2 % 2 == 1 {
        m
    } else {
        4 * m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerTwist {
    pub gamma: FieldAutomorphism,
    pub chi: FieldCharacter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub holds: bool,
    pub first_failure: Option<u64>,
}

fn check_conductor(level: u64, chi: &DirichletCharacter) -> Result<(), NewformError> {
    let c = chi.conductor();
    let cap = if level % 2 == 1 { level } else { 4 * level };
    if cap % c != 0 {
        return Err(NewformError::ConductorViolation { conductor: c, level });
    }
    Ok(())
}

/// Check `γ(a_ℓ) = χ(ℓ)·a_ℓ` for primes `ℓ <= bound` coprime to `N` and the
/// modulus of `χ`.
pub fn verify_inner_twist(
    f: &Newform,
    gamma: &FieldAutomorphism,
    chi: &FieldCharacter,
    bound: u64,
) -> Result<VerifyOutcome, NewformError> {
    if bound > f.bound {
        return Err(NewformError::BoundTooLarge { requested: bound, available: f.bound });
    }
    check_conductor(f.level, &chi.chi)?;
    let field = &f.field;
    for l in primes_up_to(bound) {
        if f.level.is_multiple_of(l) || chi.modulus().is_multiple_of(l) {
            continue;
        }
        let a = &f.ap[&l];
        let lhs = gamma.apply(field, a);
        let rhs = field.mul(&chi.eval(field, l as i64), a);
        if lhs != rhs {
            return Ok(VerifyOutcome { holds: false, first_failure: Some(l) });
        }
    }
    Ok(VerifyOutcome { holds: true, first_failure: None })
}

/// Whether the classes of primes `ℓ <= bound`, `ℓ ∤ m`, generate `(Z/m)^×`.
pub fn primes_generate_units(m: u64, bound: u64) -> bool {
    let group = unit_group(m);
    let target = group.order();
    let gens: Vec<u64> = primes_up_to(bound).into_iter().filter(|&l| gcd(l, m) == 1).map(|l| l % m).collect();
    let mut seen = hashbrown::HashSet::new();
    let mut queue = vec![1 % m.max(1)];
    seen.insert(1 % m.max(1));
    while let Some(x) = queue.pop() {
        for &g in &gens {
            let y = crate::arith::mul_mod(x, g, m.max(1));
            if seen.insert(y) {
                queue.push(y);
            }
        }
    }
    seen.len() as u64 == target
}

/// Smallest cyclic group of roots of unity containing `elems`, returned as a
/// generator and its order.
pub fn cyclic_span(field: &NumberFieldQ, elems: &[NfElem], limit: u64) -> Option<(NfElem, u64)> {
    let mut gen = field.one();
    let mut order = 1u64;
    for e in elems {
        let o = field.root_of_unity_order(e, limit)?;
        if order.is_multiple_of(o) {
            continue;
        }
        let m = lcm(order, o);
        // assemble an element of order m prime by prime
        let mut z = field.one();
        for (q, k) in factorize(m) {
            let qk = q.pow(k);
            let (src, so) = if order.is_multiple_of(qk) { (&gen, order) } else { (e, o) };
            z = field.mul(&z, &field.pow(src, so / qk));
        }
        gen = z;
        order = m;
    }
    Some((gen, order))
}

/// Roots of unity available for character values: generated by `−1`, the
/// values of `ε`, and the given extra elements.
fn value_group(f: &Newform, extra: &[NfElem]) -> (NfElem, u64) {
    let field = &f.field;
    let mut elems = vec![field.from_int(-1)];
    elems.extend(f.character.values.iter().cloned());
    elems.extend(extra.iter().cloned());
    let limit = 4 * (field.degree() as u64 + 1) * (field.degree() as u64 + 1) + 2;
    cyclic_span(field, &elems, limit).expect("inputs are roots of unity")
}

/// Choose a generator `ζ` of the value group consistent with the exponent
/// data of `ε`, so that `ζ ↦ e^{2πi/w}` agrees with the stored values.
fn aligned_zeta(f: &Newform, zeta: &NfElem, w: u64) -> NfElem {
    let field = &f.field;
    for t in 1..=w {
        if gcd(t, w) != 1 {
            continue;
        }
        let z = field.pow(zeta, t);
        let ok = f.character.chi.images().iter().zip(&f.character.values).all(|(img, v)| match img.exp_in(w) {
            Some(e) => field.pow(&z, e) == *v,
            None => false,
        });
        if ok {
            return z;
        }
    }
    zeta.clone()
}

/// All characters modulo `m` with values in `⟨ζ⟩` of order `w`.
fn characters_in(field: &NumberFieldQ, m: u64, zeta: &NfElem, w: u64) -> Vec<FieldCharacter> {
    let group = unit_group(m);
    let orders = group.orders().to_vec();
    let steps: Vec<u64> = orders.iter().map(|&o| gcd(o, w)).collect();
    let powers: Vec<NfElem> = (0..w).map(|k| field.pow(zeta, k)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0u64; orders.len()];
    loop {
        let images: Vec<RootOfUnity> =
            idx.iter().zip(&steps).map(|(&j, &s)| RootOfUnity::new(s.max(1), j as i64)).collect();
        let values = images.iter().map(|z| powers[z.exp_in(w).expect("order divides w") as usize].clone()).collect();
        let chi = DirichletCharacter::from_images(m, images).expect("orders divide");
        out.push(FieldCharacter { chi, values });
        let mut i = idx.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < steps[i] {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// The group Γ of inner twists with its composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerTwistGroup {
    pub twists: Vec<InnerTwist>,
    /// `table[i][j]` = index of `twists[i] · twists[j]`.
    pub table: Vec<Vec<usize>>,
    pub modulus: u64,
}

impl InnerTwistGroup {
    pub fn order(&self) -> usize {
        self.twists.len()
    }

    pub fn identity_index(&self, field: &NumberFieldQ) -> Option<usize> {
        self.twists.iter().position(|t| t.gamma.is_identity(field) && t.chi.is_trivial())
    }

    pub fn automorphisms(&self) -> Vec<FieldAutomorphism> {
        let mut v: Vec<FieldAutomorphism> = Vec::new();
        for t in &self.twists {
            if !v.contains(&t.gamma) {
                v.push(t.gamma.clone());
            }
        }
        v
    }

    pub fn contains(&self, field: &NumberFieldQ, gamma: &FieldAutomorphism, chi: &FieldCharacter) -> bool {
        self.twists.iter().any(|t| {
            t.gamma == *gamma
                && (0..self.modulus.max(1)).all(|u| t.chi.eval(field, u as i64) == chi.eval(field, u as i64))
        })
    }

    /// `u` lies in H iff `χ_γ(u) = 1` for every inner twist.
    pub fn h_contains(&self, u: u64) -> bool {
        self.twists.iter().all(|t| t.chi.chi.eval(u % t.chi.modulus().max(1)).map(|z| z.is_one()).unwrap_or(false))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.table.len();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.table.len();
        (0..n)
            .all(|i| (0..n).all(|j| (0..n).all(|k| self.table[self.table[i][j]][k] == self.table[i][self.table[j][k]])))
    }
}

fn char_key(field: &NumberFieldQ, chi: &FieldCharacter) -> Vec<NfElem> {
    chi.chi.group().generators().iter().map(|&g| chi.eval(field, g as i64)).collect()
}

/// Compose inner twists: `(γ, χ)·(σ, μ) = (γσ, χ^σ μ)`.
pub fn compose_twists(field: &NumberFieldQ, a: &InnerTwist, b: &InnerTwist) -> InnerTwist {
    let gamma = a.gamma.compose(field, &b.gamma);
    let chi = a.chi.conjugate(field, &b.gamma).mul(field, &b.chi);
    InnerTwist { gamma, chi }
}

/// Find all inner twists `(γ, χ)` with `γ` among `candidates` (the identity is
/// always tried) and `χ` modulo `N` or `4N`, then check closure.
pub fn detect_inner_twists(
    f: &Newform,
    candidates: &[FieldAutomorphism],
    bound: u64,
) -> Result<InnerTwistGroup, NewformError> {
    if bound > f.bound {
        return Err(NewformError::BoundTooLarge { requested: bound, available: f.bound });
    }
    let field = &f.field;
    let m = f.twist_modulus();
    if !primes_generate_units(m, bound) {
        return Err(NewformError::BoundTooSmall { bound, modulus: m });
    }
    let mut gammas = vec![FieldAutomorphism::identity(field)];
    for c in candidates {
        if !gammas.contains(c) {
            gammas.push(c.clone());
        }
    }
    // ratios γ(a_ℓ)/a_ℓ that are roots of unity feed the value group
    let limit = 4 * (field.degree() as u64 + 1) * (field.degree() as u64 + 1) + 2;
    let mut extra = Vec::new();
    for g in &gammas {
        for l in primes_up_to(bound.min(60)) {
            if m.is_multiple_of(l) {
                continue;
            }
            let a = &f.ap[&l];
            if a.is_zero() {
                continue;
            }
            let r = field.div(&g.apply(field, a), a)?;
            if field.root_of_unity_order(&r, limit).is_some() && !extra.contains(&r) {
                extra.push(r);
            }
        }
    }
    let (zeta, w) = value_group(f, &extra);
    let zeta = aligned_zeta(f, &zeta, w);
    let chars = characters_in(field, m, &zeta, w);
    let mut twists = Vec::new();
    for g in &gammas {
        for chi in &chars {
            if verify_inner_twist(f, g, chi, bound)?.holds {
                twists.push(InnerTwist { gamma: g.clone(), chi: chi.clone() });
            }
        }
    }
    twists.sort_by(|a, b| (a.gamma.image(), char_key(field, &a.chi)).cmp(&(b.gamma.image(), char_key(field, &b.chi))));
    // identity first
    if let Some(pos) = twists.iter().position(|t| t.gamma.is_identity(field) && t.chi.is_trivial()) {
        let id = twists.remove(pos);
        twists.insert(0, id);
    }
    let keys: Vec<(FieldAutomorphism, Vec<NfElem>)> =
        twists.iter().map(|t| (t.gamma.clone(), char_key(field, &t.chi))).collect();
    let mut table = vec![vec![0usize; twists.len()]; twists.len()];
    for (i, a) in twists.iter().enumerate() {
        for (j, b) in twists.iter().enumerate() {
            let c = compose_twists(field, a, b);
            let c = c.chi.extend(field, m).map(|chi| (c.gamma.clone(), char_key(field, &chi)))?;
            table[i][j] = keys.iter().position(|k| *k == c).ok_or(NewformError::NotClosed)?;
        }
    }
    Ok(InnerTwistGroup { twists, table, modulus: m })
}

/// Primitive quadratic characters of conductor dividing `m`, as Kronecker
/// symbols of fundamental discriminants.
pub fn quadratic_characters(m: u64) -> Vec<(i64, DirichletCharacter)> {
    let mut out = Vec::new();
    for d in 3..=(m as i64) {
        for disc in [-d, d] {
            if is_fundamental_discriminant(disc) && m.is_multiple_of(d as u64) {
                out.push((disc, DirichletCharacter::kronecker(disc)));
            }
        }
    }
    out
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    let squarefree = |n: u64| factorize(n).iter().all(|&(_, e)| e == 1);
    let r = d.rem_euclid(4);
    if r == 1 {
        return squarefree(d.unsigned_abs());
    }
    if r == 0 {
        let q = d / 4;
        let qr = q.rem_euclid(4);
        return (qr == 2 || qr == 3) && squarefree(q.unsigned_abs());
    }
    false
}

/// Evidence for a self-twist: the quadratic `χ` with `a_ℓ = 0` whenever
/// `χ(ℓ) = −1` for all tested `ℓ`. Not a proof of CM.
pub fn detect_self_twist(f: &Newform, bound: u64) -> Result<Option<(i64, DirichletCharacter)>, NewformError> {
    if bound > f.bound {
        return Err(NewformError::BoundTooLarge { requested: bound, available: f.bound });
    }
    let m = f.twist_modulus();
    if !primes_generate_units(m, bound) {
        return Err(NewformError::BoundTooSmall { bound, modulus: m });
    }
    for (d, chi) in quadratic_characters(m) {
        let ok = primes_up_to(bound).into_iter().filter(|l| !m.is_multiple_of(*l)).all(|l| {
            let v = chi.eval(l % chi.modulus()).expect("coprime");
            v.is_one() || f.ap[&l].is_zero()
        });
        if ok {
            return Ok(Some((d, chi)));
        }
    }
    Ok(None)
}

/// A field containing both coefficient fields, with the images of their roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeField {
    pub field: NumberFieldQ,
    pub embed_f: NfElem,
    pub embed_g: NfElem,
}

impl CompositeField {
    pub fn new(
        field: NumberFieldQ,
        lf: &NumberFieldQ,
        embed_f: NfElem,
        lg: &NumberFieldQ,
        embed_g: NfElem,
    ) -> Result<Self, NewformError> {
        for (l, e) in [(lf, &embed_f), (lg, &embed_g)] {
            if e.coords().len() != field.degree() || !field.eval_int_poly(l.poly(), e).is_zero() {
                return Err(NewformError::BadComposite);
            }
        }
        Ok(CompositeField { field, embed_f, embed_g })
    }

    /// Composite for two forms, falling back to a shared field when possible.
    pub fn for_pair(f: &Newform, g: &Newform, supplied: Option<&CompositeField>) -> Result<Self, NewformError> {
        if let Some(c) = supplied {
            return Ok(c.clone());
        }
        if f.field == g.field {
            let x = f.field.generator();
            return Ok(CompositeField { field: f.field.clone(), embed_f: x.clone(), embed_g: x });
        }
        if g.field.is_rationals() {
            let q = f.field.from_rational(Rat::from_integer(-g.field.poly()[0].clone()));
            return Ok(CompositeField { field: f.field.clone(), embed_f: f.field.generator(), embed_g: q });
        }
        if f.field.is_rationals() {
            let q = g.field.from_rational(Rat::from_integer(-f.field.poly()[0].clone()));
            return Ok(CompositeField { field: g.field.clone(), embed_f: q, embed_g: g.field.generator() });
        }
        Err(NewformError::IncompatibleFields)
    }

    pub fn map_f(&self, a: &NfElem) -> NfElem {
        self.field.eval_coords_at(a.coords(), &self.embed_f)
    }

    pub fn map_g(&self, a: &NfElem) -> NfElem {
        self.field.eval_coords_at(a.coords(), &self.embed_g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistEvidence {
    pub gamma: FieldAutomorphism,
    pub matched: u64,
    pub tested: u64,
    pub first_counterexample: Option<u64>,
}

/// Count primes with `a_ℓ(f)² ℓ^{k_g−1} γ(ε_g(ℓ)) = γ(a_ℓ(g))² ℓ^{k_f−1} ε_f(ℓ)`.
pub fn twist_relation_evidence(
    f: &Newform,
    g: &Newform,
    gamma: &FieldAutomorphism,
    bound: u64,
    composite: Option<&CompositeField>,
) -> Result<TwistEvidence, NewformError> {
    let top = bound.min(f.bound).min(g.bound);
    let c = CompositeField::for_pair(f, g, composite)?;
    let k = &c.field;
    let mut matched = 0;
    let mut tested = 0;
    let mut first = None;
    for l in primes_up_to(top) {
        if f.level.is_multiple_of(l) || g.level.is_multiple_of(l) {
            continue;
        }
        tested += 1;
        let af = c.map_f(&f.ap[&l]);
        let ag = c.map_g(&gamma.apply(&g.field, &g.ap[&l]));
        let ef = c.map_f(&f.eps(l));
        let eg = c.map_g(&gamma.apply(&g.field, &g.eps(l)));
        let lg = Rat::from_integer(BigInt::from(l).pow(g.weight.saturating_sub(1)));
        let lf = Rat::from_integer(BigInt::from(l).pow(f.weight.saturating_sub(1)));
        let lhs = k.scale(&lg, &k.mul(&k.mul(&af, &af), &eg));
        let rhs = k.scale(&lf, &k.mul(&k.mul(&ag, &ag), &ef));
        if lhs == rhs {
            matched += 1;
        } else if first.is_none() {
            first = Some(l);
        }
    }
    Ok(TwistEvidence { gamma: gamma.clone(), matched, tested, first_counterexample: first })
}

/// Largest prime ≤ bound, used by callers sizing scans.
pub fn largest_prime_at_most(n: u64) -> Option<u64> {
    (2..=n).rev().find(|&x| is_prime(x))
}

/// Exact integer value of a rational known to be integral.
pub fn rat_to_int(r: &Rat) -> Option<BigInt> {
    r.denom().is_one().then(|| r.numer().clone())
}

pub fn is_zero_rat(r: &Rat) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn rational_form(label: &str, level: u64, weight: u32, chi: DirichletCharacter, ap: &[(u64, i64)]) -> Newform {
        let field = NumberFieldQ::rationals();
        let character = FieldCharacter::from_real(&field, chi).unwrap();
        let ap = ap.iter().map(|&(l, a)| (l, field.from_int(a))).collect();
        Newform::new(label.to_string(), level, weight, character, field, ap, None).unwrap()
    }

    // 11.2.a.a
    const AP11: [(u64, i64); 15] = [
        (2, -2),
        (3, -1),
        (5, 1),
        (7, -2),
        (11, 1),
        (13, 4),
        (17, -2),
        (19, 0),
        (23, -1),
        (29, 0),
        (31, 7),
        (37, 3),
        (41, -8),
        (43, -6),
        (47, 8),
    ];

    #[test]
    fn rational_form_has_trivial_gamma() {
        let f = rational_form("11.2.a.a", 11, 2, DirichletCharacter::trivial(11), &AP11);
        let g = detect_inner_twists(&f, &[], 47).unwrap();
        assert_eq!(g.order(), 1);
        assert!(detect_self_twist(&f, 47).unwrap().is_none());
        // a_4 = a_2^2 - 2 = 2, a_9 = a_3^2 - 3 = -2
        assert_eq!(f.coefficient(4), Some(f.field.from_int(2)));
        assert_eq!(f.coefficient(9), Some(f.field.from_int(-2)));
        assert_eq!(f.coefficient(6), Some(f.field.from_int(2)));
    }

    #[test]
    fn quadratic_twist_fails_identity_twist() {
        let f = rational_form("11.2.a.a", 11, 2, DirichletCharacter::trivial(11), &AP11);
        let field = &f.field;
        let id = FieldAutomorphism::identity(field);
        let chi4 = FieldCharacter::from_real(field, DirichletCharacter::kronecker(-4)).unwrap();
        assert!(matches!(
            verify_inner_twist(&f, &id, &chi4, 47),
            Err(NewformError::ConductorViolation { conductor: 4, level: 11 })
        ));
        let chi = FieldCharacter::from_real(field, DirichletCharacter::kronecker(-11)).unwrap();
        let out = verify_inner_twist(&f, &id, &chi, 47).unwrap();
        // χ(2) = −1 and a_2 = −2 ≠ 0
        assert_eq!(out.first_failure, Some(2));
        assert!(matches!(verify_inner_twist(&f, &id, &chi, 53), Err(NewformError::BoundTooLarge { .. })));
        let ev = twist_relation_evidence(&f, &f, &FieldAutomorphism::identity(field), 47, None).unwrap();
        assert_eq!(ev.matched, ev.tested);
    }

    #[test]
    fn fundamental_discriminants() {
        let ds: Vec<i64> = (-20..=20).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(ds, [-20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17]);
        assert!(primes_generate_units(44, 47));
        assert!(!primes_generate_units(44, 5));
    }
}
