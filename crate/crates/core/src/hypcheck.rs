//! Sufficient criteria for the big-image hypotheses on the tensor product of
//! two newforms, each positive verdict backed by a re-checkable certificate.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{gcd, inv_mod, is_prime, lcm, pow_mod};
use crate::characters::{is_one_mod_p, reduce_root_of_unity, unit_group, CharError, RootOfUnity};
use crate::finitegroups::{
    rank_over_field, tensor_coker_certificate, Elem, FiniteRing, GroupError, Mat2, SubgroupClosure, TensorCertificate,
};
use crate::imageanalysis::ScanOutcome;
use crate::newforms::{twist_modulus, InnerTwistGroup, Newform};
use crate::numberfields::{nf_rank, reduce, residue_primes, NfError, NumberFieldQ, Rat, ResiduePrime};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HypError {
    #[error("levels share the factor {0}")]
    LevelsNotCoprime(u64),
    #[error("prime {p} is not admissible here")]
    BadPrime { p: u64 },
    #[error("the second form must have weight one")]
    NotWeightOne,
    #[error("the second form carries no CM discriminant")]
    NotCm,
    #[error("negative check needs q in {{3, 5, 7}}")]
    BadScanPrime,
    #[error(transparent)]
    Field(#[from] NfError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Character(#[from] CharError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    Negative,
    ExistenceTau,
    ExistenceTauTwisted,
    CmCase,
    WeightOne,
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HypFailure {
    NoSuitableU,
    LocalFieldTooBig,
}

/// `c·ζ_m^k` with `c` rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Rat,
    pub zeta_exp: u64,
}

impl Monomial {
    pub fn int(c: i64) -> Self {
        Monomial { coeff: Rat::from_integer(BigInt::from(c)), zeta_exp: 0 }
    }
}

/// A 2×2 matrix with monomial entries over `Q(ζ_m)`, rows `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoMat {
    pub entries: [Monomial; 4],
}

impl MonoMat {
    pub fn from_ints(rows: [[i64; 2]; 2]) -> Self {
        MonoMat {
            entries: [
                Monomial::int(rows[0][0]),
                Monomial::int(rows[0][1]),
                Monomial::int(rows[1][0]),
                Monomial::int(rows[1][1]),
            ],
        }
    }

    pub fn diag(a: Monomial, d: Monomial) -> Self {
        MonoMat { entries: [a, Monomial::int(0), Monomial::int(0), d] }
    }
}

fn rat_mod(c: &Rat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = ((c.numer() % &pb) + &pb) % &pb;
    let d = ((c.denom() % &pb) + &pb) % &pb;
    let n: u64 = n.try_into().ok()?;
    let d: u64 = d.try_into().ok()?;
    Some(crate::arith::mul_mod(n, inv_mod(d, p)?, p))
}

/// The witness: images `(a, b)` of `τ` in both factors, stored exactly over
/// `Q(ζ_m)` and reduced into a finite field containing `μ_m` prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypWitness {
    pub u: Option<u64>,
    pub m: u64,
    pub exact: Option<(MonoMat, MonoMat)>,
    pub ring: FiniteRing,
    pub a: Mat2,
    pub b: Mat2,
    pub certificate: TensorCertificate,
    pub char0_rank: Option<usize>,
    pub scalars: Vec<u64>,
}

impl HypWitness {
    fn from_exact(u: Option<u64>, m: u64, p: u64, a: MonoMat, b: MonoMat, scalars: Vec<u64>) -> Result<Self, HypError> {
        let ring = residue_ring_for(p, m)?;
        let ra = reduce_monomat(&ring, m, &a)?;
        let rb = reduce_monomat(&ring, m, &b)?;
        let certificate = tensor_coker_certificate(&ring, &ra, &ring, &rb)?;
        let char0_rank = Some(char0_tensor_rank(m, &a, &b));
        Ok(HypWitness { u, m, exact: Some((a, b)), ring, a: ra, b: rb, certificate, char0_rank, scalars })
    }

    /// Recompute every stored certificate from the stored matrices.
    pub fn recheck(&self) -> bool {
        let Ok(cert) = tensor_coker_certificate(&self.ring, &self.a, &self.ring, &self.b) else {
            return false;
        };
        if cert != self.certificate {
            return false;
        }
        match &self.exact {
            None => self.char0_rank.is_none(),
            Some((a, b)) => {
                let reduced = reduce_monomat(&self.ring, self.m, a).ok() == Some(self.a)
                    && reduce_monomat(&self.ring, self.m, b).ok() == Some(self.b);
                reduced && self.char0_rank == Some(char0_tensor_rank(self.m, a, b))
            }
        }
    }

    pub fn certifies_v(&self) -> bool {
        self.char0_rank.map_or(self.certificate.residue_rank == 3, |r| r == 3)
    }

    pub fn certifies_t(&self) -> bool {
        self.certificate.residue_rank == 3 && self.certificate.free_rank_one
    }
}

/// Smallest `F_{p^f}` containing the prime-to-`p` part of `μ_m`.
fn residue_ring_for(p: u64, m: u64) -> Result<FiniteRing, HypError> {
    let mut m1 = m;
    while m1.is_multiple_of(p) {
        m1 /= p;
    }
    let mut f = 1;
    let mut q = p % m1.max(1);
    while m1 > 1 && q != 1 {
        q = crate::arith::mul_mod(q, p, m1);
        f += 1;
    }
    Ok(FiniteRing::field(p, f)?)
}

fn reduce_monomial(ring: &FiniteRing, m: u64, x: &Monomial) -> Result<u64, HypError> {
    let p = ring.p();
    let c = rat_mod(&x.coeff, p).ok_or(HypError::BadPrime { p })?;
    let z = reduce_root_of_unity(&RootOfUnity::new(m, x.zeta_exp as i64), ring)?;
    Ok(ring.mul(c, z))
}

fn reduce_monomat(ring: &FiniteRing, m: u64, x: &MonoMat) -> Result<Mat2, HypError> {
    let e = &x.entries;
    Ok(Mat2::new(
        reduce_monomial(ring, m, &e[0])?,
        reduce_monomial(ring, m, &e[1])?,
        reduce_monomial(ring, m, &e[2])?,
        reduce_monomial(ring, m, &e[3])?,
    ))
}

/// Rank of `a ⊗ b − 1` over `Q(ζ_m)`.
pub fn char0_tensor_rank(m: u64, a: &MonoMat, b: &MonoMat) -> usize {
    let k = NumberFieldQ::cyclotomic(m.max(1));
    let z = k.generator();
    let val = |x: &Monomial| k.scale(&x.coeff, &k.pow(&z, x.zeta_exp));
    let av: Vec<_> = a.entries.iter().map(val).collect();
    let bv: Vec<_> = b.entries.iter().map(val).collect();
    let mut rows = vec![vec![k.zero(); 4]; 4];
    for i in 0..2 {
        for kk in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let mut v = k.mul(&av[2 * i + j], &bv[2 * kk + l]);
                    if i == j && kk == l {
                        v = k.sub(&v, &k.one());
                    }
                    rows[2 * i + kk][2 * j + l] = v;
                }
            }
        }
    }
    nf_rank(&k, rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypStatus {
    pub holds_v: Truth,
    pub holds_t: Truth,
    pub criterion: Criterion,
    pub witness: Option<HypWitness>,
    pub failure: Option<HypFailure>,
    pub conditions: Vec<String>,
}

impl HypStatus {
    fn new(
        holds_v: Truth,
        holds_t: Truth,
        criterion: Criterion,
        witness: Option<HypWitness>,
        conditions: Vec<String>,
    ) -> Self {
        // T implies V
        let holds_v = if holds_t == Truth::Yes { Truth::Yes } else { holds_v };
        HypStatus { holds_v, holds_t, criterion, witness, failure: None, conditions }
    }

    fn failed(criterion: Criterion, failure: HypFailure, conditions: Vec<String>) -> Self {
        HypStatus {
            holds_v: Truth::Unknown,
            holds_t: Truth::Unknown,
            criterion,
            witness: None,
            failure: Some(failure),
            conditions,
        }
    }

    /// Yes verdicts re-verify from the stored witness.
    pub fn verify(&self) -> bool {
        let t_ok = self.holds_t != Truth::Yes
            || (self.holds_v == Truth::Yes && self.witness.as_ref().is_some_and(|w| w.recheck() && w.certifies_t()));
        let v_ok = self.holds_v != Truth::Yes || self.witness.as_ref().is_some_and(|w| w.recheck() && w.certifies_v());
        t_ok && v_ok
    }
}

/// Exhaustive scan record for the negative proposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeRecord {
    pub applies: bool,
    pub q: u64,
    pub pairs_scanned: u64,
    pub rank3_found: u64,
}

/// `applies` iff `ε_f ε_g` is trivial; the scan confirms that no
/// `(x, y) ∈ GL₂(F_q)²` with `det(xy) = 1` has `rank(x⊗y − 1) = 3`.
pub fn negative_check(
    eps_f: &crate::characters::DirichletCharacter,
    eps_g: &crate::characters::DirichletCharacter,
    q: u64,
) -> Result<NegativeRecord, HypError> {
    if ![3, 5, 7].contains(&q) {
        return Err(HypError::BadScanPrime);
    }
    let applies = eps_f.mul(eps_g).is_trivial();
    let (pairs_scanned, rank3_found) = negative_scan(q)?;
    Ok(NegativeRecord { applies, q, pairs_scanned, rank3_found })
}

pub fn negative_scan(q: u64) -> Result<(u64, u64), HypError> {
    let ring = FiniteRing::prime_field(q)?;
    let gl2 = ring.gl2_elements();
    let mut by_det: Vec<Vec<Mat2>> = vec![Vec::new(); q as usize];
    for m in &gl2 {
        by_det[ring.mat_det(m) as usize].push(*m);
    }
    let mut scanned = 0;
    let mut found = 0;
    for x in &gl2 {
        let di = ring.inv(ring.mat_det(x)).expect("unit");
        for y in &by_det[di as usize] {
            scanned += 1;
            let m = crate::finitegroups::kronecker_minus_identity(&ring, x, y);
            if rank_over_field(&ring, m.iter().map(|r| r.to_vec()).collect()) == 3 {
                found += 1;
            }
        }
    }
    Ok((scanned, found))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPrimeVerdict {
    pub p: u64,
    pub at_least_5: bool,
    pub at_least_7: bool,
    pub coprime_to_levels: bool,
    /// `p ∤ 2 N_f N_g disc(L_f) disc(L_g)`.
    pub outside_ramification_bound: bool,
    pub unramified_in_l: bool,
    /// The full-image conclusion at `p` is always assumed.
    pub full_image_assumed: bool,
    /// Whether an exceptional-prime scan excluded `p`.
    pub scan_support: Option<bool>,
    pub good: bool,
}

pub fn good_prime(f: &Newform, g: &Newform, p: u64, scan: Option<&ScanOutcome>) -> GoodPrimeVerdict {
    let pb = BigInt::from(p);
    let divides = |n: &BigInt| (n % &pb).is_zero();
    let at_least_5 = p >= 5 && is_prime(p);
    let coprime_to_levels = !f.level.is_multiple_of(p) && !g.level.is_multiple_of(p);
    let bound = BigInt::from(2u64 * f.level * g.level) * f.field.discriminant() * g.field.discriminant();
    let outside_ramification_bound = !divides(&bound);
    let unramified_in_l = !divides(f.field.discriminant()) && !divides(g.field.discriminant());
    let scan_support = scan.map(|s| match s {
        ScanOutcome::Candidates { primes, .. } => !primes.contains(&p),
        _ => false,
    });
    GoodPrimeVerdict {
        p,
        at_least_5,
        at_least_7: p >= 7 && is_prime(p),
        coprime_to_levels,
        outside_ramification_bound,
        unramified_in_l,
        full_image_assumed: true,
        scan_support,
        good: at_least_5 && coprime_to_levels && outside_ramification_bound && unramified_in_l,
    }
}

/// Inputs shared by the pair criteria.
#[derive(Clone, Copy, Debug)]
pub struct PairData<'a> {
    pub f: &'a Newform,
    pub twists_f: &'a InnerTwistGroup,
    pub g: &'a Newform,
    pub twists_g: &'a InnerTwistGroup,
}

fn eps_at(form: &Newform, u: u64) -> Option<RootOfUnity> {
    form.character.chi.eval_i64(u as i64)
}

fn fixed_twists(field: &NumberFieldQ, twists: &InnerTwistGroup, prime: &ResiduePrime) -> Result<Vec<usize>, HypError> {
    let ring = &prime.ring;
    let mut out = Vec::new();
    for (i, t) in twists.twists.iter().enumerate() {
        let y = reduce(field, t.gamma.image(), prime)?;
        let v = prime.g.iter().rev().fold(0, |acc, &c| ring.add(ring.mul(acc, y), c));
        if v == 0 {
            out.push(i);
        }
    }
    Ok(out)
}

fn twist_trivial_at(twists: &InnerTwistGroup, idx: &[usize], u: u64) -> bool {
    idx.iter().all(|&i| twists.twists[i].chi.chi.eval_i64(u as i64).is_some_and(|z| z.is_one()))
}

fn pick_prime(field: &NumberFieldQ, p: u64, which: usize) -> Result<ResiduePrime, HypError> {
    let mut primes = residue_primes(field, p)?;
    if which >= primes.len() {
        return Err(HypError::BadPrime { p });
    }
    Ok(primes.swap_remove(which))
}

fn assumed_conditions() -> Vec<String> {
    vec![
        "expected image of each form at p assumed (Momose-Ribet)".to_string(),
        "tau realised in the Galois group over the cyclotomic Z_p-tower assumed".to_string(),
    ]
}

/// Find `x ∈ F_p^×` with `x⁻²ε_f(u) ≠ 1` and `x²ε_g(u) ≠ 1` in the residue field,
/// then build `diag(x, x⁻¹ε_f(u))`, `diag(x⁻¹, xε_g(u))`.
fn diagonal_witness(p: u64, u: u64, ef: RootOfUnity, eg: RootOfUnity) -> Result<Option<HypWitness>, HypError> {
    let m = lcm(ef.order(), eg.order());
    let ring = residue_ring_for(p, m)?;
    let zf = reduce_root_of_unity(&ef, &ring)?;
    let zg = reduce_root_of_unity(&eg, &ring)?;
    for x in 1..p {
        let xi = inv_mod(x, p).expect("unit");
        let x2 = crate::arith::mul_mod(x, x, p);
        let xi2 = crate::arith::mul_mod(xi, xi, p);
        if ring.mul(xi2, zf) == 1 || ring.mul(x2, zg) == 1 {
            continue;
        }
        let xr = Rat::from_integer(BigInt::from(x));
        let xir = Rat::one() / xr.clone();
        let a = MonoMat::diag(
            Monomial { coeff: xr.clone(), zeta_exp: 0 },
            Monomial { coeff: xir.clone(), zeta_exp: ef.exp_in(m).expect("divides") },
        );
        let b = MonoMat::diag(
            Monomial { coeff: xir, zeta_exp: 0 },
            Monomial { coeff: xr, zeta_exp: eg.exp_in(m).expect("divides") },
        );
        return HypWitness::from_exact(Some(u), m, p, a, b, vec![x, xi]).map(Some);
    }
    Ok(None)
}

/// Diagonal criterion: `u` with `ε_fε_g(u) ≠ 1` and `χ_γ(u) = 1` on both
/// decomposition groups.
pub fn check_existence_tau(data: &PairData, p: u64, which: (usize, usize)) -> Result<HypStatus, HypError> {
    let (f, g) = (data.f, data.g);
    if p < 5 || f.level % p == 0 || g.level % p == 0 {
        return Err(HypError::BadPrime { p });
    }
    let mut conditions = assumed_conditions();
    let prod = f.character.chi.mul(&g.character.chi);
    if prod.is_trivial() {
        conditions.push("eps_f eps_g trivial: negative proposition".to_string());
        return Ok(HypStatus::new(Truth::No, Truth::No, Criterion::Negative, None, conditions));
    }
    let pf = pick_prime(&f.field, p, which.0)?;
    let pg = pick_prime(&g.field, p, which.1)?;
    let df = fixed_twists(&f.field, data.twists_f, &pf)?;
    let dg = fixed_twists(&g.field, data.twists_g, &pg)?;
    conditions.push(format!("decomposition groups of orders {} and {}", df.len(), dg.len()));
    let group = unit_group(twist_modulus(f.level, g.level));
    for u in group.units() {
        let (Some(ef), Some(eg)) = (eps_at(f, u), eps_at(g, u)) else { continue };
        if ef.mul(&eg).is_one() || !twist_trivial_at(data.twists_f, &df, u) || !twist_trivial_at(data.twists_g, &dg, u)
        {
            continue;
        }
        let Some(w) = diagonal_witness(p, u, ef, eg)? else { continue };
        let v = if w.certifies_v() { Truth::Yes } else { Truth::Unknown };
        let strong = p >= 7 && !is_one_mod_p(&ef.mul(&eg), p);
        let t = if strong && w.certifies_t() { Truth::Yes } else { Truth::Unknown };
        conditions.push(format!("u = {u}"));
        return Ok(HypStatus::new(v, t, Criterion::ExistenceTau, Some(w), conditions));
    }
    Ok(HypStatus::failed(Criterion::ExistenceTau, HypFailure::NoSuitableU, conditions))
}

/// Twisted criterion: `u` with `ε_g(u) = −1` and `χ_γ(u) = 1` for all of `Γ_f`;
/// witness `([[1,1],[0,1]], diag(1,−1))`.
pub fn check_existence_tau_ii(data: &PairData, p: u64) -> Result<HypStatus, HypError> {
    let (f, g) = (data.f, data.g);
    if p < 5 || f.level % p == 0 || g.level % p == 0 {
        return Err(HypError::BadPrime { p });
    }
    let mut conditions = assumed_conditions();
    let group = unit_group(twist_modulus(f.level, g.level));
    let all: Vec<usize> = (0..data.twists_f.twists.len()).collect();
    let found = group.units().find(|&u| {
        eps_at(g, u).is_some_and(|z| z == RootOfUnity::minus_one()) && twist_trivial_at(data.twists_f, &all, u)
    });
    let Some(u) = found else {
        return Ok(HypStatus::failed(Criterion::ExistenceTauTwisted, HypFailure::NoSuitableU, conditions));
    };
    let a = MonoMat::from_ints([[1, 1], [0, 1]]);
    let b = MonoMat::from_ints([[1, 0], [0, -1]]);
    // α with α² ≠ 1 in F_p normalises the unipotent part
    let alpha = (2..p).find(|&a| pow_mod(a, 2, p) != 1).unwrap_or(2);
    let w = HypWitness::from_exact(Some(u), 2, p, a, b, vec![alpha])?;
    conditions.push(format!("u = {u}, alpha = {alpha}"));
    let t = if w.certifies_t() { Truth::Yes } else { Truth::Unknown };
    let v = if w.certifies_v() { Truth::Yes } else { Truth::Unknown };
    Ok(HypStatus::new(v, t, Criterion::ExistenceTauTwisted, Some(w), conditions))
}

/// CM criterion for `g` with CM by `Q(√D)`.
pub fn check_cm_case(data: &PairData, p: u64, which: (usize, usize)) -> Result<HypStatus, HypError> {
    let (f, g) = (data.f, data.g);
    let d = g.cm_disc.ok_or(HypError::NotCm)?;
    if p < 5 || f.level % p == 0 || g.level % p == 0 || d.unsigned_abs() % p == 0 {
        return Err(HypError::BadPrime { p });
    }
    let mut conditions = assumed_conditions();
    conditions.push("image of G_K under the Hecke character assumed to contain the expected torus".to_string());
    let pf = pick_prime(&f.field, p, which.0)?;
    let pg = pick_prime(&g.field, p, which.1)?;
    let df = fixed_twists(&f.field, data.twists_f, &pf)?;
    if df.len() != 1 || pg.residue_degree() != 1 {
        conditions.push(format!(
            "decomposition group order {}, residue degree {} for g",
            df.len(),
            pg.residue_degree()
        ));
        return Ok(HypStatus::failed(Criterion::CmCase, HypFailure::LocalFieldTooBig, conditions));
    }
    let n = twist_modulus(f.level, g.level);
    let group = unit_group(lcm(n, d.unsigned_abs()));
    for u in group.units() {
        let (Some(ef), Some(eg)) = (eps_at(f, u), eps_at(g, u)) else { continue };
        if ef.mul(&eg).is_one() || crate::arith::kronecker(d, u) != 1 {
            continue;
        }
        let Some(w) = diagonal_witness(p, u, ef, eg)? else { continue };
        let v = if w.certifies_v() { Truth::Yes } else { Truth::Unknown };
        let strong = p >= 7 && !is_one_mod_p(&ef.mul(&eg), p);
        let t = if strong && w.certifies_t() { Truth::Yes } else { Truth::Unknown };
        conditions.push(format!("u = {u}"));
        return Ok(HypStatus::new(v, t, Criterion::CmCase, Some(w), conditions));
    }
    Ok(HypStatus::failed(Criterion::CmCase, HypFailure::NoSuitableU, conditions))
}

/// Weight-one criterion with `a = diag(−1, 1)`, `b = [[1, p^r], [0, 1]]`,
/// `r = 0` in the generic branch and `r = 1` otherwise.
pub fn check_weight_one(f: &Newform, g: &Newform, p: u64, generic: bool) -> Result<HypStatus, HypError> {
    if g.weight != 1 {
        return Err(HypError::NotWeightOne);
    }
    let c = gcd(f.level, g.level);
    if c != 1 {
        return Err(HypError::LevelsNotCoprime(c));
    }
    if p < 3 || !is_prime(p) || g.level.is_multiple_of(p) || (f.field.discriminant() % BigInt::from(p)).is_zero() {
        return Err(HypError::BadPrime { p });
    }
    let r: u32 = if generic { 0 } else { 1 };
    let a = MonoMat::from_ints([[-1, 0], [0, 1]]);
    let b = MonoMat::from_ints([[1, p.pow(r) as i64], [0, 1]]);
    let w = HypWitness::from_exact(None, 2, p, a, b, vec![r as u64])?;
    let mut conditions = assumed_conditions();
    conditions.push("splitting fields of the two representations linearly disjoint (coprime levels)".to_string());
    conditions.push(format!("r = {r}"));
    let v = if w.certifies_v() { Truth::Yes } else { Truth::Unknown };
    let t = if generic && w.certifies_t() { Truth::Yes } else { Truth::Unknown };
    Ok(HypStatus::new(v, t, Criterion::WeightOne, Some(w), conditions))
}

/// First `(a, b)` in canonical order (optionally shifted by a coset
/// representative) with `rank(a⊗b − 1) = 3` over the residue field.
pub fn tau_search_modp(u: &SubgroupClosure, coset: Option<(Mat2, Mat2)>) -> Result<Option<HypWitness>, HypError> {
    let amb = u.ambient();
    if amb.len() != 2 {
        return Err(HypError::Group(GroupError::RingMismatch));
    }
    let mut els: Vec<&Elem> = u.elements()?.iter().collect();
    els.sort();
    let (r1, r2) = (&amb[0].ring, &amb[1].ring);
    for e in els {
        let (mut a, mut b) = (e[0], e[1]);
        if let Some((c1, c2)) = &coset {
            a = r1.mat_mul(c1, &a);
            b = r2.mat_mul(c2, &b);
        }
        let cert = tensor_coker_certificate(r1, &a, r2, &b)?;
        if cert.residue_rank == 3 {
            let ring = if r1.size() >= r2.size() { r1.clone() } else { r2.clone() };
            let (a, b) = if ring == *r1 && ring == *r2 {
                (a, b)
            } else {
                (cert_matrix_a(r1, &ring, a), cert_matrix_a(r2, &ring, b))
            };
            let certificate = tensor_coker_certificate(&ring, &a, &ring, &b)?;
            return Ok(Some(HypWitness {
                u: None,
                m: 1,
                exact: None,
                ring,
                a,
                b,
                certificate,
                char0_rank: None,
                scalars: vec![],
            }));
        }
    }
    Ok(None)
}

fn cert_matrix_a(from: &FiniteRing, to: &FiniteRing, m: Mat2) -> Mat2 {
    if from == to {
        m
    } else {
        let f = |x: u64| x % from.p();
        Mat2::new(f(m.a), f(m.b), f(m.c), f(m.d))
    }
}
