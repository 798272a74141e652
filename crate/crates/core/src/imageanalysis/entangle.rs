use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::arith::{legendre, pow_mod};
use crate::finitegroups::{pgl2_elements, Constraint, Elem, Factor, FiniteRing, Mat2, SubgroupClosure};

use super::dagger::{dagger_group_modp, GroupGSpec};
use super::ImageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// How the sign in `y_w = ±λ^e φ(x_v)` varies over `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignRule {
    /// Always `+`.
    Plus,
    /// The Legendre symbol of `λ`.
    Legendre,
    /// Both signs occur over every `(x, λ)`.
    Both,
}

/// `y_w = ±λ^e · c·Frob^i(x_v)·c⁻¹` on `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntanglementDatum {
    pub v: usize,
    pub w: usize,
    pub residue_degree: u32,
    pub frobenius: u32,
    pub conjugator: Mat2,
    pub sign: Sign,
    pub rule: SignRule,
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    FullDagger,
    OpenIndexBounded(u64),
    Entangled(EntanglementDatum),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalImageReport {
    pub p: u64,
    pub verdict: Verdict,
    pub evidence: Vec<String>,
    /// Order of the analysed subgroup when no pattern matched.
    pub witness_order: Option<u64>,
}

/// Ambient for pair images: the blocks of `f`, the blocks of `g`, then `λ ∈ F_p^×`.
/// The fibre product is cut out by `det x_v = λ^{1−k_f}`, `det y_w = λ^{1−k_g}`.
pub fn pair_ambient(f: &GroupGSpec, g: &GroupGSpec) -> Vec<Factor> {
    let mut amb: Vec<Factor> = f.ambient();
    amb.extend(g.ambient());
    amb.push(Factor::new(FiniteRing::prime_field(f.p()).expect("prime"), Constraint::Units));
    amb
}

fn lambda_pow(p: u64, lambda: u64, e: i64) -> u64 {
    pow_mod(lambda, e.rem_euclid(p as i64 - 1) as u64, p)
}

fn in_fibre_product(f: &GroupGSpec, g: &GroupGSpec, e: &[Mat2]) -> bool {
    let (a, b) = (f.blocks().len(), g.blocks().len());
    let p = f.p();
    let lambda = e[a + b].a;
    let df = lambda_pow(p, lambda, 1 - f.weight() as i64);
    let dg = lambda_pow(p, lambda, 1 - g.weight() as i64);
    f.blocks().iter().zip(&e[..a]).all(|(r, x)| r.mat_det(x) == df)
        && g.blocks().iter().zip(&e[a..a + b]).all(|(r, y)| r.mat_det(y) == dg)
}

fn twist_map(ring: &FiniteRing, c: &Mat2, ci: &Mat2, i: u32, x: &Mat2) -> Mat2 {
    ring.mat_mul(&ring.mat_mul(c, &ring.mat_frobenius(x, i)), ci)
}

fn fibre_order(f: &GroupGSpec, g: &GroupGSpec) -> u128 {
    let sl: u128 = f
        .blocks()
        .iter()
        .chain(g.blocks())
        .map(|r| {
            let q = r.size() as u128;
            q * (q * q - 1)
        })
        .product();
    sl * (f.p() as u128 - 1)
}

/// Classify a subgroup of the mod-p fibre product for the pair `(f, g)`.
pub fn pair_entanglement_classify(
    u: &SubgroupClosure,
    f: &GroupGSpec,
    g: &GroupGSpec,
) -> Result<LocalImageReport, ImageError> {
    let els = u.elements()?;
    let p = f.p();
    let (a, b) = (f.blocks().len(), g.blocks().len());
    if g.p() != p || u.ambient() != pair_ambient(f, g).as_slice() {
        return Err(ImageError::BadPrime { p: g.p() });
    }
    if !u.generators().iter().all(|e| in_fibre_product(f, g, e)) {
        return Err(ImageError::NotInFibreProduct);
    }
    let pf: HashSet<&[Mat2]> = els.iter().map(|e| &e[..a]).collect();
    let pg: HashSet<&[Mat2]> = els.iter().map(|e| &e[a..a + b]).collect();
    if pf.len() as u128 != dagger_group_modp(f).order || pg.len() as u128 != dagger_group_modp(g).order {
        return Err(ImageError::NotSurjectiveOntoFactors);
    }
    let mut report = LocalImageReport { p, verdict: Verdict::Unknown, evidence: Vec::new(), witness_order: None };
    let full = fibre_order(f, g);
    if els.len() as u128 == full {
        report.verdict = Verdict::FullDagger;
        report.evidence.push("order equals the fibre product order".to_string());
        return Ok(report);
    }
    report.witness_order = Some(els.len() as u64);
    let diff = f.weight() as i64 - g.weight() as i64;
    if diff % 2 != 0 {
        report.evidence.push("odd weight difference; scalar pattern not tested".to_string());
        return Ok(report);
    }
    let e = diff / 2;
    let target: HashSet<&Elem> = els.iter().collect();
    for v in 0..a {
        for w in 0..b {
            let ring = &f.blocks()[v];
            if g.blocks()[w] != *ring {
                continue;
            }
            let mut conj = vec![Mat2::IDENTITY];
            if let Ok(all) = pgl2_elements(ring) {
                conj.extend(all.into_iter().filter(|m| *m != Mat2::IDENTITY));
            }
            for i in 0..ring.residue_degree() {
                for c in &conj {
                    let Some(rule) = sign_rule(ring, els, a, b, v, w, i, c, e, p) else {
                        continue;
                    };
                    let datum = EntanglementDatum {
                        v,
                        w,
                        residue_degree: ring.residue_degree(),
                        frobenius: i,
                        conjugator: *c,
                        sign: if rule == SignRule::Plus { Sign::Plus } else { Sign::Minus },
                        rule,
                        exponent: e,
                    };
                    let regen = regenerate(f, g, &datum);
                    if regen.len() == target.len() && regen.iter().all(|x| target.contains(x)) {
                        report.evidence.push("entanglement datum regenerates the subgroup".to_string());
                        report.verdict = Verdict::Entangled(datum);
                        return Ok(report);
                    }
                }
            }
        }
    }
    report.evidence.push("no Goursat or scalar pattern matched".to_string());
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn sign_rule(
    ring: &FiniteRing,
    els: &[Elem],
    a: usize,
    b: usize,
    v: usize,
    w: usize,
    i: u32,
    c: &Mat2,
    e: i64,
    p: u64,
) -> Option<SignRule> {
    let ci = ring.mat_inv(c)?;
    let mut signs: HashMap<(Mat2, u64), (bool, bool)> = HashMap::new();
    for u in els {
        let lambda = u[a + b].a;
        let t = ring.mat_scale(lambda_pow(p, lambda, e), &twist_map(ring, c, &ci, i, &u[v]));
        let y = u[a + w];
        let entry = signs.entry((u[v], lambda)).or_default();
        if y == t {
            entry.0 = true;
        } else if y == ring.mat_neg(&t) {
            entry.1 = true;
        } else {
            return None;
        }
    }
    if signs.values().all(|s| !s.1) {
        return Some(SignRule::Plus);
    }
    if signs.values().all(|s| s.0 && s.1) {
        return Some(SignRule::Both);
    }
    let legendre_ok = signs.iter().all(|((_, l), s)| {
        let minus = legendre(*l, p) == -1;
        (s.0 != minus) && (s.1 == minus)
    });
    legendre_ok.then_some(SignRule::Legendre)
}

fn with_det(ring: &FiniteRing, sl2: &[Mat2], t: u64) -> Vec<Mat2> {
    let d = Mat2::diag(t, 1);
    sl2.iter().map(|s| ring.mat_mul(s, &d)).collect()
}

/// The subgroup described by a datum: all fibre-product elements whose
/// `(v, w)` coordinates satisfy the relation.
pub fn regenerate(f: &GroupGSpec, g: &GroupGSpec, d: &EntanglementDatum) -> HashSet<Elem> {
    let p = f.p();
    let (a, b) = (f.blocks().len(), g.blocks().len());
    let sl2: Vec<Vec<Mat2>> = f.blocks().iter().chain(g.blocks()).map(|r| r.sl2_elements()).collect();
    let ring = &f.blocks()[d.v];
    let ci = ring.mat_inv(&d.conjugator).expect("invertible");
    let mut out = HashSet::new();
    for lambda in 1..p {
        let df = lambda_pow(p, lambda, 1 - f.weight() as i64);
        let dg = lambda_pow(p, lambda, 1 - g.weight() as i64);
        let choices: Vec<Vec<Mat2>> = (0..a + b)
            .map(|j| {
                if j == a + d.w {
                    vec![Mat2::IDENTITY]
                } else if j < a {
                    with_det(&f.blocks()[j], &sl2[j], df)
                } else {
                    with_det(&g.blocks()[j - a], &sl2[j], dg)
                }
            })
            .collect();
        let signs: &[bool] = match d.rule {
            SignRule::Plus => &[false],
            SignRule::Both => &[false, true],
            SignRule::Legendre => {
                if legendre(lambda, p) == -1 {
                    &[true]
                } else {
                    &[false]
                }
            }
        };
        let s = lambda_pow(p, lambda, d.exponent);
        let mut idx = vec![0usize; a + b];
        'odometer: loop {
            let mut e: Elem = idx.iter().enumerate().map(|(j, &k)| choices[j][k]).collect();
            let t = ring.mat_scale(s, &twist_map(ring, &d.conjugator, &ci, d.frobenius, &e[d.v]));
            for &neg in signs {
                e[a + d.w] = if neg { ring.mat_neg(&t) } else { t };
                let mut full = e.clone();
                full.push(Mat2::diag(lambda, 1));
                out.insert(full);
            }
            let mut j = a + b;
            loop {
                if j == 0 {
                    break 'odometer;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < choices[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitegroups::{closure, DEFAULT_BOUND};

    fn gens_sl2(ring: &FiniteRing) -> Vec<Mat2> {
        let mut v = vec![Mat2::new(1, 1, 0, 1), Mat2::new(1, 0, 1, 1)];
        if ring.residue_degree() > 1 {
            let x = ring.p();
            v.push(Mat2::new(1, x, 0, 1));
            v.push(Mat2::new(1, 0, x, 1));
        }
        v
    }

    fn build(f: &GroupGSpec, g: &GroupGSpec, gens: Vec<Elem>) -> SubgroupClosure {
        closure(gens, pair_ambient(f, g), DEFAULT_BOUND).unwrap()
    }

    #[test]
    fn diagonal_and_sign_twisted() {
        let f = GroupGSpec::new(5, 2, &[1]).unwrap();
        let r = f.blocks()[0].clone();
        let l = Mat2::diag(2, 1);
        // det x = λ^{-1} = 3 for λ = 2
        let d = Mat2::diag(3, 1);
        let mut gens: Vec<Elem> = gens_sl2(&r).into_iter().map(|s| vec![s, s, Mat2::IDENTITY]).collect();
        gens.push(vec![d, d, l]);
        let u = build(&f, &f, gens.clone());
        assert_eq!(u.order(), Some(480));
        let rep = pair_entanglement_classify(&u, &f, &f).unwrap();
        let Verdict::Entangled(dat) = &rep.verdict else { panic!("{rep:?}") };
        assert_eq!((dat.sign, dat.frobenius, dat.exponent), (Sign::Plus, 0, 0));

        gens.push(vec![Mat2::IDENTITY, Mat2::new(4, 0, 0, 4), Mat2::IDENTITY]);
        let u = build(&f, &f, gens);
        let rep = pair_entanglement_classify(&u, &f, &f).unwrap();
        let Verdict::Entangled(dat) = &rep.verdict else { panic!("{rep:?}") };
        assert_eq!(dat.sign, Sign::Minus);
        let regen = regenerate(&f, &f, dat);
        assert_eq!(regen.len(), u.order().unwrap() as usize);
    }

    #[test]
    fn full_fibre_product() {
        let f = GroupGSpec::new(5, 2, &[1]).unwrap();
        let r = f.blocks()[0].clone();
        let mut gens: Vec<Elem> = Vec::new();
        for s in gens_sl2(&r) {
            gens.push(vec![s, Mat2::IDENTITY, Mat2::IDENTITY]);
            gens.push(vec![Mat2::IDENTITY, s, Mat2::IDENTITY]);
        }
        gens.push(vec![Mat2::diag(3, 1), Mat2::diag(3, 1), Mat2::diag(2, 1)]);
        let u = build(&f, &f, gens);
        let rep = pair_entanglement_classify(&u, &f, &f).unwrap();
        assert_eq!(rep.verdict, Verdict::FullDagger);
    }

    #[test]
    fn scalar_twist_with_weight_gap() {
        // k_f = 4, k_g = 2: y = λ x, det x = λ^{-3}, det y = λ^{-1}
        let f = GroupGSpec::new(5, 4, &[1]).unwrap();
        let g = GroupGSpec::new(5, 2, &[1]).unwrap();
        let r = f.blocks()[0].clone();
        let lam = 2u64;
        let x0 = Mat2::diag(r.pow(r.inv(lam).unwrap(), 3), 1);
        let y0 = r.mat_scale(lam, &x0);
        let mut gens: Vec<Elem> = gens_sl2(&r).into_iter().map(|s| vec![s, s, Mat2::IDENTITY]).collect();
        gens.push(vec![x0, y0, Mat2::diag(lam, 1)]);
        let u = build(&f, &g, gens);
        let rep = pair_entanglement_classify(&u, &f, &g).unwrap();
        let Verdict::Entangled(dat) = &rep.verdict else { panic!("{rep:?}") };
        assert_eq!((dat.exponent, dat.sign), (1, Sign::Plus));
    }

    #[test]
    fn frobenius_twist_over_f25() {
        let f = GroupGSpec::new(5, 2, &[2]).unwrap();
        let r = f.blocks()[0].clone();
        let mut gens: Vec<Elem> =
            gens_sl2(&r).into_iter().map(|s| vec![s, r.mat_frobenius(&s, 1), Mat2::IDENTITY]).collect();
        gens.push(vec![Mat2::diag(3, 1), Mat2::diag(3, 1), Mat2::diag(2, 1)]);
        let u = build(&f, &f, gens);
        assert_eq!(u.order(), Some(62400));
        let rep = pair_entanglement_classify(&u, &f, &f).unwrap();
        let Verdict::Entangled(dat) = &rep.verdict else { panic!("{rep:?}") };
        assert_eq!((dat.frobenius, dat.sign), (1, Sign::Plus));
    }

    #[test]
    fn odd_weight_gap_is_unknown() {
        // over F25 a square root c of λ = 2 ties y = c·x despite k_f − k_g = 1
        let f = GroupGSpec::new(5, 3, &[2]).unwrap();
        let g = GroupGSpec::new(5, 2, &[2]).unwrap();
        let r = f.blocks()[0].clone();
        let c = r.units().find(|&c| r.mul(c, c) == 2).unwrap();
        let x0 = Mat2::diag(4, 1);
        let mut gens: Vec<Elem> = gens_sl2(&r).into_iter().map(|s| vec![s, s, Mat2::IDENTITY]).collect();
        gens.push(vec![x0, r.mat_scale(c, &x0), Mat2::diag(2, 1)]);
        let u = build(&f, &g, gens);
        let rep = pair_entanglement_classify(&u, &f, &g).unwrap();
        assert_eq!(rep.verdict, Verdict::Unknown);
        assert!(rep.witness_order.is_some());
    }
}
