use std::collections::{BTreeMap, HashSet};

use adelic_core::arith::{euler_phi, gcd, lcm, primes_up_to};
use adelic_core::characters::{is_one_mod_p, unit_group, DirichletCharacter, RootOfUnity};
use adelic_core::finitegroups::{
    class_consistent, closure, dickson_classify, tensor_coker_certificate, Constraint, Elem, Factor, FiniteRing, Mat2,
    DEFAULT_BOUND,
};
use adelic_core::hypcheck::{check_existence_tau, tau_search_modp, HypError, PairData, Truth};
use adelic_core::imageanalysis::{
    adelic_openness_audit, counterexample_subgroup, dagger_group_modp, goursat_classify, goursat_reconstruct, DetImage,
    GroupGSpec, LocalImageReport, Verdict,
};
use adelic_core::newforms::{detect_inner_twists, FieldCharacter, Newform};
use adelic_core::numberfields::{
    decomposition_group, prime_orbits, reduce, residue_primes, FieldAutomorphism, NumberFieldQ, Rat,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn mat(ring: &FiniteRing) -> impl Strategy<Value = Mat2> {
    let q = ring.size();
    (0..q, 0..q, 0..q, 0..q).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

fn sl2(ring: FiniteRing) -> impl Strategy<Value = Mat2> {
    let els = ring.sl2_elements();
    (0..els.len()).prop_map(move |i| els[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_order_divides_ambient(p in prop::sample::select(vec![5u64, 7]), i in 0usize..1000, j in 0usize..1000) {
        let r = FiniteRing::prime_field(p).unwrap();
        let els = r.sl2_elements();
        let (a, b) = (els[i % els.len()], els[j % els.len()]);
        let amb = vec![Factor::new(r.clone(), Constraint::PSL2)];
        let c = closure(vec![vec![a], vec![b]], amb.clone(), DEFAULT_BOUND).unwrap();
        let n = c.order().unwrap();
        prop_assert_eq!(amb[0].order() % n, 0);
        prop_assert!(c.verify_subgroup().unwrap());
        if let Ok(tag) = dickson_classify(&c) {
            prop_assert!(class_consistent(tag, n, p));
        }
    }

    #[test]
    fn tensor_rank_conjugation_invariant(a in mat(&FiniteRing::prime_field(7).unwrap()), b in mat(&FiniteRing::prime_field(7).unwrap()),
                                         g in sl2(FiniteRing::prime_field(7).unwrap()), h in sl2(FiniteRing::prime_field(7).unwrap())) {
        let r = FiniteRing::prime_field(7).unwrap();
        let c1 = tensor_coker_certificate(&r, &a, &r, &b).unwrap();
        let ca = r.mat_mul(&r.mat_mul(&g, &a), &r.mat_inv(&g).unwrap());
        let cb = r.mat_mul(&r.mat_mul(&h, &b), &r.mat_inv(&h).unwrap());
        let c2 = tensor_coker_certificate(&r, &ca, &r, &cb).unwrap();
        prop_assert_eq!(c1.residue_rank, c2.residue_rank);
        let nulls = c1.local_profile.iter().filter(|v| v.is_none()).count();
        prop_assert_eq!(c1.residue_rank, 4 - nulls);
    }

    #[test]
    fn characters_are_multiplicative(n in 2u64..200, seed in any::<u64>(), u in 1u64..1000, v in 1u64..1000) {
        let all = DirichletCharacter::all(n);
        let chi = &all[(seed % all.len() as u64) as usize];
        if gcd(u * v, n) == 1 {
            let uv = chi.eval((u * v) % n).unwrap();
            prop_assert_eq!(uv, chi.eval(u % n).unwrap().mul(&chi.eval(v % n).unwrap()));
        }
        prop_assert_eq!(all.len() as u64, euler_phi(n));
    }

    #[test]
    fn conductor_of_product_divides_lcm(n in 2u64..120, i in any::<u64>(), j in any::<u64>()) {
        let all = DirichletCharacter::all(n);
        let a = &all[(i % all.len() as u64) as usize];
        let b = &all[(j % all.len() as u64) as usize];
        let c = a.mul(b).conductor();
        prop_assert_eq!(lcm(a.conductor(), b.conductor()) % c, 0);
    }

    #[test]
    fn reduce_is_multiplicative(poly in prop::sample::select(vec![vec![-3i64, 0, 1], vec![1, 0, 1], vec![-2, 0, 0, 1], vec![1, 1, 1]]),
                                p in prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23]),
                                xs in prop::collection::vec(-20i64..20, 6)) {
        let k = NumberFieldQ::from_i64(&poly).unwrap();
        let Ok(primes) = residue_primes(&k, p) else { return Ok(()) };
        let deg: u32 = primes.iter().map(|q| q.residue_degree()).sum();
        prop_assert_eq!(deg as usize, k.degree());
        let d = k.degree();
        let a = k.element(xs[..d].iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()).unwrap();
        let b = k.element(xs[3..3 + d].iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()).unwrap();
        for q in &primes {
            let ra = reduce(&k, &a, q).unwrap();
            let rb = reduce(&k, &b, q).unwrap();
            prop_assert_eq!(reduce(&k, &k.mul(&a, &b), q).unwrap(), q.ring.mul(ra, rb));
        }
    }

    #[test]
    fn audit_is_monotone(verdicts in prop::collection::vec(0u8..3, 1..5), upgrade in 0usize..5) {
        let make = |v: u8| match v { 0 => Verdict::Unknown, 1 => Verdict::OpenIndexBounded(3), _ => Verdict::FullDagger };
        let reports: Vec<LocalImageReport> = verdicts.iter().enumerate()
            .map(|(i, &v)| LocalImageReport { p: primes_up_to(40)[i + 2], verdict: make(v), evidence: vec![], witness_order: None })
            .collect();
        let det = DetImage { levels: vec![], full_elsewhere: true };
        let before = adelic_openness_audit(&reports, &det, &[]).unwrap();
        let mut up = reports.clone();
        let k = upgrade % up.len();
        up[k].verdict = Verdict::FullDagger;
        let after = adelic_openness_audit(&up, &det, &[]).unwrap();
        prop_assert!(!before.open || after.open);
    }
}

#[test]
fn is_one_mod_p_matches_residue_field() {
    for m in 1..=24u64 {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let k = NumberFieldQ::cyclotomic(m);
            let Ok(primes) = residue_primes(&k, p) else { continue };
            for e in 0..m {
                let z = RootOfUnity::new(m, e as i64);
                let elem = k.pow(&k.generator(), e);
                let direct = reduce(&k, &elem, &primes[0]).unwrap() == 1;
                assert_eq!(is_one_mod_p(&z, p), direct, "m={m} p={p} e={e}");
            }
        }
    }
}

#[test]
fn no_proper_subgroup_of_sl2_surjects_onto_psl2() {
    for p in [5u64, 7] {
        let r = FiniteRing::prime_field(p).unwrap();
        let els = r.sl2_elements();
        let full = (p * (p * p - 1)) as usize;
        let amb = vec![Factor::new(r.clone(), Constraint::SL2)];
        let pamb = vec![Factor::new(r.clone(), Constraint::PSL2)];
        // pairs drawn along a fixed stride cover every conjugacy type
        for (i, a) in els.iter().enumerate().step_by(7) {
            let b = els[(i * 13 + 5) % els.len()];
            let proj = closure(vec![vec![*a], vec![b]], pamb.clone(), DEFAULT_BOUND).unwrap();
            if proj.order() == Some(full as u64 / 2) {
                let c = closure(vec![vec![*a], vec![b]], amb.clone(), DEFAULT_BOUND).unwrap();
                assert_eq!(c.order(), Some(full as u64));
            }
        }
    }
}

#[test]
fn orbit_stabilizer() {
    let k = NumberFieldQ::cyclotomic(8);
    let z = k.generator();
    let gamma: Vec<FieldAutomorphism> =
        [1u64, 3, 5, 7].iter().map(|&e| FieldAutomorphism::new(&k, k.pow(&z, e)).unwrap()).collect();
    for p in [3u64, 5, 7, 17, 41] {
        let primes = residue_primes(&k, p).unwrap();
        for orbit in prime_orbits(&k, &gamma, &primes).unwrap() {
            let d = decomposition_group(&k, &gamma, &primes[orbit[0]]).unwrap();
            assert_eq!(orbit.len() * d.len(), gamma.len());
            let sub: Vec<FieldAutomorphism> = d.iter().map(|&i| gamma[i].clone()).collect();
            adelic_core::numberfields::check_group(&k, &sub).unwrap();
        }
    }
}

fn gaussian_form(ns: &[i64]) -> Newform {
    // a_ℓ rational for ℓ ≡ 1 (4) and in iZ for ℓ ≡ 3 (4): (conj, χ₋₄) is an inner twist
    let k = NumberFieldQ::cyclotomic(4);
    let i = k.generator();
    let mut ap = BTreeMap::new();
    for (idx, l) in primes_up_to(97).into_iter().enumerate() {
        let n = ns[idx % ns.len()];
        let a = if l % 4 == 3 { k.scale(&Rat::from_integer(BigInt::from(n)), &i) } else { k.from_int(n) };
        ap.insert(l, a);
    }
    Newform::new("gauss".into(), 8, 2, FieldCharacter::trivial(&k, 8), k, ap, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn inner_twist_detection_is_stable(ns in prop::collection::vec(prop_oneof![1i64..9, -9i64..-1], 5..9)) {
        let f = gaussian_form(&ns);
        let k = &f.field;
        let conj = FieldAutomorphism::new(k, k.neg(&k.generator())).unwrap();
        let id = FieldAutomorphism::identity(k);
        let g1 = detect_inner_twists(&f, &[id.clone(), conj.clone()], 97).unwrap();
        let g2 = detect_inner_twists(&f, &[conj.clone(), id], 97).unwrap();
        let g3 = detect_inner_twists(&f, std::slice::from_ref(&conj), 97).unwrap();
        prop_assert_eq!(&g1, &g2);
        prop_assert_eq!(&g1, &g3);
        prop_assert_eq!(g1.order(), 2);
        prop_assert!(g1.is_associative() && g1.is_abelian());
        prop_assert_eq!(g1.identity_index(k), Some(0));
        for t in &g1.twists {
            prop_assert_eq!(32 % t.chi.chi.conductor(), 0);
        }
        // H is a subgroup of (Z/32)^×
        let h: HashSet<u64> = unit_group(32).units().filter(|&u| g1.h_contains(u)).collect();
        prop_assert!(h.iter().all(|&a| h.iter().all(|&b| h.contains(&(a * b % 32)))));
        prop_assert_eq!(16 % h.len(), 0);
    }
}

#[test]
fn goursat_round_trip_on_graphs() {
    let f5 = FiniteRing::prime_field(5).unwrap();
    let amb = vec![Factor::new(f5.clone(), Constraint::SL2), Factor::new(f5.clone(), Constraint::SL2)];
    let s = Mat2::new(1, 1, 0, 1);
    let t = Mat2::new(1, 0, 1, 1);
    // twist the second coordinate by conjugation with diag(2, 1)
    let c = Mat2::diag(2, 1);
    let ci = f5.mat_inv(&c).unwrap();
    let tw = |m: &Mat2| f5.mat_mul(&f5.mat_mul(&c, m), &ci);
    for extra in [None, Some(vec![Mat2::IDENTITY, Mat2::new(4, 0, 0, 4)])] {
        let mut gens = vec![vec![s, tw(&s)], vec![t, tw(&t)]];
        gens.extend(extra);
        let u = closure(gens, amb.clone(), DEFAULT_BOUND).unwrap();
        let g = goursat_classify(&u, 1, None).unwrap();
        let rebuilt = goursat_reconstruct(u.ambient(), 1, &g).unwrap();
        let orig: HashSet<Elem> = u.elements().unwrap().iter().cloned().collect();
        assert_eq!(rebuilt.into_iter().collect::<HashSet<Elem>>(), orig);
    }
}

#[test]
fn counterexample_indices() {
    for (ps, idx) in [(vec![3u64, 5], 2u64), (vec![3, 5, 7], 4), (vec![3, 7, 11], 4), (vec![3, 5, 7, 11], 8)] {
        let r = counterexample_subgroup(&ps).unwrap();
        assert!(r.is_subgroup && r.projections_surjective);
        assert_eq!(r.index, idx);
    }
}

#[test]
fn trivial_twist_groups_impose_no_condition() {
    let k = NumberFieldQ::rationals();
    let mk = |level: u64, chi: DirichletCharacter| {
        let ap = primes_up_to(60).into_iter().map(|l| (l, k.from_int(1))).collect();
        Newform::new("t".into(), level, 2, FieldCharacter::from_real(&k, chi).unwrap(), k.clone(), ap, None).unwrap()
    };
    let f = mk(3, DirichletCharacter::kronecker(-3));
    let g = mk(5, DirichletCharacter::kronecker(5));
    let tf = detect_inner_twists(&f, &[], f.bound).unwrap();
    let tg = detect_inner_twists(&g, &[], g.bound).unwrap();
    let s = check_existence_tau(&PairData { f: &f, twists_f: &tf, g: &g, twists_g: &tg }, 7, (0, 0)).unwrap();
    let u = s.witness.as_ref().unwrap().u.unwrap();
    let ef = f.character.chi.eval_i64(u as i64).unwrap();
    let eg = g.character.chi.eval_i64(u as i64).unwrap();
    assert!(!ef.mul(&eg).is_one());
    assert_eq!(s.holds_v, Truth::Yes);
}

#[test]
fn tau_search_agrees_with_construction() {
    // the diagonal witness group: generated by the constructed pair itself
    let f7 = FiniteRing::prime_field(7).unwrap();
    let amb = vec![Factor::new(f7.clone(), Constraint::GL2), Factor::new(f7.clone(), Constraint::GL2)];
    let a = Mat2::diag(2, 3);
    let b = Mat2::diag(4, 6);
    let u = closure(vec![vec![a, b]], amb.clone(), DEFAULT_BOUND).unwrap();
    let w = tau_search_modp(&u, None).unwrap();
    let cert = tensor_coker_certificate(&f7, &a, &f7, &b).unwrap();
    assert_eq!(w.is_some(), cert.residue_rank == 3);
    let id = closure(vec![vec![Mat2::IDENTITY, Mat2::IDENTITY]], amb, DEFAULT_BOUND).unwrap();
    assert!(tau_search_modp(&id, None).unwrap().is_none());
}

fn det_histogram(r: &FiniteRing) -> Vec<u128> {
    let mut h = vec![0u128; r.size() as usize];
    for m in r.gl2_elements() {
        h[r.mat_det(&m) as usize] += 1;
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dagger_order_matches_enumeration(p in prop::sample::select(vec![5u64, 7]), weight in 1u32..7,
                                        degrees in prop::sample::select(vec![vec![1u32], vec![1, 1], vec![2]])) {
        let spec = GroupGSpec::new(p, weight, &degrees).unwrap();
        let hists: Vec<Vec<u128>> = spec.blocks().iter().map(det_histogram).collect();
        // a common determinant lying in F_p^× and of the form λ^{k−1}
        let powers: HashSet<u64> = (1..p).map(|l| adelic_core::arith::pow_mod(l, (weight - 1) as u64, p)).collect();
        let brute: u128 = powers.iter().map(|&d| hists.iter().map(|h| h[d as usize]).product::<u128>()).sum();
        prop_assert_eq!(dagger_group_modp(&spec).order, brute);
    }

    #[test]
    fn verdicts_are_certified(df in prop::sample::select(vec![-3i64, -4, 5, -7, 8, 12, 13]),
                              dg in prop::sample::select(vec![-3i64, -4, 5, -7, 8, 12, 13]),
                              p in prop::sample::select(vec![5u64, 11, 17, 19, 23])) {
        let k = NumberFieldQ::rationals();
        let mk = |d: i64| {
            let chi = DirichletCharacter::kronecker(d);
            let level = chi.modulus();
            let ap = primes_up_to(60).into_iter().map(|l| (l, k.from_int(1))).collect();
            Newform::new("t".into(), level, 2, FieldCharacter::from_real(&k, chi).unwrap(), k.clone(), ap, None).unwrap()
        };
        let (f, g) = (mk(df), mk(dg));
        let tf = detect_inner_twists(&f, &[], f.bound).unwrap();
        let tg = detect_inner_twists(&g, &[], g.bound).unwrap();
        let r = check_existence_tau(&PairData { f: &f, twists_f: &tf, g: &g, twists_g: &tg }, p, (0, 0));
        // primes dividing either level are rejected, never answered
        if f.level % p == 0 || g.level % p == 0 {
            let rejected = matches!(r, Err(HypError::BadPrime { .. }));
            prop_assert!(rejected);
            return Ok(());
        }
        let s = r.unwrap();
        prop_assert!(s.verify());
        prop_assert!(s.holds_t != Truth::Yes || s.holds_v == Truth::Yes);
        if df == dg {
            prop_assert_eq!((s.holds_v, s.holds_t), (Truth::No, Truth::No));
        }
    }
}
