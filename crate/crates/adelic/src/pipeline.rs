//! Single-form and pair analyses assembled into report sections.

use adelic_core::arith::{is_prime, pow_mod};
use adelic_core::characters::unit_group;
use adelic_core::finitegroups::{closure, Elem, FiniteRing, Mat2, DEFAULT_BOUND};
use adelic_core::hypcheck::{
    check_cm_case, check_existence_tau, check_existence_tau_ii, check_weight_one, good_prime, HypStatus, PairData,
    Truth,
};
use adelic_core::imageanalysis::{
    adelic_openness_audit, dagger_group_modp, exceptional_prime_scan, pair_ambient, pair_entanglement_classify,
    papier_coset, papier_verify, DetImage, GroupGSpec, LocalImageReport, ScanOutcome, SignRule, Verdict,
};
use adelic_core::newforms::{
    detect_inner_twists, detect_self_twist, twist_relation_evidence, FieldCharacter, InnerTwistGroup, Newform,
};
use adelic_core::numberfields::{residue_primes, FieldAutomorphism, NfElem};
use num_bigint::BigInt;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::AppError;
use crate::numerics::complex_conjugation;
use crate::report::*;
use crate::schema::LoadedForm;

/// Fibre products larger than this are not enumerated.
pub const ENUMERATION_LIMIT: u128 = 3_000_000;
/// Per-block size up to which dagger orders are cross-checked by enumeration.
pub const BRUTE_FORCE_Q: u64 = 25;
pub const SCAN_L_BOUND: u64 = 200;
pub const SCAN_P_BOUND: u64 = 1000;

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub primes: (u64, u64),
    pub bound: Option<u64>,
    pub seed: u64,
    pub hyp: bool,
    pub generic_weight_one: bool,
}

pub fn elem_strings(e: &NfElem) -> Vec<String> {
    e.coords().iter().map(|c| c.to_string()).collect()
}

pub fn char_entry(c: &FieldCharacter) -> CharEntry {
    let chi = &c.chi;
    let images = chi.group().generators().iter().zip(chi.images()).map(|(&g, z)| [g, z.order(), z.exp()]).collect();
    CharEntry { modulus: chi.modulus(), conductor: chi.conductor(), order: chi.order(), images }
}

fn mat(m: &Mat2) -> [u64; 4] {
    m.entries()
}

/// Exhaustive dagger order: determinant histograms of each block, summed over
/// common determinants of the form `λ^{1−k}`.
pub fn brute_dagger_order(spec: &GroupGSpec) -> u128 {
    let p = spec.p();
    let hists: Vec<Vec<u128>> = spec
        .blocks()
        .iter()
        .map(|r| {
            let mut h = vec![0u128; r.size() as usize];
            for m in r.gl2_elements() {
                h[r.mat_det(&m) as usize] += 1;
            }
            h
        })
        .collect();
    let e = (spec.weight() as u64 + p - 2) % (p - 1);
    let dets: std::collections::BTreeSet<u64> = (1..p).map(|l| pow_mod(l, e, p)).collect();
    dets.iter().map(|&d| hists.iter().map(|h| h[d as usize]).product::<u128>()).sum()
}

fn bound_for(f: &Newform, requested: Option<u64>) -> Result<u64, AppError> {
    let b = requested.unwrap_or(f.bound);
    if b < 37 {
        return Err(AppError::Usage(format!("coefficient bound {b} is below 37")));
    }
    if b > f.bound {
        return Err(AppError::Math(format!("{}: bound {b} exceeds the coefficient bound {}", f.label, f.bound)));
    }
    Ok(b)
}

pub fn twist_group(lf: &LoadedForm, bound: u64) -> Result<InnerTwistGroup, AppError> {
    detect_inner_twists(&lf.form, &lf.automorphisms, bound).map_err(AppError::math)
}

/// Whether `f̄ = f ⊗ ε⁻¹` holds, with complex conjugation located numerically.
pub fn conjugate_check(lf: &LoadedForm, bound: u64) -> Result<Option<CheckEntry>, AppError> {
    let f = &lf.form;
    if f.character.is_trivial() {
        return Ok(None);
    }
    let Some(conj) = complex_conjugation(&f.field, &lf.automorphisms) else {
        return Ok(Some(CheckEntry {
            holds: false,
            first_failure: None,
            tag: "complex conjugation is not among the supplied automorphisms".into(),
        }));
    };
    let out = adelic_core::newforms::verify_inner_twist(f, &conj, &f.character.inv(&f.field), bound)
        .map_err(AppError::math)?;
    Ok(Some(CheckEntry {
        holds: out.holds,
        first_failure: out.first_failure,
        tag: format!("verified for primes up to {bound}"),
    }))
}

fn excluded(f: &Newform, p: u64) -> bool {
    !is_prime(p) || p < 5 || f.level.is_multiple_of(p) || (f.field.discriminant() % BigInt::from(p)).is_zero()
}

fn prime_entry(lf: &LoadedForm, gamma: &InnerTwistGroup, p: u64, seed: u64) -> PrimeEntry {
    let f = &lf.form;
    let mut entry = PrimeEntry {
        p,
        blocks: Vec::new(),
        dagger_order: String::new(),
        brute_force_agrees: None,
        papier: Vec::new(),
        errors: Vec::new(),
    };
    match GroupGSpec::for_field(&f.field, &gamma.automorphisms(), p, f.weight, f.level) {
        Ok(spec) => {
            entry.blocks = spec.blocks().iter().map(FiniteRing::residue_degree).collect();
            let order = dagger_group_modp(&spec).order;
            entry.dagger_order = order.to_string();
            if spec.blocks().iter().all(|r| r.size() <= BRUTE_FORCE_Q) {
                entry.brute_force_agrees = Some(brute_dagger_order(&spec) == order);
            }
        }
        Err(e) => entry.errors.push(e.to_string()),
    }
    let Ok(primes) = residue_primes(&f.field, p) else {
        return entry;
    };
    let group = unit_group(gamma.modulus.max(1));
    let units: Vec<u64> = group.units().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17));
    let mut sample: Vec<u64> = (0..2).map(|_| units[(rng.next_u64() % units.len() as u64) as usize]).collect();
    sample.sort_unstable();
    sample.dedup();
    for u in sample {
        match papier_coset(&f.field, &gamma.twists, &f.character, f.level, &primes[0], u) {
            Ok(sol) => {
                let verified = papier_verify(&f.field, &gamma.twists, &sol).unwrap_or(false);
                entry.papier.push(PapierEntry {
                    u,
                    residue_poly: sol.prime.g.clone(),
                    alpha: sol.alpha,
                    eps_u: sol.eps_u,
                    coset: mat(&sol.coset),
                    verified,
                });
            }
            Err(e) => entry.errors.push(format!("papier u = {u}: {e}")),
        }
    }
    entry
}

pub fn twist_entries(g: &InnerTwistGroup) -> Vec<TwistEntry> {
    g.twists
        .iter()
        .map(|t| TwistEntry { auto_image: elem_strings(t.gamma.image()), char: char_entry(&t.chi) })
        .collect()
}

pub fn analyze_form(lf: &LoadedForm, opts: &Options) -> Result<FormAnalysis, AppError> {
    let f = &lf.form;
    let bound = bound_for(f, opts.bound)?;
    let gamma = twist_group(lf, bound)?;
    let conjugate_twist = conjugate_check(lf, bound)?;
    let self_twist_disc = detect_self_twist(f, bound).map_err(AppError::math)?.map(|(d, _)| d);
    let (lo, hi) = opts.primes;
    let (good, skipped): (Vec<u64>, Vec<u64>) = (lo..=hi).filter(|&p| is_prime(p)).partition(|&p| !excluded(f, p));
    let primes: Vec<PrimeEntry> = good.par_iter().map(|&p| prime_entry(lf, &gamma, p, opts.seed)).collect();
    let fixed_field_degree = f.field.degree() / gamma.automorphisms().len().max(1);
    let conclusion = if primes.iter().all(|p| p.errors.is_empty() && p.brute_force_agrees != Some(false)) {
        "image of H open in the expected group (conditional on the assumption ledger)".to_string()
    } else {
        "some primes could not be analysed; see per-prime errors".to_string()
    };
    Ok(FormAnalysis {
        label: f.label.clone(),
        level: f.level,
        weight: f.weight,
        field_poly: f.field.poly().iter().map(|c| c.to_string()).collect(),
        character: char_entry(&f.character),
        coefficient_bound: bound,
        ramanujan_flags: lf.ramanujan_flags.clone(),
        inner_twists: TwistGroupEntry {
            bound,
            order: gamma.order(),
            abelian: gamma.is_abelian(),
            twists: twist_entries(&gamma),
            tag: format!("evidence at bound {bound}"),
        },
        conjugate_twist,
        self_twist_disc,
        fixed_field_degree,
        skipped_primes: skipped,
        primes,
        conclusion,
    })
}

fn sl2_generators(ring: &FiniteRing) -> Vec<Mat2> {
    let mut v = vec![Mat2::new(1, 1, 0, 1), Mat2::new(1, 0, 1, 1)];
    if ring.residue_degree() > 1 {
        let x = ring.p();
        v.push(Mat2::new(1, x, 0, 1));
        v.push(Mat2::new(1, 0, x, 1));
    }
    v
}

fn fibre_order(fs: &GroupGSpec, gs: &GroupGSpec) -> u128 {
    let sl: u128 = fs
        .blocks()
        .iter()
        .chain(gs.blocks())
        .map(|r| {
            let q = r.size() as u128;
            q * (q * q - 1)
        })
        .product();
    sl * (fs.p() as u128 - 1)
}

/// Generators of the synthetic expected pair image: the full fibre product,
/// or its diagonal when the pair is twist-degenerate with matching blocks.
fn synthetic_generators(fs: &GroupGSpec, gs: &GroupGSpec, diagonal: bool) -> Vec<Elem> {
    let (a, b) = (fs.blocks().len(), gs.blocks().len());
    let p = fs.p();
    let fp = FiniteRing::prime_field(p).expect("prime");
    let lam = fp.generator().unwrap_or(1);
    let det_elem = |k: u32| Mat2::diag(pow_mod(fp.inv(lam).unwrap(), (k as u64 + p - 2) % (p - 1), p), 1);
    let mut gens = Vec::new();
    if diagonal {
        for (v, r) in fs.blocks().iter().enumerate() {
            for s in sl2_generators(r) {
                let mut e = vec![Mat2::IDENTITY; a + b + 1];
                e[v] = s;
                e[a + v] = s;
                gens.push(e);
            }
        }
    } else {
        for (v, r) in fs.blocks().iter().chain(gs.blocks()).enumerate() {
            for s in sl2_generators(r) {
                let mut e = vec![Mat2::IDENTITY; a + b + 1];
                e[v] = s;
                gens.push(e);
            }
        }
    }
    let mut top = vec![det_elem(fs.weight()); a];
    top.extend(vec![det_elem(gs.weight()); b]);
    top.push(Mat2::diag(lam, 1));
    gens.push(top);
    gens
}

fn verdict_name(v: &Verdict) -> String {
    match v {
        Verdict::FullDagger => "full".into(),
        Verdict::OpenIndexBounded(n) => format!("open of index <= {n}"),
        Verdict::Entangled(_) => "entangled".into(),
        Verdict::Unknown => "unknown".into(),
    }
}

fn local_entry(
    f: &Newform,
    g: &Newform,
    gf: &InnerTwistGroup,
    gg: &InnerTwistGroup,
    p: u64,
    degenerate: bool,
) -> Result<(LocalEntry, LocalImageReport), String> {
    let fs = GroupGSpec::for_field(&f.field, &gf.automorphisms(), p, f.weight, f.level).map_err(|e| e.to_string())?;
    let gs = GroupGSpec::for_field(&g.field, &gg.automorphisms(), p, g.weight, g.level).map_err(|e| e.to_string())?;
    let diagonal = degenerate && fs.blocks() == gs.blocks() && f.weight == g.weight;
    let synthetic = if diagonal { "diagonal" } else { "fibre product" };
    if fibre_order(&fs, &gs) > ENUMERATION_LIMIT {
        let rep = LocalImageReport {
            p,
            verdict: if diagonal { Verdict::Unknown } else { Verdict::FullDagger },
            evidence: vec!["not enumerated: expected image assumed".into()],
            witness_order: None,
        };
        let entry = LocalEntry {
            p,
            synthetic_image: synthetic.into(),
            verdict: verdict_name(&rep.verdict),
            datum: None,
            witness_order: None,
            evidence: rep.evidence.clone(),
        };
        return Ok((entry, rep));
    }
    let u = closure(synthetic_generators(&fs, &gs, diagonal), pair_ambient(&fs, &gs), DEFAULT_BOUND)
        .map_err(|e| e.to_string())?;
    let rep = pair_entanglement_classify(&u, &fs, &gs).map_err(|e| e.to_string())?;
    let datum = match &rep.verdict {
        Verdict::Entangled(d) => Some(DatumEntry {
            v: d.v,
            w: d.w,
            frobenius: d.frobenius,
            conjugator: mat(&d.conjugator),
            sign_rule: match d.rule {
                SignRule::Plus => "+",
                SignRule::Legendre => "legendre",
                SignRule::Both => "both",
            }
            .into(),
            exponent: d.exponent,
        }),
        _ => None,
    };
    let entry = LocalEntry {
        p,
        synthetic_image: synthetic.into(),
        verdict: verdict_name(&rep.verdict),
        datum,
        witness_order: rep.witness_order,
        evidence: rep.evidence.clone(),
    };
    Ok((entry, rep))
}

fn truth(t: Truth) -> String {
    match t {
        Truth::Yes => "yes",
        Truth::No => "no",
        Truth::Unknown => "unknown",
    }
    .into()
}

pub fn hyp_entry(s: &HypStatus) -> HypCheckEntry {
    HypCheckEntry {
        criterion: format!("{:?}", s.criterion),
        holds_v: truth(s.holds_v),
        holds_t: truth(s.holds_t),
        failure: s.failure.map(|f| format!("{f:?}")),
        witness: s.witness.as_ref().map(|w| WitnessEntry {
            u: w.u,
            m: w.m,
            ring: format!("F_{}^{}", w.ring.p(), w.ring.residue_degree()),
            a: mat(&w.a),
            b: mat(&w.b),
            residue_rank: w.certificate.residue_rank,
            local_profile: w.certificate.local_profile.clone(),
            free_rank_one: w.certificate.free_rank_one,
            char0_rank: w.char0_rank,
        }),
        verified: s.verify(),
        conditions: s.conditions.clone(),
    }
}

/// All applicable Hyp criteria at `p`, in a fixed order.
pub fn hyp_statuses(data: &PairData, p: u64, generic_weight_one: bool) -> (Vec<HypStatus>, Vec<String>) {
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    let mut push = |name: &str, r: Result<HypStatus, adelic_core::hypcheck::HypError>| match r {
        Ok(s) => out.push(s),
        Err(e) => skipped.push(format!("{name}: {e}")),
    };
    push("existence", check_existence_tau(data, p, (0, 0)));
    push("existence-twisted", check_existence_tau_ii(data, p));
    if data.g.cm_disc.is_some() {
        push("cm", check_cm_case(data, p, (0, 0)));
    }
    if data.g.weight == 1 {
        push("weight-one", check_weight_one(data.f, data.g, p, generic_weight_one));
    }
    (out, skipped)
}

pub fn analyze_pair(lf: &LoadedForm, lg: &LoadedForm, opts: &Options) -> Result<(PairAnalysis, Vec<String>), AppError> {
    let (f, g) = (&lf.form, &lg.form);
    let bound = bound_for(f, opts.bound)?.min(bound_for(g, opts.bound)?);
    let gf = twist_group(lf, bound)?;
    let gg = twist_group(lg, bound)?;
    let mut assumptions = Vec::new();

    let mut twist_evidence = Vec::new();
    let mut twist_evidence_error = None;
    for gamma in &lg.automorphisms {
        match twist_relation_evidence(f, g, gamma, bound, None) {
            Ok(e) => twist_evidence.push(EvidenceEntry {
                gamma: elem_strings(e.gamma.image()),
                matched: e.matched,
                tested: e.tested,
                first_counterexample: e.first_counterexample,
            }),
            Err(e) => {
                twist_evidence_error = Some(e.to_string());
                break;
            }
        }
    }
    let degenerate = twist_evidence.iter().any(|e| e.tested > 0 && e.matched == e.tested);

    let (hi, lo, hg, lgrp) = if f.weight >= g.weight { (f, g, &gf, &gg) } else { (g, f, &gg, &gf) };
    let lo_autos: Vec<FieldAutomorphism> =
        if lo.label == g.label { lg.automorphisms.clone() } else { lf.automorphisms.clone() };
    let l_bound = SCAN_L_BOUND.min(bound);
    let (scan, scan_error, scan_raw) =
        match exceptional_prime_scan(hi, lo, &[hg, lgrp], &lo_autos, l_bound, SCAN_P_BOUND, None) {
            Ok(s) => (Some(scan_entry(&s, l_bound)), None, Some(s)),
            Err(e) => (None, Some(e.to_string()), None),
        };

    let (a, b) = opts.primes;
    let good: Vec<u64> = (a..=b).filter(|&p| is_prime(p)).filter(|&p| good_prime(f, g, p, None).good).collect();
    let locals: Vec<Result<(LocalEntry, LocalImageReport), String>> =
        good.par_iter().map(|&p| local_entry(f, g, &gf, &gg, p, degenerate)).collect();
    let mut entanglement = Vec::new();
    let mut reports = Vec::new();
    let mut cover = Vec::new();
    for (p, r) in good.iter().zip(locals) {
        match r {
            Ok((e, rep)) => {
                if e.evidence.iter().any(|s| s.starts_with("not enumerated")) {
                    assumptions.push(format!("expected pair image assumed at p = {p} (not enumerated)"));
                }
                entanglement.push(e);
                reports.push(rep);
                cover.push(*p);
            }
            Err(msg) => entanglement.push(LocalEntry {
                p: *p,
                synthetic_image: String::new(),
                verdict: "error".into(),
                datum: None,
                witness_order: None,
                evidence: vec![msg],
            }),
        }
    }
    let det = DetImage { levels: Vec::new(), full_elsewhere: true };
    assumptions.push("determinant image open: a power of the cyclotomic character".into());
    let audit = if reports.is_empty() {
        None
    } else {
        adelic_openness_audit(&reports, &det, &cover).ok().map(|r| AuditEntry {
            open: r.open,
            index_bound: r.index_bound.map(|n| n.to_string()),
            failing: r.failing.map(|h| format!("{h:?}")),
            assumptions: r.assumptions,
        })
    };

    let mut hyp = Vec::new();
    if opts.hyp {
        let data = PairData { f, twists_f: &gf, g, twists_g: &gg };
        let per: Vec<HypPrimeEntry> = good
            .par_iter()
            .map(|&p| {
                let gp = good_prime(f, g, p, scan_raw.as_ref());
                let (statuses, skipped) = hyp_statuses(&data, p, opts.generic_weight_one);
                HypPrimeEntry {
                    p,
                    good_prime: GoodPrimeEntry {
                        good: gp.good,
                        at_least_7: gp.at_least_7,
                        coprime_to_levels: gp.coprime_to_levels,
                        unramified_in_l: gp.unramified_in_l,
                        outside_scan: gp.scan_support,
                    },
                    checks: statuses.iter().map(hyp_entry).collect(),
                    skipped,
                }
            })
            .collect();
        for h in &per {
            for c in &h.checks {
                // witness data stay with the check; only hypotheses are promoted
                assumptions
                    .extend(c.conditions.iter().filter(|s| s.contains("assum") || s.contains("disjoint")).cloned());
            }
        }
        hyp = per;
    }

    let headline = if degenerate {
        "twist-degenerate: g matches a conjugate twist of f at every tested prime".to_string()
    } else {
        match &scan_raw {
            Some(ScanOutcome::Candidates { primes, .. }) if primes.is_empty() => {
                "open image of H in the expected pair group (conditional); no exceptional primes".to_string()
            }
            Some(ScanOutcome::Candidates { primes, .. }) => {
                format!("open image of H in the expected pair group (conditional); exceptional candidates {primes:?}")
            }
            _ => "open image of H in the expected pair group (conditional)".to_string(),
        }
    };
    Ok((
        PairAnalysis {
            f: f.label.clone(),
            g: g.label.clone(),
            twist_evidence,
            twist_evidence_error,
            scan,
            scan_error,
            entanglement,
            audit,
            hyp,
            headline,
        },
        assumptions,
    ))
}

pub fn scan_entry(s: &ScanOutcome, l_bound: u64) -> ScanEntry {
    match s {
        ScanOutcome::AllPrimesCandidate { ells } => ScanEntry {
            outcome: "all-primes".into(),
            primes: Vec::new(),
            gcd: None,
            ells_tested: ells.len(),
            excluded: Vec::new(),
            l_bound,
            p_bound: SCAN_P_BOUND,
        },
        ScanOutcome::Candidates { primes, gcd, ells, excluded } => ScanEntry {
            outcome: "candidates".into(),
            primes: primes.clone(),
            gcd: Some(gcd.to_string()),
            ells_tested: ells.len(),
            excluded: excluded.clone(),
            l_bound,
            p_bound: SCAN_P_BOUND,
        },
        ScanOutcome::Insufficient { nonzero } => ScanEntry {
            outcome: format!("insufficient ({nonzero} nonzero)"),
            primes: Vec::new(),
            gcd: None,
            ells_tested: 0,
            excluded: Vec::new(),
            l_bound,
            p_bound: SCAN_P_BOUND,
        },
    }
}
