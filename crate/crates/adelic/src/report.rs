//! The report value: JSON is canonical, text is a rendering of the same value.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

pub const TOOL: &str = "adelic-image";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Theorems every verdict is conditional on, listed once per report.
pub const BASE_ASSUMPTIONS: [&str; 3] = [
    "large image: at good p the image of each form on H is the expected group (Momose-Ribet)",
    "pair dichotomy: the pair image on H is open unless the forms are twist-related up to conjugation",
    "Galois lifting: a residual witness tau is realised over the cyclotomic Z_p-tower",
];

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Inputs {
    pub forms: Vec<String>,
    pub primes: [u64; 2],
    pub bound: u64,
    pub seed: u64,
    pub hyp: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CharEntry {
    pub modulus: u64,
    pub conductor: u64,
    pub order: u64,
    /// `[generator, order, exponent]` triples.
    pub images: Vec<[u64; 3]>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TwistEntry {
    pub auto_image: Vec<String>,
    pub char: CharEntry,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TwistGroupEntry {
    pub bound: u64,
    pub order: usize,
    pub abelian: bool,
    pub twists: Vec<TwistEntry>,
    pub tag: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckEntry {
    pub holds: bool,
    pub first_failure: Option<u64>,
    pub tag: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PapierEntry {
    pub u: u64,
    pub residue_poly: Vec<u64>,
    pub alpha: u64,
    pub eps_u: u64,
    pub coset: [u64; 4],
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PrimeEntry {
    pub p: u64,
    pub blocks: Vec<u32>,
    pub dagger_order: String,
    pub brute_force_agrees: Option<bool>,
    pub papier: Vec<PapierEntry>,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FormAnalysis {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub field_poly: Vec<String>,
    pub character: CharEntry,
    pub coefficient_bound: u64,
    pub ramanujan_flags: Vec<u64>,
    pub inner_twists: TwistGroupEntry,
    pub conjugate_twist: Option<CheckEntry>,
    pub self_twist_disc: Option<i64>,
    pub fixed_field_degree: usize,
    pub skipped_primes: Vec<u64>,
    pub primes: Vec<PrimeEntry>,
    pub conclusion: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EvidenceEntry {
    pub gamma: Vec<String>,
    pub matched: u64,
    pub tested: u64,
    pub first_counterexample: Option<u64>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ScanEntry {
    pub outcome: String,
    pub primes: Vec<u64>,
    pub gcd: Option<String>,
    pub ells_tested: usize,
    pub excluded: Vec<u64>,
    pub l_bound: u64,
    pub p_bound: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DatumEntry {
    pub v: usize,
    pub w: usize,
    pub frobenius: u32,
    pub conjugator: [u64; 4],
    pub sign_rule: String,
    pub exponent: i64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LocalEntry {
    pub p: u64,
    pub synthetic_image: String,
    pub verdict: String,
    pub datum: Option<DatumEntry>,
    pub witness_order: Option<u64>,
    pub evidence: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AuditEntry {
    pub open: bool,
    pub index_bound: Option<String>,
    pub failing: Option<String>,
    pub assumptions: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessEntry {
    pub u: Option<u64>,
    pub m: u64,
    pub ring: String,
    pub a: [u64; 4],
    pub b: [u64; 4],
    pub residue_rank: usize,
    pub local_profile: Vec<Option<u32>>,
    pub free_rank_one: bool,
    pub char0_rank: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HypCheckEntry {
    pub criterion: String,
    pub holds_v: String,
    pub holds_t: String,
    pub failure: Option<String>,
    pub witness: Option<WitnessEntry>,
    pub verified: bool,
    pub conditions: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GoodPrimeEntry {
    pub good: bool,
    pub at_least_7: bool,
    pub coprime_to_levels: bool,
    pub unramified_in_l: bool,
    pub outside_scan: Option<bool>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HypPrimeEntry {
    pub p: u64,
    pub good_prime: GoodPrimeEntry,
    pub checks: Vec<HypCheckEntry>,
    pub skipped: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PairAnalysis {
    pub f: String,
    pub g: String,
    pub twist_evidence: Vec<EvidenceEntry>,
    pub twist_evidence_error: Option<String>,
    pub scan: Option<ScanEntry>,
    pub scan_error: Option<String>,
    pub entanglement: Vec<LocalEntry>,
    pub audit: Option<AuditEntry>,
    pub hyp: Vec<HypPrimeEntry>,
    pub headline: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub inputs: Inputs,
    pub forms: Vec<FormAnalysis>,
    pub pair: Option<PairAnalysis>,
    pub assumptions: Vec<String>,
}

impl Report {
    pub fn new(command: &str, inputs: Inputs) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            inputs,
            forms: Vec::new(),
            pair: None,
            assumptions: BASE_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Append assumptions not already listed, keeping first-seen order.
    pub fn assume<I: IntoIterator<Item = String>>(&mut self, items: I) {
        let mut seen: BTreeSet<String> = self.assumptions.iter().cloned().collect();
        for s in items {
            if seen.insert(s.clone()) {
                self.assumptions.push(s);
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.tool, self.version, self.command);
        let _ = writeln!(
            out,
            "forms: {}  primes: {}..{}  bound: {}",
            self.inputs.forms.join(", "),
            self.inputs.primes[0],
            self.inputs.primes[1],
            self.inputs.bound
        );
        for f in &self.forms {
            let _ = writeln!(
                out,
                "\n[{}] level {} weight {} [L:Q] = {}",
                f.label,
                f.level,
                f.weight,
                f.field_poly.len() - 1
            );
            let _ = writeln!(out, "  inner twists: {} ({})", f.inner_twists.order, f.inner_twists.tag);
            if let Some(c) = &f.conjugate_twist {
                let _ = writeln!(out, "  conjugate = twist by eps^-1: {}", if c.holds { "verified" } else { "FAILED" });
            }
            if let Some(d) = f.self_twist_disc {
                let _ = writeln!(out, "  self-twist by disc {d} (evidence)");
            }
            for p in &f.primes {
                let ok = match p.brute_force_agrees {
                    Some(true) => " (brute force agrees)",
                    Some(false) => " (BRUTE FORCE DISAGREES)",
                    None => "",
                };
                let _ = writeln!(out, "  p = {:>4}  blocks {:?}  |G(F_p)| = {}{}", p.p, p.blocks, p.dagger_order, ok);
            }
            let _ = writeln!(out, "  {}", f.conclusion);
        }
        if let Some(pair) = &self.pair {
            let _ = writeln!(out, "\n[pair {} x {}] {}", pair.f, pair.g, pair.headline);
            for e in &pair.twist_evidence {
                let _ = writeln!(out, "  twist evidence {:?}: {}/{}", e.gamma, e.matched, e.tested);
            }
            if let Some(s) = &pair.scan {
                let _ = writeln!(out, "  exceptional scan: {} {:?}", s.outcome, s.primes);
            }
            for l in &pair.entanglement {
                let _ = writeln!(out, "  p = {:>4}  {} ({})", l.p, l.verdict, l.synthetic_image);
            }
            if let Some(a) = &pair.audit {
                let _ = writeln!(out, "  audit: open = {}", a.open);
            }
            for h in &pair.hyp {
                for c in &h.checks {
                    let _ = writeln!(
                        out,
                        "  p = {:>4}  {:<22} V = {:<7} T = {:<7}",
                        h.p, c.criterion, c.holds_v, c.holds_t
                    );
                }
            }
        }
        let _ = writeln!(out, "\nassumptions:");
        for a in &self.assumptions {
            let _ = writeln!(out, "  - {a}");
        }
        out
    }
}
