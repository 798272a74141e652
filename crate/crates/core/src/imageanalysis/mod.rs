//! Expected local images, the Papier coset solver, Goursat and entanglement
//! classification for pairs, exceptional-prime scans, a finite-level openness
//! audit, the Ẑ× counterexample and CM image patterns.

mod audit;
mod cm;
mod dagger;
mod entangle;
mod goursat;
mod papier;
mod scan;

pub use audit::{
    adelic_openness_audit, counterexample_subgroup, AuditResult, CounterexampleRecord, DetImage, FailingHypothesis,
};
pub use cm::{cm_expected_image_modp, CmImage};
pub use dagger::{dagger_group_modp, DaggerGroup, GroupGSpec};
pub use entangle::{
    pair_ambient, pair_entanglement_classify, regenerate, EntanglementDatum, LocalImageReport, Sign, SignRule, Verdict,
};
pub use goursat::{goursat_classify, goursat_reconstruct, GoursatResult};
pub use papier::{papier_coset, papier_verify, PapierSolution};
pub use scan::{exceptional_prime_scan, ScanOutcome};

use crate::finitegroups::GroupError;
use crate::newforms::NewformError;
use crate::numberfields::NfError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ImageError {
    #[error("prime {p} is not admissible here")]
    BadPrime { p: u64 },
    #[error("weights must be positive")]
    BadWeight,
    #[error("the Papier eigenvalue system has no nonzero solution")]
    NoSolution,
    #[error("subgroup does not surject onto the factor groups")]
    NotSurjectiveOntoFactors,
    #[error("a generator lies outside the fibre product")]
    NotInFibreProduct,
    #[error("no prime below the bound lies in H")]
    NoEligibleEll,
    #[error("the first form must have weight at least that of the second")]
    WeightOrder,
    #[error("reports do not cover primes {missing:?}")]
    IncompleteCover { missing: alloc::vec::Vec<u64> },
    #[error("at least two primes are required")]
    NeedTwoPrimes,
    #[error("primes must be distinct and odd")]
    BadPrimes,
    #[error("{p} ramifies in the CM field")]
    RamifiedInK { p: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] NfError),
    #[error(transparent)]
    Newform(#[from] NewformError),
}
