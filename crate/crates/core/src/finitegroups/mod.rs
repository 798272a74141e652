//! Arithmetic and subgroup analysis for 2×2 matrix groups over `Z/p^n` and
//! `F_{p^f}`: closures, the lifting criterion, Dickson classes and tensor
//! cokernel certificates.

mod closure;
mod dickson;
mod lifting;
mod mat2;
mod ring;
mod tensor;

pub use closure::{
    ambient_order, closure, elem_identity, elem_inv, elem_mul, Constraint, Elem, Factor, SubgroupClosure, DEFAULT_BOUND,
};
pub use dickson::{class_consistent, dickson_classify, pgl2_elements, psl2_order, Psl2Class};
pub use lifting::{is_full_sl2_lift, random_sl2};
pub use mat2::Mat2;
pub use ring::{FiniteRing, RingKind};
pub use tensor::{
    integer_smith_normal_form, kronecker_minus_identity, local_smith_profile, rank_over_field,
    tensor_coker_certificate, TensorCertificate,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("closure exceeded the bound of {bound} elements")]
    OverflowBound { bound: u64 },
    #[error("generator {index} violates the ambient constraint")]
    InvalidGenerator { index: usize },
    #[error("prime {p} is too small for this check (need p >= 5)")]
    SmallPrime { p: u64 },
    #[error("subgroup has not been enumerated")]
    NotEnumerated,
    #[error("matrices live over rings of different characteristic")]
    MixedCharacteristic,
    #[error("rings share a characteristic but have no common presentation")]
    RingMismatch,
    #[error("invalid ring parameters")]
    InvalidRing,
    #[error("PGL2 search is limited to q <= 11 (got q = {q})")]
    Unsupported { q: u64 },
    #[error("subgroup matches no class in the Dickson list")]
    Unclassified,
    #[error("expected a single PSL2 factor over a finite field")]
    NotPsl2Ambient,
}
