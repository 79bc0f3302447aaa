//! Point counting on double covers of Pⁿ branched along hyperplane
//! arrangements, Frobenius characteristic polynomials from the trace
//! formula, reduction modulo ℓ, and irreducibility over Z.

mod count;
mod irreducible;
mod record;

pub use count::{count_points, count_points_direct, extension_field, projective_size};
pub use irreducible::{
    irreducible_over_z, mignotte_bound, IrreducibilityMethod, IrreducibilityStatus,
    IrreducibilityVerdict, CERTIFICATE_PRIMES, MAX_DEGREE,
};
pub use record::{
    factor_pattern_mod, frobenius_charpoly, frobenius_charpoly_with, normalize_mod_ell,
    CountMode, ZetaChecks, ZetaRecord,
};

use thiserror::Error;

use crate::arrangement::ArrangementError;
use crate::field::FieldError;
use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("arrangement is not in general position")]
    NotGeneralPosition,
    #[error("field of order {order} exceeds the table budget {budget}")]
    TableBudgetExceeded { order: u64, budget: u64 },
    #[error("extension level must be at least 1")]
    ZeroLevel,
    #[error("point count overflows")]
    CountOverflow,
    #[error("point counts are inconsistent: {0}")]
    InconsistentCounts(LinalgError),
    #[error("the functional-equation shortcut needs n odd")]
    HalfModeNeedsOddN,
    #[error("polynomial must be monic of positive degree")]
    NotMonic,
    #[error("degree {degree} exceeds the irreducibility budget {max}")]
    DegreeBudgetExceeded { degree: usize, max: usize },
    #[error("multiplier {multiplier} is not a square mod {ell}")]
    NonSquareMultiplier { multiplier: u32, ell: u32 },
    #[error("ℓ = {ell} equals the characteristic of the base field")]
    CharacteristicClash { ell: u32 },
}
