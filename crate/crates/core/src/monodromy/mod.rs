//! Group predictions and the verification harnesses built on the lower
//! layers: spinor-norm case split, generation certificates, wedge shears,
//! hyperelliptic consistency, irreducibility surveys and Frobenius
//! distribution diagnostics. Every report serializes to JSON.

mod certify;
mod distribution;
mod hyperelliptic;
mod predict;
mod shear;
mod survey;

pub use certify::{certify_generation, CertifyReport, Family, SubgroupCertificate};
pub use distribution::{frobenius_distribution, ComparisonMode, DistributionParams, DistributionReport, TV_THRESHOLD};
pub use hyperelliptic::{hyperelliptic_consistency, HyperellipticReport};
pub use predict::{predict_group, verify_case_split, CaseSplitReport, CaseSplitRow, Prediction, Reason};
pub use shear::{shear_survey, ShearSurveyReport};
pub use survey::{survey_irreducibility, SurveyLevel, SurveyReport};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::SerializeSeq;
use serde::Serializer;
use thiserror::Error;

use crate::arrangement::ArrangementError;
use crate::field::FieldError;
use crate::groups::GroupError;
use crate::linalg::{LinalgError, PolyZ};
use crate::wedge::WedgeError;
use crate::zeta::ZetaError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonodromyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("ℓ = {ell} is not an odd prime")]
    BadEll { ell: u32 },
    #[error("n must be at least 1")]
    ZeroN,
    #[error("ℓ = 3 with n = {n} even is outside the prediction's range")]
    SmallEllForEvenN { n: u32 },
    #[error("case split needs n, m even, m >= n + 4 and ℓ >= 5; got n = {n}, m = {m}, ℓ = {ell}")]
    BadGrid { n: u32, m: u32, ell: u32 },
    #[error("the survey needs n odd, got {n}")]
    SurveyNeedsOddN { n: usize },
    #[error("F_{q} has fewer than {m} points on the line")]
    TooFewPoints { q: u64, m: usize },
    #[error("{label} needs dimension {needed}, got {dim}")]
    BadDimension { label: &'static str, dim: usize, needed: &'static str },
    #[error("sign class must be +1 or -1, got {0}")]
    BadSignClass(i8),
}

/// Integer as a JSON number when it fits in i64, else as a decimal string.
pub(crate) fn serialize_big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

/// Coefficients in ascending degree, each as in [`serialize_big`].
pub(crate) fn serialize_poly<S: Serializer>(p: &PolyZ, s: S) -> Result<S::Ok, S::Error> {
    struct Big<'a>(&'a BigInt);
    impl serde::Serialize for Big<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize_big(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(p.coeffs().len()))?;
    for c in p.coeffs() {
        seq.serialize_element(&Big(c))?;
    }
    seq.end()
}
