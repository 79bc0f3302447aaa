use serde::Serialize;

use crate::arrangement::{hyperelliptic_image, PointsOnLine};
use crate::linalg::PolyZ;
use crate::wedge::wedge_char_poly;
use crate::zeta::{frobenius_charpoly, ZetaChecks};

use super::{serialize_poly, MonodromyError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticReport {
    pub q: u64,
    pub m: usize,
    pub n: usize,
    /// Points as field-element codes `(a, b)`.
    pub points: Vec<(u64, u64)>,
    /// Frobenius polynomial of the curve `y² = Π (b_i x - a_i)`.
    #[serde(serialize_with = "serialize_poly")]
    pub curve_poly: PolyZ,
    /// Frobenius polynomial of the n-dimensional double cover of the image arrangement.
    #[serde(serialize_with = "serialize_poly")]
    pub cover_poly: PolyZ,
    /// `∧ⁿ` of the curve polynomial.
    #[serde(serialize_with = "serialize_poly")]
    pub wedge_poly: PolyZ,
    pub curve_checks: ZetaChecks,
    pub cover_checks: ZetaChecks,
    pub equal: bool,
}

/// Count the curve branched at `pts` and the n-dimensional cover branched
/// along the image arrangement independently, then compare the cover's
/// polynomial with the n-th wedge of the curve's.
pub fn hyperelliptic_consistency(pts: &PointsOnLine, n: usize) -> Result<HyperellipticReport, MonodromyError> {
    let field = pts.field();
    let m = pts.len();
    if (field.order() + 1) < m as u64 {
        return Err(MonodromyError::TooFewPoints { q: field.order(), m });
    }
    let curve = frobenius_charpoly(&hyperelliptic_image(pts, 1)?)?;
    let cover = frobenius_charpoly(&hyperelliptic_image(pts, n)?)?;
    let wedge_poly = wedge_char_poly(&curve.poly, n)?;
    Ok(HyperellipticReport {
        q: field.order(),
        m,
        n,
        points: pts.points().iter().map(|&(a, b)| (a.code(), b.code())).collect(),
        equal: cover.poly == wedge_poly,
        curve_poly: curve.poly,
        cover_poly: cover.poly,
        wedge_poly,
        curve_checks: curve.checks,
        cover_checks: cover.checks,
    })
}
