use rand::Rng;
use serde::Serialize;

use crate::field::{is_prime, PrimeField};
use crate::groups::{
    kernel_class, pl_map, vanishing_cycle_norm, GroupLabel, Isometry, IsometrySpace, KernelClass,
};
use crate::seed;
use crate::wedge::WedgeSpace;

use super::MonodromyError;

/// Which clause of the case split decided the label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reason {
    /// n odd: the full symplectic group.
    #[serde(rename = "(1)")]
    OddN,
    /// n ≡ 0 mod 4.
    #[serde(rename = "(i)")]
    NDivisibleByFour,
    /// n ≡ 2 mod 4 and ℓ ≡ 1 mod 4, so -1 is a square.
    #[serde(rename = "(ii)")]
    MinusOneSquare,
    #[serde(rename = "otherwise")]
    Otherwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub n: u32,
    pub ell: u32,
    pub label: GroupLabel,
    pub reason: Reason,
}

/// Predicted mod-ℓ monodromy group of the n-dimensional family.
pub fn predict_group(n: u32, ell: u32) -> Result<Prediction, MonodromyError> {
    if ell < 3 || !is_prime(ell as u64) {
        return Err(MonodromyError::BadEll { ell });
    }
    if n == 0 {
        return Err(MonodromyError::ZeroN);
    }
    let (label, reason) = if n % 2 == 1 {
        (GroupLabel::Sp, Reason::OddN)
    } else if ell == 3 {
        return Err(MonodromyError::SmallEllForEvenN { n });
    } else if n.is_multiple_of(4) {
        (GroupLabel::OKerTheta, Reason::NDivisibleByFour)
    } else if ell % 4 == 1 {
        (GroupLabel::OKerTheta, Reason::MinusOneSquare)
    } else {
        (GroupLabel::OKerThetaDet, Reason::Otherwise)
    };
    Ok(Prediction { n, ell, label, reason })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseSplitRow {
    pub n: u32,
    pub m: u32,
    pub ell: u32,
    /// Dimension `C(m-2, n)` of the model space.
    pub dim: usize,
    /// `(δ, δ)` in F_ℓ.
    pub delta_norm: u32,
    pub prediction: Prediction,
    /// Spinor norm and determinant of the Picard-Lefschetz reflection.
    pub reflection: KernelClass,
    /// The reflection lies in the predicted kernel and not in the other one.
    pub reflection_matches: bool,
    pub minus_identity: KernelClass,
    pub minus_identity_in_prediction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseSplitReport {
    pub rows: Vec<CaseSplitRow>,
    /// Every reflection landed in its predicted kernel.
    pub reflections_match: bool,
    /// Every `-id` landed in its predicted kernel.
    pub minus_identity_matches: bool,
}

/// For each `(n, m, ℓ)` build `∧ⁿ` of the standard symplectic space of
/// dimension `m - 2` (a symmetric space for n even), pick δ with
/// `(δ, δ) = (-1)^{n/2} / 2^{m-n-2}`, and compare the kernel membership of
/// the Picard-Lefschetz reflection in δ with [`predict_group`].
pub fn verify_case_split(grid: &[(u32, u32, u32)], root_seed: u64) -> Result<CaseSplitReport, MonodromyError> {
    let mut rows = Vec::with_capacity(grid.len());
    for (idx, &(n, m, ell)) in grid.iter().enumerate() {
        if n == 0 || n % 2 == 1 || m % 2 == 1 || m < n + 4 || ell < 5 || !is_prime(ell as u64) {
            return Err(MonodromyError::BadGrid { n, m, ell });
        }
        let prediction = predict_group(n, ell)?;
        let field = PrimeField::new(ell as u64)?;
        let base = IsometrySpace::standard_symplectic(field, (m - 2) as usize)?;
        let wedge = WedgeSpace::new(base, n as usize)?;
        let space = wedge.space().clone();
        let target = vanishing_cycle_norm(field, n, m);
        let mut rng = seed::rng_for(root_seed, "case-split", idx as u64);
        let delta = vector_of_norm(&space, target, &mut rng);
        let t = pl_map(&space, &delta, n, m)?;
        let reflection = kernel_class(&t)?;
        let other = match prediction.label {
            GroupLabel::OKerTheta => GroupLabel::OKerThetaDet,
            _ => GroupLabel::OKerTheta,
        };
        let reflection_matches = prediction.label.admits(reflection) && !other.admits(reflection);
        let minus_identity = kernel_class(&Isometry::minus_identity(space.clone()))?;
        rows.push(CaseSplitRow {
            n,
            m,
            ell,
            dim: space.dim(),
            delta_norm: space.norm(&delta),
            prediction,
            reflection,
            reflection_matches,
            minus_identity,
            minus_identity_in_prediction: prediction.label.admits(minus_identity),
        });
    }
    Ok(CaseSplitReport {
        reflections_match: rows.iter().all(|r| r.reflection_matches),
        minus_identity_matches: rows.iter().all(|r| r.minus_identity_in_prediction),
        rows,
    })
}

/// Random vector of the prescribed nonzero norm in a nondegenerate
/// symmetric space of dimension at least 2 (every nonzero value is a norm).
fn vector_of_norm<R: Rng>(space: &IsometrySpace, target: u32, rng: &mut R) -> Vec<u32> {
    let f = space.field();
    loop {
        let v: Vec<u32> = (0..space.dim()).map(|_| rng.gen_range(0..f.p())).collect();
        let nv = space.norm(&v);
        let Some(inv) = f.inv(nv) else { continue };
        if let Some(s) = f.sqrt_smallest(f.mul(target, inv)) {
            return v.iter().map(|&x| f.mul(x, s)).collect();
        }
    }
}
