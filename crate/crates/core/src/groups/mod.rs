//! Symplectic and orthogonal groups over F_ℓ: isometries, transvections,
//! reflections, spinor norm, closed-form orders and a Schreier-Sims
//! implementation acting on vectors.

mod bsgs;
mod isometry;

pub use bsgs::{Bsgs, DOMAIN_BUDGET};
pub use isometry::{
    check_arrangement_parity, kernel_class, pl_map, pl_sign, reflection_matrix, spinor_norm,
    transvection, vanishing_cycle_norm, Isometry, IsometrySpace, KernelClass,
};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, Symmetry};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("the form is degenerate")]
    DegenerateSpace,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("isotropic vector has no reflection")]
    IsotropicVector,
    #[error("matrix does not preserve the form")]
    NotAnIsometry,
    #[error("operation needs a {expected:?} form")]
    WrongSymmetry { expected: Symmetry },
    #[error("need m even and m >= n + 3, got n = {n}, m = {m}")]
    BadParity { n: u32, m: u32 },
    #[error("{label:?} is not supported in dimension {dim}")]
    UnsupportedDim { label: GroupLabel, dim: usize },
    #[error("ℓ = {ell} must be an odd prime")]
    BadCharacteristic { ell: u32 },
    #[error("action domain of size {size} exceeds the budget")]
    DomainBudgetExceeded { size: u64 },
    #[error("no generators supplied")]
    NoGenerators,
}

/// Target groups. Orthogonal labels refer to the isometry group of a fixed
/// symmetric space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupLabel {
    #[serde(rename = "SP")]
    Sp,
    #[serde(rename = "O")]
    O,
    #[serde(rename = "SO")]
    So,
    #[serde(rename = "O_KER_THETA")]
    OKerTheta,
    #[serde(rename = "O_KER_THETA_DET")]
    OKerThetaDet,
    #[serde(rename = "OMEGA")]
    Omega,
}

impl GroupLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupLabel::Sp => "SP",
            GroupLabel::O => "O",
            GroupLabel::So => "SO",
            GroupLabel::OKerTheta => "O_KER_THETA",
            GroupLabel::OKerThetaDet => "O_KER_THETA_DET",
            GroupLabel::Omega => "OMEGA",
        }
    }

    /// Index in the full orthogonal group (1 for Sp).
    pub fn index_in_full(self) -> u32 {
        match self {
            GroupLabel::Sp | GroupLabel::O => 1,
            GroupLabel::So | GroupLabel::OKerTheta | GroupLabel::OKerThetaDet => 2,
            GroupLabel::Omega => 4,
        }
    }

    /// Membership of an orthogonal element given its kernel class.
    pub fn admits(self, class: KernelClass) -> bool {
        match self {
            GroupLabel::Sp | GroupLabel::O => true,
            GroupLabel::So => class.in_so(),
            GroupLabel::OKerTheta => class.in_ker_theta(),
            GroupLabel::OKerThetaDet => class.in_ker_theta_det(),
            GroupLabel::Omega => class.in_omega(),
        }
    }
}

/// A concrete group: label, dimension, ℓ, and for orthogonal groups the
/// square class of the discriminant (+1 square, -1 non-square).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub label: GroupLabel,
    pub dim: usize,
    pub ell: u32,
    pub disc_class: i8,
}

impl GroupSpec {
    pub fn for_space(label: GroupLabel, space: &IsometrySpace) -> Self {
        let disc_class = match space.symmetry() {
            Symmetry::Symmetric => space.discriminant_class(),
            Symmetry::Alternating => 1,
        };
        Self { label, dim: space.dim(), ell: space.field().p(), disc_class }
    }
}

/// Witt type ε of an even-dimensional quadratic space: +1 when split
/// (`(-1)^{dim/2} disc` a square), -1 otherwise. Odd dimensions return 0.
pub fn orthogonal_type(dim: usize, ell: u32, disc_class: i8) -> i8 {
    if dim % 2 == 1 {
        return 0;
    }
    let minus_one_class: i8 = if ell % 4 == 1 { 1 } else { -1 };
    let half = dim / 2;
    let sign = if half.is_multiple_of(2) { 1 } else { minus_one_class };
    sign * disc_class
}

/// Closed-form order.
pub fn group_order(spec: &GroupSpec) -> Result<BigUint, GroupError> {
    let ell = spec.ell;
    if ell < 3 || ell.is_multiple_of(2) {
        return Err(GroupError::BadCharacteristic { ell });
    }
    let l = BigUint::from(ell);
    let dim = spec.dim;
    let prod = |upto: usize| -> BigUint {
        (1..=upto).fold(BigUint::one(), |acc, i| acc * (l.pow(2 * i as u32) - BigUint::one()))
    };
    if spec.label == GroupLabel::Sp {
        if dim == 0 || dim % 2 == 1 {
            return Err(GroupError::UnsupportedDim { label: spec.label, dim });
        }
        let g = dim / 2;
        return Ok(l.pow((g * g) as u32) * prod(g));
    }
    let min_dim = if spec.label == GroupLabel::Omega { 3 } else { 2 };
    if dim < min_dim {
        return Err(GroupError::UnsupportedDim { label: spec.label, dim });
    }
    let full = if dim % 2 == 1 {
        let k = dim / 2;
        BigUint::from(2u32) * l.pow((k * k) as u32) * prod(k)
    } else {
        let k = dim / 2;
        let eps = orthogonal_type(dim, ell, spec.disc_class);
        let lk = l.pow(k as u32);
        let middle = if eps == 1 { lk - BigUint::one() } else { lk + BigUint::one() };
        BigUint::from(2u32) * l.pow((k * (k - 1)) as u32) * middle * prod(k - 1)
    };
    Ok(full / spec.label.index_in_full())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn order(label: GroupLabel, dim: usize, ell: u32, disc: i8) -> BigUint {
        group_order(&GroupSpec { label, dim, ell, disc_class: disc }).unwrap()
    }

    #[test]
    fn known_orders() {
        assert_eq!(order(GroupLabel::Sp, 2, 3, 1), BigUint::from(24u32));
        assert_eq!(order(GroupLabel::Sp, 4, 3, 1), BigUint::from(51840u32));
        assert_eq!(order(GroupLabel::Sp, 2, 5, 1), BigUint::from(120u32));
        // O(3, ℓ) = 2 * ℓ (ℓ^2 - 1)
        assert_eq!(order(GroupLabel::O, 3, 5, 1), BigUint::from(240u32));
        // O^+(2, ℓ) is dihedral of order 2(ℓ - 1), O^-(2, ℓ) of order 2(ℓ + 1)
        assert_eq!(order(GroupLabel::O, 2, 5, -1), BigUint::from(12u32));
        assert_eq!(order(GroupLabel::O, 2, 5, 1), BigUint::from(8u32));
        assert_eq!(order(GroupLabel::O, 2, 7, 1), BigUint::from(16u32));
        assert_eq!(order(GroupLabel::Omega, 3, 5, 1), BigUint::from(60u32));
    }

    #[test]
    fn unsupported_dimensions() {
        let spec = |label, dim| GroupSpec { label, dim, ell: 5, disc_class: 1 };
        assert!(matches!(
            group_order(&spec(GroupLabel::Omega, 2)),
            Err(GroupError::UnsupportedDim { .. })
        ));
        assert!(matches!(
            group_order(&spec(GroupLabel::O, 1)),
            Err(GroupError::UnsupportedDim { .. })
        ));
        assert!(matches!(
            group_order(&spec(GroupLabel::Sp, 3)),
            Err(GroupError::UnsupportedDim { .. })
        ));
        assert!(matches!(
            group_order(&GroupSpec { label: GroupLabel::Sp, dim: 2, ell: 4, disc_class: 1 }),
            Err(GroupError::BadCharacteristic { ell: 4 })
        ));
    }

    /// Nonzero isotropic vectors counted by brute force against the closed
    /// form, which is what pins down the Witt type.
    #[test]
    fn orthogonal_type_matches_isotropic_count() {
        for ell in [3u64, 5, 7, 11] {
            let f = PrimeField::new(ell).unwrap();
            let ns = f.nonsquare() as i64;
            for dim in 2..=4usize {
                for last in [1, ns] {
                    let mut diag = vec![1i64; dim];
                    diag[dim - 1] = last;
                    let space = IsometrySpace::diagonal(f, &diag).unwrap();
                    let total = (ell as usize).pow(dim as u32);
                    let mut count = 0u64;
                    let mut v = vec![0u32; dim];
                    for code in 1..total {
                        let mut c = code;
                        for x in v.iter_mut() {
                            *x = (c % ell as usize) as u32;
                            c /= ell as usize;
                        }
                        if space.norm(&v) == 0 {
                            count += 1;
                        }
                    }
                    let l = ell as i64;
                    let expected = if dim % 2 == 0 {
                        let k = dim as u32 / 2;
                        let eps = orthogonal_type(dim, ell as u32, space.discriminant_class()) as i64;
                        (l.pow(k) - eps) * (l.pow(k - 1) + eps)
                    } else {
                        l.pow(dim as u32 - 1) - 1
                    };
                    assert_eq!(count as i64, expected, "ell={ell} dim={dim} last={last}");
                }
            }
        }
    }

    #[test]
    fn index_relations() {
        for dim in 3..=6 {
            for disc in [1, -1] {
                let full = order(GroupLabel::O, dim, 7, disc);
                assert_eq!(&full / order(GroupLabel::OKerTheta, dim, 7, disc), BigUint::from(2u32));
                assert_eq!(&full / order(GroupLabel::Omega, dim, 7, disc), BigUint::from(4u32));
            }
        }
    }
}
