//! Dense exact linear algebra over F_ℓ and over Z.

mod bilinear;
mod intmat;
mod matff;
mod polyz;

pub use bilinear::{BilinearSpace, Symmetry};
pub use intmat::{int_charpoly, IntMatrix};
pub use matff::{char_poly_ff, det_ff, MatFF};
pub use polyz::{newton_charpoly, poly_reduce_mod, PolyZ};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("Gram matrix does not match the {0:?} symmetry flag")]
    SymmetryMismatch(Symmetry),
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("symplectic spaces need even positive dimension, got {0}")]
    OddSymplecticDim(usize),
    #[error("need {needed} power sums, got {got}")]
    TooFewPowerSums { needed: usize, got: usize },
    #[error("Newton identity division by {k} is not exact: power sums are inconsistent")]
    NonIntegralDivision { k: usize },
}
