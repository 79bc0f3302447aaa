//! Exact arithmetic in F_p and F_{p^k} for odd p.
//!
//! Prime fields are lightweight `Copy` contexts over raw `u32` residues.
//! Extension fields carry discrete-log, antilog and Zech tables when the
//! order fits [`TABLE_BUDGET`]; larger fields fall back to polynomial
//! arithmetic modulo the defining polynomial.

mod ext;
mod poly;
mod prime;

pub use ext::{
    embed_subfield, split_prime_power, Embedding, ExtField, FqElem, LogElem, LogTables, LOG_ZERO,
    TABLE_BUDGET,
};
pub use poly::PolyFp;
pub use prime::{is_prime, prime_factors, PrimeField, PrimeFieldElem, MAX_PRIME};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("characteristic 2 is not supported (2 must be invertible)")]
    EvenModulus,
    #[error("modulus {0} exceeds the supported prime range")]
    ModulusTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} overflows")]
    OrderOverflow { p: u64, k: u32 },
    #[error("field of order {order} exceeds the log-table budget")]
    TableBudgetExceeded { order: u64 },
    #[error("cannot embed a degree-{source_degree} field into a degree-{target_degree} field")]
    IncompatibleDegrees { source_degree: u32, target_degree: u32 },
    #[error("element code {code} out of range for a field of order {order}")]
    CodeOutOfRange { code: u64, order: u64 },
}

/// Build the prime field F_p.
pub fn build_prime_field(p: u64) -> Result<PrimeField, FieldError> {
    PrimeField::new(p)
}

/// Build the table-backed extension field F_{p^k}.
pub fn build_ext_field(p: u64, k: u32) -> Result<ExtField, FieldError> {
    ExtField::new(p, k)
}
