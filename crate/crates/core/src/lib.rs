//! Exact computational toolkit for mod-ℓ monodromy of double covers of
//! projective space branched along hyperplane arrangements.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`]: prime and extension finite fields with log/Zech tables.
//! * [`linalg`]: dense linear algebra over F_ℓ and over the integers.
//! * [`groups`]: symplectic and orthogonal groups, spinor norm, Schreier-Sims.
//! * [`wedge`]: exterior powers of symplectic spaces.
//! * [`arrangement`]: hyperplane arrangements over finite fields.
//! * [`zeta`]: point counting and integer Frobenius characteristic polynomials.
//! * [`monodromy`]: group predictions and end-to-end verification harnesses.

pub mod field;
pub mod linalg;
pub mod groups;
pub mod wedge;
pub mod arrangement;
pub mod zeta;
pub mod monodromy;
pub mod seed;
