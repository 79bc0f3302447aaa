use rand::Rng;
use serde::Serialize;

use crate::field::PrimeField;
use crate::groups::{transvection, IsometrySpace};
use crate::seed;
use crate::wedge::{shear_check, WedgeSpace};

use super::MonodromyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShearSurveyReport {
    pub dim: usize,
    pub n: usize,
    pub ell: u32,
    pub samples: usize,
    /// Samples where `∧ⁿ φ` is a nontrivial isometry with `(∧ⁿ φ - 1)² = 0`.
    pub holding: usize,
    /// Indices of failing samples.
    pub failures: Vec<usize>,
}

impl ShearSurveyReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Lift `samples` random transvections `a -> a + λ (a, δ) δ` of the standard
/// symplectic space of dimension `dim` to `∧ⁿ` and check the shear property.
pub fn shear_survey(
    dim: usize,
    n: usize,
    ell: u32,
    samples: usize,
    root_seed: u64,
) -> Result<ShearSurveyReport, MonodromyError> {
    let field = PrimeField::new(ell as u64)?;
    if ell == 2 {
        return Err(MonodromyError::BadEll { ell });
    }
    let base = IsometrySpace::standard_symplectic(field, dim)?;
    let wedge = WedgeSpace::new(base.clone(), n)?;
    let mut failures = Vec::new();
    for s in 0..samples {
        let mut rng = seed::rng_for(root_seed, "shear", s as u64);
        let delta = loop {
            let v: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..ell)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let lambda = rng.gen_range(1..ell);
        let t = transvection(&base, &delta, lambda)?;
        if !shear_check(&wedge, &t)?.holds() {
            failures.push(s);
        }
    }
    Ok(ShearSurveyReport { dim, n, ell, samples, holding: samples - failures.len(), failures })
}
