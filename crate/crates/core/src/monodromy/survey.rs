use serde::Serialize;

use crate::arrangement::{field_of_order, random_arrangement};
use crate::seed;
use crate::zeta::{frobenius_charpoly_with, irreducible_over_z, CountMode, IrreducibilityMethod};

use super::MonodromyError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyLevel {
    /// Arrangements are drawn over F_{q^level}.
    pub level: u32,
    pub field_order: u64,
    pub samples: usize,
    pub irreducible: usize,
    /// `irreducible / samples`, absent when there are no samples.
    pub fraction: Option<f64>,
    pub mod_prime_certified: usize,
    pub pattern_certified: usize,
    pub exhaustive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyReport {
    pub n: usize,
    pub m: usize,
    pub q: u64,
    pub samples: usize,
    pub seed: u64,
    pub mode: CountMode,
    pub levels: Vec<SurveyLevel>,
}

impl SurveyReport {
    /// Each fraction is at least the previous one minus `tolerance`.
    pub fn non_decreasing_within(&self, tolerance: f64) -> bool {
        let fr: Vec<f64> = self.levels.iter().filter_map(|l| l.fraction).collect();
        fr.windows(2).all(|w| w[1] >= w[0] - tolerance)
    }
}

/// Draw `samples` arrangements over each `F_{q^i}`, compute the Frobenius
/// polynomial and test it for irreducibility over Z. Counting uses the
/// functional equation to halve the tower (n is odd here).
pub fn survey_irreducibility(
    n: usize,
    m: usize,
    q: u64,
    levels: &[u32],
    samples: usize,
    root_seed: u64,
) -> Result<SurveyReport, MonodromyError> {
    if n.is_multiple_of(2) {
        return Err(MonodromyError::SurveyNeedsOddN { n });
    }
    if n == 1 && q + 1 < m as u64 {
        return Err(MonodromyError::TooFewPoints { q, m });
    }
    let mode = CountMode::HalfFunctionalEquation;
    let mut out = Vec::with_capacity(levels.len());
    for &level in levels {
        let order = q
            .checked_pow(level)
            .ok_or(crate::arrangement::ArrangementError::BadFieldOrder(q))?;
        let field = field_of_order(order)?;
        let mut row = SurveyLevel {
            level,
            field_order: order,
            samples,
            irreducible: 0,
            fraction: None,
            mod_prime_certified: 0,
            pattern_certified: 0,
            exhaustive: 0,
        };
        for s in 0..samples {
            let arr = random_arrangement(n, m, &field, seed::derive(root_seed, "survey", ((level as u64) << 32) | s as u64))?;
            let rec = frobenius_charpoly_with(&arr, mode)?;
            let verdict = irreducible_over_z(&rec.poly)?;
            match verdict.method {
                Some(IrreducibilityMethod::ModPrimeCertificate { .. }) => row.mod_prime_certified += 1,
                Some(IrreducibilityMethod::DegreePatternCertificate { .. }) => row.pattern_certified += 1,
                Some(IrreducibilityMethod::ExhaustiveMignotte) => row.exhaustive += 1,
                None => {}
            }
            if verdict.is_irreducible() {
                row.irreducible += 1;
            }
        }
        if samples > 0 {
            row.fraction = Some(row.irreducible as f64 / samples as f64);
        }
        out.push(row);
    }
    Ok(SurveyReport { n, m, q, samples, seed: root_seed, mode, levels: out })
}
