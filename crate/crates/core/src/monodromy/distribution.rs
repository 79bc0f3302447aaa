use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::arrangement::{field_of_order, random_arrangement};
use crate::field::{PolyFp, PrimeField};
use crate::groups::{
    group_order, kernel_class, reflection_matrix, Bsgs, GroupLabel, GroupSpec, Isometry,
    IsometrySpace,
};
use crate::linalg::{poly_reduce_mod, MatFF};
use crate::seed;
use crate::wedge::{binomial, wedge_matrix, WedgeSpace};
use crate::zeta::{frobenius_charpoly_with, normalize_mod_ell, CountMode};

use super::certify::symplectic_generators;
use super::{predict_group, MonodromyError, Prediction};

/// Diagnostic threshold for the total-variation distance; it never gates.
pub const TV_THRESHOLD: f64 = 0.15;

/// Groups up to this order are enumerated instead of sampled.
const EXHAUSTIVE_LIMIT: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistributionParams {
    pub n: usize,
    pub m: usize,
    pub q: u64,
    pub ell: u32,
    /// Number of Frobenius fibers.
    pub samples: usize,
    /// Uniform group elements drawn when the group is too large to enumerate.
    pub group_samples: usize,
    pub seed: u64,
}

/// How Frobenius (a similitude with multiplier qⁿ) is compared with isometries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComparisonMode {
    /// qⁿ = s² mod ℓ: compare `Frob / s` with the group.
    Normalized { s: u32 },
    /// qⁿ is a non-square: compare Frob with the coset `Γ h` for a fixed
    /// similitude `h` of that multiplier.
    MultiplierCoset { multiplier: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionReport {
    pub params: DistributionParams,
    pub prediction: Prediction,
    pub mode: ComparisonMode,
    pub group_dim: usize,
    /// Order of the full isometry group (Sp or O) of the model space.
    pub full_group_order: String,
    /// The generators were certified to produce the full isometry group.
    pub full_group_certified: bool,
    /// Every element of the full group was visited.
    pub group_exhaustive: bool,
    /// Elements of the predicted group that entered the histogram.
    pub group_elements: u64,
    pub frobenius_histogram: BTreeMap<String, f64>,
    pub group_histogram: BTreeMap<String, f64>,
    pub tv_distance: f64,
    pub tv_threshold: f64,
    /// Every Frobenius class occurs on the group side.
    pub contained: bool,
    pub missing: Vec<String>,
}

fn normalize_histogram(counts: BTreeMap<String, u64>) -> BTreeMap<String, f64> {
    let total: u64 = counts.values().sum();
    counts
        .into_iter()
        .map(|(k, c)| (k, if total == 0 { 0.0 } else { c as f64 / total as f64 }))
        .collect()
}

fn total_variation(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, x) in a {
        sum += (x - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, y) in b {
        if !a.contains_key(k) {
            sum += y;
        }
    }
    sum / 2.0
}

fn key(p: &PolyFp) -> String {
    p.to_string()
}

/// Model space of the predicted group, generators of its full isometry
/// group, and a similitude with multiplier `mu_base^n`.
struct Model {
    space: Arc<IsometrySpace>,
    gens: Vec<Isometry>,
    similitude: MatFF,
}

fn diag_similitude(field: PrimeField, dim: usize, mu: u32) -> MatFF {
    let mut h = MatFF::identity(field, dim);
    for i in dim / 2..dim {
        h.set(i, i, mu);
    }
    h
}

fn build_model<R: Rng>(n: usize, m: usize, field: PrimeField, q_mod: u32, rng: &mut R) -> Result<Model, MonodromyError> {
    let d = binomial(m - 2, n);
    if n % 2 == 1 {
        let space = IsometrySpace::standard_symplectic(field, d)?;
        let gens = symplectic_generators(&space)?;
        let mu = field.pow(q_mod, n as u64);
        Ok(Model { similitude: diag_similitude(field, d, mu), space, gens })
    } else {
        // ∧ⁿ of the curve-sized symplectic space carries the symmetric form
        let base = IsometrySpace::standard_symplectic(field, m - 2)?;
        let wedge = WedgeSpace::new(base, n)?;
        let space = wedge.space().clone();
        let mut gens = Vec::new();
        while gens.len() < d + 3 {
            let v: Vec<u32> = (0..d).map(|_| rng.gen_range(0..field.p())).collect();
            if space.norm(&v) != 0 {
                gens.push(reflection_matrix(&space, &v)?);
            }
        }
        let similitude = wedge_matrix(&diag_similitude(field, m - 2, q_mod), wedge.index())?;
        Ok(Model { space, gens, similitude })
    }
}

/// Compare normalized Frobenius characteristic polynomials mod ℓ of random
/// fibers with characteristic polynomials of the predicted group.
pub fn frobenius_distribution(params: DistributionParams) -> Result<DistributionReport, MonodromyError> {
    let DistributionParams { n, m, q, ell, samples, group_samples, seed: root } = params;
    let prediction = predict_group(n as u32, ell)?;
    let field = PrimeField::new(ell as u64)?;
    let fq = field_of_order(q)?;
    if fq.p() == ell as u64 {
        return Err(crate::zeta::ZetaError::CharacteristicClash { ell }.into());
    }
    let q_mod = (q % ell as u64) as u32;
    let mu = field.pow(q_mod, n as u64);
    let mode = match field.sqrt_smallest(mu) {
        Some(s) => ComparisonMode::Normalized { s },
        None => ComparisonMode::MultiplierCoset { multiplier: mu },
    };

    let mut rng = seed::rng_for(root, "distribution-group", 0);
    let model = build_model(n, m, field, q_mod, &mut rng)?;
    let full_label = if n % 2 == 1 { GroupLabel::Sp } else { GroupLabel::O };
    let full_order = group_order(&GroupSpec::for_space(full_label, &model.space))?;
    let bsgs = Bsgs::build_with_bound(&model.gens, &full_order, &mut rng, 200)?;
    let full_group_certified = bsgs.order() == full_order;

    let mut group_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut group_elements = 0u64;
    let mut visit = |g: &MatFF, counts: &mut BTreeMap<String, u64>| -> Result<(), MonodromyError> {
        if n % 2 == 0 {
            let iso = Isometry::new(model.space.clone(), g.clone())?;
            if !prediction.label.admits(kernel_class(&iso)?) {
                return Ok(());
            }
        }
        let target = match mode {
            ComparisonMode::Normalized { .. } => g.char_poly()?,
            ComparisonMode::MultiplierCoset { .. } => g.mul(&model.similitude).char_poly()?,
        };
        *counts.entry(key(&target)).or_insert(0) += 1;
        group_elements += 1;
        Ok(())
    };
    let group_exhaustive = bsgs.order() <= BigUint::from(EXHAUSTIVE_LIMIT);
    if group_exhaustive {
        let mut err = None;
        bsgs.for_each_element(|g| {
            if err.is_none() {
                if let Err(e) = visit(g, &mut group_counts) {
                    err = Some(e);
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    } else {
        for _ in 0..group_samples {
            let g = bsgs.sample(&mut rng);
            visit(g.mat(), &mut group_counts)?;
        }
    }

    let count_mode = if n % 2 == 1 { CountMode::HalfFunctionalEquation } else { CountMode::Full };
    let mut frob_counts: BTreeMap<String, u64> = BTreeMap::new();
    for i in 0..samples {
        let arr = random_arrangement(n, m, &fq, seed::derive(root, "distribution-fiber", i as u64))?;
        let rec = frobenius_charpoly_with(&arr, count_mode)?;
        let p = match mode {
            ComparisonMode::Normalized { .. } => normalize_mod_ell(&rec, field)?,
            ComparisonMode::MultiplierCoset { .. } => poly_reduce_mod(&rec.poly, field),
        };
        *frob_counts.entry(key(&p)).or_insert(0) += 1;
    }

    let missing: Vec<String> = frob_counts.keys().filter(|k| !group_counts.contains_key(*k)).cloned().collect();
    let frobenius_histogram = normalize_histogram(frob_counts);
    let group_histogram = normalize_histogram(group_counts);
    Ok(DistributionReport {
        params,
        prediction,
        mode,
        group_dim: model.space.dim(),
        full_group_order: full_order.to_string(),
        full_group_certified,
        group_exhaustive,
        group_elements,
        tv_distance: total_variation(&frobenius_histogram, &group_histogram),
        tv_threshold: TV_THRESHOLD,
        contained: missing.is_empty(),
        missing,
        frobenius_histogram,
        group_histogram,
    })
}
