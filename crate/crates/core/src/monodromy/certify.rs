use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::field::PrimeField;
use crate::groups::{
    group_order, kernel_class, reflection_matrix, transvection, Bsgs, GroupError, GroupLabel, GroupSpec,
    Isometry, IsometrySpace, DOMAIN_BUDGET,
};
use crate::seed;

use super::MonodromyError;

/// Random elements tried per kernel before giving up on finding generators.
const KERNEL_SAMPLE_LIMIT: usize = 10_000;
/// Generators drawn for each kernel.
const KERNEL_GENERATORS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "SP")]
    Sp,
    #[serde(rename = "O")]
    O,
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Order certificate of a kernel inside the full orthogonal group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupCertificate {
    pub label: GroupLabel,
    #[serde(serialize_with = "ser_big")]
    pub expected_order: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub certified_order: BigUint,
    pub expected_index: u32,
    /// `|O| / certified_order` when that is an integer.
    pub certified_index: Option<u64>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub family: Family,
    pub dim: usize,
    pub ell: u32,
    /// Square class of the Gram determinant (always +1 for SP).
    pub disc_class: i8,
    pub generators: usize,
    #[serde(serialize_with = "ser_big")]
    pub expected_order: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub certified_order: BigUint,
    pub orbit_lengths: Vec<usize>,
    pub order_matches: bool,
    pub subgroups: Vec<SubgroupCertificate>,
}

impl CertifyReport {
    pub fn pass(&self) -> bool {
        self.order_matches && self.subgroups.iter().all(|s| s.matches)
    }
}

/// Build standard generators, run deterministic Schreier-Sims and compare the
/// order with the closed form. SP uses transvections in `e_i` and `e_i + e_j`.
/// O uses the Gram matrix `diag(1, .., 1, r)` with `r` a square or a
/// non-square according to `disc_class`, generated by reflections; its
/// kernels ker θ, SO, ker(θ·det) and Ω are then realized by filtering
/// uniform samples and re-certified.
pub fn certify_generation(
    family: Family,
    dim: usize,
    ell: u32,
    disc_class: i8,
    root_seed: u64,
) -> Result<CertifyReport, MonodromyError> {
    let field = PrimeField::new(ell as u64)?;
    if ell == 2 {
        return Err(MonodromyError::BadEll { ell });
    }
    let size = (ell as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
    if size > DOMAIN_BUDGET {
        return Err(GroupError::DomainBudgetExceeded { size }.into());
    }
    let mut rng = seed::rng_for(root_seed, "certify", dim as u64 * 1000 + ell as u64);
    let (space, gens) = match family {
        Family::Sp => {
            if dim == 0 || dim % 2 == 1 {
                return Err(MonodromyError::BadDimension { label: "SP", dim, needed: "even and positive" });
            }
            let space = IsometrySpace::standard_symplectic(field, dim)?;
            (space.clone(), symplectic_generators(&space)?)
        }
        Family::O => {
            if dim < 3 {
                return Err(MonodromyError::BadDimension { label: "O", dim, needed: "at least 3" });
            }
            let last = match disc_class {
                1 => 1,
                -1 => field.nonsquare() as i64,
                c => return Err(MonodromyError::BadSignClass(c)),
            };
            let mut entries = vec![1i64; dim - 1];
            entries.push(last);
            let space = IsometrySpace::diagonal(field, &entries)?;
            let gens = reflection_generators(&space)?;
            (space, gens)
        }
    };
    let label = match family {
        Family::Sp => GroupLabel::Sp,
        Family::O => GroupLabel::O,
    };
    let spec = GroupSpec::for_space(label, &space);
    let expected_order = group_order(&spec)?;
    let bsgs = Bsgs::build(&gens)?;
    let certified_order = bsgs.order();
    let order_matches = certified_order == expected_order;
    let subgroups = match family {
        Family::Sp => Vec::new(),
        Family::O => [GroupLabel::OKerTheta, GroupLabel::So, GroupLabel::OKerThetaDet, GroupLabel::Omega]
            .into_iter()
            .map(|l| certify_kernel(&bsgs, &gens, &space, l, &mut rng))
            .collect::<Result<_, _>>()?,
    };
    Ok(CertifyReport {
        family,
        dim,
        ell,
        disc_class: spec.disc_class,
        generators: gens.len(),
        expected_order,
        certified_order,
        orbit_lengths: bsgs.orbit_lengths(),
        order_matches,
        subgroups,
    })
}

fn unit(dim: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

pub(super) fn symplectic_generators(space: &Arc<IsometrySpace>) -> Result<Vec<Isometry>, GroupError> {
    let dim = space.dim();
    let mut gens = Vec::new();
    for i in 0..dim {
        gens.push(transvection(space, &unit(dim, i), 1)?);
        for j in i + 1..dim {
            let mut v = unit(dim, i);
            v[j] = 1;
            gens.push(transvection(space, &v, 1)?);
        }
    }
    Ok(gens)
}

/// Reflections in the coordinate vectors, in `e_i - e_{i+1}` (the signed
/// permutations), and in the anisotropic vectors `e_0 + a e_1 + b e_2` and
/// `e_{d-2} + a e_{d-1}`, which carry both square classes of norms.
fn reflection_generators(space: &Arc<IsometrySpace>) -> Result<Vec<Isometry>, GroupError> {
    let dim = space.dim();
    let f = space.field();
    let mut vectors = Vec::new();
    for i in 0..dim {
        vectors.push(unit(dim, i));
        if i + 1 < dim {
            let mut v = unit(dim, i);
            v[i + 1] = f.neg(1);
            vectors.push(v);
        }
    }
    // dim >= 3 here
    for a in 0..f.p() {
        for b in 0..f.p() {
            let mut v = unit(dim, 0);
            v[1] = a;
            v[2] = b;
            vectors.push(v);
            let mut w = unit(dim, dim - 2);
            w[dim - 1] = a;
            vectors.push(w);
        }
    }
    vectors.sort();
    vectors.dedup();
    let mut gens = Vec::new();
    for v in vectors {
        if space.norm(&v) != 0 {
            gens.push(reflection_matrix(space, &v)?);
        }
    }
    Ok(gens)
}

/// Encode a kernel class as an element of (Z/2)²: bit 0 for θ = -1, bit 1 for det = -1.
fn class_bits(g: &Isometry) -> Result<u8, GroupError> {
    let c = kernel_class(g)?;
    Ok(u8::from(c.theta == -1) | (u8::from(c.det == -1) << 1))
}

fn certify_kernel<R: Rng>(
    full: &Bsgs,
    gens: &[Isometry],
    space: &Arc<IsometrySpace>,
    label: GroupLabel,
    rng: &mut R,
) -> Result<SubgroupCertificate, MonodromyError> {
    let full_order = full.order();
    // image of the class map on the whole group, spanned by the generators' images
    let mut image = BTreeSet::from([0u8]);
    for g in gens {
        let b = class_bits(g)?;
        let shifted: Vec<u8> = image.iter().map(|x| x ^ b).collect();
        image.extend(shifted);
    }
    let kernel_image: BTreeSet<u8> = image
        .iter()
        .copied()
        .filter(|&b| {
            let theta = if b & 1 == 1 { -1 } else { 1 };
            let det = if b & 2 == 2 { -1 } else { 1 };
            label.admits(crate::groups::KernelClass { theta, det })
        })
        .collect();
    // the kernel has order |O| * |image ∩ ker| / |image|, an upper bound for
    // whatever the sampled generators produce
    let bound = &full_order * BigUint::from(kernel_image.len()) / BigUint::from(image.len());
    // keep sampling until the generators' classes cover image ∩ ker
    let mut sub_gens = Vec::new();
    let mut reached = BTreeSet::from([0u8]);
    for _ in 0..KERNEL_SAMPLE_LIMIT {
        if sub_gens.len() >= KERNEL_GENERATORS && reached == kernel_image {
            break;
        }
        let g = full.sample(rng);
        let b = class_bits(&g)?;
        if kernel_image.contains(&b) && !g.is_identity() {
            let shifted: Vec<u8> = reached.iter().map(|x| x ^ b).collect();
            reached.extend(shifted);
            sub_gens.push(g);
        }
    }
    let certified_order = if sub_gens.is_empty() {
        BigUint::from(1u32)
    } else {
        Bsgs::build_with_bound(&sub_gens, &bound, rng, 100)?.order()
    };
    let expected_order = group_order(&GroupSpec::for_space(label, space))?;
    let certified_index = if !certified_order.is_zero() && (&full_order % &certified_order).is_zero() {
        u64::try_from(&full_order / &certified_order).ok()
    } else {
        None
    };
    let expected_index = label.index_in_full();
    Ok(SubgroupCertificate {
        label,
        matches: certified_index == Some(expected_index as u64) && certified_order == expected_order,
        expected_order,
        certified_order,
        expected_index,
        certified_index,
    })
}
