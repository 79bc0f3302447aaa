//! Property tests for algebraic invariants that hold for every input.

use std::sync::Arc;

use proptest::prelude::*;

use monodromy_core::arrangement::{field_of_order, random_arrangement};
use monodromy_core::field::{ExtField, PrimeField};
use monodromy_core::groups::{kernel_class, reflection_matrix, Isometry, IsometrySpace};
use monodromy_core::linalg::{MatFF, PolyZ};
use monodromy_core::wedge::{binomial, wedge_char_poly, wedge_matrix, WedgeBasisIndex};
use monodromy_core::zeta::{frobenius_charpoly, frobenius_charpoly_with, irreducible_over_z, CountMode};

fn ext(q: u64) -> Arc<ExtField> {
    field_of_order(q).unwrap()
}

fn mat(field: PrimeField, n: usize, entries: &[u32]) -> MatFF {
    MatFF::from_raw(field, n, n, entries.iter().map(|&x| x % field.p()).collect())
}

/// Product of reflections in the anisotropic vectors among `vectors`, with the
/// product of their norms.
fn reflection_product(space: &Arc<IsometrySpace>, vectors: &[Vec<u32>]) -> (Isometry, u32) {
    let f = space.field();
    let mut g = Isometry::identity(space.clone());
    let mut norm = 1;
    for v in vectors {
        let v: Vec<u32> = v.iter().map(|&x| x % f.p()).collect();
        let nv = space.norm(&v);
        if nv != 0 {
            g = g.compose(&reflection_matrix(space, &v).unwrap());
            norm = f.mul(norm, nv);
        }
    }
    (g, norm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_field_axioms(q in prop::sample::select(vec![9u64, 25, 27, 49, 121]), a: u64, b: u64, c: u64) {
        let f = ext(q);
        let e = |x: u64| f.from_code(x % q).unwrap();
        let (a, b, c) = (e(a), e(b), e(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.pow(a, q), a);
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!(f.quad_char(f.mul(a, b)), f.quad_char(a) * f.quad_char(b));
        }
    }

    #[test]
    fn spinor_norm_and_det_are_homomorphisms(
        ell in prop::sample::select(vec![5u64, 7, 11]),
        last in 1i64..4,
        left in prop::collection::vec(prop::collection::vec(0u32..11, 5), 0..6),
        right in prop::collection::vec(prop::collection::vec(0u32..11, 5), 0..6),
    ) {
        let field = PrimeField::new(ell).unwrap();
        let space = IsometrySpace::diagonal(field, &[1, 1, 2, 1, last]).unwrap();
        let (g, ng) = reflection_product(&space, &left);
        let (h, nh) = reflection_product(&space, &right);
        let (cg, ch) = (kernel_class(&g).unwrap(), kernel_class(&h).unwrap());
        let cgh = kernel_class(&g.compose(&h)).unwrap();
        prop_assert_eq!(cgh.theta, cg.theta * ch.theta);
        prop_assert_eq!(cgh.det, cg.det * ch.det);
        prop_assert_eq!(cg.theta, field.quad_char(ng));
        prop_assert_eq!(ch.theta, field.quad_char(nh));
    }

    #[test]
    fn wedge_is_functorial(
        a in prop::collection::vec(0u32..7, 16),
        b in prop::collection::vec(0u32..7, 16),
        n in 1usize..4,
    ) {
        let field = PrimeField::new(7).unwrap();
        let (a, b) = (mat(field, 4, &a), mat(field, 4, &b));
        let index = WedgeBasisIndex::new(4, n).unwrap();
        let wa = wedge_matrix(&a, &index).unwrap();
        let wb = wedge_matrix(&b, &index).unwrap();
        prop_assert_eq!(wedge_matrix(&a.mul(&b), &index).unwrap(), wa.mul(&wb));
        prop_assert!(wedge_matrix(&MatFF::identity(field, 4), &index).unwrap().is_identity());
    }

    #[test]
    fn wedge_char_poly_degree_and_first_power(roots in prop::collection::vec(-4i64..5, 1..6), n in 1usize..4) {
        prop_assume!(n <= roots.len());
        let p = PolyZ::from_roots(&roots);
        prop_assert_eq!(wedge_char_poly(&p, 1).unwrap(), p.clone());
        let w = wedge_char_poly(&p, n).unwrap();
        prop_assert_eq!(w.degree().unwrap_or(0), binomial(roots.len(), n));
    }

    #[test]
    fn frobenius_polynomials_satisfy_the_weil_checks(
        q in prop::sample::select(vec![5u64, 7, 9, 11]),
        m in prop::sample::select(vec![4usize, 6]),
        seed: u64,
    ) {
        let arr = random_arrangement(1, m, &ext(q), seed).unwrap();
        let rec = frobenius_charpoly(&arr).unwrap();
        prop_assert!(rec.checks.all_pass(), "{:?}", rec.checks);
        prop_assert_eq!(rec.degree(), binomial(m - 2, 1));
        let half = frobenius_charpoly_with(&arr, CountMode::HalfFunctionalEquation).unwrap();
        prop_assert_eq!(half.poly, rec.poly);
    }

    #[test]
    fn products_are_reducible(
        a in prop::collection::vec(-3i64..4, 1..4),
        b in prop::collection::vec(-3i64..4, 1..4),
    ) {
        // monic factors of positive degree
        let mut a = a;
        a.push(1);
        let mut b = b;
        b.push(1);
        let (fa, fb) = (PolyZ::from_i64(&a), PolyZ::from_i64(&b));
        let verdict = irreducible_over_z(&fa.mul(&fb)).unwrap();
        prop_assert!(!verdict.is_irreducible());
        if let Some(factor) = verdict.factor {
            prop_assert!(fa.mul(&fb).div_exact_monic(&factor).is_some());
        }
    }
}
