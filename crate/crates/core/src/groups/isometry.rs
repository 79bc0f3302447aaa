use std::sync::Arc;

use crate::field::PrimeField;
use crate::linalg::{BilinearSpace, MatFF, Symmetry};

use super::GroupError;

/// A nondegenerate bilinear space whose isometry group we work in.
/// Alternating spaces give Sp, symmetric ones give O.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometrySpace {
    space: BilinearSpace,
}

impl IsometrySpace {
    pub fn new(space: BilinearSpace) -> Result<Arc<Self>, GroupError> {
        if space.is_degenerate() {
            return Err(GroupError::DegenerateSpace);
        }
        Ok(Arc::new(Self { space }))
    }

    pub fn standard_symplectic(field: PrimeField, dim: usize) -> Result<Arc<Self>, GroupError> {
        Self::new(BilinearSpace::standard_symplectic(field, dim)?)
    }

    pub fn diagonal(field: PrimeField, entries: &[i64]) -> Result<Arc<Self>, GroupError> {
        Self::new(BilinearSpace::diagonal(field, entries)?)
    }

    pub fn bilinear(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn field(&self) -> PrimeField {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn symmetry(&self) -> Symmetry {
        self.space.symmetry()
    }

    pub fn gram(&self) -> &MatFF {
        self.space.gram()
    }

    pub fn pair(&self, u: &[u32], v: &[u32]) -> u32 {
        self.space.pair(u, v)
    }

    pub fn norm(&self, v: &[u32]) -> u32 {
        self.space.norm(v)
    }

    /// Square class of the discriminant: +1 if det(G) is a square.
    pub fn discriminant_class(&self) -> i8 {
        self.field().quad_char(self.space.discriminant())
    }

    fn check_vector(&self, v: &[u32]) -> Result<(), GroupError> {
        if v.len() != self.dim() {
            return Err(GroupError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        if v.iter().all(|&x| x == 0) {
            return Err(GroupError::ZeroVector);
        }
        Ok(())
    }
}

/// A matrix preserving the form of its home space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    mat: MatFF,
    home: Arc<IsometrySpace>,
}

impl Isometry {
    /// Checks `mat^T G mat = G`.
    pub fn new(home: Arc<IsometrySpace>, mat: MatFF) -> Result<Self, GroupError> {
        if mat.rows() != home.dim() || !mat.is_square() {
            return Err(GroupError::DimensionMismatch { expected: home.dim(), got: mat.rows() });
        }
        if !home.bilinear().preserves(&mat) {
            return Err(GroupError::NotAnIsometry);
        }
        Ok(Self { mat, home })
    }

    pub(crate) fn new_unchecked(home: Arc<IsometrySpace>, mat: MatFF) -> Self {
        debug_assert!(home.bilinear().preserves(&mat));
        Self { mat, home }
    }

    pub fn identity(home: Arc<IsometrySpace>) -> Self {
        let mat = MatFF::identity(home.field(), home.dim());
        Self { mat, home }
    }

    pub fn minus_identity(home: Arc<IsometrySpace>) -> Self {
        let mat = MatFF::identity(home.field(), home.dim()).neg();
        Self { mat, home }
    }

    pub fn mat(&self) -> &MatFF {
        &self.mat
    }

    pub fn into_mat(self) -> MatFF {
        self.mat
    }

    pub fn home(&self) -> &Arc<IsometrySpace> {
        &self.home
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.mul(&other.mat),
            home: self.home.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            mat: self.mat.inverse().expect("isometries are invertible"),
            home: self.home.clone(),
        }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.mat.apply(v)
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    /// Determinant as ±1.
    pub fn det_sign(&self) -> i8 {
        let d = self.mat.det().expect("square").value();
        if d == 1 {
            1
        } else {
            debug_assert_eq!(d, self.home.field().neg(1));
            -1
        }
    }
}

/// `a -> a + c (a, δ) δ` as a matrix: `I + c δ (G δ)^T`.
fn rank_one_map(space: &IsometrySpace, delta: &[u32], c: u32) -> MatFF {
    let f = space.field();
    let n = space.dim();
    // (a, δ) = a^T G δ, a linear functional with coefficient vector G δ
    let g_delta = space.gram().apply(delta);
    let mut m = MatFF::identity(f, n);
    for i in 0..n {
        let ci = f.mul(c, delta[i]);
        if ci == 0 {
            continue;
        }
        for j in 0..n {
            let v = f.add(m.get(i, j), f.mul(ci, g_delta[j]));
            m.set(i, j, v);
        }
    }
    m
}

/// Symplectic transvection `a -> a + λ (a, δ) δ`.
pub fn transvection(
    space: &Arc<IsometrySpace>,
    delta: &[u32],
    lambda: u32,
) -> Result<Isometry, GroupError> {
    if space.symmetry() != Symmetry::Alternating {
        return Err(GroupError::WrongSymmetry { expected: Symmetry::Alternating });
    }
    space.check_vector(delta)?;
    Isometry::new(space.clone(), rank_one_map(space, delta, lambda % space.field().p()))
}

/// Sign ε in the Picard-Lefschetz formula: `(-1)^{n/2}` for n even,
/// `(-1)^{(n-1)/2}` for n odd.
pub fn pl_sign(n: u32) -> i64 {
    let half = if n.is_multiple_of(2) { n / 2 } else { (n - 1) / 2 };
    if half % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^{n/2} / 2^{m-n-2}` in F_ℓ: the self-pairing of a vanishing cycle for n even.
pub fn vanishing_cycle_norm(field: PrimeField, n: u32, m: u32) -> u32 {
    let two_pow = field.pow(2, (m - n - 2) as u64);
    let inv = field.inv(two_pow).expect("2 is invertible");
    field.mul(field.reduce(pl_sign(n)), inv)
}

/// Check `m` even and `m >= n + 3`.
pub fn check_arrangement_parity(n: u32, m: u32) -> Result<(), GroupError> {
    if !m.is_multiple_of(2) || m < n + 3 {
        return Err(GroupError::BadParity { n, m });
    }
    Ok(())
}

/// Picard-Lefschetz transformation `a -> a - ε 2^{m-n-1} (a, δ) δ`.
///
/// For n even the space must be symmetric and `(δ, δ)` must equal
/// `(-1)^{n/2} / 2^{m-n-2}` (otherwise the map is not an isometry); the result
/// is then a reflection. For n odd the space must be alternating and the
/// result is a transvection.
pub fn pl_map(
    space: &Arc<IsometrySpace>,
    delta: &[u32],
    n: u32,
    m: u32,
) -> Result<Isometry, GroupError> {
    check_arrangement_parity(n, m)?;
    let expected = if n.is_multiple_of(2) { Symmetry::Symmetric } else { Symmetry::Alternating };
    if space.symmetry() != expected {
        return Err(GroupError::WrongSymmetry { expected });
    }
    space.check_vector(delta)?;
    let f = space.field();
    let coeff = f.mul(f.reduce(-pl_sign(n)), f.pow(2, (m - n - 1) as u64));
    Isometry::new(space.clone(), rank_one_map(space, delta, coeff))
}

/// Reflection `x -> x - 2 (x, δ)/(δ, δ) δ` in an anisotropic vector.
pub fn reflection_matrix(space: &Arc<IsometrySpace>, delta: &[u32]) -> Result<Isometry, GroupError> {
    if space.symmetry() != Symmetry::Symmetric {
        return Err(GroupError::WrongSymmetry { expected: Symmetry::Symmetric });
    }
    space.check_vector(delta)?;
    let f = space.field();
    let nd = space.norm(delta);
    let Some(inv) = f.inv(nd) else {
        return Err(GroupError::IsotropicVector);
    };
    let c = f.neg(f.mul(2, inv));
    Ok(Isometry::new_unchecked(space.clone(), rank_one_map(space, delta, c)))
}

/// Replace `h` by `r_w h` in place, `r_w` the reflection in `w`.
fn reflect_left(space: &IsometrySpace, h: &mut MatFF, w: &[u32], w_norm: u32) {
    let f = space.field();
    let n = space.dim();
    let c = f.mul(2, f.inv(w_norm).unwrap());
    // s = (G w)^T h, so (h x, w) = s . x
    let gw = space.gram().apply(w);
    let s: Vec<u32> = (0..n)
        .map(|j| (0..n).fold(0, |acc, i| f.add(acc, f.mul(gw[i], h.get(i, j)))))
        .collect();
    for i in 0..n {
        let ci = f.mul(c, w[i]);
        if ci == 0 {
            continue;
        }
        for (j, &sj) in s.iter().enumerate() {
            let v = f.sub(h.get(i, j), f.mul(ci, sj));
            h.set(i, j, v);
        }
    }
}

/// Spinor norm θ(g) in {+1, -1}, with the convention θ(r_δ) = class of (δ, δ).
///
/// Factors g into reflections along an orthogonal basis (Cartan-Dieudonné),
/// multiplying the norms of the reflecting vectors.
pub fn spinor_norm(g: &Isometry) -> Result<i8, GroupError> {
    let space = g.home();
    if space.symmetry() != Symmetry::Symmetric {
        return Err(GroupError::WrongSymmetry { expected: Symmetry::Symmetric });
    }
    if !space.bilinear().preserves(g.mat()) {
        return Err(GroupError::NotAnIsometry);
    }
    let f = space.field();
    let basis = space
        .bilinear()
        .orthogonal_basis()
        .expect("nondegenerate symmetric space has an orthogonal basis");
    let mut h = g.mat().clone();
    let mut product = 1u32;
    for (v, v_norm) in &basis {
        let hv = h.apply(v);
        if &hv == v {
            continue;
        }
        let w: Vec<u32> = v.iter().zip(&hv).map(|(&a, &b)| f.sub(a, b)).collect();
        let w_norm = space.norm(&w);
        if w_norm != 0 {
            // r_w swaps v and h v
            reflect_left(space, &mut h, &w, w_norm);
            product = f.mul(product, w_norm);
        } else {
            // (v, hv) = (v, v), so u = v + hv is anisotropic and r_u(hv) = -v
            let u: Vec<u32> = v.iter().zip(&hv).map(|(&a, &b)| f.add(a, b)).collect();
            let u_norm = space.norm(&u);
            debug_assert_ne!(u_norm, 0);
            reflect_left(space, &mut h, &u, u_norm);
            reflect_left(space, &mut h, v, *v_norm);
            product = f.mul(product, f.mul(u_norm, *v_norm));
        }
        debug_assert_eq!(&h.apply(v), v);
    }
    debug_assert!(h.is_identity());
    Ok(f.quad_char(product))
}

/// `(θ(g), det g)` for an orthogonal transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct KernelClass {
    pub theta: i8,
    pub det: i8,
}

impl KernelClass {
    pub fn in_ker_theta(self) -> bool {
        self.theta == 1
    }

    pub fn in_ker_theta_det(self) -> bool {
        self.theta * self.det == 1
    }

    pub fn in_so(self) -> bool {
        self.det == 1
    }

    pub fn in_omega(self) -> bool {
        self.theta == 1 && self.det == 1
    }
}

pub fn kernel_class(g: &Isometry) -> Result<KernelClass, GroupError> {
    let theta = spinor_norm(g)?;
    Ok(KernelClass { theta, det: g.det_sign() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn random_vec(rng: &mut ChaCha8Rng, p: u32, n: usize) -> Vec<u32> {
        loop {
            let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }

    fn random_anisotropic(rng: &mut ChaCha8Rng, space: &IsometrySpace) -> Vec<u32> {
        loop {
            let v = random_vec(rng, space.field().p(), space.dim());
            if space.norm(&v) != 0 {
                return v;
            }
        }
    }

    /// Random element of O(V) as a product of random reflections.
    fn random_orthogonal(rng: &mut ChaCha8Rng, space: &Arc<IsometrySpace>) -> Isometry {
        let count = rng.gen_range(0..2 * space.dim() + 2);
        (0..count).fold(Isometry::identity(space.clone()), |acc, _| {
            let v = random_anisotropic(rng, space);
            acc.compose(&reflection_matrix(space, &v).unwrap())
        })
    }

    #[test]
    fn transvection_examples() {
        let f3 = f(3);
        let sp2 = IsometrySpace::standard_symplectic(f3, 2).unwrap();
        let t = transvection(&sp2, &[1, 0], 1).unwrap();
        // T_{e1,1}(e2) = e2 + (e2, e1) e1 = e2 - e1
        assert_eq!(t.apply(&[0, 1]), vec![2, 1]);
        assert_eq!(t.apply(&[1, 0]), vec![1, 0]);
        assert_eq!(t.det_sign(), 1);

        let f5 = f(5);
        let sp4 = IsometrySpace::standard_symplectic(f5, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let d = random_vec(&mut rng, 5, 4);
            let (l, m) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let prod = transvection(&sp4, &d, l).unwrap().compose(&transvection(&sp4, &d, m).unwrap());
            assert_eq!(prod, transvection(&sp4, &d, (l + m) % 5).unwrap());
            assert_eq!(transvection(&sp4, &d, l).unwrap().apply(&d), d);
        }
        assert_eq!(transvection(&sp4, &[0, 0, 0, 0], 1), Err(GroupError::ZeroVector));
    }

    #[test]
    fn pl_map_even_is_reflection() {
        for (n, m, ell) in [(2u32, 6u32, 7u64), (2, 8, 13), (4, 8, 11), (2, 6, 5)] {
            let fld = f(ell);
            let target = vanishing_cycle_norm(fld, n, m);
            let space = IsometrySpace::diagonal(fld, &[target as i64, 1, 1]).unwrap();
            let t = pl_map(&space, &[1, 0, 0], n, m).unwrap();
            assert_eq!(t.apply(&[1, 0, 0]), vec![fld.neg(1), 0, 0]);
            assert!(t.compose(&t).is_identity());
            assert_eq!(t.det_sign(), -1);
            // wrong norm: not an isometry
            let bad = IsometrySpace::diagonal(fld, &[fld.add(target, 1) as i64, 1, 1]).unwrap();
            assert_eq!(pl_map(&bad, &[1, 0, 0], n, m), Err(GroupError::NotAnIsometry));
        }
    }

    #[test]
    fn pl_map_odd_is_transvection() {
        let fld = f(7);
        let space = IsometrySpace::standard_symplectic(fld, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, m) in [(1u32, 4u32), (1, 6), (3, 6), (3, 8)] {
            let d = random_vec(&mut rng, 7, 4);
            let t = pl_map(&space, &d, n, m).unwrap();
            assert_eq!(t.det_sign(), 1);
            let lambda = fld.mul(fld.reduce(-pl_sign(n)), fld.pow(2, (m - n - 1) as u64));
            assert_eq!(t, transvection(&space, &d, lambda).unwrap());
        }
        assert_eq!(pl_map(&space, &[1, 0, 0, 0], 1, 5), Err(GroupError::BadParity { n: 1, m: 5 }));
        assert_eq!(pl_map(&space, &[1, 0, 0, 0], 3, 4), Err(GroupError::BadParity { n: 3, m: 4 }));
    }

    #[test]
    fn reflection_examples() {
        let f5 = f(5);
        let plane = IsometrySpace::diagonal(f5, &[1, 1]).unwrap();
        let r = reflection_matrix(&plane, &[1, 0]).unwrap();
        assert_eq!(r.mat(), &MatFF::diag(f5, &[-1, 1]));
        assert_eq!(reflection_matrix(&plane, &[1, 2]), Err(GroupError::IsotropicVector));

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let space = IsometrySpace::diagonal(f(7), &[1, 3, 1, 5]).unwrap();
        for _ in 0..100 {
            let d = random_anisotropic(&mut rng, &space);
            let r = reflection_matrix(&space, &d).unwrap();
            assert!(r.compose(&r).is_identity());
            assert_eq!(r.det_sign(), -1);
        }
        // orthogonal reflections commute
        let space = IsometrySpace::diagonal(f5, &[1, 2, 3]).unwrap();
        let r1 = reflection_matrix(&space, &[1, 1, 0]).unwrap();
        let r2 = reflection_matrix(&space, &[2, 4, 0]).unwrap(); // (d1, d2) = 2 + 8*... check below
        let d1 = [1, 1, 0];
        let d2 = [2, 4, 0];
        if space.pair(&d1, &d2) == 0 {
            assert_eq!(r1.compose(&r2), r2.compose(&r1));
        }
        let r3 = reflection_matrix(&space, &[0, 0, 1]).unwrap();
        assert_eq!(r1.compose(&r3), r3.compose(&r1));
    }

    #[test]
    fn spinor_norm_examples() {
        let f5 = f(5);
        let space = IsometrySpace::diagonal(f5, &[1, 2, 3]).unwrap();
        assert_eq!(spinor_norm(&Isometry::identity(space.clone())).unwrap(), 1);
        let r1 = reflection_matrix(&space, &[1, 0, 0]).unwrap();
        assert_eq!(spinor_norm(&r1).unwrap(), 1);
        let r2 = reflection_matrix(&space, &[0, 1, 0]).unwrap();
        assert_eq!(spinor_norm(&r2).unwrap(), -1);
        let r3 = reflection_matrix(&space, &[0, 0, 1]).unwrap();
        assert_eq!(spinor_norm(&r3).unwrap(), -1);
        // norms 2 * 3 = 6 = 1 is a square
        assert_eq!(spinor_norm(&r2.compose(&r3)).unwrap(), 1);
        assert_eq!(
            kernel_class(&r1).unwrap(),
            KernelClass { theta: 1, det: -1 }
        );
    }

    #[test]
    fn spinor_norm_is_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let cases = [
            (f(5), vec![1i64, 1, 1, 1]),
            (f(5), vec![1, 1, 1, 2]),
            (f(7), vec![1, 1, 1, 1, 1, 1]),
            (f(7), vec![1, 1, 1, 1, 1, 3]),
        ];
        for (fld, diag) in cases {
            let space = IsometrySpace::diagonal(fld, &diag).unwrap();
            for _ in 0..250 {
                let g = random_orthogonal(&mut rng, &space);
                let h = random_orthogonal(&mut rng, &space);
                let lhs = spinor_norm(&g.compose(&h)).unwrap();
                assert_eq!(lhs, spinor_norm(&g).unwrap() * spinor_norm(&h).unwrap());
            }
        }
    }

    #[test]
    fn spinor_norm_matches_reflection_product() {
        // θ of a random product of reflections equals the class of the product of norms.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let wedge = |p, dim, n| {
            let base = IsometrySpace::standard_symplectic(f(p), dim).unwrap();
            crate::wedge::WedgeSpace::new(base, n).unwrap().space().clone()
        };
        let spaces = [
            IsometrySpace::diagonal(f(11), &[1, 2, 1, 1, 6]).unwrap(),
            IsometrySpace::diagonal(f(5), &[1; 6]).unwrap(),
            IsometrySpace::diagonal(f(5), &[1, 1, 1, 1, 1, 2]).unwrap(),
            IsometrySpace::diagonal(f(7), &[1; 6]).unwrap(),
            IsometrySpace::diagonal(f(7), &[1, 1, 1, 1, 1, 3]).unwrap(),
            // hyperbolic Gram matrices with no anisotropic basis vector
            wedge(5, 4, 2),
            wedge(7, 6, 2),
        ];
        for space in &spaces {
            let fld = space.field();
            for _ in 0..100 {
                let k = rng.gen_range(0..2 * space.dim() + 2);
                let mut g = Isometry::identity(space.clone());
                let mut prod = 1;
                for _ in 0..k {
                    let v = random_anisotropic(&mut rng, space);
                    prod = fld.mul(prod, space.norm(&v));
                    g = g.compose(&reflection_matrix(space, &v).unwrap());
                }
                assert_eq!(spinor_norm(&g).unwrap(), fld.quad_char(prod));
            }
        }
    }

    #[test]
    fn spinor_norm_scaling_behaviour() {
        // Scaling the form by a non-square flips θ of reflections, fixes θ on SO.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let fld = f(7);
        let base = IsometrySpace::diagonal(fld, &[1, 1, 2, 1]).unwrap();
        let ns = fld.nonsquare();
        let scaled = IsometrySpace::new(base.bilinear().scaled(ns).unwrap()).unwrap();
        for _ in 0..100 {
            let v = random_anisotropic(&mut rng, &base);
            let r = reflection_matrix(&base, &v).unwrap();
            let r_scaled = Isometry::new(scaled.clone(), r.mat().clone()).unwrap();
            assert_eq!(spinor_norm(&r).unwrap(), -spinor_norm(&r_scaled).unwrap());
            let g = random_orthogonal(&mut rng, &base);
            let g = if g.det_sign() == -1 { g.compose(&r) } else { g };
            let g_scaled = Isometry::new(scaled.clone(), g.mat().clone()).unwrap();
            assert_eq!(spinor_norm(&g).unwrap(), spinor_norm(&g_scaled).unwrap());
        }
    }

    #[test]
    fn minus_identity_spinor_norm_is_discriminant_class() {
        for (p, diag) in [(5u64, vec![1i64, 1, 1]), (5, vec![1, 1, 2]), (7, vec![1, 1, 1, 1]), (7, vec![1, 3, 1, 1])] {
            let fld = f(p);
            let space = IsometrySpace::diagonal(fld, &diag).unwrap();
            let basis = space.bilinear().orthogonal_basis().unwrap();
            let prod = basis.iter().fold(1, |a, (_, n)| fld.mul(a, *n));
            let minus = Isometry::minus_identity(space.clone());
            assert_eq!(spinor_norm(&minus).unwrap(), fld.quad_char(prod));
            assert_eq!(spinor_norm(&minus).unwrap(), space.discriminant_class());
        }
    }

    #[test]
    fn spinor_norm_rejects_non_isometries() {
        let space = IsometrySpace::diagonal(f(5), &[1, 1]).unwrap();
        let bogus = Isometry {
            mat: MatFF::diag(f(5), &[2, 1]),
            home: space.clone(),
        };
        assert_eq!(spinor_norm(&bogus), Err(GroupError::NotAnIsometry));
        assert_eq!(
            Isometry::new(space, MatFF::diag(f(5), &[2, 1])),
            Err(GroupError::NotAnIsometry)
        );
    }
}
