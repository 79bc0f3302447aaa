//! Exterior powers of a symplectic space: the lexicographic basis of
//! n-subsets, the induced form, induced matrices over F_ℓ and over Z,
//! and characteristic polynomials of wedge powers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::groups::{GroupError, Isometry, IsometrySpace};
use crate::linalg::{newton_charpoly, BilinearSpace, IntMatrix, LinalgError, MatFF, PolyZ, Symmetry};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WedgeError {
    #[error("wedge degree {n} exceeds dimension {dim}")]
    DegreeTooLarge { n: usize, dim: usize },
    #[error("wedge degree must be positive")]
    ZeroDegree,
    #[error("matrix is not square")]
    NonSquare,
    #[error("input must be a monic polynomial of positive degree")]
    NotMonic,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// n-subsets of `0..dim` in lexicographic order with a reverse index.
#[derive(Clone, Debug)]
pub struct WedgeBasisIndex {
    dim: usize,
    n: usize,
    subsets: Vec<Vec<usize>>,
    rank: FxHashMap<u64, usize>,
}

impl WedgeBasisIndex {
    pub fn new(dim: usize, n: usize) -> Result<Self, WedgeError> {
        if n == 0 {
            return Err(WedgeError::ZeroDegree);
        }
        if n > dim {
            return Err(WedgeError::DegreeTooLarge { n, dim });
        }
        assert!(dim <= 64, "subset masks are stored in a u64");
        let mut subsets = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            subsets.push(cur.clone());
            // next combination in lexicographic order
            let Some(i) = (0..n).rev().find(|&i| cur[i] < dim - n + i) else {
                break;
            };
            cur[i] += 1;
            for j in i + 1..n {
                cur[j] = cur[j - 1] + 1;
            }
        }
        let rank = subsets.iter().enumerate().map(|(r, s)| (mask(s), r)).collect();
        Ok(Self { dim, n, subsets, rank })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Dimension of the exterior power, `C(dim, n)`.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn subset(&self, r: usize) -> &[usize] {
        &self.subsets[r]
    }

    /// Position of a sorted subset.
    pub fn rank_of(&self, subset: &[usize]) -> Option<usize> {
        self.rank.get(&mask(subset)).copied()
    }
}

fn mask(s: &[usize]) -> u64 {
    s.iter().fold(0u64, |m, &i| m | (1 << i))
}

/// Determinant of the square submatrix picked out by `rows`, `cols`.
fn minor_ff(m: &MatFF, rows: &[usize], cols: &[usize]) -> u32 {
    let k = rows.len();
    let f = m.field();
    let mut data = Vec::with_capacity(k * k);
    for &r in rows {
        for &c in cols {
            data.push(m.get(r, c));
        }
    }
    MatFF::from_raw(f, k, k, data).det().expect("square").value()
}

/// Matrix of `∧ⁿ M` in the lexicographic basis: entry `(I, J)` is the minor
/// of `M` on rows `I` and columns `J`.
pub fn wedge_matrix(m: &MatFF, index: &WedgeBasisIndex) -> Result<MatFF, WedgeError> {
    if !m.is_square() || m.rows() != index.dim() {
        return Err(WedgeError::NonSquare);
    }
    let big = index.len();
    let mut out = MatFF::zeros(m.field(), big, big);
    for (j, cols) in index.subsets().iter().enumerate() {
        for (i, rows) in index.subsets().iter().enumerate() {
            out.set(i, j, minor_ff(m, rows, cols));
        }
    }
    Ok(out)
}

/// Integer version of [`wedge_matrix`].
pub fn wedge_matrix_int(m: &IntMatrix, n: usize) -> Result<IntMatrix, WedgeError> {
    let index = WedgeBasisIndex::new(m.dim(), n)?;
    let big = index.len();
    let mut out = IntMatrix::zeros(big);
    for (i, rows) in index.subsets().iter().enumerate() {
        for (j, cols) in index.subsets().iter().enumerate() {
            out.set(i, j, m.minor(rows, cols));
        }
    }
    Ok(out)
}

/// Form on `∧ⁿ V` with `(u_1∧..∧u_n, v_1∧..∧v_n) = det[(u_i, v_j)]`:
/// symmetric for n even, alternating for n odd.
pub fn induced_wedge_form(base: &BilinearSpace, index: &WedgeBasisIndex) -> Result<BilinearSpace, WedgeError> {
    if base.dim() != index.dim() {
        return Err(WedgeError::NonSquare);
    }
    let gram = wedge_matrix(base.gram(), index)?;
    let symmetry = if index.degree().is_multiple_of(2) {
        Symmetry::Symmetric
    } else {
        Symmetry::Alternating
    };
    Ok(BilinearSpace::new_degenerate(gram, symmetry)?)
}

/// `∧ⁿ W` for a standard symplectic `W`, with its induced form and basis index.
#[derive(Clone, Debug)]
pub struct WedgeSpace {
    base: Arc<IsometrySpace>,
    index: WedgeBasisIndex,
    space: Arc<IsometrySpace>,
}

impl WedgeSpace {
    pub fn new(base: Arc<IsometrySpace>, n: usize) -> Result<Self, WedgeError> {
        let index = WedgeBasisIndex::new(base.dim(), n)?;
        let form = induced_wedge_form(base.bilinear(), &index)?;
        let space = IsometrySpace::new(form)?;
        Ok(Self { base, index, space })
    }

    pub fn base(&self) -> &Arc<IsometrySpace> {
        &self.base
    }

    pub fn index(&self) -> &WedgeBasisIndex {
        &self.index
    }

    pub fn space(&self) -> &Arc<IsometrySpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// `∧ⁿ g` as an isometry of the wedge space.
    pub fn lift(&self, g: &Isometry) -> Result<Isometry, WedgeError> {
        let m = wedge_matrix(g.mat(), &self.index)?;
        Ok(Isometry::new(self.space.clone(), m)?)
    }

    /// Coordinates of `v_1 ∧ .. ∧ v_n`.
    pub fn wedge_vectors(&self, vs: &[Vec<u32>]) -> Vec<u32> {
        assert_eq!(vs.len(), self.index.degree());
        let f = self.base.field();
        let cols: Vec<Vec<u32>> = vs.to_vec();
        let m = MatFF::from_columns(f, &cols);
        self.index
            .subsets()
            .iter()
            .map(|rows| minor_ff(&m, rows, &(0..vs.len()).collect::<Vec<_>>()))
            .collect()
    }
}

/// Elementary symmetric polynomial `e_n` of the roots, given power sums
/// `p_1..p_n`.
fn elementary_from_power_sums(p: &[BigInt], n: usize) -> BigInt {
    let mut e = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for j in 1..=k {
            let term = &e[k - j] * &p[j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        e.push(q);
    }
    e.swap_remove(n)
}

/// Characteristic polynomial of `∧ⁿ A` for any `A` with characteristic
/// polynomial `p`, computed from power sums: the k-th power sum of the wedge
/// is `e_n(α_1^k, .., α_d^k)`.
pub fn wedge_char_poly(p: &PolyZ, n: usize) -> Result<PolyZ, WedgeError> {
    let d = match p.degree() {
        Some(d) if d > 0 && p.is_monic() => d,
        _ => return Err(WedgeError::NotMonic),
    };
    if n == 0 {
        return Err(WedgeError::ZeroDegree);
    }
    if n > d {
        return Err(WedgeError::DegreeTooLarge { n, dim: d });
    }
    let big = binomial(d, n);
    let sums = p.power_sums(big * n);
    let wedge_sums: Vec<BigInt> = (1..=big)
        .map(|k| {
            let pk: Vec<BigInt> = (1..=n).map(|j| sums[j * k - 1].clone()).collect();
            elementary_from_power_sums(&pk, n)
        })
        .collect();
    Ok(newton_charpoly(&wedge_sums, big)?)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Result of testing `N = ∧ⁿ T - 1` for a transvection `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ShearReport {
    pub square_zero: bool,
    pub nontrivial: bool,
    pub preserves_form: bool,
}

impl ShearReport {
    pub fn holds(&self) -> bool {
        self.square_zero && self.nontrivial && self.preserves_form
    }
}

/// Check that `∧ⁿ T` is a nontrivial isometry with `(∧ⁿ T - 1)^2 = 0`.
pub fn shear_check(space: &WedgeSpace, t: &Isometry) -> Result<ShearReport, WedgeError> {
    let m = wedge_matrix(t.mat(), space.index())?;
    let preserves_form = space.space().bilinear().preserves(&m);
    let dim = m.rows();
    let nil = m.sub(&MatFF::identity(m.field(), dim));
    Ok(ShearReport {
        square_zero: nil.mul(&nil).is_zero(),
        nontrivial: !nil.is_zero(),
        preserves_form,
    })
}
