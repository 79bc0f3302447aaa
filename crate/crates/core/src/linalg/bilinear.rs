use serde::{Deserialize, Serialize};

use crate::field::PrimeField;

use super::{LinalgError, MatFF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    Alternating,
    Symmetric,
}

/// A finite-dimensional space over F_ℓ with a Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearSpace {
    gram: MatFF,
    symmetry: Symmetry,
    degenerate: bool,
}

impl BilinearSpace {
    /// Validate symmetry and nondegeneracy.
    pub fn new(gram: MatFF, symmetry: Symmetry) -> Result<Self, LinalgError> {
        let space = Self::new_degenerate(gram, symmetry)?;
        if space.degenerate {
            return Err(LinalgError::Degenerate);
        }
        Ok(space)
    }

    /// Validate symmetry only; the result records whether it is degenerate.
    pub fn new_degenerate(gram: MatFF, symmetry: Symmetry) -> Result<Self, LinalgError> {
        if !gram.is_square() {
            return Err(LinalgError::NonSquare { rows: gram.rows(), cols: gram.cols() });
        }
        let t = gram.transpose();
        let ok = match symmetry {
            Symmetry::Symmetric => t == gram,
            Symmetry::Alternating => {
                t == gram.neg() && (0..gram.rows()).all(|i| gram.get(i, i) == 0)
            }
        };
        if !ok {
            return Err(LinalgError::SymmetryMismatch(symmetry));
        }
        let degenerate = gram.det()?.is_zero();
        Ok(Self { gram, symmetry, degenerate })
    }

    /// Standard symplectic form on F_ℓ^{2g}: basis (e_1..e_g, f_1..f_g) with
    /// `(e_i, f_i) = 1`.
    pub fn standard_symplectic(field: PrimeField, dim: usize) -> Result<Self, LinalgError> {
        if !dim.is_multiple_of(2) || dim == 0 {
            return Err(LinalgError::OddSymplecticDim(dim));
        }
        let g = dim / 2;
        let mut gram = MatFF::zeros(field, dim, dim);
        for i in 0..g {
            gram.set(i, g + i, 1);
            gram.set(g + i, i, field.neg(1));
        }
        Self::new(gram, Symmetry::Alternating)
    }

    /// Diagonal symmetric form `diag(1, .., 1, last)`.
    pub fn diagonal(field: PrimeField, entries: &[i64]) -> Result<Self, LinalgError> {
        Self::new(MatFF::diag(field, entries), Symmetry::Symmetric)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> PrimeField {
        self.gram.field()
    }

    pub fn gram(&self) -> &MatFF {
        &self.gram
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `(u, v) = u^T G v`.
    pub fn pair(&self, u: &[u32], v: &[u32]) -> u32 {
        let f = self.field();
        let gv = self.gram.apply(v);
        u.iter().zip(&gv).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    pub fn norm(&self, v: &[u32]) -> u32 {
        self.pair(v, v)
    }

    /// Whether `m^T G m = G`.
    pub fn preserves(&self, m: &MatFF) -> bool {
        m.is_square() && m.rows() == self.dim() && m.transpose().mul(&self.gram).mul(m) == self.gram
    }

    /// Determinant of the Gram matrix.
    pub fn discriminant(&self) -> u32 {
        self.gram.det().map(|d| d.value()).unwrap_or(0)
    }

    /// An orthogonal basis of anisotropic vectors (symmetric, nondegenerate
    /// spaces only), returned with the norms.
    pub fn orthogonal_basis(&self) -> Option<Vec<(Vec<u32>, u32)>> {
        if self.symmetry != Symmetry::Symmetric || self.degenerate {
            return None;
        }
        diagonalize(&self.gram)
    }

    /// Scale the form by a nonzero constant.
    pub fn scaled(&self, c: u32) -> Result<Self, LinalgError> {
        Self::new_degenerate(self.gram.scale(c), self.symmetry).and_then(|s| {
            if s.degenerate && !self.degenerate {
                Err(LinalgError::Degenerate)
            } else {
                Ok(s)
            }
        })
    }
}

/// Symmetric congruence diagonalization: rows of `b` are the basis vectors
/// and `a = b G bᵀ` is kept in sync, clearing one row and column per step.
fn diagonalize(gram: &MatFF) -> Option<Vec<(Vec<u32>, u32)>> {
    let f = gram.field();
    let n = gram.rows();
    let mut a: Vec<Vec<u32>> = (0..n).map(|i| gram.row(i).to_vec()).collect();
    let mut b: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    // row_i += c row_j together with the matching column operation
    let add = |a: &mut Vec<Vec<u32>>, b: &mut Vec<Vec<u32>>, i: usize, j: usize, c: u32| {
        for k in 0..n {
            let x = f.add(a[i][k], f.mul(c, a[j][k]));
            a[i][k] = x;
            let y = f.add(b[i][k], f.mul(c, b[j][k]));
            b[i][k] = y;
        }
        for row in a.iter_mut() {
            let x = f.add(row[i], f.mul(c, row[j]));
            row[i] = x;
        }
    };
    for k in 0..n {
        if a[k][k] == 0 {
            if let Some(j) = (k + 1..n).find(|&j| a[j][j] != 0) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
                b.swap(k, j);
            } else {
                // every remaining diagonal entry vanishes, so e_k + e_j has norm 2 a_kj
                let j = (k + 1..n).find(|&j| a[k][j] != 0)?;
                add(&mut a, &mut b, k, j, 1);
                if a[k][k] == 0 {
                    return None;
                }
            }
        }
        let inv = f.inv(a[k][k])?;
        for i in k + 1..n {
            if a[i][k] != 0 {
                let c = f.neg(f.mul(a[i][k], inv));
                add(&mut a, &mut b, i, k, c);
            }
        }
    }
    Some(b.into_iter().zip((0..n).map(|i| a[i][i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn symmetry_flags_checked() {
        let f5 = f(5);
        let sym = MatFF::from_rows(f5, &[vec![1, 2], vec![2, 3]]);
        assert!(BilinearSpace::new(sym.clone(), Symmetry::Symmetric).is_ok());
        assert_eq!(
            BilinearSpace::new(sym, Symmetry::Alternating),
            Err(LinalgError::SymmetryMismatch(Symmetry::Alternating))
        );
        let degenerate = MatFF::from_rows(f5, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(
            BilinearSpace::new(degenerate.clone(), Symmetry::Symmetric),
            Err(LinalgError::Degenerate)
        );
        assert!(BilinearSpace::new_degenerate(degenerate, Symmetry::Symmetric)
            .unwrap()
            .is_degenerate());
    }

    #[test]
    fn orthogonal_basis_diagonalizes() {
        let f7 = f(7);
        // hyperbolic plane plus a line: no standard basis vector is anisotropic
        // in the first block
        let gram = MatFF::from_rows(f7, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]);
        let space = BilinearSpace::new(gram, Symmetry::Symmetric).unwrap();
        let basis = space.orthogonal_basis().unwrap();
        assert_eq!(basis.len(), 3);
        for (i, (u, nu)) in basis.iter().enumerate() {
            assert_ne!(*nu, 0);
            assert_eq!(space.norm(u), *nu);
            for (v, _) in &basis[i + 1..] {
                assert_eq!(space.pair(u, v), 0);
            }
        }
        let prod = basis.iter().fold(1, |a, (_, n)| f7.mul(a, *n));
        // product of norms and the discriminant agree up to squares
        assert_eq!(f7.quad_char(prod), f7.quad_char(space.discriminant()));
    }
}
