use std::fmt;

use crate::field::{PolyFp, PrimeField, PrimeFieldElem};

use super::LinalgError;

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatFF {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatFF {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(field: PrimeField, n: usize, c: u32) -> Self {
        Self::identity(field, n).scale(c)
    }

    pub fn diag(field: PrimeField, entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = field.reduce(e);
        }
        m
    }

    /// Build from signed integer rows; panics on ragged input.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row.iter().map(|&x| field.reduce(x)));
        }
        Self {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self {
            field,
            rows,
            cols,
            data: data.into_iter().map(|x| x % field.p()).collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, cols: &[Vec<u32>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(field, r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let p = self.field.p() as u64;
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a * b as u64;
                }
                // keep accumulators bounded for large p
                if p > 1 << 16 {
                    acc.iter_mut().for_each(|s| *s %= p);
                }
            }
            for (j, &a) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = (a % p) as u32;
            }
        }
        out
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64 % p)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Self {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Self {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self {
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(1))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    /// Determinant by Gaussian elimination with pivot tracking.
    pub fn det(&self) -> Result<PrimeFieldElem, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let f = self.field;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return Ok(PrimeFieldElem(0));
            };
            if piv != c {
                for j in 0..n {
                    a.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[c * n + c];
            det = f.mul(det, pv);
            let inv = f.inv(pv).unwrap();
            for r in c + 1..n {
                let factor = f.mul(a[r * n + c], inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[c * n + j]));
                }
            }
        }
        Ok(PrimeFieldElem(det))
    }

    pub fn rank(&self) -> usize {
        let f = self.field;
        let (r, c) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..c {
            let Some(piv) = (rank..r).find(|&i| a[i * c + col] != 0) else { continue };
            for j in 0..c {
                a.swap(piv * c + j, rank * c + j);
            }
            let inv = f.inv(a[rank * c + col]).unwrap();
            for i in 0..r {
                if i != rank && a[i * c + col] != 0 {
                    let factor = f.mul(a[i * c + col], inv);
                    for j in 0..c {
                        a[i * c + j] = f.sub(a[i * c + j], f.mul(factor, a[rank * c + j]));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Inverse by Gauss-Jordan; `None` when singular or non-square.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let f = self.field;
        let n = self.rows;
        let w = 2 * n;
        let mut a = vec![0u32; n * w];
        for i in 0..n {
            a[i * w..i * w + n].copy_from_slice(self.row(i));
            a[i * w + n + i] = 1;
        }
        for c in 0..n {
            let piv = (c..n).find(|&r| a[r * w + c] != 0)?;
            if piv != c {
                for j in 0..w {
                    a.swap(piv * w + j, c * w + j);
                }
            }
            let inv = f.inv(a[c * w + c]).unwrap();
            for j in 0..w {
                a[c * w + j] = f.mul(a[c * w + j], inv);
            }
            for r in 0..n {
                if r != c && a[r * w + c] != 0 {
                    let factor = a[r * w + c];
                    for j in 0..w {
                        a[r * w + j] = f.sub(a[r * w + j], f.mul(factor, a[c * w + j]));
                    }
                }
            }
        }
        let mut out = Self::zeros(f, n, n);
        for i in 0..n {
            out.data[i * n..(i + 1) * n].copy_from_slice(&a[i * w + n..(i + 1) * w]);
        }
        Some(out)
    }

    /// Characteristic polynomial `det(T I - M)` via reduction to upper
    /// Hessenberg form; only field divisions occur, so any `dim` works for
    /// any characteristic.
    pub fn char_poly(&self) -> Result<PolyFp, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let f = self.field;
        let n = self.rows;
        let mut h = self.data.clone();
        let at = |i: usize, j: usize| i * n + j;
        // Similarity reduction to upper Hessenberg form.
        for c in 0..n.saturating_sub(2) {
            let Some(piv) = (c + 1..n).find(|&r| h[at(r, c)] != 0) else { continue };
            if piv != c + 1 {
                for j in 0..n {
                    h.swap(at(piv, j), at(c + 1, j));
                }
                for i in 0..n {
                    h.swap(at(i, piv), at(i, c + 1));
                }
            }
            let inv = f.inv(h[at(c + 1, c)]).unwrap();
            for r in c + 2..n {
                let factor = f.mul(h[at(r, c)], inv);
                if factor == 0 {
                    continue;
                }
                // row_r -= factor * row_{c+1}
                for j in 0..n {
                    h[at(r, j)] = f.sub(h[at(r, j)], f.mul(factor, h[at(c + 1, j)]));
                }
                // col_{c+1} += factor * col_r
                for i in 0..n {
                    h[at(i, c + 1)] = f.add(h[at(i, c + 1)], f.mul(factor, h[at(i, r)]));
                }
            }
        }
        // Recurrence on leading principal submatrices.
        let mut polys: Vec<PolyFp> = vec![PolyFp::one(f)];
        for k in 0..n {
            let lin = PolyFp::new(f, vec![f.neg(h[at(k, k)]), 1]);
            let mut pk = lin.mul(&polys[k]);
            let mut prod = 1u32;
            for i in (0..k).rev() {
                prod = f.mul(prod, h[at(i + 1, i)]);
                let coeff = f.mul(prod, h[at(i, k)]);
                if coeff != 0 {
                    pk = pk.sub(&polys[i].scale(coeff));
                }
            }
            polys.push(pk);
        }
        Ok(polys.pop().unwrap())
    }
}

impl fmt::Debug for MatFF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatFF[{}x{} mod {}]", self.rows, self.cols, self.field.p())?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Characteristic polynomial over F_ℓ.
pub fn char_poly_ff(m: &MatFF) -> Result<PolyFp, LinalgError> {
    m.char_poly()
}

/// Determinant over F_ℓ.
pub fn det_ff(m: &MatFF) -> Result<PrimeFieldElem, LinalgError> {
    m.det()
}
