use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::PolyZ;

/// Square matrix with arbitrary-precision integer entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// Fraction-free determinant (Bareiss): every intermediate division is exact.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.n, self.data.clone())
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> BigInt {
        let k = rows.len();
        let mut data = Vec::with_capacity(k * k);
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        bareiss_det(k, data)
    }

    /// `det(T I - M)` by evaluating at `T = 0..=d` with Bareiss and
    /// interpolating exactly in the Newton basis.
    pub fn char_poly(&self) -> PolyZ {
        let d = self.n;
        let values: Vec<BigInt> = (0..=d)
            .map(|t| {
                let mut data = self.data.iter().map(|x| -x).collect::<Vec<_>>();
                for i in 0..d {
                    data[i * d + i] += BigInt::from(t);
                }
                bareiss_det(d, data)
            })
            .collect();
        interpolate_consecutive(&values)
    }
}

fn bareiss_det(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(piv) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Polynomial through `(t, values[t])` for `t = 0..values.len()`. Divided
/// differences at consecutive integers of an integer polynomial are integers.
fn interpolate_consecutive(values: &[BigInt]) -> PolyZ {
    let n = values.len();
    let mut dd = values.to_vec();
    let mut newton = Vec::with_capacity(n);
    for k in 0..n {
        newton.push(dd[0].clone());
        let next: Vec<BigInt> = dd.windows(2).map(|w| &w[1] - &w[0]).collect();
        let div = BigInt::from(k + 1);
        dd = next
            .into_iter()
            .map(|x| {
                debug_assert!((&x % &div).is_zero());
                x / &div
            })
            .collect();
    }
    // sum_k newton[k] * t (t-1) ... (t-k+1)
    let mut result = PolyZ::zero();
    let mut basis = PolyZ::one();
    for (k, c) in newton.iter().enumerate() {
        result = result.add(&basis.scale(c));
        basis = basis.mul(&PolyZ::from_i64(&[-(k as i64), 1]));
    }
    result
}

/// Characteristic polynomial of an integer matrix.
pub fn int_charpoly(m: &IntMatrix) -> PolyZ {
    m.char_poly()
}
