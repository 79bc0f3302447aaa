use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{PolyFp, PrimeField};

use super::{IntMatrix, LinalgError};

/// Polynomial with arbitrary-precision integer coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyZ {
    coeffs: Vec<BigInt>,
}

impl PolyZ {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// Monic polynomial with the given integer roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, &r| acc.mul(&Self::from_i64(&[-r, 1])))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `c^{-d} P(c T)` stays integral only for special `c`; this returns
    /// `P(c T)` without the normalization.
    pub fn substitute_scaled(&self, c: &BigInt) -> Self {
        let mut pow = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Self::new(out)
    }

    /// Exact division by a monic divisor; `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        assert!(divisor.is_monic(), "divisor must be monic");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - dd + 1];
        for i in (dd..=n).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &c * d;
            }
            quot[i - dd] = c;
        }
        rem.iter().all(|c| c.is_zero()).then(|| Self::new(quot))
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Companion matrix whose characteristic polynomial is `self` (monic).
    pub fn companion(&self) -> IntMatrix {
        let d = self.degree().expect("companion of the zero polynomial");
        assert!(self.is_monic(), "companion matrix needs a monic polynomial");
        let mut m = IntMatrix::zeros(d);
        for i in 1..d {
            m.set(i, i - 1, BigInt::one());
        }
        for i in 0..d {
            m.set(i, d - 1, -self.coeff(i));
        }
        m
    }

    /// Power sums `p_1..p_count` of the roots, via Newton's identities run
    /// forwards (no division needed).
    pub fn power_sums(&self, count: usize) -> Vec<BigInt> {
        let d = self.degree().unwrap_or(0);
        // e_k with the sign convention P = sum (-1)^k e_k T^{d-k}
        let e = |k: usize| -> BigInt {
            if k > d {
                return BigInt::zero();
            }
            let c = self.coeff(d - k);
            if k.is_multiple_of(2) {
                c
            } else {
                -c
            }
        };
        let mut p: Vec<BigInt> = Vec::with_capacity(count);
        for k in 1..=count {
            // p_k = sum_{j=1}^{k-1} (-1)^{j-1} e_j p_{k-j} + (-1)^{k-1} k e_k
            let mut acc = BigInt::zero();
            for j in 1..k {
                let term = e(j) * &p[k - j - 1];
                if j % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let last = e(k) * BigInt::from(k);
            if k % 2 == 1 {
                acc += last;
            } else {
                acc -= last;
            }
            p.push(acc);
        }
        p
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl fmt::Debug for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyZ{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !(mag.is_one() && i > 0);
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{i}")?,
            }
        }
        Ok(())
    }
}

/// Monic integer polynomial from power sums via Newton's identities
/// `k e_k = sum_{j=1}^k (-1)^{j-1} e_{k-j} p_j`, with every division checked.
pub fn newton_charpoly(power_sums: &[BigInt], d: usize) -> Result<PolyZ, LinalgError> {
    if power_sums.len() < d {
        return Err(LinalgError::TooFewPowerSums { needed: d, got: power_sums.len() });
    }
    let mut e = vec![BigInt::one()];
    for k in 1..=d {
        let mut acc = BigInt::zero();
        for j in 1..=k {
            let term = &e[k - j] * &power_sums[j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(LinalgError::NonIntegralDivision { k });
        }
        e.push(q);
    }
    // T^d - e_1 T^{d-1} + e_2 T^{d-2} - ...
    let mut coeffs = vec![BigInt::zero(); d + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[d - k] = if k % 2 == 0 { ek } else { -ek };
    }
    Ok(PolyZ::new(coeffs))
}

/// Coefficientwise reduction into F_ℓ.
pub fn poly_reduce_mod(p: &PolyZ, field: PrimeField) -> PolyFp {
    let ell = BigInt::from(field.p());
    PolyFp::new(
        field,
        p.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(&ell);
                u32::try_from(&r).unwrap()
            })
            .collect(),
    )
}
