use std::fmt;

use super::PrimeField;

/// Dense univariate polynomial over a prime field, lowest degree first.
///
/// Always normalized: no trailing zero coefficients, so the zero polynomial
/// has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFp {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl PolyFp {
    pub fn new(field: PrimeField, coeffs: Vec<u32>) -> Self {
        let mut p = Self {
            field,
            coeffs: coeffs.into_iter().map(|c| c % field.p()).collect(),
        };
        p.trim();
        p
    }

    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::new(field, vec![1])
    }

    /// The monomial `x`.
    pub fn x(field: PrimeField) -> Self {
        Self::new(field, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).unwrap();
        self.scale(inv)
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let p = f.p() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::new(f, acc.into_iter().map(|c| c as u32).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let f = self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lead = f.inv(divisor.lead()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv_lead);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = f.sub(rem[k], f.mul(c, d));
            }
        }
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus);
        let mut acc = Self::one(self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, (i as u64 % f.p() as u64) as u32))
                .collect(),
        )
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Irreducibility over F_p: for every `j <= deg/2`, `gcd(x^{p^j} - x, f) = 1`.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        let f = self.monic();
        let x = Self::x(self.field);
        let mut power = x.clone();
        for _ in 1..=d / 2 {
            power = power.pow_mod(self.field.p() as u64, &f);
            if f.gcd(&power.sub(&x)).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Distinct-degree factorization of a squarefree polynomial: pairs
    /// `(j, g_j)` where `g_j` is the product of the monic irreducible factors
    /// of degree `j`. Only nontrivial `g_j` are returned.
    pub fn distinct_degree_factors(&self) -> Vec<(usize, Self)> {
        let mut f = self.monic();
        let x = Self::x(self.field);
        let p = self.field.p() as u64;
        let mut out = Vec::new();
        let mut power = x.clone();
        let mut j = 0usize;
        while f.degree().unwrap_or(0) > 0 {
            j += 1;
            let fd = f.degree().unwrap();
            if 2 * j > fd {
                out.push((fd, f));
                break;
            }
            power = power.pow_mod(p, &f);
            let g = f.gcd(&power.sub(&x));
            if g.degree().unwrap() > 0 {
                f = f.div_rem(&g).0;
                power = power.rem(&f);
                out.push((j, g));
            }
        }
        out
    }

    /// Multiset of irreducible factor degrees of a squarefree polynomial, ascending.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut degrees = Vec::new();
        for (j, g) in self.distinct_degree_factors() {
            degrees.extend(std::iter::repeat_n(j, g.degree().unwrap() / j));
        }
        degrees
    }

    /// Complete factorization of a squarefree polynomial into monic
    /// irreducibles: distinct-degree splitting followed by Cantor-Zassenhaus
    /// equal-degree splitting (p odd). Factors are sorted.
    pub fn factor_squarefree<R: rand::Rng>(&self, rng: &mut R) -> Vec<Self> {
        let mut out = Vec::new();
        for (j, g) in self.distinct_degree_factors() {
            self.split_equal_degree(g, j, rng, &mut out);
        }
        out.sort_by(|a, b| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
        out
    }

    fn split_equal_degree<R: rand::Rng>(&self, g: Self, j: usize, rng: &mut R, out: &mut Vec<Self>) {
        let d = g.degree().unwrap();
        if d == j {
            out.push(g);
            return;
        }
        let f = self.field;
        let p = f.p() as u64;
        // (p^j - 1) / 2 as an exponent, applied by repeated powering
        loop {
            let a = Self::new(f, (0..d).map(|_| rng.gen_range(0..f.p())).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let common = a.gcd(&g);
            let candidate = if common.degree().unwrap() > 0 {
                common
            } else {
                // a^{(p^j - 1)/2} = (a^{p^{j-1}} ... a^p a)^{(p-1)/2}
                let mut acc = a.rem(&g);
                let mut frob = acc.clone();
                for _ in 1..j {
                    frob = frob.pow_mod(p, &g);
                    acc = acc.mul(&frob).rem(&g);
                }
                let b = acc.pow_mod((p - 1) / 2, &g);
                g.gcd(&b.sub(&Self::one(f)))
            };
            let cd = candidate.degree().unwrap();
            if cd > 0 && cd < d {
                let rest = g.div_rem(&candidate).0;
                self.split_equal_degree(candidate, j, rng, out);
                self.split_equal_degree(rest, j, rng, out);
                return;
            }
        }
    }

    /// Squarefree decomposition of a monic polynomial: pairwise coprime
    /// squarefree `a_i` with `self = Π a_i^{m_i}`, returned as `(a_i, m_i)`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = self.field.p() as usize;
        let d = f.derivative();
        if d.is_zero() {
            // f(T) = h(T^p) = h(T)^p since Frobenius fixes F_p
            let h = Self::new(self.field, f.coeffs.iter().step_by(p).copied().collect());
            return h.squarefree_decomposition().into_iter().map(|(g, k)| (g, k * p)).collect();
        }
        let mut out = Vec::new();
        let mut c = f.gcd(&d);
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let z = w.div_rem(&y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z, i));
            }
            i += 1;
            c = c.div_rem(&y).0;
            w = y;
        }
        if c.degree().unwrap_or(0) > 0 {
            // what is left is a p-th power
            let h = Self::new(self.field, c.coeffs.iter().step_by(p).copied().collect());
            out.extend(h.squarefree_decomposition().into_iter().map(|(g, k)| (g, k * p)));
        }
        out
    }

    /// `(g, s, t)` with `g = gcd(self, other)` monic and `s self + t other = g`.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFp[mod {}]{:?}", self.field.p(), self.coeffs)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}T")?,
                (i, 1) => write!(f, "T^{i}")?,
                (i, c) => write!(f, "{c}T^{i}")?,
            }
        }
        Ok(())
    }
}
