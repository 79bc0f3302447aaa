use std::fmt;

use super::FieldError;

/// Trial-division primality test; adequate for the desk-scale moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of a prime field, always in canonical form `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PrimeFieldElem(pub(crate) u32);

impl PrimeFieldElem {
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for PrimeFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field F_p for an odd prime p.
///
/// The context is a plain `Copy` value; element arithmetic goes through it so
/// that matrices and polynomials can store raw `u32` residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_PRIME: u64 = 1 << 20;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenModulus);
        }
        if p > MAX_PRIME {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::CompositeModulus(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn elem(&self, v: i64) -> PrimeFieldElem {
        PrimeFieldElem(self.reduce(v))
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            return None;
        }
        Some(self.pow(a, self.p as u64 - 2))
    }

    /// Euler's criterion: 0, +1 or -1.
    pub fn quad_char(&self, a: u32) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.quad_char(a) >= 0
    }

    /// Smallest `s` in `[0, p)` with `s^2 = a`, if any.
    pub fn sqrt_smallest(&self, a: u32) -> Option<u32> {
        let a = a % self.p;
        (0..self.p).find(|&s| self.mul(s, s) == a)
    }

    /// A fixed non-square, the smallest one.
    pub fn nonsquare(&self) -> u32 {
        (2..self.p).find(|&x| self.quad_char(x) == -1).expect("odd prime field has non-squares")
    }

    /// Signed representative in `(-p/2, p/2]`.
    pub fn signed(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_errors() {
        assert!(PrimeField::new(5).is_ok());
        assert_eq!(PrimeField::new(4), Err(FieldError::CompositeModulus(4)));
        assert_eq!(PrimeField::new(2), Err(FieldError::EvenModulus));
        assert_eq!(PrimeField::new(1), Err(FieldError::CompositeModulus(1)));
    }

    #[test]
    fn quadratic_character_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f5.quad_char(4), 1);
        assert_eq!(f7.quad_char(0), 0);
        assert_eq!(f7.quad_char(3), -1);
        let squares: Vec<u32> = (1..7).filter(|&x| f7.quad_char(x) == 1).collect();
        assert_eq!(squares, vec![1, 2, 4]);
    }

    #[test]
    fn inverses_exhaustive() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..f.p() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn factorization_helpers() {
        assert_eq!(prime_factors(24), vec![2, 3]);
        assert_eq!(prime_factors(15624), vec![2, 3, 7, 31]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }

    #[test]
    fn square_roots() {
        let f7 = PrimeField::new(7).unwrap();
        let f13 = PrimeField::new(13).unwrap();
        assert_eq!(f7.sqrt_smallest(4), Some(2));
        assert_eq!(f13.sqrt_smallest(12), Some(5));
        assert_eq!(f7.sqrt_smallest(3), None);
    }
}
