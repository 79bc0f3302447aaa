//! Irreducibility of monic integer polynomials.
//!
//! Fast path: reduce modulo small primes and read off factor-degree
//! patterns. A squarefree irreducible reduction certifies irreducibility,
//! and so does an empty intersection of the achievable factor degrees.
//! Otherwise the Zassenhaus search runs: factor modulo a good prime, Hensel
//! lift past twice the coefficient bound, and try every subset of lifted
//! factors as a candidate divisor.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::field::{is_prime, PolyFp, PrimeField};
use crate::linalg::{poly_reduce_mod, PolyZ};

use super::ZetaError;

/// Largest degree accepted.
pub const MAX_DEGREE: usize = 12;

/// Primes tried for the mod-p certificates.
pub const CERTIFICATE_PRIMES: [u32; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// Primes beyond this are not searched when looking for a squarefree reduction.
const GOOD_PRIME_LIMIT: u32 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IrreducibilityMethod {
    /// Squarefree and irreducible modulo this prime.
    ModPrimeCertificate { prime: u32 },
    /// No degree in `1..d` is a sum of factor degrees modulo every listed prime.
    DegreePatternCertificate { primes: Vec<u32> },
    /// Every candidate factor within the coefficient bound was ruled out.
    ExhaustiveMignotte,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibilityStatus {
    Irreducible,
    Reducible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityVerdict {
    pub status: IrreducibilityStatus,
    /// How irreducibility was certified.
    pub method: Option<IrreducibilityMethod>,
    /// A monic proper factor when reducible.
    pub factor: Option<PolyZ>,
    /// Factor degrees modulo each certificate prime where the reduction is squarefree.
    pub patterns: Vec<(u32, Vec<usize>)>,
}

impl IrreducibilityVerdict {
    pub fn is_irreducible(&self) -> bool {
        self.status == IrreducibilityStatus::Irreducible
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "method": self.method,
            "factor": self.factor.as_ref().map(|f| f.to_string()),
            "patterns": self.patterns.iter().map(|(p, d)| json!({"prime": p, "degrees": d})).collect::<Vec<_>>(),
        })
    }
}

/// Bound on the absolute value of every coefficient of every monic factor
/// of `f` in Z[T]: `2^deg · ‖f‖₁`.
pub fn mignotte_bound(f: &PolyZ) -> BigInt {
    let d = f.degree().unwrap_or(0);
    (BigInt::one() << d) * f.l1_norm()
}

pub fn irreducible_over_z(f: &PolyZ) -> Result<IrreducibilityVerdict, ZetaError> {
    let d = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(ZetaError::NotMonic),
    };
    if d > MAX_DEGREE {
        return Err(ZetaError::DegreeBudgetExceeded { degree: d, max: MAX_DEGREE });
    }
    let mut patterns = Vec::new();
    let mut achievable: Option<BTreeSet<usize>> = None;
    for &p in &CERTIFICATE_PRIMES {
        let field = PrimeField::new(p as u64).expect("certificate primes are prime");
        let reduced = poly_reduce_mod(f, field);
        if !reduced.is_squarefree() {
            continue;
        }
        let degrees = reduced.factor_degrees();
        if degrees.len() == 1 {
            patterns.push((p, degrees));
            return Ok(IrreducibilityVerdict {
                status: IrreducibilityStatus::Irreducible,
                method: Some(IrreducibilityMethod::ModPrimeCertificate { prime: p }),
                factor: None,
                patterns,
            });
        }
        let sums = subset_sums(&degrees, d);
        achievable = Some(match achievable {
            None => sums,
            Some(prev) => prev.intersection(&sums).copied().collect(),
        });
        patterns.push((p, degrees));
        if achievable.as_ref().is_some_and(|a| a.is_empty()) {
            let primes = patterns.iter().map(|(p, _)| *p).collect();
            return Ok(IrreducibilityVerdict {
                status: IrreducibilityStatus::Irreducible,
                method: Some(IrreducibilityMethod::DegreePatternCertificate { primes }),
                factor: None,
                patterns,
            });
        }
    }
    let outcome = zassenhaus(f)?;
    Ok(match outcome {
        Some(g) => IrreducibilityVerdict {
            status: IrreducibilityStatus::Reducible,
            method: None,
            factor: Some(g),
            patterns,
        },
        None => IrreducibilityVerdict {
            status: IrreducibilityStatus::Irreducible,
            method: Some(IrreducibilityMethod::ExhaustiveMignotte),
            factor: None,
            patterns,
        },
    })
}

/// Degrees in `1..d` that are sums of a sub-multiset of `degrees`.
fn subset_sums(degrees: &[usize], d: usize) -> BTreeSet<usize> {
    let mut reach = vec![false; d + 1];
    reach[0] = true;
    for &k in degrees {
        for s in (k..=d).rev() {
            if reach[s - k] {
                reach[s] = true;
            }
        }
    }
    (1..d).filter(|&s| reach[s]).collect()
}

/// Primitive part with positive leading coefficient.
fn primitive(f: &PolyZ) -> PolyZ {
    let content = f.coeffs().iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if content.is_zero() {
        return f.clone();
    }
    let sign = f.coeffs().last().is_some_and(|c| c.is_negative());
    let c = if sign { -content } else { content };
    PolyZ::new(f.coeffs().iter().map(|a| a / &c).collect())
}

/// Pseudo-remainder of `a` by `b`.
fn pseudo_rem(a: &PolyZ, b: &PolyZ) -> PolyZ {
    let db = b.degree().expect("nonzero divisor");
    let lb = b.coeff(db);
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lr = r.coeff(dr);
        let shift = PolyZ::new(
            std::iter::repeat_n(BigInt::zero(), dr - db).chain(std::iter::once(lr)).collect(),
        );
        r = r.scale(&lb).sub(&b.mul(&shift));
    }
    r
}

/// Primitive gcd in Z[T] by the primitive remainder sequence.
fn gcd_z(a: &PolyZ, b: &PolyZ) -> PolyZ {
    let (mut x, mut y) = (primitive(a), primitive(b));
    while !y.is_zero() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = if r.is_zero() { r } else { primitive(&r) };
    }
    primitive(&x)
}

fn derivative_z(f: &PolyZ) -> PolyZ {
    PolyZ::new(f.coeffs().iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

fn to_z(g: &PolyFp) -> PolyZ {
    PolyZ::new(g.coeffs().iter().map(|&c| BigInt::from(c)).collect())
}

fn reduce_big(f: &PolyZ, modulus: &BigInt) -> PolyZ {
    PolyZ::new(f.coeffs().iter().map(|c| c.mod_floor(modulus)).collect())
}

/// Lift `f ≡ g h (mod p)` with monic coprime `g, h` to a factorization modulo
/// `p^a`, one p-adic digit per step.
fn hensel_pair(f: &PolyZ, g: &PolyFp, h: &PolyFp, a: u32) -> (PolyZ, PolyZ) {
    let field = g.field();
    let p = BigInt::from(field.p());
    let (one, _, t) = g.ext_gcd(h);
    debug_assert_eq!(one.degree(), Some(0), "factors must be coprime");
    let (mut big_g, mut big_h) = (to_z(g), to_z(h));
    let mut pj = p.clone();
    for _ in 1..a {
        let next = &pj * &p;
        let diff = f.sub(&big_g.mul(&big_h));
        let e = poly_reduce_mod(&PolyZ::new(diff.coeffs().iter().map(|c| c.div_floor(&pj)).collect()), field);
        // g δh + h δg = e with δg = e t mod g
        let delta_g = e.mul(&t).rem(g);
        let (delta_h, rest) = e.sub(&h.mul(&delta_g)).div_rem(g);
        debug_assert!(rest.is_zero());
        big_g = reduce_big(&big_g.add(&to_z(&delta_g).scale(&pj)), &next);
        big_h = reduce_big(&big_h.add(&to_z(&delta_h).scale(&pj)), &next);
        pj = next;
    }
    (big_g, big_h)
}

/// Symmetric representative in `(-M/2, M/2]`.
fn symmetric(f: &PolyZ, modulus: &BigInt) -> PolyZ {
    let half = modulus / 2;
    PolyZ::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(modulus);
                if r > half {
                    r - modulus
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// A monic proper factor of the squarefree-or-not monic `f`, or `None` when
/// `f` is irreducible.
fn zassenhaus(f: &PolyZ) -> Result<Option<PolyZ>, ZetaError> {
    let d = f.degree().unwrap();
    if d == 1 {
        return Ok(None);
    }
    // a repeated factor shows up in gcd(f, f'); f monic keeps it monic up to sign
    let g = gcd_z(f, &derivative_z(f));
    if g.degree().unwrap_or(0) > 0 {
        return Ok(Some(g));
    }
    let field = (3..GOOD_PRIME_LIMIT)
        .filter(|&p| is_prime(p as u64))
        .map(|p| PrimeField::new(p as u64).expect("prime"))
        .find(|&fld| poly_reduce_mod(f, fld).is_squarefree())
        .expect("a squarefree polynomial has a good prime below the search limit");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a55_e4a5);
    let factors = poly_reduce_mod(f, field).factor_squarefree(&mut rng);
    let r = factors.len();
    if r == 1 {
        return Ok(None);
    }
    let bound = mignotte_bound(f);
    let p = BigInt::from(field.p());
    let mut a = 1u32;
    let mut modulus = p.clone();
    while modulus <= &bound * 2 {
        modulus *= &p;
        a += 1;
    }
    // peel factors off one at a time
    let mut lifted = Vec::with_capacity(r);
    let mut current = f.clone();
    for i in 0..r - 1 {
        let rest = factors[i + 1..].iter().fold(PolyFp::one(field), |acc, x| acc.mul(x));
        let (gi, hi) = hensel_pair(&current, &factors[i], &rest, a);
        lifted.push(gi);
        current = hi;
    }
    lifted.push(current);
    let degrees: Vec<usize> = factors.iter().map(|x| x.degree().unwrap()).collect();
    for mask in 1u32..(1 << r) - 1 {
        let deg: usize = (0..r).filter(|&i| mask >> i & 1 == 1).map(|i| degrees[i]).sum();
        if deg > d / 2 {
            continue;
        }
        let product = (0..r)
            .filter(|&i| mask >> i & 1 == 1)
            .fold(PolyZ::one(), |acc, i| reduce_big(&acc.mul(&lifted[i]), &modulus));
        let candidate = symmetric(&product, &modulus);
        if candidate.coeffs().iter().any(|c| c.abs() > bound) {
            continue;
        }
        if f.div_exact_monic(&candidate).is_some() {
            return Ok(Some(candidate));
        }
    }
    Ok(None)
}
