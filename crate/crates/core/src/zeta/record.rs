use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arrangement::{is_general_position, Arrangement};
use crate::field::{PolyFp, PrimeField};
use crate::linalg::{newton_charpoly, poly_reduce_mod, PolyZ};
use crate::wedge::binomial;

use super::{count_points, ZetaError};

/// How many point counts are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Count over F_{q^i} for every `i = 1..d`.
    Full,
    /// For n odd only: count `i = 1..d/2` and complete the polynomial with
    /// the functional equation, whose sign is forced to be +1 by the
    /// symplectic pairing.
    HalfFunctionalEquation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaChecks {
    /// `deg P = C(m-2, n)`.
    pub degree: bool,
    /// `|e_k| <= C(d,k) q^{nk/2}` for all k and `|a_i| <= d q^{in/2}` for all i.
    pub weil: bool,
    /// `T^d P(qⁿ/T) = ε q^{nd/2} P(T)` for some sign ε.
    pub funceq: bool,
    /// The sign ε, or 0 when the functional equation fails.
    pub sign: i8,
}

impl ZetaChecks {
    pub fn all_pass(&self) -> bool {
        self.degree && self.weil && self.funceq
    }
}

/// Counts, traces and the integer Frobenius polynomial of one arrangement.
#[derive(Clone, Debug)]
pub struct ZetaRecord {
    pub arrangement: Arrangement,
    pub n: usize,
    pub m: usize,
    pub q: u64,
    pub mode: CountMode,
    /// Number of levels obtained by counting; later counts are derived from `poly`.
    pub counted_levels: usize,
    /// `N_i` for `i = 1..d`.
    pub counts: Vec<BigInt>,
    /// `a_i = (-1)ⁿ (N_i - Σ_{j<=n} q^{ij})` for `i = 1..d`.
    pub traces: Vec<BigInt>,
    /// Monic `P(T) = Π (T - α_k)`.
    pub poly: PolyZ,
    pub checks: ZetaChecks,
}

fn big_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

impl ZetaRecord {
    pub fn degree(&self) -> usize {
        binomial(self.m - 2, self.n)
    }

    /// JSON document: integers that do not fit in i64 are written as strings.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<u64>> = (0..=self.n)
            .map(|i| (0..self.m).map(|j| self.arrangement.entry(i, j).code()).collect())
            .collect();
        json!({
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "mode": self.mode,
            "counted_levels": self.counted_levels,
            "arrangement": rows,
            "counts": self.counts.iter().map(big_json).collect::<Vec<_>>(),
            "traces": self.traces.iter().map(big_json).collect::<Vec<_>>(),
            "poly": self.poly.coeffs().iter().map(big_json).collect::<Vec<_>>(),
            "checks": self.checks,
        })
    }
}

/// `Σ_{j=0..n} Q^j` as a big integer.
fn cohomology_of_pn(big_q: &BigInt, n: usize) -> BigInt {
    let mut total = BigInt::zero();
    let mut pow = BigInt::one();
    for _ in 0..=n {
        total += &pow;
        pow *= big_q;
    }
    total
}

fn sign_pow(n: usize) -> BigInt {
    if n.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

pub fn frobenius_charpoly(arr: &Arrangement) -> Result<ZetaRecord, ZetaError> {
    frobenius_charpoly_with(arr, CountMode::Full)
}

pub fn frobenius_charpoly_with(arr: &Arrangement, mode: CountMode) -> Result<ZetaRecord, ZetaError> {
    if !is_general_position(arr) {
        return Err(ZetaError::NotGeneralPosition);
    }
    let (n, m, q) = (arr.n(), arr.m(), arr.q());
    let d = binomial(m - 2, n);
    let levels = match mode {
        CountMode::Full => d,
        CountMode::HalfFunctionalEquation => {
            if n % 2 == 0 {
                return Err(ZetaError::HalfModeNeedsOddN);
            }
            d / 2
        }
    };
    let qb = BigInt::from(q);
    let sign = sign_pow(n);
    let mut counts = Vec::with_capacity(d);
    let mut traces = Vec::with_capacity(d);
    for i in 1..=levels {
        let count = BigInt::from(count_points(arr, i as u32)?);
        let trace = &sign * (&count - cohomology_of_pn(&qb.pow(i as u32), n));
        counts.push(count);
        traces.push(trace);
    }
    let poly = match mode {
        CountMode::Full => newton_charpoly(&traces, d).map_err(ZetaError::InconsistentCounts)?,
        CountMode::HalfFunctionalEquation => {
            // e_1..e_h from the first h power sums, then e_{d-k} = e_k q^{n(h-k)}
            let h = levels;
            let partial = newton_charpoly(&traces, h).map_err(ZetaError::InconsistentCounts)?;
            let mut coeffs = vec![BigInt::zero(); d + 1];
            for k in 0..=h {
                // (-1)^k e_k sits at T^{d-k}; its mirror at T^k carries q^{n(h-k)}
                let c = partial.coeff(h - k);
                coeffs[k] = &c * qb.pow((n * (h - k)) as u32);
                coeffs[d - k] = c;
            }
            PolyZ::new(coeffs)
        }
    };
    let all_traces = poly.power_sums(d);
    debug_assert_eq!(all_traces[..levels], traces[..]);
    for i in levels + 1..=d {
        let a = &all_traces[i - 1];
        counts.push(cohomology_of_pn(&qb.pow(i as u32), n) + &sign * a);
    }
    let checks = run_checks(&poly, &all_traces, n, q, d);
    Ok(ZetaRecord {
        arrangement: arr.clone(),
        n,
        m,
        q,
        mode,
        counted_levels: levels,
        counts,
        traces: all_traces,
        poly,
        checks,
    })
}

fn run_checks(poly: &PolyZ, traces: &[BigInt], n: usize, q: u64, d: usize) -> ZetaChecks {
    let qb = BigInt::from(q);
    let degree = poly.degree() == Some(d) && poly.is_monic();
    // compare squares to stay in the integers
    let coeff_ok = (0..=d).all(|k| {
        let ek = poly.coeff(d - k);
        let bound = BigInt::from(binomial(d, k));
        &ek * &ek <= &bound * &bound * qb.pow((n * k) as u32)
    });
    let trace_ok = traces.iter().enumerate().all(|(i, a)| {
        let db = BigInt::from(d);
        a * a <= &db * &db * qb.pow((n * (i + 1)) as u32)
    });
    let (funceq, sign) = functional_equation(poly, n, &qb, d);
    ZetaChecks { degree, weil: coeff_ok && trace_ok, funceq, sign }
}

/// Check `c_j q^{nj} = ε q^{nd/2} c_{d-j}` for all `j` and return ε.
fn functional_equation(poly: &PolyZ, n: usize, q: &BigInt, d: usize) -> (bool, i8) {
    if (n * d) % 2 == 1 || poly.degree() != Some(d) {
        return (false, 0);
    }
    let half = q.pow((n * d / 2) as u32);
    let c0 = poly.coeff(0);
    let eps: i8 = if c0 == half {
        1
    } else if c0 == -&half {
        -1
    } else {
        return (false, 0);
    };
    let ok = (0..=d).all(|j| {
        let lhs = poly.coeff(j) * q.pow((n * j) as u32);
        let rhs = &half * poly.coeff(d - j) * BigInt::from(eps);
        lhs == rhs
    });
    if ok {
        (true, eps)
    } else {
        (false, 0)
    }
}

/// Characteristic polynomial of `Frob / s` mod ℓ, where `s` is the least
/// positive square root of the similitude multiplier `qⁿ mod ℓ`:
/// `s^{-d} P(s T)` reduced mod ℓ.
pub fn normalize_mod_ell(rec: &ZetaRecord, ell: PrimeField) -> Result<PolyFp, ZetaError> {
    let l = ell.p();
    if rec.arrangement.field().p() == l as u64 {
        return Err(ZetaError::CharacteristicClash { ell: l });
    }
    let mu = ell.pow((rec.q % l as u64) as u32, rec.n as u64);
    let s = ell
        .sqrt_smallest(mu)
        .ok_or(ZetaError::NonSquareMultiplier { multiplier: mu, ell: l })?;
    let d = rec.poly.degree().unwrap_or(0);
    let reduced = poly_reduce_mod(&rec.poly, ell);
    let s_inv = ell.inv(s).expect("multiplier is nonzero");
    let coeffs = (0..=d)
        .map(|j| ell.mul(reduced.coeff(j), ell.pow(s_inv, (d - j) as u64)))
        .collect();
    Ok(PolyFp::new(ell, coeffs))
}

/// Irreducible factor degrees with multiplicities of `p mod ℓ`, sorted,
/// as `(degree, multiplicity)` pairs.
pub fn factor_pattern_mod(p: &PolyZ, ell: PrimeField) -> Vec<(usize, usize)> {
    let reduced = poly_reduce_mod(p, ell);
    let mut out: Vec<(usize, usize)> = reduced
        .squarefree_decomposition()
        .into_iter()
        .flat_map(|(g, mult)| g.factor_degrees().into_iter().map(move |deg| (deg, mult)))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{field_of_order, random_arrangement};
    use crate::zeta::count_points_direct;

    fn four_points() -> Arrangement {
        let f5 = field_of_order(5).unwrap();
        Arrangement::from_rows(f5, &[vec![0, 1, 2, 1], vec![1, 1, 1, 0]]).unwrap()
    }

    #[test]
    fn elliptic_case() {
        let arr = four_points();
        let rec = frobenius_charpoly(&arr).unwrap();
        assert_eq!(rec.poly.degree(), Some(2));
        let n1 = BigInt::from(count_points_direct(&arr, 1).unwrap());
        let a1 = BigInt::from(6) - &n1;
        assert_eq!(rec.poly, PolyZ::new(vec![BigInt::from(5), -a1.clone(), BigInt::one()]));
        // second count agrees with a_2 = a_1^2 - 2 * 5
        let n2 = BigInt::from(count_points_direct(&arr, 2).unwrap());
        assert_eq!(BigInt::from(26) - n2, &a1 * &a1 - BigInt::from(10));
        assert!(rec.checks.all_pass());
        assert_eq!(rec.checks.sign, 1);
    }

    #[test]
    fn degrees_and_checks() {
        for (n, m, q, expect_d) in [(1usize, 6usize, 5u64, 4usize), (2, 6, 5, 6), (1, 4, 7, 2)] {
            let f = field_of_order(q).unwrap();
            let arr = random_arrangement(n, m, &f, 3).unwrap();
            let rec = frobenius_charpoly(&arr).unwrap();
            assert_eq!(rec.degree(), expect_d);
            assert!(rec.checks.all_pass(), "{:?}", rec.checks);
            if n % 2 == 1 {
                assert_eq!(rec.checks.sign, 1);
            }
            // counts reproduced from the polynomial's power sums
            let sums = rec.poly.power_sums(expect_d);
            assert_eq!(sums, rec.traces);
        }
    }

    #[test]
    fn half_mode_agrees_with_full_counting() {
        let f = field_of_order(5).unwrap();
        for seed in 0..5 {
            let arr = random_arrangement(1, 6, &f, seed).unwrap();
            let full = frobenius_charpoly(&arr).unwrap();
            let half = frobenius_charpoly_with(&arr, CountMode::HalfFunctionalEquation).unwrap();
            assert_eq!(full.poly, half.poly);
            assert_eq!(full.counts, half.counts);
            assert_eq!(half.counted_levels, 2);
        }
        let arr = random_arrangement(2, 6, &f, 0).unwrap();
        assert_eq!(
            frobenius_charpoly_with(&arr, CountMode::HalfFunctionalEquation).unwrap_err(),
            ZetaError::HalfModeNeedsOddN
        );
    }

    #[test]
    fn normalization_examples() {
        let f = field_of_order(5).unwrap();
        let arr = random_arrangement(2, 6, &f, 1).unwrap();
        let rec = frobenius_charpoly(&arr).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        let f13 = PrimeField::new(13).unwrap();
        // 25 = 4 mod 7 with root 2; 25 = 12 mod 13 with root 5
        assert_eq!(f7.sqrt_smallest(f7.pow(5, 2)), Some(2));
        assert_eq!(f13.sqrt_smallest(f13.pow(5, 2)), Some(5));
        for (fld, s) in [(f7, 2u32), (f13, 5)] {
            let norm = normalize_mod_ell(&rec, fld).unwrap();
            assert!(norm.is_monic());
            // s^d * norm(T / s) recovers the plain reduction
            let d = 6;
            let back: Vec<u32> = (0..=d).map(|j| fld.mul(norm.coeff(j), fld.pow(s, (d - j) as u64))).collect();
            assert_eq!(PolyFp::new(fld, back), poly_reduce_mod(&rec.poly, fld));
        }
        // 25 = 1 mod 3: s = 1 gives the plain reduction
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(normalize_mod_ell(&rec, f3).unwrap(), poly_reduce_mod(&rec.poly, f3));
        let one = frobenius_charpoly(&random_arrangement(1, 6, &f, 1).unwrap()).unwrap();
        assert_eq!(
            normalize_mod_ell(&one, f3),
            Err(ZetaError::NonSquareMultiplier { multiplier: 2, ell: 3 })
        );
        assert_eq!(
            normalize_mod_ell(&one, PrimeField::new(5).unwrap()),
            Err(ZetaError::CharacteristicClash { ell: 5 })
        );
    }

    #[test]
    fn factor_patterns() {
        let f5 = PrimeField::new(5).unwrap();
        // (T - 1)^2 (T^2 + 2) over F_5
        let p = PolyZ::from_roots(&[1, 1]).mul(&PolyZ::from_i64(&[2, 0, 1]));
        assert_eq!(factor_pattern_mod(&p, f5), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn json_shape() {
        let rec = frobenius_charpoly(&four_points()).unwrap();
        let v = rec.to_json();
        assert_eq!(v["poly"].as_array().unwrap().len(), 3);
        assert_eq!(v["checks"]["sign"], json!(1));
        assert_eq!(v["counts"].as_array().unwrap().len(), 2);
    }
}
