//! Point counts of `x^2 = ℓ_1 ⋯ ℓ_m` over F_Q, `Q = q^i`.
//!
//! `N = #Pⁿ(F_Q) + Σ_{[x]} χ(F(x))`, with representatives normalized so
//! that the first nonzero coordinate is 1. The points with leading 1 in
//! position `k` form an affine chart; inside a chart the last coordinate
//! `v` is summed in closed form against the remaining ones.
//!
//! For fixed outer coordinates every form is `b + c v`. Writing `v = g^ν`,
//! the sign `χ(b + c g^ν)` is either constant (`c = 0`), alternating in ν
//! (`b = 0`), or `χ(b) Z[ν + log c - log b]` with `Z[e] = χ(1 + g^e)`. The
//! sequence `Z` is stored as two bit planes (nonzero, negative) of doubled
//! length so that every shift is a contiguous window; a fiber sum is then a
//! chain of word-wise AND/XOR and two popcounts.

use std::sync::Arc;

use rayon::prelude::*;

use crate::arrangement::{is_general_position, Arrangement};
use crate::field::{Embedding, ExtField, FqElem, LogElem, TABLE_BUDGET};

use super::ZetaError;

const ALT_NEG: u64 = 0xaaaa_aaaa_aaaa_aaaa;

/// `#Pⁿ(F_Q) = 1 + Q + .. + Qⁿ`.
pub fn projective_size(big_q: u64, n: usize) -> Result<i128, ZetaError> {
    let mut total: i128 = 0;
    let mut pow: i128 = 1;
    for _ in 0..=n {
        total = total.checked_add(pow).ok_or(ZetaError::CountOverflow)?;
        pow = pow.checked_mul(big_q as i128).ok_or(ZetaError::CountOverflow)?;
    }
    Ok(total)
}

/// The extension F_{q^i} containing the arrangement's field.
pub fn extension_field(arr: &Arrangement, i: u32) -> Result<Arc<ExtField>, ZetaError> {
    if i == 0 {
        return Err(ZetaError::ZeroLevel);
    }
    let src = arr.field();
    Ok(ExtField::shared(src.p(), src.degree() * i)?)
}

/// Arrangement coefficients carried into F_Q.
fn embedded_columns(arr: &Arrangement, target: &Arc<ExtField>) -> Result<Vec<Vec<FqElem>>, ZetaError> {
    if target.order() == arr.q() {
        return Ok(arr.columns().to_vec());
    }
    let emb = Embedding::new(arr.field().clone(), target.clone())?;
    Ok(arr
        .columns()
        .iter()
        .map(|c| c.iter().map(|&x| emb.apply(x)).collect())
        .collect())
}

struct Planes {
    /// Q - 1
    period: u32,
    words: usize,
    tail_mask: u64,
    nz: Vec<u64>,
    neg: Vec<u64>,
}

impl Planes {
    fn new(field: &ExtField) -> Self {
        let tables = field.tables().expect("tables checked by caller");
        let period = (field.order() - 1) as u32;
        let words = (period as usize).div_ceil(64);
        let total_words = (2 * period as usize).div_ceil(64) + 2;
        let mut nz = vec![0u64; total_words];
        let mut neg = vec![0u64; total_words];
        for e in 0..2 * period as usize {
            let z = tables.zech[e % period as usize];
            if z == crate::field::LOG_ZERO {
                continue;
            }
            nz[e / 64] |= 1 << (e % 64);
            if z % 2 == 1 {
                neg[e / 64] |= 1 << (e % 64);
            }
        }
        let rem = period % 64;
        let tail_mask = if rem == 0 { u64::MAX } else { (1u64 << rem) - 1 };
        Self { period, words, tail_mask, nz, neg }
    }

    #[inline(always)]
    fn window(plane: &[u64], offset: u32, w: usize) -> u64 {
        let bit = offset as usize + 64 * w;
        let idx = bit >> 6;
        let s = bit & 63;
        if s == 0 {
            plane[idx]
        } else {
            (plane[idx] >> s) | (plane[idx + 1] << (64 - s))
        }
    }

    /// `Σ_{ν < Q-1} (-1)^{alt ν} Π_o Z[ν + o]`.
    fn shifted_product_sum(&self, offsets: &[u32], alt: bool) -> i64 {
        if offsets.is_empty() {
            return if alt { 0 } else { self.period as i64 };
        }
        let mut total = 0i64;
        for w in 0..self.words {
            let mut nz = u64::MAX;
            let mut neg = if alt { ALT_NEG } else { 0 };
            for &o in offsets {
                nz &= Self::window(&self.nz, o, w);
                neg ^= Self::window(&self.neg, o, w);
            }
            if w + 1 == self.words {
                nz &= self.tail_mask;
            }
            total += (nz & !neg).count_ones() as i64 - (nz & neg).count_ones() as i64;
        }
        total
    }
}

/// Counting context for one arrangement over one extension field.
struct Counter<'a> {
    field: &'a ExtField,
    n: usize,
    /// `logs[j][t]`: log of the coefficient of `x_t` in `ℓ_j`
    logs: Vec<Vec<LogElem>>,
    planes: Planes,
}

#[inline]
fn chi(l: LogElem) -> i64 {
    if l.is_zero() {
        0
    } else if l.0.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl Counter<'_> {
    /// `Σ_{v ∈ F_Q} Π_j χ(b_j + c_j v)`.
    fn fiber_sum(&self, b: &[LogElem], c: &[LogElem], offsets: &mut Vec<u32>) -> i64 {
        let period = self.planes.period;
        let at_zero: i64 = b.iter().map(|&x| chi(x)).product();
        let mut sigma = 1i64;
        let mut alt = false;
        offsets.clear();
        for (&bj, &cj) in b.iter().zip(c) {
            match (bj.is_zero(), cj.is_zero()) {
                (true, true) => return 0,
                (false, true) => sigma *= chi(bj),
                (true, false) => {
                    sigma *= chi(cj);
                    alt = !alt;
                }
                (false, false) => {
                    sigma *= chi(bj);
                    let o = if cj.0 >= bj.0 { cj.0 - bj.0 } else { cj.0 + period - bj.0 };
                    offsets.push(o);
                }
            }
        }
        at_zero + sigma * self.planes.shifted_product_sum(offsets, alt)
    }

    /// Character sum over the chart whose leading 1 sits at position `k`.
    fn chart_sum(&self, k: usize) -> i64 {
        let n = self.n;
        let m = self.logs.len();
        if k == n {
            return self.logs.iter().map(|l| chi(l[n])).product();
        }
        let outer = n - k - 1;
        let big_q = self.field.order();
        let total = big_q.pow(outer as u32);
        let tables = self.field.tables().unwrap();
        let c: Vec<LogElem> = self.logs.iter().map(|l| l[n]).collect();
        (0..total as usize)
            .into_par_iter()
            .with_min_len(64)
            .map_init(
                || (vec![LogElem::ZERO; m], Vec::with_capacity(m)),
                |(b, offsets), idx| {
                    for (j, l) in self.logs.iter().enumerate() {
                        b[j] = l[k];
                    }
                    let mut rest = idx as u64;
                    for t in k + 1..n {
                        let code = rest % big_q;
                        rest /= big_q;
                        let lu = LogElem(tables.log[code as usize]);
                        if lu.is_zero() {
                            continue;
                        }
                        for (j, l) in self.logs.iter().enumerate() {
                            b[j] = self.field.log_add(b[j], self.field.log_mul(l[t], lu));
                        }
                    }
                    self.fiber_sum(b, &c, offsets)
                },
            )
            .sum()
    }
}

/// `N_i`, the number of F_{q^i}-points of the double cover.
pub fn count_points(arr: &Arrangement, i: u32) -> Result<i128, ZetaError> {
    if !is_general_position(arr) {
        return Err(ZetaError::NotGeneralPosition);
    }
    let target = extension_field(arr, i)?;
    if target.tables().is_none() {
        return Err(ZetaError::TableBudgetExceeded { order: target.order(), budget: TABLE_BUDGET });
    }
    let cols = embedded_columns(arr, &target)?;
    let logs = cols.iter().map(|c| c.iter().map(|&x| target.log(x)).collect()).collect();
    let counter = Counter { field: &target, n: arr.n(), logs, planes: Planes::new(&target) };
    let s: i64 = (0..=arr.n()).map(|k| counter.chart_sum(k)).sum();
    Ok(projective_size(target.order(), arr.n())? + s as i128)
}

/// Same count by straightforward evaluation of every form at every point,
/// with no tables required. Intended for small fields and cross-checks.
pub fn count_points_direct(arr: &Arrangement, i: u32) -> Result<i128, ZetaError> {
    let target = extension_field(arr, i)?;
    let cols = embedded_columns(arr, &target)?;
    let n = arr.n();
    let big_q = target.order();
    let mut s: i64 = 0;
    let mut x = vec![FqElem::default(); n + 1];
    for k in 0..=n {
        let free = n - k;
        let total = big_q.checked_pow(free as u32).ok_or(ZetaError::CountOverflow)?;
        for idx in 0..total {
            x.iter_mut().for_each(|c| *c = target.zero());
            x[k] = target.one();
            let mut rest = idx;
            for xt in x.iter_mut().skip(k + 1) {
                *xt = target.from_code(rest % big_q)?;
                rest /= big_q;
            }
            let value = cols.iter().fold(target.one(), |acc, col| {
                let l = col.iter().zip(&x).fold(target.zero(), |a, (&c, &xi)| target.add(a, target.mul(c, xi)));
                target.mul(acc, l)
            });
            s += target.quad_char(value) as i64;
        }
    }
    Ok(projective_size(big_q, n)? + s as i128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{field_of_order, random_arrangement};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn four_points_over_f5() {
        let f5 = field_of_order(5).unwrap();
        let arr = Arrangement::from_rows(f5, &[vec![0, 1, 2, 1], vec![1, 1, 1, 0]]).unwrap();
        for i in 1..=3 {
            assert_eq!(count_points(&arr, i).unwrap(), count_points_direct(&arr, i).unwrap());
        }
    }

    #[test]
    fn engine_matches_direct_evaluation() {
        for (n, m, q, levels) in [
            (1usize, 4usize, 3u64, 4u32),
            (1, 6, 5, 3),
            (1, 6, 9, 2),
            (2, 6, 5, 2),
            (2, 6, 7, 1),
            (3, 6, 7, 1),
            (2, 8, 9, 1),
        ] {
            let f = field_of_order(q).unwrap();
            for seed in 0..3 {
                let arr = random_arrangement(n, m, &f, seed).unwrap();
                for i in 1..=levels {
                    assert_eq!(
                        count_points(&arr, i).unwrap(),
                        count_points_direct(&arr, i).unwrap(),
                        "n={n} m={m} q={q} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn counts_are_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = field_of_order(7).unwrap();
        for seed in 0..5 {
            let arr = random_arrangement(2, 6, &f, seed).unwrap();
            let base = count_points(&arr, 2).unwrap();
            let j = rng.gen_range(0..6);
            let scaled = arr.scale_column(j, FqElem(rng.gen_range(1..7)));
            assert_eq!(count_points(&scaled, 2).unwrap(), base);
        }
    }

    #[test]
    fn branch_points_bound_the_count() {
        // every point on the branch locus contributes exactly one point
        let f = field_of_order(5).unwrap();
        let arr = random_arrangement(2, 6, &f, 11).unwrap();
        let n1 = count_points(&arr, 1).unwrap();
        let mut branch = 0;
        let mut nonbranch_sum = 0i64;
        for code in 0..125u64 {
            let x = [FqElem(code % 5), FqElem(code / 5 % 5), FqElem(code / 25)];
            if x.iter().find(|c| !c.is_zero()) != Some(&f.one()) {
                continue;
            }
            let v = arr.columns().iter().fold(f.one(), |acc, col| {
                let l = col.iter().zip(&x).fold(f.zero(), |a, (&c, &xi)| f.add(a, f.mul(c, xi)));
                f.mul(acc, l)
            });
            if v.is_zero() {
                branch += 1;
            } else {
                nonbranch_sum += 1 + f.quad_char(v) as i64;
            }
        }
        assert_eq!(n1, branch as i128 + nonbranch_sum as i128);
        assert!(n1 >= branch as i128);
    }

    #[test]
    fn budget_and_position_errors() {
        let f5 = field_of_order(5).unwrap();
        let arr = random_arrangement(1, 6, &f5, 0).unwrap();
        assert!(matches!(count_points(&arr, 11), Err(ZetaError::TableBudgetExceeded { .. })));
        let bad = Arrangement::from_rows(f5, &[vec![0, 1, 1, 1], vec![1, 1, 1, 0]]).unwrap();
        assert_eq!(count_points(&bad, 1), Err(ZetaError::NotGeneralPosition));
    }
}
