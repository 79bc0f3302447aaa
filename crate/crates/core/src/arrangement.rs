//! Hyperplane arrangements in Pⁿ over F_q.
//!
//! An arrangement of `m` hyperplanes is an `(n+1) × m` matrix whose column
//! `j` holds the coefficients of the linear form `ℓ_j = Σ_i c_ij x_i`.
//!
//! Text format: a header line `n m q`, then `n + 1` lines of `m` integers.
//! Row `i`, column `j` is the coefficient of `x_i` in `ℓ_j`. Entries are
//! packed element codes of F_q (`c_0 + c_1 p + ...` in the coefficients of
//! the defining polynomial); over a prime field any integer is accepted and
//! reduced. Blank lines and text after `#` are ignored.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::field::{split_prime_power, ExtField, FieldError, FqElem};
use crate::seed;
use crate::wedge::WedgeBasisIndex;

/// Rejections allowed before [`random_arrangement`] gives up.
pub const MAX_REJECTIONS: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("need m even and m >= n + 3, got n = {n}, m = {m}")]
    BadParity { n: usize, m: usize },
    #[error("n must be at least 1")]
    ZeroDimension,
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("arrangement is not in general position")]
    NotGeneralPosition,
    #[error("no general-position arrangement found after {attempts} attempts")]
    SamplingExhausted { attempts: u64 },
    #[error("points are not pairwise distinct")]
    DuplicatePoints,
    #[error("q = {0} is not an odd prime power")]
    BadFieldOrder(u64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    n: usize,
    field: Arc<ExtField>,
    cols: Vec<Vec<FqElem>>,
}

impl PartialEq for Arrangement {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.field.order() == other.field.order()
            && self.cols == other.cols
    }
}

impl Eq for Arrangement {}

/// Check `m` even, `m >= n + 3`.
pub fn check_shape(n: usize, m: usize) -> Result<(), ArrangementError> {
    if n == 0 {
        return Err(ArrangementError::ZeroDimension);
    }
    if !m.is_multiple_of(2) || m < n + 3 {
        return Err(ArrangementError::BadParity { n, m });
    }
    Ok(())
}

/// Field F_q from its order.
pub fn field_of_order(q: u64) -> Result<Arc<ExtField>, ArrangementError> {
    let (p, k) = split_prime_power(q).ok_or(ArrangementError::BadFieldOrder(q))?;
    Ok(ExtField::shared(p, k)?)
}

impl Arrangement {
    /// Build from columns (each of length `n + 1`).
    pub fn new(n: usize, field: Arc<ExtField>, cols: Vec<Vec<FqElem>>) -> Result<Self, ArrangementError> {
        check_shape(n, cols.len())?;
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n + 1 {
                return Err(ArrangementError::ShapeMismatch { expected: n + 1, got: c.len() });
            }
            if c.iter().all(|x| x.is_zero()) {
                return Err(ArrangementError::ZeroColumn(j));
            }
            for x in c {
                field.from_code(x.code())?;
            }
        }
        Ok(Self { n, field, cols })
    }

    /// Build from integer rows (`n + 1` rows of `m` entries) as in the file format.
    pub fn from_rows(field: Arc<ExtField>, rows: &[Vec<i64>]) -> Result<Self, ArrangementError> {
        let n = rows.len().checked_sub(1).ok_or(ArrangementError::ZeroDimension)?;
        let m = rows[0].len();
        let mut cols = vec![Vec::with_capacity(n + 1); m];
        for row in rows {
            if row.len() != m {
                return Err(ArrangementError::ShapeMismatch { expected: m, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                cols[j].push(element_from_int(&field, v)?);
            }
        }
        Self::new(n, field, cols)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.cols.len()
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn columns(&self) -> &[Vec<FqElem>] {
        &self.cols
    }

    pub fn column(&self, j: usize) -> &[FqElem] {
        &self.cols[j]
    }

    /// Coefficient of `x_i` in `ℓ_j`.
    pub fn entry(&self, i: usize, j: usize) -> FqElem {
        self.cols[j][i]
    }

    /// Multiply column `j` by a nonzero scalar.
    pub fn scale_column(&self, j: usize, lambda: FqElem) -> Self {
        assert!(!lambda.is_zero());
        let mut out = self.clone();
        for x in out.cols[j].iter_mut() {
            *x = self.field.mul(*x, lambda);
        }
        out
    }

    /// Replace every column `c` by `M c` for an invertible `(n+1) × (n+1)` matrix
    /// (a linear change of coordinates on Pⁿ).
    pub fn transform(&self, mat: &[Vec<FqElem>]) -> Self {
        let f = &self.field;
        let cols = self
            .cols
            .iter()
            .map(|c| {
                mat.iter()
                    .map(|row| row.iter().zip(c).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
                    .collect()
            })
            .collect();
        Self { n: self.n, field: self.field.clone(), cols }
    }

    /// Text serialization in the documented file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.m(), self.q());
        for i in 0..=self.n {
            let row: Vec<String> = self.cols.iter().map(|c| c[i].code().to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ArrangementError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_ints = |line: usize, l: &str| -> Result<Vec<i64>, ArrangementError> {
            l.split_whitespace()
                .map(|t| {
                    t.parse::<i64>().map_err(|_| ArrangementError::Parse {
                        line,
                        msg: format!("not an integer: {t:?}"),
                    })
                })
                .collect()
        };
        let (hline, header) = lines.next().ok_or(ArrangementError::Parse {
            line: 1,
            msg: "missing header `n m q`".into(),
        })?;
        let header = parse_ints(hline, header)?;
        let [n, m, q] = header[..] else {
            return Err(ArrangementError::Parse { line: hline, msg: "header must be `n m q`".into() });
        };
        if n < 1 || m < 1 || q < 3 {
            return Err(ArrangementError::Parse { line: hline, msg: "header values out of range".into() });
        }
        let field = field_of_order(q as u64)?;
        let mut rows = Vec::new();
        for (line, l) in lines {
            let row = parse_ints(line, l)?;
            if row.len() != m as usize {
                return Err(ArrangementError::Parse {
                    line,
                    msg: format!("expected {m} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != n as usize + 1 {
            return Err(ArrangementError::Parse {
                line: hline,
                msg: format!("expected {} coefficient rows, found {}", n + 1, rows.len()),
            });
        }
        Self::from_rows(field, &rows)
    }
}

fn element_from_int(field: &ExtField, v: i64) -> Result<FqElem, ArrangementError> {
    if field.degree() == 1 {
        return Ok(field.from_int(v));
    }
    if v < 0 {
        return Err(ArrangementError::Field(FieldError::CodeOutOfRange { code: v as u64, order: field.order() }));
    }
    Ok(field.from_code(v as u64)?)
}

/// Determinant over F_q by Gaussian elimination.
pub fn det_fq(field: &ExtField, mut a: Vec<Vec<FqElem>>) -> FqElem {
    let k = a.len();
    let mut det = field.one();
    for c in 0..k {
        let Some(piv) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return field.zero();
        };
        if piv != c {
            a.swap(piv, c);
            det = field.neg(det);
        }
        let pv = a[c][c];
        det = field.mul(det, pv);
        let inv = field.inv(pv).unwrap();
        for r in c + 1..k {
            if a[r][c].is_zero() {
                continue;
            }
            let factor = field.mul(a[r][c], inv);
            for j in c..k {
                let v = field.sub(a[r][j], field.mul(factor, a[c][j]));
                a[r][j] = v;
            }
        }
    }
    det
}

/// All maximal minors nonzero.
pub fn is_general_position(arr: &Arrangement) -> bool {
    let n1 = arr.n + 1;
    let index = WedgeBasisIndex::new(arr.m(), n1).expect("m > n + 1");
    index.subsets().iter().all(|subset| {
        // rows of the minor = coordinates, columns = chosen forms
        let mat: Vec<Vec<FqElem>> = (0..n1).map(|i| subset.iter().map(|&j| arr.cols[j][i]).collect()).collect();
        !det_fq(&arr.field, mat).is_zero()
    })
}

/// Inverse of a square matrix over F_q, `None` if singular.
fn inverse_fq(field: &ExtField, a: &[Vec<FqElem>]) -> Option<Vec<Vec<FqElem>>> {
    let k = a.len();
    let mut aug: Vec<Vec<FqElem>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for c in 0..k {
        let piv = (c..k).find(|&r| !aug[r][c].is_zero())?;
        aug.swap(piv, c);
        let inv = field.inv(aug[c][c]).unwrap();
        for x in aug[c].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..k {
            if r == c || aug[r][c].is_zero() {
                continue;
            }
            let factor = aug[r][c];
            for j in 0..2 * k {
                let v = field.sub(aug[r][j], field.mul(factor, aug[c][j]));
                aug[r][j] = v;
            }
        }
    }
    Some(aug.into_iter().map(|r| r[k..].to_vec()).collect())
}

/// Canonical representative: columns `0..=n` the standard basis, column
/// `n + 1` all ones, and every later column with a 1 in row 0.
pub fn normal_form(arr: &Arrangement) -> Result<Arrangement, ArrangementError> {
    if !is_general_position(arr) {
        return Err(ArrangementError::NotGeneralPosition);
    }
    let f = &arr.field;
    let n1 = arr.n + 1;
    let basis: Vec<Vec<FqElem>> = (0..n1).map(|i| (0..n1).map(|j| arr.cols[j][i]).collect()).collect();
    let inv = inverse_fq(f, &basis).expect("general position");
    let moved = arr.transform(&inv);
    // rescale coordinates so that column n+1 becomes all ones
    let w = &moved.cols[n1];
    let diag: Vec<Vec<FqElem>> = (0..n1)
        .map(|i| {
            (0..n1)
                .map(|j| if i == j { f.inv(w[i]).expect("general position") } else { f.zero() })
                .collect()
        })
        .collect();
    let mut out = moved.transform(&diag);
    for j in 0..n1 {
        out.cols[j] = (0..n1).map(|i| if i == j { f.one() } else { f.zero() }).collect();
    }
    for j in n1 + 1..out.m() {
        let lead = f.inv(out.cols[j][0]).expect("general position");
        for x in out.cols[j].iter_mut() {
            *x = f.mul(*x, lead);
        }
    }
    Ok(out)
}

/// Seeded uniform sample of a general-position arrangement.
///
/// For n = 1 the columns are distinct points of P¹ with random nonzero
/// scalings; otherwise matrices with uniform entries are drawn and rejected
/// until general position holds.
pub fn random_arrangement(
    n: usize,
    m: usize,
    field: &Arc<ExtField>,
    seed: u64,
) -> Result<Arrangement, ArrangementError> {
    check_shape(n, m)?;
    let mut rng = seed::rng_for(seed, "arrangement", 0);
    let q = field.order();
    let random_nonzero = |rng: &mut rand_chacha::ChaCha8Rng| FqElem(rng.gen_range(1..q));
    if n == 1 {
        if q + 1 < m as u64 {
            return Err(ArrangementError::SamplingExhausted { attempts: 0 });
        }
        let points = sample_distinct_points(field, m, &mut rng);
        let cols = points
            .iter()
            .map(|&(a, b)| {
                let s = random_nonzero(&mut rng);
                vec![field.mul(a, s), field.mul(b, s)]
            })
            .collect();
        return Arrangement::new(1, field.clone(), cols);
    }
    for _ in 0..MAX_REJECTIONS {
        let cols: Vec<Vec<FqElem>> =
            (0..m).map(|_| (0..=n).map(|_| FqElem(rng.gen_range(0..q))).collect()).collect();
        if cols.iter().any(|c| c.iter().all(|x| x.is_zero())) {
            continue;
        }
        let arr = Arrangement { n, field: field.clone(), cols };
        if is_general_position(&arr) {
            return Ok(arr);
        }
    }
    Err(ArrangementError::SamplingExhausted { attempts: MAX_REJECTIONS })
}

/// `k` distinct normalized points of P¹(F_q) in random order.
fn sample_distinct_points<R: Rng>(field: &ExtField, k: usize, rng: &mut R) -> Vec<(FqElem, FqElem)> {
    let q = field.order();
    // index q stands for the point at infinity (1, 0)
    let to_point = |idx: u64| if idx == q { (field.one(), field.zero()) } else { (FqElem(idx), field.one()) };
    if q <= 4096 {
        let mut all: Vec<u64> = (0..=q).collect();
        let (chosen, _) = all.partial_shuffle(rng, k);
        return chosen.iter().map(|&i| to_point(i)).collect();
    }
    let mut chosen: Vec<u64> = Vec::with_capacity(k);
    while chosen.len() < k {
        let idx = rng.gen_range(0..=q);
        if !chosen.contains(&idx) {
            chosen.push(idx);
        }
    }
    chosen.into_iter().map(to_point).collect()
}

/// Pairwise distinct points of P¹(F_q), stored normalized as `(a, 1)` or `(1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointsOnLine {
    field: Arc<ExtField>,
    points: Vec<(FqElem, FqElem)>,
}

impl PointsOnLine {
    pub fn new(field: Arc<ExtField>, raw: &[(FqElem, FqElem)]) -> Result<Self, ArrangementError> {
        let mut points = Vec::with_capacity(raw.len());
        for &(a, b) in raw {
            let p = if b.is_zero() {
                if a.is_zero() {
                    return Err(ArrangementError::ZeroColumn(points.len()));
                }
                (field.one(), field.zero())
            } else {
                (field.mul(a, field.inv(b).unwrap()), field.one())
            };
            if points.contains(&p) {
                return Err(ArrangementError::DuplicatePoints);
            }
            points.push(p);
        }
        Ok(Self { field, points })
    }

    /// Every point of P¹(F_q): `(0,1), (1,1), .., (q-1,1), (1,0)`.
    pub fn all(field: Arc<ExtField>) -> Self {
        let q = field.order();
        let mut points: Vec<(FqElem, FqElem)> = (0..q).map(|c| (FqElem(c), field.one())).collect();
        points.push((field.one(), field.zero()));
        Self { field, points }
    }

    /// Seeded sample of `k` distinct points.
    pub fn random(field: Arc<ExtField>, k: usize, seed: u64) -> Result<Self, ArrangementError> {
        if field.order() + 1 < k as u64 {
            return Err(ArrangementError::SamplingExhausted { attempts: 0 });
        }
        let mut rng = seed::rng_for(seed, "points", 0);
        let points = sample_distinct_points(&field, k, &mut rng);
        Ok(Self { field, points })
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn points(&self) -> &[(FqElem, FqElem)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Column `i` becomes `(a_i^n, a_i^{n-1} b_i, .., b_i^n)`.
pub fn hyperelliptic_image(pts: &PointsOnLine, n: usize) -> Result<Arrangement, ArrangementError> {
    let f = &pts.field;
    let cols = pts
        .points
        .iter()
        .map(|&(a, b)| (0..=n).map(|k| f.mul(f.pow(a, (n - k) as u64), f.pow(b, k as u64))).collect())
        .collect();
    Arrangement::new(n, f.clone(), cols)
}
