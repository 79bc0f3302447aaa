use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::prime::{is_prime, prime_factors};
use super::{FieldError, PolyFp, PrimeField};

/// Largest field order for which discrete-log tables are built.
pub const TABLE_BUDGET: u64 = 1 << 24;

/// Sentinel discrete logarithm standing for the zero element.
pub const LOG_ZERO: u32 = u32::MAX;

/// An element of F_{p^k} in coefficient form, packed as the base-p integer
/// `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` where `c_i` is the coefficient of `t^i`.
///
/// The packed code doubles as the lexicographic order on coefficient vectors
/// read from the top coefficient down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub(crate) u64);

impl FqElem {
    pub fn code(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Discrete-log form of an element: the exponent `e` with `x = g^e`, or
/// [`LOG_ZERO`] for zero. This is the representation used on the hot path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LogElem(pub u32);

impl LogElem {
    pub const ZERO: LogElem = LogElem(LOG_ZERO);

    pub fn is_zero(self) -> bool {
        self.0 == LOG_ZERO
    }
}

/// Exp/log/Zech tables for a field of order `Q`.
///
/// `exp[e] = g^e` (as a code) for `e < Q-1`; `log[code]` inverts it
/// (`LOG_ZERO` at code 0); `zech[e] = log(1 + g^e)`.
#[derive(Clone)]
pub struct LogTables {
    pub exp: Vec<u32>,
    pub log: Vec<u32>,
    pub zech: Vec<u32>,
}

/// The finite field F_{p^k} = F_p[t]/(f) for the lexicographically least
/// monic irreducible `f` of degree `k`, with the least primitive element as
/// generator.
pub struct ExtField {
    base: PrimeField,
    k: u32,
    order: u64,
    modulus: PolyFp,
    generator: FqElem,
    tables: Option<LogTables>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtField")
            .field("p", &self.base.p())
            .field("k", &self.k)
            .field("modulus", &self.modulus.coeffs())
            .field("generator", &self.generator)
            .field("tables", &self.tables.is_some())
            .finish()
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.k == other.k
    }
}

impl Eq for ExtField {}

fn checked_order(p: u64, k: u32) -> Result<u64, FieldError> {
    (0..k)
        .try_fold(1u64, |acc, _| acc.checked_mul(p))
        .filter(|&q| q < (1u64 << 62))
        .ok_or(FieldError::OrderOverflow { p, k })
}

impl ExtField {
    /// Build F_{p^k} with log tables. Fails when `p^k` exceeds [`TABLE_BUDGET`].
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        let order = checked_order(p, k.max(1))?;
        if order > TABLE_BUDGET {
            return Err(FieldError::TableBudgetExceeded { order });
        }
        let mut field = Self::without_tables(p, k)?;
        field.tables = Some(field.build_tables());
        Ok(field)
    }

    /// Build F_{p^k} using coefficient-vector arithmetic only.
    pub fn without_tables(p: u64, k: u32) -> Result<Self, FieldError> {
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let base = PrimeField::new(p)?;
        let order = checked_order(p, k)?;
        let modulus = find_modulus(base, k);
        let mut field = Self {
            base,
            k,
            order,
            modulus,
            generator: FqElem(0),
            tables: None,
        };
        field.generator = field.find_generator();
        Ok(field)
    }

    /// Shared, lazily built instance. Table-backed when within budget.
    pub fn shared(p: u64, k: u32) -> Result<Arc<ExtField>, FieldError> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<ExtField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let order = checked_order(p, k.max(1))?;
        let field = if order <= TABLE_BUDGET {
            Self::new(p, k)?
        } else {
            Self::without_tables(p, k)?
        };
        let field = Arc::new(field);
        cache.lock().unwrap().insert((p, k), field.clone());
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.base.p() as u64
    }

    pub fn prime_field(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &PolyFp {
        &self.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.generator
    }

    pub fn tables(&self) -> Option<&LogTables> {
        self.tables.as_ref()
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, v: i64) -> FqElem {
        FqElem(self.base.reduce(v) as u64)
    }

    /// Validate a packed code.
    pub fn from_code(&self, code: u64) -> Result<FqElem, FieldError> {
        if code >= self.order {
            return Err(FieldError::CodeOutOfRange { code, order: self.order });
        }
        Ok(FqElem(code))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.order).map(FqElem)
    }

    pub fn digits(&self, x: FqElem) -> Vec<u32> {
        let p = self.p();
        let mut c = x.0;
        (0..self.k)
            .map(|_| {
                let d = (c % p) as u32;
                c /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FqElem {
        let p = self.p();
        FqElem(digits.iter().rev().fold(0u64, |acc, &d| acc * p + (d as u64 % p)))
    }

    fn to_poly(&self, x: FqElem) -> PolyFp {
        PolyFp::new(self.base, self.digits(x))
    }

    fn from_poly(&self, f: &PolyFp) -> FqElem {
        let mut d = f.coeffs().to_vec();
        d.resize(self.k as usize, 0);
        self.from_digits(&d)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.k == 1 {
            return FqElem(self.base.add(a.0 as u32, b.0 as u32) as u64);
        }
        let p = self.p();
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.k {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FqElem(out)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.k == 1 {
            return FqElem(self.base.neg(a.0 as u32) as u64);
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| self.base.neg(c)).collect();
        self.from_digits(&d)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem(0);
        }
        if let Some(t) = &self.tables {
            let e = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % (self.order - 1);
            return FqElem(t.exp[e as usize] as u64);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.k == 1 {
            return FqElem(self.base.mul(a.0 as u32, b.0 as u32) as u64);
        }
        self.from_poly(&self.to_poly(a).mul(&self.to_poly(b)).rem(&self.modulus))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if let (Some(t), false) = (&self.tables, a.is_zero()) {
            let l = t.log[a.0 as usize] as u128 * e as u128 % (self.order - 1) as u128;
            return FqElem(t.exp[l as usize] as u64);
        }
        self.pow_slow(a, e)
    }

    fn pow_slow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.order - 2))
    }

    /// Discrete logarithm to the fixed generator (requires tables).
    pub fn log(&self, a: FqElem) -> LogElem {
        let t = self.tables.as_ref().expect("discrete log requires tables");
        LogElem(t.log[a.0 as usize])
    }

    /// `g^e`, reducing `e` modulo `Q - 1`.
    pub fn exp(&self, e: u64) -> FqElem {
        match &self.tables {
            Some(t) => FqElem(t.exp[(e % (self.order - 1)) as usize] as u64),
            None => self.pow_slow(self.generator, e % (self.order - 1)),
        }
    }

    pub fn from_log(&self, l: LogElem) -> FqElem {
        if l.is_zero() {
            FqElem(0)
        } else {
            self.exp(l.0 as u64)
        }
    }

    /// Product in log form.
    #[inline]
    pub fn log_mul(&self, a: LogElem, b: LogElem) -> LogElem {
        if a.is_zero() || b.is_zero() {
            return LogElem::ZERO;
        }
        let n = (self.order - 1) as u32;
        let s = a.0 as u64 + b.0 as u64;
        LogElem((s % n as u64) as u32)
    }

    /// Sum in log form through the Zech table: `g^a + g^b = g^a (1 + g^{b-a})`.
    #[inline]
    pub fn log_add(&self, a: LogElem, b: LogElem) -> LogElem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let t = self.tables.as_ref().expect("Zech addition requires tables");
        let n = (self.order - 1) as u32;
        let diff = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + n - a.0 };
        let z = t.zech[diff as usize];
        if z == LOG_ZERO {
            return LogElem::ZERO;
        }
        let s = a.0 as u64 + z as u64;
        LogElem((s % n as u64) as u32)
    }

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    pub fn quad_char(&self, a: FqElem) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if let Some(t) = &self.tables {
            // The generator is a non-square, so the parity of the log decides.
            return if t.log[a.0 as usize] % 2 == 0 { 1 } else { -1 };
        }
        if self.pow_slow(a, (self.order - 1) / 2) == self.one() {
            1
        } else {
            -1
        }
    }

    /// The q-power Frobenius x -> x^p.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p())
    }

    fn find_generator(&self) -> FqElem {
        let n = self.order - 1;
        let factors = prime_factors(n);
        (1..self.order)
            .map(FqElem)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, n / r) != self.one()))
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order as usize;
        let mut exp = vec![0u32; q - 1];
        let mut log = vec![LOG_ZERO; q];
        let mut x = self.one();
        for (e, slot) in exp.iter_mut().enumerate() {
            *slot = x.0 as u32;
            log[x.0 as usize] = e as u32;
            x = self.mul_slow(x, self.generator);
        }
        debug_assert_eq!(x, self.one());
        let one = self.one();
        let zech = exp
            .iter()
            .map(|&c| log[self.add(FqElem(c as u64), one).0 as usize])
            .collect();
        LogTables { exp, log, zech }
    }

    /// Evaluate a polynomial with coefficients in F_p at an element.
    pub fn eval_prime_poly(&self, f: &PolyFp, x: FqElem) -> FqElem {
        f.coeffs()
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| self.add(self.mul(acc, x), FqElem(c as u64)))
    }
}

/// Deterministic search for the lexicographically least monic irreducible of
/// degree `k`: candidates `t^k + c(t)` ordered by the packed code of `c`.
fn find_modulus(base: PrimeField, k: u32) -> PolyFp {
    let p = base.p() as u64;
    let count = p.pow(k);
    for code in 0..count {
        let mut digits = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            digits.push((c % p) as u32);
            c /= p;
        }
        digits.push(1);
        let f = PolyFp::new(base, digits);
        if f.is_irreducible() {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A ring embedding F_{p^a} -> F_{p^{ab}}.
///
/// The source variable `t` is sent to the least root `tau` (in generator-power
/// order within the subfield) of the source modulus; every element then maps
/// by evaluating its coefficient polynomial at `tau`. On discrete logs this is
/// `g_src^e -> g_tgt^{e u (P-1)/(Q-1)}` for a unit `u`, recorded as `exponent`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Arc<ExtField>,
    target: Arc<ExtField>,
    tau_powers: Vec<FqElem>,
    multiplier: u64,
}

impl Embedding {
    pub fn new(source: Arc<ExtField>, target: Arc<ExtField>) -> Result<Self, FieldError> {
        if source.p() != target.p() || !target.degree().is_multiple_of(source.degree()) {
            return Err(FieldError::IncompatibleDegrees {
                source_degree: source.degree(),
                target_degree: target.degree(),
            });
        }
        let q = source.order();
        let big = target.order();
        let tau = if source.degree() == 1 {
            // Monic linear modulus t + c has root -c.
            target.from_int(-(source.modulus().coeff(0) as i64))
        } else {
            let step = target.exp((big - 1) / (q - 1));
            let mut h = step;
            let mut found = None;
            for _ in 1..q {
                if target.eval_prime_poly(source.modulus(), h).is_zero() {
                    found = Some(h);
                    break;
                }
                h = target.mul(h, step);
            }
            found.expect("the subfield of order Q contains every root of the source modulus")
        };
        let mut tau_powers = Vec::with_capacity(source.degree() as usize);
        let mut acc = target.one();
        for _ in 0..source.degree() {
            tau_powers.push(acc);
            acc = target.mul(acc, tau);
        }
        let mut emb = Self {
            source,
            target,
            tau_powers,
            multiplier: 0,
        };
        let g_img = emb.apply(emb.source.generator());
        emb.multiplier = if emb.target.tables().is_some() {
            emb.target.log(g_img).0 as u64
        } else {
            0
        };
        Ok(emb)
    }

    pub fn source(&self) -> &Arc<ExtField> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ExtField> {
        &self.target
    }

    /// Log of the image of the source generator (0 when the target has no tables).
    pub fn generator_image_log(&self) -> u64 {
        self.multiplier
    }

    pub fn apply(&self, x: FqElem) -> FqElem {
        let t = &self.target;
        self.source
            .digits(x)
            .iter()
            .zip(&self.tau_powers)
            .fold(t.zero(), |acc, (&c, &tp)| t.add(acc, t.mul(FqElem(c as u64), tp)))
    }
}

/// Embed a single element of `source` into `target`.
pub fn embed_subfield(
    x: FqElem,
    source: &Arc<ExtField>,
    target: &Arc<ExtField>,
) -> Result<FqElem, FieldError> {
    Ok(Embedding::new(source.clone(), target.clone())?.apply(x))
}

/// Whether `q` is a prime power `p^k` with `p` odd; returns `(p, k)`.
pub fn split_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 3 {
        return None;
    }
    let p = prime_factors(q)[0];
    if !is_prime(p) || p == 2 {
        return None;
    }
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}
