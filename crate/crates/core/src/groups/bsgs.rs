use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rustc_hash::FxHashMap;

use crate::linalg::MatFF;

use super::{GroupError, Isometry, IsometrySpace};

/// Largest `ℓ^dim` for which the vector action is attempted.
pub const DOMAIN_BUDGET: u64 = 10_000_000;

const NO_PARENT: u32 = u32::MAX;

/// Raw square-matrix kernels on row-major `u32` slices.
#[derive(Clone, Copy, Debug)]
struct Ops {
    p: u32,
    n: usize,
}

impl Ops {
    fn identity(self) -> Vec<u32> {
        let mut m = vec![0; self.n * self.n];
        for i in 0..self.n {
            m[i * self.n + i] = 1;
        }
        m
    }

    fn is_identity(self, a: &[u32]) -> bool {
        let n = self.n;
        a.iter().enumerate().all(|(k, &x)| x == u32::from(k / n == k % n))
    }

    fn mul_into(self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let n = self.n;
        let p = self.p as u64;
        for i in 0..n {
            let row = &a[i * n..(i + 1) * n];
            for j in 0..n {
                let mut acc = 0u64;
                for (k, &x) in row.iter().enumerate() {
                    acc += x as u64 * b[k * n + j] as u64;
                }
                out[i * n + j] = (acc % p) as u32;
            }
        }
    }

    fn mul(self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.n * self.n];
        self.mul_into(a, b, &mut out);
        out
    }

    fn apply(self, a: &[u32], v: &[u32]) -> Vec<u32> {
        let n = self.n;
        let p = self.p as u64;
        (0..n)
            .map(|i| {
                let acc: u64 = (0..n).map(|k| a[i * n + k] as u64 * v[k] as u64).sum();
                (acc % p) as u32
            })
            .collect()
    }

    fn code(self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0u32, |acc, &x| acc * self.p + x)
    }

    fn column_code(self, a: &[u32], c: usize) -> u32 {
        (0..self.n).rev().fold(0u32, |acc, i| acc * self.p + a[i * self.n + c])
    }

    fn decode(self, mut code: u32) -> Vec<u32> {
        (0..self.n)
            .map(|_| {
                let x = code % self.p;
                code /= self.p;
                x
            })
            .collect()
    }
}

/// One level of the stabilizer chain: base point `e_base`, its orbit under
/// the level's generators, and a transversal with inverses.
#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<usize>,
    orbit: Vec<u32>,
    index: FxHashMap<u32, u32>,
    reps: Vec<u32>,
    inv_reps: Vec<u32>,
    parent: Vec<(u32, u32)>,
    tested: Vec<u32>,
}

impl Level {
    fn new(ops: Ops, base: usize) -> Self {
        let mut e = vec![0; ops.n];
        e[base] = 1;
        let code = ops.code(&e);
        let mut index = FxHashMap::default();
        index.insert(code, 0);
        let id = ops.identity();
        Self {
            base,
            gens: Vec::new(),
            orbit: vec![code],
            index,
            reps: id.clone(),
            inv_reps: id,
            parent: vec![(NO_PARENT, NO_PARENT)],
            tested: vec![0],
        }
    }

    fn rep(&self, ops: Ops, i: usize) -> &[u32] {
        let s = ops.n * ops.n;
        &self.reps[i * s..(i + 1) * s]
    }

    fn inv_rep(&self, ops: Ops, i: usize) -> &[u32] {
        let s = ops.n * ops.n;
        &self.inv_reps[i * s..(i + 1) * s]
    }

    fn try_extend(&mut self, ops: Ops, strong: &[Vec<u32>], strong_inv: &[Vec<u32>], pi: usize, gpos: usize) {
        let sidx = self.gens[gpos];
        let s = &strong[sidx];
        let beta = ops.decode(self.orbit[pi]);
        let image = ops.code(&ops.apply(s, &beta));
        if self.index.contains_key(&image) {
            return;
        }
        let rep = ops.mul(s, self.rep(ops, pi));
        let inv = ops.mul(self.inv_rep(ops, pi), &strong_inv[sidx]);
        self.index.insert(image, self.orbit.len() as u32);
        self.orbit.push(image);
        self.reps.extend_from_slice(&rep);
        self.inv_reps.extend_from_slice(&inv);
        self.parent.push((pi as u32, sidx as u32));
        self.tested.push(0);
    }

    /// Grow the orbit after generators from position `first_new` on were added.
    fn extend_orbit(&mut self, ops: Ops, strong: &[Vec<u32>], strong_inv: &[Vec<u32>], first_new: usize) {
        let old_len = self.orbit.len();
        for pi in 0..old_len {
            for gpos in first_new..self.gens.len() {
                self.try_extend(ops, strong, strong_inv, pi, gpos);
            }
        }
        let mut pi = old_len;
        while pi < self.orbit.len() {
            for gpos in 0..self.gens.len() {
                self.try_extend(ops, strong, strong_inv, pi, gpos);
            }
            pi += 1;
        }
    }
}

/// Base and strong generating set for a matrix group acting on nonzero
/// vectors of F_ℓ^dim, with base points drawn from the standard basis.
#[derive(Clone, Debug)]
pub struct Bsgs {
    ops: Ops,
    home: Arc<IsometrySpace>,
    strong: Vec<Vec<u32>>,
    strong_inv: Vec<Vec<u32>>,
    levels: Vec<Level>,
}

impl Bsgs {
    /// Deterministic Schreier-Sims: the returned chain is complete, so
    /// [`Bsgs::order`] is exact.
    pub fn build(gens: &[Isometry]) -> Result<Self, GroupError> {
        let mut b = Self::init(gens)?;
        b.schreier_sims();
        Ok(b)
    }

    /// Randomized Schreier-Sims for a group known to lie inside a group of
    /// order `bound`. Random elements are sifted until the basic orbits
    /// multiply to `bound`, which proves the chain complete (the product is
    /// always a lower bound for the order). If that does not happen within
    /// `patience` consecutive useless samples, the deterministic algorithm
    /// finishes the job.
    pub fn build_with_bound<R: Rng>(
        gens: &[Isometry],
        bound: &BigUint,
        rng: &mut R,
        patience: usize,
    ) -> Result<Self, GroupError> {
        let mut b = Self::init(gens)?;
        let mut pool = ProductReplacement::new(b.ops, &b.strong, rng);
        let mut misses = 0;
        while &b.order() < bound && misses < patience {
            let g = pool.next(rng);
            let (residue, j) = b.sift(g, 0);
            if j == b.levels.len() && b.ops.is_identity(&residue) {
                misses += 1;
                continue;
            }
            misses = 0;
            let sidx = b.add_strong(residue);
            if j == b.levels.len() {
                b.push_level_for(sidx);
            }
            for t in 0..=j {
                b.add_gen_to_level(t, sidx);
            }
        }
        if &b.order() != bound {
            b.schreier_sims();
        }
        Ok(b)
    }

    fn init(gens: &[Isometry]) -> Result<Self, GroupError> {
        let first = gens.first().ok_or(GroupError::NoGenerators)?;
        let home = first.home().clone();
        let field = home.field();
        let n = home.dim();
        let size = (field.p() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if size > DOMAIN_BUDGET {
            return Err(GroupError::DomainBudgetExceeded { size });
        }
        let ops = Ops { p: field.p(), n };
        let mut b = Self { ops, home, strong: Vec::new(), strong_inv: Vec::new(), levels: Vec::new() };
        for g in gens {
            if g.home().dim() != n || g.home().field() != field {
                return Err(GroupError::DimensionMismatch { expected: n, got: g.home().dim() });
            }
            if !g.is_identity() {
                b.add_strong(g.mat().data().to_vec());
            }
        }
        for sidx in 0..b.strong.len() {
            if b.levels.iter().all(|l| b.fixes_basis(sidx, l.base)) {
                b.push_level_for(sidx);
            }
        }
        for t in 0..b.levels.len() {
            let gens: Vec<usize> = (0..b.strong.len())
                .filter(|&s| b.levels[..t].iter().all(|l| b.fixes_basis(s, l.base)))
                .collect();
            b.levels[t].gens = gens;
            let (ops, strong, strong_inv) = (b.ops, &b.strong, &b.strong_inv);
            b.levels[t].extend_orbit(ops, strong, strong_inv, 0);
        }
        Ok(b)
    }

    fn fixes_basis(&self, sidx: usize, c: usize) -> bool {
        let n = self.ops.n;
        let s = &self.strong[sidx];
        (0..n).all(|i| s[i * n + c] == u32::from(i == c))
    }

    fn add_strong(&mut self, m: Vec<u32>) -> usize {
        let inv = MatFF::from_raw(self.home.field(), self.ops.n, self.ops.n, m.clone())
            .inverse()
            .expect("group elements are invertible");
        self.strong.push(m);
        self.strong_inv.push(inv.data().to_vec());
        self.strong.len() - 1
    }

    /// New level whose base point is the first basis vector moved by the
    /// given strong generator.
    fn push_level_for(&mut self, sidx: usize) {
        let c = (0..self.ops.n)
            .find(|&c| !self.fixes_basis(sidx, c))
            .expect("non-identity element moves a basis vector");
        self.levels.push(Level::new(self.ops, c));
    }

    fn add_gen_to_level(&mut self, t: usize, sidx: usize) {
        let (ops, strong, strong_inv) = (self.ops, &self.strong, &self.strong_inv);
        let level = &mut self.levels[t];
        level.gens.push(sidx);
        let first_new = level.gens.len() - 1;
        level.extend_orbit(ops, strong, strong_inv, first_new);
    }

    /// Strip `h` through the levels from `start`; returns the residue and the
    /// level where it dropped out (`levels.len()` if it passed every level).
    fn sift(&self, mut h: Vec<u32>, start: usize) -> (Vec<u32>, usize) {
        let mut tmp = vec![0; h.len()];
        for (t, level) in self.levels.iter().enumerate().skip(start) {
            let code = self.ops.column_code(&h, level.base);
            let Some(&idx) = level.index.get(&code) else {
                return (h, t);
            };
            self.ops.mul_into(level.inv_rep(self.ops, idx as usize), &h, &mut tmp);
            std::mem::swap(&mut h, &mut tmp);
        }
        (h, self.levels.len())
    }

    /// First Schreier generator of level `t` that does not sift through the
    /// deeper levels, with the level where its residue dropped out.
    fn check_level(&mut self, t: usize) -> Option<(Vec<u32>, usize)> {
        let ops = self.ops;
        let mut pi = 0;
        while pi < self.levels[t].orbit.len() {
            let mut gpos = self.levels[t].tested[pi] as usize;
            while gpos < self.levels[t].gens.len() {
                let level = &self.levels[t];
                let sidx = level.gens[gpos];
                let s = &self.strong[sidx];
                let beta = ops.decode(level.orbit[pi]);
                let image = ops.code(&ops.apply(s, &beta));
                let gi = level.index[&image] as usize;
                if level.parent[gi] != (pi as u32, sidx as u32) {
                    let sg = ops.mul(level.inv_rep(ops, gi), &ops.mul(s, level.rep(ops, pi)));
                    let (residue, j) = self.sift(sg, t + 1);
                    if j < self.levels.len() || !ops.is_identity(&residue) {
                        self.levels[t].tested[pi] = gpos as u32;
                        return Some((residue, j));
                    }
                }
                gpos += 1;
                self.levels[t].tested[pi] = gpos as u32;
            }
            pi += 1;
        }
        None
    }

    fn schreier_sims(&mut self) {
        let mut t = self.levels.len();
        while t > 0 {
            let l = t - 1;
            match self.check_level(l) {
                None => t -= 1,
                Some((residue, j)) => {
                    let sidx = self.add_strong(residue);
                    if j == self.levels.len() {
                        self.push_level_for(sidx);
                    }
                    for u in l + 1..=j {
                        self.add_gen_to_level(u, sidx);
                    }
                    t = j + 1;
                }
            }
        }
    }

    pub fn home(&self) -> &Arc<IsometrySpace> {
        &self.home
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Isometry> {
        self.strong.iter().map(|m| self.wrap(m.clone())).collect()
    }

    fn wrap(&self, data: Vec<u32>) -> Isometry {
        let f = self.home.field();
        Isometry::new_unchecked(self.home.clone(), MatFF::from_raw(f, self.ops.n, self.ops.n, data))
    }

    pub fn contains(&self, g: &MatFF) -> bool {
        if g.rows() != self.ops.n || !g.is_square() || g.field() != self.home.field() {
            return false;
        }
        let (residue, j) = self.sift(g.data().to_vec(), 0);
        j == self.levels.len() && self.ops.is_identity(&residue)
    }

    /// Uniform element: the product of one random transversal element per level.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Isometry {
        let mut g = self.ops.identity();
        let mut tmp = g.clone();
        for level in &self.levels {
            let i = rng.gen_range(0..level.orbit.len());
            self.ops.mul_into(&g, level.rep(self.ops, i), &mut tmp);
            std::mem::swap(&mut g, &mut tmp);
        }
        self.wrap(g)
    }

    /// Visit every element exactly once.
    pub fn for_each_element<F: FnMut(&MatFF)>(&self, mut f: F) {
        let field = self.home.field();
        let n = self.ops.n;
        // prefix[t] = product of the chosen reps of levels < t
        let k = self.levels.len();
        let mut prefix = vec![self.ops.identity(); k + 1];
        let mut choice = vec![0usize; k];
        let mut depth = 0;
        loop {
            if depth == k {
                f(&MatFF::from_raw(field, n, n, prefix[k].clone()));
                // advance the deepest counter that can move
                loop {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                    choice[depth] += 1;
                    if choice[depth] < self.levels[depth].orbit.len() {
                        break;
                    }
                    choice[depth] = 0;
                }
            }
            let next = self.ops.mul(&prefix[depth], self.levels[depth].rep(self.ops, choice[depth]));
            prefix[depth + 1] = next;
            depth += 1;
        }
    }
}

/// Product replacement generator of roughly uniform random elements.
struct ProductReplacement {
    ops: Ops,
    slots: Vec<Vec<u32>>,
    acc: Vec<u32>,
}

impl ProductReplacement {
    fn new<R: Rng>(ops: Ops, gens: &[Vec<u32>], rng: &mut R) -> Self {
        let mut slots: Vec<Vec<u32>> = if gens.is_empty() {
            vec![ops.identity()]
        } else {
            gens.iter().cycle().take(gens.len().max(10)).cloned().collect()
        };
        if slots.len() == 1 {
            slots.push(slots[0].clone());
        }
        let mut pr = Self { ops, slots, acc: ops.identity() };
        for _ in 0..50 {
            pr.next(rng);
        }
        pr
    }

    fn next<R: Rng>(&mut self, rng: &mut R) -> Vec<u32> {
        let k = self.slots.len();
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let prod = if rng.gen_bool(0.5) {
            self.ops.mul(&self.slots[i], &self.slots[j])
        } else {
            self.ops.mul(&self.slots[j], &self.slots[i])
        };
        self.slots[i] = prod;
        self.acc = self.ops.mul(&self.acc, &self.slots[i]);
        self.acc.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::groups::{reflection_matrix, transvection};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rustc_hash::FxHashSet;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Closure of the generators by breadth-first multiplication; the
    /// independent oracle for small groups.
    fn closure_order(gens: &[Isometry]) -> usize {
        let id = Isometry::identity(gens[0].home().clone());
        let mut seen: FxHashSet<Vec<u32>> = FxHashSet::default();
        seen.insert(id.mat().data().to_vec());
        let mut queue = vec![id];
        while let Some(g) = queue.pop() {
            for s in gens {
                let h = g.compose(s);
                if seen.insert(h.mat().data().to_vec()) {
                    queue.push(h);
                }
            }
        }
        seen.len()
    }

    fn sp_generators(space: &Arc<IsometrySpace>) -> Vec<Isometry> {
        let n = space.dim();
        let g = n / 2;
        let mut gens = Vec::new();
        for i in 0..g {
            let mut e = vec![0; n];
            e[i] = 1;
            gens.push(transvection(space, &e, 1).unwrap());
            let mut fv = vec![0; n];
            fv[g + i] = 1;
            gens.push(transvection(space, &fv, 1).unwrap());
        }
        gens
    }

    #[test]
    fn small_groups_match_closure() {
        let sp2 = IsometrySpace::standard_symplectic(f(3), 2).unwrap();
        let gens = sp_generators(&sp2);
        let b = Bsgs::build(&gens).unwrap();
        assert_eq!(b.order(), BigUint::from(closure_order(&gens)));
        assert_eq!(b.order(), BigUint::from(24u32));

        let o3 = IsometrySpace::diagonal(f(3), &[1, 1, 1]).unwrap();
        let gens = vec![
            reflection_matrix(&o3, &[1, 0, 0]).unwrap(),
            reflection_matrix(&o3, &[1, 1, 0]).unwrap(),
            reflection_matrix(&o3, &[0, 1, 1]).unwrap(),
        ];
        let b = Bsgs::build(&gens).unwrap();
        assert_eq!(b.order(), BigUint::from(closure_order(&gens)));

        let o4 = IsometrySpace::diagonal(f(5), &[1, 1, 1, 2]).unwrap();
        let gens = vec![
            reflection_matrix(&o4, &[1, 1, 0, 0]).unwrap(),
            reflection_matrix(&o4, &[0, 1, 1, 1]).unwrap(),
        ];
        let b = Bsgs::build(&gens).unwrap();
        assert_eq!(b.order(), BigUint::from(closure_order(&gens)));
    }

    #[test]
    fn membership_and_sampling() {
        let sp4 = IsometrySpace::standard_symplectic(f(3), 4).unwrap();
        let gens = sp_generators(&sp4);
        // missing e_1 - e_2 type generator: subgroup of Sp(4, 3)
        let b = Bsgs::build(&gens).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let g = b.sample(&mut rng);
            assert!(b.contains(g.mat()));
            assert!(sp4.bilinear().preserves(g.mat()));
        }
        let mut count = 0u64;
        let mut seen = FxHashSet::default();
        b.for_each_element(|m| {
            count += 1;
            seen.insert(m.data().to_vec());
        });
        assert_eq!(BigUint::from(count), b.order());
        assert_eq!(seen.len() as u64, count);
        assert_eq!(count as usize, closure_order(&gens));
    }

    #[test]
    fn randomized_build_reaches_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let space = IsometrySpace::diagonal(f(5), &[1, 1, 1, 1]).unwrap();
        let mut gens = Vec::new();
        while gens.len() < 6 {
            let v: Vec<u32> = (0..4).map(|_| rng.gen_range(0..5)).collect();
            if space.norm(&v) != 0 {
                gens.push(reflection_matrix(&space, &v).unwrap());
            }
        }
        let exact = Bsgs::build(&gens).unwrap();
        let fast = Bsgs::build_with_bound(&gens, &exact.order(), &mut rng, 200).unwrap();
        assert_eq!(exact.order(), fast.order());
        // a too-large bound falls back to the deterministic algorithm
        let bound = exact.order() * BigUint::from(2u32);
        let slow = Bsgs::build_with_bound(&gens, &bound, &mut rng, 20).unwrap();
        assert_eq!(exact.order(), slow.order());
    }

    #[test]
    fn budget_and_empty_inputs() {
        assert!(matches!(Bsgs::build(&[]), Err(GroupError::NoGenerators)));
        let big = IsometrySpace::standard_symplectic(f(101), 4).unwrap();
        let gens = sp_generators(&big);
        assert!(matches!(
            Bsgs::build(&gens),
            Err(GroupError::DomainBudgetExceeded { .. })
        ));
        let sp2 = IsometrySpace::standard_symplectic(f(5), 2).unwrap();
        let trivial = Bsgs::build(&[Isometry::identity(sp2)]).unwrap();
        assert_eq!(trivial.order(), BigUint::one());
    }
}
