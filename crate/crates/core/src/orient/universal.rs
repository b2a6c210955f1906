//! Deciding whether every zero-sum boundary is realised, without looping over
//! boundaries one at a time.
//!
//! Small graphs use a sweep over the whole set of achievable boundaries: a
//! byte per vector of `Z_m^{n-1}` (the last vertex is implied by zero sum),
//! and each edge replaces the set `S` by `(S + d) ∪ (S - d)`. Lexicographic
//! order of boundaries is index order, so the first missing index is the
//! first failing boundary.
//!
//! Larger graphs run the frontier order from `solver` over families of sets:
//! each retired-vertex assignment is summarised by the set of frontier residue
//! vectors it is compatible with, and only the distinct (sum, set) pairs are
//! kept. A failing boundary exists iff some summary becomes empty with a
//! completable sum.


use crate::graph::Multigraph;

use super::solver::{plan, Digits, Plan, Step};

/// Largest `m^(n-1)` handled by the sweep.
pub(crate) const SWEEP_LIMIT: u64 = 1 << 24;

pub(crate) struct BoundarySet {
    m: usize,
    n: usize,
    reached: Vec<u8>,
}

impl BoundarySet {
    fn stride(&self, v: usize) -> usize {
        self.m.pow((self.n - 2 - v) as u32)
    }

    #[cfg(test)]
    pub fn index_of(&self, beta: &[u32]) -> usize {
        beta[..self.n.saturating_sub(1)]
            .iter()
            .fold(0, |acc, &b| acc * self.m + b as usize)
    }

    #[cfg(test)]
    pub fn contains(&self, beta: &[u32]) -> bool {
        self.reached[self.index_of(beta)] != 0
    }

    fn decode(&self, mut idx: usize) -> Vec<u32> {
        let mut beta = vec![0u32; self.n];
        for v in (0..self.n.saturating_sub(1)).rev() {
            beta[v] = (idx % self.m) as u32;
            idx /= self.m;
        }
        if self.n > 0 {
            let sum: usize = beta.iter().map(|&b| b as usize).sum();
            beta[self.n - 1] = ((self.m - sum % self.m) % self.m) as u32;
        }
        beta
    }

    /// Lexicographically first zero-sum boundary that no orientation has.
    pub fn first_missing(&self) -> Option<Vec<u32>> {
        self.reached.iter().position(|&r| r == 0).map(|i| self.decode(i))
    }

    /// All reached boundaries, as full vectors.
    #[cfg(test)]
    pub fn iter_reached(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.reached
            .iter()
            .enumerate()
            .filter(|(_, &r)| r != 0)
            .map(|(i, _)| self.decode(i))
    }
}

/// Moves block `k` of every `(m * p)`-chunk to block `k + shift`.
fn rotate(src: &[u8], dst: &mut [u8], m: usize, p: usize, shift: usize) {
    for (s, d) in src.chunks_exact(m * p).zip(dst.chunks_exact_mut(m * p)) {
        for k in 0..m {
            let t = (k + shift) % m;
            d[t * p..(t + 1) * p].copy_from_slice(&s[k * p..(k + 1) * p]);
        }
    }
}

pub(crate) fn sweep_fits(n: usize, m: u32) -> bool {
    let mut size = 1u64;
    for _ in 1..n {
        size = size.saturating_mul(u64::from(m));
    }
    size <= SWEEP_LIMIT
}

/// Every boundary modulo `m` realised by some orientation agreeing with
/// `fixed`.
pub(crate) fn sweep(g: &Multigraph, m: u32, fixed: &[Option<bool>]) -> BoundarySet {
    let n = g.n();
    let mu = m as usize;
    let len = mu.pow(n.saturating_sub(1) as u32);
    let mut set = BoundarySet { m: mu, n, reached: vec![0; len] };
    set.reached[0] = 1;
    let mut a = vec![0u8; len];
    let mut b = vec![0u8; len];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let mut next = vec![0u8; len];
        for forward in [true, false] {
            if fixed[e].is_some_and(|f| f != forward) {
                continue;
            }
            // forward: u gains +1, v gains -1.
            let (su, sv) = if forward { (1, mu - 1) } else { (mu - 1, 1) };
            a.copy_from_slice(&set.reached);
            for (x, s) in [(u, su), (v, sv)] {
                if x + 1 < n {
                    rotate(&a, &mut b, mu, set.stride(x), s);
                    std::mem::swap(&mut a, &mut b);
                }
            }
            for (t, &r) in next.iter_mut().zip(&a) {
                *t |= r;
            }
        }
        set.reached = next;
    }
    set
}

/// Vertex `v` may take boundary value `c` iff bit `c` of `allowed[v]` is set.
fn failure_exists(plan: &Plan, m: u32, allowed: &[u32], fixed: &[Option<bool>]) -> bool {
    let dg = Digits::new(m, plan.width);
    // Sums (as a bitmask over Z_m) reachable by the vertices retiring at or
    // after step i.
    let mut suffix = vec![1u32; plan.steps.len() + 1];
    for (i, step) in plan.steps.iter().enumerate().rev() {
        suffix[i] = match *step {
            Step::Retire { v, .. } => add_sets(suffix[i + 1], allowed[v], m),
            _ => suffix[i + 1],
        };
    }
    let mut width = 0usize;
    let words = |w: usize| (dg.pow[w] as usize).div_ceil(64);
    let mut family = Antichains::new(m);
    family.insert(0, vec![1u64]);
    for (i, step) in plan.steps.iter().enumerate() {
        match *step {
            Step::Introduce(_) => {
                width += 1;
                let w = words(width);
                family = family.map(m, |mut t| {
                    t.resize(w, 0);
                    t
                });
            }
            Step::Edge { e, pu, pv } => {
                let w = words(width);
                family = family.map(m, |t| {
                    let mut out = vec![0u64; w];
                    for idx in ones(&t) {
                        for forward in [true, false] {
                            if fixed[e].is_some_and(|f| f != forward) {
                                continue;
                            }
                            let j = dg.edge(idx as u64, pu, pv, forward) as usize;
                            out[j / 64] |= 1 << (j % 64);
                        }
                    }
                    out
                });
            }
            Step::Retire { v, pos } => {
                width -= 1;
                let w = words(width);
                let mut next = Antichains::new(m);
                for (s, t) in family.drain() {
                    let mut split = vec![vec![0u64; w]; m as usize];
                    for idx in ones(&t) {
                        let c = dg.digit(idx as u64, pos) as usize;
                        let j = dg.remove(idx as u64, pos) as usize;
                        split[c][j / 64] |= 1 << (j % 64);
                    }
                    for (c, part) in split.into_iter().enumerate() {
                        if allowed[v] >> c & 1 == 0 {
                            continue;
                        }
                        let sum = (s + c as u32) % m;
                        if part.iter().all(|&x| x == 0) && suffix[i + 1] >> ((m - sum) % m) & 1 == 1 {
                            return true;
                        }
                        next.insert(sum, part);
                    }
                }
                family = next;
            }
        }
    }
    family.sets[0].iter().any(|t| t.iter().all(|&x| x == 0))
}

/// `{a + b : a in x, b in y}` for sets of residues given as bitmasks.
fn add_sets(x: u32, y: u32, m: u32) -> u32 {
    let mut out = 0;
    for a in 0..m {
        if x >> a & 1 == 1 {
            for b in 0..m {
                if y >> b & 1 == 1 {
                    out |= 1 << ((a + b) % m);
                }
            }
        }
    }
    out
}

/// Reachable-set families, one antichain per sum key. A set contained in
/// another with the same key fails whenever the larger one does, so only
/// the minimal sets are kept.
struct Antichains {
    sets: Vec<Vec<Vec<u64>>>,
}

impl Antichains {
    fn new(m: u32) -> Self {
        Antichains { sets: vec![Vec::new(); m as usize] }
    }

    fn insert(&mut self, key: u32, t: Vec<u64>) {
        let list = &mut self.sets[key as usize];
        if list.iter().any(|s| subset(s, &t)) {
            return;
        }
        list.retain(|s| !subset(&t, s));
        list.push(t);
    }

    fn map(self, m: u32, mut f: impl FnMut(Vec<u64>) -> Vec<u64>) -> Self {
        let mut out = Antichains::new(m);
        for (key, t) in self.drain() {
            out.insert(key, f(t));
        }
        out
    }

    fn drain(self) -> impl Iterator<Item = (u32, Vec<u64>)> {
        self.sets
            .into_iter()
            .enumerate()
            .flat_map(|(key, list)| list.into_iter().map(move |t| (key as u32, t)))
    }
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

/// Lexicographically first zero-sum boundary modulo `m` with no orientation
/// agreeing with `fixed`, found by fixing one value at a time.
fn first_failure_by_families(g: &Multigraph, m: u32, fixed: &[Option<bool>]) -> Option<Vec<u32>> {
    let n = g.n();
    let p = plan(g);
    let mut allowed = vec![(1u32 << m) - 1; n];
    if !failure_exists(&p, m, &allowed, fixed) {
        return None;
    }
    let mut beta = vec![0u32; n];
    for v in 0..n.saturating_sub(1) {
        let c = (0..m)
            .find(|&c| {
                allowed[v] = 1 << c;
                failure_exists(&p, m, &allowed, fixed)
            })
            .expect("some value extends a failing prefix");
        allowed[v] = 1 << c;
        beta[v] = c;
    }
    let sum: u32 = beta.iter().sum();
    beta[n - 1] = (m - sum % m) % m;
    Some(beta)
}

/// Whether every zero-sum boundary modulo `m` is realised by an orientation
/// agreeing with `fixed`. Cheaper than [`first_failure`] when no witness is
/// needed.
pub(crate) fn all_realised(g: &Multigraph, m: u32, fixed: &[Option<bool>]) -> bool {
    if g.n() <= 1 {
        return true;
    }
    if sweep_fits(g.n(), m) {
        sweep(g, m, fixed).first_missing().is_none()
    } else {
        !failure_exists(&plan(g), m, &vec![(1u32 << m) - 1; g.n()], fixed)
    }
}

/// Lexicographically first zero-sum boundary modulo `m` that no orientation
/// agreeing with `fixed` realises, or `None` when all are realised.
pub(crate) fn first_failure(g: &Multigraph, m: u32, fixed: &[Option<bool>]) -> Option<Vec<u32>> {
    if g.n() <= 1 {
        return None;
    }
    if sweep_fits(g.n(), m) {
        sweep(g, m, fixed).first_missing()
    } else {
        first_failure_by_families(g, m, fixed)
    }
}
