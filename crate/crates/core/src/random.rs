//! Seeded random multigraphs.
//!
//! All sampling goes through ChaCha8 seeded from an explicit `u64`, so a
//! seed reproduces the same graphs on every platform. Item `i` of a seeded
//! run draws from its own stream, which keeps results independent of the
//! order in which parallel workers pick items up.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Multigraph;

pub type GraphRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GraphRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for item `index` of the run seeded with `seed`.
pub fn item_rng(seed: u64, index: u64) -> GraphRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// `m` uniform endpoint pairs on `n >= 2` vertices, loops rejected.
pub fn random_multigraph(rng: &mut impl Rng, n: usize, m: usize) -> Multigraph {
    assert!(n >= 2 || m == 0, "edges need two vertices");
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.push((u.min(v), u.max(v)));
        }
    }
    Multigraph::new(n, edges).expect("endpoints in range and distinct")
}

/// A simple graph with each pair present independently with probability `p`.
pub fn random_simple(rng: &mut impl Rng, n: usize, p: f64) -> Multigraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Multigraph::new(n, edges).expect("simple pairs")
}

/// Rejection sampling: draws `n` and `m` from the closures until `accept`
/// holds, giving up after `attempts` tries.
pub fn sample_until<R: Rng>(
    rng: &mut R,
    attempts: usize,
    mut size: impl FnMut(&mut R) -> (usize, usize),
    mut accept: impl FnMut(&Multigraph) -> bool,
) -> Option<Multigraph> {
    for _ in 0..attempts {
        let (n, m) = size(rng);
        let g = random_multigraph(rng, n, m);
        if accept(&g) {
            return Some(g);
        }
    }
    None
}
