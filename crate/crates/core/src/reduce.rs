//! ⟨Z3⟩-reduction: finding Z3-connected subgraphs, contracting them,
//! lifting, and the edge-density bound for reduced graphs.
//!
//! Z3-connectivity is preserved by adding edges, so only induced subgraphs
//! need testing, and a Z3-connected graph has two edge-disjoint spanning
//! trees. The candidates are therefore the vertex sets inducing two
//! edge-disjoint spanning trees. They are generated by recursing into the
//! maximal such sets of `G[M - v]` for each `v`, which reaches every one of
//! them, and tested smallest first.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_key, CanonicalKey};
use crate::graph::{GraphError, Multigraph};
use crate::oracle::random_zero_sum;
use crate::orient::{find_beta_orientation, is_z3_connected, z3_connected};
use crate::treepack::k_tree_connected_parts;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("lifting precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("density bound needs at least 3 vertices")]
    TooSmall,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reducedness {
    Reduced,
    /// A smallest vertex set `X`, `|X| >= 2`, with `G[X]` Z3-connected
    /// (lexicographically first among the smallest).
    NotReduced { set: Vec<usize> },
}

impl Reducedness {
    pub fn is_reduced(&self) -> bool {
        matches!(self, Reducedness::Reduced)
    }
}

/// Maximal vertex sets of `G[within]` (size >= 2) inducing two
/// edge-disjoint spanning trees, in original ids.
fn two_tree_parts(g: &Multigraph, within: &[usize]) -> Vec<Vec<usize>> {
    let (h, back) = g.induced(within).expect("ids in range");
    k_tree_connected_parts(&h, 2)
        .into_iter()
        .map(|p| {
            let mut part: Vec<usize> = p.iter().map(|&i| back[i]).collect();
            part.sort_unstable();
            part
        })
        .collect()
}

/// Every vertex set of size >= 2 inducing two edge-disjoint spanning trees,
/// sorted by (size, lexicographic).
pub fn two_tree_candidates(g: &Multigraph) -> Vec<Vec<usize>> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack = vec![(0..g.n()).collect::<Vec<_>>()];
    while let Some(m) = stack.pop() {
        if m.len() < 2 || !seen.insert(m.clone()) {
            continue;
        }
        for part in two_tree_parts(g, &m) {
            if found.insert(part.clone()) {
                for &v in &part {
                    let smaller: Vec<usize> = part.iter().copied().filter(|&w| w != v).collect();
                    stack.push(smaller);
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Z3 verdict cache keyed by canonical form.
#[derive(Default)]
pub struct Z3Cache {
    map: Mutex<HashMap<CanonicalKey, bool>>,
}

impl Z3Cache {
    pub fn is_z3_connected(&self, g: &Multigraph) -> bool {
        let key = canonical_key(g);
        if key.exact {
            if let Some(&hit) = self.map.lock().expect("cache lock").get(&key) {
                return hit;
            }
        }
        let verdict = quick_reject(g) && z3_connected(g);
        if key.exact {
            self.map.lock().expect("cache lock").insert(key, verdict);
        }
        verdict
    }
}

/// False when a few seeded random boundaries already lack an orientation;
/// true means "undecided".
fn quick_reject(g: &Multigraph) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(g.fingerprint());
    (0..8).all(|_| {
        let beta = random_zero_sum(&mut rng, g.n(), 3);
        find_beta_orientation(g, &beta, None).expect("valid beta").is_some()
    })
}

pub fn is_z3_reduced(g: &Multigraph) -> Reducedness {
    is_z3_reduced_with(g, &Z3Cache::default())
}

pub fn is_z3_reduced_with(g: &Multigraph, cache: &Z3Cache) -> Reducedness {
    let candidates = two_tree_candidates(g);
    let hit = candidates.par_iter().find_first(|x| {
        let (h, _) = g.induced(x).expect("ids in range");
        cache.is_z3_connected(&h)
    });
    match hit {
        Some(set) => Reducedness::NotReduced { set: set.clone() },
        None => Reducedness::Reduced,
    }
}

/// The reduced graph and the contracted vertex sets, in the original ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub graph: Multigraph,
    pub trace: Vec<Vec<usize>>,
}

/// Contracts a smallest Z3-connected induced subgraph until none is left.
pub fn z3_reduce(g: &Multigraph) -> Reduction {
    let cache = Z3Cache::default();
    let mut current = g.clone();
    // Original vertices behind each current vertex.
    let mut members: Vec<Vec<usize>> = (0..g.n()).map(|v| vec![v]).collect();
    let mut trace = Vec::new();
    while let Reducedness::NotReduced { set } = is_z3_reduced_with(&current, &cache) {
        let mut original: Vec<usize> = set.iter().flat_map(|&v| members[v].iter().copied()).collect();
        original.sort_unstable();
        trace.push(original);
        let (next, map) = current.contract_vertex_set(&set).expect("ids in range");
        let mut next_members = vec![Vec::new(); next.n()];
        for (old, &new) in map.iter().enumerate() {
            next_members[new].extend(members[old].iter().copied());
        }
        for m in &mut next_members {
            m.sort_unstable();
        }
        members = next_members;
        current = next;
    }
    Reduction { graph: current, trace }
}

/// `is_z3_connected(G - v + v1v2)`; when true, `G` is Z3-connected too. With
/// `v1 = v2` the new edge would be a loop and is left out.
pub fn lift_implies_z3(g: &Multigraph, v: usize, v1: usize, v2: usize) -> Result<bool, ReduceError> {
    let degree = g.degree(v)?;
    if degree < 4 {
        return Err(ReduceError::PreconditionViolated(format!("degree of {v} is {degree} < 4")));
    }
    let needed = if v1 == v2 { 2 } else { 1 };
    if g.multiplicity(v, v1) < needed || g.multiplicity(v, v2) < 1 {
        return Err(ReduceError::PreconditionViolated(format!("edges {v}{v1} and {v}{v2} are not both present")));
    }
    let (rest, map) = g.delete_vertex(v)?;
    let g1 = if v1 == v2 {
        rest
    } else {
        rest.with_edge(map[v1].expect("v1 != v"), map[v2].expect("v2 != v"))?
    };
    Ok(is_z3_connected(&g1).is_connected())
}

/// `|E| <= 4|V| - 8`, the edge bound every reduced graph obeys.
pub fn density_check(g: &Multigraph) -> Result<bool, ReduceError> {
    if g.n() < 3 {
        return Err(ReduceError::TooSmall);
    }
    Ok(g.m() + 8 <= 4 * g.n())
}
