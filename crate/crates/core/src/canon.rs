//! Isomorphism-invariant keys for deduplication.
//!
//! Colour refinement splits the vertices into ordered cells; the key is the
//! lexicographically smallest sorted edge list over all labellings that
//! respect the cell order. When that search would exceed [`PERMUTATION_CAP`]
//! labellings the key falls back to the refined-but-labelled edge list, which
//! never merges non-isomorphic graphs but may keep isomorphic ones apart.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::Multigraph;

pub const PERMUTATION_CAP: u64 = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    /// False when the key is only a labelled fallback.
    pub exact: bool,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl CanonicalKey {
    /// Stable 64-bit digest, used by journals.
    pub fn digest(&self) -> u64 {
        let g = Multigraph::new(self.n, self.edges.clone()).expect("keys hold valid graphs");
        g.fingerprint() ^ u64::from(self.exact)
    }
}

/// Stable colour classes, numbered in an isomorphism-invariant order.
fn refine(g: &Multigraph) -> Vec<usize> {
    let n = g.n();
    let adj = g.adjacency();
    let mut colour: Vec<usize> = g.degrees();
    let mut classes = usize::MAX;
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = adj[v].iter().map(|&(w, _)| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
        distinct.sort();
        distinct.dedup();
        let index: BTreeMap<&(usize, Vec<usize>), usize> = distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<usize> = signatures.iter().map(|s| index[s]).collect();
        let count = distinct.len();
        colour = next;
        if count == classes {
            return colour;
        }
        classes = count;
    }
}

fn keyed_edges(g: &Multigraph, label: &[usize]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (label[u], label[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges
}

pub fn canonical_key(g: &Multigraph) -> CanonicalKey {
    let n = g.n();
    let colour = refine(g);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        cells.entry(colour[v]).or_default().push(v);
    }
    let cells: Vec<Vec<usize>> = cells.into_values().collect();
    let mut budget = 1u64;
    for c in &cells {
        for i in 1..=c.len() as u64 {
            budget = budget.saturating_mul(i);
        }
    }
    // Positions start at the cell's offset in colour order.
    let mut offsets = Vec::with_capacity(cells.len());
    let mut acc = 0;
    for c in &cells {
        offsets.push(acc);
        acc += c.len();
    }
    if budget > PERMUTATION_CAP {
        let mut label = vec![0; n];
        for (c, &off) in cells.iter().zip(&offsets) {
            for (i, &v) in c.iter().enumerate() {
                label[v] = off + i;
            }
        }
        return CanonicalKey { exact: false, n, edges: keyed_edges(g, &label) };
    }
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut label = vec![0; n];
    let mut perms: Vec<Vec<usize>> = cells.clone();
    fn walk(
        g: &Multigraph,
        cells: &mut [Vec<usize>],
        offsets: &[usize],
        depth: usize,
        label: &mut Vec<usize>,
        best: &mut Option<Vec<(usize, usize)>>,
    ) {
        if depth == cells.len() {
            let edges = keyed_edges(g, label);
            if best.as_ref().is_none_or(|b| edges < *b) {
                *best = Some(edges);
            }
            return;
        }
        let len = cells[depth].len();
        permute(&mut cells[depth].clone(), 0, len, &mut |order: &[usize]| {
            for (i, &v) in order.iter().enumerate() {
                label[v] = offsets[depth] + i;
            }
            walk(g, cells, offsets, depth + 1, label, best);
        });
    }
    walk(g, &mut perms, &offsets, 0, &mut label, &mut best);
    CanonicalKey { exact: true, n, edges: best.unwrap_or_default() }
}

/// Calls `f` on every permutation of `items[k..len]` (prefix fixed).
fn permute(items: &mut Vec<usize>, k: usize, len: usize, f: &mut dyn FnMut(&[usize])) {
    if k == len {
        f(items);
        return;
    }
    for i in k..len {
        items.swap(k, i);
        permute(items, k + 1, len, f);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_graphs_share_a_key() {
        let g = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (0, 2)]).unwrap();
        let key = canonical_key(&g);
        assert!(key.exact);
        for perm in [[1, 2, 3, 4, 0], [4, 3, 2, 1, 0], [2, 0, 4, 1, 3]] {
            assert_eq!(canonical_key(&g.relabel(&perm)), key);
        }
    }

    #[test]
    fn non_isomorphic_graphs_differ() {
        let path = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let star = Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_ne!(canonical_key(&path), canonical_key(&star));
        let c2 = Multigraph::cycle(2);
        assert_ne!(canonical_key(&c2), canonical_key(&Multigraph::new(2, vec![(0, 1)]).unwrap()));
    }

    #[test]
    fn simple_graphs_on_five_vertices_give_34_classes() {
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let mut keys = std::collections::BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            keys.insert(canonical_key(&Multigraph::new(5, edges).unwrap()));
        }
        assert_eq!(keys.len(), 34);
    }
}
