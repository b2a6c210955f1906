//! Spanning-tree packing and the deficiency `F(G, k)`.
//!
//! The packing side is matroid union over `k` copies of the cycle matroid,
//! grown one edge at a time by shortest augmenting paths in the exchange
//! graph. The dual side is a vertex partition `P` attaining
//! `F(G, k) = max(0, max_P k(|P| - 1) - e_G(P))`. The partition returned is
//! the coarsest maximiser, whose parts are the maximal vertex sets inducing
//! `k` edge-disjoint spanning trees. Those parts are read off from failed
//! augmentations: when a parallel copy of an edge cannot be added, the
//! elements reachable from it in the exchange graph are spanned in every
//! forest, so each forest restricted to them is a spanning tree of their
//! vertex set.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Multigraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreePackError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("a single vertex holds arbitrarily many (empty) spanning trees")]
    SingleVertex,
}

/// A partition of the vertex set; parts sorted, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<Vec<usize>>,
}

impl Partition {
    pub fn singletons(n: usize) -> Self {
        Self { parts: (0..n).map(|v| vec![v]).collect() }
    }

    fn from_labels(labels: &[usize]) -> Self {
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for (v, &l) in labels.iter().enumerate() {
            let slot = *index.entry(l).or_insert_with(|| {
                parts.push(Vec::new());
                parts.len() - 1
            });
            parts[slot].push(v);
        }
        Self { parts }
    }

    pub fn is_partition_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for part in &self.parts {
            if part.is_empty() {
                return false;
            }
            for &v in part {
                if v >= n || seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        seen.into_iter().all(|b| b)
    }

    fn labels(&self, n: usize) -> Vec<usize> {
        let mut label = vec![usize::MAX; n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                label[v] = i;
            }
        }
        label
    }

    /// `e_G(P)`: edges joining different parts.
    pub fn crossing_edges(&self, g: &Multigraph) -> usize {
        let label = self.labels(g.n());
        g.edges().iter().filter(|&&(u, v)| label[u] != label[v]).count()
    }

    /// `k(|P| - 1) - e_G(P)`.
    pub fn deficiency_value(&self, g: &Multigraph, k: usize) -> i64 {
        (k * self.parts.len().saturating_sub(1)) as i64 - self.crossing_edges(g) as i64
    }
}

/// `k` edge-disjoint forests, as edge-id lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestPacking {
    pub forests: Vec<Vec<usize>>,
}

impl ForestPacking {
    /// Checks disjointness and that every forest is acyclic; with
    /// `spanning`, also that each forest is a spanning tree.
    pub fn verify(&self, g: &Multigraph, spanning: bool) -> bool {
        let mut used = vec![false; g.m()];
        for forest in &self.forests {
            let mut dsu: Vec<usize> = (0..g.n()).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for &e in forest {
                if e >= g.m() || used[e] {
                    return false;
                }
                used[e] = true;
                let (u, v) = g.edges()[e];
                let (a, b) = (find(&mut dsu, u), find(&mut dsu, v));
                if a == b {
                    return false;
                }
                dsu[a] = b;
            }
            if spanning && forest.len() + 1 != g.n() {
                return false;
            }
        }
        true
    }
}

/// Matroid-union state: which forest (if any) owns each edge.
struct Union<'g> {
    g: &'g Multigraph,
    k: usize,
    owner: Vec<Option<usize>>,
}

impl<'g> Union<'g> {
    fn new(g: &'g Multigraph, k: usize) -> Self {
        Self { g, k, owner: vec![None; g.m()] }
    }

    /// Edge-ids on the path between `u` and `v` in forest `i`, or `None` when
    /// they lie in different trees of it.
    fn forest_path(&self, i: usize, u: usize, v: usize) -> Option<Vec<usize>> {
        if u == v {
            return Some(Vec::new());
        }
        let n = self.g.n();
        let mut adj = vec![Vec::new(); n];
        for (e, &(a, b)) in self.g.edges().iter().enumerate() {
            if self.owner[e] == Some(i) {
                adj[a].push((b, e));
                adj[b].push((a, e));
            }
        }
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    queue.push_back(y);
                }
            }
        }
        if !seen[v] {
            return None;
        }
        let mut path = Vec::new();
        let mut x = v;
        while x != u {
            let e = via[x];
            path.push(e);
            let (a, b) = self.g.edges()[e];
            x = if a == x { b } else { a };
        }
        Some(path)
    }

    /// Breadth-first search in the exchange graph from the element with
    /// endpoints `ends` (a real unowned edge, or a phantom copy when `edge`
    /// is `None`). Returns either an augmenting path's sink, applied when
    /// `apply` is set, or the set of reached edges.
    fn search(&mut self, edge: Option<usize>, ends: (usize, usize), apply: bool) -> Result<(), Vec<bool>> {
        let m = self.g.m();
        // Node m is the phantom; parents store (node, forest).
        let start = edge.unwrap_or(m);
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; m + 1];
        let mut seen = vec![false; m + 1];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let (u, v) = if x == m { ends } else { self.g.edges()[x] };
            let own = if x == m { None } else { self.owner[x] };
            for i in 0..self.k {
                if own == Some(i) {
                    continue;
                }
                match self.forest_path(i, u, v) {
                    None => {
                        if apply {
                            let mut cur = x;
                            let mut target = i;
                            loop {
                                if cur < m {
                                    self.owner[cur] = Some(target);
                                }
                                match parent[cur] {
                                    None => break,
                                    Some((prev, forest)) => {
                                        target = forest;
                                        cur = prev;
                                    }
                                }
                            }
                        }
                        return Ok(());
                    }
                    Some(path) => {
                        for y in path {
                            if !seen[y] {
                                seen[y] = true;
                                parent[y] = Some((x, i));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        seen.truncate(m);
        Err(seen)
    }

    fn grow(&mut self) {
        for e in 0..self.g.m() {
            let ends = self.g.edges()[e];
            let _ = self.search(Some(e), ends, true);
        }
        debug_assert!(self.packing().verify(self.g, false));
    }

    fn size(&self) -> usize {
        self.owner.iter().filter(|o| o.is_some()).count()
    }

    fn packing(&self) -> ForestPacking {
        let mut forests = vec![Vec::new(); self.k];
        for (e, o) in self.owner.iter().enumerate() {
            if let Some(i) = o {
                forests[*i].push(e);
            }
        }
        ForestPacking { forests }
    }

    /// Coarsest maximising partition: merge, over all edges whose parallel
    /// copy is spanned, the vertex sets that copy certifies.
    fn coarsest_partition(&mut self) -> Partition {
        let n = self.g.n();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in 0..self.g.m() {
            let (u, v) = self.g.edges()[e];
            if find(&mut dsu, u) == find(&mut dsu, v) {
                continue;
            }
            let Err(reached) = self.search(None, (u, v), false) else {
                continue;
            };
            // Component of u in (V, reached edges) plus the phantom uv.
            let mut adj = vec![Vec::new(); n];
            for (f, &(a, b)) in self.g.edges().iter().enumerate() {
                if reached[f] {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
            adj[u].push(v);
            let mut seen = vec![false; n];
            seen[u] = true;
            let mut stack = vec![u];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            for w in (0..n).filter(|&w| seen[w]) {
                let (a, b) = (find(&mut dsu, u), find(&mut dsu, w));
                if a != b {
                    dsu[a.max(b)] = a.min(b);
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|v| find(&mut dsu, v)).collect();
        Partition::from_labels(&labels)
    }
}

/// Maximum union of `k` forests, by matroid union. Works on any graph.
pub fn max_forest_packing(g: &Multigraph, k: usize) -> ForestPacking {
    let mut union = Union::new(g, k);
    union.grow();
    union.packing()
}

/// The deficiency certificate: value, the coarsest maximising partition and
/// a maximum packing of `k` forests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deficiency {
    pub value: usize,
    pub partition: Partition,
    pub packing: ForestPacking,
}

/// `F(G, k)` for connected `G`.
pub fn deficiency(g: &Multigraph, k: usize) -> Result<Deficiency, TreePackError> {
    if !g.is_connected() {
        return Err(TreePackError::Disconnected);
    }
    if g.n() == 0 {
        return Err(TreePackError::SingleVertex);
    }
    let mut union = Union::new(g, k);
    union.grow();
    let value = k * (g.n() - 1) - union.size();
    let partition = union.coarsest_partition();
    debug_assert_eq!(partition.deficiency_value(g, k).max(0) as usize, value);
    Ok(Deficiency { value, partition, packing: union.packing() })
}

/// The maximum number of edge-disjoint spanning trees, with the trees.
pub fn tree_packing_number(g: &Multigraph) -> Result<(usize, ForestPacking), TreePackError> {
    if !g.is_connected() {
        return Err(TreePackError::Disconnected);
    }
    if g.n() <= 1 {
        return Err(TreePackError::SingleVertex);
    }
    let mut best = (0, ForestPacking { forests: Vec::new() });
    for k in 1..=g.m() / (g.n() - 1) {
        let packing = max_forest_packing(g, k);
        let total: usize = packing.forests.iter().map(Vec::len).sum();
        if total < k * (g.n() - 1) {
            break;
        }
        best = (k, packing);
    }
    Ok(best)
}

/// A vertex set `X`, `|X| >= 2`, with `F(G[X], k) = 0`: the largest part of
/// the coarsest maximising partition (ties to the lexicographically
/// smallest), or `None` when every part is a singleton.
/// The maximal vertex sets of size >= 2 whose induced subgraph holds `k`
/// edge-disjoint spanning trees. They are pairwise disjoint.
pub fn k_tree_connected_parts(g: &Multigraph, k: usize) -> Vec<Vec<usize>> {
    if k == 0 || g.n() < 2 {
        return Vec::new();
    }
    let mut union = Union::new(g, k);
    union.grow();
    union.coarsest_partition().parts.into_iter().filter(|p| p.len() >= 2).collect()
}

pub fn find_dense_subgraph(g: &Multigraph, k: usize) -> Option<Vec<usize>> {
    if k == 0 || g.n() < 2 {
        return None;
    }
    let mut union = Union::new(g, k);
    union.grow();
    if g.is_connected() && union.size() == k * (g.n() - 1) {
        return Some((0..g.n()).collect());
    }
    let partition = union.coarsest_partition();
    partition
        .parts
        .into_iter()
        .filter(|p| p.len() >= 2)
        .min_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)))
}

/// Adds `F(G, k)` edges, each joining the two largest parts of the current
/// certificate partition, until `k` edge-disjoint spanning trees exist.
pub fn augment_to_k_trees(g: &Multigraph, k: usize) -> Result<(Multigraph, Vec<(usize, usize)>), TreePackError> {
    let mut current = g.clone();
    let mut added = Vec::new();
    loop {
        let d = deficiency(&current, k)?;
        if d.value == 0 {
            return Ok((current, added));
        }
        let mut parts = d.partition.parts.clone();
        parts.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let edge = (parts[0][0], parts[1][0]);
        added.push(edge);
        current = current.with_edge(edge.0, edge.1).expect("parts are disjoint");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::jaeger_graph;
    use crate::oracle::deficiency_by_partitions;

    fn two_triangles_with_bridge() -> Multigraph {
        Multigraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn tree_packing_examples() {
        let (t, packing) = tree_packing_number(&Multigraph::complete(4)).unwrap();
        assert_eq!(t, 2);
        assert!(packing.verify(&Multigraph::complete(4), true));
        assert_eq!(tree_packing_number(&Multigraph::cycle(2)).unwrap().0, 2);
        let j = jaeger_graph();
        let (t, packing) = tree_packing_number(&j).unwrap();
        assert_eq!(t, 2);
        assert!(packing.verify(&j, true));
        assert_eq!(tree_packing_number(&Multigraph::empty(2)), Err(TreePackError::Disconnected));
    }

    #[test]
    fn deficiency_examples() {
        let k4 = Multigraph::complete(4);
        let d = deficiency(&k4, 4).unwrap();
        assert_eq!(d.value, 6);
        assert_eq!(d.partition, Partition::singletons(4));
        assert_eq!(deficiency(&k4, 2).unwrap().value, 0);
        assert_eq!(deficiency_by_partitions(&k4, 2).0, 0);
        assert_eq!(deficiency(&Multigraph::cycle(2), 4).unwrap().value, 2);
        assert_eq!(deficiency(&jaeger_graph(), 4).unwrap().value, 20);
        assert_eq!(deficiency(&Multigraph::empty(3), 1), Err(TreePackError::Disconnected));
    }

    #[test]
    fn dense_subgraph_examples() {
        assert_eq!(find_dense_subgraph(&Multigraph::complete(4), 2), Some(vec![0, 1, 2, 3]));
        assert_eq!(find_dense_subgraph(&two_triangles_with_bridge(), 2), None);
        assert_eq!(find_dense_subgraph(&Multigraph::cycle(2), 2), Some(vec![0, 1]));
        // A double edge hanging off a triangle: only {3, 4} carries two trees.
        let g = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (3, 4)]).unwrap();
        assert_eq!(find_dense_subgraph(&g, 2), Some(vec![3, 4]));
    }

    #[test]
    fn dense_subgraph_brute_force_on_bridge_graph() {
        // Every vertex subset of size >= 2 lacks two edge-disjoint spanning trees.
        let g = two_triangles_with_bridge();
        for mask in 0u32..64 {
            let x: Vec<usize> = (0..6).filter(|&v| mask >> v & 1 == 1).collect();
            if x.len() < 2 {
                continue;
            }
            let (h, _) = g.induced(&x).unwrap();
            if h.is_connected() {
                assert!(deficiency_by_partitions(&h, 2).0 > 0, "{x:?}");
            }
        }
    }

    #[test]
    fn augmenting_reaches_zero_in_exactly_f_steps() {
        let g = two_triangles_with_bridge();
        let f = deficiency(&g, 2).unwrap().value;
        let (h, added) = augment_to_k_trees(&g, 2).unwrap();
        assert_eq!(added.len(), f);
        assert_eq!(deficiency(&h, 2).unwrap().value, 0);
    }
}
