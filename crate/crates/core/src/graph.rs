//! Loopless undirected multigraphs.
//!
//! Vertices are the dense ids `0..n`. Every edge is an unordered endpoint
//! pair and its edge-id is its position in the edge list, so parallel edges
//! are distinct objects that can be oriented independently. All operations
//! return new graphs; the structural ones also return a vertex map so that
//! certificates computed on a derived graph can be traced back.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {index} is a loop at vertex {vertex}")]
    LoopRejected { index: usize, vertex: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("cut side must be a proper nonempty vertex subset")]
    EmptyOrFullSide,
}

/// A loopless multigraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// The edge cut `[S, V - S]` together with the side that defines it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct CutCertificate {
    pub side: Vec<usize>,
    pub cut_edges: Vec<usize>,
}

impl CutCertificate {
    pub fn value(&self) -> usize {
        self.cut_edges.len()
    }

    /// Recomputes the cut from `side` and compares it with `cut_edges`.
    pub fn verify(&self, g: &Multigraph) -> bool {
        match g.edge_cut(&self.side) {
            Ok(c) => c.cut_edges == self.cut_edges,
            Err(_) => false,
        }
    }
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for (index, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopRejected { index, vertex: u });
            }
        }
        Ok(Self { n, edges })
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self { n, edges }
    }

    /// A cycle of length `len`; `len == 2` gives two parallel edges.
    pub fn cycle(len: usize) -> Self {
        assert!(len >= 2, "a cycle needs at least two vertices");
        let edges = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Self { n: len, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Result<(usize, usize), GraphError> {
        self.edges.get(id).copied().ok_or(GraphError::UnknownEdge(id))
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|&&(a, b)| a == v || b == v).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.degrees().into_iter().min()
    }

    /// Edge-ids of `E_G(v)`, ascending.
    pub fn incident_edges(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i)
            .collect())
    }

    /// Distinct neighbours `N_G(v)`, ascending.
    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(v)?;
        let set: BTreeSet<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        Ok(set.into_iter().collect())
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
            .count()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|&(u, v)| seen.insert((u.min(v), u.max(v))))
    }

    /// Adjacency as `(neighbour, edge-id)` lists.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        adj
    }

    /// Component label per vertex (labels in order of smallest member) and
    /// the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &(y, _) in &adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let (label, count) = self.component_labels();
        let mut comps = vec![Vec::new(); count];
        for (v, &l) in label.iter().enumerate() {
            comps[l].push(v);
        }
        comps
    }

    /// Connected in the usual sense; the graphs on zero or one vertex count
    /// as connected.
    pub fn is_connected(&self) -> bool {
        self.component_labels().1 <= 1
    }

    /// `G/X`: identify the ends of every edge in `X`, then drop loops.
    ///
    /// Returns the contracted graph and the merge map `old vertex -> new
    /// vertex`. New ids are assigned in order of the smallest old vertex of
    /// each merged class. Surviving edges keep their relative order.
    pub fn contract(&self, x: &[usize]) -> Result<(Multigraph, Vec<usize>), GraphError> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for &id in x {
            let (u, v) = self.edge(id)?;
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        let mut new_id = vec![usize::MAX; self.n];
        let mut map = vec![0; self.n];
        let mut next = 0;
        for v in 0..self.n {
            let r = find(&mut parent, v);
            if new_id[r] == usize::MAX {
                new_id[r] = next;
                next += 1;
            }
            map[v] = new_id[r];
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (map[u], map[v]))
            .filter(|(a, b)| a != b)
            .collect();
        Ok((Multigraph { n: next, edges }, map))
    }

    /// `G/G[W]` for a vertex set whose induced subgraph is connected.
    pub fn contract_vertex_set(&self, w: &[usize]) -> Result<(Multigraph, Vec<usize>), GraphError> {
        for &v in w {
            self.check_vertex(v)?;
        }
        let inside: BTreeSet<usize> = w.iter().copied().collect();
        let ids: Vec<usize> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, (u, v))| inside.contains(u) && inside.contains(v))
            .map(|(i, _)| i)
            .collect();
        self.contract(&ids)
    }

    /// `G - v`, with vertices renumbered densely. The map sends old ids to
    /// new ids (`None` for `v`).
    pub fn delete_vertex(&self, v: usize) -> Result<(Multigraph, Vec<Option<usize>>), GraphError> {
        self.check_vertex(v)?;
        let map: Vec<Option<usize>> = (0..self.n)
            .map(|w| match w.cmp(&v) {
                std::cmp::Ordering::Less => Some(w),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(w - 1),
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| a != v && b != v)
            .map(|&(a, b)| (map[a].unwrap(), map[b].unwrap()))
            .collect();
        Ok((Multigraph { n: self.n - 1, edges }, map))
    }

    pub fn delete_edges(&self, ids: &[usize]) -> Result<Multigraph, GraphError> {
        let mut drop = vec![false; self.m()];
        for &id in ids {
            self.edge(id)?;
            drop[id] = true;
        }
        let edges = self
            .edges
            .iter()
            .zip(drop)
            .filter(|(_, d)| !d)
            .map(|(&e, _)| e)
            .collect();
        Ok(Multigraph { n: self.n, edges })
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Multigraph, GraphError> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        Multigraph::new(self.n, edges)
    }

    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<Multigraph, GraphError> {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(extra);
        Multigraph::new(self.n, edges)
    }

    /// `G[X]`: the induced subgraph on the listed vertices, renumbered in the
    /// listed order. Returns the subgraph and the map `new id -> old id`.
    pub fn induced(&self, x: &[usize]) -> Result<(Multigraph, Vec<usize>), GraphError> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in x.iter().enumerate() {
            self.check_vertex(v)?;
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| (pos[a], pos[b]))
            .collect();
        Ok((Multigraph { n: x.len(), edges }, x.to_vec()))
    }

    /// Number of edges with both ends in `x`.
    pub fn edges_within(&self, x: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in x {
            inside[v] = true;
        }
        self.edges
            .iter()
            .filter(|&&(a, b)| inside[a] && inside[b])
            .count()
    }

    /// The edge cut `[S, V - S]`.
    pub fn edge_cut(&self, side: &[usize]) -> Result<CutCertificate, GraphError> {
        let mut inside = vec![false; self.n];
        for &v in side {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        let count = inside.iter().filter(|&&b| b).count();
        if count == 0 || count == self.n {
            return Err(GraphError::EmptyOrFullSide);
        }
        let cut_edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| inside[a] != inside[b])
            .map(|(i, _)| i)
            .collect();
        let side = (0..self.n).filter(|&v| inside[v]).collect();
        Ok(CutCertificate { side, cut_edges })
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Multigraph { n: self.n + other.n, edges }
    }

    /// Relabel vertices through `perm` (old id -> new id, a permutation).
    pub fn relabel(&self, perm: &[usize]) -> Multigraph {
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Multigraph { n: self.n, edges }
    }

    /// Identify the vertices `keep` and `drop` (which must differ), deleting
    /// any edges that become loops. Returns the graph and the old->new map.
    pub fn identify_vertices(&self, keep: usize, drop: usize) -> Result<(Multigraph, Vec<usize>), GraphError> {
        self.check_vertex(keep)?;
        self.check_vertex(drop)?;
        let mut map = Vec::with_capacity(self.n);
        let mut next = 0;
        for v in 0..self.n {
            if v == drop {
                map.push(usize::MAX);
            } else {
                map.push(next);
                next += 1;
            }
        }
        map[drop] = map[keep];
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (map[u], map[v]))
            .filter(|(a, b)| a != b)
            .collect();
        Ok((Multigraph { n: next, edges }, map))
    }

    /// A stable 64-bit hash of the labelled graph (FNV-1a over the edge list).
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        eat(self.n as u64);
        for &(u, v) in &self.edges {
            eat(u as u64);
            eat(v as u64);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::complete(4)
    }

    #[test]
    fn build_examples() {
        let c2 = Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!((c2.n(), c2.m()), (2, 2));
        assert_eq!(c2.multiplicity(0, 1), 2);
        let k = Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k, k4());
        assert_eq!(
            Multigraph::new(2, vec![(0, 0)]),
            Err(GraphError::LoopRejected { index: 0, vertex: 0 })
        );
        assert_eq!(
            Multigraph::new(2, vec![(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn contract_examples() {
        let (g, map) = k4().contract(&[0]).unwrap();
        assert_eq!((g.n(), g.m()), (3, 5));
        assert_eq!(g.degrees().iter().sum::<usize>(), 10);
        assert_eq!(map, vec![0, 0, 1, 2]);
        assert_eq!(g.multiplicity(0, 1), 2);

        let (g, _) = Multigraph::cycle(2).contract(&[0]).unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));

        let (g, map) = k4().contract(&[]).unwrap();
        assert_eq!(g, k4());
        assert_eq!(map, vec![0, 1, 2, 3]);

        assert_eq!(k4().contract(&[6]), Err(GraphError::UnknownEdge(6)));
    }

    #[test]
    fn plumbing_examples() {
        assert_eq!(Multigraph::cycle(2).degree(0), Ok(2));
        assert_eq!(k4().edge_cut(&[0, 1]).unwrap().value(), 4);
        let (tri, map) = k4().delete_vertex(3).unwrap();
        assert_eq!(tri.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(tri.m(), 3);
        assert_eq!(map[3], None);
        assert_eq!(k4().edge_cut(&[]), Err(GraphError::EmptyOrFullSide));
        assert_eq!(k4().edge_cut(&[0, 1, 2, 3]), Err(GraphError::EmptyOrFullSide));
        assert_eq!(k4().degree(4), Err(GraphError::UnknownVertex(4)));
        assert_eq!(k4().delete_edges(&[9]), Err(GraphError::UnknownEdge(9)));
        assert!(k4().is_connected());
        assert!(!Multigraph::empty(2).is_connected());
    }

    #[test]
    fn induced_and_identify() {
        let (h, back) = k4().induced(&[3, 1]).unwrap();
        assert_eq!(h.edges(), &[(1, 0)]);
        assert_eq!(back, vec![3, 1]);
        let (g, map) = Multigraph::cycle(3).identify_vertices(0, 1).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.m(), 2);
        assert_eq!(map, vec![0, 0, 1]);
    }
}
