//! Composite graphs: 2-sums, the Jaeger graph `J`, Kochol's composite
//! `G(Γ)`, the gadget `H(w₃¹, w₃²)`, `G*` and subdivide-and-identify.
//!
//! Vertex numbering is fixed so constructions are reproducible: a 2-sum
//! keeps the first graph's ids and appends the second graph's non-anchor
//! vertices in increasing order; edges of `G₁ - e` come first, in order,
//! followed by the edges of `G₂`.

use thiserror::Error;

use crate::graph::{GraphError, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("2-sum anchors must be distinct vertices")]
    IdenticalAnchors,
    #[error("no edges {v}-{v1} and {v}-{v2} (as two distinct edges)")]
    MissingEdges { v: usize, v1: usize, v2: usize },
    #[error("anchor pairs must be distinct vertices of the graph")]
    MissingAnchors,
    #[error("subdivide-and-identify takes 1 to 3 distinct edges, got {0}")]
    TooManyEdges(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `G₁ ⊕_e G₂` with the new ids of `G₂`'s vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSum {
    pub graph: Multigraph,
    /// The identified vertices `u = u₁ = u₂` and `v = v₁ = v₂`.
    pub u: usize,
    pub v: usize,
    /// Old id in `G₂` -> id in the sum.
    pub g2_map: Vec<usize>,
}

/// Deletes `e = u₁v₁` (stored order) from `g1` and glues `g2` on by
/// identifying `u₁` with `u2` and `v₁` with `v2`.
pub fn two_sum(g1: &Multigraph, e: usize, g2: &Multigraph, u2: usize, v2: usize) -> Result<TwoSum, GadgetError> {
    let (u1, v1) = g1.edge(e).map_err(|_| GadgetError::UnknownEdge(e))?;
    for x in [u2, v2] {
        if x >= g2.n() {
            return Err(GadgetError::UnknownVertex(x));
        }
    }
    if u2 == v2 {
        return Err(GadgetError::IdenticalAnchors);
    }
    let mut g2_map = vec![0; g2.n()];
    let mut next = g1.n();
    for (x, slot) in g2_map.iter_mut().enumerate() {
        *slot = if x == u2 {
            u1
        } else if x == v2 {
            v1
        } else {
            next += 1;
            next - 1
        };
    }
    let mut edges: Vec<(usize, usize)> = g1
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, &p)| p)
        .collect();
    edges.extend(g2.edges().iter().map(|&(a, b)| (g2_map[a], g2_map[b])));
    let graph = Multigraph::new(next, edges)?;
    debug_assert_eq!(graph.n(), g1.n() + g2.n() - 2);
    debug_assert_eq!(graph.m(), g1.m() - 1 + g2.m());
    Ok(TwoSum { graph, u: u1, v: v1, g2_map })
}

/// First edge joining `a` and `b`, skipping the ids in `avoid`.
fn find_edge(g: &Multigraph, a: usize, b: usize, avoid: &[usize]) -> Option<usize> {
    g.edges()
        .iter()
        .enumerate()
        .find(|&(i, &(x, y))| ((x, y) == (a, b) || (x, y) == (b, a)) && !avoid.contains(&i))
        .map(|(i, _)| i)
}

/// The Jaeger graph: three `K₄` blocks on `{x1..x4}`, `{x5..x8}`,
/// `{x9..x12}` (ids 0..11) joined by `x2x5, x4x7, x6x10, x8x12, x3x11,
/// x1x9`. 4-regular with 24 edges.
pub fn jaeger_graph() -> Multigraph {
    let mut edges = Vec::with_capacity(24);
    for base in [0, 4, 8] {
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((base + a, base + b));
            }
        }
    }
    edges.extend([(1, 4), (3, 6), (5, 9), (7, 11), (2, 10), (0, 8)]);
    Multigraph::new(12, edges).expect("static edge list")
}

/// Output of [`kochol_composite`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KocholComposite {
    /// `J(v¹, v²)`.
    pub j: Multigraph,
    /// The distinguished vertices `v¹, v²` of `J`.
    pub j_anchors: (usize, usize),
    /// `G(Γ)`.
    pub g: Multigraph,
}

/// Which `K₄` edges the 2-sums of [`kochol_composite_with`] use. A 2-sum
/// along a stored edge `(a, b)` glues the first anchor onto `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KocholAnchors {
    /// `w₁w₂` and `w₃w₄`, the edges carrying `L₁` and `L₂` in `J`.
    pub block: [(usize, usize); 2],
    /// The edges carrying `J¹`, `J²`, `J³` in `G(Γ)`.
    pub composite: [(usize, usize); 3],
}

impl Default for KocholAnchors {
    fn default() -> Self {
        KocholAnchors { block: [(0, 1), (2, 3)], composite: [(0, 1), (1, 2), (2, 3)] }
    }
}

/// Kochol's composite for two distinct edges `vv₁`, `vv₂` of `Γ`.
///
/// With `L = Γ - {vv₁, vv₂}` and `K = K₄` on `w₁..w₄` (ids 0..3):
/// for `v₁ ≠ v₂`, `J = K ⊕_{w₁w₂} L₁(v₁¹, v₂¹) ⊕_{w₃w₄} L₂(v₁², v₂²)`; for
/// `v₁ = v₂`, `J` is two copies of `L` with `v₁¹` identified with `v₁²`.
/// Either way `G(Γ) = K ⊕_{w₁w₂} J¹ ⊕_{w₂w₃} J² ⊕_{w₃w₄} J³` with `J`'s
/// anchors `(v¹, v²)`, the two copies of `v`.
pub fn kochol_composite(gamma: &Multigraph, v: usize, v1: usize, v2: usize) -> Result<KocholComposite, GadgetError> {
    kochol_composite_with(gamma, v, v1, v2, &KocholAnchors::default())
}

/// [`kochol_composite`] with explicit `K₄` edges for the 2-sums.
pub fn kochol_composite_with(
    gamma: &Multigraph,
    v: usize,
    v1: usize,
    v2: usize,
    anchors: &KocholAnchors,
) -> Result<KocholComposite, GadgetError> {
    let missing = GadgetError::MissingEdges { v, v1, v2 };
    let e1 = find_edge(gamma, v, v1, &[]).ok_or(missing.clone())?;
    let e2 = find_edge(gamma, v, v2, &[e1]).ok_or(missing)?;
    let l = gamma.delete_edges(&[e1, e2])?;
    let k = Multigraph::complete(4);
    let k_edge = |g: &Multigraph, a: usize, b: usize| find_edge(g, a, b, &[]).ok_or(GadgetError::MissingAnchors);

    let (j, j_anchors) = if v1 != v2 {
        let [(a1, b1), (a2, b2)] = anchors.block;
        let first = two_sum(&k, k_edge(&k, a1, b1)?, &l, v1, v2)?;
        let second = two_sum(&first.graph, k_edge(&first.graph, a2, b2)?, &l, v1, v2)?;
        let a = first.g2_map[v];
        let b = second.g2_map[v];
        (second.graph, (a, b))
    } else {
        let both = l.disjoint_union(&l);
        let (j, map) = both.identify_vertices(v1, v1 + l.n())?;
        (j, (map[v], map[v + l.n()]))
    };

    let mut g = k.clone();
    for (a, b) in anchors.composite {
        let e = find_edge(&g, a, b, &[]).ok_or(GadgetError::MissingAnchors)?;
        g = two_sum(&g, e, &j, j_anchors.0, j_anchors.1)?.graph;
    }
    Ok(KocholComposite { j, j_anchors, g })
}

/// Output of [`h_gadget`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGadget {
    pub graph: Multigraph,
    /// `w₃¹` and `w₃²`, the two degree-2 vertices.
    pub w31: usize,
    pub w32: usize,
}

/// `H(w₃¹, w₃²) = K² ⊕_{w₁²w₂²} K(v₁, v₂)` with
/// `K(v₁, v₂) = K¹ ⊕_{w₁¹w₂¹} G(u₁, u₂)`, where `K¹`, `K²` are triangles.
pub fn h_gadget(g: &Multigraph, u: (usize, usize), v: (usize, usize)) -> Result<HGadget, GadgetError> {
    for x in [u.0, u.1, v.0, v.1] {
        if x >= g.n() {
            return Err(GadgetError::MissingAnchors);
        }
    }
    if u.0 == u.1 || v.0 == v.1 {
        return Err(GadgetError::MissingAnchors);
    }
    let triangle = Multigraph::complete(3);
    // Triangle edges are (0,1), (0,2), (1,2); w1 = 0, w2 = 1, w3 = 2.
    let k1 = two_sum(&triangle, 0, g, u.0, u.1)?;
    let (kv1, kv2) = (k1.g2_map[v.0], k1.g2_map[v.1]);
    let h = two_sum(&triangle, 0, &k1.graph, kv1, kv2)?;
    let gadget = HGadget { w31: h.g2_map[2], w32: 2, graph: h.graph };
    debug_assert_eq!(gadget.graph.n(), g.n() + 2);
    debug_assert_eq!(gadget.graph.m(), g.m() + 4);
    Ok(gadget)
}

/// `G*`: `J` with a copy of `H(w₃¹, w₃²)` 2-summed onto each of the edges
/// `x_{2i-1}x_{2i}`, `x_{2i-1}` identified with `w₃¹`.
pub fn g_star(g: &Multigraph, u: (usize, usize), v: (usize, usize)) -> Result<Multigraph, GadgetError> {
    let h = h_gadget(g, u, v)?;
    let mut out = jaeger_graph();
    for i in 0..6 {
        let e = find_edge(&out, 2 * i, 2 * i + 1, &[]).expect("J has every x_{2i-1}x_{2i}");
        debug_assert_eq!(out.edges()[e], (2 * i, 2 * i + 1));
        out = two_sum(&out, e, &h.graph, h.w31, h.w32)?.graph;
    }
    Ok(out)
}

/// Subdivides each edge of `e1` once and identifies the new vertices into
/// `z0 = n`. Edges of `G - E₁` keep their order; then for each `ab ∈ E₁`
/// come `a z0` and `z0 b`.
pub fn subdivide_identify(g: &Multigraph, e1: &[usize]) -> Result<(Multigraph, usize), GadgetError> {
    let mut ids = e1.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() || ids.len() > 3 || ids.len() != e1.len() {
        return Err(GadgetError::TooManyEdges(e1.len()));
    }
    for &e in e1 {
        g.edge(e).map_err(|_| GadgetError::UnknownEdge(e))?;
    }
    let z0 = g.n();
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !ids.contains(i))
        .map(|(_, &p)| p)
        .collect();
    for &e in e1 {
        let (a, b) = g.edges()[e];
        edges.extend([(a, z0), (z0, b)]);
    }
    Ok((Multigraph::new(z0 + 1, edges)?, z0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::edge_connectivity;
    use crate::orient::is_z3_connected;

    #[test]
    fn jaeger_shape() {
        let j = jaeger_graph();
        assert_eq!((j.n(), j.m()), (12, 24));
        assert!(j.degrees().iter().all(|&d| d == 4));
        assert!(j.is_simple());
        for i in 0..6 {
            assert_eq!(j.multiplicity(2 * i, 2 * i + 1), 1);
        }
    }

    #[test]
    fn two_sum_of_k4s() {
        let k4 = Multigraph::complete(4);
        let s = two_sum(&k4, 0, &k4, 0, 1).unwrap();
        assert_eq!((s.graph.n(), s.graph.m()), (6, 11));
        assert_eq!((s.u, s.v), (0, 1));
        assert_eq!(s.g2_map, vec![0, 1, 4, 5]);
        assert!(!is_z3_connected(&s.graph).is_connected());
        assert_eq!(two_sum(&k4, 0, &k4, 2, 2), Err(GadgetError::IdenticalAnchors));
        assert_eq!(two_sum(&k4, 6, &k4, 0, 1), Err(GadgetError::UnknownEdge(6)));
    }

    #[test]
    fn kochol_counts_distinct_neighbours() {
        let k4 = Multigraph::complete(4);
        let c = kochol_composite(&k4, 0, 1, 2).unwrap();
        let (n, m) = (4, 6);
        assert_eq!((c.j.n(), c.j.m()), (2 * n, 2 * m));
        assert_eq!((c.g.n(), c.g.m()), (6 * n - 2, 6 * m + 3));
    }

    #[test]
    fn kochol_counts_equal_neighbours() {
        let g = Multigraph::complete(4).with_edge(0, 1).unwrap();
        let c = kochol_composite(&g, 0, 1, 1).unwrap();
        let (n, m) = (4, 7);
        assert_eq!((c.j.n(), c.j.m()), (2 * n - 1, 2 * m - 4));
        assert_eq!((c.g.n(), c.g.m()), (6 * n - 5, 6 * m - 9));
        assert!(matches!(kochol_composite(&Multigraph::complete(4), 0, 1, 1), Err(GadgetError::MissingEdges { .. })));
    }

    #[test]
    fn kochol_keeps_five_edge_connectivity() {
        let k6 = Multigraph::complete(6);
        let c = kochol_composite(&k6, 0, 1, 2).unwrap();
        assert!(edge_connectivity(&c.g).unwrap().0 >= 5);
    }

    #[test]
    fn kochol_explicit_anchor_map() {
        let k4 = Multigraph::complete(4);
        let default = kochol_composite(&k4, 0, 1, 2).unwrap();
        assert_eq!(kochol_composite_with(&k4, 0, 1, 2, &KocholAnchors::default()).unwrap(), default);
        let swapped = KocholAnchors { block: [(2, 3), (0, 1)], composite: [(2, 3), (1, 2), (0, 1)] };
        let c = kochol_composite_with(&k4, 0, 1, 2, &swapped).unwrap();
        assert_eq!((c.g.n(), c.g.m()), (default.g.n(), default.g.m()));
        let bad = KocholAnchors { block: [(0, 0), (2, 3)], ..KocholAnchors::default() };
        assert_eq!(kochol_composite_with(&k4, 0, 1, 2, &bad), Err(GadgetError::MissingAnchors));
    }

    #[test]
    fn kochol_on_a_doubled_triangle_is_not_z3() {
        let gamma = Multigraph::new(3, vec![(0, 1), (0, 1), (0, 2), (0, 2), (1, 2)]).unwrap();
        let c = kochol_composite(&gamma, 0, 1, 2).unwrap();
        assert_eq!((c.g.n(), c.g.m()), (16, 33));
        assert!(!crate::orient::z3_connected(&c.g));
    }

    #[test]
    fn h_gadget_degrees() {
        let k4 = Multigraph::complete(4);
        let h = h_gadget(&k4, (0, 1), (2, 3)).unwrap();
        assert_eq!((h.graph.n(), h.graph.m()), (6, 10));
        assert_eq!(h.graph.degree(h.w31), Ok(2));
        assert_eq!(h.graph.degree(h.w32), Ok(2));
        assert_eq!(h_gadget(&k4, (0, 0), (2, 3)), Err(GadgetError::MissingAnchors));
        assert_eq!(h_gadget(&k4, (0, 1), (2, 9)), Err(GadgetError::MissingAnchors));
    }

    #[test]
    fn g_star_counts_and_degree() {
        let k4 = Multigraph::complete(4);
        let g = g_star(&k4, (0, 1), (2, 3)).unwrap();
        assert_eq!((g.n(), g.m()), (12 + 6 * 4, 42 + 6 * 6));
        for x in 0..12 {
            assert_eq!(g.degree(x), Ok(5));
        }
    }

    #[test]
    fn g_star_min_degree_five_from_k6() {
        let g = Multigraph::complete(6);
        let ids: Vec<usize> = (0..g.m()).filter(|&e| matches!(g.edge(e), Ok((0, 1)) | Ok((2, 3)))).collect();
        let host = g.delete_edges(&ids).unwrap();
        let star = g_star(&host, (0, 1), (2, 3)).unwrap();
        assert!(star.min_degree() >= Some(5));
    }

    #[test]
    fn g_star_from_k2_is_reduced() {
        let star = g_star(&Multigraph::complete(2), (0, 1), (0, 1)).unwrap();
        assert_eq!((star.n(), star.m()), (24, 48));
        assert!(crate::reduce::is_z3_reduced(&star).is_reduced());
    }

    #[test]
    fn subdivide_identify_on_k4() {
        let k4 = Multigraph::complete(4);
        let (g, z0) = subdivide_identify(&k4, &[0, 1, 2]).unwrap();
        assert_eq!((g.n(), g.m(), g.degree(z0).unwrap()), (5, 9, 6));
        let (rest, _) = g.delete_vertex(z0).unwrap();
        assert_eq!(rest, k4.delete_edges(&[0, 1, 2]).unwrap());
        assert_eq!(subdivide_identify(&k4, &[0, 1, 2, 3]), Err(GadgetError::TooManyEdges(4)));
        assert_eq!(subdivide_identify(&k4, &[9]), Err(GadgetError::UnknownEdge(9)));
    }

    #[test]
    fn subdivide_identify_keeps_six_edge_connectivity() {
        let k7 = Multigraph::complete(7);
        assert_eq!(edge_connectivity(&k7).unwrap().0, 6);
        let (g, _) = subdivide_identify(&k7, &[0, 7, 20]).unwrap();
        assert!(edge_connectivity(&g).unwrap().0 >= 6);
    }
}
