//! Edge-connectivity, local edge-connectivity, essential edge-connectivity
//! and Mader splitting, all by unit-capacity max-flow.

use rayon::prelude::*;
use thiserror::Error;

use crate::flow::min_cut_between;
use crate::graph::{CutCertificate, GraphError, Multigraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectivityError {
    #[error("graph needs at least two vertices")]
    TooSmall,
    #[error("local edge-connectivity needs two distinct vertices")]
    SameVertex,
    #[error("splitting precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no connectivity-preserving split pair at vertex {0}; this contradicts Mader's splitting theorem and indicates a bug")]
    NoPairFound(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Puts a cut side into the normal form used for tie-breaking: the side
/// containing vertex 0.
fn normalize_side(n: usize, side: Vec<usize>) -> Vec<usize> {
    if side.first() == Some(&0) {
        side
    } else {
        let mut inside = vec![false; n];
        for v in side {
            inside[v] = true;
        }
        (0..n).filter(|&v| !inside[v]).collect()
    }
}

/// `κ'(G)` with a minimum cut. A disconnected graph has value 0 and the
/// component of vertex 0 as the side.
pub fn edge_connectivity(g: &Multigraph) -> Result<(usize, CutCertificate), ConnectivityError> {
    if g.n() < 2 {
        return Err(ConnectivityError::TooSmall);
    }
    if !g.is_connected() {
        let comp = g.components().swap_remove(0);
        return Ok((0, g.edge_cut(&comp)?));
    }
    let best = (1..g.n())
        .into_par_iter()
        .map(|v| {
            let (value, side) = min_cut_between(g, &[0], &[v]);
            (value, side)
        })
        .min()
        .expect("at least one sink");
    let cut = g.edge_cut(&best.1)?;
    debug_assert_eq!(cut.value(), best.0);
    Ok((best.0, cut))
}

/// `λ_G(x, y)`: the maximum number of edge-disjoint x–y paths.
pub fn local_edge_connectivity(g: &Multigraph, x: usize, y: usize) -> Result<usize, ConnectivityError> {
    g.degree(x)?;
    g.degree(y)?;
    if x == y {
        return Err(ConnectivityError::SameVertex);
    }
    Ok(min_cut_between(g, &[x], &[y]).0)
}

/// Result of the essential edge-connectivity computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EssentialConnectivity {
    Finite(CutCertificate),
    /// No edge cut leaves two components that both contain an edge.
    Infinite,
}

impl EssentialConnectivity {
    pub fn value(&self) -> Option<usize> {
        match self {
            Self::Finite(c) => Some(c.value()),
            Self::Infinite => None,
        }
    }

    pub fn at_least(&self, k: usize) -> bool {
        self.value().is_none_or(|v| v >= k)
    }
}

/// Minimum size of an essential edge cut.
///
/// A minimal essential cut leaves an edge on each side, so it is the minimum
/// over pairs of vertex-disjoint edges `e`, `f` of the cut separating the
/// ends of `e` from the ends of `f`. Components count as nontrivial when they
/// contain an edge.
pub fn essential_edge_connectivity(g: &Multigraph) -> Result<EssentialConnectivity, ConnectivityError> {
    if g.n() < 2 {
        return Err(ConnectivityError::TooSmall);
    }
    let edges = g.edges();
    let pairs: Vec<(usize, usize)> = (0..edges.len())
        .flat_map(|i| (i + 1..edges.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            a != c && a != d && b != c && b != d
        })
        .collect();
    let best = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            let (value, side) = min_cut_between(g, &[a, b], &[c, d]);
            (value, normalize_side(g.n(), side))
        })
        .min();
    Ok(match best {
        None => EssentialConnectivity::Infinite,
        Some((value, side)) => {
            let cut = g.edge_cut(&side)?;
            debug_assert_eq!(cut.value(), value);
            EssentialConnectivity::Finite(cut)
        }
    })
}

pub fn is_essentially_k_edge_connected(g: &Multigraph, k: usize) -> Result<bool, ConnectivityError> {
    Ok(essential_edge_connectivity(g)?.at_least(k))
}

/// A split at `z`: edges `e1 = v1 z` and `e2 = v2 z` are replaced by `v1 v2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaderSplit {
    pub e1: usize,
    pub e2: usize,
    pub v1: usize,
    pub v2: usize,
    /// `G - v1z - v2z + v1v2`; the new edge is the last edge.
    pub graph: Multigraph,
}

/// Table of `λ(x, y)` for all `x < y`, skipping `skip`.
pub fn local_connectivity_table(g: &Multigraph, skip: Option<usize>) -> Vec<((usize, usize), usize)> {
    let n = g.n();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .filter(|&(x, y)| Some(x) != skip && Some(y) != skip)
        .collect();
    pairs
        .into_par_iter()
        .map(|(x, y)| ((x, y), min_cut_between(g, &[x], &[y]).0))
        .collect()
}

/// `G - v1z - v2z + v1v2` for two edges at `z`.
pub fn split_off(g: &Multigraph, z: usize, e1: usize, e2: usize) -> Result<(Multigraph, usize, usize), ConnectivityError> {
    let other = |e: usize| -> Result<usize, ConnectivityError> {
        let (a, b) = g.edge(e)?;
        match (a == z, b == z) {
            (true, _) => Ok(b),
            (_, true) => Ok(a),
            _ => Err(ConnectivityError::PreconditionViolated(format!("edge {e} is not incident with {z}"))),
        }
    };
    let (v1, v2) = (other(e1)?, other(e2)?);
    if v1 == v2 || e1 == e2 {
        return Err(ConnectivityError::PreconditionViolated(
            "split edges must lead to distinct neighbours".into(),
        ));
    }
    let reduced = g.delete_edges(&[e1, e2])?;
    Ok((reduced.with_edge(v1, v2)?, v1, v2))
}

/// Finds two edges at `z` whose splitting preserves `λ(x, y)` for all
/// `x, y ≠ z`. Candidate pairs are tried in lexicographic edge-id order and
/// each is verified by recomputing every local connectivity.
pub fn mader_split(g: &Multigraph, z: usize) -> Result<MaderSplit, ConnectivityError> {
    let deg = g.degree(z)?;
    if deg < 4 {
        return Err(ConnectivityError::PreconditionViolated(format!("degree of {z} is {deg} < 4")));
    }
    let (minus_z, _) = g.delete_vertex(z)?;
    if minus_z.component_labels().1 > g.component_labels().1 {
        return Err(ConnectivityError::PreconditionViolated(format!("{z} is a separating vertex")));
    }
    if g.neighbors(z)?.len() < 2 {
        return Err(ConnectivityError::PreconditionViolated(format!("{z} has a single neighbour")));
    }
    let before = local_connectivity_table(g, Some(z));
    let incident = g.incident_edges(z)?;
    let mut tried = std::collections::BTreeSet::new();
    for (i, &e1) in incident.iter().enumerate() {
        for &e2 in &incident[i + 1..] {
            let Ok((split, v1, v2)) = split_off(g, z, e1, e2) else {
                continue;
            };
            // Parallel edges give identical splits.
            if !tried.insert((v1.min(v2), v1.max(v2))) {
                continue;
            }
            if local_connectivity_table(&split, Some(z)) == before {
                return Ok(MaderSplit { e1, e2, v1, v2, graph: split });
            }
        }
    }
    Err(ConnectivityError::NoPairFound(z))
}
