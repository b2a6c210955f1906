//! The hypotheses of the Lovász–Thomassen–Wu–Zhang extension theorem.

use serde::{Deserialize, Serialize};

use super::{tau_abs, BoundaryFunction, OrientError, PreOrientation};
use crate::graph::Multigraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LtwzVerdict {
    Holds,
    /// Condition (i): fewer than three vertices.
    TooFewVertices,
    /// Condition (ii) at `z0`.
    FailsAtRoot { degree: usize, tau: u32, net_flow_matches: bool },
    /// Condition (iii): `d(A) < 4 + |τ(A)|`.
    FailsAt { set: Vec<usize>, cut: usize, tau: u32 },
}

impl LtwzVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LtwzVerdict::Holds)
    }
}

/// Checks conditions (i)–(iii). Condition (iii) enumerates every nonempty
/// `A ⊆ V - z0` leaving at least two vertices outside, in increasing bitmask
/// order over `V - z0`, and reports the first violation.
pub fn ltwz_conditions(
    g: &Multigraph,
    z0: usize,
    beta: &BoundaryFunction,
    pre: &PreOrientation,
) -> Result<LtwzVerdict, OrientError> {
    g.degree(z0)?;
    if beta.modulus() != 3 {
        return Err(OrientError::BadModulus(beta.modulus()));
    }
    if beta.values().len() != g.n() {
        return Err(OrientError::WrongLength { expected: g.n(), got: beta.values().len() });
    }
    if pre.z0 != z0 {
        return Err(OrientError::PreOrientationMismatch { z0, reason: format!("pre-orientation is at {}", pre.z0) });
    }
    pre.validate(g)?;
    let n = g.n();
    if n < 3 {
        return Ok(LtwzVerdict::TooFewVertices);
    }
    let degree = g.degree(z0)?;
    let tau = tau_abs(beta.values()[z0], degree);
    let net_flow_matches = pre.net_flow().rem_euclid(3) as u32 == beta.values()[z0];
    if degree > 4 + tau as usize || !net_flow_matches {
        return Ok(LtwzVerdict::FailsAtRoot { degree, tau, net_flow_matches });
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != z0).collect();
    assert!(others.len() < 63, "subset enumeration needs fewer than 64 vertices");
    let mut inside = vec![false; n];
    for mask in 1u64..(1 << others.len()) {
        let size = mask.count_ones() as usize;
        if n - size < 2 {
            continue;
        }
        for (i, &v) in others.iter().enumerate() {
            inside[v] = mask >> i & 1 == 1;
        }
        let cut = g.edges().iter().filter(|&&(u, v)| inside[u] != inside[v]).count();
        let set: Vec<usize> = others.iter().copied().filter(|&v| inside[v]).collect();
        let t = tau_abs(beta.sum_over(&set), cut);
        if cut < 4 + t as usize {
            return Ok(LtwzVerdict::FailsAt { set, cut, tau: t });
        }
    }
    Ok(LtwzVerdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::super::find_beta_orientation;
    use super::*;

    #[test]
    fn two_vertices_fail_condition_one() {
        let g = Multigraph::cycle(2);
        let beta = BoundaryFunction::new(3, &[2, 1]).unwrap();
        let pre = PreOrientation::from_mask(&g, 0, 0b11).unwrap();
        assert_eq!(ltwz_conditions(&g, 0, &beta, &pre), Ok(LtwzVerdict::TooFewVertices));
    }

    #[test]
    fn seven_edge_root_on_six_edge_connected_graph() {
        // K7 plus a parallel edge at vertex 0: 6-edge-connected, d(0) = 7.
        // With β(0) = 0, |τ(0)| = 3 and five outgoing, two incoming edges
        // give net flow 3 ≡ 0.
        let g = Multigraph::complete(7).with_edge(0, 1).unwrap();
        let beta = BoundaryFunction::new(3, &[0, 1, 2, 0, 1, 2, 0]).unwrap();
        let pre = PreOrientation::from_mask(&g, 0, 0b0011111).unwrap();
        assert_eq!(pre.net_flow(), 3);
        assert_eq!(ltwz_conditions(&g, 0, &beta, &pre), Ok(LtwzVerdict::Holds));
        assert!(find_beta_orientation(&g, &beta, Some(&pre)).unwrap().is_some());
    }

    #[test]
    fn small_cut_is_reported() {
        // Two K5's joined by three edges; A is the far K5.
        let mut edges = Multigraph::complete(5).edges().to_vec();
        edges.extend(Multigraph::complete(5).edges().iter().map(|&(u, v)| (u + 5, v + 5)));
        edges.extend([(1, 5), (2, 6), (3, 7)]);
        let g = Multigraph::new(10, edges).unwrap();
        let beta = BoundaryFunction::zero(3, 10);
        // d(0) = 4, β(0) = 0 gives |τ| = 0; two out, two in.
        let pre = PreOrientation::from_mask(&g, 0, 0b0011).unwrap();
        match ltwz_conditions(&g, 0, &beta, &pre).unwrap() {
            LtwzVerdict::FailsAt { cut, .. } => assert!(cut < 4 + 3),
            other => panic!("expected a violating set, got {other:?}"),
        }
        let far: Vec<usize> = (5..10).collect();
        assert_eq!(g.edge_cut(&far).unwrap().value(), 3);
    }
}
