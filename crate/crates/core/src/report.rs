//! The `analyze` report: every invariant the library computes for one graph,
//! each with a certificate that can be replayed against the input.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::connectivity::{edge_connectivity, essential_edge_connectivity, EssentialConnectivity};
use crate::graph::{CutCertificate, Multigraph};
use crate::orient::{
    boundary, find_beta_orientation, has_mod_orientation, is_z3_connected, BoundaryFunction, Connectivity, Orientation,
};
use crate::reduce::{density_check, is_z3_reduced, z3_reduce, Reducedness};
use crate::treepack::{deficiency, tree_packing_number, ForestPacking, Partition};

/// Size caps for the exponential routines (Z3 decisions, reducedness).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_n: usize,
    pub max_m: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_n: 14, max_m: 30 }
    }
}

impl Budget {
    pub fn check(&self, g: &Multigraph) -> Result<(), ReportError> {
        if g.n() > self.max_n || g.m() > self.max_m {
            return Err(ReportError::BudgetExceeded { n: g.n(), m: g.m(), max_n: self.max_n, max_m: self.max_m });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("graph with n = {n}, m = {m} exceeds the budget n <= {max_n}, m <= {max_m}")]
    BudgetExceeded { n: usize, m: usize, max_n: usize, max_m: usize },
    #[error("certificate failed to replay: {0}")]
    Certificate(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CutReport {
    pub value: usize,
    pub side: Vec<usize>,
    pub cut_edges: Vec<usize>,
}

impl From<&CutCertificate> for CutReport {
    fn from(c: &CutCertificate) -> Self {
        CutReport { value: c.value(), side: c.side.clone(), cut_edges: c.cut_edges.clone() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeficiencyReport {
    pub k: usize,
    pub value: usize,
    pub partition: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub n: usize,
    pub m: usize,
    pub degrees: Value,
    pub edge_connectivity: Option<CutReport>,
    /// `null` below two vertices; `"infinite"` when no essential cut exists.
    pub essential_edge_connectivity: Value,
    pub tree_packing_number: Option<usize>,
    pub spanning_trees: Vec<Vec<usize>>,
    pub deficiency: Vec<DeficiencyReport>,
    pub z3_connected: bool,
    pub z3_witness: Option<Vec<u32>>,
    /// Contracted vertex sets, in input ids, when the graph is Z3-connected.
    pub reduction_trace: Option<Vec<Vec<usize>>>,
    pub reduced: bool,
    pub reduced_witness: Option<Vec<usize>>,
    /// `m <= 4n - 8`; `null` below three vertices.
    pub density_bound: Option<bool>,
    pub mod3_orientation: Option<Value>,
}

pub fn analyze(g: &Multigraph, ks: &[usize], budget: Budget) -> Result<Report, ReportError> {
    budget.check(g)?;
    let degrees = g.degrees();
    let degree_stats = json!({
        "min": degrees.iter().min(),
        "max": degrees.iter().max(),
        "sequence": degrees,
    });
    let kappa = edge_connectivity(g).ok();
    let essential = match essential_edge_connectivity(g) {
        Ok(EssentialConnectivity::Finite(cut)) => serde_json::to_value(CutReport::from(&cut)).expect("plain data"),
        Ok(EssentialConnectivity::Infinite) => json!("infinite"),
        Err(_) => Value::Null,
    };
    let trees = tree_packing_number(g).ok();
    let deficiencies: Vec<DeficiencyReport> = ks
        .iter()
        .filter_map(|&k| {
            deficiency(g, k).ok().map(|d| DeficiencyReport { k, value: d.value, partition: d.partition.parts })
        })
        .collect();
    let connectivity = is_z3_connected(g);
    let (z3_witness, reduction_trace) = match &connectivity {
        Connectivity::Connected => (None, Some(z3_reduce(g).trace)),
        Connectivity::NotConnected { witness } => (Some(witness.values().to_vec()), None),
    };
    let reducedness = is_z3_reduced(g);
    let mod3 = has_mod_orientation(g, 3).expect("3 is a valid modulus");
    let report = Report {
        n: g.n(),
        m: g.m(),
        degrees: degree_stats,
        edge_connectivity: kappa.as_ref().map(|(_, cut)| CutReport::from(cut)),
        essential_edge_connectivity: essential,
        tree_packing_number: trees.as_ref().map(|(t, _)| *t),
        spanning_trees: trees.map(|(_, p)| p.forests).unwrap_or_default(),
        deficiency: deficiencies,
        z3_connected: connectivity.is_connected(),
        z3_witness,
        reduction_trace,
        reduced: reducedness.is_reduced(),
        reduced_witness: match reducedness {
            Reducedness::Reduced => None,
            Reducedness::NotReduced { set } => Some(set),
        },
        density_bound: density_check(g).ok(),
        mod3_orientation: mod3.map(|o| o.to_json_value()),
    };
    replay(g, &report)?;
    Ok(report)
}

/// Re-validates every certificate in `report` against `g` using only
/// recounting (cuts by `edge_cut`, partitions by crossing edges,
/// orientations by `boundary`), plus one solver run for the Z3 witness.
pub fn replay(g: &Multigraph, report: &Report) -> Result<(), ReportError> {
    let fail = |what: &str| Err(ReportError::Certificate(what.to_string()));
    let cut_ok = |c: &CutReport| {
        let cert = CutCertificate { side: c.side.clone(), cut_edges: c.cut_edges.clone() };
        cert.verify(g) && cert.value() == c.value
    };
    if let Some(c) = &report.edge_connectivity {
        if !cut_ok(c) {
            return fail("edge connectivity cut");
        }
    }
    if report.essential_edge_connectivity.is_object() {
        let c: CutReport = serde_json::from_value(report.essential_edge_connectivity.clone())
            .map_err(|e| ReportError::Certificate(format!("essential cut: {e}")))?;
        if !cut_ok(&c) {
            return fail("essential cut");
        }
    }
    for d in &report.deficiency {
        let p = Partition { parts: d.partition.clone() };
        if !p.is_partition_of(g.n()) || p.deficiency_value(g, d.k) != d.value as i64 {
            return fail("deficiency partition");
        }
    }
    if let Some(t) = report.tree_packing_number {
        let packing = ForestPacking { forests: report.spanning_trees.clone() };
        if report.spanning_trees.len() != t || !packing.verify(g, true) {
            return fail("spanning tree packing");
        }
    }
    if let Some(w) = &report.z3_witness {
        let values: Vec<i64> = w.iter().map(|&x| i64::from(x)).collect();
        let beta = BoundaryFunction::new(3, &values).map_err(|e| ReportError::Certificate(format!("witness: {e}")))?;
        if find_beta_orientation(g, &beta, None).map_or(true, |o| o.is_some()) {
            return fail("Z3 witness");
        }
    }
    if let Some(o) = &report.mod3_orientation {
        let orientation: Orientation = serde_json::from_value(o.clone())
            .map_err(|e| ReportError::Certificate(format!("orientation: {e}")))?;
        match boundary(g, &orientation) {
            Ok(b) if b.iter().all(|x| x % 3 == 0) => {}
            _ => return fail("mod-3 orientation"),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::jaeger_graph;

    #[test]
    fn jaeger_report() {
        let r = analyze(&jaeger_graph(), &[4], Budget::default()).unwrap();
        assert_eq!(r.edge_connectivity.as_ref().unwrap().value, 4);
        assert_eq!(r.essential_edge_connectivity["value"], 4);
        assert_eq!(r.tree_packing_number, Some(2));
        assert_eq!(r.deficiency[0].value, 20);
        assert!(!r.z3_connected);
        assert!(r.z3_witness.is_some());
        assert!(r.reduced);
        assert_eq!(r.density_bound, Some(true));
    }

    #[test]
    fn small_reports() {
        let k4 = analyze(&Multigraph::complete(4), &[4], Budget::default()).unwrap();
        assert_eq!(k4.edge_connectivity.unwrap().value, 3);
        assert_eq!(k4.deficiency[0].value, 6);
        assert!(k4.mod3_orientation.is_none());
        let c2 = analyze(&Multigraph::cycle(2), &[2], Budget::default()).unwrap();
        assert!(c2.z3_connected);
        assert_eq!(c2.reduction_trace, Some(vec![vec![0, 1]]));
        assert_eq!(c2.essential_edge_connectivity, json!("infinite"));
        let single = analyze(&Multigraph::empty(1), &[4], Budget::default()).unwrap();
        assert!(single.edge_connectivity.is_none());
        assert!(single.z3_connected);
    }

    #[test]
    fn budget_guard() {
        let big = Budget { max_n: 3, max_m: 30 };
        assert!(matches!(
            analyze(&Multigraph::complete(4), &[4], big),
            Err(ReportError::BudgetExceeded { n: 4, .. })
        ));
    }
}
