//! Orientation decisions: β-orientations, Z3-connectivity, mod-m
//! orientations, extendability at a vertex, the Lovász–Thomassen–Wu–Zhang
//! conditions and strong Z_m-connectivity.
//!
//! Edge directions are reported relative to the stored endpoint order: an
//! edge `(u, v)` is forward when oriented `u -> v`.

mod ltwz;
pub(crate) mod solver;
pub(crate) mod universal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Multigraph};

pub use ltwz::{ltwz_conditions, LtwzVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientError {
    #[error("orientation covers {got} edges, graph has {expected}")]
    IncompleteOrientation { expected: usize, got: usize },
    #[error("arc {index} ({tail}, {head}) does not match the edge's endpoints")]
    ArcMismatch { index: usize, tail: usize, head: usize },
    #[error("boundary values sum to {sum}, not 0 mod {modulus}")]
    NotZeroSum { sum: u64, modulus: u32 },
    #[error("boundary function has {got} values, graph has {expected} vertices")]
    WrongLength { expected: usize, got: usize },
    #[error("pre-orientation at {z0} does not match beta: {reason}")]
    PreOrientationMismatch { z0: usize, reason: String },
    #[error("modulus {0} must be odd and at least 3")]
    BadModulus(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_modulus(m: u32) -> Result<(), OrientError> {
    if m < 3 || m.is_multiple_of(2) || m > 31 {
        return Err(OrientError::BadModulus(m));
    }
    Ok(())
}

/// A direction for every edge, aligned to edge-ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    /// `(tail, head)` per edge-id.
    pub edges: Vec<(usize, usize)>,
}

impl Orientation {
    /// From per-edge flags, `true` meaning the stored order `u -> v`.
    pub fn from_forward(g: &Multigraph, forward: &[bool]) -> Self {
        let edges = g
            .edges()
            .iter()
            .zip(forward)
            .map(|(&(u, v), &f)| if f { (u, v) } else { (v, u) })
            .collect();
        Self { edges }
    }

    pub fn validate(&self, g: &Multigraph) -> Result<(), OrientError> {
        if self.edges.len() != g.m() {
            return Err(OrientError::IncompleteOrientation { expected: g.m(), got: self.edges.len() });
        }
        for (index, (&(t, h), &(u, v))) in self.edges.iter().zip(g.edges()).enumerate() {
            if !((t, h) == (u, v) || (t, h) == (v, u)) {
                return Err(OrientError::ArcMismatch { index, tail: t, head: h });
            }
        }
        Ok(())
    }

    /// `{"edges": [[tail, head], ...]}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({ "edges": self.edges.iter().map(|&(t, h)| [t, h]).collect::<Vec<_>>() })
    }
}

/// A zero-sum map `V -> Z_m`, stored as residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryFunction {
    modulus: u32,
    values: Vec<u32>,
}

impl BoundaryFunction {
    /// Reduces `values` modulo `modulus` and checks the zero sum.
    pub fn new(modulus: u32, values: &[i64]) -> Result<Self, OrientError> {
        check_modulus(modulus)?;
        let values: Vec<u32> = values.iter().map(|&x| x.rem_euclid(i64::from(modulus)) as u32).collect();
        let sum: u64 = values.iter().map(|&x| u64::from(x)).sum();
        if !sum.is_multiple_of(u64::from(modulus)) {
            return Err(OrientError::NotZeroSum { sum, modulus });
        }
        Ok(Self { modulus, values })
    }

    pub fn zero(modulus: u32, n: usize) -> Self {
        Self { modulus, values: vec![0; n] }
    }

    pub(crate) fn from_residues(modulus: u32, values: Vec<u32>) -> Self {
        debug_assert_eq!(values.iter().map(|&x| u64::from(x)).sum::<u64>() % u64::from(modulus), 0);
        Self { modulus, values }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Residue sum over a vertex set.
    pub fn sum_over(&self, set: &[usize]) -> u32 {
        set.iter().map(|&v| self.values[v]).sum::<u32>() % self.modulus
    }

    /// Whether `orientation`'s boundary agrees with this function mod m.
    pub fn is_realised_by(&self, g: &Multigraph, orientation: &Orientation) -> bool {
        let Ok(b) = boundary(g, orientation) else {
            return false;
        };
        b.len() == self.values.len()
            && b.iter()
                .zip(&self.values)
                .all(|(&x, &y)| x.rem_euclid(i64::from(self.modulus)) as u32 == y)
    }
}

/// Directions for the edges at `z0`; `true` means the edge leaves `z0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PreOrientation {
    pub z0: usize,
    pub outgoing: Vec<(usize, bool)>,
}

impl PreOrientation {
    /// The pre-orientation whose `i`-th edge at `z0` (in edge-id order)
    /// leaves `z0` iff bit `i` of `mask` is set.
    pub fn from_mask(g: &Multigraph, z0: usize, mask: u64) -> Result<Self, OrientError> {
        let outgoing = g
            .incident_edges(z0)?
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, mask >> i & 1 == 1))
            .collect();
        Ok(Self { z0, outgoing })
    }

    /// Out-degree minus in-degree at `z0`.
    pub fn net_flow(&self) -> i64 {
        self.outgoing.iter().map(|&(_, out)| if out { 1 } else { -1 }).sum()
    }

    fn validate(&self, g: &Multigraph) -> Result<(), OrientError> {
        let mut ids: Vec<usize> = self.outgoing.iter().map(|&(e, _)| e).collect();
        ids.sort_unstable();
        if ids != g.incident_edges(self.z0)? {
            return Err(OrientError::PreOrientationMismatch {
                z0: self.z0,
                reason: "does not cover exactly the edges at z0".into(),
            });
        }
        Ok(())
    }

    /// Per-edge fixed directions relative to stored endpoint order.
    pub(crate) fn fixed(&self, g: &Multigraph) -> Vec<Option<bool>> {
        let mut fixed = vec![None; g.m()];
        for &(e, out) in &self.outgoing {
            let (u, _) = g.edges()[e];
            fixed[e] = Some((u == self.z0) == out);
        }
        fixed
    }
}

/// Integer boundary `d+(v) - d-(v)` of an orientation.
pub fn boundary(g: &Multigraph, orientation: &Orientation) -> Result<Vec<i64>, OrientError> {
    orientation.validate(g)?;
    let mut b = vec![0i64; g.n()];
    for &(t, h) in &orientation.edges {
        b[t] += 1;
        b[h] -= 1;
    }
    Ok(b)
}

/// `|τ|` for a set with `β(A) = beta_a` and `d(A) = d_a`: the `t` in
/// `{0, ±1, ±2, ±3}` with `t ≡ β(A) (mod 3)` and `t ≡ d(A) (mod 2)`.
pub fn tau_abs(beta_a: u32, d_a: usize) -> u32 {
    let even = d_a.is_multiple_of(2);
    match (beta_a % 3, even) {
        (0, true) => 0,
        (0, false) => 3,
        (_, true) => 2,
        (_, false) => 1,
    }
}

fn check_beta(g: &Multigraph, beta: &BoundaryFunction) -> Result<(), OrientError> {
    if beta.values.len() != g.n() {
        return Err(OrientError::WrongLength { expected: g.n(), got: beta.values.len() });
    }
    Ok(())
}

/// An orientation with boundary `β` (mod β's modulus) that agrees with
/// `fixed` at its vertex, or `None` when none exists.
pub fn find_beta_orientation(
    g: &Multigraph,
    beta: &BoundaryFunction,
    fixed: Option<&PreOrientation>,
) -> Result<Option<Orientation>, OrientError> {
    check_beta(g, beta)?;
    let m = beta.modulus;
    let fixed_dirs = match fixed {
        Some(pre) => {
            pre.validate(g)?;
            let net = pre.net_flow().rem_euclid(i64::from(m)) as u32;
            if net != beta.values[pre.z0] {
                return Err(OrientError::PreOrientationMismatch {
                    z0: pre.z0,
                    reason: format!("net flow {} is not {} mod {m}", pre.net_flow(), beta.values[pre.z0]),
                });
            }
            pre.fixed(g)
        }
        None => vec![None; g.m()],
    };
    let plan = solver::plan(g);
    Ok(solver::solve(&plan, m, &beta.values, &fixed_dirs).map(|dirs| {
        let d = Orientation::from_forward(g, &dirs);
        debug_assert!(beta.is_realised_by(g, &d));
        d
    }))
}

/// Outcome of a for-every-boundary decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connectivity {
    Connected,
    /// The lexicographically first zero-sum boundary with no orientation.
    NotConnected { witness: BoundaryFunction },
}

impl Connectivity {
    pub fn is_connected(&self) -> bool {
        matches!(self, Connectivity::Connected)
    }

    pub fn witness(&self) -> Option<&BoundaryFunction> {
        match self {
            Connectivity::Connected => None,
            Connectivity::NotConnected { witness } => Some(witness),
        }
    }
}

fn group_connectivity(g: &Multigraph, m: u32) -> Connectivity {
    match universal::first_failure(g, m, &vec![None; g.m()]) {
        None => Connectivity::Connected,
        Some(values) => Connectivity::NotConnected { witness: BoundaryFunction::from_residues(m, values) },
    }
}

/// Whether every zero-sum `β: V -> Z_3` has a β-orientation.
pub fn is_z3_connected(g: &Multigraph) -> Connectivity {
    group_connectivity(g, 3)
}

/// The verdict of [`is_z3_connected`] without the witness search.
pub fn z3_connected(g: &Multigraph) -> bool {
    universal::all_realised(g, 3, &vec![None; g.m()])
}

/// Whether every zero-sum `b: V -> Z_m` is the boundary of an orientation.
pub fn is_strongly_zm_connected(g: &Multigraph, m: u32) -> Result<Connectivity, OrientError> {
    check_modulus(m)?;
    Ok(group_connectivity(g, m))
}

/// An orientation with every boundary divisible by `m`.
pub fn has_mod_orientation(g: &Multigraph, m: u32) -> Result<Option<Orientation>, OrientError> {
    check_modulus(m)?;
    find_beta_orientation(g, &BoundaryFunction::zero(m, g.n()), None)
}

/// Whether every compatible pre-orientation at `z0` extends to a
/// β-orientation for every zero-sum β; equivalently `G - z0` is
/// Z3-connected.
pub fn is_extendable_at(g: &Multigraph, z0: usize) -> Result<bool, OrientError> {
    let (rest, _) = g.delete_vertex(z0)?;
    Ok(z3_connected(&rest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::jaeger_graph;
    use crate::oracle;
    use proptest::prelude::*;

    fn triangle() -> Multigraph {
        Multigraph::complete(3)
    }

    fn beta3(values: &[i64]) -> BoundaryFunction {
        BoundaryFunction::new(3, values).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let t = triangle();
        let cyc = Orientation { edges: vec![(0, 1), (2, 0), (1, 2)] };
        assert_eq!(boundary(&t, &cyc).unwrap(), vec![0, 0, 0]);
        let c2 = Multigraph::cycle(2);
        let fwd = Orientation { edges: vec![(0, 1), (0, 1)] };
        assert_eq!(boundary(&c2, &fwd).unwrap(), vec![2, -2]);
        let k4 = Multigraph::complete(4);
        for mask in 0u32..64 {
            let dirs: Vec<bool> = (0..6).map(|i| mask >> i & 1 == 1).collect();
            let b = boundary(&k4, &Orientation::from_forward(&k4, &dirs)).unwrap();
            assert!(b.iter().all(|x| [-3, -1, 1, 3].contains(x)));
        }
        assert!(matches!(
            boundary(&t, &Orientation { edges: vec![(0, 1)] }),
            Err(OrientError::IncompleteOrientation { .. })
        ));
    }

    #[test]
    fn tau_table() {
        assert_eq!(tau_abs(0, 4), 0);
        assert_eq!(tau_abs(0, 7), 3);
        assert_eq!(tau_abs(1, 2), 2);
        assert_eq!(tau_abs(1, 5), 1);
        assert_eq!(tau_abs(2, 0), 2);
        assert_eq!(tau_abs(2, 3), 1);
        // Against the two congruences directly.
        for b in 0..3u32 {
            for d in 0..12usize {
                let t = (-3i64..=3)
                    .filter(|t| t.rem_euclid(3) as u32 == b && t.rem_euclid(2) as usize == d % 2)
                    .map(i64::abs)
                    .min()
                    .unwrap();
                assert_eq!(i64::from(tau_abs(b, d)), t);
            }
        }
    }

    #[test]
    fn beta_orientation_examples() {
        let c2 = Multigraph::cycle(2);
        let d = find_beta_orientation(&c2, &beta3(&[1, 2]), None).unwrap().unwrap();
        assert_eq!(d.edges, vec![(1, 0), (1, 0)]);
        assert_eq!(find_beta_orientation(&Multigraph::complete(4), &beta3(&[0; 4]), None).unwrap(), None);
        assert_eq!(find_beta_orientation(&triangle(), &beta3(&[1, 1, 1]), None).unwrap(), None);
        assert!(matches!(BoundaryFunction::new(3, &[1, 0]), Err(OrientError::NotZeroSum { .. })));
    }

    #[test]
    fn pre_orientation_mismatch() {
        let c2 = Multigraph::cycle(2);
        let pre = PreOrientation::from_mask(&c2, 0, 0b11).unwrap();
        assert_eq!(pre.net_flow(), 2);
        assert!(matches!(
            find_beta_orientation(&c2, &beta3(&[0, 0]), Some(&pre)),
            Err(OrientError::PreOrientationMismatch { .. })
        ));
        let d = find_beta_orientation(&c2, &beta3(&[2, 1]), Some(&pre)).unwrap().unwrap();
        assert_eq!(d.edges, vec![(0, 1), (0, 1)]);
    }

    #[test]
    fn z3_connectivity_examples() {
        assert!(is_z3_connected(&Multigraph::cycle(2)).is_connected());
        assert_eq!(is_z3_connected(&Multigraph::complete(4)).witness(), Some(&BoundaryFunction::zero(3, 4)));
        assert_eq!(
            is_z3_connected(&Multigraph::new(2, vec![(0, 1)]).unwrap()).witness(),
            Some(&BoundaryFunction::zero(3, 2))
        );
        assert_eq!(is_z3_connected(&triangle()).witness().unwrap().values(), &[1, 1, 1]);
        assert!(is_z3_connected(&Multigraph::empty(1)).is_connected());
        assert!(!is_z3_connected(&Multigraph::empty(2)).is_connected());
        let j = jaeger_graph();
        let w = is_z3_connected(&j);
        let beta = w.witness().expect("J is not Z3-connected");
        assert_eq!(find_beta_orientation(&j, beta, None).unwrap(), None);
    }

    #[test]
    fn triangle_reaches_everything_but_constants() {
        // Degree-2 boundaries are 0 or ±2: the directed cycle gives 0 and a
        // source/sink pair gives a permutation of (2, 0, -2).
        let t = triangle();
        assert!(find_beta_orientation(&t, &beta3(&[0, 1, 2]), None).unwrap().is_some());
        assert_eq!(find_beta_orientation(&t, &beta3(&[2, 2, 2]), None).unwrap(), None);
    }

    #[test]
    fn mod_orientation_examples() {
        let d = has_mod_orientation(&triangle(), 3).unwrap().unwrap();
        assert!(boundary(&triangle(), &d).unwrap().iter().all(|&b| b == 0));
        assert_eq!(has_mod_orientation(&Multigraph::complete(4), 3).unwrap(), None);
        let d = has_mod_orientation(&Multigraph::cycle(2), 3).unwrap().unwrap();
        assert_eq!(boundary(&Multigraph::cycle(2), &d).unwrap(), vec![0, 0]);
        assert_eq!(has_mod_orientation(&triangle(), 4), Err(OrientError::BadModulus(4)));
        assert_eq!(has_mod_orientation(&triangle(), 1), Err(OrientError::BadModulus(1)));
    }

    #[test]
    fn extendability_examples() {
        let g = Multigraph::new(3, vec![(1, 2), (1, 2), (0, 1)]).unwrap();
        assert_eq!(is_extendable_at(&g, 0), Ok(true));
        assert!(oracle::extendable_by_enumeration(&g, 0));
        assert_eq!(is_extendable_at(&triangle(), 1), Ok(false));
        let mut edges = Multigraph::complete(4).edges().to_vec();
        for v in 0..4 {
            edges.extend([(4, v), (4, v)]);
        }
        let apex = Multigraph::new(5, edges).unwrap();
        assert_eq!(is_extendable_at(&apex, 4), Ok(false));
        assert!(is_extendable_at(&triangle(), 5).is_err());
    }

    #[test]
    fn strong_connectivity_examples() {
        for g in [Multigraph::cycle(2), Multigraph::complete(4), triangle()] {
            assert_eq!(is_strongly_zm_connected(&g, 3).unwrap(), is_z3_connected(&g));
        }
        let w = is_strongly_zm_connected(&Multigraph::cycle(2), 5).unwrap();
        assert_eq!(w.witness().unwrap().values(), &[1, 4]);
        assert_eq!(is_strongly_zm_connected(&triangle(), 6), Err(OrientError::BadModulus(6)));
    }

    fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Multigraph> {
        (1usize..=max_n).prop_flat_map(move |n| {
            prop::collection::vec((0..n, 0..n), 0..=max_m).prop_map(move |pairs| {
                Multigraph::new(n, pairs.into_iter().filter(|(u, v)| u != v).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn boundary_parity(g in arb_graph(6, 10), mask in any::<u64>()) {
            let dirs: Vec<bool> = (0..g.m()).map(|i| mask >> i & 1 == 1).collect();
            let b = boundary(&g, &Orientation::from_forward(&g, &dirs)).unwrap();
            for v in 0..g.n() {
                prop_assert_eq!(b[v].rem_euclid(2) as usize, g.degree(v).unwrap() % 2);
            }
        }

        #[test]
        fn dp_matches_cycle_space(g in arb_graph(6, 9), seed in any::<u64>()) {
            let beta = oracle::seeded_zero_sum(g.n(), 3, seed);
            let dp = find_beta_orientation(&g, &beta, None).unwrap();
            prop_assert_eq!(dp.is_some(), oracle::beta_orientation_by_cycle_space(&g, &beta));
            if let Some(d) = dp {
                prop_assert!(beta.is_realised_by(&g, &d));
            }
        }

        #[test]
        fn universal_matches_per_beta_loop(g in arb_graph(5, 8)) {
            prop_assert_eq!(is_z3_connected(&g), oracle::z3_by_beta_loop(&g));
        }

        #[test]
        fn mod5_implies_mod3(g in arb_graph(6, 12)) {
            if has_mod_orientation(&g, 5).unwrap().is_some() {
                prop_assert!(has_mod_orientation(&g, 3).unwrap().is_some());
            }
        }

        #[test]
        fn extendability_matches_enumeration(g in arb_graph(4, 6), z in 0usize..4) {
            prop_assume!(z < g.n() && g.n() >= 2);
            prop_assert_eq!(is_extendable_at(&g, z).unwrap(), oracle::extendable_by_enumeration(&g, z));
        }
    }
}
