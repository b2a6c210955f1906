//! Frontier dynamic programming over a vertex elimination order.
//!
//! Vertices are introduced one at a time; an edge is processed when its
//! second endpoint is introduced, and a vertex retires once all its edges
//! are processed. The state is the vector of partial boundary residues of
//! the frontier (introduced, not yet retired) vertices, packed base `m` with
//! frontier position `i` as digit `i`.

use std::collections::HashMap;

use crate::graph::Multigraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    /// Appends the vertex at the top frontier position.
    Introduce(usize),
    /// Edge id with the frontier positions of its stored endpoints.
    Edge { e: usize, pu: usize, pv: usize },
    /// Removes the vertex at frontier position `pos`.
    Retire { v: usize, pos: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct Plan {
    pub steps: Vec<Step>,
    pub width: usize,
    /// Sum of frontier sizes over introductions; a tie-break between plans.
    pub volume: usize,
}

/// Greedy order from one start vertex: repeatedly introduce the vertex that
/// leaves the smallest frontier, then the one closing most edges, then the
/// smallest id.
fn greedy_order(adj: &[Vec<(usize, usize)>], start: usize) -> Vec<usize> {
    let n = adj.len();
    let mut introduced = vec![false; n];
    let mut active = vec![false; n];
    // Edges of v towards vertices not yet introduced.
    let mut open: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut order = Vec::with_capacity(n);
    let mut next = Some(start);
    while let Some(w) = next {
        introduced[w] = true;
        active[w] = true;
        order.push(w);
        for &(x, _) in &adj[w] {
            if introduced[x] {
                open[x] -= 1;
                open[w] -= 1;
            }
        }
        for &(x, _) in &adj[w] {
            if open[x] == 0 {
                active[x] = false;
            }
        }
        if open[w] == 0 {
            active[w] = false;
        }
        let frontier = active.iter().filter(|&&a| a).count();
        let mut best = None;
        for x in (0..n).filter(|&x| !introduced[x]) {
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for &(y, _) in &adj[x] {
                if introduced[y] {
                    *counts.entry(y).or_default() += 1;
                }
            }
            let to_in: usize = counts.values().sum();
            let freed = counts.iter().filter(|&(&y, &c)| active[y] && open[y] == c).count();
            let after = frontier + usize::from(adj[x].len() > to_in) - freed;
            let key = (after, usize::MAX - to_in, x);
            if best.is_none_or(|(b, _)| key < b) {
                best = Some((key, x));
            }
        }
        next = best.map(|(_, x)| x);
    }
    order
}

pub(crate) fn plan_from_order(g: &Multigraph, order: &[usize]) -> Plan {
    let n = g.n();
    let adj = g.adjacency();
    let mut introduced = vec![false; n];
    let mut open: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut frontier: Vec<usize> = Vec::new();
    let mut steps = Vec::new();
    let mut width = 0;
    let mut volume = 0;
    for &w in order {
        introduced[w] = true;
        frontier.push(w);
        width = width.max(frontier.len());
        volume += frontier.len();
        steps.push(Step::Introduce(w));
        let mut incident: Vec<usize> = adj[w]
            .iter()
            .filter(|&&(x, _)| introduced[x] && x != w)
            .map(|&(_, e)| e)
            .collect();
        incident.sort_unstable();
        for e in incident {
            let (u, v) = g.edges()[e];
            let pos = |x: usize| frontier.iter().position(|&y| y == x).expect("endpoint on frontier");
            steps.push(Step::Edge { e, pu: pos(u), pv: pos(v) });
            open[u] -= 1;
            open[v] -= 1;
        }
        // Retire in descending position order so earlier positions stay valid.
        let mut done: Vec<usize> = (0..frontier.len()).filter(|&p| open[frontier[p]] == 0).collect();
        done.reverse();
        for p in done {
            steps.push(Step::Retire { v: frontier[p], pos: p });
            frontier.remove(p);
        }
    }
    debug_assert!(frontier.is_empty());
    Plan { steps, width, volume }
}

/// Best greedy plan over all start vertices.
pub(crate) fn plan(g: &Multigraph) -> Plan {
    let adj = g.adjacency();
    (0..g.n())
        .map(|s| plan_from_order(g, &greedy_order(&adj, s)))
        .min_by_key(|p| (p.width, p.volume))
        .unwrap_or(Plan { steps: Vec::new(), width: 0, volume: 0 })
}

/// Packed residue arithmetic in base `m`.
#[derive(Debug, Clone)]
pub(crate) struct Digits {
    pub m: u64,
    pub pow: Vec<u64>,
}

impl Digits {
    pub fn new(m: u32, width: usize) -> Self {
        let m = u64::from(m);
        let mut pow = vec![1u64; width + 2];
        for i in 1..pow.len() {
            pow[i] = pow[i - 1].checked_mul(m).expect("frontier too wide for packed state");
        }
        Self { m, pow }
    }

    #[inline]
    pub fn digit(&self, idx: u64, p: usize) -> u64 {
        idx / self.pow[p] % self.m
    }

    #[inline]
    pub fn add(&self, idx: u64, p: usize, delta: u64) -> u64 {
        let d = self.digit(idx, p);
        let nd = (d + delta) % self.m;
        idx - d * self.pow[p] + nd * self.pow[p]
    }

    /// Applies edge direction: `forward` means stored `u -> v`.
    #[inline]
    pub fn edge(&self, idx: u64, pu: usize, pv: usize, forward: bool) -> u64 {
        let (du, dv) = if forward { (1, self.m - 1) } else { (self.m - 1, 1) };
        self.add(self.add(idx, pu, du), pv, dv)
    }

    #[inline]
    pub fn remove(&self, idx: u64, p: usize) -> u64 {
        idx % self.pow[p] + idx / self.pow[p + 1] * self.pow[p]
    }

    #[inline]
    pub fn insert(&self, idx: u64, p: usize, d: u64) -> u64 {
        idx % self.pow[p] + d * self.pow[p] + idx / self.pow[p] * self.pow[p + 1]
    }
}

/// Finds edge directions (`true` = stored `u -> v`) whose boundary is
/// `beta` modulo `m`, honouring `fixed` per edge. `beta` values are residues.
pub(crate) fn solve(plan: &Plan, m: u32, beta: &[u32], fixed: &[Option<bool>]) -> Option<Vec<bool>> {
    let dg = Digits::new(m, plan.width);
    let mut current: Vec<u64> = vec![0];
    let mut layers: Vec<HashMap<u64, (u64, bool)>> = Vec::new();
    for step in &plan.steps {
        match *step {
            Step::Introduce(_) => {}
            Step::Edge { e, pu, pv } => {
                let mut layer = HashMap::with_capacity(current.len() * 2);
                for &s in &current {
                    for forward in [true, false] {
                        if fixed[e].is_some_and(|f| f != forward) {
                            continue;
                        }
                        layer.entry(dg.edge(s, pu, pv, forward)).or_insert((s, forward));
                    }
                }
                current = layer.keys().copied().collect();
                current.sort_unstable();
                layers.push(layer);
            }
            Step::Retire { v, pos } => {
                let want = u64::from(beta[v]);
                current = current
                    .into_iter()
                    .filter(|&s| dg.digit(s, pos) == want)
                    .map(|s| dg.remove(s, pos))
                    .collect();
            }
        }
        if current.is_empty() {
            return None;
        }
    }
    // Walk back from the empty frontier.
    let mut dirs = vec![false; fixed.len()];
    let mut state = 0u64;
    for step in plan.steps.iter().rev() {
        match *step {
            Step::Introduce(_) => {}
            Step::Edge { e, .. } => {
                let (prev, forward) = layers.pop().expect("one layer per edge")[&state];
                dirs[e] = forward;
                state = prev;
            }
            Step::Retire { v, pos } => state = dg.insert(state, pos, u64::from(beta[v])),
        }
    }
    Some(dirs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::jaeger_graph;

    #[test]
    fn plans_cover_every_edge_once() {
        for g in [Multigraph::complete(5), jaeger_graph(), Multigraph::cycle(2), Multigraph::empty(3)] {
            let p = plan(&g);
            let mut seen = vec![0; g.m()];
            let mut retired = vec![0; g.n()];
            for s in &p.steps {
                match *s {
                    Step::Edge { e, .. } => seen[e] += 1,
                    Step::Retire { v, .. } => retired[v] += 1,
                    Step::Introduce(_) => {}
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
            assert!(retired.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn jaeger_frontier_is_narrow() {
        assert!(plan(&jaeger_graph()).width <= 7);
    }

    #[test]
    fn digit_insert_remove_roundtrip() {
        let d = Digits::new(3, 5);
        for idx in 0..81u64 {
            for p in 0..4 {
                let r = d.remove(idx, p);
                assert_eq!(d.insert(r, p, d.digit(idx, p)), idx);
            }
        }
    }
}
