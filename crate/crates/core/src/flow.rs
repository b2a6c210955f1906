//! Augmenting-path max-flow for small integer networks.
//!
//! An undirected edge is a single arc pair where both directions start with
//! capacity 1, which is the usual encoding for edge-disjoint paths in a
//! multigraph. Terminal sets are attached through uncapacitated arcs.

use std::collections::VecDeque;

use crate::graph::Multigraph;

const INF: u32 = u32::MAX / 4;

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    head: Vec<usize>,
    cap: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn add_pair(&mut self, u: usize, v: usize, forward: u32, backward: u32) {
        self.adj[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(forward);
        self.adj[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(backward);
    }

    pub fn add_undirected(&mut self, u: usize, v: usize, cap: u32) {
        self.add_pair(u, v, cap, cap);
    }

    pub fn add_arc(&mut self, u: usize, v: usize, cap: u32) {
        self.add_pair(u, v, cap, 0);
    }

    pub fn add_unbounded_arc(&mut self, u: usize, v: usize) {
        self.add_arc(u, v, INF);
    }

    /// Unit-capacity network of a multigraph.
    pub fn from_graph(g: &Multigraph) -> Self {
        let mut net = Self::new(g.n());
        for &(u, v) in g.edges() {
            net.add_undirected(u, v, 1);
        }
        net
    }

    /// Pushes flow from `s` to `t` until none remains or `limit` is reached.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        assert_ne!(s, t, "source and sink must differ");
        let mut total = 0;
        let mut prev = vec![usize::MAX; self.adj.len()];
        while total < limit {
            prev.iter_mut().for_each(|p| *p = usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            while let Some(x) = queue.pop_front() {
                if x == t {
                    break;
                }
                for &a in &self.adj[x] {
                    let y = self.head[a];
                    if self.cap[a] > 0 && !seen[y] {
                        seen[y] = true;
                        prev[y] = a;
                        queue.push_back(y);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut push = limit - total;
            let mut y = t;
            while y != s {
                let a = prev[y];
                push = push.min(self.cap[a]);
                y = self.head[a ^ 1];
            }
            let mut y = t;
            while y != s {
                let a = prev[y];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                y = self.head[a ^ 1];
            }
            total += push;
        }
        total
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &a in &self.adj[x] {
                let y = self.head[a];
                if self.cap[a] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

/// Minimum edge cut separating vertex set `sources` from `sinks` in `g`.
/// Returns the value and the source side (vertices of `g` only). The sets
/// must be disjoint and nonempty.
pub fn min_cut_between(g: &Multigraph, sources: &[usize], sinks: &[usize]) -> (usize, Vec<usize>) {
    let mut net = FlowNetwork::from_graph(g);
    let (s, t) = match (sources, sinks) {
        ([a], [b]) => (*a, *b),
        _ => {
            let s = net.add_node();
            let t = net.add_node();
            for &a in sources {
                net.add_unbounded_arc(s, a);
            }
            for &b in sinks {
                net.add_unbounded_arc(b, t);
            }
            (s, t)
        }
    };
    let value = net.max_flow(s, t, u32::MAX);
    let reach = net.residual_reach(s);
    let side = (0..g.n()).filter(|&v| reach[v]).collect();
    (value as usize, side)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_flows() {
        let k4 = Multigraph::complete(4);
        assert_eq!(min_cut_between(&k4, &[0], &[3]).0, 3);
        let c2 = Multigraph::cycle(2);
        assert_eq!(min_cut_between(&c2, &[0], &[1]), (2, vec![0]));
        let split = Multigraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(min_cut_between(&split, &[0], &[3]), (0, vec![0, 1]));
        assert_eq!(min_cut_between(&k4, &[0, 1], &[2, 3]).0, 4);
    }

    #[test]
    fn limit_stops_early() {
        let mut net = FlowNetwork::from_graph(&Multigraph::complete(5));
        assert_eq!(net.max_flow(0, 1, 2), 2);
    }
}
