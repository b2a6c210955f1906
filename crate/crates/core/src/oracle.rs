//! Slow reference implementations used to cross-check the fast routines.
//! Each one follows a definition as literally as practical and shares no
//! search code with the module it checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Multigraph;
use crate::orient::solver;
use crate::orient::{BoundaryFunction, Connectivity, PreOrientation};
use crate::treepack::Partition;

/// `κ'` by enumerating every bipartition with vertex 0 on the first side.
pub fn edge_connectivity_by_subsets(g: &Multigraph) -> usize {
    let n = g.n();
    assert!((2..=24).contains(&n), "subset oracle is for 2..=24 vertices");
    (0u32..1 << (n - 1))
        .map(|mask| {
            let inside = |v: usize| v == 0 || mask >> (v - 1) & 1 == 1;
            (mask, g.edges().iter().filter(|&&(u, v)| inside(u) != inside(v)).count())
        })
        .filter(|&(mask, _)| mask != (1 << (n - 1)) - 1)
        .map(|(_, cut)| cut)
        .min()
        .expect("n >= 2 gives a proper side")
}

/// `λ(x, y)` as the smallest cut over all sides containing `x` but not `y`.
pub fn local_connectivity_by_subsets(g: &Multigraph, x: usize, y: usize) -> usize {
    let n = g.n();
    assert!(n <= 24 && x != y);
    (0u32..1 << n)
        .filter(|&mask| mask >> x & 1 == 1 && mask >> y & 1 == 0)
        .map(|mask| {
            g.edges()
                .iter()
                .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
                .count()
        })
        .min()
        .expect("some side separates x from y")
}

/// Essential edge-connectivity straight from the definition: the smallest
/// `[S, S^c]` whose removal leaves two components that contain edges.
pub fn essential_by_subsets(g: &Multigraph) -> Option<usize> {
    let n = g.n();
    assert!((2..=24).contains(&n));
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << (n - 1)) - 1 {
        let inside = |v: usize| v == 0 || mask >> (v - 1) & 1 == 1;
        let (kept, cut): (Vec<_>, Vec<_>) = g.edges().iter().partition(|&&(u, v)| inside(u) == inside(v));
        let rest = Multigraph::new(n, kept.into_iter().copied().collect()).expect("subgraph");
        let (labels, count) = rest.component_labels();
        let mut has_edge = vec![false; count];
        for &(u, _) in rest.edges() {
            has_edge[labels[u]] = true;
        }
        if has_edge.iter().filter(|&&b| b).count() >= 2 {
            best = Some(best.map_or(cut.len(), |b| b.min(cut.len())));
        }
    }
    best
}

/// Calls `f` on every set partition of `0..n`, as a label vector in
/// restricted-growth form.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(labels: &mut Vec<usize>, n: usize, max: usize, f: &mut dyn FnMut(&[usize])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        for l in 0..=max + 1 {
            if labels.is_empty() && l > 0 {
                break;
            }
            labels.push(l);
            let next_max = if labels.len() == 1 { 0 } else { max.max(l) };
            rec(labels, n, next_max, f);
            labels.pop();
        }
    }
    if n == 0 {
        f(&[]);
        return;
    }
    rec(&mut Vec::with_capacity(n), n, 0, &mut f);
}

/// `F(G, k)` by maximising `k(|P| - 1) - e(P)` over all partitions.
pub fn deficiency_by_partitions(g: &Multigraph, k: usize) -> (usize, Partition) {
    assert!(g.n() <= 11, "Bell-number enumeration is for at most 11 vertices");
    let mut best: (i64, Vec<usize>) = (0, vec![0; g.n()]);
    for_each_partition(g.n(), |labels| {
        let parts = labels.iter().max().map_or(0, |&m| m + 1);
        let crossing = g.edges().iter().filter(|&&(u, v)| labels[u] != labels[v]).count();
        let value = (k * parts.saturating_sub(1)) as i64 - crossing as i64;
        if value > best.0 {
            best = (value, labels.to_vec());
        }
    });
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for (v, &l) in best.1.iter().enumerate() {
        if parts.len() <= l {
            parts.resize(l + 1, Vec::new());
        }
        parts[l].push(v);
    }
    (best.0 as usize, Partition { parts })
}

/// A uniformly random zero-sum function modulo `m`.
pub fn seeded_zero_sum(n: usize, m: u32, seed: u64) -> BoundaryFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_zero_sum(&mut rng, n, m)
}

pub fn random_zero_sum(rng: &mut impl Rng, n: usize, m: u32) -> BoundaryFunction {
    let mut values: Vec<i64> = (0..n).map(|_| i64::from(rng.gen_range(0..m))).collect();
    if let Some(last) = n.checked_sub(1) {
        let rest: i64 = values[..last].iter().sum();
        values[last] = (-rest).rem_euclid(i64::from(m));
    }
    BoundaryFunction::new(m, &values).expect("constructed zero-sum")
}

/// Z3 β-orientation existence through the cycle space: a β-orientation is
/// a Z3-flow with boundary β and no zero edge, and all flows with boundary β
/// are one particular flow plus the cycle space.
pub fn beta_orientation_by_cycle_space(g: &Multigraph, beta: &BoundaryFunction) -> bool {
    assert_eq!(beta.modulus(), 3);
    let n = g.n();
    let b = beta.values();
    // Spanning forest by BFS; parent edge of each non-root vertex.
    let adj = g.adjacency();
    let mut parent_edge = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let mut tree = vec![false; g.m()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut i = start;
        while i < order.len() {
            let x = order[i];
            i += 1;
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = e;
                    tree[e] = true;
                    order.push(y);
                }
            }
        }
        let comp_sum: u32 = order[start..].iter().map(|&v| b[v]).sum();
        if !comp_sum.is_multiple_of(3) {
            return false;
        }
    }
    // Particular flow: settle vertices leaves-first through their parent edge.
    // f(e) on stored (u, v) adds f to u's boundary and -f to v's.
    let mut f = vec![0u32; g.m()];
    let mut need: Vec<u32> = b.to_vec();
    for &x in order.iter().rev() {
        let e = parent_edge[x];
        if e == usize::MAX {
            continue;
        }
        let (u, v) = g.edges()[e];
        let other = if u == x { v } else { u };
        // Boundary at x from e must equal need[x].
        f[e] = if u == x { need[x] } else { (3 - need[x]) % 3 };
        // The same flow contributes the negative at the other end.
        need[other] = (need[other] + need[x]) % 3;
        need[x] = 0;
    }
    // Fundamental cycles of non-tree edges, as signed Z3 vectors.
    let tree_path = |mut a: usize, mut bb: usize| -> Vec<(usize, u32)> {
        // Edges on the tree path a -> b with the sign of traversal.
        let depth = |mut x: usize| {
            let mut d = 0;
            while parent_edge[x] != usize::MAX {
                let (p, q) = g.edges()[parent_edge[x]];
                x = if p == x { q } else { p };
                d += 1;
            }
            d
        };
        let step = |x: usize| {
            let e = parent_edge[x];
            let (p, q) = g.edges()[e];
            (e, if p == x { q } else { p })
        };
        let mut from_a = Vec::new();
        let mut from_b = Vec::new();
        let (mut da, mut db) = (depth(a), depth(bb));
        while da > db {
            let (e, up) = step(a);
            // Traversing x -> parent along stored (p, q): +1 if x == p.
            from_a.push((e, if g.edges()[e].0 == a { 1 } else { 2 }));
            a = up;
            da -= 1;
        }
        while db > da {
            let (e, up) = step(bb);
            from_b.push((e, if g.edges()[e].0 == bb { 2 } else { 1 }));
            bb = up;
            db -= 1;
        }
        while a != bb {
            let (e, up) = step(a);
            from_a.push((e, if g.edges()[e].0 == a { 1 } else { 2 }));
            a = up;
            let (e, up) = step(bb);
            from_b.push((e, if g.edges()[e].0 == bb { 2 } else { 1 }));
            bb = up;
        }
        from_a.extend(from_b);
        from_a
    };
    let mut cycles: Vec<Vec<(usize, u32)>> = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if tree[e] {
            continue;
        }
        // Go u -> v along e, then back v -> u through the tree.
        let mut c = vec![(e, 1)];
        c.extend(tree_path(v, u));
        cycles.push(c);
    }
    assert!(cycles.len() <= 16, "cycle-space oracle is for small cyclomatic numbers");
    let total = 3usize.pow(cycles.len() as u32);
    let mut flow = f.clone();
    for mut code in 0..total {
        flow.copy_from_slice(&f);
        for c in &cycles {
            let a = (code % 3) as u32;
            code /= 3;
            for &(e, s) in c {
                flow[e] = (flow[e] + a * s) % 3;
            }
        }
        if flow.iter().all(|&x| x != 0) {
            return true;
        }
    }
    false
}

/// Z3-connectivity by running the single-β solver on every zero-sum β in
/// lexicographic order.
pub fn z3_by_beta_loop(g: &Multigraph) -> Connectivity {
    strong_by_beta_loop(g, 3)
}

pub fn strong_by_beta_loop(g: &Multigraph, m: u32) -> Connectivity {
    let n = g.n();
    if n <= 1 {
        return Connectivity::Connected;
    }
    let plan = solver::plan(g);
    let free = vec![None; g.m()];
    let mut beta = vec![0u32; n];
    loop {
        let sum: u32 = beta[..n - 1].iter().sum();
        beta[n - 1] = (m - sum % m) % m;
        if solver::solve(&plan, m, &beta, &free).is_none() {
            return Connectivity::NotConnected {
                witness: BoundaryFunction::new(m, &beta.iter().map(|&x| i64::from(x)).collect::<Vec<_>>())
                    .expect("zero-sum by construction"),
            };
        }
        // Next prefix in lexicographic order.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Connectivity::Connected;
            }
            i -= 1;
            beta[i] += 1;
            if beta[i] < m {
                break;
            }
            beta[i] = 0;
        }
    }
}

/// Extendability at `z0` from its definition: every pre-orientation of the
/// edges at `z0`, paired with every zero-sum β matching its net flow,
/// extends to a β-orientation.
pub fn extendable_by_enumeration(g: &Multigraph, z0: usize) -> bool {
    let n = g.n();
    let d = g.degree(z0).expect("z0 in range");
    assert!(d < 24 && n <= 8);
    let plan = solver::plan(g);
    let total = 3usize.pow(n as u32 - 1);
    for mask in 0u64..(1 << d) {
        let pre = PreOrientation::from_mask(g, z0, mask).expect("valid vertex");
        let fixed = pre.fixed(g);
        let net = pre.net_flow().rem_euclid(3) as u32;
        for mut code in 0..total {
            let mut beta = vec![0u32; n];
            for slot in beta.iter_mut().take(n - 1) {
                *slot = (code % 3) as u32;
                code /= 3;
            }
            let sum: u32 = beta[..n - 1].iter().sum();
            beta[n - 1] = (3 - sum % 3) % 3;
            if beta[z0] != net {
                continue;
            }
            if solver::solve(&plan, 3, &beta, &fixed).is_none() {
                return false;
            }
        }
    }
    true
}

/// Every boundary vector modulo `m` over all `2^|E|` orientations.
pub fn boundaries_by_orientations(g: &Multigraph, m: u32) -> std::collections::BTreeSet<Vec<u32>> {
    assert!(g.m() <= 20);
    let mut out = std::collections::BTreeSet::new();
    for mask in 0u32..1 << g.m() {
        let mut b = vec![0i64; g.n()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let (t, h) = if mask >> e & 1 == 1 { (u, v) } else { (v, u) };
            b[t] += 1;
            b[h] -= 1;
        }
        out.insert(b.iter().map(|&x| x.rem_euclid(i64::from(m)) as u32).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        for (n, bell) in [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            let mut count = 0;
            for_each_partition(n, |_| count += 1);
            assert_eq!(count, bell, "n = {n}");
        }
    }

    #[test]
    fn cycle_space_small_cases() {
        let c2 = Multigraph::cycle(2);
        assert!(beta_orientation_by_cycle_space(&c2, &BoundaryFunction::new(3, &[1, 2]).unwrap()));
        let t = Multigraph::complete(3);
        assert!(!beta_orientation_by_cycle_space(&t, &BoundaryFunction::new(3, &[1, 1, 1]).unwrap()));
        assert!(beta_orientation_by_cycle_space(&t, &BoundaryFunction::zero(3, 3)));
        assert!(!beta_orientation_by_cycle_space(&Multigraph::complete(4), &BoundaryFunction::zero(3, 4)));
    }

    #[test]
    fn cycle_space_matches_orientation_enumeration() {
        let graphs = [
            Multigraph::complete(4),
            Multigraph::new(4, vec![(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap(),
            Multigraph::new(5, vec![(0, 1), (1, 2), (3, 4), (3, 4)]).unwrap(),
        ];
        for g in &graphs {
            let reached = boundaries_by_orientations(g, 3);
            let total = 3usize.pow(g.n() as u32 - 1);
            for code in 0..total {
                let beta = seeded_zero_sum(g.n(), 3, code as u64);
                assert_eq!(beta_orientation_by_cycle_space(g, &beta), reached.contains(beta.values()));
            }
        }
    }

    #[test]
    fn subset_oracles_on_small_graphs() {
        assert_eq!(edge_connectivity_by_subsets(&Multigraph::cycle(2)), 2);
        assert_eq!(local_connectivity_by_subsets(&Multigraph::complete(5), 0, 3), 4);
        let star = Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(essential_by_subsets(&star), None);
    }
}
