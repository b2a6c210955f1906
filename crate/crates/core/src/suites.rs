//! Property suites: seeded random instances and small exhaustive families
//! checked against the theorems and against the independent oracles.
//!
//! Item `i` of a seeded suite draws from `item_rng(seed, i)`, items run in
//! parallel, and outcomes are reported sorted by graph fingerprint, so a
//! report depends only on the suite, the seed and the count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::canonical_key;
use crate::connectivity::{edge_connectivity, mader_split};
use crate::flow::FlowNetwork;
use crate::format::to_json_value;
use crate::gadgets::two_sum;
use crate::graph::Multigraph;
use crate::oracle;
use crate::orient::{
    find_beta_orientation, is_extendable_at, is_strongly_zm_connected, is_z3_connected, ltwz_conditions,
    z3_connected, PreOrientation,
};
use crate::random::{item_rng, random_multigraph, random_simple, sample_until, GraphRng};
use crate::reduce::{density_check, is_z3_reduced, z3_reduce};
use crate::treepack::deficiency;

/// Rejection-sampling attempts per item before the item is skipped.
const ATTEMPTS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Thm4Trees,
    ThmF4Le3,
    PropExtend,
    Lemma2Sum,
    Ltwz,
    Density,
    Mader,
    StrongZ5,
    SolverOracle,
    TreepackOracle,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Thm4Trees,
        Suite::ThmF4Le3,
        Suite::PropExtend,
        Suite::Lemma2Sum,
        Suite::Ltwz,
        Suite::Density,
        Suite::Mader,
        Suite::StrongZ5,
        Suite::SolverOracle,
        Suite::TreepackOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm4Trees => "thm-4trees",
            Suite::ThmF4Le3 => "thm-f4le3",
            Suite::PropExtend => "prop-extend",
            Suite::Lemma2Sum => "lemma-2sum",
            Suite::Ltwz => "ltwz",
            Suite::Density => "density",
            Suite::Mader => "mader",
            Suite::StrongZ5 => "strong-z5",
            Suite::SolverOracle => "solver-oracle",
            Suite::TreepackOracle => "treepack-oracle",
        }
    }

    /// Item count used when none is given. Exhaustive suites run their whole
    /// family by default.
    pub fn default_count(self) -> Option<usize> {
        match self {
            Suite::Thm4Trees | Suite::ThmF4Le3 => Some(200),
            Suite::Lemma2Sum | Suite::Ltwz => Some(100),
            Suite::Density | Suite::Mader => Some(50),
            Suite::SolverOracle => Some(300),
            Suite::PropExtend | Suite::StrongZ5 | Suite::TreepackOracle => None,
        }
    }

    pub fn is_exhaustive(self) -> bool {
        matches!(self, Suite::PropExtend | Suite::StrongZ5 | Suite::TreepackOracle)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub index: usize,
    pub detail: String,
    /// The offending graph as a json edge list.
    pub graph: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub examined: usize,
    pub passed: usize,
    /// Items whose rejection sampler gave up.
    pub skipped: usize,
    pub failures: Vec<Failure>,
    /// Suite-specific tallies, e.g. how many reduced graphs were checked.
    pub counters: BTreeMap<String, usize>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.skipped == 0
    }

    pub fn counter(&self, name: &str) -> usize {
        self.counters.get(name).copied().unwrap_or(0)
    }
}

enum Verdict {
    Pass,
    Fail(String),
    Skip,
}

struct Outcome {
    index: usize,
    graph: Option<Multigraph>,
    verdict: Verdict,
    counters: Vec<(&'static str, usize)>,
}

impl Outcome {
    fn new(index: usize, graph: Option<Multigraph>, verdict: Verdict) -> Self {
        Outcome { index, graph, verdict, counters: Vec::new() }
    }

    fn skip(index: usize) -> Self {
        Outcome::new(index, None, Verdict::Skip)
    }

    fn count(mut self, name: &'static str, value: usize) -> Self {
        self.counters.push((name, value));
        self
    }
}

fn check(index: usize, g: Multigraph, ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail(detail()) };
    Outcome::new(index, Some(g), verdict)
}

/// Runs `suite`. `count` caps the number of items (for exhaustive suites,
/// the first `count` members of the family); `None` uses the default.
pub fn run_suite(suite: Suite, seed: u64, count: Option<usize>) -> SuiteReport {
    let count = count.or(suite.default_count());
    let outcomes: Vec<Outcome> = match suite {
        Suite::PropExtend => exhaustive(small_connected_multigraphs(4, 6), count, prop_extend_item),
        Suite::StrongZ5 => exhaustive(strong_z5_family(), count, strong_z5_item),
        Suite::TreepackOracle => {
            let mut family = connected_simple_graphs(6);
            // Then 100 random 7-vertex instances.
            family.extend((0..100).map(|i| {
                let mut rng = item_rng(seed, i as u64);
                sample_until(&mut rng, ATTEMPTS, |r| (7, r.gen_range(6..=16)), Multigraph::is_connected)
                    .expect("connected samples are common")
            }));
            exhaustive(family, count, treepack_item)
        }
        _ => {
            let total = count.unwrap_or(0);
            (0..total)
                .into_par_iter()
                .map(|i| {
                    let mut rng = item_rng(seed, i as u64);
                    match suite {
                        Suite::Thm4Trees => thm_4trees_item(i, &mut rng),
                        Suite::ThmF4Le3 => thm_f4le3_item(i, &mut rng),
                        Suite::Lemma2Sum => lemma_2sum_item(i, &mut rng),
                        Suite::Ltwz => ltwz_item(i, &mut rng),
                        Suite::Density => density_item(i, &mut rng),
                        Suite::Mader => mader_item(i, &mut rng),
                        Suite::SolverOracle => solver_oracle_item(i, &mut rng),
                        _ => unreachable!("exhaustive suites handled above"),
                    }
                })
                .collect()
        }
    };
    aggregate(suite, seed, outcomes)
}

fn exhaustive(family: Vec<Multigraph>, count: Option<usize>, item: fn(usize, Multigraph) -> Outcome) -> Vec<Outcome> {
    let take = count.unwrap_or(family.len()).min(family.len());
    family.into_par_iter().take(take).enumerate().map(|(i, g)| item(i, g)).collect()
}

fn aggregate(suite: Suite, seed: u64, mut outcomes: Vec<Outcome>) -> SuiteReport {
    outcomes.sort_by_key(|o| (o.graph.as_ref().map(Multigraph::fingerprint), o.index));
    let mut report = SuiteReport {
        suite: suite.name().to_string(),
        seed,
        examined: 0,
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
        counters: BTreeMap::new(),
    };
    for o in outcomes {
        for (name, value) in o.counters {
            *report.counters.entry(name.to_string()).or_default() += value;
        }
        match o.verdict {
            Verdict::Skip => report.skipped += 1,
            Verdict::Pass => {
                report.examined += 1;
                report.passed += 1;
            }
            Verdict::Fail(detail) => {
                report.examined += 1;
                report.failures.push(Failure { index: o.index, detail, graph: o.graph.as_ref().map(to_json_value) });
            }
        }
    }
    report
}

fn connected_sample(
    rng: &mut GraphRng,
    mut size: impl FnMut(&mut GraphRng) -> (usize, usize),
    mut accept: impl FnMut(&Multigraph) -> bool,
) -> Option<Multigraph> {
    sample_until(rng, ATTEMPTS, &mut size, |g| g.is_connected() && accept(g))
}

fn thm_4trees_item(index: usize, rng: &mut GraphRng) -> Outcome {
    let sample = connected_sample(
        rng,
        |r| {
            let n = r.gen_range(2..=9);
            (n, r.gen_range(4 * (n - 1)..=4 * (n - 1) + n))
        },
        |g| deficiency(g, 4).is_ok_and(|d| d.value == 0),
    );
    let Some(g) = sample else { return Outcome::skip(index) };
    let ok = z3_connected(&g);
    check(index, g.clone(), ok, || format!("4 spanning trees but witness {:?}", is_z3_connected(&g).witness()))
}

fn thm_f4le3_item(index: usize, rng: &mut GraphRng) -> Outcome {
    let sample = connected_sample(
        rng,
        |r| {
            let n = r.gen_range(2..=9);
            let top = 4 * (n - 1);
            (n, r.gen_range(top.saturating_sub(3).max(1)..=top + 1))
        },
        |g| {
            deficiency(g, 4).is_ok_and(|d| d.value <= 3) && edge_connectivity(g).is_ok_and(|(k, _)| k >= 2)
        },
    );
    let Some(g) = sample else { return Outcome::skip(index) };
    let ok = z3_connected(&g);
    check(index, g.clone(), ok, || format!("F(G,4) <= 3, 2-edge-connected, witness {:?}", is_z3_connected(&g).witness()))
}

fn prop_extend_item(index: usize, g: Multigraph) -> Outcome {
    let bad: Vec<usize> = (0..g.n())
        .filter(|&z0| is_extendable_at(&g, z0).expect("z0 in range") != oracle::extendable_by_enumeration(&g, z0))
        .collect();
    check(index, g, bad.is_empty(), || format!("verdicts differ at z0 in {bad:?}"))
}

fn lemma_2sum_item(index: usize, rng: &mut GraphRng) -> Outcome {
    let factor = |r: &mut GraphRng| {
        connected_sample(
            r,
            |r| {
                let n = r.gen_range(2..=6);
                (n, r.gen_range(n - 1..=2 * n + 1))
            },
            |g| !z3_connected(g),
        )
    };
    let (Some(g1), Some(g2)) = (factor(rng), factor(rng)) else { return Outcome::skip(index) };
    let e = rng.gen_range(0..g1.m());
    let u2 = rng.gen_range(0..g2.n());
    let v2 = (u2 + rng.gen_range(1..g2.n())) % g2.n();
    let sum = two_sum(&g1, e, &g2, u2, v2).expect("valid 2-sum arguments").graph;
    let sizes = sum.n() == g1.n() + g2.n() - 2 && sum.m() == g1.m() + g2.m() - 1;
    let ok = sizes && !z3_connected(&sum);
    check(index, sum, ok, || {
        format!("2-sum of non-Z3 graphs at e={e}, u2={u2}, v2={v2} is Z3-connected (or size laws fail: {sizes})")
    })
}

fn ltwz_item(index: usize, rng: &mut GraphRng) -> Outcome {
    for _ in 0..ATTEMPTS {
        let n = rng.gen_range(3..=8);
        let core_edges = rng.gen_range(3 * (n - 1)..=6 * (n - 1));
        let core = random_multigraph(rng, n - 1, core_edges);
        let z0 = n - 1;
        let d = rng.gen_range(2..=7);
        let mut edges = core.edges().to_vec();
        edges.extend((0..d).map(|_| (rng.gen_range(0..n - 1), z0)));
        let g = Multigraph::new(n, edges).expect("valid endpoints");
        let beta = oracle::random_zero_sum(rng, n, 3);
        let mask = rng.gen_range(0..1u64 << d);
        let pre = PreOrientation::from_mask(&g, z0, mask).expect("z0 in range");
        if !ltwz_conditions(&g, z0, &beta, &pre).expect("well-formed input").holds() {
            continue;
        }
        let found = find_beta_orientation(&g, &beta, Some(&pre)).expect("well-formed input");
        let ok = found.as_ref().is_some_and(|o| {
            beta.is_realised_by(&g, o)
                && pre.outgoing.iter().all(|&(e, out)| (o.edges[e].0 == z0) == out)
        });
        return check(index, g, ok, || format!("conditions hold for beta {:?}, mask {mask:#b}, no extension", beta.values()));
    }
    Outcome::skip(index)
}

fn density_item(index: usize, rng: &mut GraphRng) -> Outcome {
    let g = if rng.gen_bool(0.5) {
        let n = rng.gen_range(3..=9);
        let m = rng.gen_range(n - 1..=3 * n);
        random_multigraph(rng, n, m)
    } else {
        let n = rng.gen_range(3..=10);
        let p = rng.gen_range(0.3..0.9);
        random_simple(rng, n, p)
    };
    let reduction = z3_reduce(&g);
    let reduced = &reduction.graph;
    let mut problems = Vec::new();
    if (reduced.n() == 1) != z3_connected(&g) {
        problems.push("reduces to K1 but verdict differs".to_string());
    }
    let mut checked = 0;
    if reduced.n() >= 3 {
        checked = 1;
        if !is_z3_reduced(reduced).is_reduced() {
            problems.push("reduction result is not reduced".into());
        }
        if density_check(reduced) != Ok(true) {
            problems.push(format!("reduced graph has {} > 4*{} - 8 edges", reduced.m(), reduced.n()));
        }
        if reduced.min_degree().is_some_and(|d| d > 5) {
            problems.push("reduced graph has minimum degree above 5".into());
        }
    }
    let outcome = check(index, g, problems.is_empty(), || problems.join("; "));
    outcome.count("reduced_checked", checked)
}

fn qualifying_mader_vertex(g: &Multigraph, z: usize) -> bool {
    let Ok(d) = g.degree(z) else { return false };
    if d < 4 || g.neighbors(z).map_or(true, |nb| nb.len() < 2) {
        return false;
    }
    let (rest, _) = g.delete_vertex(z).expect("z in range");
    rest.is_connected()
}

fn mader_item(index: usize, rng: &mut GraphRng) -> Outcome {
    let sample = connected_sample(
        rng,
        |r| {
            let n = r.gen_range(3..=8);
            (n, r.gen_range(2 * n..=4 * n))
        },
        |g| (0..g.n()).any(|z| qualifying_mader_vertex(g, z)),
    );
    let Some(g) = sample else { return Outcome::skip(index) };
    let candidates: Vec<usize> = (0..g.n()).filter(|&z| qualifying_mader_vertex(&g, z)).collect();
    let z = candidates[rng.gen_range(0..candidates.len())];
    let split = match mader_split(&g, z) {
        Ok(s) => s,
        Err(e) => return check(index, g, false, || format!("no split at {z}: {e}")),
    };
    let mut bad = Vec::new();
    for x in 0..g.n() {
        for y in x + 1..g.n() {
            if x == z || y == z {
                continue;
            }
            let before = max_flow(&g, x, y);
            let after = max_flow(&split.graph, x, y);
            if before != after || after as usize != oracle::local_connectivity_by_subsets(&split.graph, x, y) {
                bad.push((x, y, before, after));
            }
        }
    }
    check(index, g, bad.is_empty(), || format!("split at {z} of edges {}, {} changes {bad:?}", split.e1, split.e2))
}

fn max_flow(g: &Multigraph, x: usize, y: usize) -> u32 {
    FlowNetwork::from_graph(g).max_flow(x, y, u32::MAX)
}

fn solver_oracle_item(index: usize, rng: &mut GraphRng) -> Outcome {
    let n = rng.gen_range(2..=7);
    let m = rng.gen_range(0..=12);
    let g = random_multigraph(rng, n, m);
    let mut bad = Vec::new();
    for _ in 0..20 {
        let beta = oracle::random_zero_sum(rng, n, 3);
        let dp = find_beta_orientation(&g, &beta, None).expect("well-formed input");
        let valid = dp.as_ref().is_none_or(|o| beta.is_realised_by(&g, o));
        if dp.is_some() != oracle::beta_orientation_by_cycle_space(&g, &beta) || !valid {
            bad.push(beta.values().to_vec());
        }
    }
    check(index, g, bad.is_empty(), || format!("frontier DP and cycle space disagree on {bad:?}"))
}

fn treepack_item(index: usize, g: Multigraph) -> Outcome {
    let mut bad = Vec::new();
    for k in [2, 3, 4] {
        let fast = deficiency(&g, k).expect("connected graph");
        let (slow, _) = oracle::deficiency_by_partitions(&g, k);
        let certified = fast.partition.is_partition_of(g.n())
            && fast.partition.deficiency_value(&g, k) == fast.value as i64
            && fast.packing.verify(&g, false)
            && fast.packing.forests.iter().map(Vec::len).sum::<usize>() + fast.value == k * (g.n() - 1);
        if fast.value != slow || !certified {
            bad.push((k, fast.value, slow));
        }
    }
    check(index, g, bad.is_empty(), || format!("(k, matroid union, partitions): {bad:?}"))
}

fn strong_z5_item(index: usize, g: Multigraph) -> Outcome {
    let strong = is_strongly_zm_connected(&g, 5).expect("5 is a valid modulus").is_connected();
    if !strong {
        return check(index, g, true, String::new);
    }
    let trees = deficiency(&g, 4).is_ok_and(|d| d.value == 0);
    let z3 = z3_connected(&g);
    check(index, g, trees && z3, || format!("strongly Z5-connected but F(G,4) = 0 is {trees}, Z3-connected is {z3}"))
        .count("strongly_z5", 1)
}

/// Connected loopless multigraphs with `2 <= n <= max_n` and at most `max_m`
/// edges, one per isomorphism class.
pub fn small_connected_multigraphs(max_n: usize, max_m: usize) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut keys = BTreeSet::new();
        for m in n - 1..=max_m {
            for_each_multiset(pairs.len(), m, &mut |counts| {
                let edges: Vec<(usize, usize)> = counts
                    .iter()
                    .zip(&pairs)
                    .flat_map(|(&c, &p)| std::iter::repeat_n(p, c))
                    .collect();
                let g = Multigraph::new(n, edges).expect("pairs are valid");
                if g.is_connected() && keys.insert(canonical_key(&g)) {
                    out.push(g);
                }
            });
        }
    }
    out
}

/// Calls `f` with every vector of `slots` counts summing to `total`.
fn for_each_multiset(slots: usize, total: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(counts: &mut Vec<usize>, slot: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
        if slot + 1 == counts.len() {
            counts[slot] = left;
            f(counts);
            return;
        }
        for c in 0..=left {
            counts[slot] = c;
            go(counts, slot + 1, left - c, f);
        }
    }
    if slots == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    go(&mut vec![0; slots], 0, total, f);
}

/// Every connected labelled simple graph on `1..=max_n` vertices.
pub fn connected_simple_graphs(max_n: usize) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(simple_graphs(n).filter(Multigraph::is_connected));
    }
    out
}

fn simple_graphs(n: usize) -> impl Iterator<Item = Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        Multigraph::new(n, edges).expect("pairs are valid")
    })
}

/// All multigraphs on `n` vertices with every pair multiplicity in
/// `0..=max_mult`, connected, one per isomorphism class.
fn bounded_multiplicity(n: usize, max_mult: usize) -> Vec<Multigraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let total = (max_mult as u64 + 1).pow(pairs.len() as u32);
    let graphs: Vec<Multigraph> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut edges = Vec::new();
            for &p in &pairs {
                let c = (code % (max_mult as u64 + 1)) as usize;
                code /= max_mult as u64 + 1;
                edges.extend(std::iter::repeat_n(p, c));
            }
            let g = Multigraph::new(n, edges).expect("pairs are valid");
            g.is_connected().then_some(g)
        })
        .collect();
    dedup(graphs)
}

fn dedup(graphs: Vec<Multigraph>) -> Vec<Multigraph> {
    let keyed: Vec<_> = graphs.into_par_iter().map(|g| (canonical_key(&g), g)).collect();
    let mut seen = BTreeSet::new();
    keyed.into_iter().filter(|(k, _)| seen.insert(k.clone())).map(|(_, g)| g).collect()
}

/// The small dense multigraphs searched for strongly Z5-connected members:
/// two vertices joined by 1..=8 edges, multiplicities up to 4, 3 and 2 on
/// three, four and five vertices, and doubled simple graphs on six.
pub fn strong_z5_family() -> Vec<Multigraph> {
    let mut out: Vec<Multigraph> = (1..=8).map(|k| Multigraph::new(2, vec![(0, 1); k]).expect("valid")).collect();
    out.extend(bounded_multiplicity(3, 4));
    out.extend(bounded_multiplicity(4, 3));
    out.extend(bounded_multiplicity(5, 2));
    let doubled = simple_graphs(6)
        .filter(Multigraph::is_connected)
        .map(|g| g.with_edges(g.edges()).expect("valid"))
        .collect();
    out.extend(dedup(doubled));
    out
}
