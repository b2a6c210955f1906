//! Seeded counterexample hunts with a journal of examined graphs.
//!
//! Graphs are drawn from one seeded stream and deduplicated by canonical
//! form; each new form counts against the budget and is appended to the
//! journal. Digests already in the journal are skipped. Hits are checked a
//! second time from scratch before they are reported.

use std::collections::BTreeSet;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::canonical_key;
use crate::connectivity::edge_connectivity;
use crate::format::to_json_value;
use crate::graph::Multigraph;
use crate::oracle::z3_by_beta_loop;
use crate::orient::z3_connected;
use crate::random::{random_multigraph, rng, GraphRng};
use crate::reduce::{density_check, is_z3_reduced, is_z3_reduced_with, Z3Cache};

/// Graphs evaluated in parallel per round; sampling itself stays sequential.
const BATCH: usize = 32;
/// Samples drawn per unit of budget before giving up.
const ATTEMPTS_PER_GRAPH: usize = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchTarget {
    /// A reduced graph with minimum degree at least 5.
    ReducedMinDegree5,
    /// A 5-edge-connected graph that is not Z3-connected.
    NonZ3FiveEdgeConnected,
}

impl SearchTarget {
    pub fn name(self) -> &'static str {
        match self {
            SearchTarget::ReducedMinDegree5 => "reduced-min-degree-5",
            SearchTarget::NonZ3FiveEdgeConnected => "non-z3-5ec",
        }
    }
}

impl fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [SearchTarget::ReducedMinDegree5, SearchTarget::NonZ3FiveEdgeConnected]
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown search target `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub target: SearchTarget,
    pub seed: u64,
    /// Number of distinct graphs to examine.
    pub budget: usize,
    pub max_n: usize,
    pub journal: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Hit {
    pub digest: String,
    pub graph: serde_json::Value,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub target: String,
    pub seed: u64,
    pub budget: usize,
    pub examined: usize,
    /// Samples whose canonical form had been seen already.
    pub duplicates: usize,
    pub journal_loaded: usize,
    pub hits: Vec<Hit>,
}

fn sample(target: SearchTarget, rng: &mut GraphRng, max_n: usize) -> Option<Multigraph> {
    match target {
        SearchTarget::ReducedMinDegree5 => {
            let n = rng.gen_range(6..=max_n.max(6));
            let m = rng.gen_range((5 * n).div_ceil(2)..=(4 * n - 8).min(n * (n - 1) / 2));
            let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            pairs.shuffle(rng);
            pairs.truncate(m);
            let g = Multigraph::new(n, pairs).expect("simple pairs");
            (g.min_degree() >= Some(5)).then_some(g)
        }
        SearchTarget::NonZ3FiveEdgeConnected => {
            let n = rng.gen_range(2..=max_n.max(2));
            let m = rng.gen_range((5 * n).div_ceil(2)..=4 * n);
            let g = random_multigraph(rng, n, m);
            (g.min_degree() >= Some(5) && edge_connectivity(&g).is_ok_and(|(k, _)| k >= 5)).then_some(g)
        }
    }
}

/// `Some(detail)` when `g` is a hit.
fn examine(target: SearchTarget, g: &Multigraph, cache: &Z3Cache) -> Option<String> {
    match target {
        SearchTarget::ReducedMinDegree5 => is_z3_reduced_with(g, cache)
            .is_reduced()
            .then(|| format!("reduced with minimum degree {:?}", g.min_degree())),
        SearchTarget::NonZ3FiveEdgeConnected => (!z3_connected(g)).then(|| "5-edge-connected, not Z3-connected".into()),
    }
}

/// Repeats the hit test with fresh state and independent routines.
fn reverify(target: SearchTarget, g: &Multigraph) -> bool {
    match target {
        SearchTarget::ReducedMinDegree5 => {
            g.min_degree() >= Some(5) && is_z3_reduced(g).is_reduced() && density_check(g) == Ok(true)
        }
        SearchTarget::NonZ3FiveEdgeConnected => {
            edge_connectivity(g).is_ok_and(|(k, cut)| k >= 5 && cut.verify(g)) && !z3_by_beta_loop(g).is_connected()
        }
    }
}

/// Digests recorded in a journal file.
pub fn read_journal(path: &Path) -> io::Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let digest = u64::from_str_radix(line, 16)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("bad journal line `{line}`: {e}")))?;
        out.insert(digest);
    }
    Ok(out)
}

pub fn search(config: &SearchConfig) -> io::Result<SearchReport> {
    let mut seen = match &config.journal {
        Some(path) if path.exists() => read_journal(path)?,
        _ => BTreeSet::new(),
    };
    let journal_loaded = seen.len();
    let mut journal = match &config.journal {
        Some(path) => {
            let fresh = !path.exists();
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            if fresh {
                writeln!(file, "# {} seed {}", config.target, config.seed)?;
            }
            Some(file)
        }
        None => None,
    };
    let mut report = SearchReport {
        target: config.target.name().to_string(),
        seed: config.seed,
        budget: config.budget,
        examined: 0,
        duplicates: 0,
        journal_loaded,
        hits: Vec::new(),
    };
    let cache = Z3Cache::default();
    let mut rng = rng(config.seed);
    let mut attempts = config.budget.saturating_mul(ATTEMPTS_PER_GRAPH);
    while report.examined < config.budget && attempts > 0 {
        let mut batch = Vec::new();
        while batch.len() < BATCH.min(config.budget - report.examined) && attempts > 0 {
            attempts -= 1;
            let Some(g) = sample(config.target, &mut rng, config.max_n) else { continue };
            let digest = canonical_key(&g).digest();
            if !seen.insert(digest) {
                report.duplicates += 1;
                continue;
            }
            batch.push((digest, g));
        }
        report.examined += batch.len();
        if let Some(file) = journal.as_mut() {
            for (digest, _) in &batch {
                writeln!(file, "{digest:016x}")?;
            }
        }
        let found: Vec<Hit> = batch
            .par_iter()
            .filter_map(|(digest, g)| {
                let detail = examine(config.target, g, &cache)?;
                reverify(config.target, g).then(|| Hit { digest: format!("{digest:016x}"), graph: to_json_value(g), detail })
            })
            .collect();
        report.hits.extend(found);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(budget: usize, journal: Option<PathBuf>) -> SearchConfig {
        SearchConfig { target: SearchTarget::ReducedMinDegree5, seed: 4, budget, max_n: 9, journal }
    }

    #[test]
    fn zero_budget_examines_nothing() {
        let report = search(&config(0, None)).unwrap();
        assert_eq!(report.examined, 0);
        assert!(report.hits.is_empty());
    }

    #[test]
    fn journal_replay_is_deterministic() {
        let dir = std::env::temp_dir().join(format!("flowforge-journal-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let (a, b) = (dir.join("a.txt"), dir.join("b.txt"));
        let _ = std::fs::remove_file(&a);
        let _ = std::fs::remove_file(&b);
        let first = search(&config(12, Some(a.clone()))).unwrap();
        let second = search(&config(12, Some(b.clone()))).unwrap();
        assert_eq!(first.examined, second.examined);
        assert_eq!(read_journal(&a).unwrap().len(), first.examined);
        assert_eq!(std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
        // Resuming from a journal skips what it lists.
        let resumed = search(&config(12, Some(a.clone()))).unwrap();
        assert_eq!(resumed.journal_loaded, first.examined);
        assert!(read_journal(&a).unwrap().len() >= first.examined);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn targets_parse() {
        assert_eq!("non-z3-5ec".parse(), Ok(SearchTarget::NonZ3FiveEdgeConnected));
        assert!("x".parse::<SearchTarget>().is_err());
    }
}
