use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use flowforge::format::{parse, serialize, Format};
use flowforge::gadgets::{g_star, h_gadget, jaeger_graph, kochol_composite, subdivide_identify, two_sum};
use flowforge::orient::{has_mod_orientation, is_extendable_at, is_strongly_zm_connected, is_z3_connected, Connectivity};
use flowforge::reduce::z3_reduce;
use flowforge::report::{analyze, Budget};
use flowforge::search::{search, SearchConfig, SearchTarget};
use flowforge::suites::{run_suite, Suite};
use flowforge::Multigraph;

/// Exit status for "no" answers and failed suites.
const NO: u8 = 1;
/// Exit status for errors of any kind.
const ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "flowforge", version, about = "Group connectivity, tree packing and gadget tools for multigraphs")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "FLOWFORGE_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    /// Graph file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug, Clone, Copy)]
struct BudgetArgs {
    /// Largest vertex count accepted by the exponential routines.
    #[arg(long, default_value_t = 14)]
    budget_n: usize,
    /// Largest edge count accepted by the exponential routines.
    #[arg(long, default_value_t = 30)]
    budget_m: usize,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget { max_n: self.budget_n, max_m: self.budget_m }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report: connectivity, tree packing, Z3 verdicts, reducedness.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Values of k for F(G, k).
        #[arg(long = "k", default_values_t = [4])]
        ks: Vec<usize>,
    },
    /// Answer one question; exit 0 for yes, 1 for no.
    Decide {
        /// z3, mod3, mod5, strong-zm or extendable@<vertex>.
        question: Question,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Modulus for strong-zm (odd, 3..=31).
        #[arg(long, default_value_t = 5)]
        modulus: u32,
    },
    /// Emit a gadget as a graph file on stdout.
    Construct {
        #[command(subcommand)]
        gadget: Gadget,
        /// Output format.
        #[arg(long, default_value = "json", global = true)]
        output_format: Format,
    },
    /// Run a property suite.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Items to check; exhaustive suites take the first `count` members.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Hunt for counterexamples; exit 1 when one is found.
    Search {
        target: SearchTarget,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Distinct graphs to examine.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Journal of examined canonical forms; existing entries are skipped.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Gadget {
    Jaeger,
    TwoSum {
        #[arg(long)]
        g1: PathBuf,
        /// Edge id of `g1` to remove.
        #[arg(long)]
        edge: usize,
        #[arg(long)]
        g2: PathBuf,
        /// Vertices of `g2` glued to the ends of the edge, in stored order.
        #[arg(long, num_args = 2)]
        anchors: Vec<usize>,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    Kochol {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        v1: usize,
        #[arg(long)]
        v2: usize,
        /// Emit the block J instead of the composite.
        #[arg(long)]
        block: bool,
    },
    #[allow(clippy::enum_variant_names)]
    HGadget {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, num_args = 2)]
        u: Vec<usize>,
        #[arg(long = "w", num_args = 2)]
        w: Vec<usize>,
    },
    GStar {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, num_args = 2)]
        u: Vec<usize>,
        #[arg(long = "w", num_args = 2)]
        w: Vec<usize>,
    },
    SubdivideIdentify {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated edge ids (one to three).
        #[arg(long, value_delimiter = ',')]
        edges: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Question {
    Z3,
    Mod3,
    Mod5,
    StrongZm,
    Extendable(usize),
}

impl FromStr for Question {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "z3" => Ok(Question::Z3),
            "mod3" => Ok(Question::Mod3),
            "mod5" => Ok(Question::Mod5),
            "strong-zm" => Ok(Question::StrongZm),
            _ => match s.strip_prefix("extendable@") {
                Some(v) => v.parse().map(Question::Extendable).map_err(|e| format!("bad vertex in `{s}`: {e}")),
                None => Err(format!("unknown question `{s}`")),
            },
        }
    }
}

fn read_graph(input: &InputArgs) -> Result<Multigraph, String> {
    let text = if input.input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
        s
    } else {
        fs::read_to_string(&input.input).map_err(|e| format!("reading {}: {e}", input.input))?
    };
    parse(&text, input.format).map_err(|e| e.to_string())
}

fn read_file(path: &PathBuf, format: Format) -> Result<Multigraph, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    parse(&text, format).map_err(|e| e.to_string())
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("values serialize"));
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Analyze { input, budget, ks } => {
            let g = read_graph(&input)?;
            let report = analyze(&g, &ks, budget.budget()).map_err(|e| e.to_string())?;
            if cli.json {
                print_json(&serde_json::to_value(&report).expect("report serializes"));
            } else {
                println!("n = {}, m = {}", report.n, report.m);
                match &report.edge_connectivity {
                    Some(c) => println!("edge connectivity = {}", c.value),
                    None => println!("edge connectivity undefined"),
                }
                let essential = &report.essential_edge_connectivity;
                println!("essential edge connectivity = {}", essential.get("value").unwrap_or(essential));
                match report.tree_packing_number {
                    Some(t) => println!("edge-disjoint spanning trees = {t}"),
                    None => println!("edge-disjoint spanning trees undefined"),
                }
                for d in &report.deficiency {
                    println!("F(G,{}) = {}", d.k, d.value);
                }
                match &report.z3_witness {
                    Some(w) => println!("Z3-connected: no, witness beta = {w:?}"),
                    None => println!("Z3-connected: yes"),
                }
                println!("Z3-reduced: {}", if report.reduced { "yes" } else { "no" });
                if let Some(d) = report.density_bound {
                    println!("m <= 4n - 8: {d}");
                }
                println!("mod 3 orientation: {}", if report.mod3_orientation.is_some() { "yes" } else { "no" });
            }
            Ok(0)
        }
        Command::Decide { question, input, budget, modulus } => {
            let g = read_graph(&input)?;
            budget.budget().check(&g).map_err(|e| e.to_string())?;
            let (yes, certificate) = decide(&g, question, modulus)?;
            if cli.json {
                print_json(&json!({ "answer": yes, "certificate": certificate }));
            } else {
                println!("{}", if yes { "yes" } else { "no" });
                if !certificate.is_null() {
                    println!("{certificate}");
                }
            }
            Ok(if yes { 0 } else { NO })
        }
        Command::Construct { gadget, output_format } => {
            let g = construct(gadget)?;
            println!("{}", serialize(&g, output_format).map_err(|e| e.to_string())?);
            Ok(0)
        }
        Command::Verify { suite, seed, count } => {
            let report = run_suite(suite, seed, count);
            if cli.json {
                print_json(&serde_json::to_value(&report).expect("report serializes"));
            } else {
                println!(
                    "{}: {} examined, {} passed, {} failed, {} skipped",
                    report.suite,
                    report.examined,
                    report.passed,
                    report.failures.len(),
                    report.skipped
                );
                for (name, value) in &report.counters {
                    println!("  {name} = {value}");
                }
                for f in &report.failures {
                    println!("FAIL item {}: {}", f.index, f.detail);
                    if let Some(g) = &f.graph {
                        println!("  {g}");
                    }
                }
                println!("{}", if report.ok() { "pass" } else { "fail" });
            }
            Ok(if report.ok() { 0 } else { NO })
        }
        Command::Search { target, seed, budget, max_n, journal } => {
            let config = SearchConfig { target, seed, budget, max_n, journal };
            let report = search(&config).map_err(|e| format!("journal: {e}"))?;
            if cli.json {
                print_json(&serde_json::to_value(&report).expect("report serializes"));
            } else {
                println!("{}: {} examined, {} duplicates skipped", report.target, report.examined, report.duplicates);
                if report.hits.is_empty() {
                    println!("none in budget");
                }
                for h in &report.hits {
                    println!("HIT {}: {}\n  {}", h.digest, h.detail, h.graph);
                }
            }
            Ok(if report.hits.is_empty() { 0 } else { NO })
        }
    }
}

fn witness_json(c: &Connectivity) -> Value {
    c.witness().map_or(Value::Null, |w| json!({ "witness": w.values() }))
}

fn decide(g: &Multigraph, question: Question, modulus: u32) -> Result<(bool, Value), String> {
    Ok(match question {
        Question::Z3 => {
            let c = is_z3_connected(g);
            if c.is_connected() {
                (true, json!({ "reduction_trace": z3_reduce(g).trace }))
            } else {
                (false, witness_json(&c))
            }
        }
        Question::Mod3 | Question::Mod5 => {
            let m = if question == Question::Mod3 { 3 } else { 5 };
            let o = has_mod_orientation(g, m).map_err(|e| e.to_string())?;
            (o.is_some(), o.map_or(Value::Null, |o| o.to_json_value()))
        }
        Question::StrongZm => {
            let c = is_strongly_zm_connected(g, modulus).map_err(|e| e.to_string())?;
            (c.is_connected(), witness_json(&c))
        }
        Question::Extendable(v) => {
            let yes = is_extendable_at(g, v).map_err(|e| e.to_string())?;
            if yes {
                (true, Value::Null)
            } else {
                // A boundary of G - v without orientation, in G - v's ids.
                let (rest, map) = g.delete_vertex(v).map_err(|e| e.to_string())?;
                let c = is_z3_connected(&rest);
                let ids: Vec<usize> = (0..g.n()).filter(|&x| map[x].is_some()).collect();
                (false, json!({ "vertices": ids, "witness": c.witness().map(|w| w.values().to_vec()) }))
            }
        }
    })
}

fn pair(v: &[usize]) -> (usize, usize) {
    (v[0], v[1])
}

fn construct(gadget: Gadget) -> Result<Multigraph, String> {
    let err = |e: flowforge::gadgets::GadgetError| e.to_string();
    Ok(match gadget {
        Gadget::Jaeger => jaeger_graph(),
        Gadget::TwoSum { g1, edge, g2, anchors, format } => {
            let (g1, g2) = (read_file(&g1, format)?, read_file(&g2, format)?);
            two_sum(&g1, edge, &g2, anchors[0], anchors[1]).map_err(err)?.graph
        }
        Gadget::Kochol { input, v, v1, v2, block } => {
            let k = kochol_composite(&read_graph(&input)?, v, v1, v2).map_err(err)?;
            if block {
                k.j
            } else {
                k.g
            }
        }
        Gadget::HGadget { input, u, w } => h_gadget(&read_graph(&input)?, pair(&u), pair(&w)).map_err(err)?.graph,
        Gadget::GStar { input, u, w } => g_star(&read_graph(&input)?, pair(&u), pair(&w)).map_err(err)?,
        Gadget::SubdivideIdentify { input, edges } => subdivide_identify(&read_graph(&input)?, &edges).map_err(err)?.0,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(ERROR);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ERROR)
        }
    }
}
