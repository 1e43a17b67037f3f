//! `critlen`: build trees, count path and cycle lengths, run verification
//! suites. Exit codes: 0 success, 1 a check failed, 2 bad usage or input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use critlen::constructions::{build_tree, sequence_from_sumset, sumset_search, sumset_uv, SequenceSpec};
use critlen::critical::{apex_from_13_tree, check_critical, critical_ordering, expected_profile, k_ordered_violation};
use critlen::cycles::{cycle_length_oracle, many_cycle_lengths};
use critlen::graphs::{parse_graph, serialize_graph};
use critlen::treelen::{leaf_lengths, many_lengths_bound, witnessed_lengths};
use critlen::verify::{
    exhaustive_one_three, verify_all, verify_constructions, verify_critical, verify_cycles, verify_treelen,
    CheckRecord, Fault, Profile, RunReport, SuiteConfig,
};
use critlen::{Graph, Tree};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "critlen", version, about = "Leaf-to-leaf path lengths and cycle lengths, with certificates")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Seed for every random corpus.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the command's graph in DOT format.
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build trees from a sequence spec.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Analyze a tree.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Degree-criticality tools.
    #[command(subcommand)]
    Critical(CriticalCmd),
    /// Cycle-length tools.
    #[command(subcommand)]
    Cycles(CyclesCmd),
    /// Sumset tools.
    #[command(subcommand)]
    Sumset(SumsetCmd),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Build T_n((a_i)) and write it as graph JSON.
    Tree {
        /// `constant:a`, `staircase:m`, `sumset:k` or `list:a,b,...`
        #[arg(long)]
        seq: SequenceSpec,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Include the construction trace in the report.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Leaf-to-leaf path lengths of a tree.
    Lengths {
        #[arg(long = "in")]
        input: PathBuf,
        /// Only lengths up to this value.
        #[arg(long)]
        max: Option<usize>,
        /// Also count the lengths witnessed by each leaf.
        #[arg(long)]
        per_leaf: bool,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Suite {
    Treelen,
    Constructions,
    Critical,
    Cycles,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest tree order in the exhaustive sweep.
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long, default_value = "quick")]
    profile: Profile,
    /// Corrupt results on purpose to confirm the checks can fail.
    #[arg(long, default_value = "none", hide = true)]
    fault: Fault,
}

#[derive(Subcommand)]
enum CriticalCmd {
    /// Is the graph degree k-critical?
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Apex graph of a 1–3 tree.
    FromTree {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Greedy vertex ordering of a degree k-critical graph.
    Order {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum CyclesCmd {
    /// Certified cycle lengths of a degree k-critical graph.
    Find {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Write the cycle certificates here.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
    /// Exact cycle lengths of a graph on at most 16 vertices.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum SumsetCmd {
    /// The base-13 digit-set pair for `k` digits.
    Build {
        #[arg(long)]
        k: u32,
    },
    /// Search digit sets with small sumset and full difference set.
    Search {
        #[arg(long)]
        base: u32,
        #[arg(long)]
        max_size: usize,
        /// Digit window as `lo:hi`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
    },
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("lo exceeds hi".into());
    }
    Ok((lo, hi))
}

/// Bad input: exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, InputError>;

struct Input {
    bytes: Vec<u8>,
    digest: String,
}

fn read_input(path: &Path) -> Result<Input> {
    let bytes = fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok(Input { bytes, digest })
}

fn read_graph(path: &Path) -> Result<(Graph, String)> {
    let input = read_input(path)?;
    let g = parse_graph(&input.bytes).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok((g, input.digest))
}

fn read_tree(path: &Path) -> Result<(Tree, String)> {
    let (g, digest) = read_graph(path)?;
    let t = Tree::new(g).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok((t, digest))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// What a command produced: a JSON document and whether its checks passed.
struct Output {
    json: serde_json::Value,
    pass: bool,
    graph: Option<Graph>,
}

impl Output {
    fn report(r: RunReport) -> Output {
        Output {
            pass: r.pass,
            json: serde_json::to_value(&r).expect("reports serialize"),
            graph: None,
        }
    }

    fn with_graph(mut self, g: Graph) -> Output {
        self.graph = Some(g);
        self
    }
}

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("serializable")
}

/// The invocation minus `--json`/`--dot`, so reports do not depend on where
/// they are written.
fn command_line() -> String {
    let mut kept = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        match a.as_str() {
            "--json" | "--dot" => {
                args.next();
            }
            s if s.starts_with("--json=") || s.starts_with("--dot=") => {}
            _ => kept.push(a),
        }
    }
    kept.join(" ")
}

fn run(cli: &Cli) -> Result<Output> {
    let echo = command_line();
    match &cli.command {
        Command::Construct(ConstructCmd::Tree { seq, n, out, trace }) => {
            let (tree, tr) = build_tree(seq, *n)?;
            let mut r = RunReport::new(echo, cli.seed);
            r.push(CheckRecord::exact("vertices", *n as f64, tree.n() as f64));
            r.push(CheckRecord::flag("degrees-one-or-three", tree.is_one_three()));
            r.push(CheckRecord::flag("trace", tr.check(*n).is_ok()));
            write_file(out, &serialize_graph(tree.graph()))?;
            r.artifacts.push(out.display().to_string());
            let mut data = json!({ "n": tree.n(), "leaves": tree.leaf_count(), "subtrees": tr.t });
            if *trace {
                data["trace"] = to_value(&tr);
            }
            r.data = Some(data);
            Ok(Output::report(r).with_graph(tree.into_graph()))
        }
        Command::Analyze(AnalyzeCmd::Lengths { input, max, per_leaf }) => {
            let (t, digest) = read_tree(input)?;
            let lengths = leaf_lengths(&t, *max);
            let delta = t.max_degree();
            let bound = match (max, delta) {
                (None, d) if d >= 3 => Some(many_lengths_bound(d, t.leaf_count())),
                _ => None,
            };
            let pass = bound.is_none_or(|b| lengths.len() as f64 >= b - 1e-9);
            let mut json = json!({
                "n": t.n(),
                "delta": delta,
                "leaves": t.leaf_count(),
                "lengths": lengths.to_vec(),
                "bound": bound,
                "pass": pass,
                "input_digest": digest,
            });
            if *per_leaf {
                let horizon = max.unwrap_or(t.n());
                let rows: Vec<serde_json::Value> = t
                    .leaves()
                    .into_iter()
                    .map(|leaf| {
                        let r = witnessed_lengths(&t, leaf, horizon).expect("leaf");
                        json!({ "leaf": leaf, "count": r.lengths.len() })
                    })
                    .collect();
                json["per_leaf"] = rows.into();
            }
            Ok(Output {
                json,
                pass,
                graph: Some(t.into_graph()),
            })
        }
        Command::Verify(args) => {
            let cfg = SuiteConfig {
                profile: args.profile,
                seed: cli.seed,
                fault: args.fault,
            };
            let full = args.profile == Profile::Full;
            let max_n = args.max_n.unwrap_or(if full { 22 } else { 18 });
            if max_n > critlen::treelen::ENUMERATION_CAP {
                return Err(InputError(format!(
                    "--max-n {max_n} exceeds the enumeration cap {}",
                    critlen::treelen::ENUMERATION_CAP
                )));
            }
            let mut r = match args.suite {
                Suite::All => {
                    let mut r = verify_all(&cfg);
                    r.command = echo;
                    r
                }
                suite => {
                    let mut r = RunReport::new(echo, cli.seed);
                    r.extend(match suite {
                        Suite::Treelen if args.max_n.is_some() && !full => exhaustive_one_three(max_n, cfg.fault),
                        Suite::Treelen => verify_treelen(&cfg, max_n),
                        Suite::Constructions => verify_constructions(&cfg),
                        Suite::Critical => verify_critical(&cfg),
                        _ => verify_cycles(&cfg),
                    });
                    r
                }
            };
            r.data = Some(json!({ "profile": args.profile, "fault": args.fault }));
            Ok(Output::report(r))
        }
        Command::Critical(CriticalCmd::Check { input, k }) => {
            let (g, digest) = read_graph(input)?;
            let rep = check_critical(&g, *k)?;
            let mut r = RunReport::new(echo, cli.seed);
            r.input_digest = Some(digest);
            r.push(CheckRecord::exact("edge-count", rep.expected_edges as f64, rep.edges as f64));
            r.push(CheckRecord::flag("no-proper-k-core", rep.violating_vertex.is_none()));
            r.data = Some(to_value(&rep));
            Ok(Output::report(r).with_graph(g))
        }
        Command::Critical(CriticalCmd::FromTree { input, out }) => {
            let (t, digest) = read_tree(input)?;
            let g = apex_from_13_tree(&t)?;
            let rep = check_critical(&g, 3)?;
            let mut r = RunReport::new(echo, cli.seed);
            r.input_digest = Some(digest);
            r.push(CheckRecord::flag("degree-3-critical", rep.verdict));
            write_file(out, &serialize_graph(&g))?;
            r.artifacts.push(out.display().to_string());
            r.data = Some(json!({ "n": g.n(), "edges": g.edge_count() }));
            Ok(Output::report(r).with_graph(g))
        }
        Command::Critical(CriticalCmd::Order { input, k }) => {
            let (g, digest) = read_graph(input)?;
            let ord = critical_ordering(&g, *k)?;
            let mut r = RunReport::new(echo, cli.seed);
            r.input_digest = Some(digest);
            r.push(CheckRecord::flag("profile", ord.dplus == expected_profile(g.n(), *k)));
            let violation = k_ordered_violation(&g, &ord, *k);
            r.push(CheckRecord::flag("k-ordered", violation.is_none()));
            // positions are 1-based in reports
            let positions: Vec<serde_json::Value> = ord
                .order
                .iter()
                .enumerate()
                .map(|(i, &v)| json!({ "position": i + 1, "vertex": v, "d_plus": ord.dplus[i], "d_minus": ord.dminus[i] }))
                .collect();
            r.data = Some(json!({ "ordering": positions, "k_ordered_violation": violation }));
            Ok(Output::report(r).with_graph(g))
        }
        Command::Cycles(CyclesCmd::Find { input, k, certs }) => {
            let (g, digest) = read_graph(input)?;
            let run = many_cycle_lengths(&g, *k)?;
            let mut r = RunReport::new(echo, cli.seed);
            r.input_digest = Some(digest);
            r.push(CheckRecord::at_least("distinct-lengths", run.bound as f64, run.cycles.len() as f64));
            for c in &run.checks {
                r.push(CheckRecord::flag(c.name.clone(), c.pass));
            }
            if let Some(path) = certs {
                write_file(path, &serde_json::to_vec_pretty(&run.cycles)?)?;
                r.artifacts.push(path.display().to_string());
            }
            r.data = Some(json!({
                "lengths": run.cycles.lengths(),
                "bound": run.bound,
                "vine_lengths": run.vine_lengths,
                "good_lengths": run.good_lengths,
                "longest_forward_path": run.longest_forward_path,
                "antichain_size": run.antichain_size,
                "fair_leaves": run.fair_leaves,
                "checks": run.checks,
            }));
            Ok(Output::report(r).with_graph(g))
        }
        Command::Cycles(CyclesCmd::Oracle { input }) => {
            let (g, _) = read_graph(input)?;
            let lengths = cycle_length_oracle(&g)?;
            Ok(Output {
                json: json!({ "lengths": lengths.to_vec() }),
                pass: true,
                graph: Some(g),
            })
        }
        Command::Sumset(SumsetCmd::Build { k }) => {
            let pair = sumset_uv(*k)?;
            let seq = sequence_from_sumset(&pair)?;
            let mut r = RunReport::new(echo, cli.seed);
            r.push(CheckRecord::flag("difference-is-interval", pair.difference_is_interval()));
            r.push(CheckRecord::exact("sum-size", 10f64.powi(*k as i32), pair.sum_size as f64));
            r.push(CheckRecord::flag("ruzsa-floor", pair.ruzsa_floor_holds()));
            let values = seq.values()?;
            r.data = Some(json!({ "pair": pair, "sequence": values }));
            Ok(Output::report(r))
        }
        Command::Sumset(SumsetCmd::Search { base, max_size, window }) => {
            let search = sumset_search(*base, *max_size, *window)?;
            let mut r = RunReport::new(echo, cli.seed);
            let floor_ok = search
                .hits
                .iter()
                .all(|h| h.sum_size as f64 >= (h.difference_size as f64).powf(2.0 / 3.0) - 1e-9);
            r.push(CheckRecord::flag("ruzsa-floor", floor_ok));
            r.data = Some(to_value(&search));
            Ok(Output::report(r))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut text = serde_json::to_string_pretty(&out.json).expect("JSON values serialize");
    text.push('\n');
    let written = match &cli.json {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    let dot = match (&cli.dot, &out.graph) {
        (Some(path), Some(g)) => write_file(path, g.to_dot().as_bytes()),
        (Some(_), None) => Err(InputError("this command has no graph to write as DOT".into())),
        _ => Ok(()),
    };
    if let Err(InputError(msg)) = written.and(dot) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    if out.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
