//! `prime-weave` command line.
//!
//! Exit codes: 0 success, 1 verification failure or no labeling found,
//! 2 usage or input errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::graph::{build, parse_graph, serialize_graph, to_dot, FamilySpec, Graph, DEFAULT_ENUMERATION_CAP};
use crate::labelings::{label_graph, verify, Labeling};
use crate::numth::find_pillai_run;
use crate::solver::{
    count_labelings, scan_conjecture, solve, Budget, Outcome, ScanConfig, DEFAULT_COUNT_GUARD, DEFAULT_NODE_BUDGET,
};

#[derive(Parser, Debug)]
#[command(name = "prime-weave", version, about = "Prime vertex labelings of unicyclic graph families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family graph and print it as JSON (or DOT).
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        dot: bool,
    },
    /// Print the constructive prime labeling of a family graph.
    Label {
        #[command(flatten)]
        input: GraphInput,
        /// Print the graph JSON on its own line before the labeling, for
        /// piping into `verify --stdin`.
        #[arg(long)]
        pass_graph: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Check a labeling against a graph.
    Verify {
        #[arg(long, value_name = "PATH")]
        graph: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        labels: Option<PathBuf>,
        /// Read the graph and then the labeling as two JSON documents, or one
        /// {"graph": .., "labels": ..} object, from standard input.
        #[arg(long, conflicts_with_all = ["graph", "labels"])]
        stdin: bool,
    },
    /// Search for a prime labeling by backtracking.
    Solve {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Include elapsed time in the output.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Count prime labelings by brute force.
    Count {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_COUNT_GUARD)]
        guard: usize,
    },
    /// Solve every unicyclic graph up to --max-n vertices.
    Scan {
        #[arg(long, default_value_t = 9)]
        max_n: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        /// Also write the report to this file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Find the first run of --m consecutive integers with no member coprime
    /// to all the others.
    Pillai {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyName {
    Path,
    Cycle,
    Star,
    Hairy,
    Weed,
    Cps,
    Cyclepath,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    family: Option<FamilyName>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Args, Debug)]
struct GraphInput {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_name = "PATH", conflicts_with = "stdin")]
    graph: Option<PathBuf>,
    #[arg(long)]
    stdin: bool,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Node limit for each search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Wall-clock limit for each search; makes results timing dependent.
    #[arg(long, value_name = "MS")]
    time_limit_ms: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_nodes: Some(self.budget),
            max_time: self.time_limit_ms.map(Duration::from_millis),
        }
    }
}

enum CliError {
    /// Exit 2.
    Usage(String),
    /// Exit 1, with the payload already printed.
    Failed,
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

/// Runs one command. Payloads go to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(cli.command, stdin, stdout) {
        Ok(()) => 0,
        Err(CliError::Failed) => 1,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Gen { family, dot } => {
            let g = build(&family.spec()?)?;
            if dot {
                write!(out, "{}", to_dot(&g, None))?;
            } else {
                writeln!(out, "{}", serialize_graph(&g))?;
            }
            Ok(())
        }
        Command::Label { input, pass_graph, dot } => {
            let g = input.load(stdin)?;
            let labeling = label_graph(&g)?;
            if dot {
                write!(out, "{}", to_dot(&g, Some(&labeling)))?;
                return Ok(());
            }
            if pass_graph {
                writeln!(out, "{}", serialize_graph(&g))?;
            }
            writeln!(out, "{}", serde_json::to_string(&labeling)?)?;
            Ok(())
        }
        Command::Verify { graph, labels, stdin: from_stdin } => {
            let (g, labeling) = if from_stdin {
                read_bundle(stdin)?
            } else {
                let (Some(gp), Some(lp)) = (graph, labels) else {
                    return Err(CliError::Usage(
                        "verify needs --graph and --labels, or --stdin".to_string(),
                    ));
                };
                let g = parse_graph(&read_file(&gp, "--graph")?).map_err(|e| flag_error("--graph", e))?;
                let l: Labeling =
                    serde_json::from_str(&read_file(&lp, "--labels")?).map_err(|e| flag_error("--labels", e))?;
                (g, l)
            };
            let report = verify(&g, &labeling)?;
            writeln!(out, "{}", serde_json::to_string(&report)?)?;
            if report.is_prime_labeling() {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
        Command::Solve { input, budget, stats, dot } => {
            let g = input.load(stdin)?;
            let result = solve(&g, budget.budget());
            if dot {
                let labeling = match &result.outcome {
                    Outcome::Found(l) => Some(l),
                    _ => None,
                };
                write!(out, "{}", to_dot(&g, labeling))?;
            } else {
                let mut payload = json!({
                    "outcome": result.outcome.name(),
                    "nodes_expanded": result.nodes_expanded,
                    "backtracks": result.backtracks,
                });
                if let Outcome::Found(l) = &result.outcome {
                    payload["labels"] = serde_json::to_value(l)?;
                }
                if stats {
                    payload["elapsed_ms"] = json!(result.elapsed.as_secs_f64() * 1e3);
                }
                writeln!(out, "{payload}")?;
            }
            match result.outcome {
                Outcome::Found(_) => Ok(()),
                _ => Err(CliError::Failed),
            }
        }
        Command::Count { input, guard } => {
            let g = input.load(stdin)?;
            let count = count_labelings(&g, guard)?;
            writeln!(out, "{}", json!({ "count": count }))?;
            Ok(())
        }
        Command::Scan {
            max_n,
            budget,
            jobs,
            cap,
            out: out_path,
        } => {
            let report = scan_conjecture(&ScanConfig {
                max_n,
                budget: budget.budget(),
                jobs,
                cap,
            })?;
            let text = serde_json::to_string(&report)?;
            if let Some(path) = out_path {
                std::fs::write(&path, format!("{text}\n")).map_err(|e| flag_error("--out", e))?;
            }
            writeln!(out, "{text}")?;
            if report.counterexamples.is_empty() {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
        Command::Pillai { m, limit } => {
            let payload = match find_pillai_run(m, limit).map_err(|e| flag_error("--m", e))? {
                Some(run) => json!({ "found": true, "start": run.start, "length": run.length }),
                None => json!({ "found": false }),
            };
            writeln!(out, "{payload}")?;
            Ok(())
        }
    }
}

fn flag_error(flag: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{flag}: {e}"))
}

fn read_file(path: &Path, flag: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| flag_error(flag, format!("{}: {e}", path.display())))
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, CliError> {
        let family = self
            .family
            .ok_or_else(|| CliError::Usage("--family is required".to_string()))?;
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| CliError::Usage(format!("{flag} is required for --family {family:?}").to_lowercase()))
        };
        let n = need(self.n, "--n")?;
        let spec = match family {
            FamilyName::Path => FamilySpec::Path { n },
            FamilyName::Cycle => FamilySpec::Cycle { n },
            FamilyName::Star => FamilySpec::Star { n },
            FamilyName::Hairy => FamilySpec::HairyCycle { n, m: need(self.m, "--m")? },
            FamilyName::Weed => FamilySpec::BertrandWeed { n },
            FamilyName::Cps => FamilySpec::CyclePendantStar {
                n,
                levels: self.levels.unwrap_or(1),
            },
            FamilyName::Cyclepath => FamilySpec::CyclePath { n, m: need(self.m, "--m")? },
        };
        Ok(spec)
    }
}

impl GraphInput {
    fn load(&self, stdin: &mut dyn Read) -> Result<Graph, CliError> {
        if self.stdin {
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(|e| flag_error("--stdin", e))?;
            return parse_graph(&text).map_err(|e| flag_error("--stdin", e));
        }
        if let Some(path) = &self.graph {
            return parse_graph(&read_file(path, "--graph")?).map_err(|e| flag_error("--graph", e));
        }
        Ok(build(&self.family.spec()?)?)
    }
}

/// Graph then labeling from standard input: either two JSON documents in
/// sequence or a single `{"graph": .., "labels": ..}` object.
fn read_bundle(stdin: &mut dyn Read) -> Result<(Graph, Labeling), CliError> {
    let mut text = String::new();
    stdin.read_to_string(&mut text).map_err(|e| flag_error("--stdin", e))?;
    let docs = serde_json::Deserializer::from_str(&text)
        .into_iter::<Value>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| flag_error("--stdin", e))?;
    let (graph, labels) = match docs.as_slice() {
        [Value::Object(obj)] if obj.contains_key("graph") => {
            let labels = obj
                .get("labels")
                .cloned()
                .ok_or_else(|| flag_error("--stdin", "bundle is missing `labels`"))?;
            (obj["graph"].clone(), labels)
        }
        [graph, labels] => (graph.clone(), labels.clone()),
        _ => {
            return Err(flag_error(
                "--stdin",
                "expected a graph document followed by a labeling document",
            ))
        }
    };
    let g = Graph::try_from(graph).map_err(|e| flag_error("--stdin", e))?;
    let l: Labeling = serde_json::from_value(labels).map_err(|e| flag_error("--stdin", format!("labels: {e}")))?;
    Ok((g, l))
}
