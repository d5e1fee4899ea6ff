//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::graph::{FillIndex, Graph};
use crate::heuristics::{chordalize_with_order, dynamic_min_degree_order, mdo_order};
use crate::instances::{self, CavemanParams};
use crate::oracle::{brute_force_mccp, EnumerationBudget};
use crate::separation::FamilySet;
use crate::solver::{solve, ResultJson, SolverConfig, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_OPTIMAL: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "mccp",
    version,
    about = "Exact minimum chordal completion (minimum fill-in)"
)]
pub struct Cli {
    /// error, warn, info, debug or trace
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance to optimality (or until a limit) and print JSON.
    Solve(SolveArgs),
    /// Write a generated instance.
    Generate(GenerateArgs),
    /// Check that a fill-edge file is a chordal completion of an instance.
    Check {
        instance: PathBuf,
        /// One 0-based `u v` pair per line.
        completion: PathBuf,
    },
    /// Minimum-degree-ordering completion.
    Heuristic {
        instance: PathBuf,
        /// Recompute degrees during elimination.
        #[arg(long)]
        dynamic: bool,
    },
    /// Brute-force optimum by subset enumeration (small instances only).
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        max_subsets: u64,
    },
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// `.col`/`.dimacs` files are read as DIMACS, anything else as an edge list.
    pub instance: PathBuf,
    #[arg(long, default_value_t = 3600.0)]
    pub time_limit: f64,
    #[arg(long)]
    pub node_limit: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value = "i1,i2,i3,i4")]
    pub cuts: String,
    #[arg(long)]
    pub exact_i2: bool,
    #[arg(long)]
    pub exact_i3: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub max_cycles: usize,
    #[arg(long)]
    pub all_positions: bool,
    #[arg(long)]
    pub dynamic_mdo: bool,
    /// Also write the JSON result here.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: GenFamily,
    /// Output file; the instance goes to stdout when omitted.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Defaults to dimacs for `.col` outputs and edge list otherwise.
    #[arg(long, global = true)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
pub enum GenFamily {
    Grid {
        rows: usize,
        cols: usize,
    },
    Queen {
        rows: usize,
        cols: usize,
    },
    Caveman {
        alpha: usize,
        beta: usize,
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Mycielski {
        order: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Dimacs,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub instance: String,
    pub tool_version: String,
    pub seed: u64,
    pub started_at: String,
}

#[derive(Serialize)]
struct SolveOutput {
    #[serde(flatten)]
    result: ResultJson,
    manifest: RunManifest,
}

#[derive(Serialize)]
struct FillOutput {
    instance: String,
    n: usize,
    m: usize,
    mc: usize,
    size: usize,
    fill_edges: Vec<[usize; 2]>,
}

fn fill_output(g: &Graph, instance: &str, fill: &[FillIndex]) -> FillOutput {
    FillOutput {
        instance: instance.to_string(),
        n: g.n(),
        m: g.m(),
        mc: g.mc(),
        size: fill.len(),
        fill_edges: fill
            .iter()
            .map(|&f| {
                let (u, v) = g.fill_pair(f);
                [u, v]
            })
            .collect(),
    }
}

fn load(path: &Path) -> Result<Graph, String> {
    instances::load(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Parses `u v` lines (0-based, `#` comments) into fill indices of `g`.
pub fn parse_completion(g: &Graph, text: &str) -> Result<Vec<FillIndex>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| format!("line {}: bad vertex '{t}'", i + 1))
            })
            .collect::<Result<_, _>>()?;
        let [u, v] = nums[..] else {
            return Err(format!("line {}: expected two vertices", i + 1));
        };
        if u >= g.n() || v >= g.n() || u == v {
            return Err(format!(
                "line {}: {u} {v} is not a vertex pair of the instance",
                i + 1
            ));
        }
        let f = g.fill_index(u, v).ok_or_else(|| {
            format!(
                "line {}: {u} {v} is already an edge, not a fill edge",
                i + 1
            )
        })?;
        out.push(f);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn print_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, argv: &[String]) -> i32 {
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args, argv),
        Command::Generate(args) => cmd_generate(args),
        Command::Check {
            instance,
            completion,
        } => cmd_check(&instance, &completion),
        Command::Heuristic { instance, dynamic } => cmd_heuristic(&instance, dynamic),
        Command::Oracle {
            instance,
            max_subsets,
        } => cmd_oracle(&instance, max_subsets),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
    }
}

fn cmd_solve(args: SolveArgs, argv: &[String]) -> Result<i32, String> {
    let families: FamilySet = args.cuts.parse()?;
    let cfg = SolverConfig {
        delta: args.delta,
        families,
        exact_i2: args.exact_i2,
        exact_i3: args.exact_i3,
        max_cycles_per_call: args.max_cycles,
        time_limit_s: Some(args.time_limit),
        node_limit: args.node_limit,
        seed: args.seed,
        emit_all_positions: args.all_positions,
        dynamic_mdo: args.dynamic_mdo,
        verify_cuts: false,
        ..SolverConfig::default()
    };
    cfg.validate()?;
    let started_at = chrono::Utc::now().to_rfc3339();
    let g = load(&args.instance)?;
    let res = solve(&g, &cfg);
    let out = SolveOutput {
        result: res.to_json(&g, &instance_name(&args.instance), &cfg),
        manifest: RunManifest {
            command: argv.join(" "),
            instance: args.instance.display().to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: args.seed,
            started_at,
        },
    };
    let text = print_json(&out);
    println!("{text}");
    if let Some(path) = args.json_out {
        std::fs::write(&path, format!("{text}\n"))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(if res.status == Status::Optimal {
        EXIT_OK
    } else {
        EXIT_NOT_OPTIMAL
    })
}

fn cmd_generate(args: GenerateArgs) -> Result<i32, String> {
    let g = match args.family {
        GenFamily::Grid { rows, cols } => instances::gen_grid(rows, cols),
        GenFamily::Queen { rows, cols } => instances::gen_queen(rows, cols),
        GenFamily::Caveman {
            alpha,
            beta,
            gamma,
            seed,
        } => instances::gen_caveman(CavemanParams {
            alpha,
            beta,
            gamma,
            seed,
        }),
        GenFamily::Mycielski { order } => instances::mycielski(order),
    }
    .map_err(|e| e.to_string())?;
    let format = args.format.unwrap_or(match &args.output {
        Some(p) if instances::is_dimacs_path(p) => Format::Dimacs,
        _ => Format::EdgeList,
    });
    let text = match format {
        Format::Dimacs => instances::write_dimacs(&g),
        Format::EdgeList => instances::write_edge_list(&g),
    };
    match args.output {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            println!("{} {}", g.n(), g.m());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(instance: &Path, completion: &Path) -> Result<i32, String> {
    let g = load(instance)?;
    let text = std::fs::read_to_string(completion)
        .map_err(|e| format!("{}: {e}", completion.display()))?;
    let fill = parse_completion(&g, &text)?;
    if g.is_valid_completion(&fill) {
        println!("valid chordal completion, size {}", fill.len());
        Ok(EXIT_OK)
    } else {
        let h = g.adjacency_with(fill.iter().copied());
        let witness = h
            .find_chordless_cycle()
            .map(|c| format!(" (chordless cycle {c})"))
            .unwrap_or_default();
        println!("not chordal{witness}, size {}", fill.len());
        Ok(EXIT_NOT_OPTIMAL)
    }
}

fn cmd_heuristic(instance: &Path, dynamic: bool) -> Result<i32, String> {
    let g = load(instance)?;
    let order = if dynamic {
        dynamic_min_degree_order(&g)
    } else {
        mdo_order(&g)
    };
    let fill = chordalize_with_order(&g, &order);
    println!(
        "{}",
        print_json(&fill_output(&g, &instance_name(instance), &fill))
    );
    Ok(EXIT_OK)
}

fn cmd_oracle(instance: &Path, max_subsets: u64) -> Result<i32, String> {
    let g = load(instance)?;
    let budget = EnumerationBudget {
        max_subsets,
        max_cardinality: None,
    };
    let fill = brute_force_mccp(&g, budget).map_err(|e| e.to_string())?;
    println!(
        "{}",
        print_json(&fill_output(&g, &instance_name(instance), &fill))
    );
    Ok(EXIT_OK)
}
