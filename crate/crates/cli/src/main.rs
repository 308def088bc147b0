//! `escad`: solvers, instance generators, decomposition and verification.
//!
//! Exit codes: 0 decided, 1 invalid solution, 2 input error, 3 resource cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use escad_core::dp::{solve_dp_with, DpError, DpOptions, DEFAULT_MAX_TABLE_ENTRIES};
use escad_core::format::{parse_graph, parse_solution, write_graph, write_solution};
use escad_core::gadgets::{
    gen_binpack, gen_mcc, gen_vc3, lift_binpack_solution, lift_mcc_solution, normalize_mcc,
    parse_edge_graph, parse_mcc, subdivide, to_exact_binpacking, BinPackingInstance,
    ExactBinPacking, GadgetMetadata,
};
use escad_core::oracle::{solve_brute_with_cap, DEFAULT_CAP};
use escad_core::treedec::{heuristic_decompose, make_nice, parse_td, write_td};
use escad_core::vi::{find_separator, solve_vi_with, ViError, ViOptions, DEFAULT_NODE_CAP};
use escad_core::{ArcMultiset, MultiDigraph};

#[derive(Parser)]
#[command(name = "escad", version, about = "Exact solvers for Eulerian strong component arc deletion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether at most k deletions balance every strong component.
    Solve(SolveArgs),
    /// Generate a reduction instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a deletion set against a graph and budget.
    Verify(VerifyArgs),
    /// Write a heuristic tree decomposition.
    Decompose(DecomposeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Brute,
    Dp,
    Vi,
}

impl Alg {
    fn name(self) -> &'static str {
        match self {
            Alg::Brute => "brute",
            Alg::Dp => "dp",
            Alg::Vi => "vi",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long)]
    graph: PathBuf,
    /// Deletion budget; ignored with --optimize.
    #[arg(long, required_unless_present = "optimize")]
    k: Option<usize>,
    /// Tree decomposition for dp; a heuristic one is computed otherwise.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Separator bound for vi; the smallest feasible bound is searched otherwise.
    #[arg(long)]
    vi_bound: Option<usize>,
    #[arg(long)]
    emit_solution: Option<PathBuf>,
    /// Report the minimum solution size instead of deciding a fixed k.
    #[arg(long)]
    optimize: bool,
    /// Candidate sets for brute (default 10^8) or separator subsets for vi (default 10^7).
    #[arg(long)]
    max_subsets: Option<u128>,
    #[arg(long, default_value_t = DEFAULT_MAX_TABLE_ENTRIES)]
    max_table_entries: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    max_search_nodes: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Multicolored clique reduction from a `p mcc` file.
    Mcc {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: GenOut,
        /// Drop vertices that cannot be in any multicolored clique first.
        #[arg(long)]
        normalize: bool,
        /// Comma-separated clique, one vertex per color, to lift into a solution.
        #[arg(long, requires = "emit_solution")]
        clique: Option<String>,
        #[arg(long)]
        emit_solution: Option<PathBuf>,
    },
    /// Bin packing reduction, padded to an exact instance first.
    Binpack {
        /// Comma-separated item sizes.
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        bins: usize,
        #[arg(long)]
        capacity: usize,
        #[command(flatten)]
        out: GenOut,
        /// Packing of the padded items, bins separated by `;`, e.g. "1,2;3,4".
        #[arg(long, requires = "emit_solution")]
        packing: Option<String>,
        #[arg(long)]
        emit_solution: Option<PathBuf>,
    },
    /// Cubic vertex cover reduction from a `p edge` file.
    Vc3 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: GenOut,
    },
    /// Subdivide every arc copy, producing a simple digraph.
    Subdivide {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        out: GenOut,
        /// Solution of the input graph to map onto the subdivision.
        #[arg(long, requires = "emit_solution")]
        solution: Option<PathBuf>,
        #[arg(long)]
        emit_solution: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenOut {
    #[arg(long)]
    out: PathBuf,
    /// Metadata sidecar; defaults to `<out>.meta`.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

struct Exit {
    code: u8,
    err: anyhow::Error,
}

fn input(err: impl Into<anyhow::Error>) -> Exit {
    Exit { code: 2, err: err.into() }
}

fn resource(err: impl Into<anyhow::Error>) -> Exit {
    Exit { code: 3, err: err.into() }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(input)
}

fn write(path: &Path, text: &str) -> Result<(), Exit> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(input)
}

fn load_graph(path: &Path) -> Result<MultiDigraph, Exit> {
    parse_graph(&read(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(input)
}

fn load_solution(path: &Path) -> Result<ArcMultiset, Exit> {
    parse_solution(&read(path)?)
        .with_context(|| format!("in {}", path.display()))
        .map_err(input)
}

fn parse_list(text: &str) -> Result<Vec<usize>, Exit> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().with_context(|| format!("bad number {t:?}")))
        .collect::<anyhow::Result<_>>()
        .map_err(input)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Gen(g) => generate(g),
        Command::Verify(a) => verify(a),
        Command::Decompose(a) => decompose(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {:#}", e.err);
            ExitCode::from(e.code)
        }
    }
}

fn dp_error(e: DpError) -> Exit {
    match e {
        DpError::BagTooLarge { .. } | DpError::TableLimit { .. } => resource(e),
        _ => input(e),
    }
}

fn vi_error(e: ViError) -> Exit {
    match e {
        ViError::NotSimple { .. } | ViError::NoSeparator(_) | ViError::InvalidSeparator { .. } => {
            input(e)
        }
        _ => resource(e),
    }
}

fn solve(a: &SolveArgs) -> Result<u8, Exit> {
    if a.threads == 0 {
        return Err(input(anyhow!("--threads must be at least 1")));
    }
    let g = load_graph(&a.graph)?;
    let k = if a.optimize { g.m() } else { a.k.expect("clap enforces --k") };
    println!(
        "STAT command=solve alg={} graph={} k={}{}",
        a.alg.name(),
        a.graph.display(),
        k,
        if a.optimize { " optimize" } else { "" }
    );
    println!("STAT n={} m={} max_degree={}", g.n(), g.m(), g.max_degree());
    let start = Instant::now();
    let (optimum, witness) = match a.alg {
        Alg::Brute => {
            let r = solve_brute_with_cap(&g, k, a.max_subsets.unwrap_or(DEFAULT_CAP)).map_err(resource)?;
            (r.optimum, r.witness)
        }
        Alg::Dp => {
            let td = match &a.td {
                Some(path) => parse_td(&read(path)?)
                    .with_context(|| format!("in {}", path.display()))
                    .map_err(input)?,
                None => heuristic_decompose(&g),
            };
            let nd = make_nice(&g, &td).map_err(input)?;
            println!("STAT width={}", nd.width());
            let opts = DpOptions {
                max_table_entries: a.max_table_entries,
            };
            let r = solve_dp_with(&g, k, &nd, &opts).map_err(dp_error)?;
            println!(
                "STAT table_max={} table_total={}",
                r.stats.max_entries, r.stats.total_entries
            );
            (r.optimum, r.witness)
        }
        Alg::Vi => {
            if let Some(((u, v), c)) = g.arcs().find(|&(_, c)| c > 1) {
                return Err(vi_error(ViError::NotSimple { u, v, count: c }));
            }
            let opts = ViOptions {
                max_subsets: a.max_subsets.unwrap_or(ViOptions::default().max_subsets),
                max_nodes: a.max_search_nodes,
            };
            let bound = match a.vi_bound {
                Some(b) => b,
                None => smallest_bound(&g, opts.max_subsets)?,
            };
            println!("STAT vi_bound={bound}");
            let r = solve_vi_with(&g, k, bound, &opts).map_err(vi_error)?;
            print!("{}", r.stats.to_text());
            (r.optimum, r.witness)
        }
    };
    println!("STAT time_ms={}", start.elapsed().as_millis());
    match (optimum, witness) {
        (Some(opt), Some(s)) if opt <= k => {
            if let Some(path) = &a.emit_solution {
                write(path, &write_solution(&s))?;
                println!("STAT solution={}", path.display());
            }
            println!("RESULT YES k={opt}");
        }
        _ => println!("RESULT NO"),
    }
    Ok(0)
}

fn smallest_bound(g: &MultiDigraph, max_subsets: u128) -> Result<usize, Exit> {
    for b in 0..=g.n() {
        if find_separator(g, b, max_subsets).map_err(vi_error)?.is_some() {
            return Ok(b);
        }
    }
    unreachable!("the whole vertex set is a separator")
}

fn emit_instance(out: &GenOut, g: &MultiDigraph, meta: &GadgetMetadata) -> Result<(), Exit> {
    write(&out.out, &write_graph(g))?;
    let meta_path = out.meta.clone().unwrap_or_else(|| {
        let mut p = out.out.clone().into_os_string();
        p.push(".meta");
        p.into()
    });
    write(&meta_path, &meta.to_text())?;
    println!("STAT n={} m={}", g.n(), g.m());
    println!("STAT graph={} meta={}", out.out.display(), meta_path.display());
    println!("k={}", meta.k);
    Ok(())
}

fn generate(cmd: &GenCommand) -> Result<u8, Exit> {
    match cmd {
        GenCommand::Mcc {
            input: path,
            out,
            normalize,
            clique,
            emit_solution,
        } => {
            let mut inst = parse_mcc(&read(path)?)
                .with_context(|| format!("in {}", path.display()))
                .map_err(input)?;
            let mut ids: Vec<usize> = (1..=inst.n()).collect();
            if *normalize {
                (inst, ids) = normalize_mcc(&inst);
                println!("STAT normalized_vertices={}", inst.n());
            }
            let (g, _, meta) = gen_mcc(&inst).map_err(input)?;
            emit_instance(out, &g, &meta)?;
            if let (Some(clique), Some(sol)) = (clique, emit_solution) {
                let mut local = Vec::new();
                for v in parse_list(clique)? {
                    let idx = ids
                        .iter()
                        .position(|&o| o == v)
                        .ok_or_else(|| input(anyhow!("clique vertex {v} was removed or does not exist")))?;
                    local.push(idx + 1);
                }
                let s = lift_mcc_solution(&inst, &local).map_err(input)?;
                write(sol, &write_solution(&s))?;
                println!("STAT solution={}", sol.display());
            }
        }
        GenCommand::Binpack {
            sizes,
            bins,
            capacity,
            out,
            packing,
            emit_solution,
        } => {
            let inst = BinPackingInstance::new(parse_list(sizes)?, *bins, *capacity).map_err(input)?;
            match to_exact_binpacking(&inst) {
                ExactBinPacking::Exact(exact) => {
                    println!("STAT padded_items={}", exact.sizes().len());
                    let (g, _, meta) = gen_binpack(&exact).map_err(input)?;
                    emit_instance(out, &g, &meta)?;
                    if let (Some(packing), Some(sol)) = (packing, emit_solution) {
                        let bins: Vec<Vec<usize>> =
                            packing.split(';').map(parse_list).collect::<Result<_, _>>()?;
                        let s = lift_binpack_solution(&exact, &bins).map_err(input)?;
                        write(sol, &write_solution(&s))?;
                        println!("STAT solution={}", sol.display());
                    }
                }
                trivial => {
                    let verdict = if matches!(trivial, ExactBinPacking::TriviallyYes) { "yes" } else { "no" };
                    if packing.is_some() {
                        return Err(input(anyhow!("instance is trivially {verdict}; no packing to lift")));
                    }
                    println!("STAT trivial={verdict}");
                    let (g, k) = trivial.trivial_escad().expect("trivial instance");
                    let meta = GadgetMetadata {
                        generator: "binpack".into(),
                        params: vec![("trivial".into(), verdict.into())],
                        k,
                        roles: (1..=g.n()).map(|v| format!("v_{v}")).collect(),
                    };
                    emit_instance(out, &g, &meta)?;
                }
            }
        }
        GenCommand::Vc3 { input: path, k, out } => {
            let ug = parse_edge_graph(&read(path)?)
                .with_context(|| format!("in {}", path.display()))
                .map_err(input)?;
            let (g, _, meta) = gen_vc3(&ug, *k).map_err(input)?;
            emit_instance(out, &g, &meta)?;
        }
        GenCommand::Subdivide {
            graph,
            out,
            solution,
            emit_solution,
        } => {
            let g = load_graph(graph)?;
            let sub = subdivide(&g);
            emit_instance(out, &sub.graph, &sub.meta)?;
            if let (Some(path), Some(sol)) = (solution, emit_solution) {
                let s = load_solution(path)?;
                g.remove(&s)
                    .with_context(|| format!("solution {} does not fit the graph", path.display()))
                    .map_err(input)?;
                write(sol, &write_solution(&sub.lift_solution(&s)))?;
                println!("STAT solution={}", sol.display());
            }
        }
    }
    Ok(0)
}

fn verify(a: &VerifyArgs) -> Result<u8, Exit> {
    let g = load_graph(&a.graph)?;
    let s = load_solution(&a.solution)?;
    // A deletion the graph cannot supply makes the solution invalid, not the input.
    let ok = escad_core::digraph::verify_solution(&g, a.k, &s).unwrap_or(false);
    println!("STAT deletions={} k={}", s.size(), a.k);
    if ok {
        println!("VALID");
        Ok(0)
    } else {
        println!("INVALID");
        Ok(1)
    }
}

fn decompose(a: &DecomposeArgs) -> Result<u8, Exit> {
    let g = load_graph(&a.graph)?;
    let td = heuristic_decompose(&g);
    write(&a.out, &write_td(&td, g.n()))?;
    println!("STAT bags={}", td.bags.len());
    println!("width={}", td.width());
    Ok(0)
}
