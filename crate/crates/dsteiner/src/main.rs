use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dsteiner::graph::{
    parse_instance, parse_solution, random_digraph, random_planar_digraph, random_terminals, serialize_instance, serialize_solution,
    validate_dsn, validate_scss, DsnInstance, Instance, ScssInstance, UndirectedGraph,
};
use dsteiner::harness::{default_params, run_experiment, Verdict, EXPERIMENTS};
use dsteiner::problems::{normalize_gridtiling, parse_gridtiling, parse_psi, plant_gridtiling, random_psi, serialize_gridtiling, serialize_psi, PlantAnswer};
use dsteiner::reductions::{compose_scss, reduce_gt_to_dsn, reduce_psi_to_scss, BorderPolicy, ReductionArtifact};
use dsteiner::solvers::{
    exact_dsn, exact_scss, scss_treewidth_dp, scss_two_approx, treewidth_exact_small, treewidth_upper, BnbOptions, SolveError, SolveResult,
    EXACT_TREEWIDTH_LIMIT,
};
use dsteiner::structure::{minimalize, verify_structure};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "dsteiner", version, about = "Directed Steiner solvers, reduction generators and checks")]
struct Cli {
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Seconds per solver call.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    /// Write outputs into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Seeded instance generators.
    Gen(GenArgs),
    /// Build a hardness instance from a source instance.
    Reduce {
        #[arg(value_enum)]
        kind: ReduceKind,
        file: PathBuf,
        /// Border rule for the main gadgets (scss-planar only).
        #[arg(long, value_enum, default_value_t = Policy::Strict)]
        policy: Policy,
        /// Shift every Grid Tiling pair by this much first (n grows by it).
        #[arg(long, default_value_t = 0)]
        shift: usize,
    },
    Solve {
        #[arg(value_enum)]
        problem: Problem,
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Bnb)]
        method: Method,
        /// Decide "weight ≤ budget" instead of optimizing.
        #[arg(long)]
        budget: Option<u64>,
    },
    Analyze {
        #[command(subcommand)]
        what: Analyze,
    },
    /// Check a solution file against an instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run a named experiment, or `all`.
    Experiment {
        name: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Number of seeded cases.
        #[arg(long)]
        seeds: Option<u64>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 12)]
    arcs: usize,
    #[arg(long, default_value_t = 9)]
    wmax: u64,
    /// Extra pairs per Grid Tiling cell.
    #[arg(long, default_value_t = 1)]
    noise: usize,
    #[arg(long)]
    no: bool,
    /// PSI host size and edge count.
    #[arg(long, default_value_t = 6)]
    host_n: usize,
    #[arg(long, default_value_t = 7)]
    host_m: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Gridtiling,
    Psi,
    Scss,
    Dsn,
    Planar,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    ScssPlanar,
    DsnPlanar,
    PsiScss,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Strict,
    Relaxed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    Scss,
    Dsn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Bnb,
    Twdp,
    Dst2x,
}

#[derive(Subcommand)]
enum Analyze {
    /// Decompose a solution (minimalized first) and check the structural properties.
    Structure {
        #[arg(long)]
        root: Option<usize>,
        instance: PathBuf,
        /// Defaults to an optimal solution computed on the spot.
        solution: Option<PathBuf>,
    },
    /// Treewidth of the underlying undirected graph with a decomposition.
    Tw { instance: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned())
}

/// Writes `files` into `--out`, or prints them to stdout when no directory is set.
fn emit(out: Option<&Path>, files: &[(String, String)]) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, text) in files {
                let path = dir.join(name);
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            for (_, text) in files {
                print!("{text}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let timeout = cli.timeout.map(Duration::from_secs_f64);
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::Gen(g) => gen(&g, cli.seed, out)?,
        Cmd::Reduce { kind, file, policy, shift } => reduce(kind, &file, policy, shift, out)?,
        Cmd::Solve { problem, file, method, budget } => return solve(problem, &file, method, budget, timeout, out),
        Cmd::Analyze { what } => analyze(what, timeout, out)?,
        Cmd::Verify { instance, solution, budget } => return verify(&instance, &solution, budget),
        Cmd::Experiment { name, k, n, seeds } => return experiment(&name, k, n, seeds, cli.seed, timeout, out),
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(g: &GenArgs, seed: u64, out: Option<&Path>) -> Result<()> {
    let (name, text) = match g.kind {
        GenKind::Gridtiling => {
            let answer = if g.no { PlantAnswer::No } else { PlantAnswer::Yes };
            let inst = plant_gridtiling(seed, g.k, g.n, g.noise, answer)?;
            (format!("gt-k{}-n{}-s{seed}.gt", g.k, g.n), serialize_gridtiling(&inst))
        }
        GenKind::Psi => {
            let inst = random_psi(seed, g.k, g.host_n, g.host_m);
            (format!("psi-l{}-s{seed}.psi", g.k), serialize_psi(&inst))
        }
        GenKind::Scss | GenKind::Dsn => {
            let needed = if g.kind == GenKind::Scss { g.k } else { 2 * g.k };
            if needed > g.n {
                bail!("{needed} distinct endpoints need at least that many vertices (n={})", g.n);
            }
            let graph = random_digraph(seed, g.n, g.arcs, g.wmax);
            let inst = if g.kind == GenKind::Scss {
                Instance::Scss(ScssInstance::new(graph, random_terminals(seed, g.n, g.k))?)
            } else {
                let ends = random_terminals(seed, g.n, 2 * g.k);
                Instance::Dsn(DsnInstance::new(graph, ends.chunks(2).map(|c| (c[0], c[1])).collect())?)
            };
            (format!("rand-n{}-m{}-k{}-s{seed}.inst", g.n, g.arcs, g.k), serialize_instance(&inst))
        }
        GenKind::Planar => {
            let graph = random_planar_digraph(seed, g.n, g.n, 0.8, g.wmax);
            let terminals = random_terminals(seed, graph.vertex_count(), g.k);
            let inst = Instance::Scss(ScssInstance::new(graph, terminals)?);
            (format!("grid-{}x{}-k{}-s{seed}.inst", g.n, g.n, g.k), serialize_instance(&inst))
        }
    };
    emit(out, &[(name, text)])
}

fn reduce(kind: ReduceKind, file: &Path, policy: Policy, shift: usize, out: Option<&Path>) -> Result<()> {
    let text = read(file)?;
    let gt = || -> Result<_> {
        let g = parse_gridtiling(&text)?;
        Ok(if shift > 0 { normalize_gridtiling(&g, shift) } else { g })
    };
    let artifact: ReductionArtifact = match kind {
        ReduceKind::ScssPlanar => {
            let policy = match policy {
                Policy::Strict => BorderPolicy::Strict,
                Policy::Relaxed => BorderPolicy::Relaxed,
            };
            compose_scss(&gt()?, policy)?.artifact()
        }
        ReduceKind::DsnPlanar => reduce_gt_to_dsn(&gt()?)?.artifact(),
        ReduceKind::PsiScss => reduce_psi_to_scss(&parse_psi(&text)?)?.artifact(),
    };
    let base = format!("{}.{}", stem(file), artifact.reduction);
    let instance = serialize_instance(&artifact.instance);
    let meta = artifact.metadata();
    if out.is_some() {
        emit(out, &[(format!("{base}.inst"), instance), (format!("{base}.meta"), meta)])
    } else {
        let commented: String = meta.lines().map(|l| format!("# {l}\n")).collect();
        emit(None, &[(String::new(), commented + &instance)])
    }
}

fn result_text(r: &SolveResult, method: Method) -> String {
    let method = match method {
        Method::Bnb => "bnb",
        Method::Twdp => "twdp",
        Method::Dst2x => "dst2x",
    };
    format!(
        "method {method}\nweight {}\noptimal {}\nlower_bound {}\nnodes {}\n{}",
        r.weight,
        r.optimal,
        r.lower_bound,
        r.nodes_explored,
        serialize_solution(&r.solution)
    )
}

fn solve(problem: Problem, file: &Path, method: Method, budget: Option<u64>, timeout: Option<Duration>, out: Option<&Path>) -> Result<ExitCode> {
    let inst = load(file)?;
    let scss = |inst: &Instance| match inst {
        Instance::Scss(s) => Ok(s.clone()),
        Instance::Dsn(_) => bail!("{} holds a DSN instance; use `solve dsn`", file.display()),
    };
    let opts = BnbOptions { upper_bound: budget, budget_only: budget, timeout };
    let result = match (problem, method) {
        (Problem::Scss, Method::Bnb) => exact_scss(&scss(&inst)?, &opts),
        (Problem::Dsn, Method::Bnb) => exact_dsn(&inst.to_dsn(), &opts),
        (Problem::Scss, Method::Twdp) => {
            let s = scss(&inst)?;
            let (_, td) = treewidth_upper(&UndirectedGraph::from_digraph(&s.graph));
            scss_treewidth_dp(&s, &td)
        }
        (Problem::Scss, Method::Dst2x) => {
            let s = scss(&inst)?;
            scss_two_approx(&s, s.terminals[0])
        }
        (Problem::Dsn, _) => bail!("only bnb solves DSN"),
    };
    let name = format!("{}.solution", stem(file));
    match result {
        Ok(r) => {
            let mut text = result_text(&r, method);
            if let Some(b) = budget {
                text = format!("budget {b}\ndecision {}\n{text}", if r.weight <= b { "YES" } else { "NO" });
            }
            emit(out, &[(name, text)])?;
            Ok(ExitCode::SUCCESS)
        }
        Err(SolveError::NoneWithin { bound, nodes }) => {
            emit(out, &[(name, format!("budget {bound}\ndecision NO\nnodes {nodes}\n"))])?;
            Ok(ExitCode::SUCCESS)
        }
        Err(SolveError::Infeasible) => {
            emit(out, &[(name, "decision INFEASIBLE\n".into())])?;
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ SolveError::Timeout { .. }) => {
            emit(out, &[(name, format!("decision UNKNOWN\nreason {e}\n"))])?;
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.into()),
    }
}

fn analyze(what: Analyze, timeout: Option<Duration>, out: Option<&Path>) -> Result<()> {
    match what {
        Analyze::Structure { root, instance, solution } => {
            let inst = match load(&instance)? {
                Instance::Scss(s) => s,
                Instance::Dsn(_) => bail!("structure analysis needs an SCSS instance"),
            };
            let sol = match solution {
                Some(p) => parse_solution(&inst.graph, &read(&p)?)?,
                None => exact_scss(&inst, &BnbOptions { timeout, ..BnbOptions::default() })?.solution,
            };
            let m = minimalize(&inst, &sol)?;
            let root = root.unwrap_or(inst.terminals[0]);
            let report = verify_structure(&inst, &m, root)?;
            emit(out, &[(format!("{}.structure", stem(&instance)), format!("{report}\n"))])
        }
        Analyze::Tw { instance } => {
            let inst = load(&instance)?;
            let g = UndirectedGraph::from_digraph(inst.graph());
            let (td, exact) = if g.vertex_count() <= EXACT_TREEWIDTH_LIMIT {
                (treewidth_exact_small(&g)?, true)
            } else {
                (treewidth_upper(&g).1, false)
            };
            let mut text = format!("treewidth {}\nexact {exact}\nbags {}\n", td.width(), td.bags.len());
            for (i, bag) in td.bags.iter().enumerate() {
                let vs: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
                text += &format!("bag {i} {}\n", vs.join(" "));
            }
            for (a, b) in &td.edges {
                text += &format!("edge {a} {b}\n");
            }
            emit(out, &[(format!("{}.tw", stem(&instance)), text)])
        }
    }
}

fn verify(instance: &Path, solution: &Path, budget: Option<u64>) -> Result<ExitCode> {
    let inst = load(instance)?;
    let sol = parse_solution(inst.graph(), &read(solution)?)?;
    let feasible = match &inst {
        Instance::Scss(s) => validate_scss(s, &sol)?,
        Instance::Dsn(d) => validate_dsn(d, &sol)?,
    };
    let within = budget.is_none_or(|b| sol.weight() <= b);
    println!("weight {}", sol.weight());
    println!("feasible {feasible}");
    if let Some(b) = budget {
        println!("budget {b}\nwithin_budget {within}");
    }
    let ok = feasible && within;
    println!("verdict {}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn experiment(
    name: &str,
    k: Option<usize>,
    n: Option<Vec<usize>>,
    seeds: Option<u64>,
    seed_base: u64,
    timeout: Option<Duration>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let names: Vec<&str> = if name == "all" { EXPERIMENTS.to_vec() } else { vec![name] };
    let mut worst = Verdict::Pass;
    for name in names {
        let mut params = default_params(name)?;
        params.seed_base = seed_base;
        params.k = k.unwrap_or(params.k);
        params.n = n.clone().unwrap_or(params.n);
        params.seeds = seeds.unwrap_or(params.seeds);
        params.timeout = timeout.or(params.timeout);
        let report = run_experiment(name, &params)?;
        emit(out, &[(format!("{name}.report"), format!("{report}\n")), (format!("{name}.tsv"), report.table())])?;
        if out.is_some() {
            println!("{name}: {}", report.verdict());
        }
        worst = match (worst, report.verdict()) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        };
    }
    Ok(match worst {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::FAILURE,
        Verdict::Inconclusive => ExitCode::from(2),
    })
}
