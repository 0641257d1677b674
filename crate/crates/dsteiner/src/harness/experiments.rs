use super::oracle::{connector_oracle, main_oracle, OracleOutcome};
use super::report::{CaseRecord, ExperimentParams, ExperimentReport};
use crate::graph::{
    planarity_check, random_digraph, random_planar_digraph, random_terminals, scss_feasible_mask, validate_dsn, validate_scss,
    Instance, ScssInstance, UndirectedGraph, Weight,
};
use crate::problems::{normalize_gridtiling, plant_gridtiling, random_psi, solve_gridtiling, solve_psi, GridTilingInstance, Pair, PlantAnswer};
use crate::reductions::{
    b_star, build_connector, build_main, c_star, check_gadget_interface, compose_scss, connector_canonical, connector_connectedness,
    connector_represents, dsn_witness, m_star, main_canonical, main_connectedness, main_represents, plant_composable,
    psi_witness, reduce_gt_to_dsn, reduce_psi_to_scss, scss_witness, w_star, BorderPolicy,
};
use crate::solvers::{decide_scss, exact_dsn, exact_scss, min_vertex_count, treewidth_exact_small, vertexize, BnbOptions, Decision, SolveError};
use crate::structure::{is_minimal, minimalize, treewidth_le_2, verify_structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};
use thiserror::Error;

pub const EXPERIMENTS: &[&str] = &[
    "gadget-connector",
    "gadget-main",
    "scss-constructive",
    "dsn-roundtrip",
    "psi-roundtrip",
    "structure-sweep",
    "vertexize-equiv",
    "tw2-recognizer",
];

/// Gadget sizes whose canonical sets are always checked.
pub const CANONICAL_SIZES: std::ops::RangeInclusive<usize> = 2..=6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("unknown experiment {0:?} (expected one of {list})", list = EXPERIMENTS.join(", "))]
    UnknownExperiment(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

type Job = Box<dyn FnOnce() -> CaseRecord + Send>;

fn job(f: impl FnOnce() -> CaseRecord + Send + 'static) -> Job {
    Box::new(f)
}

/// Runs the cases in parallel; the report keeps submission order.
fn run_jobs(jobs: Vec<Job>) -> Vec<CaseRecord> {
    jobs.into_par_iter()
        .map(|j| {
            let start = Instant::now();
            let mut rec = j();
            rec.runtime = start.elapsed();
            rec
        })
        .collect()
}

fn solver_error(rec: CaseRecord, e: SolveError) -> CaseRecord {
    match e {
        SolveError::Timeout { nodes, .. } => rec.nodes(nodes).unknown(e.to_string()),
        other => rec.fail(other.to_string()),
    }
}

fn bnb(timeout: Option<Duration>) -> BnbOptions {
    BnbOptions { timeout, ..BnbOptions::default() }
}

pub fn default_params(name: &str) -> Result<ExperimentParams, HarnessError> {
    let minutes = |m: u64| Some(Duration::from_secs(60 * m));
    let (k, n, seeds, timeout) = match name {
        "gadget-connector" => (1, vec![2], 1, minutes(30)),
        "gadget-main" => (1, vec![2, 3], 1, minutes(30)),
        "scss-constructive" => (2, vec![2, 3], 10, None),
        "dsn-roundtrip" => (2, vec![2, 3], 10, minutes(10)),
        "psi-roundtrip" => (3, vec![6], 20, minutes(10)),
        "structure-sweep" => (6, vec![5], 50, minutes(10)),
        "vertexize-equiv" => (3, vec![5], 20, minutes(10)),
        "tw2-recognizer" => (0, vec![6], 500, None),
        _ => return Err(HarnessError::UnknownExperiment(name.to_string())),
    };
    Ok(ExperimentParams { k, n, seeds, seed_base: 1, timeout })
}

pub fn run_experiment(name: &str, params: &ExperimentParams) -> Result<ExperimentReport, HarnessError> {
    let (constants, jobs) = match name {
        "gadget-connector" => gadget_connector(params)?,
        "gadget-main" => gadget_main(params)?,
        "scss-constructive" => scss_constructive(params)?,
        "dsn-roundtrip" => dsn_roundtrip(params)?,
        "psi-roundtrip" => psi_roundtrip(params)?,
        "structure-sweep" => structure_sweep(params)?,
        "vertexize-equiv" => vertexize_equiv(params)?,
        "tw2-recognizer" => tw2_recognizer(params)?,
        _ => return Err(HarnessError::UnknownExperiment(name.to_string())),
    };
    Ok(ExperimentReport { name: name.to_string(), params: params.clone(), constants, cases: run_jobs(jobs) })
}

type Plan = (Vec<(String, Weight)>, Vec<Job>);

fn seeds(p: &ExperimentParams) -> std::ops::Range<u64> {
    p.seed_base..p.seed_base + p.seeds
}

fn require_n(p: &ExperimentParams, min: usize) -> Result<(), HarnessError> {
    match p.n.iter().find(|&&n| n < min) {
        Some(n) => Err(HarnessError::BadParams(format!("n={n} is below {min}"))),
        None if p.n.is_empty() => Err(HarnessError::BadParams("no n given".into())),
        None => Ok(()),
    }
}

fn represented(out: &OracleOutcome) -> String {
    let labels: Vec<String> = out.optima.iter().map(|(_, r)| r.clone().unwrap_or_else(|| "none".into())).collect();
    format!("{} optima representing [{}]", out.optima.len(), labels.join(" "))
}

fn gadget_connector(p: &ExperimentParams) -> Result<Plan, HarnessError> {
    require_n(p, 2)?;
    let constants = CANONICAL_SIZES.map(|n| (format!("C*_{n}"), c_star(n))).collect();
    let mut jobs = Vec::new();
    for n in CANONICAL_SIZES {
        for i in 1..=n {
            jobs.push(job(move || {
                let rec = CaseRecord::new(format!("canonical n={n} i={i}")).budget(c_star(n));
                let g = match build_connector(n) {
                    Ok(g) => g,
                    Err(e) => return rec.fail(e.to_string()),
                };
                let rec = rec.check(g.target == c_star(n), "gadget target equals C*");
                match connector_canonical(&g, i) {
                    Ok(s) => rec
                        .achieved(s.weight())
                        .check(s.weight() == c_star(n), "weight equals C*")
                        .check(connector_connectedness(&g, &s) == Ok(true), "connectedness")
                        .check(connector_represents(&g, &s) == Ok(Some(i)), "represents its index"),
                    Err(e) => rec.fail(e.to_string()),
                }
            }));
        }
    }
    for &n in &p.n {
        let timeout = p.timeout;
        jobs.push(job(move || {
            let rec = CaseRecord::new(format!("oracle n={n}")).budget(c_star(n));
            let g = build_connector(n).expect("n >= 2");
            match connector_oracle(&g, &[], timeout) {
                Ok(out) => rec
                    .achieved(out.minimum)
                    .nodes(out.nodes)
                    .check(out.minimum == c_star(n), "minimum equals C*")
                    .check(out.all_represent(), "every optimum represents an index")
                    .note(represented(&out)),
                Err(e) => solver_error(rec, e),
            }
        }));
        jobs.push(job(move || {
            let rec = CaseRecord::new(format!("oracle n={n} without e_1")).budget(c_star(n));
            let g = build_connector(n).expect("n >= 2");
            match connector_oracle(&g, &[g.shortcut_e(1)], timeout) {
                Ok(out) => {
                    let rec = rec
                        .achieved(out.minimum)
                        .nodes(out.nodes)
                        .check(out.minimum >= c_star(n), "minimum at least C*")
                        .check(out.optima.iter().all(|(_, r)| r.as_deref() != Some("1")), "no optimum represents 1")
                        .note(represented(&out));
                    if out.minimum == c_star(n) {
                        rec.note("minimum unchanged: E_i for i != 1 avoids e_1")
                    } else {
                        rec
                    }
                }
                Err(SolveError::Infeasible) => rec.note("no connected set remains"),
                Err(e) => solver_error(rec, e),
            }
        }));
        jobs.push(job(move || {
            let rec = CaseRecord::new(format!("oracle n={n} without every e_i")).budget(c_star(n));
            let g = build_connector(n).expect("n >= 2");
            let cut: Vec<_> = (1..=n).map(|i| g.shortcut_e(i)).collect();
            match connector_oracle(&g, &cut, timeout) {
                Ok(out) => rec.achieved(out.minimum).nodes(out.nodes).check(out.minimum > c_star(n), "minimum exceeds C*").note(represented(&out)),
                Err(SolveError::Infeasible) => rec.note("no connected set remains"),
                Err(e) => solver_error(rec, e),
            }
        }));
    }
    Ok((constants, jobs))
}

fn main_policy(n: usize) -> BorderPolicy {
    if n == 2 {
        BorderPolicy::Relaxed
    } else {
        BorderPolicy::Strict
    }
}

fn admissible(n: usize, policy: BorderPolicy) -> Vec<Pair> {
    (1..=n).flat_map(|x| (1..=n).map(move |y| (x, y))).filter(|&q| policy.admits(n, q)).collect()
}

fn gadget_main(p: &ExperimentParams) -> Result<Plan, HarnessError> {
    require_n(p, 2)?;
    let constants = CANONICAL_SIZES.map(|n| (format!("M*_{n}"), m_star(n))).collect();
    let mut jobs = Vec::new();
    for n in CANONICAL_SIZES {
        let policy = main_policy(n);
        let set = admissible(n, policy);
        for &(x, y) in &set {
            let set = set.clone();
            jobs.push(job(move || {
                let rec = CaseRecord::new(format!("canonical n={n} ({x},{y})")).budget(m_star(n));
                let g = match build_main(n, &set, policy) {
                    Ok(g) => g,
                    Err(e) => return rec.fail(e.to_string()),
                };
                let rec = rec.check(g.target == m_star(n), "gadget target equals M*");
                match main_canonical(&g, (x, y)) {
                    Ok(s) => rec
                        .achieved(s.weight())
                        .check(s.weight() == m_star(n), "weight equals M*")
                        .check(main_connectedness(&g, &s) == Ok(true), "connectedness")
                        .check(main_represents(&g, &s) == Ok(Some((x, y))), "represents its pair"),
                    Err(e) => rec.fail(e.to_string()),
                }
            }));
        }
    }
    for &n in &p.n {
        let policy = main_policy(n);
        let set = if n == 2 { vec![(1, 2), (2, 1)] } else { admissible(n, policy) };
        let timeout = p.timeout;
        let labels: Vec<String> = set.iter().map(|(x, y)| format!("({x},{y})")).collect();
        jobs.push(job(move || {
            let rec = CaseRecord::new(format!("oracle n={n} S={}", labels.join(""))).budget(m_star(n));
            let g = match build_main(n, &set, policy) {
                Ok(g) => g,
                Err(e) => return rec.fail(e.to_string()),
            };
            match main_oracle(&g, &[], timeout) {
                Ok(out) => rec
                    .achieved(out.minimum)
                    .nodes(out.nodes)
                    .check(out.minimum == m_star(n), "minimum equals M*")
                    .check(out.all_represent(), "every optimum represents a pair")
                    .check(out.optima.iter().all(|(_, r)| r.as_ref().is_some_and(|r| labels.contains(r))), "represented pair lies in S")
                    .note(represented(&out)),
                Err(e) => solver_error(rec, e),
            }
        }));
    }
    Ok((constants, jobs))
}

fn scss_constructive(p: &ExperimentParams) -> Result<Plan, HarnessError> {
    require_n(p, 2)?;
    let k = p.k.max(1);
    let constants = p.n.iter().map(|&n| (format!("W*_(k={k},n={n})"), w_star(k, n))).collect();
    let mut jobs = Vec::new();
    for &n in &p.n {
        let policies: &[BorderPolicy] = if n == 2 { &[BorderPolicy::Relaxed] } else { &[BorderPolicy::Strict, BorderPolicy::Relaxed] };
        for &policy in policies {
            for seed in seeds(p) {
                jobs.push(job(move || {
                    let rec = CaseRecord::new(format!("n={n} {policy:?} seed={seed}")).budget(w_star(k, n)).decision(true);
                    let (gt, assignment) = match plant_composable(seed, k, n, 1, policy) {
                        Ok(x) => x,
                        Err(e) => return rec.fail(e.to_string()),
                    };
                    let comp = match compose_scss(&gt, policy) {
                        Ok(c) => c,
                        Err(e) => return rec.fail(e.to_string()),
                    };
                    let rec = rec
                        .check(comp.budget == w_star(k, n), "composed budget equals W*")
                        .check(comp.instance.k() == 4 * k * (k + 1) + 2, "terminal count 4k(k+1)+2")
                        .check(planarity_check(&comp.instance.graph), "planar");
                    match scss_witness(&comp, &assignment) {
                        Ok(sol) => rec
                            .achieved(sol.weight())
                            .check(validate_scss(&comp.instance, &sol) == Ok(true), "witness strongly connects T*")
                            .check(sol.weight() == w_star(k, n), "witness weight equals W*")
                            .check(check_gadget_interface(&comp, &sol).all_connected(), "every gadget restriction connected")
                            .note(format!("|V|={} |A|={}", comp.instance.graph.vertex_count(), comp.instance.graph.arc_count())),
                        Err(e) => rec.fail(e.to_string()),
                    }
                }));
            }
        }
    }
    Ok((constants, jobs))
}

/// DSN sources need every pair inside `{2..n}²`: a plant at `n − 1`
/// shifted by one. At `n = 2` only the all-`(2,2)` YES instance exists.
pub fn dsn_source(seed: u64, k: usize, n: usize, answer: PlantAnswer) -> Option<GridTilingInstance> {
    if n == 2 {
        return match answer {
            PlantAnswer::Yes => GridTilingInstance::new(k, 2, vec![vec![vec![(2, 2)]; k]; k]).ok(),
            PlantAnswer::No => None,
        };
    }
    plant_gridtiling(seed, k, n - 1, 1, answer).ok().map(|g| normalize_gridtiling(&g, 1))
}

fn dsn_roundtrip(p: &ExperimentParams) -> Result<Plan, HarnessError> {
    require_n(p, 2)?;
    let k = p.k.max(1);
    let threshold = move |n: usize| b_star(k, n) - (k * k) as Weight;
    let constants = p.n.iter().map(|&n| (format!("B*-k^2_(k={k},n={n})"), threshold(n))).collect();
    let mut jobs = Vec::new();
    for &n in &p.n {
        for answer in [PlantAnswer::Yes, PlantAnswer::No] {
            for seed in seeds(p) {
                let Some(gt) = dsn_source(seed, k, n, answer) else { continue };
                let timeout = p.timeout;
                jobs.push(job(move || {
                    let rec = CaseRecord::new(format!("n={n} {answer:?} seed={seed}")).budget(threshold(n));
                    let red = match reduce_gt_to_dsn(&gt) {
                        Ok(r) => r,
                        Err(e) => return rec.fail(e.to_string()),
                    };
                    let truth = solve_gridtiling(&gt);
                    let rec = rec
                        .check(red.threshold() == threshold(n), "threshold equals B*-k^2")
                        .check(red.instance.graph.topological_order().is_some(), "acyclic")
                        .check(planarity_check(&red.instance.graph), "planar")
                        .check(truth.is_some() == (answer == PlantAnswer::Yes), "source answer matches plant");
                    let rec = match &truth {
                        Some(a) => match dsn_witness(&red, a) {
                            Ok(w) => rec
                                .check(validate_dsn(&red.instance, &w) == Ok(true), "witness satisfies demands")
                                .check(w.weight() == threshold(n), "witness weight equals threshold"),
                            Err(e) => rec.fail(e.to_string()),
                        },
                        None => rec,
                    };
                    match exact_dsn(&red.instance, &bnb(timeout)) {
                        Ok(r) => {
                            let rec = rec.achieved(r.weight).nodes(r.nodes_explored).decision(r.weight <= threshold(n));
                            if truth.is_some() {
                                rec.check(r.weight == threshold(n), "optimum equals threshold")
                            } else {
                                rec.check(r.weight > threshold(n), "optimum exceeds threshold")
                            }
                        }
                        Err(SolveError::Infeasible) => rec.fail("demands unsatisfiable"),
                        Err(e) => solver_error(rec, e),
                    }
                }));
            }
        }
    }
    Ok((constants, jobs))
}

fn psi_roundtrip(p: &ExperimentParams) -> Result<Plan, HarnessError> {
    let host_n = p.n.first().copied().unwrap_or(6);
    let lmax = p.k.max(2);
    if host_n < lmax {
        return Err(HarnessError::BadParams(format!("host size {host_n} below pattern size {lmax}")));
    }
    let mut jobs = Vec::new();
    for seed in seeds(p) {
        // two thirds of the family at the largest pattern size, where NO answers occur
        let l = if seed % 3 == 0 { 2 } else { lmax };
        let host_m = 3 + (seed as usize) % 5;
        let timeout = p.timeout;
        jobs.push(job(move || {
            let psi = random_psi(seed, l, host_n, host_m);
            let rec = CaseRecord::new(format!("seed={seed} l={l} |V_H|={host_n} |E_H|={}", psi.host_edges.len()));
            let red = match reduce_psi_to_scss(&psi) {
                Ok(r) => r,
                Err(e) => return rec.fail(e.to_string()),
            };
            let rec = rec.budget(red.budget).check(red.budget == (3 * l + 10 * psi.pattern_edges.len()) as Weight, "budget 3l+10|E_G|");
            let truth = solve_psi(&psi);
            let rec = match &truth {
                Some(phi) => match psi_witness(&red, phi) {
                    Ok(w) => rec
                        .check(validate_scss(&red.instance, &w) == Ok(true), "witness strongly connects")
                        .check(w.weight() == red.budget, "witness weight equals budget"),
                    Err(e) => rec.fail(e.to_string()),
                },
                None => rec,
            };
            match decide_scss(&red.instance, red.budget, timeout) {
                Ok(Decision::Yes(r)) => rec.decision(true).achieved(r.weight).nodes(r.nodes_explored).check(truth.is_some(), "source has no embedding"),
                Ok(Decision::No { nodes }) => rec.decision(false).nodes(nodes).check(truth.is_none(), "source has an embedding"),
                Err(e) => solver_error(rec, e),
            }
        }));
    }
    Ok((Vec::new(), jobs))
}

/// Planar grid instance used by the structure sweep.
pub fn sweep_instance(seed: u64, kmax: usize, side: usize) -> ScssInstance {
    let g = random_planar_digraph(seed, side, side, 0.8, 9);
    let k = 2 + (seed as usize) % (kmax - 1);
    let terminals = random_terminals(seed, g.vertex_count(), k);
    ScssInstance::new(g, terminals).expect("distinct terminals")
}

fn feasible(inst: &ScssInstance) -> bool {
    scss_feasible_mask(&inst.graph, &inst.terminals, &vec![true; inst.graph.arc_count()])
}

fn structure_sweep(p: &ExperimentParams) -> Result<Plan, HarnessError> {
    let kmax = p.k.clamp(2, 6);
    let side = p.n.first().copied().unwrap_or(5).max(2);
    let chosen: Vec<u64> = (p.seed_base..).filter(|&s| feasible(&sweep_instance(s, kmax, side))).take(p.seeds as usize).collect();
    let mut jobs = Vec::new();
    for seed in chosen {
        let timeout = p.timeout;
        jobs.push(job(move || {
            let inst = sweep_instance(seed, kmax, side);
            let rec = CaseRecord::new(format!("seed={seed} k={}", inst.k())).check(planarity_check(&inst.graph), "planar");
            let opt = match exact_scss(&inst, &bnb(timeout)) {
                Ok(r) => r,
                Err(e) => return solver_error(rec, e),
            };
            let rec = rec.achieved(opt.weight).nodes(opt.nodes_explored);
            let m = match minimalize(&inst, &opt.solution) {
                Ok(m) => m,
                Err(e) => return rec.fail(e.to_string()),
            };
            let rec = rec.check(is_minimal(&inst, &m).is_ok(), "minimal");
            match verify_structure(&inst, &m, inst.terminals[0]) {
                Ok(report) => {
                    let bound = 9 * inst.k();
                    let rec = rec.budget(bound as Weight).note(format!(
                        "|M|={} |W|={} tw={}{} components={}",
                        report.solution_arcs,
                        report.w_size,
                        report.treewidth,
                        if report.treewidth_exact { "" } else { "(upper)" },
                        report.components.len()
                    ));
                    report.violations.iter().fold(rec, |r, v| r.fail(v))
                }
                Err(e) => rec.fail(e.to_string()),
            }
        }));
    }
    Ok((Vec::new(), jobs))
}

/// Small edge-weighted instance for the vertex-weight equivalence.
pub fn vertexize_instance(seed: u64, kmax: usize, n: usize) -> ScssInstance {
    let g = random_digraph(seed, n, 8, 3);
    let k = 2 + (seed as usize) % (kmax - 1);
    ScssInstance::new(g, random_terminals(seed, n, k)).expect("distinct terminals")
}

fn vertexize_equiv(p: &ExperimentParams) -> Result<Plan, HarnessError> {
    let kmax = p.k.clamp(2, 5);
    let n = p.n.first().copied().unwrap_or(5);
    if n < kmax {
        return Err(HarnessError::BadParams(format!("{n} vertices cannot hold {kmax} terminals")));
    }
    let positive = |s: u64| {
        let inst = vertexize_instance(s, kmax, n);
        feasible(&inst) && exact_scss(&inst, &BnbOptions::default()).is_ok_and(|r| r.weight > 0)
    };
    let chosen: Vec<u64> = (p.seed_base..).filter(|&s| positive(s)).take(p.seeds as usize).collect();
    let mut jobs = Vec::new();
    for seed in chosen {
        let timeout = p.timeout;
        jobs.push(job(move || {
            let inst = vertexize_instance(seed, kmax, n);
            let rec = CaseRecord::new(format!("seed={seed} k={}", inst.k()));
            let opt = match exact_scss(&inst, &bnb(timeout)) {
                Ok(r) => r.weight,
                Err(e) => return solver_error(rec, e),
            };
            let mut rec = rec.budget(opt).achieved(opt);
            for c in [opt - 1, opt] {
                let edge = match decide_scss(&inst, c, timeout) {
                    Ok(d) => d.is_yes(),
                    Err(e) => return solver_error(rec, e),
                };
                let v = vertexize(&Instance::Scss(inst.clone()), c);
                let count = match min_vertex_count(&v.instance, timeout) {
                    Ok(x) => x,
                    Err(e) => return solver_error(rec, e),
                };
                let vertex = count <= v.budget;
                rec = rec
                    .note(format!("C={c}: edge {} vertex {} ({count} vs {})", yes_no(edge), yes_no(vertex), v.budget))
                    .check(edge == (c >= opt), "edge decision matches OPT")
                    .check(edge == vertex, format!("decisions agree at C={c}"));
            }
            rec.decision(true)
        }));
    }
    Ok((Vec::new(), jobs))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn tw_le_2_exact(g: &UndirectedGraph) -> Result<bool, SolveError> {
    Ok(treewidth_exact_small(g)?.width() <= 2)
}

fn all_graphs_case(n: usize) -> CaseRecord {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut rec = CaseRecord::new(format!("all labeled graphs n={n}"));
    let mut mismatches = 0u64;
    let total = 1u64 << pairs.len();
    for mask in 0..total {
        let g = UndirectedGraph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e));
        match tw_le_2_exact(&g) {
            Ok(t) if t == treewidth_le_2(&g) => {}
            Ok(_) => mismatches += 1,
            Err(e) => return rec.fail(e.to_string()),
        }
    }
    rec = rec.achieved(total).check(mismatches == 0, format!("{mismatches} disagreements"));
    rec
}

fn random_graph(seed: u64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(7..=10);
    let p: f64 = rng.gen_range(0.15..0.55);
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
    UndirectedGraph::from_edges(n, edges)
}

/// A random 2-tree on 3..=10 vertices with some edges dropped.
pub fn random_partial_2tree(seed: u64) -> UndirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=10);
    let mut edges = vec![(0, 1), (0, 2), (1, 2)];
    for v in 3..n {
        let (a, b) = edges[rng.gen_range(0..edges.len())];
        edges.push((a, v));
        edges.push((b, v));
    }
    edges.retain(|_| rng.gen_bool(0.75));
    UndirectedGraph::from_edges(n, edges)
}

fn tw2_recognizer(p: &ExperimentParams) -> Result<Plan, HarnessError> {
    let maxn = p.n.first().copied().unwrap_or(6).min(7);
    let mut jobs: Vec<Job> = (1..=maxn).map(|n| job(move || all_graphs_case(n))).collect();
    jobs.push(job(|| {
        let k4 = UndirectedGraph::from_edges(4, (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))));
        CaseRecord::new("K4").check(!treewidth_le_2(&k4), "K4 rejected")
    }));
    const BATCH: u64 = 100;
    let random = seeds(p);
    let mut start = random.start;
    while start < random.end {
        let end = (start + BATCH).min(random.end);
        jobs.push(job(move || {
            let mut rec = CaseRecord::new(format!("random 7-10 vertices seeds {start}..{end}")).achieved(end - start);
            for seed in start..end {
                let g = random_graph(seed);
                match tw_le_2_exact(&g) {
                    Ok(t) => rec = rec.check(t == treewidth_le_2(&g), format!("seed {seed}")),
                    Err(e) => return rec.fail(e.to_string()),
                }
            }
            rec
        }));
        start = end;
    }
    let closure = random.end - random.start;
    let closure = random.start..random.start + (closure * 2).div_ceil(5);
    let mut start = closure.start;
    while start < closure.end {
        let end = (start + BATCH / 2).min(closure.end);
        jobs.push(job(move || {
            let mut rec = CaseRecord::new(format!("subdivision closure seeds {start}..{end}")).achieved(end - start);
            for seed in start..end {
                let g = random_partial_2tree(seed);
                rec = rec.check(treewidth_le_2(&g), format!("seed {seed} partial 2-tree accepted"));
                let edges = g.edges();
                if edges.is_empty() {
                    continue;
                }
                let (u, v) = edges[(seed as usize) % edges.len()];
                let h = crate::structure::subdivide(&g, u, v);
                rec = rec.check(treewidth_le_2(&h), format!("seed {seed} subdivision accepted"));
                rec = rec.check(tw_le_2_exact(&h) == Ok(true), format!("seed {seed} exact width of subdivision"));
            }
            rec
        }));
        start = end;
    }
    Ok((Vec::new(), jobs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::report::{CaseOutcome, Verdict};

    fn quick(name: &str, f: impl FnOnce(&mut ExperimentParams)) -> ExperimentReport {
        let mut p = default_params(name).unwrap();
        f(&mut p);
        run_experiment(name, &p).unwrap()
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(run_experiment("nope", &default_params("psi-roundtrip").unwrap()), Err(HarnessError::UnknownExperiment(_))));
        assert!(default_params("nope").is_err());
    }

    #[test]
    fn dsn_small_run() {
        let r = quick("dsn-roundtrip", |p| {
            p.n = vec![3];
            p.seeds = 2;
        });
        assert_eq!(r.cases.len(), 4);
        assert_eq!(r.verdict(), Verdict::Pass, "{r}");
        assert_eq!(r.constants[0].1, 772);
    }

    #[test]
    fn timeout_gives_unknown() {
        let r = quick("psi-roundtrip", |p| {
            p.seeds = 2;
            p.timeout = Some(Duration::ZERO);
        });
        // A case may still be settled at the root without expanding a node.
        assert!(r.cases.iter().all(|c| c.outcome == CaseOutcome::Unknown || (c.outcome == CaseOutcome::Pass && c.nodes == 0)), "{r}");
        assert!(r.cases.iter().any(|c| c.outcome == CaseOutcome::Unknown), "{r}");
        assert_eq!(r.verdict(), Verdict::Inconclusive);
    }

    #[test]
    fn report_order_is_deterministic() {
        let a = quick("structure-sweep", |p| p.seeds = 6);
        let b = quick("structure-sweep", |p| p.seeds = 6);
        let strip = |r: &ExperimentReport| r.cases.iter().map(|c| (c.case.clone(), c.outcome, c.achieved, c.note.clone())).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.verdict(), Verdict::Pass, "{a}");
    }

    #[test]
    fn partial_2trees_are_tw2() {
        for seed in 0..30 {
            assert!(tw_le_2_exact(&random_partial_2tree(seed)).unwrap());
        }
    }
}
