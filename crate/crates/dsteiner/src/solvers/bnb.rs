//! LP-based branch and bound over arc inclusion, plus exhaustive oracles.
//!
//! Each node solves the multicommodity-flow relaxation
//! `min Σ w_a y_a` s.t. one unit of `s_i → t_i` flow per demand, `f^i_a ≤ y_a`.
//! Arcs that lie on no `s_i → t_i` walk are dropped up front and zero-weight
//! arcs are treated as always available.

use super::{SolveError, SolveResult};
use crate::graph::{dsn_feasible_mask, scss_feasible_mask, ArcId, DsnInstance, EdgeSolution, ScssInstance, VertexId, Weight, WeightedDigraph};
use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Solution, SolveOutcome, Variable};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, Default)]
pub struct BnbOptions {
    /// Only solutions of weight at most this are of interest.
    pub upper_bound: Option<Weight>,
    /// Stop as soon as a solution of weight at most `b` is found.
    pub budget_only: Option<Weight>,
    pub timeout: Option<Duration>,
}

impl BnbOptions {
    pub fn with_timeout(timeout: Duration) -> Self {
        Self { timeout: Some(timeout), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(SolveResult),
    No { nodes: u64 },
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

pub fn exact_scss(instance: &ScssInstance, opts: &BnbOptions) -> Result<SolveResult, SolveError> {
    exact_dsn(&instance.as_dsn(), opts)
}

/// Is there a solution of weight at most `budget`?
pub fn decide_scss(instance: &ScssInstance, budget: Weight, timeout: Option<Duration>) -> Result<Decision, SolveError> {
    decide_dsn(&instance.as_dsn(), budget, timeout)
}

pub fn decide_dsn(instance: &DsnInstance, budget: Weight, timeout: Option<Duration>) -> Result<Decision, SolveError> {
    let opts = BnbOptions { upper_bound: Some(budget), budget_only: Some(budget), timeout };
    match exact_dsn(instance, &opts) {
        Ok(r) => Ok(Decision::Yes(r)),
        Err(SolveError::NoneWithin { nodes, .. }) => Ok(Decision::No { nodes }),
        Err(SolveError::Infeasible) => Ok(Decision::No { nodes: 0 }),
        Err(e) => Err(e),
    }
}

fn tolerance(obj: f64) -> f64 {
    1e-6 + 1e-9 * obj.abs()
}

fn lp_bound(obj: f64) -> Weight {
    let v = (obj - tolerance(obj)).ceil();
    if v <= 0.0 {
        0
    } else {
        v as Weight
    }
}

struct Search<'a> {
    graph: &'a WeightedDigraph,
    demands: Vec<(VertexId, VertexId)>,
    /// Arcs on some demand walk.
    useful: Vec<bool>,
    /// LP variable for each positive-weight useful arc.
    y: Vec<Option<Variable>>,
    /// Solutions must weigh strictly less than this.
    cutoff: Weight,
    incumbent: Option<EdgeSolution>,
    nodes: u64,
}

impl Search<'_> {
    fn mask_feasible(&self, mask: &[bool]) -> bool {
        dsn_feasible_mask(self.graph, &self.demands, mask)
    }

    /// Rounds an LP point up to its support and strips redundant arcs, heaviest first.
    fn round(&mut self, sol: &Solution) {
        let g = self.graph;
        let mut mask: Vec<bool> = (0..g.arc_count())
            .map(|a| match self.y[a] {
                Some(v) => sol[v] > 1e-6,
                None => self.useful[a],
            })
            .collect();
        if !self.mask_feasible(&mask) {
            return;
        }
        let mut order: Vec<ArcId> = (0..g.arc_count()).filter(|&a| mask[a]).collect();
        order.sort_by_key(|&a| (std::cmp::Reverse(g.arc(a).weight), a));
        for a in order {
            mask[a] = false;
            if !self.mask_feasible(&mask) {
                mask[a] = true;
            }
        }
        let cand = EdgeSolution::from_mask(g, &mask);
        if cand.weight() < self.cutoff {
            self.cutoff = cand.weight();
            self.incumbent = Some(cand);
        }
    }

    fn branch_var(&self, sol: &Solution) -> Option<Variable> {
        let mut best: Option<(f64, Variable)> = None;
        for v in self.y.iter().flatten() {
            let x = sol[*v];
            let frac = (x - x.round()).abs();
            if frac > 1e-6 && best.is_none_or(|(b, _)| frac > b + 1e-12) {
                best = Some((frac, *v));
            }
        }
        best.map(|(_, v)| v)
    }
}

fn unwrap_outcome(r: Result<SolveOutcome, microlp::Error>) -> Result<Option<Solution>, SolveError> {
    match r {
        Ok(SolveOutcome::Solution(s)) => Ok(Some(s)),
        Ok(_) => Err(SolveError::Lp("relaxation interrupted".into())),
        Err(microlp::Error::Infeasible) => Ok(None),
        Err(e) => Err(SolveError::Lp(format!("{e:?}"))),
    }
}

/// Exact DSN by LP-based branch and bound.
///
/// The reported `lower_bound` is the root bound: the larger of the rounded
/// LP value and the longest single-demand shortest path.
pub fn exact_dsn(instance: &DsnInstance, opts: &BnbOptions) -> Result<SolveResult, SolveError> {
    let start = Instant::now();
    let deadline = opts.timeout.map(|t| start + t);
    let g = &instance.graph;
    let m = g.arc_count();
    let demands: Vec<(VertexId, VertexId)> = instance.demands.iter().copied().filter(|(s, t)| s != t).collect();
    for &(s, t) in &instance.demands {
        g.check_vertex(s)?;
        g.check_vertex(t)?;
    }

    let mut useful = vec![false; m];
    let mut per_demand: Vec<Vec<bool>> = Vec::with_capacity(demands.len());
    let mut sp_bound: Weight = 0;
    for &(s, t) in &demands {
        let fwd = g.reach_set(s, None, false);
        if !fwd[t] {
            return Err(SolveError::Infeasible);
        }
        let bwd = g.reach_set(t, None, true);
        let on: Vec<bool> = g.arcs().iter().map(|a| fwd[a.tail] && bwd[a.head]).collect();
        for a in 0..m {
            useful[a] |= on[a];
        }
        per_demand.push(on);
        sp_bound = sp_bound.max(g.dijkstra(s, None)[t].expect("reachable"));
    }
    let limit = match (opts.upper_bound, opts.budget_only) {
        (Some(u), Some(b)) => Some(u.min(b)),
        (u, b) => u.or(b),
    };
    if demands.is_empty() {
        return Ok(SolveResult { solution: EdgeSolution::empty(), weight: 0, optimal: true, nodes_explored: 0, lower_bound: 0 });
    }
    if let Some(l) = limit {
        if sp_bound > l {
            return Err(SolveError::NoneWithin { bound: l, nodes: 0 });
        }
    }

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let mut y: Vec<Option<Variable>> = vec![None; m];
    for a in 0..m {
        if useful[a] && g.arc(a).weight > 0 {
            y[a] = Some(lp.add_var(g.arc(a).weight as f64, (0.0, 1.0)));
        }
    }
    for (d, &(s, t)) in demands.iter().enumerate() {
        let on = &per_demand[d];
        let mut flow: Vec<Option<Variable>> = vec![None; m];
        for a in 0..m {
            if on[a] {
                let f = lp.add_var(0.0, (0.0, 1.0));
                flow[a] = Some(f);
                if let Some(ya) = y[a] {
                    let mut e = LinearExpr::empty();
                    e.add(f, 1.0);
                    e.add(ya, -1.0);
                    lp.add_constraint(e, ComparisonOp::Le, 0.0);
                }
            }
        }
        for v in g.vertices() {
            let mut e = LinearExpr::empty();
            let mut any = false;
            for &a in g.out_arcs(v) {
                if let Some(f) = flow[a] {
                    e.add(f, 1.0);
                    any = true;
                }
            }
            for &a in g.in_arcs(v) {
                if let Some(f) = flow[a] {
                    e.add(f, -1.0);
                    any = true;
                }
            }
            let rhs = if v == s {
                1.0
            } else if v == t {
                -1.0
            } else {
                0.0
            };
            if any || rhs != 0.0 {
                lp.add_constraint(e, ComparisonOp::Eq, rhs);
            }
        }
    }

    let root = unwrap_outcome(lp.solve())?.ok_or_else(|| SolveError::Lp("root relaxation infeasible".into()))?;
    let root_bound = lp_bound(root.objective()).max(sp_bound);
    let mut search = Search {
        graph: g,
        demands,
        useful,
        y,
        cutoff: limit.map_or(Weight::MAX, |l| l.saturating_add(1)),
        incumbent: None,
        nodes: 0,
    };
    if root_bound >= search.cutoff {
        return Err(SolveError::NoneWithin { bound: limit.expect("finite cutoff"), nodes: 1 });
    }

    let mut stack = vec![root];
    let mut stopped_early = false;
    while let Some(sol) = stack.pop() {
        search.nodes += 1;
        if deadline.is_some_and(|d| Instant::now() > d) {
            return Err(SolveError::Timeout { incumbent: search.incumbent.map(|s| s.weight()), lower_bound: root_bound, nodes: search.nodes });
        }
        if lp_bound(sol.objective()) >= search.cutoff {
            continue;
        }
        search.round(&sol);
        if let (Some(b), Some(inc)) = (opts.budget_only, &search.incumbent) {
            if inc.weight() <= b {
                stopped_early = true;
                break;
            }
        }
        if lp_bound(sol.objective()) >= search.cutoff {
            continue;
        }
        let Some(var) = search.branch_var(&sol) else { continue };
        let down = unwrap_outcome(sol.clone().fix_var(var, 0.0))?;
        let up = unwrap_outcome(sol.fix_var(var, 1.0))?;
        stack.extend(down);
        stack.extend(up);
    }

    match search.incumbent {
        Some(solution) => {
            let weight = solution.weight();
            assert!(root_bound <= weight, "lower bound {root_bound} exceeds solution weight {weight}");
            let optimal = !stopped_early || weight == root_bound;
            let lower_bound = if optimal { weight } else { root_bound };
            Ok(SolveResult { solution, weight, optimal, nodes_explored: search.nodes, lower_bound })
        }
        None => match limit {
            Some(l) => Err(SolveError::NoneWithin { bound: l, nodes: search.nodes }),
            None => Err(SolveError::Lp("search ended without a solution".into())),
        },
    }
}

const EXHAUSTIVE_ARC_LIMIT: usize = 24;

/// Minimum over all arc subsets; the oracle for small instances.
pub fn exhaustive_dsn(instance: &DsnInstance) -> Result<SolveResult, SolveError> {
    let g = &instance.graph;
    exhaustive(g, |mask| dsn_feasible_mask(g, &instance.demands, mask))
}

pub fn exhaustive_scss(instance: &ScssInstance) -> Result<SolveResult, SolveError> {
    let g = &instance.graph;
    exhaustive(g, |mask| scss_feasible_mask(g, &instance.terminals, mask))
}

fn exhaustive(g: &WeightedDigraph, feasible: impl Fn(&[bool]) -> bool) -> Result<SolveResult, SolveError> {
    let m = g.arc_count();
    if m > EXHAUSTIVE_ARC_LIMIT {
        return Err(SolveError::TooLarge(format!("{m} arcs, limit {EXHAUSTIVE_ARC_LIMIT}")));
    }
    let mut best: Option<(Weight, u64)> = None;
    let mut mask = vec![false; m];
    for bits in 0u64..(1 << m) {
        let mut w: Weight = 0;
        for (a, slot) in mask.iter_mut().enumerate() {
            *slot = bits >> a & 1 == 1;
            if *slot {
                w += g.arc(a).weight;
            }
        }
        if best.is_some_and(|(bw, _)| w >= bw) {
            continue;
        }
        if feasible(&mask) {
            best = Some((w, bits));
        }
    }
    let (weight, bits) = best.ok_or(SolveError::Infeasible)?;
    let solution = EdgeSolution::new(g, (0..m).filter(|a| bits >> a & 1 == 1)).expect("arcs in range");
    Ok(SolveResult { solution, weight, optimal: true, nodes_explored: 1 << m, lower_bound: weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate_dsn, validate_scss};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> ScssInstance {
        let mut g = WeightedDigraph::with_vertices(3);
        g.add_arc(0, 1, 1).unwrap();
        g.add_arc(1, 2, 1).unwrap();
        g.add_arc(2, 0, 1).unwrap();
        ScssInstance::new(g, vec![0, 1, 2]).unwrap()
    }

    pub(crate) fn random_digraph(rng: &mut ChaCha8Rng, n: usize, m: usize, wmax: Weight) -> WeightedDigraph {
        let mut g = WeightedDigraph::with_vertices(n);
        let mut tries = 0;
        while g.arc_count() < m && tries < 10 * m {
            tries += 1;
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v && g.find_arc(u, v).is_none() {
                g.add_arc(u, v, rng.gen_range(0..=wmax)).unwrap();
            }
        }
        g
    }

    #[test]
    fn triangle_and_single_terminal() {
        let t = triangle();
        let r = exact_scss(&t, &BnbOptions::default()).unwrap();
        assert_eq!((r.weight, r.optimal), (3, true));
        let one = ScssInstance::new(t.graph.clone(), vec![1]).unwrap();
        let r = exact_scss(&one, &BnbOptions::default()).unwrap();
        assert_eq!(r.weight, 0);
        assert!(r.solution.is_empty());
    }

    #[test]
    fn single_demand_is_shortest_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let g = random_digraph(&mut rng, 8, 20, 9);
            let dist = g.dijkstra(0, None);
            let inst = DsnInstance::new(g, vec![(0, 7)]).unwrap();
            match dist[7] {
                Some(d) => assert_eq!(exact_dsn(&inst, &BnbOptions::default()).unwrap().weight, d),
                None => assert_eq!(exact_dsn(&inst, &BnbOptions::default()), Err(SolveError::Infeasible)),
            }
        }
    }

    #[test]
    fn agrees_with_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..120 {
            let n = rng.gen_range(3..=6);
            let m = rng.gen_range(4..=12);
            let g = random_digraph(&mut rng, n, m, 5);
            let k = rng.gen_range(1..=n.min(3));
            let inst = ScssInstance::new(g.clone(), (0..k).collect()).unwrap();
            match exhaustive_scss(&inst) {
                Ok(ex) => {
                    let r = exact_scss(&inst, &BnbOptions::default()).unwrap();
                    assert_eq!(r.weight, ex.weight);
                    assert!(r.lower_bound <= r.weight);
                    assert!(validate_scss(&inst, &r.solution).unwrap());
                }
                Err(e) => assert_eq!(exact_scss(&inst, &BnbOptions::default()).unwrap_err(), e),
            }
            let demands = vec![(0, n - 1), (n - 1, 1), (2 % n, 0)];
            let d = DsnInstance::new(g, demands).unwrap();
            match exhaustive_dsn(&d) {
                Ok(ex) => {
                    let r = exact_dsn(&d, &BnbOptions::default()).unwrap();
                    assert_eq!(r.weight, ex.weight);
                    assert!(validate_dsn(&d, &r.solution).unwrap());
                }
                Err(e) => assert_eq!(exact_dsn(&d, &BnbOptions::default()).unwrap_err(), e),
            }
        }
    }

    #[test]
    fn budget_decisions() {
        let t = triangle();
        assert!(decide_scss(&t, 3, None).unwrap().is_yes());
        assert!(!decide_scss(&t, 2, None).unwrap().is_yes());
        let bounded = BnbOptions { upper_bound: Some(2), ..BnbOptions::default() };
        assert!(matches!(exact_scss(&t, &bounded), Err(SolveError::NoneWithin { bound: 2, .. })));
    }

    #[test]
    fn zero_weight_arcs_come_free() {
        let mut g = WeightedDigraph::with_vertices(3);
        g.add_arc(0, 1, 0).unwrap();
        g.add_arc(1, 2, 0).unwrap();
        g.add_arc(0, 2, 4).unwrap();
        let inst = DsnInstance::new(g, vec![(0, 2)]).unwrap();
        let r = exact_dsn(&inst, &BnbOptions::default()).unwrap();
        assert_eq!(r.weight, 0);
        assert_eq!(r.solution.len(), 2);
    }

    #[test]
    fn timeout_is_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_digraph(&mut rng, 12, 40, 9);
        let inst = ScssInstance::new(g, vec![0, 1, 2, 3]).unwrap();
        let opts = BnbOptions::with_timeout(Duration::ZERO);
        match exact_scss(&inst, &opts) {
            Err(SolveError::Timeout { .. }) | Err(SolveError::Infeasible) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
