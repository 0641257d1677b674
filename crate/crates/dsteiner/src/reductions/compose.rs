//! Grid Tiling → planar SCSS: `k²` main gadgets, `2k(k+1)` connectors,
//! and the special vertices `x*`, `y*`.

use super::connector::{build_connector, c_star, connector_canonical, connector_connectedness, connector_represents, ConnectorGadget};
use super::main_gadget::{build_main, m_star, main_canonical, main_connectedness, main_represents, BorderPolicy, MainGadget};
use super::{ReductionArtifact, ReductionError};
use crate::graph::{ArcId, EdgeSolution, Instance, ScssInstance, VertexId, Weight, WeightedDigraph};
use crate::problems::{check_assignment, GridTilingAssignment, GridTilingInstance, Pair};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

/// A seeded YES instance whose every pair is admissible for `policy`:
/// a planted `(α_i, β_j)` per cell plus up to `noise` admissible extras.
pub fn plant_composable(seed: u64, k: usize, n: usize, noise: usize, policy: BorderPolicy) -> Result<(GridTilingInstance, GridTilingAssignment), ReductionError> {
    let admissible: Vec<Pair> = (1..=n).flat_map(|x| (1..=n).map(move |y| (x, y))).filter(|&p| policy.admits(n, p)).collect();
    if admissible.is_empty() || k == 0 {
        return Err(ReductionError::BadSize(format!("no admissible pairs for k={k} n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 10_000;
    for _ in 0..ATTEMPTS {
        let alpha: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
        let beta: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
        if !alpha.iter().all(|&a| beta.iter().all(|&b| policy.admits(n, (a, b)))) {
            continue;
        }
        let cells = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let mut cell = vec![(alpha[i], beta[j])];
                        let mut pool: Vec<Pair> = admissible.iter().copied().filter(|p| !cell.contains(p)).collect();
                        pool.shuffle(&mut rng);
                        cell.extend(pool.into_iter().take(noise));
                        cell
                    })
                    .collect()
            })
            .collect();
        let inst = GridTilingInstance::new(k, n, cells).map_err(|e| ReductionError::BadSize(e.to_string()))?;
        return Ok((inst, GridTilingAssignment::from_alpha_beta(&alpha, &beta)));
    }
    Err(ReductionError::BadSize(format!("no admissible planted assignment found for k={k} n={n}")))
}

/// `W*_n = k²·M*_n + 2k(k+1)·C*_n`.
pub fn w_star(k: usize, n: usize) -> Weight {
    let k = k as Weight;
    k * k * m_star(n) + 2 * k * (k + 1) * c_star(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetId {
    /// `MG_{i,j}`, `i, j ∈ [k]`
    Main(usize, usize),
    /// `HCG_{i,j}`, `i ∈ [k]`, `j ∈ [k+1]`
    HConn(usize, usize),
    /// `VCG_{i,j}`, `i ∈ [k+1]`, `j ∈ [k]`
    VConn(usize, usize),
}

impl fmt::Display for GadgetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetId::Main(i, j) => write!(f, "MG[{i},{j}]"),
            GadgetId::HConn(i, j) => write!(f, "HCG[{i},{j}]"),
            GadgetId::VConn(i, j) => write!(f, "VCG[{i},{j}]"),
        }
    }
}

/// Local copy of one gadget inside the composed graph.
#[derive(Debug, Clone)]
struct Placement {
    vertices: Vec<VertexId>,
    arcs: Vec<ArcId>,
}

#[derive(Debug, Clone)]
pub struct ScssComposition {
    pub source: GridTilingInstance,
    pub policy: BorderPolicy,
    pub instance: ScssInstance,
    pub budget: Weight,
    pub x_star: VertexId,
    pub y_star: VertexId,
    /// Shared by every connector: all of them are `CG_n`.
    pub connector: ConnectorGadget,
    /// `mains[i-1][j-1] = MG_{i,j}`
    pub mains: Vec<Vec<MainGadget>>,
    placements: BTreeMap<GadgetId, Placement>,
    /// `None` for the border arcs at `x*`, `y*`.
    pub arc_owner: Vec<Option<(GadgetId, ArcId)>>,
    pub vertex_provenance: Vec<String>,
    pub arc_provenance: Vec<String>,
}

impl ScssComposition {
    pub fn k(&self) -> usize {
        self.source.k
    }

    pub fn n(&self) -> usize {
        self.source.n
    }

    pub fn gadget_ids(&self) -> Vec<GadgetId> {
        self.placements.keys().copied().collect()
    }

    /// Composed vertex of a gadget-local vertex.
    pub fn global_vertex(&self, id: GadgetId, local: VertexId) -> VertexId {
        self.placements[&id].vertices[local]
    }

    /// Composed arc of a gadget-local arc.
    pub fn global_arc(&self, id: GadgetId, local: ArcId) -> ArcId {
        self.placements[&id].arcs[local]
    }

    pub fn main(&self, i: usize, j: usize) -> &MainGadget {
        &self.mains[i - 1][j - 1]
    }

    /// The gadget-local edge set of `sol` inside gadget `id`.
    pub fn restrict(&self, id: GadgetId, sol: &EdgeSolution) -> EdgeSolution {
        let p = &self.placements[&id];
        let local = p.arcs.iter().enumerate().filter(|(_, &g)| sol.contains(g)).map(|(l, _)| l);
        let graph = match id {
            GadgetId::Main(i, j) => &self.main(i, j).graph,
            _ => &self.connector.graph,
        };
        EdgeSolution::new(graph, local).expect("local arcs")
    }

    pub fn artifact(&self) -> ReductionArtifact {
        ReductionArtifact {
            reduction: "scss-planar",
            instance: Instance::Scss(self.instance.clone()),
            budget: self.budget,
            vertex_provenance: self.vertex_provenance.clone(),
            arc_provenance: self.arc_provenance.clone(),
            parameters: vec![
                ("k".into(), self.k().to_string()),
                ("n".into(), self.n().to_string()),
                ("border".into(), format!("{:?}", self.policy).to_lowercase()),
                ("C*".into(), c_star(self.n()).to_string()),
                ("M*".into(), m_star(self.n()).to_string()),
            ],
        }
    }
}

struct Builder {
    graph: WeightedDigraph,
    vertex_provenance: Vec<String>,
    arc_provenance: Vec<String>,
    arc_owner: Vec<Option<(GadgetId, ArcId)>>,
}

impl Builder {
    fn vertex(&mut self, prov: String) -> VertexId {
        self.vertex_provenance.push(prov.clone());
        self.graph.add_labeled_vertex(prov)
    }

    fn arc(&mut self, t: VertexId, h: VertexId, w: Weight, owner: Option<(GadgetId, ArcId)>, prov: String) -> ArcId {
        self.arc_owner.push(owner);
        self.arc_provenance.push(prov);
        self.graph.add_arc(t, h, w).expect("vertices exist")
    }

    /// Copies `g` with some local vertices pre-identified with existing ones.
    fn place(&mut self, id: GadgetId, g: &WeightedDigraph, glued: &BTreeMap<VertexId, VertexId>, family: impl Fn(ArcId) -> String) -> Placement {
        let vertices: Vec<VertexId> = g
            .vertices()
            .map(|v| match glued.get(&v) {
                Some(&gv) => {
                    let joined = format!("{}={id} {}", self.vertex_provenance[gv], g.name(v));
                    self.vertex_provenance[gv] = joined.clone();
                    self.graph.set_label(gv, joined).expect("glued vertex");
                    gv
                }
                None => self.vertex(format!("{id} {}", g.name(v))),
            })
            .collect();
        let arcs = (0..g.arc_count())
            .map(|a| {
                let arc = g.arc(a);
                self.arc(vertices[arc.tail], vertices[arc.head], arc.weight, Some((id, a)), format!("{id} {}", family(a)))
            })
            .collect();
        Placement { vertices, arcs }
    }
}

/// Builds `G*`, `T*` and `W*` from a Grid Tiling instance whose pairs pass
/// the border policy (normalize with shift 2 for the strict policy).
pub fn compose_scss(gt: &GridTilingInstance, policy: BorderPolicy) -> Result<ScssComposition, ReductionError> {
    let (k, n) = (gt.k, gt.n);
    if let Some(p) = gt.all_pairs().find(|&p| !policy.admits(n, p)) {
        return Err(ReductionError::Unnormalized(format!("pair {p:?} with n={n} under {policy:?} border rule")));
    }
    let connector = build_connector(n)?;
    let mains: Vec<Vec<MainGadget>> = (1..=k)
        .map(|i| (1..=k).map(|j| build_main(n, gt.cell(i, j), policy)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;

    let mut b = Builder { graph: WeightedDigraph::new(), vertex_provenance: vec![], arc_provenance: vec![], arc_owner: vec![] };
    let x_star = b.vertex("x*".into());
    let y_star = b.vertex("y*".into());
    let mut placements = BTreeMap::new();
    let conn_family = |a: ArcId| format!("{:?}", connector.kinds[a]);
    let none = BTreeMap::new();
    for i in 1..=k {
        for j in 1..=k + 1 {
            let id = GadgetId::HConn(i, j);
            placements.insert(id, b.place(id, &connector.graph, &none, conn_family));
        }
    }
    for i in 1..=k + 1 {
        for j in 1..=k {
            let id = GadgetId::VConn(i, j);
            placements.insert(id, b.place(id, &connector.graph, &none, conn_family));
        }
    }
    for i in 1..=k {
        for j in 1..=k {
            let mg = &mains[i - 1][j - 1];
            let mut glued = BTreeMap::new();
            for t in 0..n {
                glued.insert(mg.left[t], placements[&GadgetId::HConn(i, j)].vertices[connector.sinks[t]]);
                glued.insert(mg.right[t], placements[&GadgetId::HConn(i, j + 1)].vertices[connector.sources[t]]);
                glued.insert(mg.top[t], placements[&GadgetId::VConn(i, j)].vertices[connector.sinks[t]]);
                glued.insert(mg.bottom[t], placements[&GadgetId::VConn(i + 1, j)].vertices[connector.sources[t]]);
            }
            let id = GadgetId::Main(i, j);
            placements.insert(id, b.place(id, &mg.graph, &glued, |a| format!("{:?}", mg.kinds[a])));
        }
    }

    b.arc(x_star, y_star, 0, None, "border x*->y*".into());
    let conn_vertex = |id: GadgetId, local: VertexId| placements[&id].vertices[local];
    for j in 1..=k {
        for &p in &connector.sources {
            b.arc(y_star, conn_vertex(GadgetId::VConn(1, j), p), 0, None, format!("border y*->{}", GadgetId::VConn(1, j)));
        }
    }
    for i in 1..=k {
        for &p in &connector.sources {
            b.arc(y_star, conn_vertex(GadgetId::HConn(i, 1), p), 0, None, format!("border y*->{}", GadgetId::HConn(i, 1)));
        }
    }
    for j in 1..=k {
        for &q in &connector.sinks {
            b.arc(conn_vertex(GadgetId::VConn(k + 1, j), q), x_star, 0, None, format!("border {}->x*", GadgetId::VConn(k + 1, j)));
        }
    }
    for i in 1..=k {
        for &q in &connector.sinks {
            b.arc(conn_vertex(GadgetId::HConn(i, k + 1), q), x_star, 0, None, format!("border {}->x*", GadgetId::HConn(i, k + 1)));
        }
    }

    let mut terminals = vec![x_star, y_star];
    for (id, p) in &placements {
        if !matches!(id, GadgetId::Main(..)) {
            terminals.push(p.vertices[connector.p]);
            terminals.push(p.vertices[connector.q]);
        }
    }
    let instance = ScssInstance::new(b.graph, terminals).expect("distinct terminals");
    Ok(ScssComposition {
        source: gt.clone(),
        policy,
        instance,
        budget: w_star(k, n),
        x_star,
        y_star,
        connector,
        mains,
        placements,
        arc_owner: b.arc_owner,
        vertex_provenance: b.vertex_provenance,
        arc_provenance: b.arc_provenance,
    })
}

/// The solution `E*` of weight exactly `W*` built from a Grid Tiling solution.
pub fn scss_witness(comp: &ScssComposition, assignment: &GridTilingAssignment) -> Result<EdgeSolution, ReductionError> {
    check_assignment(&comp.source, assignment).map_err(ReductionError::InvalidCertificate)?;
    let k = comp.k();
    let alpha = assignment.alpha();
    let beta = assignment.beta();
    let g = &comp.instance.graph;
    let mut arcs = vec![g.find_arc(comp.x_star, comp.y_star).expect("x*->y*")];
    let cg = &comp.connector;
    let lift = |id: GadgetId, local: &EdgeSolution, arcs: &mut Vec<ArcId>| {
        arcs.extend(local.arcs().iter().map(|&a| comp.global_arc(id, a)));
    };
    for j in 1..=k {
        let top = comp.global_vertex(GadgetId::VConn(1, j), cg.sources[beta[j - 1] - 1]);
        arcs.push(g.find_arc(comp.y_star, top).expect("border arc"));
        let bottom = comp.global_vertex(GadgetId::VConn(k + 1, j), cg.sinks[beta[j - 1] - 1]);
        arcs.push(g.find_arc(bottom, comp.x_star).expect("border arc"));
    }
    for i in 1..=k {
        let left = comp.global_vertex(GadgetId::HConn(i, 1), cg.sources[alpha[i - 1] - 1]);
        arcs.push(g.find_arc(comp.y_star, left).expect("border arc"));
        let right = comp.global_vertex(GadgetId::HConn(i, k + 1), cg.sinks[alpha[i - 1] - 1]);
        arcs.push(g.find_arc(right, comp.x_star).expect("border arc"));
    }
    for i in 1..=k {
        for j in 1..=k {
            let local = main_canonical(comp.main(i, j), (alpha[i - 1], beta[j - 1]))?;
            lift(GadgetId::Main(i, j), &local, &mut arcs);
        }
        for j in 1..=k + 1 {
            lift(GadgetId::HConn(i, j), &connector_canonical(cg, alpha[i - 1])?, &mut arcs);
        }
    }
    for i in 1..=k + 1 {
        for j in 1..=k {
            lift(GadgetId::VConn(i, j), &connector_canonical(cg, beta[j - 1])?, &mut arcs);
        }
    }
    Ok(EdgeSolution::new(g, arcs).expect("composed arcs"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetReport {
    pub id: GadgetId,
    pub connected: bool,
    pub weight: Weight,
    /// The index (connector) or pair (main) represented, when connected.
    pub represents: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceReport {
    pub gadgets: Vec<GadgetReport>,
    /// Weight of the chosen arcs outside every gadget (all zero-weight).
    pub border_weight: Weight,
}

impl InterfaceReport {
    pub fn all_connected(&self) -> bool {
        self.gadgets.iter().all(|g| g.connected)
    }
}

/// Restricts `sol` to every gadget and evaluates connectedness, weight and
/// representation there.
pub fn check_gadget_interface(comp: &ScssComposition, sol: &EdgeSolution) -> InterfaceReport {
    let g = &comp.instance.graph;
    let mut gadgets = Vec::new();
    for id in comp.gadget_ids() {
        let local = comp.restrict(id, sol);
        let (connected, represents) = match id {
            GadgetId::Main(i, j) => {
                let mg = comp.main(i, j);
                let c = main_connectedness(mg, &local).unwrap_or(false);
                let r = main_represents(mg, &local).ok().flatten().filter(|_| c).map(|(x, y)| format!("({x},{y})"));
                (c, r)
            }
            _ => {
                let c = connector_connectedness(&comp.connector, &local).unwrap_or(false);
                let r = if c { connector_represents(&comp.connector, &local).ok().flatten().map(|i| i.to_string()) } else { None };
                (c, r)
            }
        };
        gadgets.push(GadgetReport { id, connected, weight: local.weight(), represents });
    }
    let border_weight =
        sol.arcs().iter().filter(|&&a| a < g.arc_count() && comp.arc_owner[a].is_none()).map(|&a| g.arc(a).weight).sum();
    InterfaceReport { gadgets, border_weight }
}
