//! Structural reduction engine for sparse graphs.
//!
//! The engine works in one of four degree regimes (see [`Case`]). In each
//! regime it looks for a small *bounded configuration* — a pattern of low
//! degree vertices that can be deleted, the rest colored recursively, and
//! the deleted vertices filled back in by exhaustive list coloring over
//! the square of the parent graph.
//!
//! When the degree-4 or degree-5 regime runs out of configurations, the
//! engine switches to a global argument: it builds an auxiliary multigraph
//! over the vertices that sponsor 2-vertices, measures a per-component
//! charge surplus, and — for components in deficit — extracts a subgraph
//! made of a lifted cycle, an optional connector path, and a pendant
//! 2-vertex. The square of that subgraph always falls apart into exactly
//! two pieces whose list sizes dominate their degrees, which is what makes
//! the final coloring step go through.
//!
//! For the global route the recursion deletes only the chosen deficient
//! vertex together with its adjacent 2-vertices (see [`two_neighborhood`]).
//! Removing that set deletes no square edge between surviving vertices, so
//! a coloring of the smaller graph is already a proper partial coloring of
//! the original square.

use crate::graph::{
    neighboring_graph, pruned_square_hat, pruned_square_tilde, Coloring, Graph, VertexSet,
};
use crate::listcolor::{
    degree_choosable_color_with_cap, extend_surplus, list_color_exact, ListAssignment,
    FALLBACK_CAP,
};
use crate::rational::{ratio, Rational};
use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("maximum degree {found} exceeds the cap {cap} of the selected regime")]
    CaseMismatch { found: usize, cap: usize },
    #[error("a bounded configuration is still present; peel it before using the global machinery")]
    BoundedConfigPresent,
    #[error("structural invariant violated: {0}")]
    StructureViolation(String),
    #[error("the auxiliary multigraph is defined only in the degree-4 and degree-5 regimes")]
    NoAuxiliaryGraph,
    #[error("could not extend the coloring: {0}")]
    ExtensionImpossible(String),
}

/// Degree regime the reduction runs in. The variant fixes which bounded
/// configurations are searched for and which global machinery applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// Maximum degree 3.
    Three,
    /// Maximum degree 4.
    Four,
    /// Maximum degree 5.
    Five,
    /// Maximum degree at least 6; carries the exact degree cap.
    High(usize),
}

impl Case {
    pub fn degree_cap(&self) -> usize {
        match self {
            Case::Three => 3,
            Case::Four => 4,
            Case::Five => 5,
            Case::High(d) => *d,
        }
    }
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "max-degree-{}", self.degree_cap())
    }
}

/// A bounded configuration: the pattern found and the vertices to delete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigKind {
    /// A vertex of degree at most one.
    LowVertex { u: usize },
    /// Two adjacent 2-vertices.
    AdjacentTwos { u: usize, v: usize },
    /// A 3-vertex with at least two 2-neighbors; all of them go.
    TwoSpread { u: usize, twos: VertexSet },
    /// A 3-vertex `u` with exactly one 2-neighbor `w` whose two remaining
    /// neighbors are light (degree sum at most cap + 2).
    LightThree { u: usize, w: usize },
    /// Adjacent 3-vertices that each have a 2-neighbor.
    ThreePair { u1: usize, u2: usize, v1: usize, v2: usize },
    /// A 4-vertex `v` whose neighbors are all 2-vertices, one of which
    /// (`u`) leads to a vertex of degree below the cap.
    HeavyFour { v: usize, u: usize },
}

impl ConfigKind {
    pub fn describe(&self) -> String {
        match self {
            ConfigKind::LowVertex { u } => format!("vertex {u} of degree at most one"),
            ConfigKind::AdjacentTwos { u, v } => format!("adjacent 2-vertices {u} and {v}"),
            ConfigKind::TwoSpread { u, twos } => {
                format!("3-vertex {u} with 2-neighbors {:?}", twos.as_slice())
            }
            ConfigKind::LightThree { u, w } => {
                format!("3-vertex {u} with light branches and 2-neighbor {w}")
            }
            ConfigKind::ThreePair { u1, u2, .. } => {
                format!("adjacent 3-vertices {u1} and {u2}, each with a 2-neighbor")
            }
            ConfigKind::HeavyFour { v, u } => {
                format!("4-vertex {v} ringed by 2-vertices, peeled through {u}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub kind: ConfigKind,
    pub deleted: VertexSet,
}

pub(crate) fn two_neighbors(g: &Graph, v: usize) -> Vec<usize> {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&w| g.degree(w) == 2)
        .collect()
}

pub(crate) fn has_two_neighbor(g: &Graph, v: usize) -> bool {
    g.neighbors(v).iter().any(|&w| g.degree(w) == 2)
}

fn low_vertex(g: &Graph) -> Option<Config> {
    (0..g.n()).find(|&u| g.degree(u) <= 1).map(|u| Config {
        kind: ConfigKind::LowVertex { u },
        deleted: VertexSet::from_slice(&[u]),
    })
}

fn adjacent_twos(g: &Graph) -> Option<Config> {
    for u in 0..g.n() {
        if g.degree(u) != 2 {
            continue;
        }
        if let Some(&v) = g.neighbors(u).iter().find(|&&v| g.degree(v) == 2) {
            return Some(Config {
                kind: ConfigKind::AdjacentTwos { u, v },
                deleted: VertexSet::from_slice(&[u, v]),
            });
        }
    }
    None
}

fn two_spread(g: &Graph) -> Option<Config> {
    for u in 0..g.n() {
        if g.degree(u) != 3 {
            continue;
        }
        let twos = two_neighbors(g, u);
        if twos.len() >= 2 {
            let mut del = twos.clone();
            del.push(u);
            return Some(Config {
                kind: ConfigKind::TwoSpread {
                    u,
                    twos: VertexSet::new(twos),
                },
                deleted: VertexSet::new(del),
            });
        }
    }
    None
}

fn light_three(g: &Graph, threshold: usize) -> Option<Config> {
    for u in 0..g.n() {
        if g.degree(u) != 3 {
            continue;
        }
        let twos = two_neighbors(g, u);
        if twos.len() != 1 {
            continue;
        }
        let w = twos[0];
        let load: usize = g
            .neighbors(u)
            .iter()
            .filter(|&&x| x != w)
            .map(|&x| g.degree(x))
            .sum();
        if load <= threshold {
            return Some(Config {
                kind: ConfigKind::LightThree { u, w },
                deleted: VertexSet::from_slice(&[u, w]),
            });
        }
    }
    None
}

fn three_pair(g: &Graph) -> Option<Config> {
    for u1 in 0..g.n() {
        if g.degree(u1) != 3 || !has_two_neighbor(g, u1) {
            continue;
        }
        for &u2 in g.neighbors(u1) {
            if g.degree(u2) != 3 || !has_two_neighbor(g, u2) {
                continue;
            }
            let v1 = two_neighbors(g, u1)[0];
            let v2 = two_neighbors(g, u2)[0];
            return Some(Config {
                kind: ConfigKind::ThreePair { u1, u2, v1, v2 },
                deleted: VertexSet::from_slice(&[u1, u2, v1, v2]),
            });
        }
    }
    None
}

fn heavy_four(g: &Graph, cap: usize) -> Option<Config> {
    for v in 0..g.n() {
        if g.degree(v) != 4 || two_neighbors(g, v).len() != 4 {
            continue;
        }
        for &u in g.neighbors(v) {
            let z = g.neighbors(u).iter().copied().find(|&z| z != v)?;
            if g.degree(z) < cap {
                return Some(Config {
                    kind: ConfigKind::HeavyFour { v, u },
                    deleted: VertexSet::from_slice(&[v, u]),
                });
            }
        }
    }
    None
}

/// Finds the highest-priority bounded configuration of the regime, or
/// `None` if the graph is free of them. All scans run over ascending
/// vertex identifiers, so the result is deterministic.
pub fn find_config(g: &Graph, case: Case) -> Result<Option<Config>, ReduceError> {
    let cap = case.degree_cap();
    let found = g.max_degree();
    if found > cap {
        return Err(ReduceError::CaseMismatch { found, cap });
    }
    let shared = low_vertex(g)
        .or_else(|| adjacent_twos(g))
        .or_else(|| two_spread(g));
    if shared.is_some() {
        return Ok(shared);
    }
    Ok(match case {
        Case::Three => three_pair(g),
        Case::Four => light_three(g, cap + 2).or_else(|| three_pair(g)),
        Case::Five => light_three(g, cap + 2),
        Case::High(d) => light_three(g, cap + 2).or_else(|| heavy_four(g, d)),
    })
}

/// One peeling step: the configuration removed and how the child's vertex
/// identifiers map back into the parent.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub config: Config,
    pub child_to_parent: Vec<usize>,
    pub parent_n: usize,
}

/// Removes the highest-priority configuration, if any.
pub fn peel(g: &Graph, case: Case) -> Result<Option<(Graph, ReductionStep)>, ReduceError> {
    let Some(config) = find_config(g, case)? else {
        return Ok(None);
    };
    let (child, child_to_parent) = g.remove_vertices(&config.deleted);
    Ok(Some((
        child,
        ReductionStep {
            config,
            child_to_parent,
            parent_n: g.n(),
        },
    )))
}

/// Lifts a coloring of the peeled child back to the parent by exhaustively
/// list-coloring the deleted vertices against the parent's square.
pub fn extend(
    parent: &Graph,
    step: &ReductionStep,
    child: &Coloring,
) -> Result<Coloring, ReduceError> {
    assert_eq!(step.parent_n, parent.n(), "step belongs to another graph");
    assert_eq!(
        step.child_to_parent.len(),
        child.len(),
        "child coloring does not match the reduction step"
    );
    let palette = child.palette();
    let sq = neighboring_graph(parent);
    let mut col = Coloring::new_empty(parent.n(), palette);
    for (ci, &pi) in step.child_to_parent.iter().enumerate() {
        if let Some(c) = child.get(ci) {
            col.set(pi, c);
        }
    }
    let (conflict, old_of_new) = sq.induced_subgraph(&step.config.deleted);
    let lists = ListAssignment::new(
        old_of_new
            .iter()
            .map(|&v| available_colors(&sq, &col, v, palette))
            .collect(),
    );
    match list_color_exact(&conflict, &lists) {
        Some(filling) => {
            for (i, &v) in old_of_new.iter().enumerate() {
                col.set(v, filling.get(i).expect("filling is total"));
            }
            Ok(col)
        }
        None => Err(ReduceError::ExtensionImpossible(format!(
            "no list coloring fills back {}",
            step.config.kind.describe()
        ))),
    }
}

fn available_colors(sq: &Graph, col: &Coloring, v: usize, palette: u32) -> Vec<u32> {
    let taken: Vec<u32> = sq.neighbors(v).iter().filter_map(|&w| col.get(w)).collect();
    (1..=palette).filter(|c| !taken.contains(c)).collect()
}

/// How an auxiliary edge came to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// The edge stands for this 2-vertex; its endpoints are the
    /// 2-vertex's neighbors.
    TwoVertex(usize),
    /// The edge joins two adjacent 3-vertices, one sponsoring a 2-vertex.
    ThreePair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HNode {
    /// Vertex of the original graph this node stands for.
    pub origin: usize,
    /// Whether the node is a leaf copy produced by splitting a vertex
    /// whose pruned square degree was too large.
    pub is_split: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HEdge {
    pub a: usize,
    pub b: usize,
    pub provenance: Provenance,
}

/// The auxiliary multigraph used by the charge-surplus argument. Parallel
/// edges are meaningful (two 2-vertices between the same pair of hubs);
/// self-loops cannot occur.
#[derive(Debug, Clone)]
pub struct AuxGraph {
    pub nodes: Vec<HNode>,
    pub edges: Vec<HEdge>,
}

impl AuxGraph {
    /// Multigraph degree: parallel edges count separately.
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.a == node || e.b == node)
            .count()
    }

    /// Per-node incidence lists `(edge index, other endpoint)` in edge
    /// construction order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (ei, e) in self.edges.iter().enumerate() {
            adj[e.a].push((ei, e.b));
            adj[e.b].push((ei, e.a));
        }
        adj
    }

    /// Connected components as sorted node-index lists, ordered by their
    /// smallest node index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut comps = Vec::new();
        for start in 0..self.nodes.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(nd) = queue.pop_front() {
                for &(_, other) in &adj[nd] {
                    if !seen[other] {
                        seen[other] = true;
                        comp.push(other);
                        queue.push_back(other);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

/// Builds the auxiliary multigraph for the degree-4 or degree-5 regime.
///
/// Degree 4: every 2-vertex contributes the edge joining its neighbors,
/// and every pair of adjacent 3-vertices with a sponsored 2-vertex
/// contributes an edge. Degree 5: only 2-vertices with a 4-vertex
/// neighbor contribute, the 4-vertex taken as the anchored endpoint.
///
/// Afterwards, any node whose pruned-square degree reaches the regime's
/// split threshold (7 or 8) and that carries at least two auxiliary edges
/// is split into one leaf copy per incident edge.
pub fn build_aux(g: &Graph, case: Case) -> Result<AuxGraph, ReduceError> {
    let cap = case.degree_cap();
    let found = g.max_degree();
    if found > cap {
        return Err(ReduceError::CaseMismatch { found, cap });
    }
    let (pruned_sq, split_threshold) = match case {
        Case::Four => (pruned_square_hat(g).0, 7),
        Case::Five => (pruned_square_tilde(g).0, 8),
        _ => return Err(ReduceError::NoAuxiliaryGraph),
    };

    let mut raw: Vec<(usize, usize, Provenance)> = Vec::new();
    for u in 0..g.n() {
        if g.degree(u) != 2 {
            continue;
        }
        let (a, b) = (g.neighbors(u)[0], g.neighbors(u)[1]);
        match case {
            Case::Four => raw.push((a, b, Provenance::TwoVertex(u))),
            Case::Five => {
                if g.degree(a) == 4 {
                    raw.push((a, b, Provenance::TwoVertex(u)));
                } else if g.degree(b) == 4 {
                    raw.push((b, a, Provenance::TwoVertex(u)));
                }
            }
            _ => unreachable!(),
        }
    }
    if case == Case::Four {
        for (u, v) in g.edges() {
            if g.degree(u) == 3
                && g.degree(v) == 3
                && (has_two_neighbor(g, u) || has_two_neighbor(g, v))
            {
                raw.push((u, v, Provenance::ThreePair));
            }
        }
    }

    let mut hdeg: HashMap<usize, usize> = HashMap::new();
    for &(a, b, _) in &raw {
        *hdeg.entry(a).or_insert(0) += 1;
        *hdeg.entry(b).or_insert(0) += 1;
    }
    let mut split: HashSet<usize> = HashSet::new();
    for (&origin, &d) in &hdeg {
        if pruned_sq.degree(origin) < split_threshold || d <= 1 {
            continue;
        }
        if case == Case::Four && (g.degree(origin) != 4 || d != 2) {
            return Err(ReduceError::StructureViolation(format!(
                "split requested at vertex {origin} with graph degree {} and {d} auxiliary edges",
                g.degree(origin)
            )));
        }
        split.insert(origin);
    }

    let mut nodes: Vec<HNode> = Vec::new();
    let mut edges: Vec<HEdge> = Vec::new();
    let mut node_of: HashMap<usize, usize> = HashMap::new();
    let mut resolve = |origin: usize, nodes: &mut Vec<HNode>| -> usize {
        if split.contains(&origin) {
            nodes.push(HNode {
                origin,
                is_split: true,
            });
            nodes.len() - 1
        } else {
            *node_of.entry(origin).or_insert_with(|| {
                nodes.push(HNode {
                    origin,
                    is_split: false,
                });
                nodes.len() - 1
            })
        }
    };
    for (a, b, provenance) in raw {
        let na = resolve(a, &mut nodes);
        let nb = resolve(b, &mut nodes);
        edges.push(HEdge {
            a: na,
            b: nb,
            provenance,
        });
    }
    Ok(AuxGraph { nodes, edges })
}

/// A 4-vertex one fifth short of its charge target: three 2-neighbors and
/// a 3-neighbor.
pub(crate) fn is_deficit_one(g: &Graph, v: usize) -> bool {
    if g.degree(v) != 4 {
        return false;
    }
    let heavy: Vec<usize> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| g.degree(w) != 2)
        .collect();
    heavy.len() == 1 && g.degree(heavy[0]) == 3
}

/// A 4-vertex two fifths short: all four neighbors are 2-vertices.
pub(crate) fn is_deficit_two(g: &Graph, v: usize) -> bool {
    g.degree(v) == 4 && two_neighbors(g, v).len() == 4
}

/// Charge bookkeeping for one auxiliary component: each leaf contributes
/// a fifth of surplus, each deficient 4-vertex consumes one or two fifths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurplusReport {
    /// Node indices of the component, ascending.
    pub nodes: Vec<usize>,
    pub leaves: usize,
    pub deficit_one: VertexSet,
    pub deficit_two: VertexSet,
    pub surplus: Rational,
}

pub fn component_surplus(g: &Graph, h: &AuxGraph) -> Vec<SurplusReport> {
    let adj = h.adjacency();
    h.components()
        .into_iter()
        .map(|nodes| {
            let leaves = nodes.iter().filter(|&&nd| adj[nd].len() == 1).count();
            let mut d1 = Vec::new();
            let mut d2 = Vec::new();
            for &nd in &nodes {
                let hn = h.nodes[nd];
                if hn.is_split {
                    continue;
                }
                if is_deficit_one(g, hn.origin) {
                    d1.push(hn.origin);
                } else if is_deficit_two(g, hn.origin) {
                    d2.push(hn.origin);
                }
            }
            let surplus = ratio(leaves as i128 - d1.len() as i128 - 2 * d2.len() as i128, 5);
            SurplusReport {
                nodes,
                leaves,
                deficit_one: VertexSet::new(d1),
                deficit_two: VertexSet::new(d2),
                surplus,
            }
        })
        .collect()
}

/// The extracted subgraph plan: a lifted cycle, a connector path from the
/// cycle to the chosen deficient vertex (trivial when the vertex lies on
/// the cycle), and an optional pendant 2-vertex. The square of the
/// subgraph splits into exactly two pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSubgraphPlan {
    pub case: Case,
    /// The chosen deficient 4-vertex.
    pub u: usize,
    /// Where the connector path meets the cycle; equals `u` when `u` lies
    /// on the cycle.
    pub x: usize,
    /// Pendant 2-neighbor of `u`, present exactly when `u` is on the cycle.
    pub hat: Option<usize>,
    /// The lifted cycle as a closed vertex sequence (first vertex not
    /// repeated at the end).
    pub cycle_g: Vec<usize>,
    /// The lifted connector from `x` to `u`; just `[u]` when trivial.
    pub path_g: Vec<usize>,
    pub k_vertices: VertexSet,
    /// Piece of the subgraph's square containing `u`.
    pub first_component: VertexSet,
    pub second_component: VertexSet,
}

type HAdjacency = Vec<Vec<(usize, usize)>>;

/// Multi-source BFS over the auxiliary multigraph, optionally banning one
/// specific edge instance; returns the node and edge sequences of a
/// shortest path to `target`.
fn h_bfs_path(
    adj: &HAdjacency,
    sources: &[usize],
    target: usize,
    avoid_edge: Option<usize>,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    if sources.contains(&target) {
        return Some((vec![target], Vec::new()));
    }
    while let Some(nd) = queue.pop_front() {
        for &(ei, other) in &adj[nd] {
            if Some(ei) == avoid_edge || seen[other] {
                continue;
            }
            seen[other] = true;
            parent[other] = Some((nd, ei));
            if other == target {
                let mut nodes = vec![target];
                let mut edges = Vec::new();
                let mut cur = target;
                while let Some((prev, pei)) = parent[cur] {
                    edges.push(pei);
                    nodes.push(prev);
                    cur = prev;
                }
                nodes.reverse();
                edges.reverse();
                return Some((nodes, edges));
            }
            queue.push_back(other);
        }
    }
    None
}

fn h_distances(adj: &HAdjacency, sources: &[usize]) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(nd) = queue.pop_front() {
        let d = dist[nd].unwrap();
        for &(_, other) in &adj[nd] {
            if dist[other].is_none() {
                dist[other] = Some(d + 1);
                queue.push_back(other);
            }
        }
    }
    dist
}

/// Expands a sequence of auxiliary nodes and edges into original-graph
/// vertices, inserting the sponsoring 2-vertex for every such edge.
/// `closed` adds the interior of the wrap-around edge and validates the
/// result as a cycle.
fn lift(
    g: &Graph,
    h: &AuxGraph,
    nodes: &[usize],
    edges: &[usize],
    closed: bool,
) -> Result<Vec<usize>, ReduceError> {
    let mut out = Vec::new();
    for (i, &nd) in nodes.iter().enumerate() {
        out.push(h.nodes[nd].origin);
        if i < edges.len() {
            if let Provenance::TwoVertex(t) = h.edges[edges[i]].provenance {
                out.push(t);
            }
        }
    }
    let len = out.len();
    let distinct: HashSet<usize> = out.iter().copied().collect();
    if distinct.len() != len {
        return Err(ReduceError::StructureViolation(
            "lifted walk revisits a vertex".into(),
        ));
    }
    let pairs = if closed { len } else { len - 1 };
    for i in 0..pairs {
        if !g.has_edge(out[i], out[(i + 1) % len]) {
            return Err(ReduceError::StructureViolation(format!(
                "lifted walk uses the missing edge ({}, {})",
                out[i],
                out[(i + 1) % len]
            )));
        }
    }
    if closed && (len < 4 || len % 2 != 0) {
        return Err(ReduceError::StructureViolation(format!(
            "lifted cycle has unusable length {len}"
        )));
    }
    Ok(out)
}

/// Chooses the deficient vertex and extracts the cycle / path / pendant
/// subgraph for one auxiliary component. The graph must already be free
/// of bounded configurations.
pub fn plan_k_subgraph(
    g: &Graph,
    case: Case,
    h: &AuxGraph,
    component: &[usize],
) -> Result<KSubgraphPlan, ReduceError> {
    if !matches!(case, Case::Four | Case::Five) {
        return Err(ReduceError::NoAuxiliaryGraph);
    }
    if find_config(g, case)?.is_some() {
        return Err(ReduceError::BoundedConfigPresent);
    }
    let comp: HashSet<usize> = component.iter().copied().collect();
    let adj = h.adjacency();

    // Shortest cycle, scanning edge instances in construction order; a
    // parallel partner yields a 2-cycle.
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for (ei, e) in h.edges.iter().enumerate() {
        if !comp.contains(&e.a) {
            continue;
        }
        if let Some((nodes, mut edges)) = h_bfs_path(&adj, &[e.a], e.b, Some(ei)) {
            if best.as_ref().map_or(true, |(bn, _)| nodes.len() < bn.len()) {
                edges.push(ei);
                best = Some((nodes, edges));
            }
        }
    }
    let Some((mut cyc_nodes, mut cyc_edges)) = best else {
        return Err(ReduceError::StructureViolation(
            "the auxiliary component is acyclic".into(),
        ));
    };

    let specials: Vec<usize> = component
        .iter()
        .copied()
        .filter(|&nd| !h.nodes[nd].is_split)
        .filter(|&nd| {
            is_deficit_one(g, h.nodes[nd].origin) || is_deficit_two(g, h.nodes[nd].origin)
        })
        .collect();
    if specials.is_empty() {
        return Err(ReduceError::StructureViolation(
            "no deficient 4-vertex in the auxiliary component".into(),
        ));
    }
    let dist = h_distances(&adj, &cyc_nodes);
    let u_node = specials
        .into_iter()
        .min_by_key(|&nd| (dist[nd].unwrap_or(usize::MAX), h.nodes[nd].origin))
        .expect("nonempty");
    let u = h.nodes[u_node].origin;

    if dist[u_node] == Some(0) {
        let j = cyc_nodes
            .iter()
            .position(|&nd| nd == u_node)
            .expect("on cycle");
        cyc_nodes.rotate_left(j);
        cyc_edges.rotate_left(j);
        let cycle_g = lift(g, h, &cyc_nodes, &cyc_edges, true)?;
        let mut responsible = Vec::new();
        for &ei in [&cyc_edges[0], cyc_edges.last().expect("nonempty")] {
            match h.edges[ei].provenance {
                Provenance::TwoVertex(t) => responsible.push(t),
                Provenance::ThreePair => {
                    return Err(ReduceError::StructureViolation(
                        "cycle edge at the deficient vertex has no 2-vertex interior".into(),
                    ))
                }
            }
        }
        let hat = two_neighbors(g, u)
            .into_iter()
            .find(|t| !responsible.contains(t))
            .ok_or_else(|| {
                ReduceError::StructureViolation("no spare 2-neighbor for the pendant".into())
            })?;
        assemble_plan(g, case, u, u, Some(hat), cycle_g, vec![u])
    } else {
        let (pnodes, pedges) = h_bfs_path(&adj, &cyc_nodes, u_node, None).ok_or_else(|| {
            ReduceError::StructureViolation("deficient vertex unreachable from the cycle".into())
        })?;
        let j = cyc_nodes
            .iter()
            .position(|&nd| nd == pnodes[0])
            .expect("path starts on the cycle");
        cyc_nodes.rotate_left(j);
        cyc_edges.rotate_left(j);
        let cycle_g = lift(g, h, &cyc_nodes, &cyc_edges, true)?;
        let path_g = lift(g, h, &pnodes, &pedges, false)?;
        if case == Case::Four && (path_g.len() - 1) % 2 != 0 {
            return Err(ReduceError::StructureViolation(
                "the connector path has odd length".into(),
            ));
        }
        if path_g[1..].iter().any(|v| cycle_g.contains(v)) {
            return Err(ReduceError::StructureViolation(
                "the connector path re-enters the cycle".into(),
            ));
        }
        let x = path_g[0];
        assemble_plan(g, case, u, x, None, cycle_g, path_g)
    }
}

fn assemble_plan(
    g: &Graph,
    case: Case,
    u: usize,
    x: usize,
    hat: Option<usize>,
    cycle_g: Vec<usize>,
    path_g: Vec<usize>,
) -> Result<KSubgraphPlan, ReduceError> {
    let mut all: Vec<usize> = cycle_g.clone();
    all.extend(path_g.iter().skip(1));
    if let Some(t) = hat {
        all.push(t);
    }
    let k_vertices = VertexSet::new(all.clone());
    if k_vertices.len() != all.len() {
        return Err(ReduceError::StructureViolation(
            "cycle, connector, and pendant overlap".into(),
        ));
    }

    let mut k_graph = Graph::new(g.n());
    let len = cycle_g.len();
    for i in 0..len {
        k_graph
            .add_edge(cycle_g[i], cycle_g[(i + 1) % len])
            .map_err(|e| ReduceError::StructureViolation(format!("cycle edge: {e}")))?;
    }
    for w in path_g.windows(2) {
        k_graph
            .add_edge(w[0], w[1])
            .map_err(|e| ReduceError::StructureViolation(format!("connector edge: {e}")))?;
    }
    if let Some(t) = hat {
        if !g.has_edge(u, t) {
            return Err(ReduceError::StructureViolation(
                "pendant is not adjacent to the deficient vertex".into(),
            ));
        }
        k_graph
            .add_edge(u, t)
            .map_err(|e| ReduceError::StructureViolation(format!("pendant edge: {e}")))?;
    }

    let ksq = neighboring_graph(&k_graph);
    let (sub, _) = ksq.induced_subgraph(&k_vertices);
    let comps = sub.connected_components();
    if comps.len() != 2 {
        return Err(ReduceError::StructureViolation(format!(
            "the subgraph square has {} pieces instead of two",
            comps.len()
        )));
    }
    let to_parent = |c: &VertexSet| -> VertexSet { c.iter().map(|lv| sub.label(lv)).collect() };
    let (a, b) = (to_parent(&comps[0]), to_parent(&comps[1]));
    let (first_component, second_component) = if a.contains(u) { (a, b) } else { (b, a) };
    if !first_component.contains(u) {
        return Err(ReduceError::StructureViolation(
            "the deficient vertex is missing from the square".into(),
        ));
    }
    if path_g.len() > 1 && !first_component.contains(x) {
        return Err(ReduceError::StructureViolation(
            "cycle attachment point and deficient vertex landed in different pieces".into(),
        ));
    }
    Ok(KSubgraphPlan {
        case,
        u,
        x,
        hat,
        cycle_g,
        path_g,
        k_vertices,
        first_component,
        second_component,
    })
}

/// The deletion region of the global route: `u` together with its
/// adjacent 2-vertices. Removing it destroys no square edge between
/// surviving vertices, because every common neighbor of two survivors
/// either survives or is a deleted 2-vertex — and a deleted 2-vertex has
/// `u`, also deleted, as one of its two neighbors.
pub fn two_neighborhood(g: &Graph, u: usize) -> VertexSet {
    let mut region = two_neighbors(g, u);
    region.push(u);
    VertexSet::new(region)
}

fn greedy_color(sq: &Graph, col: &mut Coloring, v: usize) -> Result<(), ReduceError> {
    let forbidden: Vec<u32> = sq.neighbors(v).iter().filter_map(|&w| col.get(w)).collect();
    match col.first_free(&forbidden) {
        Some(c) => {
            col.set(v, c);
            Ok(())
        }
        None => Err(ReduceError::ExtensionImpossible(format!(
            "no free color at vertex {v}"
        ))),
    }
}

/// Completes a coloring across the extracted subgraph.
///
/// `partial` must color everything outside [`two_neighborhood`] of
/// `plan.u` (pruned vertices may be left open; they are uncolored here
/// anyway). The routine greedily colors the 2-neighbors of `u` that fell
/// outside the subgraph, pre-colors the far end of an off-cycle
/// connector, then extends across each square piece — every vertex there
/// has at least as many free colors as piece neighbors, with genuine
/// surplus next to `u` — and finally sweeps up the pruned vertices, which
/// always have a color to spare.
pub fn color_via_k(
    g: &Graph,
    plan: &KSubgraphPlan,
    partial: &Coloring,
) -> Result<Coloring, ReduceError> {
    assert_eq!(partial.len(), g.n(), "partial coloring size mismatch");
    let palette = partial.palette();
    let sq = neighboring_graph(g);
    let (pruned_sq, pruned) = match plan.case {
        Case::Four => pruned_square_hat(g),
        Case::Five => pruned_square_tilde(g),
        _ => return Err(ReduceError::NoAuxiliaryGraph),
    };

    let mut col = partial.clone();
    for v in pruned.iter().chain(plan.k_vertices.iter()) {
        col.clear(v);
    }

    let region = two_neighborhood(g, plan.u);
    for v in 0..g.n() {
        if col.get(v).is_none()
            && !region.contains(v)
            && !pruned.contains(v)
            && !plan.k_vertices.contains(v)
        {
            return Err(ReduceError::StructureViolation(format!(
                "vertex {v} outside the working region is uncolored"
            )));
        }
    }

    // 2-neighbors of u that are not part of the subgraph: one spare when
    // u lies on the cycle, the danglers next to u when it does not.
    for t in two_neighbors(g, plan.u) {
        if !plan.k_vertices.contains(t) && !pruned.contains(t) && col.get(t).is_none() {
            greedy_color(&sq, &mut col, t)?;
        }
    }

    // With an off-cycle deficient vertex, the far end of the connector is
    // colored up front, walking toward the cycle but sparing the first
    // interior vertex so the pendant block keeps its extra witness.
    if plan.path_g.len() > 1 {
        let interior = &plan.path_g[1..plan.path_g.len() - 1];
        for &v in interior.iter().skip(1).rev() {
            if plan.second_component.contains(v)
                && !pruned.contains(v)
                && col.get(v).is_none()
            {
                greedy_color(&sq, &mut col, v)?;
            }
        }
    }

    for comp in [&plan.first_component, &plan.second_component] {
        let ucomp: VertexSet = comp
            .iter()
            .filter(|&v| col.get(v).is_none() && !pruned.contains(v))
            .collect();
        if ucomp.is_empty() {
            continue;
        }
        let (sub, _) = pruned_sq.induced_subgraph(&ucomp);
        let mut pieces: Vec<VertexSet> = sub
            .connected_components()
            .into_iter()
            .map(|c| c.iter().map(|lv| sub.label(lv)).collect())
            .collect();
        pieces.sort_by_key(|p| p.min());
        for piece in pieces {
            let (pg, old) = pruned_sq.induced_subgraph(&piece);
            let lists = ListAssignment::new(
                old.iter()
                    .map(|&v| available_colors(&sq, &col, v, palette))
                    .collect(),
            );
            let surplus_at = (0..pg.n()).find(|&i| lists.get(i).len() > pg.degree(i));
            let filling = match surplus_at {
                Some(y) => extend_surplus(&pg, &lists, y).map_err(|e| {
                    ReduceError::ExtensionImpossible(format!(
                        "surplus extension failed on a square piece: {e}"
                    ))
                })?,
                None => {
                    match degree_choosable_color_with_cap(&pg, &lists, FALLBACK_CAP.max(pg.n())) {
                        Ok(Some(c)) => c,
                        Ok(None) => {
                            return Err(ReduceError::ExtensionImpossible(
                                "a square piece is a color-critical block with identical lists"
                                    .into(),
                            ))
                        }
                        Err(e) => {
                            return Err(ReduceError::ExtensionImpossible(format!(
                                "list coloring a square piece failed: {e}"
                            )))
                        }
                    }
                }
            };
            for (i, &v) in old.iter().enumerate() {
                col.set(v, filling.get(i).expect("piece filling is total"));
            }
        }
    }

    for v in pruned.iter() {
        if col.get(v).is_none() {
            greedy_color(&sq, &mut col, v)?;
        }
    }
    if !col.is_total() {
        return Err(ReduceError::StructureViolation(
            "the extension left a vertex uncolored".into(),
        ));
    }
    Ok(col)
}
