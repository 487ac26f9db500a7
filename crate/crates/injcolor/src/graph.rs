//! Core graph representation and the structural queries the coloring
//! pipeline is built on: the common-neighbor square, its pruned variants,
//! block decomposition, thread extraction, and coloring verification.

use std::collections::VecDeque;
use thiserror::Error;

/// Errors raised by graph construction and structural queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("vertex {0} is uncolored")]
    UncoloredVertex(usize),
    #[error("component {0:?} has no branch vertex to anchor its threads")]
    MalformedComponent(VertexSet),
}

/// A sorted, duplicate-free set of vertex identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        VertexSet(vertices)
    }

    pub fn from_slice(vertices: &[usize]) -> Self {
        Self::new(vertices.to_vec())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Simple undirected graph over dense vertex identifiers `0..n`.
///
/// Adjacency lists are kept sorted so every traversal in the crate is
/// deterministic. The optional `labels` carry original identifiers through
/// vertex deletions, so a coloring of a peeled graph can be translated back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            labels: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, count: n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let iu = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(iu, v);
        let iv = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(iv, u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Original identifier of vertex `v`, falling back to `v` itself when
    /// this graph has never been derived from another one.
    pub fn label(&self, v: usize) -> usize {
        match &self.labels {
            Some(l) => l[v],
            None => v,
        }
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<usize>) {
        assert_eq!(labels.len(), self.n());
        self.labels = Some(labels);
    }

    /// Subgraph induced on `keep`, together with the map from new to old
    /// identifiers. Labels are composed so they keep pointing at the root
    /// graph of a deletion chain.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let mut old_of_new = Vec::with_capacity(keep.len());
        let mut new_of_old = vec![usize::MAX; self.n()];
        for v in keep.iter() {
            new_of_old[v] = old_of_new.len();
            old_of_new.push(v);
        }
        let mut g = Graph::new(old_of_new.len());
        for (nu, &u) in old_of_new.iter().enumerate() {
            for &v in &self.adj[u] {
                let nv = new_of_old[v];
                if nv != usize::MAX && nu < nv {
                    g.add_edge(nu, nv).expect("induced edges are simple");
                }
            }
        }
        g.labels = Some(old_of_new.iter().map(|&v| self.label(v)).collect());
        (g, old_of_new)
    }

    /// The graph left after deleting `del`, with the new-to-old map.
    pub fn remove_vertices(&self, del: &VertexSet) -> (Graph, Vec<usize>) {
        let keep: VertexSet = (0..self.n()).filter(|&v| !del.contains(v)).collect();
        self.induced_subgraph(&keep)
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            out.push(VertexSet::new(comp));
        }
        out
    }

    /// Breadth-first distances from `src`; unreachable vertices get `None`.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Length of a shortest cycle, or `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for root in 0..self.n() {
            let mut dist = vec![usize::MAX; self.n()];
            let mut parent = vec![usize::MAX; self.n()];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if v != parent[u] {
                        // A non-tree edge closes a walk through the root
                        // that contains a cycle no longer than the walk.
                        let cycle = dist[u] + dist[v] + 1;
                        if best.map_or(true, |b| cycle < b) {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
        best
    }

    /// Smallest common neighbor of `u` and `v`, if any.
    pub fn common_neighbor(&self, u: usize, v: usize) -> Option<usize> {
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(a[i]),
            }
        }
        None
    }
}

/// A partial or total assignment of 1-based colors with a fixed palette.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<Option<u32>>,
    palette: u32,
}

impl Coloring {
    pub fn new_empty(n: usize, palette: u32) -> Self {
        Coloring {
            colors: vec![None; n],
            palette,
        }
    }

    pub fn from_colors(colors: Vec<Option<u32>>, palette: u32) -> Result<Self, GraphError> {
        for c in colors.iter().flatten() {
            if *c < 1 || *c > palette {
                return Err(GraphError::VertexOutOfRange {
                    vertex: *c as usize,
                    count: palette as usize,
                });
            }
        }
        Ok(Coloring { colors, palette })
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<u32> {
        self.colors[v]
    }

    pub fn set(&mut self, v: usize, color: u32) {
        assert!(
            (1..=self.palette).contains(&color),
            "color {color} outside palette 1..={}",
            self.palette
        );
        self.colors[v] = Some(color);
    }

    pub fn clear(&mut self, v: usize) {
        self.colors[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn colors_used(&self) -> u32 {
        self.colors.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Smallest palette color not present among the given forbidden ones.
    pub fn first_free(&self, forbidden: &[u32]) -> Option<u32> {
        (1..=self.palette).find(|c| !forbidden.contains(c))
    }
}

/// A pair of same-colored vertices together with a common neighbor
/// witnessing that the coloring is not injective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub witness: usize,
}

/// The common-neighbor square: `u` and `v` are adjacent exactly when some
/// vertex of `g` is adjacent to both. An injective coloring of `g` is the
/// same thing as a proper coloring of this graph.
pub fn neighboring_graph(g: &Graph) -> Graph {
    let mut pairs = Vec::new();
    for w in 0..g.n() {
        let nb = g.neighbors(w);
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                pairs.push((nb[i], nb[j]));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let mut sq = Graph::new(g.n());
    for (u, v) in pairs {
        sq.add_edge(u, v).expect("deduplicated pairs");
    }
    if let Some(l) = g.labels() {
        sq.set_labels(l.to_vec());
    }
    sq
}

fn prune_square(g: &Graph, predicate: impl Fn(usize, usize) -> bool) -> (Graph, VertexSet) {
    let sq = neighboring_graph(g);
    let deleted: VertexSet = (0..g.n()).filter(|&v| predicate(v, sq.degree(v))).collect();
    let mut pruned = Graph::new(g.n());
    for (u, v) in sq.edges() {
        if !deleted.contains(u) && !deleted.contains(v) {
            pruned.add_edge(u, v).expect("subset of simple edges");
        }
    }
    if let Some(l) = g.labels() {
        pruned.set_labels(l.to_vec());
    }
    (pruned, deleted)
}

/// Square with every 2-vertex of square-degree at most 5 removed. The
/// removed vertices keep their identifiers (they become isolated) and are
/// returned in the order a greedy pass should color them after all others;
/// at most five of their constraints can ever be colored, so six colors
/// always suffice to finish.
pub fn pruned_square_hat(g: &Graph) -> (Graph, VertexSet) {
    prune_square(g, |v, sq_deg| g.degree(v) == 2 && sq_deg <= 5)
}

/// Square with every vertex of square-degree at most 6 removed, regardless
/// of its degree in `g`; the deferred-greedy contract matches
/// [`pruned_square_hat`] with seven colors.
pub fn pruned_square_tilde(g: &Graph) -> (Graph, VertexSet) {
    prune_square(g, |_, sq_deg| sq_deg <= 6)
}

/// Blocks (maximal 2-connected subgraphs) in increasing order of their
/// smallest original vertex. Bridges appear as 2-vertex blocks and isolated
/// vertices as singletons, so every vertex occurs in at least one block and
/// every edge in exactly one.
pub fn blocks(g: &Graph) -> Vec<Graph> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out: Vec<Vec<(usize, usize)>> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if g.degree(root) == 0 {
            disc[root] = timer;
            timer += 1;
            out.push(vec![(root, root)]);
            continue;
        }
        // Iterative depth-first search; each frame tracks the next
        // neighbor index to visit.
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(u) {
                let v = g.neighbors(u)[*idx];
                *idx += 1;
                if v == parent {
                    continue;
                }
                if disc[v] == usize::MAX {
                    edge_stack.push((u, v));
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, u, 0));
                } else if disc[v] < disc[u] {
                    edge_stack.push((u, v));
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(&e) = edge_stack.last() {
                            block.push(e);
                            edge_stack.pop();
                            if e == (p, u) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }

    let mut graphs: Vec<Graph> = out
        .iter()
        .map(|edges| {
            let verts: VertexSet = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            let mut idx = vec![usize::MAX; n];
            for (i, v) in verts.iter().enumerate() {
                idx[v] = i;
            }
            let mut bg = Graph::new(verts.len());
            for &(a, b) in edges {
                if a != b {
                    bg.add_edge(idx[a], idx[b]).expect("blocks partition edges");
                }
            }
            bg.set_labels(verts.iter().map(|v| g.label(v)).collect());
            bg
        })
        .collect();
    graphs.sort_by_key(|bg| bg.labels().and_then(|l| l.iter().min().copied()));
    graphs
}

/// Checks that every pair of vertices with a common neighbor received
/// distinct colors. Returns the lexicographically first offending pair
/// (smallest `u`, then `v`, then witness) if not.
pub fn verify_injective(g: &Graph, c: &Coloring) -> Result<Option<Violation>, GraphError> {
    if c.len() != g.n() {
        return Err(GraphError::VertexOutOfRange {
            vertex: c.len(),
            count: g.n(),
        });
    }
    for v in 0..g.n() {
        if c.get(v).is_none() {
            return Err(GraphError::UncoloredVertex(v));
        }
    }
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if c.get(u) == c.get(v) {
                if let Some(witness) = g.common_neighbor(u, v) {
                    return Ok(Some(Violation { u, v, witness }));
                }
            }
        }
    }
    Ok(None)
}

/// A maximal path whose interior vertices all have degree 2 and whose
/// endpoints have degree at least 3. A branch vertex with a cycle of
/// 2-vertices back to itself yields equal endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub endpoints: (usize, usize),
    pub interior: Vec<usize>,
}

/// All threads of a graph plus the per-vertex relations the configuration
/// detectors need.
#[derive(Debug, Clone)]
pub struct ThreadMap {
    pub threads: Vec<Thread>,
    /// For every vertex, its adjacent 2-vertices in increasing order.
    pub nearby: Vec<Vec<usize>>,
    /// For every 2-vertex, the index of the thread containing it.
    pub thread_of: Vec<Option<usize>>,
}

/// Extracts every thread. Components consisting solely of 2-vertices
/// (cycles) or chains that run into degree-≤1 vertices have no well-formed
/// thread structure and are reported as malformed; the reduction engine
/// removes such configurations before any thread query is meaningful.
pub fn threads_and_nearby(g: &Graph) -> Result<ThreadMap, GraphError> {
    let n = g.n();
    let nearby: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&u| g.degree(u) == 2)
                .collect()
        })
        .collect();

    let mut threads = Vec::new();
    let mut thread_of = vec![None; n];
    for start in 0..n {
        if g.degree(start) < 3 {
            continue;
        }
        for &first in g.neighbors(start) {
            if g.degree(first) != 2 || thread_of[first].is_some() {
                continue;
            }
            let mut interior = Vec::new();
            let mut prev = start;
            let mut cur = first;
            while g.degree(cur) == 2 {
                interior.push(cur);
                let next = g
                    .neighbors(cur)
                    .iter()
                    .copied()
                    .find(|&w| w != prev)
                    .unwrap_or(prev);
                prev = cur;
                cur = next;
            }
            if g.degree(cur) < 3 {
                let comp = g
                    .connected_components()
                    .into_iter()
                    .find(|c| c.contains(start))
                    .expect("start belongs to some component");
                return Err(GraphError::MalformedComponent(comp));
            }
            let idx = threads.len();
            for &v in &interior {
                thread_of[v] = Some(idx);
            }
            let (endpoints, interior) = if cur < start {
                (
                    (cur, start),
                    interior.iter().rev().copied().collect::<Vec<_>>(),
                )
            } else {
                ((start, cur), interior)
            };
            threads.push(Thread { endpoints, interior });
        }
    }

    // Any 2-vertex not reached from a branch vertex lives in an all-2 or
    // degenerate component.
    for v in 0..n {
        if g.degree(v) == 2 && thread_of[v].is_none() {
            let comp = g
                .connected_components()
                .into_iter()
                .find(|c| c.contains(v))
                .expect("vertex belongs to some component");
            return Err(GraphError::MalformedComponent(comp));
        }
    }
    threads.sort_by(|a, b| (a.endpoints, &a.interior).cmp(&(b.endpoints, &b.interior)));
    Ok(ThreadMap {
        threads,
        nearby,
        thread_of,
    })
}
