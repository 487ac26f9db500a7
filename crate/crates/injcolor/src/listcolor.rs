//! Exact chromatic number, exact list-coloring, and the two structural
//! coloring guarantees the reduction engine leans on: greedy extension from a
//! surplus vertex, and list-coloring graphs whose block structure is not
//! all cliques and odd cycles.

use crate::graph::{Coloring, Graph, VertexSet};
use thiserror::Error;

/// Default size cap for the pure-backtracking path of
/// [`degree_choosable_color`]; larger inputs are refused rather than risking
/// exponential search on graphs the structural shortcuts don't cover.
pub const FALLBACK_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ListColorError {
    #[error("vertex {0} violates a list-size precondition")]
    PreconditionViolated(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("{0} vertices exceed the backtracking fallback cap")]
    FallbackExceeded(usize),
}

/// Per-vertex sets of allowed colors (1-based, sorted, duplicate-free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<u32>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<u32>>) -> Self {
        let lists = lists
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        ListAssignment { lists }
    }

    pub fn uniform(n: usize, colors: &[u32]) -> Self {
        Self::new(vec![colors.to_vec(); n])
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn get(&self, v: usize) -> &[u32] {
        &self.lists[v]
    }

    pub fn max_color(&self) -> u32 {
        self.lists
            .iter()
            .flat_map(|l| l.iter().copied())
            .max()
            .unwrap_or(1)
    }

    pub fn all_identical(&self) -> bool {
        self.lists.windows(2).all(|w| w[0] == w[1])
    }
}

/// Outcome of the exact chromatic-number search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChiOutcome {
    /// The chromatic number together with an optimal proper coloring.
    Chromatic(u32, Coloring),
    /// No proper coloring exists within the given bound.
    NoneWithin(u32),
}

fn greedy_clique_bound(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut clique: Vec<usize> = Vec::new();
    for v in order {
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique.len()
}

fn saturation_pick(g: &Graph, colors: &[Option<u32>]) -> usize {
    let mut best: Option<(usize, usize, std::cmp::Reverse<usize>)> = None;
    let mut best_v = usize::MAX;
    for v in 0..g.n() {
        if colors[v].is_some() {
            continue;
        }
        let mut seen: Vec<u32> = g
            .neighbors(v)
            .iter()
            .filter_map(|&u| colors[u])
            .collect();
        seen.sort_unstable();
        seen.dedup();
        let key = (seen.len(), g.degree(v), std::cmp::Reverse(v));
        if best.map_or(true, |b| key > b) {
            best = Some(key);
            best_v = v;
        }
    }
    best_v
}

fn try_k_coloring(g: &Graph, k: u32) -> Option<Vec<u32>> {
    fn rec(g: &Graph, k: u32, colors: &mut [Option<u32>], colored: usize, max_used: u32) -> bool {
        if colored == g.n() {
            return true;
        }
        let v = saturation_pick(g, colors);
        // Trying more than one fresh color only permutes color names.
        let limit = k.min(max_used + 1);
        for c in 1..=limit {
            if g.neighbors(v).iter().all(|&u| colors[u] != Some(c)) {
                colors[v] = Some(c);
                if rec(g, k, colors, colored + 1, max_used.max(c)) {
                    return true;
                }
                colors[v] = None;
            }
        }
        false
    }
    let mut colors = vec![None; g.n()];
    rec(g, k, &mut colors, 0, 0).then(|| colors.into_iter().map(Option::unwrap).collect())
}

/// Exact chromatic number of `g` by saturation-guided branch and bound,
/// bounded below by a greedy clique.
pub fn chi_exact(g: &Graph, upper_bound: u32) -> ChiOutcome {
    if g.n() == 0 {
        return ChiOutcome::Chromatic(0, Coloring::new_empty(0, 0));
    }
    let lb = greedy_clique_bound(g).max(1) as u32;
    for k in lb..=upper_bound {
        if let Some(colors) = try_k_coloring(g, k) {
            let c = Coloring::from_colors(colors.into_iter().map(Some).collect(), k)
                .expect("search assigns colors within 1..=k");
            return ChiOutcome::Chromatic(k, c);
        }
    }
    ChiOutcome::NoneWithin(upper_bound)
}

/// Complete backtracking list-coloring (smallest-remaining-list first);
/// `None` means no proper coloring chooses from every list.
pub fn list_color_exact(g: &Graph, lists: &ListAssignment) -> Option<Coloring> {
    assert_eq!(lists.len(), g.n(), "one list per vertex");
    fn avail(g: &Graph, lists: &ListAssignment, colors: &[Option<u32>], v: usize) -> Vec<u32> {
        lists
            .get(v)
            .iter()
            .copied()
            .filter(|&c| g.neighbors(v).iter().all(|&u| colors[u] != Some(c)))
            .collect()
    }
    fn rec(g: &Graph, lists: &ListAssignment, colors: &mut [Option<u32>], colored: usize) -> bool {
        if colored == g.n() {
            return true;
        }
        let v = (0..g.n())
            .filter(|&v| colors[v].is_none())
            .min_by_key(|&v| (avail(g, lists, colors, v).len(), v))
            .expect("some vertex is uncolored");
        for c in avail(g, lists, colors, v) {
            colors[v] = Some(c);
            if rec(g, lists, colors, colored + 1) {
                return true;
            }
            colors[v] = None;
        }
        false
    }
    let mut colors = vec![None; g.n()];
    rec(g, lists, &mut colors, 0).then(|| {
        Coloring::from_colors(colors, lists.max_color())
            .expect("colors drawn from the lists")
    })
}

/// Greedy list-coloring of a connected graph in which vertex `y` has one
/// spare color: process vertices by decreasing distance from `y`, so each
/// one still has an uncolored neighbor on its shortest path to `y` when
/// its turn comes, and `y` itself closes with its surplus.
pub fn extend_surplus(
    g: &Graph,
    lists: &ListAssignment,
    y: usize,
) -> Result<Coloring, ListColorError> {
    assert_eq!(lists.len(), g.n());
    assert!(y < g.n(), "anchor vertex out of range");
    for v in 0..g.n() {
        if lists.get(v).len() < g.degree(v) {
            return Err(ListColorError::PreconditionViolated(v));
        }
    }
    if lists.get(y).len() <= g.degree(y) {
        return Err(ListColorError::PreconditionViolated(y));
    }
    let dist = g.bfs_distances(y);
    if dist.iter().any(Option::is_none) {
        return Err(ListColorError::Disconnected);
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(dist[v].unwrap()), v));
    let mut c = Coloring::new_empty(g.n(), lists.max_color());
    for v in order {
        let used: Vec<u32> = g.neighbors(v).iter().filter_map(|&u| c.get(u)).collect();
        let pick = lists
            .get(v)
            .iter()
            .copied()
            .find(|col| !used.contains(col))
            .ok_or(ListColorError::PreconditionViolated(v))?;
        c.set(v, pick);
    }
    Ok(c)
}

/// Block-structure certificate: a connected graph resists every tight list
/// assignment exactly when each of its blocks is a clique or an odd cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GallaiStructure {
    pub is_gallai: bool,
    /// First block (by smallest contained vertex) that is neither a clique
    /// nor an odd cycle, when one exists.
    pub violating_block: Option<VertexSet>,
}

pub fn is_gallai_structure(g: &Graph) -> Result<GallaiStructure, ListColorError> {
    if g.connected_components().len() > 1 {
        return Err(ListColorError::Disconnected);
    }
    for block in crate::graph::blocks(g) {
        let k = block.n();
        let clique = block.m() == k * (k - 1) / 2;
        let odd_cycle =
            k >= 3 && k % 2 == 1 && block.m() == k && (0..k).all(|v| block.degree(v) == 2);
        if !clique && !odd_cycle {
            return Ok(GallaiStructure {
                is_gallai: false,
                violating_block: Some(
                    block
                        .labels()
                        .expect("blocks carry original labels")
                        .iter()
                        .copied()
                        .collect(),
                ),
            });
        }
    }
    Ok(GallaiStructure {
        is_gallai: true,
        violating_block: None,
    })
}

/// List-colors a connected graph whose lists are at least as large as its
/// degrees, using the structural shortcuts before any search:
///
/// * some vertex has a spare color — greedy extension always works;
/// * lists are identical and every block is a clique or odd cycle — no
///   coloring exists (`Ok(None)`) and no search is needed;
/// * otherwise complete backtracking, refused above `cap` vertices.
pub fn degree_choosable_color_with_cap(
    g: &Graph,
    lists: &ListAssignment,
    cap: usize,
) -> Result<Option<Coloring>, ListColorError> {
    assert_eq!(lists.len(), g.n());
    if g.n() == 0 {
        return Ok(Some(Coloring::new_empty(0, 0)));
    }
    if g.connected_components().len() > 1 {
        return Err(ListColorError::Disconnected);
    }
    for v in 0..g.n() {
        if lists.get(v).len() < g.degree(v) {
            return Err(ListColorError::PreconditionViolated(v));
        }
    }
    if let Some(y) = (0..g.n()).find(|&v| lists.get(v).len() > g.degree(v)) {
        return extend_surplus(g, lists, y).map(Some);
    }
    if lists.all_identical() && is_gallai_structure(g)?.is_gallai {
        return Ok(None);
    }
    if g.n() > cap {
        return Err(ListColorError::FallbackExceeded(g.n()));
    }
    Ok(list_color_exact(g, lists))
}

pub fn degree_choosable_color(
    g: &Graph,
    lists: &ListAssignment,
) -> Result<Option<Coloring>, ListColorError> {
    degree_choosable_color_with_cap(g, lists, FALLBACK_CAP)
}
