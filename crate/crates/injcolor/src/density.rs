//! Exact maximum average degree: the densest-subgraph value
//! `max over nonempty S of 2·e(S)/|S|`, computed with a flow-based
//! threshold test and returned together with an optimal witness set.

use crate::flow::FlowNetwork;
use crate::graph::{Graph, VertexSet};
use crate::rational::{ratio, Rational};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph with {0} vertices exceeds the brute-force limit of 20")]
    TooLarge(usize),
}

/// An optimal subset together with its average degree `2·e(S)/|S|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityWitness {
    pub subset: VertexSet,
    pub density: Rational,
}

/// Average degree of the subgraph induced on `subset`.
pub fn induced_density(g: &Graph, subset: &VertexSet) -> Rational {
    assert!(!subset.is_empty(), "density of the empty set is undefined");
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| subset.contains(u) && subset.contains(v))
        .count();
    ratio(2 * edges as i128, subset.len() as i128)
}

/// Is there a nonempty subset with average degree strictly above `p/q`?
/// If so, returns the source side of a minimum cut as a witness.
///
/// The network has capacity `m·q` from the source to every vertex,
/// `m·q + p − q·d(v)` from `v` to the sink, and `q` along both directions
/// of every edge. A cut strictly below `n·m·q` corresponds to a set `S`
/// with `|S|·p − 2·q·e(S) < 0`.
fn denser_than(g: &Graph, p: i128, q: i128) -> Option<VertexSet> {
    let n = g.n() as i128;
    let m = g.m() as i128;
    let (s, t) = (g.n(), g.n() + 1);
    let mut net = FlowNetwork::new(g.n() + 2);
    for v in 0..g.n() {
        net.add_edge(s, v, m * q);
        let back = m * q + p - q * g.degree(v) as i128;
        debug_assert!(back >= 0, "m >= max degree keeps sink capacities valid");
        net.add_edge(v, t, back);
    }
    for (u, v) in g.edges() {
        net.add_edge(u, v, q);
        net.add_edge(v, u, q);
    }
    let flow = net.max_flow(s, t);
    if flow < n * m * q {
        let side = net.min_cut_source_side(s);
        let subset: VertexSet = (0..g.n()).filter(|&v| side[v]).collect();
        debug_assert!(!subset.is_empty());
        Some(subset)
    } else {
        None
    }
}

/// Exact maximum average degree with a deterministic optimal witness.
///
/// Binary search over the threshold test: whenever a denser subset is
/// found, the lower bound jumps to that subset's exact density. Distinct
/// achievable densities are rationals with denominator at most `n`, so the
/// search stops once the bracket is narrower than `1/n²`; a final test just
/// below the optimum then recovers the canonical (minimal min-cut) witness.
pub fn mad_exact(g: &Graph) -> Result<DensityWitness, DensityError> {
    if g.n() == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if g.m() == 0 {
        return Ok(DensityWitness {
            subset: VertexSet::new(vec![0]),
            density: Rational::zero(),
        });
    }
    let n = g.n() as i128;
    let mut best = ratio(2 * g.m() as i128, n);
    let mut hi = Rational::from_integer(g.max_degree() as i128);
    let gap = ratio(1, n * n);
    while hi - best >= gap {
        let mid = (best + hi) / 2;
        match denser_than(g, *mid.numer(), *mid.denom()) {
            Some(subset) => {
                let d = induced_density(g, &subset);
                debug_assert!(d > mid);
                best = d;
            }
            None => hi = mid,
        }
    }
    let just_below = best - gap / 2;
    let subset = denser_than(g, *just_below.numer(), *just_below.denom())
        .expect("the optimum itself exceeds the lowered threshold");
    debug_assert_eq!(induced_density(g, &subset), best);
    Ok(DensityWitness {
        subset,
        density: best,
    })
}

/// Brute-force reference over all nonempty subsets, limited to 20 vertices.
/// Ties prefer the lexicographically smallest bitmask, i.e. the witness
/// containing the smallest-indexed vertices.
pub fn mad_bruteforce(g: &Graph) -> Result<DensityWitness, DensityError> {
    let n = g.n();
    if n == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if n > 20 {
        return Err(DensityError::TooLarge(n));
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .fold(0u32, |acc, &u| acc | (1 << u))
        })
        .collect();
    // edge_count[s] = number of edges inside subset s, built incrementally
    // from s with its lowest vertex removed.
    let mut edge_count = vec![0u32; 1 << n];
    let mut best = (Rational::zero(), 1u32);
    for s in 1u32..(1 << n) {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        edge_count[s as usize] = edge_count[rest as usize] + (masks[v] & rest).count_ones();
        let d = ratio(
            2 * edge_count[s as usize] as i128,
            s.count_ones() as i128,
        );
        if d > best.0 {
            best = (d, s);
        }
    }
    Ok(DensityWitness {
        subset: (0..n).filter(|v| best.1 >> v & 1 == 1).collect(),
        density: best.0,
    })
}

/// Strict comparison against a density hypothesis; the empty graph
/// vacuously satisfies every bound.
pub fn satisfies_hypothesis(g: &Graph, bound: Rational) -> bool {
    match mad_exact(g) {
        Ok(w) => w.density < bound,
        Err(DensityError::EmptyGraph) => true,
        Err(_) => unreachable!("mad_exact only fails on empty graphs"),
    }
}
