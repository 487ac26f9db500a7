//! Graph generators: classic named graphs, incidence constructions,
//! subdivisions, seeded random sparse instances, and the structured
//! gadgets used to exercise the deep branches of the reduction engine.

use crate::density::mad_exact;
use crate::graph::{Graph, GraphError};
use crate::rational::Rational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("no graph satisfying the constraints was found within the retry budget")]
    GenerationFailed,
}

fn expect_simple(r: Result<(), GraphError>) {
    r.expect("generator produces simple edges");
}

pub fn cycle(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::BadParameter(format!("cycle needs n >= 3, got {n}")));
    }
    let mut g = Graph::new(n);
    for i in 0..n {
        expect_simple(g.add_edge(i, (i + 1) % n));
    }
    Ok(g)
}

pub fn path(n: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::BadParameter("path needs n >= 1".into()));
    }
    let mut g = Graph::new(n);
    for i in 0..n - 1 {
        expect_simple(g.add_edge(i, i + 1));
    }
    Ok(g)
}

/// Star with `leaves` leaves: vertex 0 is the center.
pub fn star(leaves: usize) -> Result<Graph, GenError> {
    let mut g = Graph::new(leaves + 1);
    for i in 1..=leaves {
        expect_simple(g.add_edge(0, i));
    }
    Ok(g)
}

pub fn complete(n: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::BadParameter("complete graph needs n >= 1".into()));
    }
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            expect_simple(g.add_edge(u, v));
        }
    }
    Ok(g)
}

/// Cubic graph from LCF notation: a Hamiltonian cycle on
/// `shifts.len() * repeats` vertices plus the chord `i -> i + shift`
/// for each vertex. The notation must close up into a 3-regular graph.
pub fn lcf(shifts: &[i64], repeats: usize) -> Result<Graph, GenError> {
    let n = shifts.len() * repeats;
    if n < 3 {
        return Err(GenError::BadParameter("lcf needs at least 3 vertices".into()));
    }
    let mut g = Graph::new(n);
    for i in 0..n {
        expect_simple(g.add_edge(i, (i + 1) % n));
    }
    let mut chords: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let s = shifts[i % shifts.len()];
            let j = (i as i64 + s).rem_euclid(n as i64) as usize;
            (i.min(j), i.max(j))
        })
        .collect();
    chords.sort_unstable();
    chords.dedup();
    for (u, v) in chords {
        g.add_edge(u, v)
            .map_err(|e| GenError::BadParameter(format!("lcf chords are not simple: {e}")))?;
    }
    if (0..n).any(|v| g.degree(v) != 3) {
        return Err(GenError::BadParameter(
            "lcf shifts do not close into a cubic graph".into(),
        ));
    }
    Ok(g)
}

/// The 14-vertex point/line incidence graph of the 7-point projective
/// plane: points `0..7`, lines `7..14`, where line `j` contains points
/// `j`, `j+1`, and `j+3` (mod 7). It is the unique 3-regular bipartite
/// graph of girth 6 on 14 vertices.
pub fn fano_incidence() -> Graph {
    let mut g = Graph::new(14);
    for j in 0..7 {
        for offset in [0, 1, 3] {
            expect_simple(g.add_edge(7 + j, (j + offset) % 7));
        }
    }
    g
}

/// The incidence graph with the line through points 1, 3, and 7 (1-based)
/// removed. Its maximum average degree is exactly 36/13, and its square
/// needs six colors — one more than graphs strictly below that density.
pub fn fano_minus_vertex() -> Graph {
    let full = fano_incidence();
    // Line j contains 0-based points {j, j+1, j+3}; {6, 0, 2} is line 6,
    // i.e. vertex 13, so deletion leaves identifiers 0..13 untouched.
    let mut g = Graph::new(13);
    for (u, v) in full.edges() {
        if u != 13 && v != 13 {
            expect_simple(g.add_edge(u, v));
        }
    }
    g
}

/// The Heawood graph via its LCF notation `[5, -5]^7`; isomorphic to
/// [`fano_incidence`] (both are the unique (3,6)-cage).
pub fn heawood() -> Graph {
    lcf(&[5, -5], 7).expect("the Heawood notation is valid")
}

/// Point/line incidence graph of the projective plane of order 4, built
/// from the perfect difference set {0, 1, 6, 8, 18} mod 21: points `0..21`,
/// lines `21..42`, line `j` through points `j + d` (mod 21). 5-regular,
/// girth 6, and every vertex has twenty vertices within distance two — a
/// dense host for exercising the degree-5 machinery.
pub fn pg24_incidence() -> Graph {
    let mut g = Graph::new(42);
    for j in 0..21 {
        for d in [0, 1, 6, 8, 18] {
            expect_simple(g.add_edge(21 + j, (j + d) % 21));
        }
    }
    g
}

/// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
pub fn petersen() -> Graph {
    let mut g = Graph::new(10);
    for i in 0..5 {
        expect_simple(g.add_edge(i, (i + 1) % 5));
        expect_simple(g.add_edge(5 + i, 5 + (i + 2) % 5));
        expect_simple(g.add_edge(i, 5 + i));
    }
    g
}

/// Replaces every edge by a path with `times` fresh interior vertices.
/// Original vertices keep their identifiers; interior vertices are
/// appended in increasing edge order.
pub fn subdivide(g: &Graph, times: usize) -> Graph {
    let edges = g.edges();
    let mut out = Graph::new(g.n() + times * edges.len());
    let mut next = g.n();
    for (u, v) in edges {
        if times == 0 {
            expect_simple(out.add_edge(u, v));
            continue;
        }
        let mut prev = u;
        for _ in 0..times {
            expect_simple(out.add_edge(prev, next));
            prev = next;
            next += 1;
        }
        expect_simple(out.add_edge(prev, v));
    }
    out
}

/// Seeded random graph with maximum degree exactly `delta_max` and maximum
/// average degree strictly below `mad_bound`.
///
/// Vertex 0 is seeded as a hub of full degree, then random edges are added
/// subject to a distance-7 rule (so every cycle has length at least 8) and
/// an exact density recheck at the end; attempts that land at the wrong
/// maximum degree or density are regenerated from the same stream.
pub fn random_sparse(
    n: usize,
    delta_max: usize,
    mad_bound: Rational,
    seed: u64,
) -> Result<Graph, GenError> {
    if n < 2 || delta_max < 1 || delta_max >= n {
        return Err(GenError::BadParameter(format!(
            "need 2 <= n and 1 <= delta_max < n, got n={n}, delta_max={delta_max}"
        )));
    }
    if mad_bound <= Rational::zero() {
        return Err(GenError::BadParameter("mad bound must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Largest edge count with whole-graph average degree below the bound.
    let m_cap = {
        let half = mad_bound * Rational::from_integer(n as i128) / 2;
        let ceil = half.ceil().to_integer();
        let exact_cut = if half.is_integer() { 1 } else { 0 };
        (ceil - 1 + exact_cut).max(0) as usize
    };
    let m_target = m_cap.min(n * delta_max / 2);

    for _ in 0..30 {
        let mut g = Graph::new(n);
        let mut partners: Vec<usize> = (1..n).collect();
        partners.shuffle(&mut rng);
        for &p in partners.iter().take(delta_max) {
            expect_simple(g.add_edge(0, p));
        }
        let mut tries = 0;
        while g.m() < m_target && tries < 40 * n {
            tries += 1;
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v
                || g.has_edge(u, v)
                || g.degree(u) >= delta_max
                || g.degree(v) >= delta_max
            {
                continue;
            }
            // Keep every cycle at length 8 or more.
            if matches!(g.bfs_distances(u)[v], Some(d) if d < 7) {
                continue;
            }
            expect_simple(g.add_edge(u, v));
        }
        if g.max_degree() != delta_max {
            continue;
        }
        let mad = mad_exact(&g).expect("n >= 2").density;
        if mad < mad_bound {
            return Ok(g);
        }
    }
    Err(GenError::GenerationFailed)
}

/// A 4-regular-hub ring: `k` hubs in a cycle, consecutive hubs joined by
/// two parallel length-2 paths. Every hub sees four 2-vertices, the
/// auxiliary multigraph is a doubled `k`-cycle with no leaves, and the
/// component surplus is `-2k/5` — the canonical trigger for the cycle-plus
/// -special-vertex coloring route. Maximum average degree is exactly 8/3.
pub fn thick_cycle(k: usize) -> Result<Graph, GenError> {
    if k < 2 {
        return Err(GenError::BadParameter(format!(
            "thick cycle needs k >= 2 hubs, got {k}"
        )));
    }
    let mut g = Graph::new(3 * k);
    for i in 0..k {
        let (a, b) = (k + 2 * i, k + 2 * i + 1);
        let next = (i + 1) % k;
        expect_simple(g.add_edge(i, a));
        expect_simple(g.add_edge(a, next));
        expect_simple(g.add_edge(i, b));
        expect_simple(g.add_edge(b, next));
    }
    Ok(g)
}

/// A 27-vertex graph with maximum degree 4, free of every bounded
/// configuration, whose auxiliary graph is two pentagons joined by a
/// bridge edge (cycle rank 2, no leaves) with exactly two deficient
/// 4-vertices — so its unique component has surplus −2/5.
///
/// Layout: hub pentagons `o0..o4` = `0..5` and `q0..q4` = `5..10`, chained
/// through 2-vertices `10..15` (`o` ring) and `16..21` (`q` ring), bridged
/// by the 2-vertex `15`, plus six degree-3 anchors `21..27` that pad every
/// hub to degree 4 without creating any reducible pattern.
pub fn negative_surplus_gadget() -> Graph {
    let mut g = Graph::new(27);
    // o-ring chains: o_i - m_i - o_{i+1}.
    for i in 0..5 {
        expect_simple(g.add_edge(i, 10 + i));
        expect_simple(g.add_edge(10 + i, (i + 1) % 5));
    }
    // q-ring chains: q_i - n_i - q_{i+1}.
    for i in 0..5 {
        expect_simple(g.add_edge(5 + i, 16 + i));
        expect_simple(g.add_edge(16 + i, 5 + (i + 1) % 5));
    }
    // Bridge o0 - m* - q0.
    expect_simple(g.add_edge(0, 15));
    expect_simple(g.add_edge(15, 5));
    // Anchors t1..t6 (21..26), each adjacent to three hubs.
    let anchors: [[usize; 3]; 6] = [
        [6, 8, 1],  // t1: q1, q3, o1
        [7, 9, 3],  // t2: q2, q4, o3
        [5, 7, 4],  // t3: q0, q2, o4
        [1, 3, 6],  // t4: o1, o3, q1
        [2, 4, 8],  // t5: o2, o4, q3
        [0, 2, 9],  // t6: o0, o2, q4
    ];
    for (t, hubs) in anchors.iter().enumerate() {
        for &h in hubs {
            expect_simple(g.add_edge(21 + t, h));
        }
    }
    g
}
