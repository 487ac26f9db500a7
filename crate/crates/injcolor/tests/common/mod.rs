//! Shared helpers for the integration suites: a tiny deterministic PRNG,
//! independent oracles implemented as differently as possible from the
//! library code they check, and the graph corpora used end to end.
#![allow(dead_code)]

use injcolor::gen;
use injcolor::graph::Graph;
use injcolor::rational::{ratio, Rational};

/// Xorshift64 generator; deterministic and dependency-free so test inputs
/// are reproducible from the seeds alone.
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Picks `k` distinct values from `1..=universe`, sorted.
    pub fn distinct(&mut self, k: usize, universe: u32) -> Vec<u32> {
        assert!(k as u32 <= universe);
        let mut pool: Vec<u32> = (1..=universe).collect();
        for i in 0..k {
            let j = i + self.below((pool.len() - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut picked = pool[..k].to_vec();
        picked.sort_unstable();
        picked
    }
}

/// Random graph with independent edge coin flips at probability num/den.
pub fn random_any(n: usize, num: u64, den: u64, seed: u64) -> Graph {
    let mut rng = XorShift::new(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.below(den) < num {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Random connected graph: a random tree plus a few random extra edges.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    assert!(n >= 1);
    let mut rng = XorShift::new(seed);
    let mut g = Graph::new(n);
    for v in 1..n {
        let parent = rng.below(v as u64) as usize;
        g.add_edge(parent, v).unwrap();
    }
    let mut added = 0;
    let mut attempts = 0;
    while added < extra && attempts < 20 * extra.max(1) {
        attempts += 1;
        let u = rng.below(n as u64) as usize;
        let v = rng.below(n as u64) as usize;
        if u != v && g.add_edge(u.min(v), u.max(v)).is_ok() {
            added += 1;
        }
    }
    g
}

/// Smallest number of colors under which no two vertices with a common
/// neighbor coincide, found by plain backtracking with direct neighborhood
/// scans (no square graph, no shared machinery with the library).
pub fn brute_injective_chi(g: &Graph) -> u32 {
    if g.n() == 0 {
        return 0;
    }
    fn share_neighbor(g: &Graph, u: usize, v: usize) -> bool {
        g.neighbors(u)
            .iter()
            .any(|&w| g.neighbors(v).contains(&w))
    }
    fn place(g: &Graph, colors: &mut [u32], v: usize, k: u32) -> bool {
        if v == g.n() {
            return true;
        }
        for c in 1..=k {
            let clash = (0..v).any(|u| colors[u] == c && share_neighbor(g, u, v));
            if !clash {
                colors[v] = c;
                if place(g, colors, v + 1, k) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }
    (1..)
        .find(|&k| place(g, &mut vec![0; g.n()], 0, k))
        .expect("n colors always suffice")
}

/// Whether any choice from the lists properly colors `g`, by walking the
/// entire product space with an odometer — no pruning, no heuristics.
pub fn product_list_exists(g: &Graph, lists: &[Vec<u32>]) -> bool {
    if lists.iter().any(|l| l.is_empty()) {
        return g.n() == 0;
    }
    let n = g.n();
    let mut idx = vec![0usize; n];
    loop {
        let proper = g
            .edges()
            .into_iter()
            .all(|(u, v)| lists[u][idx[u]] != lists[v][idx[v]]);
        if proper {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Subdivides exactly the listed edges of `base` once each.
pub fn subdivide_edges(base: &Graph, targets: &[(usize, usize)]) -> Graph {
    let mut g = Graph::new(base.n() + targets.len());
    let mut next = base.n();
    for (u, v) in base.edges() {
        if targets.contains(&(u, v)) || targets.contains(&(v, u)) {
            g.add_edge(u, next).unwrap();
            g.add_edge(next, v).unwrap();
            next += 1;
        } else {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Classic 3-regular graphs, mostly from their LCF notations.
pub fn cubic_bases() -> Vec<(&'static str, Graph)> {
    let bases = vec![
        ("k4", gen::complete(4).unwrap()),
        ("k33", gen::lcf(&[3, -3], 3).unwrap()),
        ("cube", gen::lcf(&[3, -3], 4).unwrap()),
        ("petersen", gen::petersen()),
        ("heawood", gen::heawood()),
        ("moebius-kantor", gen::lcf(&[5, -5], 8).unwrap()),
        ("pappus", gen::lcf(&[5, 7, -7, 7, -7, -5], 3).unwrap()),
        ("desargues", gen::lcf(&[5, -5, 9, -9], 5).unwrap()),
        (
            "dodecahedron",
            gen::lcf(&[10, 7, 4, -4, -7, 10, -4, 7, -7, 4], 2).unwrap(),
        ),
    ];
    for (name, g) in &bases {
        assert_eq!(g.max_degree(), 3, "{name} is not cubic");
        assert_eq!(2 * g.m(), 3 * g.n(), "{name} is not 3-regular");
    }
    bases
}

/// Spider tree: a hub with `arms` legs whose lengths cycle through a small
/// pattern keyed by `variant`, so different variants are different trees.
pub fn spider(arms: usize, variant: usize) -> Graph {
    assert!(arms >= 3);
    let lengths: Vec<usize> = (0..arms).map(|i| 1 + (variant + 2 * i) % 5).collect();
    let n = 1 + lengths.iter().sum::<usize>();
    let mut g = Graph::new(n);
    let mut next = 1;
    for &len in &lengths {
        let mut prev = 0;
        for _ in 0..len {
            g.add_edge(prev, next).unwrap();
            prev = next;
            next += 1;
        }
    }
    g
}

/// Hub joined by `k` spokes to a rim cycle; spokes are subdivided `u`
/// times and rim edges `t` times, keeping the graph sparse while the hub
/// holds degree `k`.
pub fn flower(k: usize, u: usize, t: usize) -> Graph {
    assert!(k >= 3 && u >= 1 && t >= 1);
    let n = 1 + k + k * u + k * t;
    let mut g = Graph::new(n);
    let mut next = 1 + k;
    for i in 0..k {
        let rim = 1 + i;
        let mut prev = 0;
        for _ in 0..u {
            g.add_edge(prev, next).unwrap();
            prev = next;
            next += 1;
        }
        g.add_edge(prev, rim).unwrap();
        let target = 1 + (i + 1) % k;
        let mut prev = rim;
        for _ in 0..t {
            g.add_edge(prev, next).unwrap();
            prev = next;
            next += 1;
        }
        g.add_edge(prev, target).unwrap();
    }
    g
}

/// Two hubs with `arms` private legs of length `len` each, joined by a
/// bridge path with `bridge` inner vertices; hub degree is `arms + 1`.
pub fn double_spider(arms: usize, len: usize, bridge: usize) -> Graph {
    assert!(arms >= 2 && len >= 1 && bridge >= 1);
    let n = 2 + 2 * arms * len + bridge;
    let mut g = Graph::new(n);
    let mut next = 2;
    for hub in [0usize, 1] {
        for _ in 0..arms {
            let mut prev = hub;
            for _ in 0..len {
                g.add_edge(prev, next).unwrap();
                prev = next;
                next += 1;
            }
        }
    }
    let mut prev = 0;
    for _ in 0..bridge {
        g.add_edge(prev, next).unwrap();
        prev = next;
        next += 1;
    }
    g.add_edge(prev, 1).unwrap();
    g
}

pub fn bound_d3() -> Rational {
    ratio(36, 13)
}

pub fn bound_d45() -> Rational {
    ratio(14, 5)
}

/// Collects exactly `per_size` random graphs for every size; seeds whose
/// draw misses the density or degree target are skipped deterministically.
fn push_randoms(
    out: &mut Vec<(String, Graph)>,
    delta: usize,
    sizes: &[usize],
    per_size: usize,
    bound: Rational,
) {
    for (si, &n) in sizes.iter().enumerate() {
        let mut got = 0usize;
        for seed in 1..=300u64 {
            if got == per_size {
                break;
            }
            let s = seed + 1000 * (si as u64 + 1) + 100_000 * delta as u64;
            if let Ok(g) = gen::random_sparse(n, delta, bound, s) {
                if g.max_degree() == delta {
                    out.push((format!("random-d{delta}-n{n}-s{seed}"), g));
                    got += 1;
                }
            }
        }
        assert_eq!(got, per_size, "generator exhausted at n={n}, delta={delta}");
    }
}

/// Corpus of maximum degree 3 and density below 36/13: random graphs plus
/// full subdivisions of the cubic classics (which also cover high girth).
pub fn delta3_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    push_randoms(&mut out, 3, &[20, 28, 36, 44, 52, 60], 36, bound_d3());
    for times in 1..=3usize {
        for (name, base) in cubic_bases() {
            let g = gen::subdivide(&base, times);
            if g.n() <= 60 {
                out.push((format!("{name}-sub{times}"), g));
            }
        }
    }
    out
}

/// Corpus of maximum degree exactly 4, density below 14/5.
pub fn delta4_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    push_randoms(&mut out, 4, &[20, 28, 36, 44, 52], 40, bound_d45());
    for k in 3..=8usize {
        out.push((format!("thick-cycle-{k}"), gen::thick_cycle(k).unwrap()));
    }
    for times in 1..=2usize {
        out.push((
            format!("k5-sub{times}"),
            gen::subdivide(&gen::complete(5).unwrap(), times),
        ));
    }
    for u in 1..=3usize {
        for t in 1..=3usize {
            out.push((format!("flower-4-{u}-{t}"), flower(4, u, t)));
        }
    }
    for v in 0..8usize {
        out.push((format!("spider-4-{v}"), spider(4, v)));
    }
    for len in 1..=2usize {
        for bridge in 2..=3usize {
            out.push((
                format!("double-spider-3-{len}-{bridge}"),
                double_spider(3, len, bridge),
            ));
        }
    }
    out
}

/// Corpus of maximum degree exactly 5, density below 14/5.
pub fn delta5_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    push_randoms(&mut out, 5, &[20, 28, 36, 44, 52], 40, bound_d45());
    for times in 2..=3usize {
        out.push((
            format!("k6-sub{times}"),
            gen::subdivide(&gen::complete(6).unwrap(), times),
        ));
    }
    for u in 1..=3usize {
        for t in 1..=3usize {
            out.push((format!("flower-5-{u}-{t}"), flower(5, u, t)));
        }
    }
    for v in 0..8usize {
        out.push((format!("spider-5-{v}"), spider(5, v)));
    }
    for len in 1..=2usize {
        for bridge in 2..=3usize {
            out.push((
                format!("double-spider-4-{len}-{bridge}"),
                double_spider(4, len, bridge),
            ));
        }
    }
    out
}

/// Corpus of maximum degree 6 or 7, density below 14/5.
pub fn delta67_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    push_randoms(&mut out, 6, &[20, 28, 36, 44, 52], 20, bound_d45());
    push_randoms(&mut out, 7, &[20, 28, 36, 44, 52], 20, bound_d45());
    out.push((
        "k7-sub2".to_string(),
        gen::subdivide(&gen::complete(7).unwrap(), 2),
    ));
    for k in 6..=7usize {
        for u in 1..=3usize {
            for t in 1..=3usize {
                out.push((format!("flower-{k}-{u}-{t}"), flower(k, u, t)));
            }
        }
        for v in 0..8usize {
            out.push((format!("spider-{k}-{v}"), spider(k, v)));
        }
    }
    out
}
