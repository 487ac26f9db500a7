//! Dinic maximum flow over integer capacities, used by the exact density
//! search. Capacities are `i128` so scaled rational guesses never overflow.

pub struct FlowNetwork {
    // Edges are stored in pairs: edge 2k and its reverse 2k+1.
    to: Vec<usize>,
    cap: Vec<i128>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, capacity: i128) {
        debug_assert!(capacity >= 0);
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(capacity);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(id + 1);
    }

    fn bfs_levels(&self, s: usize, t: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1; self.adj.len()];
        level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[t] >= 0).then_some(level)
    }

    fn dfs_push(
        &mut self,
        u: usize,
        t: usize,
        pushed: i128,
        level: &[i32],
        iter: &mut [usize],
    ) -> i128 {
        if u == t {
            return pushed;
        }
        while iter[u] < self.adj[u].len() {
            let e = self.adj[u][iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let d = self.dfs_push(v, t, pushed.min(self.cap[e]), level, iter);
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            iter[u] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i128 {
        let mut flow = 0;
        while let Some(level) = self.bfs_levels(s, t) {
            let mut iter = vec![0; self.adj.len()];
            loop {
                let pushed = self.dfs_push(s, t, i128::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Vertices reachable from `s` in the residual network; after a
    /// max-flow run this is the source side of a minimum cut.
    pub fn min_cut_source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}
