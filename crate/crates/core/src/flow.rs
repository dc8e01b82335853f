//! Edmonds-Karp max-flow with real capacities, and the source side of the
//! canonical minimum cut.

use std::collections::VecDeque;

/// Residual flow graph. Every undirected link is stored as two arcs that are
/// each other's reverse and start with the same capacity.
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    residual: Vec<f64>,
}

/// Residual capacity at or below this is treated as saturated.
const EPS: f64 = 1e-12;

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            residual: Vec::new(),
        }
    }

    /// Adds an undirected link of capacity `cap` and returns its arc id.
    pub fn add_undirected(&mut self, a: usize, b: usize, cap: f64) -> usize {
        let e = self.to.len();
        self.to.extend([b, a]);
        self.residual.extend([cap, cap]);
        self.adj[a].push(e);
        self.adj[b].push(e + 1);
        e
    }

    /// Adds a one-way arc of capacity `cap` (its reverse starts empty).
    pub fn add_arc(&mut self, a: usize, b: usize, cap: f64) -> usize {
        let e = self.to.len();
        self.to.extend([b, a]);
        self.residual.extend([cap, 0.0]);
        self.adj[a].push(e);
        self.adj[b].push(e + 1);
        e
    }

    fn bfs(&self, s: usize, parent: &mut [Option<usize>]) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        parent.fill(None);
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if !seen[v] && self.residual[e] > EPS {
                    seen[v] = true;
                    parent[v] = Some(e);
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Saturates the network and returns the max-flow value. Afterwards
    /// `source_side` gives the canonical minimum cut.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut parent = vec![None; self.adj.len()];
        let mut total = 0.0;
        loop {
            let seen = self.bfs(s, &mut parent);
            if !seen[t] {
                return total;
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = t;
            while let Some(e) = parent[v] {
                bottleneck = bottleneck.min(self.residual[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while let Some(e) = parent[v] {
                self.residual[e] -= bottleneck;
                self.residual[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            total += bottleneck;
        }
    }

    /// Nodes reachable from `s` in the residual graph: the smallest source
    /// side among all minimum cuts.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut parent = vec![None; self.adj.len()];
        self.bfs(s, &mut parent)
    }
}
