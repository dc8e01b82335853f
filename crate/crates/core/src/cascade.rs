//! Independent cascade simulation and Monte Carlo influence estimation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{InducedNetwork, VertexId};
use crate::rng::{coin, RngSpec};

/// One realization of the cascade: A_0, A_1, ..., A_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CascadeTrace {
    pub layers: Vec<BTreeSet<VertexId>>,
}

impl CascadeTrace {
    /// All vertices reached, sources included.
    pub fn influenced(&self) -> BTreeSet<&VertexId> {
        self.layers.iter().flatten().collect()
    }

    pub fn size(&self) -> usize {
        self.layers.iter().map(BTreeSet::len).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfluenceEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub exact: bool,
}

impl InfluenceEstimate {
    pub fn exact(mean: f64) -> Self {
        Self {
            mean,
            std_error: 0.0,
            trials: 0,
            exact: true,
        }
    }
}

/// Reusable scratch space for running many cascades on one network.
pub(crate) struct Simulator<'a> {
    net: &'a InducedNetwork,
    mark: Vec<u32>,
    epoch: u32,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl<'a> Simulator<'a> {
    pub fn new(net: &'a InducedNetwork) -> Self {
        Self {
            net,
            mark: vec![0; net.vertex_count()],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Runs one cascade from `sources` (sorted, distinct indices) and returns
    /// the number of vertices influenced. `on_layer` sees every layer,
    /// starting with the sources.
    ///
    /// Edge (u, v) is live in this stream iff its coin falls below w(u, v);
    /// a newly infected u tries each not yet infected neighbour exactly once.
    pub fn run(&mut self, sources: &[u32], stream_key: u64, mut on_layer: impl FnMut(&[u32])) -> usize {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.frontier.clear();
        for &s in sources {
            if self.mark[s as usize] != epoch {
                self.mark[s as usize] = epoch;
                self.frontier.push(s);
            }
        }
        // every vertex enters `next` at most once per cascade
        self.next.resize(self.mark.len(), 0);
        let mut total = 0;
        while !self.frontier.is_empty() {
            on_layer(&self.frontier);
            total += self.frontier.len();
            let mut len = 0;
            for &u in &self.frontier {
                for c in self.net.coins(u) {
                    // branch-free: the coin outcome is unpredictable
                    let slot = &mut self.mark[c.target as usize];
                    let fresh = *slot != epoch;
                    let live = fresh & (coin(stream_key, c.key) < c.threshold);
                    *slot = if live { epoch } else { *slot };
                    self.next[len] = c.target;
                    len += live as usize;
                }
            }
            self.frontier.clear();
            self.frontier.extend_from_slice(&self.next[..len]);
            self.frontier.sort_unstable();
        }
        total
    }

    /// Sum and sum of squares of cascade sizes over `trials` consecutive
    /// streams starting at `rng`.
    pub fn sample_sizes(&mut self, sources: &[u32], trials: u64, rng: RngSpec) -> (u64, u64) {
        let (mut sum, mut sum_sq) = (0u64, 0u64);
        for t in 0..trials {
            let n = self.run(sources, rng.offset(t).stream_key(), |_| {}) as u64;
            sum += n;
            sum_sq += n * n;
        }
        (sum, sum_sq)
    }
}

pub(crate) fn summarize(sum: u64, sum_sq: u64, trials: u64) -> InfluenceEstimate {
    let n = trials as f64;
    let mean = sum as f64 / n;
    let std_error = if trials > 1 {
        // integer moments keep this exact when every trial has the same size
        let centered = sum_sq as f64 - (sum as f64) * mean;
        let var = (centered / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    InfluenceEstimate {
        mean,
        std_error,
        trials,
        exact: false,
    }
}

fn resolve_sources(network: &InducedNetwork, sources: &BTreeSet<VertexId>) -> Result<Vec<u32>> {
    network.indices_of(sources)
}

/// One realization of the independent cascade process.
pub fn run_cascade(network: &InducedNetwork, sources: &BTreeSet<VertexId>, rng: RngSpec) -> Result<CascadeTrace> {
    if sources.is_empty() {
        return Err(Error::InvalidInput("cascade needs at least one source".into()));
    }
    let idx = resolve_sources(network, sources)?;
    let mut sim = Simulator::new(network);
    let mut layers = Vec::new();
    sim.run(&idx, rng.stream_key(), |layer| {
        layers.push(layer.iter().map(|&i| network.vertex(i).clone()).collect());
    });
    Ok(CascadeTrace { layers })
}

/// Monte Carlo estimate of the expected cascade size from `sources`. Trial
/// `t` uses stream `rng.stream_index + t`. An empty source set has influence
/// zero.
pub fn estimate_influence(
    network: &InducedNetwork,
    sources: &BTreeSet<VertexId>,
    trials: u64,
    rng: RngSpec,
) -> Result<InfluenceEstimate> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let idx = resolve_sources(network, sources)?;
    if idx.is_empty() {
        return Ok(InfluenceEstimate {
            mean: 0.0,
            std_error: 0.0,
            trials,
            exact: false,
        });
    }
    let (sum, sum_sq) = Simulator::new(network).sample_sizes(&idx, trials, rng);
    Ok(summarize(sum, sum_sq, trials))
}
