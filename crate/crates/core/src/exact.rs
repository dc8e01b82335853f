//! Exact influence by live-edge enumeration.
//!
//! Under the independent cascade model the set of influenced vertices has the
//! same distribution as the set reachable from the sources in a random
//! subgraph that keeps each edge independently with its weight. For small
//! networks we enumerate every subgraph. Cost is 2^|E|, so callers pass an edge
//! cap.

use std::collections::{BTreeSet, HashMap};

use crate::cascade::InfluenceEstimate;
use crate::error::{Error, Result};
use crate::network::{InducedNetwork, VertexId};

/// Default cap on directed edges for the exact oracles.
pub const DEFAULT_EDGE_CAP: usize = 20;

/// Edges that can change the outcome: tail reachable from the sources and
/// head outside them. Sources collapse into local vertex 0.
struct Relevant {
    locals: Vec<u32>,
    edges: Vec<(usize, usize, f64)>,
}

fn relevant_edges(net: &InducedNetwork, sources: &[u32]) -> Relevant {
    let is_source = |v: u32| sources.binary_search(&v).is_ok();
    let mut reach = vec![false; net.vertex_count()];
    let mut stack: Vec<u32> = sources.to_vec();
    for &s in sources {
        reach[s as usize] = true;
    }
    while let Some(u) = stack.pop() {
        for e in net.row(u) {
            let v = net.target(e);
            if !reach[v as usize] && net.edge_weight(e) > 0.0 {
                reach[v as usize] = true;
                stack.push(v);
            }
        }
    }

    let mut locals = vec![u32::MAX];
    let mut local_of: HashMap<u32, usize> = HashMap::new();
    let mut local = |v: u32, locals: &mut Vec<u32>| -> usize {
        if is_source(v) {
            0
        } else {
            *local_of.entry(v).or_insert_with(|| {
                locals.push(v);
                locals.len() - 1
            })
        }
    };
    let mut edges = Vec::new();
    for u in 0..net.vertex_count() as u32 {
        if !reach[u as usize] {
            continue;
        }
        for e in net.row(u) {
            let v = net.target(e);
            let w = net.edge_weight(e);
            if is_source(v) || w <= 0.0 {
                continue;
            }
            let (a, b) = (local(u, &mut locals), local(v, &mut locals));
            edges.push((a, b, w));
        }
    }
    Relevant { locals, edges }
}

fn check_cap(net: &InducedNetwork, cap: usize) -> Result<()> {
    if net.edge_count() > cap {
        return Err(Error::TooLarge(format!(
            "{} directed edges exceed the exact-oracle cap of {cap}",
            net.edge_count()
        )));
    }
    Ok(())
}

/// Calls `visit(reached, probability)` for every live-edge realization.
/// `reached` is a bitmask over local vertices (bit 0 = the sources).
fn enumerate(rel: &Relevant, mut visit: impl FnMut(u64, f64)) {
    let m = rel.edges.len();
    let n_local = rel.locals.len();
    debug_assert!(n_local <= 64);
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n_local];
    for mask in 0u64..(1u64 << m) {
        let mut p = 1.0;
        for row in out.iter_mut() {
            row.clear();
        }
        for (i, &(a, b, w)) in rel.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                p *= w;
                out[a].push(b);
            } else {
                p *= 1.0 - w;
            }
        }
        if p == 0.0 {
            continue;
        }
        let mut reached = 1u64;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            for &v in &out[u] {
                if reached >> v & 1 == 0 {
                    reached |= 1 << v;
                    stack.push(v);
                }
            }
        }
        visit(reached, p);
    }
}

/// Exact expected cascade size from `sources`.
pub fn exact_influence(network: &InducedNetwork, sources: &BTreeSet<VertexId>, edge_cap: usize) -> Result<InfluenceEstimate> {
    check_cap(network, edge_cap)?;
    let idx = network.indices_of(sources)?;
    if idx.is_empty() {
        return Ok(InfluenceEstimate::exact(0.0));
    }
    let rel = relevant_edges(network, &idx);
    let mut expected = 0.0;
    enumerate(&rel, |reached, p| {
        expected += p * (reached.count_ones() - 1) as f64;
    });
    Ok(InfluenceEstimate::exact(idx.len() as f64 + expected))
}

/// Exact distribution of the influenced set, as (set, probability) pairs
/// sorted by set. Realizations with probability zero are omitted.
pub fn influenced_distribution(
    network: &InducedNetwork,
    sources: &BTreeSet<VertexId>,
    edge_cap: usize,
) -> Result<Vec<(BTreeSet<VertexId>, f64)>> {
    check_cap(network, edge_cap)?;
    let idx = network.indices_of(sources)?;
    let rel = relevant_edges(network, &idx);
    let mut by_mask: HashMap<u64, f64> = HashMap::new();
    enumerate(&rel, |reached, p| *by_mask.entry(reached).or_insert(0.0) += p);
    let mut out: Vec<(BTreeSet<VertexId>, f64)> = by_mask
        .into_iter()
        .map(|(mask, p)| {
            let mut set: BTreeSet<VertexId> = sources.clone();
            for (i, &v) in rel.locals.iter().enumerate().skip(1) {
                if mask >> i & 1 == 1 {
                    set.insert(network.vertex(v).clone());
                }
            }
            (set, p)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}
