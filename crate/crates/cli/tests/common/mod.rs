//! Small random instances for oracle comparisons.

use std::collections::{BTreeMap, BTreeSet};

use detach::{BridgeBlockNetwork, CircleCollection, CircleId, EdgeWeights, VertexId};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A collection of 2 to 4 circles over at most 6 vertices with at most
/// `max_edges` directed edges, random weights in [0.05, 0.95] and, if
/// `need_links`, at least one bridge.
#[allow(dead_code)]
pub fn small_instance(seed: u64, max_edges: usize, need_links: bool) -> (CircleCollection, EdgeWeights) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let nv = rng.random_range(3..=6usize);
        let k = rng.random_range(2..=4usize);
        let mut map = BTreeMap::new();
        for c in 0..k {
            let size = rng.random_range(1..=3usize);
            let members: BTreeSet<VertexId> = sample(&mut rng, nv, size)
                .into_iter()
                .map(|i| VertexId::new(format!("v{i}")).unwrap())
                .collect();
            map.insert(CircleId::new(format!("I{c}")).unwrap(), members);
        }
        let circles = CircleCollection::new(map).unwrap();
        let pairs: Vec<(VertexId, VertexId)> = circles
            .co_member_pairs()
            .into_iter()
            .map(|(u, v)| (u.clone(), v.clone()))
            .collect();
        if pairs.is_empty() || pairs.len() > max_edges {
            continue;
        }
        if need_links && BridgeBlockNetwork::build(&circles).links.is_empty() {
            continue;
        }
        let mut weights = EdgeWeights::new();
        for (u, v) in pairs {
            weights.insert(u, v, rng.random_range(0.05..0.95)).unwrap();
        }
        return (circles, weights);
    }
}
