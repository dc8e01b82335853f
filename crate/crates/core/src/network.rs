//! Circle collections, transmission weights and the information-flow network
//! they induce.
//!
//! A [`CircleCollection`] is the ground truth. Everything else (the induced
//! network, the bridge-block network) is derived from it and recomputed after
//! every detachment rather than patched in place.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{coin_threshold, mix64, str_key};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Result<Self> {
                let id = id.into();
                if id.is_empty() {
                    return Err(Error::InvalidInput(concat!(stringify!($name), " must be non-empty").into()));
                }
                Ok(Self(id))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl TryFrom<String> for $name {
            type Error = Error;

            fn try_from(id: String) -> Result<Self> {
                Self::new(id)
            }
        }

        impl From<$name> for String {
            fn from(id: $name) -> String {
                id.0
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

string_id!(
    /// A vertex (an individual). Ordered by byte value.
    VertexId
);
string_id!(
    /// A circle (a group whose members all pass information to each other).
    CircleId
);

/// Named circles over a vertex universe. The universe is the union of all
/// circles, so a vertex that loses its last membership leaves it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CircleCollection {
    circles: BTreeMap<CircleId, BTreeSet<VertexId>>,
}

impl CircleCollection {
    /// Builds a fresh collection. Fresh data may not contain empty circles.
    pub fn new(circles: BTreeMap<CircleId, BTreeSet<VertexId>>) -> Result<Self> {
        if let Some((id, _)) = circles.iter().find(|(_, members)| members.is_empty()) {
            return Err(Error::InvalidInput(format!("circle `{id}` is empty")));
        }
        Ok(Self { circles })
    }

    /// Convenience constructor from plain string slices.
    pub fn from_pairs<'a, I, M>(circles: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, M)>,
        M: IntoIterator<Item = &'a str>,
    {
        let mut map = BTreeMap::new();
        for (id, members) in circles {
            let members = members
                .into_iter()
                .map(VertexId::new)
                .collect::<Result<BTreeSet<_>>>()?;
            if map.insert(CircleId::new(id)?, members).is_some() {
                return Err(Error::InvalidInput(format!("duplicate circle `{id}`")));
            }
        }
        Self::new(map)
    }

    pub fn circles(&self) -> &BTreeMap<CircleId, BTreeSet<VertexId>> {
        &self.circles
    }

    pub fn circle_ids(&self) -> impl Iterator<Item = &CircleId> {
        self.circles.keys()
    }

    pub fn members(&self, circle: &CircleId) -> Option<&BTreeSet<VertexId>> {
        self.circles.get(circle)
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    /// Number of circles each vertex of the universe belongs to.
    pub fn memberships(&self) -> BTreeMap<&VertexId, usize> {
        let mut counts = BTreeMap::new();
        for members in self.circles.values() {
            for v in members {
                *counts.entry(v).or_insert(0) += 1;
            }
        }
        counts
    }

    /// The vertex universe V, the union of all circles.
    pub fn universe(&self) -> BTreeSet<&VertexId> {
        self.circles.values().flatten().collect()
    }

    pub fn universe_size(&self) -> usize {
        self.universe().len()
    }

    /// Removes `pair.vertex` from `pair.circle`.
    pub fn detach(&self, pair: &DetachmentPair) -> Result<Detached> {
        let members = self
            .circles
            .get(&pair.circle)
            .ok_or_else(|| Error::UnknownCircle(pair.circle.clone()))?;
        if !members.contains(&pair.vertex) {
            return Err(Error::NotAMember {
                vertex: pair.vertex.clone(),
                circle: pair.circle.clone(),
            });
        }
        let mut circles = self.clone();
        circles
            .circles
            .get_mut(&pair.circle)
            .expect("circle checked above")
            .remove(&pair.vertex);
        let still_present = circles.circles.values().any(|m| m.contains(&pair.vertex));
        let orphaned = if still_present {
            Vec::new()
        } else {
            vec![pair.vertex.clone()]
        };
        Ok(Detached { circles, orphaned })
    }

    /// Applies a detachment set in sequence order.
    pub fn detach_all(&self, set: &DetachmentSet) -> Result<Detached> {
        let mut current = Detached {
            circles: self.clone(),
            orphaned: Vec::new(),
        };
        for (index, pair) in set.pairs().iter().enumerate() {
            let step = current.circles.detach(pair).map_err(|e| match e {
                Error::NotAMember { vertex, circle } => Error::InvalidDetachment {
                    index,
                    vertex,
                    circle,
                },
                other => other,
            })?;
            current.circles = step.circles;
            current.orphaned.extend(step.orphaned);
        }
        Ok(current)
    }

    /// The same collection with empty circles dropped.
    pub fn without_empty_circles(&self) -> Self {
        Self {
            circles: self
                .circles
                .iter()
                .filter(|(_, m)| !m.is_empty())
                .map(|(c, m)| (c.clone(), m.clone()))
                .collect(),
        }
    }

    /// Ordered pairs (u, v), u != v, that share at least one circle.
    pub fn co_member_pairs(&self) -> BTreeSet<(&VertexId, &VertexId)> {
        let mut pairs = BTreeSet::new();
        for members in self.circles.values() {
            for u in members {
                for v in members {
                    if u != v {
                        pairs.insert((u, v));
                    }
                }
            }
        }
        pairs
    }
}

/// Result of applying one or more detachments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detached {
    pub circles: CircleCollection,
    /// Vertices that lost their last membership and left the universe.
    pub orphaned: Vec<VertexId>,
}

pub fn apply_detachment(circles: &CircleCollection, pair: &DetachmentPair) -> Result<Detached> {
    circles.detach(pair)
}

pub fn apply_detachment_set(circles: &CircleCollection, set: &DetachmentSet) -> Result<Detached> {
    circles.detach_all(set)
}

/// Removal of one vertex from one circle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DetachmentPair {
    pub vertex: VertexId,
    pub circle: CircleId,
}

impl DetachmentPair {
    pub fn new(vertex: VertexId, circle: CircleId) -> Self {
        Self { vertex, circle }
    }

    /// Key used for deterministic tie-breaking: circle first, then vertex.
    pub fn order_key(&self) -> (&CircleId, &VertexId) {
        (&self.circle, &self.vertex)
    }
}

impl fmt::Display for DetachmentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vertex, self.circle)
    }
}

/// Ordered, duplicate-free sequence of detachments.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DetachmentSet {
    pairs: Vec<DetachmentPair>,
}

impl DetachmentSet {
    pub fn new(pairs: Vec<DetachmentPair>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &pairs {
            if !seen.insert(p) {
                return Err(Error::InvalidInput(format!("duplicate detachment {p}")));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[DetachmentPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub(crate) fn push(&mut self, pair: DetachmentPair) {
        debug_assert!(!self.pairs.contains(&pair));
        self.pairs.push(pair);
    }
}

impl<'de> Deserialize<'de> for DetachmentSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<DetachmentPair>::deserialize(d)?;
        Self::new(pairs).map_err(serde::de::Error::custom)
    }
}

/// Transmission probabilities per ordered vertex pair.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EdgeWeights {
    by_source: BTreeMap<VertexId, BTreeMap<VertexId, f64>>,
}

impl EdgeWeights {
    pub fn new() -> Self {
        Self::default()
    }

    /// The same weight `w` on every co-membership pair of `circles`.
    pub fn flat(circles: &CircleCollection, w: f64) -> Result<Self> {
        let mut weights = Self::new();
        weights.fill_missing(circles, w)?;
        Ok(weights)
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId, w: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidWeight { u, v, w });
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self-pair ({u}, {v}) cannot carry a weight")));
        }
        self.by_source.entry(u).or_default().insert(v, w);
        Ok(())
    }

    pub fn get(&self, u: &str, v: &str) -> Option<f64> {
        self.by_source.get(u).and_then(|row| row.get(v)).copied()
    }

    /// Assigns `w` to every co-membership pair that has no weight yet.
    pub fn fill_missing(&mut self, circles: &CircleCollection, w: f64) -> Result<()> {
        for (u, v) in circles.co_member_pairs() {
            if self.get(u.as_str(), v.as_str()).is_none() {
                self.insert(u.clone(), v.clone(), w)?;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.by_source.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All (u, v, w) triples in byte order of (u, v).
    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &VertexId, f64)> {
        self.by_source
            .iter()
            .flat_map(|(u, row)| row.iter().map(move |(v, &w)| (u, v, w)))
    }
}

/// The weighted directed graph induced by a circle collection.
///
/// Stored as compressed adjacency over vertex indices. Vertices are indexed in
/// byte order of their ids and every adjacency row is sorted, so index order
/// and id order agree everywhere.
#[derive(Clone, Debug)]
pub struct InducedNetwork {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, u32>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    coins: Vec<Coin>,
}

/// What a cascade needs to flip the coin of one edge.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Coin {
    /// Depends only on the two vertex ids.
    pub key: u64,
    pub threshold: u64,
    pub target: u32,
}

pub fn induce_network(circles: &CircleCollection, weights: &EdgeWeights) -> Result<InducedNetwork> {
    InducedNetwork::induce(circles, weights)
}

impl InducedNetwork {
    pub fn induce(circles: &CircleCollection, weights: &EdgeWeights) -> Result<Self> {
        let vertices: Vec<VertexId> = circles.universe().into_iter().cloned().collect();
        let index: HashMap<VertexId, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();

        let mut neighbors: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); vertices.len()];
        for members in circles.circles().values() {
            let idx: Vec<u32> = members.iter().map(|v| index[v]).collect();
            for &u in &idx {
                for &v in &idx {
                    if u != v {
                        neighbors[u as usize].insert(v);
                    }
                }
            }
        }

        let vertex_keys: Vec<u64> = vertices.iter().map(|v| str_key(v.as_str())).collect();
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        let mut targets = Vec::new();
        let mut edge_weights = Vec::new();
        let mut coins = Vec::new();
        offsets.push(0);
        for (u, row) in neighbors.iter().enumerate() {
            for &v in row {
                let (uid, vid) = (&vertices[u], &vertices[v as usize]);
                let w = weights
                    .get(uid.as_str(), vid.as_str())
                    .ok_or_else(|| Error::MissingWeight(uid.clone(), vid.clone()))?;
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::InvalidWeight {
                        u: uid.clone(),
                        v: vid.clone(),
                        w,
                    });
                }
                targets.push(v);
                edge_weights.push(w);
                coins.push(Coin {
                    key: mix64(vertex_keys[u] ^ mix64(vertex_keys[v as usize].rotate_left(17))),
                    threshold: coin_threshold(w),
                    target: v,
                });
            }
            offsets.push(targets.len());
        }

        Ok(Self {
            vertices,
            index,
            offsets,
            targets,
            weights: edge_weights,
            coins,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.index.contains_key(v)
    }

    pub fn index_of(&self, v: &str) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn vertex(&self, i: u32) -> &VertexId {
        &self.vertices[i as usize]
    }

    /// Out-degree of every vertex, in index order.
    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn weight(&self, u: &str, v: &str) -> Option<f64> {
        let (u, v) = (self.index_of(u)?, self.index_of(v)?);
        let range = self.row(u);
        let row = &self.targets[range.clone()];
        row.binary_search(&v).ok().map(|pos| self.weights[range.start + pos])
    }

    pub fn contains_edge(&self, u: &str, v: &str) -> bool {
        self.weight(u, v).is_some()
    }

    /// Directed edges (u, v, w) in byte order of (u, v).
    pub fn edges(&self) -> impl Iterator<Item = (&VertexId, &VertexId, f64)> + '_ {
        (0..self.vertices.len() as u32).flat_map(move |u| {
            self.row(u)
                .map(move |e| (&self.vertices[u as usize], &self.vertices[self.targets[e] as usize], self.weights[e]))
        })
    }

    /// The weights restricted to this network's edges.
    pub fn edge_weights(&self) -> EdgeWeights {
        let mut out = EdgeWeights::new();
        for (u, v, w) in self.edges() {
            out.by_source.entry(u.clone()).or_default().insert(v.clone(), w);
        }
        out
    }

    pub(crate) fn row(&self, u: u32) -> std::ops::Range<usize> {
        self.offsets[u as usize]..self.offsets[u as usize + 1]
    }

    pub(crate) fn target(&self, e: usize) -> u32 {
        self.targets[e]
    }

    pub(crate) fn edge_weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub(crate) fn coins(&self, u: u32) -> &[Coin] {
        &self.coins[self.row(u)]
    }

    /// Resolves vertex ids to indices, sorted and deduplicated.
    pub fn indices_of<'a, I>(&self, vertices: I) -> Result<Vec<u32>>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let mut idx = vertices
            .into_iter()
            .map(|v| self.index_of(v.as_str()).ok_or_else(|| Error::UnknownVertex(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn edge_set(net: &InducedNetwork) -> BTreeSet<(String, String)> {
        net.edges().map(|(u, v, _)| (u.to_string(), v.to_string())).collect()
    }

    fn e(u: &str, v: &str) -> (String, String) {
        (u.to_string(), v.to_string())
    }

    #[test]
    fn induce_two_overlapping_circles() {
        let c = t1();
        let net = induce_network(&c, &EdgeWeights::flat(&c, 0.5).unwrap()).unwrap();
        let expected: BTreeSet<_> = [e("a", "b"), e("b", "a"), e("b", "c"), e("c", "b")].into();
        assert_eq!(edge_set(&net), expected);
        assert_eq!(net.weight("a", "b"), Some(0.5));
        assert_eq!(net.weight("a", "c"), None);
    }

    #[test]
    fn singleton_circle_has_no_edges() {
        let c = CircleCollection::from_pairs([("I1", vec!["a"])]).unwrap();
        let net = induce_network(&c, &EdgeWeights::new()).unwrap();
        assert_eq!(net.vertex_count(), 1);
        assert_eq!(net.edge_count(), 0);
    }

    #[test]
    fn triangle_circle_is_a_clique() {
        let c = CircleCollection::from_pairs([("I1", vec!["a", "b", "c"])]).unwrap();
        let net = induce_network(&c, &EdgeWeights::flat(&c, 0.1).unwrap()).unwrap();
        assert_eq!(net.edge_count(), 6);
    }

    #[test]
    fn missing_and_invalid_weights() {
        let c = t1();
        let mut w = EdgeWeights::new();
        w.insert(vid("a"), vid("b"), 0.3).unwrap();
        assert!(matches!(induce_network(&c, &w), Err(Error::MissingWeight(..))));
        assert!(matches!(w.insert(vid("a"), vid("c"), 1.5), Err(Error::InvalidWeight { .. })));
        assert!(matches!(w.insert(vid("a"), vid("c"), -0.1), Err(Error::InvalidWeight { .. })));
    }

    #[test]
    fn asymmetric_weights_are_kept() {
        let c = CircleCollection::from_pairs([("I1", vec!["a", "b"])]).unwrap();
        let mut w = EdgeWeights::new();
        w.insert(vid("a"), vid("b"), 0.9).unwrap();
        w.insert(vid("b"), vid("a"), 0.1).unwrap();
        let net = induce_network(&c, &w).unwrap();
        assert_eq!(net.weight("a", "b"), Some(0.9));
        assert_eq!(net.weight("b", "a"), Some(0.1));
    }

    #[test]
    fn empty_ids_and_circles_rejected() {
        assert!(VertexId::new("").is_err());
        assert!(CircleId::new("").is_err());
        assert!(CircleCollection::from_pairs([("I1", Vec::<&str>::new())]).is_err());
    }

    #[test]
    fn detach_examples() {
        let out = t1().detach(&pair("b", "I2")).unwrap();
        assert_eq!(
            out.circles,
            CircleCollection::from_pairs([("I1", vec!["a", "b"]), ("I2", vec!["c"])]).unwrap()
        );
        assert!(out.orphaned.is_empty());

        let single = CircleCollection::from_pairs([("I1", vec!["a", "b"])]).unwrap();
        let out = single.detach(&pair("a", "I1")).unwrap();
        assert_eq!(out.circles, CircleCollection::from_pairs([("I1", vec!["b"])]).unwrap());
        assert_eq!(out.orphaned, vec![vid("a")]);

        assert!(matches!(single.detach(&pair("c", "I1")), Err(Error::NotAMember { .. })));
    }

    #[test]
    fn detach_set_examples() {
        let set = DetachmentSet::new(vec![pair("b", "I1"), pair("c", "I3")]).unwrap();
        let out = apply_detachment_set(&t2(), &set).unwrap();
        let mut expected = BTreeMap::new();
        expected.insert(cid("I1"), [vid("a")].into());
        expected.insert(cid("I2"), [vid("b"), vid("c")].into());
        expected.insert(cid("I3"), [vid("d")].into());
        assert_eq!(out.circles.circles(), &expected);

        let out = apply_detachment_set(&t2(), &DetachmentSet::default()).unwrap();
        assert_eq!(out.circles, t2());

        let set = DetachmentSet::new(vec![pair("b", "I1"), pair("b", "I2")]).unwrap();
        let out = apply_detachment_set(&t1(), &set).unwrap();
        assert_eq!(out.orphaned, vec![vid("b")]);
        assert_eq!(out.circles.universe_size(), 2);
    }

    #[test]
    fn detach_set_reports_offending_index() {
        let set = DetachmentSet::new(vec![pair("b", "I1"), pair("a", "I2")]).unwrap();
        match apply_detachment_set(&t2(), &set) {
            Err(Error::InvalidDetachment { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(DetachmentSet::new(vec![pair("b", "I1"), pair("b", "I1")]).is_err());
    }

    fn arb_collection() -> impl Strategy<Value = CircleCollection> {
        prop::collection::vec(prop::collection::btree_set(0u8..8, 1..5), 1..5).prop_map(|circles| {
            let map = circles
                .into_iter()
                .enumerate()
                .map(|(i, m)| {
                    (
                        CircleId::new(format!("C{i}")).unwrap(),
                        m.into_iter().map(|v| VertexId::new(format!("v{v}")).unwrap()).collect(),
                    )
                })
                .collect();
            CircleCollection::new(map).unwrap()
        })
    }

    fn all_pairs(c: &CircleCollection) -> Vec<DetachmentPair> {
        c.circles()
            .iter()
            .flat_map(|(cid, m)| m.iter().map(move |v| DetachmentPair::new(v.clone(), cid.clone())))
            .collect()
    }

    proptest! {
        #[test]
        fn induced_edges_are_symmetric_and_loop_free(c in arb_collection()) {
            let net = induce_network(&c, &EdgeWeights::flat(&c, 0.5).unwrap()).unwrap();
            for (u, v, _) in net.edges() {
                prop_assert!(u != v);
                prop_assert!(net.contains_edge(v.as_str(), u.as_str()));
            }
            prop_assert_eq!(net.edge_count(), c.co_member_pairs().len());
        }

        #[test]
        fn detaching_never_adds_edges(c in arb_collection()) {
            let w = EdgeWeights::flat(&c, 0.5).unwrap();
            let before = edge_set(&induce_network(&c, &w).unwrap());
            for p in all_pairs(&c) {
                let after = c.detach(&p).unwrap().circles;
                let edges = edge_set(&induce_network(&after, &w).unwrap());
                prop_assert!(edges.is_subset(&before));
            }
        }

        #[test]
        fn detachment_order_is_irrelevant(c in arb_collection(), seed in any::<u64>()) {
            let mut pairs = all_pairs(&c);
            let k = (seed % 4) as usize;
            pairs.truncate(k.min(pairs.len()));
            let forward = DetachmentSet::new(pairs.clone()).unwrap();
            pairs.reverse();
            let backward = DetachmentSet::new(pairs).unwrap();
            let a = apply_detachment_set(&c, &forward).unwrap();
            let b = apply_detachment_set(&c, &backward).unwrap();
            prop_assert_eq!(a.circles, b.circles);
        }
    }
}
