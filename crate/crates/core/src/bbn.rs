//! The bridge-block network: a bipartite graph with one node per circle
//! (block), one node per vertex shared by two or more circles (bridge) and one
//! link per (circle, bridge) membership. Removing a link is the same as
//! detaching that bridge from that circle.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::network::{CircleCollection, CircleId, DetachmentPair, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeBlockNetwork {
    pub blocks: BTreeSet<CircleId>,
    pub bridges: BTreeSet<VertexId>,
    /// (circle, bridge) memberships, in byte order.
    pub links: BTreeSet<(CircleId, VertexId)>,
}

pub fn build_bbn(circles: &CircleCollection) -> BridgeBlockNetwork {
    BridgeBlockNetwork::build(circles)
}

pub fn enumerate_candidates(bbn: &BridgeBlockNetwork) -> Vec<DetachmentPair> {
    bbn.candidates()
}

impl BridgeBlockNetwork {
    pub fn build(circles: &CircleCollection) -> Self {
        let bridges: BTreeSet<VertexId> = circles
            .memberships()
            .into_iter()
            .filter(|&(_, n)| n >= 2)
            .map(|(v, _)| v.clone())
            .collect();
        let links = circles
            .circles()
            .iter()
            .flat_map(|(c, members)| {
                members
                    .iter()
                    .filter(|v| bridges.contains(*v))
                    .map(move |v| (c.clone(), v.clone()))
            })
            .collect();
        Self {
            blocks: circles.circle_ids().cloned().collect(),
            bridges,
            links,
        }
    }

    /// Every link as a detachment, sorted by (circle, vertex).
    pub fn candidates(&self) -> Vec<DetachmentPair> {
        self.links
            .iter()
            .map(|(c, v)| DetachmentPair::new(v.clone(), c.clone()))
            .collect()
    }

    /// Connected components, each given as its sorted list of blocks. Bridges
    /// always join at least two blocks, so every component contains a block.
    /// Components are ordered by their smallest block id.
    pub fn components(&self) -> Vec<Vec<CircleId>> {
        let ids: Vec<&CircleId> = self.blocks.iter().collect();
        let pos: BTreeMap<&CircleId, usize> = ids.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut parent: Vec<usize> = (0..ids.len()).collect();

        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }

        let mut first_block: BTreeMap<&VertexId, usize> = BTreeMap::new();
        for (c, v) in &self.links {
            let b = pos[c];
            match first_block.get(v) {
                Some(&a) => {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
                None => {
                    first_block.insert(v, b);
                }
            }
        }

        let mut groups: BTreeMap<usize, Vec<CircleId>> = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push((*id).clone());
        }
        let mut comps: Vec<Vec<CircleId>> = groups.into_values().collect();
        comps.sort_by(|a, b| a[0].cmp(&b[0]));
        comps
    }

    /// The component with the most blocks; ties go to the one holding the
    /// smallest block id.
    pub fn largest_component(&self) -> Option<Vec<CircleId>> {
        self.components()
            .into_iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.len().cmp(&b.len()).then(j.cmp(i)))
            .map(|(_, c)| c)
    }

    pub fn connected(&self, a: &CircleId, b: &CircleId) -> bool {
        self.components()
            .iter()
            .any(|comp| comp.contains(a) && comp.contains(b))
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}
