//! Descriptive statistics used to compare generated collections with
//! observed ones.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::bbn::BridgeBlockNetwork;
use crate::error::{Error, Result};
use crate::network::{CircleCollection, InducedNetwork};

/// Histograms are (value, count) pairs sorted by value.
pub type Histogram = Vec<(usize, usize)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub n_vertices: usize,
    pub n_circles: usize,
    pub n_bridges: usize,
    pub n_links: usize,
    pub n_edges: usize,
    pub circle_size_histogram: Histogram,
    /// Degree in the induced network.
    pub vertex_degree_histogram: Histogram,
    /// Number of circles per bridge.
    pub bridge_membership_histogram: Histogram,
    pub bbn_component_count: usize,
    /// Share of circles in the largest bridge-block component.
    pub largest_component_fraction: f64,
}

fn histogram(values: impl IntoIterator<Item = usize>) -> Histogram {
    let mut counts = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

pub fn graph_stats(circles: &CircleCollection, network: &InducedNetwork) -> StatsReport {
    let bbn = BridgeBlockNetwork::build(circles);
    let memberships = circles.memberships();
    let components = bbn.components();
    let largest = components.iter().map(Vec::len).max().unwrap_or(0);
    StatsReport {
        n_vertices: network.vertex_count(),
        n_circles: circles.len(),
        n_bridges: bbn.bridges.len(),
        n_links: bbn.links.len(),
        n_edges: network.edge_count(),
        circle_size_histogram: histogram(circles.circles().values().map(|m| m.len())),
        vertex_degree_histogram: histogram(network.degrees()),
        bridge_membership_histogram: histogram(bbn.bridges.iter().map(|v| memberships[v])),
        bbn_component_count: components.len(),
        largest_component_fraction: if circles.is_empty() {
            0.0
        } else {
            largest as f64 / circles.len() as f64
        },
    }
}

#[derive(Serialize, Deserialize)]
struct Row {
    statistic: String,
    key: Option<usize>,
    value: String,
}

const SCALARS: [&str; 7] = [
    "n_vertices",
    "n_circles",
    "n_bridges",
    "n_links",
    "n_edges",
    "bbn_component_count",
    "largest_component_fraction",
];

impl StatsReport {
    /// Long-format CSV: `statistic,key,value`. Scalars leave `key` empty;
    /// histogram rows carry the bin in `key` and the count in `value`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let scalars = [
            self.n_vertices.to_string(),
            self.n_circles.to_string(),
            self.n_bridges.to_string(),
            self.n_links.to_string(),
            self.n_edges.to_string(),
            self.bbn_component_count.to_string(),
            format!("{:.6}", self.largest_component_fraction),
        ];
        for (name, value) in SCALARS.iter().zip(scalars) {
            w.serialize(Row { statistic: name.to_string(), key: None, value })?;
        }
        for (name, hist) in [
            ("circle_size", &self.circle_size_histogram),
            ("vertex_degree", &self.vertex_degree_histogram),
            ("bridge_membership", &self.bridge_membership_histogram),
        ] {
            for &(k, c) in hist {
                w.serialize(Row { statistic: name.to_string(), key: Some(k), value: c.to_string() })?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut scalars: BTreeMap<String, String> = BTreeMap::new();
        let mut hists: BTreeMap<String, Histogram> = BTreeMap::new();
        for row in csv::Reader::from_reader(input).deserialize::<Row>() {
            let row = row?;
            match row.key {
                None => {
                    scalars.insert(row.statistic, row.value);
                }
                Some(k) => {
                    let count = row.value.parse().map_err(|_| bad(&row.statistic))?;
                    hists.entry(row.statistic).or_default().push((k, count));
                }
            }
        }
        let int = |name: &str| -> Result<usize> {
            scalars.get(name).and_then(|v| v.parse().ok()).ok_or_else(|| bad(name))
        };
        Ok(Self {
            n_vertices: int("n_vertices")?,
            n_circles: int("n_circles")?,
            n_bridges: int("n_bridges")?,
            n_links: int("n_links")?,
            n_edges: int("n_edges")?,
            bbn_component_count: int("bbn_component_count")?,
            largest_component_fraction: scalars
                .get("largest_component_fraction")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad("largest_component_fraction"))?,
            circle_size_histogram: hists.remove("circle_size").unwrap_or_default(),
            vertex_degree_histogram: hists.remove("vertex_degree").unwrap_or_default(),
            bridge_membership_histogram: hists.remove("bridge_membership").unwrap_or_default(),
        })
    }
}

fn bad(name: &str) -> Error {
    Error::InvalidInput(format!("stats CSV: missing or malformed `{name}`"))
}
