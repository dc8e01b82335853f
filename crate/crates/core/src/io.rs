//! File formats.
//!
//! * circles: JSON `{"circles": {"<circle>": ["<vertex>", ...]}}`
//! * weights: CSV with header `u,v,w`, one row per ordered pair
//! * source distribution: JSON object from circle id to probability

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::epoi::SourceDistribution;
use crate::error::{Error, Result};
use crate::network::{CircleCollection, CircleId, EdgeWeights, VertexId};

#[derive(Serialize, Deserialize)]
struct CircleFile {
    circles: BTreeMap<CircleId, BTreeSet<VertexId>>,
}

pub fn read_circles<R: Read>(input: R) -> Result<CircleCollection> {
    let file: CircleFile = serde_json::from_reader(input)?;
    CircleCollection::new(file.circles)
}

/// Writes `circles` as pretty JSON. Empty circles are left out because the
/// format does not admit them.
pub fn write_circles<W: Write>(circles: &CircleCollection, mut out: W) -> Result<()> {
    let file = CircleFile {
        circles: circles.without_empty_circles().circles().clone(),
    };
    serde_json::to_writer_pretty(&mut out, &file)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct WeightRow {
    u: VertexId,
    v: VertexId,
    w: f64,
}

pub fn read_weights<R: Read>(input: R) -> Result<EdgeWeights> {
    let mut weights = EdgeWeights::new();
    for (line, row) in csv::Reader::from_reader(input).deserialize::<WeightRow>().enumerate() {
        let row = row?;
        if weights.get(row.u.as_str(), row.v.as_str()).is_some() {
            return Err(Error::InvalidInput(format!(
                "weights row {}: duplicate pair ({}, {})",
                line + 2,
                row.u,
                row.v
            )));
        }
        weights.insert(row.u, row.v, row.w)?;
    }
    Ok(weights)
}

/// Weights are written at full precision so that a written instance reads
/// back to the same numbers.
pub fn write_weights<W: Write>(weights: &EdgeWeights, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (u, v, x) in weights.iter() {
        w.serialize(WeightRow { u: u.clone(), v: v.clone(), w: x })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_distribution<R: Read>(input: R) -> Result<SourceDistribution> {
    let probs: BTreeMap<CircleId, f64> = serde_json::from_reader(input)?;
    SourceDistribution::new(probs)
}

pub fn write_distribution<W: Write>(p: &SourceDistribution, mut out: W) -> Result<()> {
    let probs: BTreeMap<&CircleId, f64> = p.iter().collect();
    serde_json::to_writer_pretty(&mut out, &probs)?;
    writeln!(out)?;
    Ok(())
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}
