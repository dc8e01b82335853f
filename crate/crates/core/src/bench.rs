//! Min-cut against greedy on generated instances, one row per (size,
//! replicate).

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::epoi::SourceDistribution;
use crate::error::{Error, Result};
use crate::generator::{generate_instance, GeneratorParams, ProfileConfig};
use crate::optimizer::{compare_methods, CompareConfig};
use crate::rng::RngSpec;

pub const HEADER: [&str; 9] = [
    "n",
    "mincut",
    "epoi_cut",
    "epoi_greedy",
    "epoi_stderr",
    "epoi_base",
    "seed",
    "ms_cut",
    "ms_greedy",
];

pub const HEADER_COMMENT: &str = "# greedy uses m = min-cut size; epoi_stderr is the largest standard error of the three EPOI estimates";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub mincut_size: usize,
    pub epoi_cut: f64,
    pub epoi_greedy: f64,
    pub epoi_stderr: f64,
    pub epoi_base: f64,
    /// Seed of this row's instance and estimates.
    pub seed: u64,
    pub ms_cut: Option<f64>,
    pub ms_greedy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub replicates: u64,
    pub seed: u64,
    pub profile: ProfileConfig,
    pub compare: CompareConfig,
}

/// Seed of replicate `replicate` at size `n`; independent of the other sizes
/// and replicates in the run.
pub fn row_seed(seed: u64, n: usize, replicate: u64) -> u64 {
    RngSpec::from_seed(seed).child(n as u64).child(replicate).master_seed
}

/// One row: paper-profile instance from `seed`, uniform source distribution,
/// then [`compare_methods`].
pub fn bench_row(n: usize, seed: u64, profile: ProfileConfig, compare: &CompareConfig) -> Result<BenchRow> {
    let params = GeneratorParams::paper_profile(n, seed, profile);
    let (circles, weights) = generate_instance(&params)?;
    let p = SourceDistribution::uniform(&circles);
    let r = compare_methods(&circles, &weights, &p, compare, RngSpec::new(seed, 2))?;
    Ok(BenchRow {
        n,
        mincut_size: r.mincut_size,
        epoi_cut: r.epoi_cut.value,
        epoi_greedy: r.epoi_greedy.value,
        epoi_stderr: r.max_std_error(),
        epoi_base: r.epoi_base.value,
        seed,
        ms_cut: Some(r.cut_time.as_secs_f64() * 1e3),
        ms_greedy: Some(r.greedy_time.as_secs_f64() * 1e3),
    })
}

/// A row that could not be produced.
#[derive(Debug)]
pub struct RowFailure {
    pub n: usize,
    pub replicate: u64,
    pub seed: u64,
    pub error: Error,
}

/// Rows in (size, replicate) order, up to the first failure in that order.
pub fn run_bench(config: &BenchConfig) -> (Vec<BenchRow>, Option<RowFailure>) {
    let jobs: Vec<(usize, u64)> = config
        .sizes
        .iter()
        .flat_map(|&n| (0..config.replicates).map(move |r| (n, r)))
        .collect();
    let results: Vec<Result<BenchRow>> = jobs
        .par_iter()
        .map(|&(n, r)| bench_row(n, row_seed(config.seed, n, r), config.profile, &config.compare))
        .collect();
    let mut rows = Vec::new();
    for ((n, replicate), result) in jobs.into_iter().zip(results) {
        match result {
            Ok(row) => rows.push(row),
            Err(error) => {
                let seed = row_seed(config.seed, n, replicate);
                return (rows, Some(RowFailure { n, replicate, seed, error }));
            }
        }
    }
    (rows, None)
}

fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

/// Writes the comment line, the header and `rows`. Timing columns stay empty
/// unless `with_times` is set, which keeps the file reproducible by default.
pub fn write_csv<W: Write>(rows: &[BenchRow], with_times: bool, mut out: W) -> Result<()> {
    writeln!(out, "{HEADER_COMMENT}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        let time = |t: Option<f64>| match t {
            Some(t) if with_times => fixed(t),
            _ => String::new(),
        };
        w.write_record([
            row.n.to_string(),
            row.mincut_size.to_string(),
            fixed(row.epoi_cut),
            fixed(row.epoi_greedy),
            fixed(row.epoi_stderr),
            fixed(row.epoi_base),
            row.seed.to_string(),
            time(row.ms_cut),
            time(row.ms_greedy),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRow>> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    if reader.headers()?.iter().ne(HEADER) {
        return Err(Error::InvalidInput("bench CSV: unexpected header".into()));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let bad = |i: usize| Error::InvalidInput(format!("bench CSV: bad `{}` value `{}`", HEADER[i], field(i)));
        let real = |i: usize| field(i).parse::<f64>().map_err(|_| bad(i));
        let time = |i: usize| if field(i).is_empty() { Ok(None) } else { real(i).map(Some) };
        rows.push(BenchRow {
            n: field(0).parse().map_err(|_| bad(0))?,
            mincut_size: field(1).parse().map_err(|_| bad(1))?,
            epoi_cut: real(2)?,
            epoi_greedy: real(3)?,
            epoi_stderr: real(4)?,
            epoi_base: real(5)?,
            seed: field(6).parse().map_err(|_| bad(6))?,
            ms_cut: time(7)?,
            ms_greedy: time(8)?,
        });
    }
    Ok(rows)
}
