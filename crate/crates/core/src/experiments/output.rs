use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::ExperimentResult;
use crate::error::Result;

pub const CSV_HEADER: &str =
    "experiment,algorithm,rule,target,model,param,n,trial,seed,comparisons,pivots,depth";

/// One trial with full provenance. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub experiment: String,
    pub algorithm: String,
    pub rule: String,
    pub target: String,
    pub model: String,
    pub param: f64,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub comparisons: u64,
    pub pivots: u64,
    pub depth: u64,
}

impl ExperimentResult {
    pub fn rows(&self) -> impl Iterator<Item = CsvRow> + '_ {
        let c = &self.config;
        self.records.iter().map(move |r| CsvRow {
            experiment: c.generator.to_string(),
            algorithm: c.algorithm.to_string(),
            rule: c.rule.to_string(),
            target: c.target.to_string(),
            model: c.model.name().to_string(),
            param: r.param,
            n: r.n,
            trial: r.trial,
            seed: c.master_seed,
            comparisons: r.comparisons,
            pivots: r.pivots,
            depth: r.depth,
        })
    }
}

/// Header plus one row per trial for each result, in order.
pub fn write_csv<W: Write>(results: &[ExperimentResult], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in results {
        for row in r.rows() {
            w.serialize(row)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonMeta<'a> {
    version: &'a str,
    master_seed: u64,
    config_hash: String,
    config: &'a super::ExperimentConfig,
}

#[derive(Serialize)]
struct JsonRun<'a> {
    meta: JsonMeta<'a>,
    rows: Vec<CsvRow>,
}

/// One object per result: a `meta` block and the rows under their CSV names.
pub fn write_json<W: Write>(results: &[ExperimentResult], mut out: W) -> Result<()> {
    let runs: Vec<JsonRun> = results
        .iter()
        .map(|r| JsonRun {
            meta: JsonMeta {
                version: env!("CARGO_PKG_VERSION"),
                master_seed: r.config.master_seed,
                config_hash: r.config.config_hash(),
                config: &r.config,
            },
            rows: r.rows().collect(),
        })
        .collect();
    if let [single] = runs.as_slice() {
        serde_json::to_writer_pretty(&mut out, single)?;
    } else {
        serde_json::to_writer_pretty(&mut out, &runs)?;
    }
    writeln!(out)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<Result<Vec<CsvRow>, _>>()?;
    Ok(rows)
}
