// SPDX-License-Identifier: Apache-2.0

//! Heuristic-versus-exhaustive comparison on random tiny instances.

use std::io;
use std::path::PathBuf;

use anyhow::{Context, Result};
use qccd_core::oracle::{compare_on, random_instances, GapResult, OracleLimits};
use qccd_core::{Error, SchedulerParams, WeightParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::sweep::thread_cap;

#[derive(Clone, Debug)]
pub struct OracleCheckConfig {
    pub instances: usize,
    pub seed: u64,
    pub limits: OracleLimits,
    pub weights: WeightParams,
    pub scheduler: SchedulerParams,
    /// Per-instance CSV; stdout when unset.
    pub out: Option<PathBuf>,
}

impl Default for OracleCheckConfig {
    fn default() -> Self {
        OracleCheckConfig {
            instances: 100,
            seed: 0,
            limits: OracleLimits::default(),
            weights: WeightParams::default(),
            scheduler: SchedulerParams::default(),
            out: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub index: usize,
    /// `solved`, `depth-limit` (no solution within the search depth), or
    /// `skipped` (instance over the oracle limits).
    pub status: &'static str,
    pub topology: String,
    pub qubits: usize,
    pub gates: usize,
    pub heuristic_weight: Option<f64>,
    pub optimal_weight: Option<f64>,
    pub heuristic_shuttles: Option<usize>,
    pub optimal_shuttles: Option<usize>,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GapSummary {
    pub instances: usize,
    pub solved: usize,
    pub skipped: usize,
    pub depth_limited: usize,
    pub optimal: usize,
    pub within_1_5: usize,
    pub mean_ratio: f64,
    pub max_ratio: f64,
}

impl GapSummary {
    pub fn from_rows(rows: &[GapRow]) -> Self {
        let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
        let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
        GapSummary {
            instances: rows.len(),
            solved: count("solved"),
            skipped: count("skipped"),
            depth_limited: count("depth-limit"),
            optimal: ratios.iter().filter(|&&r| r <= 1.0 + 1e-9).count(),
            within_1_5: ratios.iter().filter(|&&r| r <= 1.5 + 1e-9).count(),
            mean_ratio: if ratios.is_empty() { 0.0 } else { ratios.iter().sum::<f64>() / ratios.len() as f64 },
            max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        }
    }

    /// `n` as a share of the solved instances; 1 when nothing was solved.
    pub fn fraction(&self, n: usize) -> f64 {
        if self.solved == 0 {
            1.0
        } else {
            n as f64 / self.solved as f64
        }
    }
}

fn row(index: usize, r: std::result::Result<GapResult, Error>) -> Result<GapRow> {
    match r {
        Ok(g) => Ok(GapRow {
            index,
            status: if g.optimal_weight.is_some() { "solved" } else { "depth-limit" },
            topology: g.topology,
            qubits: g.qubits,
            gates: g.gates,
            heuristic_weight: Some(g.heuristic_weight),
            optimal_weight: g.optimal_weight,
            heuristic_shuttles: Some(g.heuristic_shuttles),
            optimal_shuttles: g.optimal_shuttles,
            ratio: g.ratio,
        }),
        Err(Error::OracleLimits(msg)) => {
            log::warn!("instance {index} skipped: {msg}");
            Ok(GapRow {
                index,
                status: "skipped",
                topology: String::new(),
                qubits: 0,
                gates: 0,
                heuristic_weight: None,
                optimal_weight: None,
                heuristic_shuttles: None,
                optimal_shuttles: None,
                ratio: None,
            })
        }
        Err(e) => Err(e).with_context(|| format!("instance {index}")),
    }
}

/// Runs the comparison and writes the per-instance CSV. The summary is
/// returned and printed as one line.
pub fn cmd_oracle_check(cfg: &OracleCheckConfig) -> Result<GapSummary> {
    let instances = random_instances(cfg.seed, cfg.instances);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        pool = pool.num_threads(n);
    }
    let rows: Vec<GapRow> = pool.build()?.install(|| {
        instances
            .par_iter()
            .enumerate()
            .map(|(i, inst)| row(i, compare_on(inst, cfg.weights, &cfg.scheduler, &cfg.limits)))
            .collect::<Result<_>>()
    })?;

    let write = |mut w: csv::Writer<Box<dyn io::Write>>| -> Result<()> {
        if rows.is_empty() {
            // Header only, so an empty run still yields a well-formed file.
            w.write_record([
                "index",
                "status",
                "topology",
                "qubits",
                "gates",
                "heuristic_weight",
                "optimal_weight",
                "heuristic_shuttles",
                "optimal_shuttles",
                "ratio",
            ])?;
        }
        for r in &rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    };
    let sink: Box<dyn io::Write> = match &cfg.out {
        Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("writing {}", p.display()))?),
        None => Box::new(io::stdout()),
    };
    write(csv::Writer::from_writer(sink))?;

    let s = GapSummary::from_rows(&rows);
    let line = format!(
        "oracle-check: {} instances, {} solved, {} optimal ({:.1}%), {} within 1.5x ({:.1}%), mean ratio {:.4}, max ratio {:.4}",
        s.instances,
        s.solved,
        s.optimal,
        100.0 * s.fraction(s.optimal),
        s.within_1_5,
        100.0 * s.fraction(s.within_1_5),
        s.mean_ratio,
        s.max_ratio
    );
    if cfg.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(s)
}
