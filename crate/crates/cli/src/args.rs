// SPDX-License-Identifier: Apache-2.0

//! Command-line flags.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use qccd_core::oracle::OracleLimits;
use qccd_core::{Baseline, CompileOptions, GateFamily, MappingStrategy};

use crate::sweep::SweepAxis;
use crate::{CircuitSource, OracleCheckConfig, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "qccd-sync", version, about = "Shuttle and SWAP scheduling for QCCD trapped-ion devices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map, schedule and evaluate one circuit.
    Compile(CompileArgs),
    /// Compile once per value of one parameter and write a CSV.
    Sweep(SweepArgs),
    /// Compare the heuristic with exhaustive search on random tiny instances.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CompileArgs {
    /// OpenQASM 2.0 file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    pub circuit: Option<PathBuf>,
    /// Generator spec, `name:size[:key=value,...]`, e.g. `qft:24`.
    #[arg(long = "gen")]
    pub gen: Option<String>,
    /// `G2x3:17`, `L4:22`, `S4` (with --capacity) or a JSON topology file.
    #[arg(long)]
    pub topology: String,
    #[arg(long)]
    pub capacity: Option<usize>,
    /// even, gather or sta.
    #[arg(long, default_value = "gather")]
    pub mapping: MappingStrategy,
    /// FM, PM, AM1 or AM2.
    #[arg(long, default_value = "FM")]
    pub gates: GateFamily,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub inner_weight: Option<f64>,
    #[arg(long)]
    pub shuttle_weight: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Path-length limit, in edges beyond one.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Gates per qubit considered by the second mapping level.
    #[arg(long)]
    pub lookahead: Option<usize>,
    #[arg(long)]
    pub a0: Option<f64>,
    #[arg(long)]
    pub swap_multiplier: Option<u32>,
    /// none, perfect-shuttle, perfect-swap or ideal.
    #[arg(long, default_value = "none")]
    pub baseline: Baseline,
    /// Output file (metrics JSON, or CSV for sweeps); stdout when unset.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-event timing CSV.
    #[arg(long)]
    pub events_csv: Option<PathBuf>,
    /// Final occupancy and heat as JSON.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl CompileArgs {
    pub fn to_config(&self) -> Result<RunConfig> {
        let circuit = match (&self.circuit, &self.gen) {
            (Some(p), None) => CircuitSource::File(p.clone()),
            (None, Some(g)) => CircuitSource::Generator(g.clone()),
            _ => bail!("give exactly one of --circuit or --gen"),
        };
        let mut o = CompileOptions::default();
        o.mapping.strategy = self.mapping;
        o.cost.gate_family = self.gates;
        o.baseline = self.baseline;
        set(&mut o.scheduler.delta, self.delta);
        set(&mut o.scheduler.m, self.m);
        set(&mut o.weights.inner_weight, self.inner_weight);
        set(&mut o.weights.shuttle_base, self.shuttle_weight);
        set(&mut o.weights.threshold, self.threshold);
        set(&mut o.mapping.alpha, self.alpha);
        set(&mut o.mapping.beta, self.beta);
        set(&mut o.mapping.lookahead_k, self.lookahead);
        set(&mut o.cost.a0, self.a0);
        set(&mut o.cost.swap_gate_multiplier, self.swap_multiplier);
        Ok(RunConfig {
            circuit,
            topology: self.topology.clone(),
            capacity: self.capacity,
            options: o,
            out: self.out.clone(),
            events_csv: self.events_csv.clone(),
            snapshot: self.snapshot.clone(),
            seed: self.seed,
        })
    }
}

fn set<T>(field: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *field = v;
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// topology, capacity, gates, mapping, delta or weight-ratio.
    #[arg(long)]
    pub axis: SweepAxis,
    /// Comma-separated values for the axis.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub values: Vec<String>,
    #[command(flatten)]
    pub base: CompileArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Number of random instances.
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Search depth limit, in generic swaps.
    #[arg(long, default_value_t = OracleLimits::default().max_depth)]
    pub max_depth: usize,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Per-instance CSV; stdout when unset.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OracleArgs {
    pub fn to_config(&self) -> OracleCheckConfig {
        let mut c = OracleCheckConfig {
            instances: self.instances,
            seed: self.seed,
            out: self.out.clone(),
            ..Default::default()
        };
        c.limits.max_depth = self.max_depth;
        set(&mut c.scheduler.delta, self.delta);
        set(&mut c.scheduler.m, self.m);
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compile_flags() {
        let cli = Cli::try_parse_from([
            "qccd-sync", "compile", "--gen", "qft:24", "--topology", "G2x2:22", "--mapping", "sta", "--gates", "PM",
            "--delta", "0.01", "--swap-multiplier", "3", "--baseline", "perfect-swap",
        ])
        .unwrap();
        let Command::Compile(a) = cli.command else { panic!("wrong subcommand") };
        let c = a.to_config().unwrap();
        assert_eq!(c.circuit, CircuitSource::Generator("qft:24".into()));
        assert_eq!(c.options.mapping.strategy, MappingStrategy::Sta);
        assert_eq!(c.options.cost.gate_family, GateFamily::PM);
        assert_eq!(c.options.scheduler.delta, 0.01);
        assert_eq!(c.options.cost.swap_gate_multiplier, 3);
        assert_eq!(c.options.baseline, Baseline::PerfectSwap);
    }

    #[test]
    fn circuit_source_required_once() {
        assert!(Cli::try_parse_from(["qccd-sync", "compile", "--topology", "L2:3"]).is_err());
        assert!(Cli::try_parse_from([
            "qccd-sync", "compile", "--gen", "qft:3", "--circuit", "a.qasm", "--topology", "L2:3"
        ])
        .is_err());
    }

    #[test]
    fn sweep_values_split() {
        let cli = Cli::try_parse_from([
            "qccd-sync", "sweep", "--axis", "gates", "--values", "FM,PM,AM1,AM2", "--gen", "qaoa_chain:8",
            "--topology", "L2:6",
        ])
        .unwrap();
        let Command::Sweep(a) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(a.axis, SweepAxis::GateFamily);
        assert_eq!(a.values, ["FM", "PM", "AM1", "AM2"]);
    }
}
