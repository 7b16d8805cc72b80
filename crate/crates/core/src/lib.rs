// SPDX-License-Identifier: Apache-2.0

//! Shuttle and SWAP co-optimizing compiler for trapped-ion QCCD devices.
//!
//! The crate is organized the way a compile job flows:
//!
//! * [`circuit`] holds the gate-level IR, an OpenQASM 2.0 subset parser, the
//!   benchmark generators and the dependency DAG.
//! * [`device`] describes QCCD topologies and lowers them to the static
//!   weighted slot graph that every later stage reasons over.
//! * [`mapping`] produces the initial placement of logical qubits.
//! * [`state`] tracks the dynamic slot occupancy and applies generic swaps.
//! * [`scheduler`] runs the generic-swap search and checks its output.
//! * [`cost`] turns a schedule into a makespan and success rate.
//! * [`oracle`] provides an exhaustive search for tiny instances plus the
//!   idealized-cost bounds.

pub mod circuit;
pub mod cost;
pub mod device;
pub mod error;
pub mod mapping;
pub mod oracle;
pub mod pipeline;
pub mod scheduler;
pub mod state;

pub use circuit::dag::DepGraph;
pub use circuit::{Circuit, Gate, GateKind};
pub use cost::{Baseline, CostParams, GateFamily, Metrics};
pub use device::graph::{DeviceGraph, EdgeClass, WeightParams};
pub use device::{SlotId, Topology, TopologyFamily, TrapId};
pub use error::{Error, Result};
pub use mapping::{MappingParams, MappingStrategy};
pub use pipeline::{compile, CompileOptions, Compiled};
pub use scheduler::{Event, Schedule, SchedulerParams};
pub use state::MachineState;
