//! Deterministic simulator for a settlement-scale Mars base: a 93-agent
//! roster, hierarchical and shortcut routing, controller failover, leader
//! selection, layered memory, bounded consensus, translated dialects,
//! failure accounting and the composite performance index.

pub mod consensus;
pub mod engine;
pub mod failures;
pub mod handover;
pub mod leadership;
pub mod memory;
pub mod metrics;
pub mod protocols;
pub mod rng;
pub mod roster;
pub mod routing;
pub mod runner;
pub mod scenarios;
pub mod textgen;

pub use engine::{run_in, run_scenario, recount, EngineError, Event, RunConfig, RunResult, World};
pub use metrics::{compute_ampi, AmpiConfig, RunMetrics};
pub use roster::{build_default_roster, AgentId, Roster};
pub use routing::{RoutingPolicy, Router};
pub use runner::{run_batch, run_suite, AggregateRow, Factor, SweepSpec};
