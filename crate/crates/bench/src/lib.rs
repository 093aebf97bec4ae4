//! Benchmark fixtures.

use marsops_core::consensus::ConsensusConfig;
use marsops_core::metrics::MetricPoint;
use marsops_core::protocols::ProtocolMode;
use marsops_core::{AgentId, RunConfig, World};

pub const SCENARIOS: [&str; 3] = ["DailyOperations", "HAB_LeakReconfig", "GH_BioOutbreak"];

pub fn world() -> World {
    World::default()
}

pub fn plain(scenario: &str) -> RunConfig {
    RunConfig::for_scenario(scenario)
}

/// Every factor switched to its heaviest level.
pub fn loaded(scenario: &str) -> RunConfig {
    RunConfig {
        consensus: ConsensusConfig::on(),
        protocols: ProtocolMode::Hetero,
        faults: true,
        ..RunConfig::for_scenario(scenario)
    }
}

pub fn ordered_pairs(world: &World) -> Vec<(AgentId, AgentId)> {
    let ids: Vec<AgentId> = world.roster.agents().iter().map(|a| a.id.clone()).collect();
    ids.iter()
        .flat_map(|a| ids.iter().filter(move |b| *b != a).map(move |b| (a.clone(), b.clone())))
        .collect()
}

pub fn metric_grid(n: usize) -> Vec<MetricPoint> {
    (0..n)
        .map(|i| {
            let x = i as f64 / n as f64;
            MetricPoint { time: 15.0 + 20.0 * x, msgs: 3.0 + 60.0 * x, cross: x, failures: 0.1 * x, switches: 4.0 * x }
        })
        .collect()
}
