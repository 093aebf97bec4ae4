//! Run leader selection from scenario phase and leadership mode.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roster::{AgentId, AgentKind, Roster};
use crate::scenarios::{load_scenario, ScenarioError, ScenarioScript};

#[derive(Debug, Error)]
pub enum LeadershipError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("leader group `{0}` cannot be resolved to a human agent")]
    Unresolvable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeadershipMode {
    Single,
    #[default]
    Functional,
}

impl fmt::Display for LeadershipMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeadershipMode::Single => "single",
            LeadershipMode::Functional => "functional",
        })
    }
}

impl FromStr for LeadershipMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(LeadershipMode::Single),
            "functional" => Ok(LeadershipMode::Functional),
            other => Err(format!("unknown leadership mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioPhase {
    DailyOps,
    Emergency,
    Science,
    Other,
}

impl ScenarioPhase {
    /// Phase default leader when a scenario declares no leader order.
    pub fn default_leader(self) -> AgentId {
        AgentId::from(match self {
            ScenarioPhase::DailyOps => "OPS_01",
            ScenarioPhase::Emergency => "CMD_01",
            ScenarioPhase::Science => "GEO_01",
            ScenarioPhase::Other => "CMD_01",
        })
    }
}

/// Lowest-numbered member of `group`; for an asset group, the primary owner
/// of that asset.
pub fn resolve_group(roster: &Roster, group: &str) -> Option<AgentId> {
    let first = roster.lowest_member(group)?;
    match first.kind {
        AgentKind::Human => Some(first.id.clone()),
        AgentKind::Asset => roster.ownership_of(&first.id).ok().map(|o| o.primary.clone()),
    }
}

pub fn select_leader(
    script: &ScenarioScript,
    mode: LeadershipMode,
    roster: &Roster,
) -> Result<AgentId, LeadershipError> {
    match mode {
        LeadershipMode::Single => Ok(AgentId::from("CMD_01")),
        LeadershipMode::Functional => match script.leader_order.first() {
            Some(group) => resolve_group(roster, group).ok_or_else(|| LeadershipError::Unresolvable(group.clone())),
            None => Ok(script.phase.default_leader()),
        },
    }
}

/// [`select_leader`] for a built-in scenario id.
pub fn select_leader_by_id(id: &str, mode: LeadershipMode, roster: &Roster) -> Result<AgentId, LeadershipError> {
    select_leader(&load_scenario(id)?, mode, roster)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roster::build_default_roster;
    use crate::scenarios::builtin_scripts;

    #[test]
    fn examples() {
        let r = build_default_roster();
        let f = LeadershipMode::Functional;
        assert_eq!(select_leader_by_id("ScienceExploration", f, &r).unwrap(), "GEO_01");
        assert_eq!(select_leader_by_id("EmergencyResponse", LeadershipMode::Single, &r).unwrap(), "CMD_01");
        assert_eq!(select_leader_by_id("HAB_LeakReconfig", f, &r).unwrap(), "LSS_01");
        assert_eq!(select_leader_by_id("ATC_ResupplyWindow", f, &r).unwrap(), "OPS_01");
        assert_eq!(select_leader_by_id("DailyOperations", f, &r).unwrap(), "OPS_01");
        assert!(select_leader_by_id("Nope", f, &r).is_err());
    }

    #[test]
    fn single_is_commander_and_functional_heads_order() {
        let r = build_default_roster();
        for s in builtin_scripts() {
            assert_eq!(select_leader(&s, LeadershipMode::Single, &r).unwrap(), "CMD_01");
            let l = select_leader(&s, LeadershipMode::Functional, &r).unwrap();
            let head = &s.leader_order[0];
            let group_ok = r.group_of(&l) == Some(head.as_str())
                || r.members_of(head).iter().any(|a| r.ownership_of(&a.id).is_ok_and(|o| o.primary == l));
            assert!(group_ok, "{}: {l}", s.id);
        }
    }

    #[test]
    fn fallback_by_phase() {
        let r = build_default_roster();
        let mut s = builtin_scripts().remove(2);
        s.leader_order.clear();
        assert_eq!(select_leader(&s, LeadershipMode::Functional, &r).unwrap(), "GEO_01");
        s.phase = ScenarioPhase::DailyOps;
        assert_eq!(select_leader(&s, LeadershipMode::Functional, &r).unwrap(), "OPS_01");
    }
}
