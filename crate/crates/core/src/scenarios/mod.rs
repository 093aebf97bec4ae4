//! The benchmark task suite: scenario scripts, playbooks, deliverable
//! checkers and the scenario catalog.

mod catalog;
mod prompts;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::failures::{ActionKind, ConstraintRule};
use crate::leadership::ScenarioPhase;
use crate::roster::{AgentId, AgentKind, Roster};

pub use catalog::builtin_scripts;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario `{id}`: {reason}")]
    Invalid { id: String, reason: String },
    #[error("scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error("scenario file: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeliverableSpec {
    pub index: usize,
    pub section_tag: String,
    pub title: String,
    pub required_fields: Vec<String>,
}

/// Who performs a step or receives a message.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum Target {
    Leader,
    /// Lowest-numbered member of the group.
    Group(String),
    Agent(AgentId),
    /// Whoever currently controls the asset.
    Controller(AgentId),
}

/// What the recipient of a misread message does with it when no translator
/// is mediating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Misread {
    pub subject: String,
    pub setpoint: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    /// `template` may contain `{CONCEPT}` placeholders rendered in the
    /// sender's dialect.
    Send {
        to: Target,
        template: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        misread: Option<Misread>,
    },
    Command { asset: AgentId, setpoint: f64 },
    /// Look `key` up in the actor's memory context; on a miss, re-ask `source`.
    Recall { key: String, source: Target },
    Emit {
        section: String,
        fields: Vec<(String, String)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        needs_asset: Option<AgentId>,
    },
    /// Staged unsafe action; only executed with fault injection enabled.
    Fault {
        subject: String,
        #[serde(flatten)]
        kind: ActionKind,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaybookStep {
    pub tick: u32,
    pub actor: Target,
    #[serde(flatten)]
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HookProposal {
    pub id: String,
    pub proposer: Target,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusHook {
    pub tick: u32,
    pub topic: String,
    pub proposals: Vec<HookProposal>,
    pub voters: Vec<Target>,
    #[serde(default)]
    pub bias: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioScript {
    pub id: String,
    pub title: String,
    pub phase: ScenarioPhase,
    pub seed_prompt: String,
    pub leader_order: Vec<String>,
    pub participants: BTreeSet<String>,
    pub assets: Vec<AgentId>,
    pub deliverables: Vec<DeliverableSpec>,
    pub constraints: Vec<ConstraintRule>,
    #[serde(default)]
    pub consensus_hook: Option<ConsensusHook>,
    pub playbook: Vec<PlaybookStep>,
}

impl ScenarioScript {
    pub fn j(&self) -> usize {
        self.deliverables.len()
    }

    pub fn last_tick(&self) -> u32 {
        let hook = self.consensus_hook.as_ref().map_or(0, |h| h.tick);
        self.playbook.iter().map(|s| s.tick).max().unwrap_or(0).max(hook)
    }

    /// Structural checks, plus asset membership when a roster is given.
    pub fn validate(&self, roster: Option<&Roster>) -> Result<(), ScenarioError> {
        let bad = |reason: String| Err(ScenarioError::Invalid { id: self.id.clone(), reason });
        if self.deliverables.is_empty() {
            return bad("no deliverables".into());
        }
        let mut tags = BTreeSet::new();
        for (i, d) in self.deliverables.iter().enumerate() {
            if d.index != i + 1 {
                return bad(format!("deliverable `{}` has index {}, expected {}", d.section_tag, d.index, i + 1));
            }
            if !tags.insert(&d.section_tag) {
                return bad(format!("duplicate section tag `{}`", d.section_tag));
            }
        }
        for c in &self.constraints {
            if c.scenario != self.id {
                return bad(format!("rule `{}` belongs to `{}`", c.rule_id, c.scenario));
            }
        }
        if let Some(h) = &self.consensus_hook {
            let ids: BTreeSet<_> = h.proposals.iter().map(|p| &p.id).collect();
            if ids.len() != h.proposals.len() || h.proposals.is_empty() || h.voters.is_empty() {
                return bad("consensus hook needs unique proposals and at least one voter".into());
            }
        }
        if let Some(roster) = roster {
            for a in &self.assets {
                match roster.get(a) {
                    Some(spec) if spec.kind == AgentKind::Asset => {}
                    _ => return bad(format!("`{a}` is not a roster asset")),
                }
            }
            for g in &self.leader_order {
                if roster.lowest_member(g).is_none() {
                    return bad(format!("leader group `{g}` has no members"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSection {
    pub tag: String,
    pub fields: BTreeMap<String, String>,
}

/// The final tagged report a run produces.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub sections: Vec<ReportSection>,
}

impl Report {
    pub fn section(&self, tag: &str) -> Option<&ReportSection> {
        self.sections.iter().find(|s| s.tag == tag)
    }

    /// Appends a section, replacing an earlier one with the same tag.
    pub fn upsert(&mut self, section: ReportSection) {
        match self.sections.iter_mut().find(|s| s.tag == section.tag) {
            Some(s) => *s = section,
            None => self.sections.push(section),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            let _ = writeln!(out, "[{}]", s.tag);
            for (k, v) in &s.fields {
                let _ = writeln!(out, "{k}: {v}");
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Report::render`]; lines outside a section are ignored.
    pub fn parse(text: &str) -> Report {
        let mut report = Report::default();
        let mut current: Option<ReportSection> = None;
        for line in text.lines() {
            let line = line.trim();
            if let Some(tag) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if let Some(s) = current.take() {
                    report.upsert(s);
                }
                current = Some(ReportSection { tag: tag.to_string(), fields: BTreeMap::new() });
            } else if let (Some(s), Some((k, v))) = (current.as_mut(), line.split_once(':')) {
                s.fields.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        if let Some(s) = current {
            report.upsert(s);
        }
        report
    }
}

/// Flag `j` is true iff section `j` is present with every required field
/// non-empty.
pub fn check_deliverables(report: &Report, script: &ScenarioScript) -> Vec<bool> {
    script
        .deliverables
        .iter()
        .map(|d| {
            report.section(&d.section_tag).is_some_and(|s| {
                d.required_fields
                    .iter()
                    .all(|f| s.fields.get(f).is_some_and(|v| !v.trim().is_empty()))
            })
        })
        .collect()
}

/// Registered scenarios, in suite order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioCatalog {
    scripts: Vec<ScenarioScript>,
}

impl Default for ScenarioCatalog {
    fn default() -> Self {
        ScenarioCatalog::builtin()
    }
}

impl ScenarioCatalog {
    pub fn builtin() -> Self {
        ScenarioCatalog { scripts: builtin_scripts() }
    }

    pub fn get(&self, id: &str) -> Result<&ScenarioScript, ScenarioError> {
        self.scripts
            .iter()
            .find(|s| s.id == id)
            .ok_or_else(|| ScenarioError::UnknownScenario(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.scripts.iter().map(|s| s.id.as_str())
    }

    pub fn scripts(&self) -> &[ScenarioScript] {
        &self.scripts
    }

    /// Adds or replaces a script after validating it.
    pub fn insert(&mut self, script: ScenarioScript, roster: &Roster) -> Result<(), ScenarioError> {
        script.validate(Some(roster))?;
        match self.scripts.iter_mut().find(|s| s.id == script.id) {
            Some(s) => *s = script,
            None => self.scripts.push(script),
        }
        Ok(())
    }

    /// Loads one script or a list of scripts from JSON.
    pub fn load_file(&mut self, path: &Path, roster: &Roster) -> Result<usize, ScenarioError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum OneOrMany {
            One(Box<ScenarioScript>),
            Many(Vec<ScenarioScript>),
        }
        let text = std::fs::read_to_string(path)?;
        let scripts = match serde_json::from_str::<OneOrMany>(&text)? {
            OneOrMany::One(s) => vec![*s],
            OneOrMany::Many(v) => v,
        };
        let n = scripts.len();
        for s in scripts {
            self.insert(s, roster)?;
        }
        Ok(n)
    }
}

/// A built-in script by id.
pub fn load_scenario(id: &str) -> Result<ScenarioScript, ScenarioError> {
    builtin_scripts()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| ScenarioError::UnknownScenario(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roster::build_default_roster;

    #[test]
    fn all_load_and_validate() {
        let roster = build_default_roster();
        let cat = ScenarioCatalog::builtin();
        assert_eq!(cat.ids().count(), 13);
        for s in cat.scripts() {
            s.validate(Some(&roster)).unwrap();
            let expected_j = if s.id == "MedicalOutbreakDrill" { 5 } else { 4 };
            assert_eq!(s.j(), expected_j, "{}", s.id);
            assert!(s.seed_prompt.contains(&format!("({expected_j})")));
            assert!(!s.seed_prompt.contains(&format!("({})", expected_j + 1)));
            assert!((1..=3).contains(&s.constraints.len()), "{}", s.id);
            for d in &s.deliverables {
                let emitted = s.playbook.iter().any(|p| matches!(&p.action, Action::Emit { section, .. } if *section == d.section_tag));
                assert!(emitted, "{} never emits {}", s.id, d.section_tag);
            }
        }
    }

    #[test]
    fn table_examples() {
        let s = load_scenario("ScienceExploration").unwrap();
        assert_eq!(s.leader_order, vec!["GEO", "BIO", "OPS"]);
        assert_eq!(s.assets, vec![AgentId::from("ROV_SCI_01"), AgentId::from("UAV_MAP_01")]);
        let m = load_scenario("MedicalOutbreakDrill").unwrap();
        assert_eq!(m.j(), 5);
        assert!(m.assets.is_empty());
        assert!(matches!(load_scenario("NotAScenario"), Err(ScenarioError::UnknownScenario(_))));
        let d = load_scenario("DailyOperations").unwrap();
        assert!(d.seed_prompt.starts_with("You are running the Daily Operations script for the next 8 h on Mars."));
        assert!(d.seed_prompt.contains("start\u{2011}of\u{2011}sol stand\u{2011}up"));
    }

    #[test]
    fn participant_groups_cover_leaders() {
        let cat = ScenarioCatalog::builtin();
        let union: BTreeSet<&str> = cat.scripts().iter().flat_map(|s| s.participants.iter().map(String::as_str)).collect();
        for s in cat.scripts() {
            for g in &s.leader_order {
                assert!(union.contains(g.as_str()) || g == "ATC" || g == "CMD", "{g}");
            }
        }
    }

    #[test]
    fn checker() {
        let s = load_scenario("DailyOperations").unwrap();
        assert_eq!(check_deliverables(&Report::default(), &s), vec![false; 4]);
        let mut r = Report::default();
        for d in &s.deliverables {
            r.upsert(ReportSection {
                tag: d.section_tag.clone(),
                fields: d.required_fields.iter().map(|f| (f.clone(), "x".to_string())).collect(),
            });
        }
        assert_eq!(check_deliverables(&r, &s), vec![true; 4]);
        r.sections.retain(|x| x.tag != s.deliverables[2].section_tag);
        assert_eq!(check_deliverables(&r, &s), vec![true, true, false, true]);
        let mut blank = Report::parse(&r.render());
        assert_eq!(blank, r);
        blank.sections[0].fields.values_mut().for_each(|v| v.clear());
        assert!(!check_deliverables(&blank, &s)[0]);
    }

    #[test]
    fn json_round_trip() {
        let roster = build_default_roster();
        let s = load_scenario("HAB_LeakReconfig").unwrap();
        let text = serde_json::to_string_pretty(&s).unwrap();
        let back: ScenarioScript = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("custom.json");
        let mut custom = s.clone();
        custom.id = "CustomLeak".into();
        for c in &mut custom.constraints {
            c.scenario = "CustomLeak".into();
        }
        std::fs::write(&path, serde_json::to_string(&vec![custom]).unwrap()).unwrap();
        let mut cat = ScenarioCatalog::builtin();
        assert_eq!(cat.load_file(&path, &roster).unwrap(), 1);
        assert!(cat.get("CustomLeak").is_ok());
        custom = s;
        custom.assets.push("NOT_AN_ASSET".into());
        assert!(cat.insert(custom, &roster).is_err());
    }
}
