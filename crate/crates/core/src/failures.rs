//! Failure accounting: uncontrollable assets, constraint violations and
//! missing deliverables.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::handover::ControlResolution;
use crate::roster::AgentId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Redline,
    InterlockBypass,
    SeoRejection,
}

/// Something an agent did that rules can inspect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionKind {
    /// A commanded setpoint on a subject (asset or process variable).
    Setpoint { value: f64 },
    InterlockBypass,
    /// Proceeding after the safety officer rejected the plan.
    ProceedOverSeo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionEvent {
    pub tick: u32,
    pub actor: AgentId,
    pub subject: String,
    #[serde(flatten)]
    pub kind: ActionKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RulePredicate {
    /// Any setpoint on `subject` strictly above `max`.
    Redline { subject: String, max: f64 },
    /// Any interlock bypass on `subject`.
    InterlockBypass { subject: String },
    /// Any action taken over a safety-officer rejection.
    SeoRejection,
}

impl RulePredicate {
    pub fn kind(&self) -> RuleKind {
        match self {
            RulePredicate::Redline { .. } => RuleKind::Redline,
            RulePredicate::InterlockBypass { .. } => RuleKind::InterlockBypass,
            RulePredicate::SeoRejection => RuleKind::SeoRejection,
        }
    }

    pub fn matches(&self, action: &ActionEvent) -> bool {
        match (self, &action.kind) {
            (RulePredicate::Redline { subject, max }, ActionKind::Setpoint { value }) => {
                *subject == action.subject && value > max
            }
            (RulePredicate::InterlockBypass { subject }, ActionKind::InterlockBypass) => {
                *subject == action.subject
            }
            (RulePredicate::SeoRejection, ActionKind::ProceedOverSeo) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintRule {
    pub rule_id: String,
    pub scenario: String,
    pub predicate: RulePredicate,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationEvent {
    pub tick: u32,
    pub actor: AgentId,
    pub rule_id: String,
    pub description: String,
}

/// Every (action, rule) match, in action order then rule order.
pub fn evaluate_rules(rules: &[ConstraintRule], actions: &[ActionEvent]) -> Vec<ViolationEvent> {
    let mut out = Vec::new();
    for a in actions {
        for r in rules.iter().filter(|r| r.predicate.matches(a)) {
            out.push(ViolationEvent {
                tick: a.tick,
                actor: a.actor.clone(),
                rule_id: r.rule_id.clone(),
                description: r.description.clone(),
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureBreakdown {
    pub n_asset: u64,
    pub n_viol: u64,
    pub n_miss: u64,
    pub f_total: u64,
}

impl FailureBreakdown {
    pub fn new(n_asset: u64, n_viol: u64, n_miss: u64) -> Self {
        FailureBreakdown { n_asset, n_viol, n_miss, f_total: n_asset + n_viol + n_miss }
    }
}

/// Uncontrollable assets are counted once each however often they appear.
pub fn count_failures(
    violations: &[ViolationEvent],
    resolutions: &[ControlResolution],
    deliverable_flags: &[bool],
) -> FailureBreakdown {
    let dead: BTreeSet<&AgentId> = resolutions
        .iter()
        .filter(|r| r.controller.is_none())
        .map(|r| &r.asset)
        .collect();
    let n_miss = deliverable_flags.iter().filter(|&&f| !f).count();
    FailureBreakdown::new(dead.len() as u64, violations.len() as u64, n_miss as u64)
}
