//! Scenario-aware agent memory: a bounded short-term window per agent, a
//! long-term store of distilled summaries, and an optional shared pool.
//!
//! Retrieval context for agent `i` is `short_i ++ summaries_i ++ shared`,
//! where the shared pool only contributes in [`MemoryMode::Shared`] and only
//! for pool members.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roster::AgentId;

pub const DEFAULT_WINDOW: usize = 8;
pub const DEFAULT_SUMMARY_BUDGET: usize = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MemoryError {
    #[error("cannot distill an empty turn sequence")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MemoryMode {
    Off,
    Basic,
    #[default]
    Shared,
}

impl fmt::Display for MemoryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MemoryMode::Off => "off",
            MemoryMode::Basic => "basic",
            MemoryMode::Shared => "shared",
        })
    }
}

impl FromStr for MemoryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(MemoryMode::Off),
            "basic" => Ok(MemoryMode::Basic),
            "shared" => Ok(MemoryMode::Shared),
            other => Err(format!("unknown memory mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub tick: u32,
    pub speaker: AgentId,
    pub text: String,
    pub scenario: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContextItem {
    Turn(TurnRecord),
    Summary(String),
    Shared(TurnRecord),
}

impl ContextItem {
    pub fn text(&self) -> &str {
        match self {
            ContextItem::Turn(t) | ContextItem::Shared(t) => &t.text,
            ContextItem::Summary(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryState {
    pub k: usize,
    pub budget: usize,
    pub short: BTreeMap<AgentId, VecDeque<TurnRecord>>,
    pub long: BTreeMap<AgentId, Vec<String>>,
    pub shared: Vec<TurnRecord>,
    /// Pool members; `None` admits everyone.
    pub shared_members: Option<BTreeSet<AgentId>>,
    pending: BTreeMap<AgentId, Vec<TurnRecord>>,
}

impl Default for MemoryState {
    fn default() -> Self {
        MemoryState::new(DEFAULT_WINDOW, DEFAULT_SUMMARY_BUDGET)
    }
}

impl MemoryState {
    pub fn new(k: usize, budget: usize) -> Self {
        MemoryState {
            k: k.max(1),
            budget,
            short: BTreeMap::new(),
            long: BTreeMap::new(),
            shared: Vec::new(),
            shared_members: None,
            pending: BTreeMap::new(),
        }
    }

    pub fn with_shared_members(mut self, members: impl IntoIterator<Item = AgentId>) -> Self {
        self.shared_members = Some(members.into_iter().collect());
        self
    }

    pub fn is_shared_member(&self, agent: &AgentId) -> bool {
        self.shared_members.as_ref().is_none_or(|m| m.contains(agent))
    }

    pub fn is_empty(&self) -> bool {
        self.short.values().all(VecDeque::is_empty)
            && self.long.values().all(Vec::is_empty)
            && self.shared.is_empty()
    }

    /// Records a turn in the speaker's buffers (and the shared pool in
    /// shared mode).
    pub fn append_turn(&mut self, mode: MemoryMode, turn: TurnRecord) {
        if mode == MemoryMode::Off {
            return;
        }
        if mode == MemoryMode::Shared && self.is_shared_member(&turn.speaker) {
            self.shared.push(turn.clone());
        }
        let speaker = turn.speaker.clone();
        self.append_to(mode, &speaker, turn);
    }

    /// Records a turn in `agent`'s private buffers only (e.g. an inbox message).
    pub fn append_to(&mut self, mode: MemoryMode, agent: &AgentId, turn: TurnRecord) {
        if mode == MemoryMode::Off {
            return;
        }
        let window = self.short.entry(agent.clone()).or_default();
        window.push_back(turn.clone());
        while window.len() > self.k {
            window.pop_front();
        }
        let pending = self.pending.entry(agent.clone()).or_default();
        pending.push(turn);
        if pending.len() >= self.k {
            let batch = std::mem::take(pending);
            let summary = distill_with_budget(&batch, self.budget).expect("batch is non-empty");
            self.long.entry(agent.clone()).or_default().push(summary);
        }
    }

    pub fn build_context(&self, mode: MemoryMode, agent: &AgentId) -> Vec<ContextItem> {
        if mode == MemoryMode::Off {
            return Vec::new();
        }
        let mut ctx: Vec<ContextItem> = self
            .short
            .get(agent)
            .into_iter()
            .flatten()
            .cloned()
            .map(ContextItem::Turn)
            .collect();
        ctx.extend(
            self.long
                .get(agent)
                .into_iter()
                .flatten()
                .cloned()
                .map(ContextItem::Summary),
        );
        if mode == MemoryMode::Shared && self.is_shared_member(agent) {
            ctx.extend(self.shared.iter().cloned().map(ContextItem::Shared));
        }
        ctx
    }
}

fn first_clause(text: &str) -> &str {
    let end = text.find([',', ';', '.', '\n']).unwrap_or(text.len());
    text[..end].trim()
}

fn truncate_chars(s: &mut String, budget: usize) {
    if let Some((idx, _)) = s.char_indices().nth(budget) {
        s.truncate(idx);
    }
}

/// Extractive summary with the default 512-character budget.
pub fn distill(turns: &[TurnRecord]) -> Result<String, MemoryError> {
    distill_with_budget(turns, DEFAULT_SUMMARY_BUDGET)
}

/// `<scenario> [speakers] clause | clause | ...`, cut to `budget` characters.
pub fn distill_with_budget(turns: &[TurnRecord], budget: usize) -> Result<String, MemoryError> {
    let first = turns.first().ok_or(MemoryError::EmptyInput)?;
    let speakers: BTreeSet<&str> = turns.iter().map(|t| t.speaker.as_str()).collect();
    let clauses: Vec<&str> = turns.iter().map(|t| first_clause(&t.text)).collect();
    let mut out = format!(
        "{} [{}] {}",
        first.scenario,
        speakers.into_iter().collect::<Vec<_>>().join(","),
        clauses.join(" | ")
    );
    truncate_chars(&mut out, budget);
    Ok(out)
}
