//! Propose–vote consensus with a quorum threshold over a bounded number of
//! rounds, plus the per-round diagnostics (vote entropy, top-1 margin) and
//! the deliverable checklist score.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::keyed_hash;
use crate::roster::AgentId;

pub const ENTROPY_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConsensusError {
    #[error("a consensus session needs at least one proposal")]
    NoProposals,
    #[error("a consensus session needs at least one voter")]
    NoVoters,
    #[error("duplicate proposal id `{0}`")]
    DuplicateProposal(String),
    #[error("consensus is disabled in this configuration")]
    Disabled,
    #[error("vote references proposal index {0}, out of range")]
    BadVote(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsensusConfig {
    pub rounds: u32,
    pub quorum: f64,
    pub enabled: bool,
}

impl Default for ConsensusConfig {
    fn default() -> Self {
        ConsensusConfig { rounds: 2, quorum: 0.6, enabled: false }
    }
}

impl ConsensusConfig {
    pub fn on() -> Self {
        ConsensusConfig { enabled: true, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposal {
    pub id: String,
    pub proposer: AgentId,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTally {
    pub round: u32,
    /// Vote share per proposal id.
    pub shares: BTreeMap<String, f64>,
    pub entropy_d: f64,
    pub margin_delta: f64,
}

impl RoundTally {
    pub fn max_share(&self) -> f64 {
        self.shares.values().copied().fold(0.0, f64::max)
    }

    /// Highest-share proposal id; ties go to the smallest id.
    pub fn leader(&self) -> Option<&str> {
        let max = self.max_share();
        self.shares
            .iter()
            .find(|(_, &s)| s == max)
            .map(|(id, _)| id.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusOutcome {
    pub winner: Option<Proposal>,
    pub r_star: u32,
    pub tallies: Vec<RoundTally>,
}

impl ConsensusOutcome {
    /// No quorum: the scenario leader has to decide.
    pub fn needs_fiat(&self) -> bool {
        self.winner.is_none()
    }
}

/// Normalised vote entropy `-(1/ln|P|) Σ s ln(s + ε)`, clamped to `[0, 1]`;
/// zero for a single proposal.
pub fn vote_entropy(shares: &[f64]) -> f64 {
    if shares.len() < 2 {
        return 0.0;
    }
    let h: f64 = shares.iter().map(|&s| s * (s + ENTROPY_EPS).ln()).sum();
    (-h / (shares.len() as f64).ln()).clamp(0.0, 1.0)
}

/// Top share minus second share (second is 0 with a single proposal).
pub fn top_margin(shares: &[f64]) -> f64 {
    let mut sorted = shares.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let first = sorted.first().copied().unwrap_or(0.0);
    let second = sorted.get(1).copied().unwrap_or(0.0);
    first - second
}

/// Tally one round. `votes[i]` is the proposal index chosen by voter `i`.
pub fn tally(proposals: &[Proposal], votes: &[usize], round: u32) -> Result<RoundTally, ConsensusError> {
    if proposals.is_empty() {
        return Err(ConsensusError::NoProposals);
    }
    if votes.is_empty() {
        return Err(ConsensusError::NoVoters);
    }
    let mut counts = vec![0usize; proposals.len()];
    for &v in votes {
        *counts.get_mut(v).ok_or(ConsensusError::BadVote(v))? += 1;
    }
    let n = votes.len() as f64;
    let share_vec: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let shares = proposals
        .iter()
        .zip(&share_vec)
        .map(|(p, &s)| (p.id.clone(), s))
        .collect();
    Ok(RoundTally {
        round,
        shares,
        entropy_d: vote_entropy(&share_vec),
        margin_delta: top_margin(&share_vec),
    })
}

/// How a scripted voter picks a proposal.
pub trait VotePreference {
    /// Returns the index into `proposals`. `prev` is the previous round's tally.
    fn choose(
        &mut self,
        voter: &AgentId,
        proposals: &[Proposal],
        round: u32,
        salt: u64,
        prev: Option<&RoundTally>,
    ) -> usize;
}

/// Ranks proposals by a keyed hash of (voter, proposal, seed, round salt),
/// plus optional fixed per-proposal biases and a pull toward the previous
/// round's shares.
#[derive(Debug, Clone, PartialEq)]
pub struct HashedPreference {
    pub seed: u64,
    pub bias: BTreeMap<String, f64>,
    pub momentum: f64,
}

impl HashedPreference {
    pub fn new(seed: u64) -> Self {
        HashedPreference { seed, bias: BTreeMap::new(), momentum: 0.5 }
    }

    pub fn with_bias(mut self, bias: BTreeMap<String, f64>) -> Self {
        self.bias = bias;
        self
    }
}

impl VotePreference for HashedPreference {
    fn choose(
        &mut self,
        voter: &AgentId,
        proposals: &[Proposal],
        _round: u32,
        salt: u64,
        prev: Option<&RoundTally>,
    ) -> usize {
        let score = |p: &Proposal| {
            let h = keyed_hash(&[voter.as_str(), &p.id], self.seed ^ salt);
            let noise = (h >> 11) as f64 / (1u64 << 53) as f64;
            let pull = prev.and_then(|t| t.shares.get(&p.id)).copied().unwrap_or(0.0);
            noise + self.bias.get(&p.id).copied().unwrap_or(0.0) + self.momentum * pull
        };
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, p) in proposals.iter().enumerate() {
            let s = score(p);
            if s > best_score || (s == best_score && p.id < proposals[best].id) {
                best = i;
                best_score = s;
            }
        }
        best
    }
}

/// Scripted ballots: `rounds[r-1][voter]`; the last round repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedVotes {
    pub rounds: Vec<Vec<usize>>,
}

impl FixedVotes {
    fn ballots(&self, round: u32, n: usize) -> Vec<usize> {
        let idx = (round as usize).saturating_sub(1).min(self.rounds.len().saturating_sub(1));
        let mut b = self.rounds.get(idx).cloned().unwrap_or_default();
        b.resize(n, 0);
        b
    }
}

/// Voting strategy for a session.
pub enum Ballots<'a> {
    Preference(&'a mut dyn VotePreference),
    Fixed(&'a FixedVotes),
}

fn validate(proposals: &[Proposal], voters: &[AgentId]) -> Result<(), ConsensusError> {
    if proposals.is_empty() {
        return Err(ConsensusError::NoProposals);
    }
    if voters.is_empty() {
        return Err(ConsensusError::NoVoters);
    }
    let mut seen = BTreeSet::new();
    for p in proposals {
        if !seen.insert(&p.id) {
            return Err(ConsensusError::DuplicateProposal(p.id.clone()));
        }
    }
    Ok(())
}

/// One voting round: every voter casts exactly one vote.
pub fn run_round<R: Rng + ?Sized>(
    proposals: &[Proposal],
    voters: &[AgentId],
    round: u32,
    rng: &mut R,
    ballots: &mut Ballots<'_>,
    prev: Option<&RoundTally>,
) -> Result<RoundTally, ConsensusError> {
    validate(proposals, voters)?;
    let salt: u64 = rng.random();
    let votes: Vec<usize> = match ballots {
        Ballots::Preference(pref) => voters
            .iter()
            .map(|v| pref.choose(v, proposals, round, salt, prev))
            .collect(),
        Ballots::Fixed(f) => f.ballots(round, voters.len()),
    };
    tally(proposals, &votes, round)
}

/// Runs rounds `1..=R` until some proposal reaches the quorum share.
/// `r_star = R + 1` and no winner when no round reaches quorum.
pub fn run_consensus<R: Rng + ?Sized>(
    cfg: &ConsensusConfig,
    proposals: &[Proposal],
    voters: &[AgentId],
    rng: &mut R,
    mut ballots: Ballots<'_>,
) -> Result<ConsensusOutcome, ConsensusError> {
    if !cfg.enabled {
        return Err(ConsensusError::Disabled);
    }
    validate(proposals, voters)?;
    let mut tallies: Vec<RoundTally> = Vec::new();
    for r in 1..=cfg.rounds {
        let t = run_round(proposals, voters, r, rng, &mut ballots, tallies.last())?;
        let reached = t.max_share() >= cfg.quorum;
        let leader = t.leader().map(str::to_string);
        tallies.push(t);
        if reached {
            let winner = proposals.iter().find(|p| Some(&p.id) == leader.as_ref()).cloned();
            return Ok(ConsensusOutcome { winner, r_star: r, tallies });
        }
    }
    Ok(ConsensusOutcome { winner: None, r_star: cfg.rounds + 1, tallies })
}

/// `r*` recomputed from a tally sequence for an arbitrary quorum.
pub fn time_to_consensus(tallies: &[RoundTally], quorum: f64, rounds: u32) -> u32 {
    tallies
        .iter()
        .find(|t| t.max_share() >= quorum)
        .map_or(rounds + 1, |t| t.round)
}

/// `Q = satisfied/J − λ·n_viol`. An empty checklist counts as fully satisfied.
pub fn checklist_score(flags: &[bool], n_viol: u64, lambda: f64) -> f64 {
    let frac = if flags.is_empty() {
        1.0
    } else {
        flags.iter().filter(|&&f| f).count() as f64 / flags.len() as f64
    };
    frac - lambda * n_viol as f64
}
