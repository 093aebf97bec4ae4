//! The discrete-step simulation core.
//!
//! Within a tick, active agents act in roster order. An agent is active when
//! it has playbook steps at the tick or messages waiting in its inbox.
//! Messages sent at tick `t` are read at `t + 1`. Every behavior invocation,
//! hub forward, translation, proposal and vote is one logged decision step.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::consensus::{run_consensus, Ballots, ConsensusConfig, ConsensusError, HashedPreference, Proposal, RoundTally};
use crate::failures::{evaluate_rules, ActionEvent, ActionKind, FailureBreakdown, ViolationEvent};
use crate::handover::{resolve_controller, sample_availability, ControlResolution};
use crate::leadership::{resolve_group, select_leader, LeadershipError, LeadershipMode, ScenarioPhase};
use crate::memory::{ContextItem, MemoryMode, MemoryState, TurnRecord};
use crate::metrics::{compute_ampi, AmpiConfig, MetricsError, RunMetrics};
use crate::protocols::{default_lexicons, translate, LexiconSet, ProtocolError, ProtocolMode, TranslationRecord, TRANSLATOR};
use crate::rng::{Substreams, AVAILABILITY, PLAYBOOK, VOTING};
use crate::roster::{build_default_roster, AgentId, Roster, RosterError};
use crate::routing::{HierarchyGraph, MessageEnvelope, PathKind, RouteContext, Router, RoutingError, RoutingPolicy, Whitelist};
use crate::scenarios::{check_deliverables, Action, PlaybookStep, Report, ReportSection, ScenarioCatalog, ScenarioError, ScenarioScript, Target};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Leadership(#[from] LeadershipError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Roster(#[from] RosterError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Consensus(#[from] ConsensusError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("target {0:?} does not resolve to a roster agent")]
    Unresolved(Target),
    #[error("event log is inconsistent with the reported metrics: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub scenario: String,
    pub routing: RoutingPolicy,
    pub leadership: LeadershipMode,
    pub switching: bool,
    pub memory: MemoryMode,
    pub consensus: ConsensusConfig,
    pub protocols: ProtocolMode,
    pub outage_p: f64,
    pub seed: u64,
    pub ampi: AmpiConfig,
    /// Executes staged unsafe actions and misreads.
    pub faults: bool,
    /// Disables whitelist shortcuts during emergency-phase scenarios.
    pub gate_shortcuts_in_emergency: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: "DailyOperations".to_string(),
            routing: RoutingPolicy::Strict,
            leadership: LeadershipMode::Functional,
            switching: true,
            memory: MemoryMode::Shared,
            consensus: ConsensusConfig::default(),
            protocols: ProtocolMode::Off,
            outage_p: 0.05,
            seed: 42,
            ampi: AmpiConfig::default(),
            faults: false,
            gate_shortcuts_in_emergency: false,
        }
    }
}

impl RunConfig {
    pub fn for_scenario(scenario: &str) -> Self {
        RunConfig { scenario: scenario.to_string(), ..RunConfig::default() }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if !(0.0..=1.0).contains(&self.outage_p) {
            return Err(EngineError::Config(format!("outage rate {} outside [0, 1]", self.outage_p)));
        }
        if self.consensus.rounds == 0 {
            return Err(EngineError::Config("consensus rounds must be positive".into()));
        }
        if !(self.consensus.quorum > 0.0 && self.consensus.quorum <= 1.0) {
            return Err(EngineError::Config(format!("quorum {} outside (0, 1]", self.consensus.quorum)));
        }
        self.ampi.validate()?;
        Ok(())
    }
}

/// Immutable inputs shared by every run.
#[derive(Debug, Clone)]
pub struct World {
    pub roster: Roster,
    pub graph: HierarchyGraph,
    pub whitelist: Whitelist,
    pub lexicons: LexiconSet,
    pub catalog: ScenarioCatalog,
}

impl Default for World {
    fn default() -> Self {
        World::new(build_default_roster(), Whitelist::default_table(), default_lexicons(), ScenarioCatalog::builtin())
    }
}

impl World {
    pub fn new(roster: Roster, whitelist: Whitelist, lexicons: LexiconSet, catalog: ScenarioCatalog) -> Self {
        let graph = HierarchyGraph::build(&roster);
        World { roster, graph, whitelist, lexicons, catalog }
    }

    pub fn with_roster(roster: Roster) -> Self {
        World { roster, ..World::default() }.rebuilt()
    }

    fn rebuilt(mut self) -> Self {
        self.graph = HierarchyGraph::build(&self.roster);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionReason {
    Scheduled,
    Forward,
    Translate,
    Reply,
    Propose,
    Vote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Dialogue,
    Command,
    Relay,
    Ballot,
    Fiat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    RunHeader {
        scenario: String,
        seed: u64,
        routing: RoutingPolicy,
        leadership: LeadershipMode,
        switching: bool,
        memory: MemoryMode,
        consensus: ConsensusConfig,
        protocols: ProtocolMode,
        outage_p: f64,
        faults: bool,
        leader: AgentId,
    },
    Availability {
        offline: Vec<AgentId>,
    },
    Control {
        asset: AgentId,
        controller: Option<AgentId>,
        switched: bool,
    },
    Decision {
        tick: u32,
        agent: AgentId,
        reason: DecisionReason,
    },
    Message {
        tick: u32,
        msg_id: u64,
        sender: AgentId,
        recipient: AgentId,
        channel: Channel,
        kind: PathKind,
        hub: Option<AgentId>,
        hops: u64,
        cross_layer: bool,
        cross_group: bool,
        payload: String,
    },
    Translation {
        tick: u32,
        msg_id: u64,
        record: TranslationRecord,
    },
    CommandIssued {
        tick: u32,
        controller: AgentId,
        asset: AgentId,
        setpoint: f64,
    },
    CommandDropped {
        tick: u32,
        asset: AgentId,
    },
    Action {
        action: ActionEvent,
    },
    Violation {
        violation: ViolationEvent,
    },
    ConsensusRound {
        tick: u32,
        tally: RoundTally,
    },
    ConsensusOutcome {
        tick: u32,
        winner: Option<String>,
        r_star: u32,
    },
    MemoryRecall {
        tick: u32,
        agent: AgentId,
        key: String,
        hit: bool,
    },
    SectionEmitted {
        tick: u32,
        section: String,
        complete: bool,
    },
    Deliverables {
        flags: Vec<bool>,
    },
}

/// One line of the run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub line: u64,
    #[serde(flatten)]
    pub event: Event,
}

/// A message waiting in an inbox.
#[derive(Debug, Clone, PartialEq)]
pub struct Delivered {
    pub from: AgentId,
    pub text: String,
    pub misread: Option<crate::scenarios::Misread>,
}

/// What a behavior sees when invoked.
pub struct DecisionInput<'a> {
    pub tick: u32,
    pub agent: &'a AgentId,
    pub leader: &'a AgentId,
    pub scenario: &'a ScenarioScript,
    pub inbox: &'a [Delivered],
    pub context: &'a [ContextItem],
    /// Playbook steps assigned to this agent at this tick.
    pub steps: &'a [&'a PlaybookStep],
}

/// Decision contract for an agent.
pub trait AgentBehavior {
    fn decide(&mut self, input: &DecisionInput<'_>) -> Vec<Action>;
}

/// Reference behavior: performs the playbook verbatim.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScriptedBehavior;

impl AgentBehavior for ScriptedBehavior {
    fn decide(&mut self, input: &DecisionInput<'_>) -> Vec<Action> {
        input.steps.iter().map(|s| s.action.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub config: RunConfig,
    pub leader: AgentId,
    pub metrics: RunMetrics,
    pub breakdown: FailureBreakdown,
    pub ampi: f64,
    pub log: Vec<LogRecord>,
    pub report: Report,
    pub deliverable_flags: Vec<bool>,
    pub resolutions: Vec<ControlResolution>,
    /// Host time; excluded from every comparison.
    pub wall_clock_secs: f64,
}

impl RunResult {
    pub fn log_jsonl(&self) -> String {
        log_jsonl(&self.log)
    }

    /// SHA-256 of the line-delimited log.
    pub fn digest(&self) -> String {
        digest(&self.log)
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.log.iter().map(|r| &r.event)
    }
}

pub fn log_jsonl(log: &[LogRecord]) -> String {
    let mut out = String::new();
    for r in log {
        out.push_str(&serde_json::to_string(r).expect("log records serialize"));
        out.push('\n');
    }
    out
}

pub fn digest(log: &[LogRecord]) -> String {
    hex::encode(Sha256::digest(log_jsonl(log).as_bytes()))
}

/// Rebuilds the metrics from the log alone.
pub fn recount_log(log: &[LogRecord]) -> Result<RunMetrics, EngineError> {
    for (i, r) in log.iter().enumerate() {
        if r.line != i as u64 {
            return Err(EngineError::Inconsistent(format!("record {i} carries line number {}", r.line)));
        }
    }
    let mut m = RunMetrics::default();
    let mut dead = BTreeSet::new();
    let (mut n_viol, mut n_miss) = (0, 0);
    for r in log {
        match &r.event {
            Event::Decision { .. } => m.time_t += 1,
            Event::Message { hops, cross_layer, .. } => {
                m.msgs_m += hops;
                if *cross_layer {
                    m.n_cross += hops;
                }
            }
            Event::Control { asset, controller, switched } => {
                if controller.is_none() {
                    dead.insert(asset.clone());
                }
                if *switched {
                    m.switches_s += 1;
                }
            }
            Event::Violation { .. } => n_viol += 1,
            Event::Deliverables { flags } => n_miss += flags.iter().filter(|f| !**f).count() as u64,
            _ => {}
        }
    }
    m.cross_c = if m.msgs_m == 0 { 0.0 } else { m.n_cross as f64 / m.msgs_m as f64 };
    m.failures = FailureBreakdown::new(dead.len() as u64, n_viol, n_miss);
    Ok(m)
}

/// Recounts and checks against the reported metrics.
pub fn recount(result: &RunResult) -> Result<RunMetrics, EngineError> {
    let m = recount_log(&result.log)?;
    if m != result.metrics {
        return Err(EngineError::Inconsistent(format!("recounted {m:?}, reported {:?}", result.metrics)));
    }
    Ok(m)
}

/// Runs one scenario against the default whitelist, lexicons and catalog.
pub fn run_scenario(cfg: &RunConfig, roster: &Roster) -> Result<RunResult, EngineError> {
    let world = World::with_roster(roster.clone());
    run_in(&world, cfg)
}

/// Runs one scenario with the scripted reference behavior.
pub fn run_in(world: &World, cfg: &RunConfig) -> Result<RunResult, EngineError> {
    run_with_behavior(world, cfg, &mut ScriptedBehavior)
}

pub fn run_with_behavior(world: &World, cfg: &RunConfig, behavior: &mut dyn AgentBehavior) -> Result<RunResult, EngineError> {
    let started = Instant::now();
    cfg.validate()?;
    let script = world.catalog.get(&cfg.scenario)?;
    let leader = select_leader(script, cfg.leadership, &world.roster)?;
    let mut sim = Sim::new(world, cfg, script, leader)?;
    sim.run(behavior)?;
    let mut result = sim.finish()?;
    result.wall_clock_secs = started.elapsed().as_secs_f64();
    Ok(result)
}

struct Sim<'w> {
    world: &'w World,
    cfg: &'w RunConfig,
    script: &'w ScenarioScript,
    leader: AgentId,
    log: Vec<LogRecord>,
    router: Router<'w>,
    memory: MemoryState,
    resolutions: Vec<ControlResolution>,
    next_inbox: BTreeMap<AgentId, Vec<Delivered>>,
    report: Report,
    playbook_rng: ChaCha8Rng,
    voting_rng: ChaCha8Rng,
}

impl<'w> Sim<'w> {
    fn new(world: &'w World, cfg: &'w RunConfig, script: &'w ScenarioScript, leader: AgentId) -> Result<Self, EngineError> {
        let streams = Substreams::new(cfg.seed);
        let avail = sample_availability(&world.roster, cfg.outage_p, &mut streams.stream(AVAILABILITY));
        let mut resolutions = Vec::with_capacity(script.assets.len());
        for asset in &script.assets {
            resolutions.push(resolve_controller(world.roster.ownership_of(asset)?, &avail, cfg.switching));
        }
        let mut ctx = RouteContext::new(&world.roster, &world.graph, &world.whitelist, cfg.routing);
        ctx.emergency = script.phase == ScenarioPhase::Emergency;
        ctx.gate_shortcuts_in_emergency = cfg.gate_shortcuts_in_emergency;
        let mut sim = Sim {
            world,
            cfg,
            script,
            leader: leader.clone(),
            log: Vec::new(),
            router: Router::new(ctx),
            memory: MemoryState::default(),
            resolutions,
            next_inbox: BTreeMap::new(),
            report: Report::default(),
            playbook_rng: streams.stream(PLAYBOOK),
            voting_rng: streams.stream(VOTING),
        };
        sim.emit(Event::RunHeader {
            scenario: script.id.clone(),
            seed: cfg.seed,
            routing: cfg.routing,
            leadership: cfg.leadership,
            switching: cfg.switching,
            memory: cfg.memory,
            consensus: cfg.consensus,
            protocols: cfg.protocols,
            outage_p: cfg.outage_p,
            faults: cfg.faults,
            leader,
        });
        sim.emit(Event::Availability { offline: avail.offline() });
        for r in sim.resolutions.clone() {
            sim.emit(Event::Control { asset: r.asset, controller: r.controller, switched: r.was_switch });
        }
        Ok(sim)
    }

    fn emit(&mut self, event: Event) {
        let line = self.log.len() as u64;
        self.log.push(LogRecord { line, event });
    }

    fn decision(&mut self, tick: u32, agent: &AgentId, reason: DecisionReason) {
        self.emit(Event::Decision { tick, agent: agent.clone(), reason });
    }

    fn controller_of(&self, asset: &AgentId) -> Result<Option<AgentId>, EngineError> {
        if let Some(r) = self.resolutions.iter().find(|r| &r.asset == asset) {
            return Ok(r.controller.clone());
        }
        let rec = self.world.roster.ownership_of(asset)?;
        Ok(Some(rec.primary.clone()))
    }

    fn resolve(&self, target: &Target) -> Result<Option<AgentId>, EngineError> {
        match target {
            Target::Leader => Ok(Some(self.leader.clone())),
            Target::Group(g) => resolve_group(&self.world.roster, g)
                .map(Some)
                .ok_or_else(|| EngineError::Unresolved(target.clone())),
            Target::Agent(id) if self.world.roster.contains(id) => Ok(Some(id.clone())),
            Target::Agent(_) => Err(EngineError::Unresolved(target.clone())),
            Target::Controller(asset) => self.controller_of(asset),
        }
    }

    fn group(&self, id: &AgentId) -> String {
        self.world.roster.group_of(id).unwrap_or_default().to_string()
    }

    fn log_envelope(&mut self, env: &MessageEnvelope, channel: Channel, cross_group: bool) {
        self.emit(Event::Message {
            tick: env.tick,
            msg_id: env.seq,
            sender: env.sender.clone(),
            recipient: env.recipient.clone(),
            channel,
            kind: env.path.kind,
            hub: env.path.hub.clone(),
            hops: env.path.hop_count(),
            cross_layer: env.is_cross_layer,
            cross_group,
            payload: env.payload.clone(),
        });
        if let Some(hub) = env.path.hub.clone() {
            self.decision(env.tick, &hub, DecisionReason::Forward);
        }
    }

    fn turn(&self, tick: u32, speaker: &AgentId, text: &str) -> TurnRecord {
        TurnRecord { tick, speaker: speaker.clone(), text: text.to_string(), scenario: self.script.id.clone() }
    }

    /// Routed dialogue message, translated when dialects are in play.
    fn exchange(
        &mut self,
        tick: u32,
        sender: &AgentId,
        recipient: &AgentId,
        text: String,
        misread: Option<crate::scenarios::Misread>,
    ) -> Result<(), EngineError> {
        let env = self.router.send(sender, recipient, text.clone(), tick)?;
        let (gs, gr) = (self.group(sender), self.group(recipient));
        let cross_group = gs != gr;
        self.log_envelope(&env, Channel::Dialogue, cross_group);
        let turn = self.turn(tick, sender, &text);
        self.memory.append_turn(self.cfg.memory, turn);
        let mut delivered = Delivered { from: sender.clone(), text, misread: None };
        if cross_group {
            match self.cfg.protocols {
                ProtocolMode::Off => delivered.misread = misread,
                ProtocolMode::Hetero => {
                    let src = self.world.lexicons.for_group(&gs);
                    let dst = self.world.lexicons.for_group(&gr);
                    let (translated, record) = translate(&delivered.text, &src, &dst)?;
                    let translator = AgentId::from(TRANSLATOR);
                    self.decision(tick, &translator, DecisionReason::Translate);
                    self.emit(Event::Translation { tick, msg_id: env.seq, record });
                    if *recipient != translator {
                        let relay = self.router.relay(&translator, recipient, translated.clone(), tick);
                        self.log_envelope(&relay, Channel::Relay, false);
                    }
                    delivered.text = translated;
                }
            }
        }
        self.next_inbox.entry(recipient.clone()).or_default().push(delivered);
        Ok(())
    }

    fn record_action(&mut self, action: ActionEvent) {
        let violations: Vec<ViolationEvent> = evaluate_rules(&self.script.constraints, std::slice::from_ref(&action));
        self.emit(Event::Action { action });
        for v in violations {
            self.emit(Event::Violation { violation: v });
        }
    }

    fn run(&mut self, behavior: &mut dyn AgentBehavior) -> Result<(), EngineError> {
        let last = self.script.last_tick();
        let mut tick = 0;
        while tick <= last || !self.next_inbox.is_empty() {
            self.step(tick, behavior)?;
            tick += 1;
        }
        Ok(())
    }

    fn step(&mut self, tick: u32, behavior: &mut dyn AgentBehavior) -> Result<(), EngineError> {
        let script = self.script;
        let inbox = std::mem::take(&mut self.next_inbox);
        let mut assigned: BTreeMap<AgentId, Vec<&PlaybookStep>> = BTreeMap::new();
        for step in script.playbook.iter().filter(|s| s.tick == tick) {
            match self.resolve(&step.actor)? {
                Some(actor) => assigned.entry(actor).or_default().push(step),
                None => {
                    if let Action::Command { asset, .. } = &step.action {
                        self.emit(Event::CommandDropped { tick, asset: asset.clone() });
                    }
                }
            }
        }
        let hook_now = self.cfg.consensus.enabled && script.consensus_hook.as_ref().is_some_and(|h| h.tick == tick);
        let mut active: BTreeSet<AgentId> = assigned.keys().cloned().collect();
        active.extend(inbox.keys().cloned());
        if hook_now {
            active.insert(self.leader.clone());
        }
        let roster = &self.world.roster;
        let mut order: Vec<AgentId> = active.into_iter().collect();
        order.sort_by_key(|a| roster.position(a).unwrap_or(usize::MAX));

        for agent in order {
            self.decision(tick, &agent, DecisionReason::Scheduled);
            let messages = inbox.get(&agent).cloned().unwrap_or_default();
            for m in &messages {
                let turn = self.turn(tick, &m.from, &m.text);
                self.memory.append_to(self.cfg.memory, &agent, turn);
                if let (Some(mr), true) = (&m.misread, self.cfg.faults) {
                    self.record_action(ActionEvent {
                        tick,
                        actor: agent.clone(),
                        subject: mr.subject.clone(),
                        kind: ActionKind::Setpoint { value: mr.setpoint },
                    });
                }
            }
            let steps = assigned.remove(&agent).unwrap_or_default();
            let context = self.memory.build_context(self.cfg.memory, &agent);
            let actions = behavior.decide(&DecisionInput {
                tick,
                agent: &agent,
                leader: &self.leader,
                scenario: script,
                inbox: &messages,
                context: &context,
                steps: &steps,
            });
            for action in actions {
                self.execute(tick, &agent, action)?;
            }
            if hook_now && agent == self.leader {
                self.consensus(tick)?;
            }
        }
        Ok(())
    }

    fn execute(&mut self, tick: u32, actor: &AgentId, action: Action) -> Result<(), EngineError> {
        match action {
            Action::Send { to, template, misread } => {
                let Some(to) = self.resolve(&to)? else { return Ok(()) };
                if to == *actor {
                    return Ok(());
                }
                let text = self.world.lexicons.for_group(&self.group(actor)).render(&template);
                self.exchange(tick, actor, &to, text, misread)?;
            }
            Action::Command { asset, setpoint } => {
                let reading: f64 = setpoint * (1.0 + (self.playbook_rng.random::<f64>() - 0.5) * 0.02);
                let env = self.router.send(actor, &asset, format!("setpoint {setpoint} (reading {reading:.2})"), tick)?;
                self.log_envelope(&env, Channel::Command, true);
                self.next_inbox.entry(asset.clone()).or_default().push(Delivered {
                    from: actor.clone(),
                    text: env.payload.clone(),
                    misread: None,
                });
                self.emit(Event::CommandIssued { tick, controller: actor.clone(), asset: asset.clone(), setpoint });
                self.record_action(ActionEvent {
                    tick,
                    actor: actor.clone(),
                    subject: asset.to_string(),
                    kind: ActionKind::Setpoint { value: setpoint },
                });
            }
            Action::Recall { key, source } => {
                let hit = self
                    .memory
                    .build_context(self.cfg.memory, actor)
                    .iter()
                    .any(|item| item.text().contains(&key));
                self.emit(Event::MemoryRecall { tick, agent: actor.clone(), key: key.clone(), hit });
                if !hit {
                    if let Some(source) = self.resolve(&source)? {
                        if source != *actor {
                            self.exchange(tick, actor, &source, format!("re-ask {key}"), None)?;
                            self.decision(tick, &source, DecisionReason::Reply);
                            self.exchange(tick, &source, actor, format!("{key} resent"), None)?;
                        }
                    }
                }
            }
            Action::Emit { section, fields, needs_asset } => {
                let blind = match &needs_asset {
                    Some(a) => self.controller_of(a)?.is_none(),
                    None => false,
                };
                let fields: BTreeMap<String, String> = fields
                    .into_iter()
                    .map(|(k, v)| {
                        let v = if blind { String::new() } else { v.replace("{leader}", self.leader.as_str()) };
                        (k, v)
                    })
                    .collect();
                self.emit(Event::SectionEmitted { tick, section: section.clone(), complete: !blind });
                self.report.upsert(ReportSection { tag: section, fields });
            }
            Action::Fault { subject, kind } => {
                if self.cfg.faults {
                    self.record_action(ActionEvent { tick, actor: actor.clone(), subject, kind });
                }
            }
        }
        Ok(())
    }

    fn consensus(&mut self, tick: u32) -> Result<(), EngineError> {
        let hook = self.script.consensus_hook.as_ref().expect("hook checked by caller");
        let leader = self.leader.clone();
        let mut proposals = Vec::with_capacity(hook.proposals.len());
        for p in &hook.proposals {
            let proposer = self.resolve(&p.proposer)?.ok_or_else(|| EngineError::Unresolved(p.proposer.clone()))?;
            if proposer != leader {
                self.decision(tick, &proposer, DecisionReason::Propose);
                let env = self.router.send_hierarchical(&proposer, &leader, format!("propose {}: {}", p.id, p.text), tick)?;
                let cross_group = self.group(&proposer) != self.group(&leader);
                self.log_envelope(&env, Channel::Ballot, cross_group);
            }
            proposals.push(Proposal { id: p.id.clone(), proposer, text: p.text.clone() });
        }
        let mut voters: Vec<AgentId> = Vec::new();
        for v in &hook.voters {
            let v = self.resolve(v)?.ok_or_else(|| EngineError::Unresolved(v.clone()))?;
            if !voters.contains(&v) {
                voters.push(v);
            }
        }
        let mut pref = HashedPreference::new(self.cfg.seed).with_bias(hook.bias.clone());
        let outcome = run_consensus(&self.cfg.consensus, &proposals, &voters, &mut self.voting_rng, Ballots::Preference(&mut pref))?;
        for tally in &outcome.tallies {
            for v in voters.iter().filter(|v| **v != leader) {
                self.decision(tick, v, DecisionReason::Vote);
                let choice = format!("vote round {}", tally.round);
                let env = self.router.send_hierarchical(v, &leader, choice, tick)?;
                let cross_group = self.group(v) != self.group(&leader);
                self.log_envelope(&env, Channel::Ballot, cross_group);
            }
            self.emit(Event::ConsensusRound { tick, tally: tally.clone() });
        }
        let winner = outcome.winner.as_ref().map(|p| p.id.clone());
        self.emit(Event::ConsensusOutcome { tick, winner: winner.clone(), r_star: outcome.r_star });
        if winner.is_none() {
            if let Some(first) = voters.iter().find(|v| **v != leader).cloned() {
                let env = self.router.send_hierarchical(&leader, &first, format!("fiat on {}", hook.topic), tick)?;
                let cross_group = self.group(&first) != self.group(&leader);
                self.log_envelope(&env, Channel::Fiat, cross_group);
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<RunResult, EngineError> {
        let flags = check_deliverables(&self.report, self.script);
        self.emit(Event::Deliverables { flags: flags.clone() });
        let metrics = recount_log(&self.log)?;
        let ampi = compute_ampi(&metrics.point(), &self.cfg.ampi)?;
        Ok(RunResult {
            config: self.cfg.clone(),
            leader: self.leader,
            metrics,
            breakdown: metrics.failures,
            ampi,
            log: self.log,
            report: self.report,
            deliverable_flags: flags,
            resolutions: self.resolutions,
            wall_clock_secs: 0.0,
        })
    }
}

/// Convenience for tests and benches: default world, scripted behavior.
pub fn run_default(cfg: &RunConfig) -> Result<RunResult, EngineError> {
    run_in(&World::default(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::failures::count_failures;

    fn cfg(scenario: &str) -> RunConfig {
        RunConfig { outage_p: 0.0, ..RunConfig::for_scenario(scenario) }
    }

    #[test]
    fn science_strict_has_no_cross_layer_traffic() {
        let r = run_default(&cfg("ScienceExploration")).unwrap();
        assert_eq!(r.metrics.cross_c, 0.0);
        assert_eq!(r.leader, "GEO_01");
    }

    #[test]
    fn science_crosslayer_saves_hops() {
        let strict = run_default(&cfg("ScienceExploration")).unwrap();
        let cl = run_default(&RunConfig { routing: RoutingPolicy::CrossLayer, ..cfg("ScienceExploration") }).unwrap();
        assert!(cl.metrics.msgs_m < strict.metrics.msgs_m);
        assert!(cl.metrics.time_t < strict.metrics.time_t);
        assert!(cl.metrics.cross_c > 0.0);
    }

    #[test]
    fn deterministic_digest() {
        let c = RunConfig { seed: 42, outage_p: 0.2, ..RunConfig::default() };
        assert_eq!(run_default(&c).unwrap().digest(), run_default(&c).unwrap().digest());
    }

    #[test]
    fn recount_matches_and_detects_tampering() {
        let mut r = run_default(&RunConfig { outage_p: 0.3, seed: 5, ..RunConfig::default() }).unwrap();
        assert_eq!(recount(&r).unwrap(), r.metrics);
        let idx = r.log.iter().position(|l| matches!(l.event, Event::Decision { .. })).unwrap();
        r.log.remove(idx);
        assert!(matches!(recount(&r), Err(EngineError::Inconsistent(_))));
    }

    #[test]
    fn empty_log_is_all_zero() {
        assert_eq!(recount_log(&[]).unwrap(), RunMetrics::default());
    }

    #[test]
    fn effort_is_decision_count() {
        let r = run_default(&cfg("DailyOperations")).unwrap();
        let n = r.events().filter(|e| matches!(e, Event::Decision { .. })).count() as u64;
        assert_eq!(r.metrics.time_t, n);
    }

    #[test]
    fn breakdown_agrees_with_failure_counter() {
        for seed in 0..20 {
            let r = run_default(&RunConfig { outage_p: 0.3, seed, faults: true, ..RunConfig::default() }).unwrap();
            let violations: Vec<ViolationEvent> = r
                .events()
                .filter_map(|e| match e {
                    Event::Violation { violation } => Some(violation.clone()),
                    _ => None,
                })
                .collect();
            assert_eq!(count_failures(&violations, &r.resolutions, &r.deliverable_flags), r.breakdown);
        }
    }

    #[test]
    fn faults_produce_violations_and_hetero_neutralizes_misreads() {
        let base = RunConfig { faults: true, ..cfg("EmergencyResponse") };
        let off = run_default(&base).unwrap();
        let het = run_default(&RunConfig { protocols: ProtocolMode::Hetero, ..base.clone() }).unwrap();
        assert!(off.breakdown.n_viol > het.breakdown.n_viol);
        assert!(het.breakdown.n_viol >= 1);
        let clean = run_default(&cfg("EmergencyResponse")).unwrap();
        assert_eq!(clean.breakdown.n_viol, 0);
    }

    #[test]
    fn memory_modes_order_message_counts() {
        let m = |memory| run_default(&RunConfig { memory, ..cfg("DailyOperations") }).unwrap().metrics.msgs_m;
        let (off, basic, shared) = (m(MemoryMode::Off), m(MemoryMode::Basic), m(MemoryMode::Shared));
        assert!(off > basic && basic > shared, "{off} {basic} {shared}");
    }

    #[test]
    fn bad_config_rejected() {
        assert!(run_default(&RunConfig { outage_p: 1.5, ..RunConfig::default() }).is_err());
        assert!(run_default(&RunConfig::for_scenario("Nope")).is_err());
    }
}
