//! Hierarchical message routing with audited cross-layer shortcuts.
//!
//! The hierarchy `E_H` is derived from the roster:
//!
//! 1. `CMD_01` <-> `OPS_01`, `SEO_01`, `EARTH_01`
//! 2. `OPS_01` <-> the lead (lowest-numbered member) of every functional group
//! 3. group lead <-> every other member of the group
//! 4. primary and backup controllers <-> their asset
//!
//! A whitelist of directed group pairs adds shortcut edges `E_X(W)` under the
//! `CROSSLAYER` policy. Anything else is relayed through a hub (`OPS_01`, or
//! `CMD_01` when `OPS_01` is an endpoint or the run is in an emergency phase).

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path as FsPath;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roster::{AgentId, AgentKind, Layer, Roster};

pub const OPS_HUB: &str = "OPS_01";
pub const CMD_HUB: &str = "CMD_01";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RoutingError {
    #[error("cannot route a message from `{0}` to itself")]
    IdentityRoute(AgentId),
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("whitelist line {line}: {reason}")]
    WhitelistParse { line: usize, reason: String },
    #[error("failed to read whitelist: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RoutingPolicy {
    #[default]
    Strict,
    CrossLayer,
}

impl fmt::Display for RoutingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoutingPolicy::Strict => "STRICT",
            RoutingPolicy::CrossLayer => "CROSSLAYER",
        })
    }
}

impl FromStr for RoutingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(RoutingPolicy::Strict),
            "crosslayer" | "cross_layer" | "cross-layer" => Ok(RoutingPolicy::CrossLayer),
            other => Err(format!("unknown routing policy `{other}`")),
        }
    }
}

/// Directed group-level shortcut pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Whitelist {
    pairs: BTreeSet<(String, String)>,
}

impl Whitelist {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Default shortcut table: GEO->{AI, COM, LAB} and {BIO, LAB, COM, LSS,
    /// PWR, ISRU, AGRI, MNT}->AI.
    pub fn default_table() -> Self {
        let mut wl = Whitelist::empty();
        for dst in ["AI", "COM", "LAB"] {
            wl.insert("GEO", dst);
        }
        for src in ["BIO", "LAB", "COM", "LSS", "PWR", "ISRU", "AGRI", "MNT"] {
            wl.insert(src, "AI");
        }
        wl
    }

    /// Adds a pair; self-pairs are ignored. Returns whether the set changed.
    pub fn insert(&mut self, src: &str, dst: &str) -> bool {
        if src == dst {
            return false;
        }
        self.pairs.insert((src.to_string(), dst.to_string()))
    }

    pub fn allows(&self, src_group: &str, dst_group: &str) -> bool {
        src_group != dst_group
            && self
                .pairs
                .contains(&(src_group.to_string(), dst_group.to_string()))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Parses `SRC -> DST` lines. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, RoutingError> {
        let mut wl = Whitelist::empty();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: &str| RoutingError::WhitelistParse {
                line: i + 1,
                reason: reason.to_string(),
            };
            let (src, dst) = line.split_once("->").ok_or_else(|| err("expected `SRC -> DST`"))?;
            let (src, dst) = (src.trim(), dst.trim());
            if src.is_empty() || dst.is_empty() {
                return Err(err("empty group name"));
            }
            if src == dst {
                return Err(err("source and target group are identical"));
            }
            wl.insert(src, dst);
        }
        Ok(wl)
    }

    pub fn load(path: &FsPath) -> Result<Self, RoutingError> {
        let text = std::fs::read_to_string(path).map_err(|e| RoutingError::Io(e.to_string()))?;
        Whitelist::parse(&text)
    }

    pub fn to_text(&self) -> String {
        self.pairs.iter().map(|(a, b)| format!("{a} -> {b}\n")).collect()
    }
}

/// The chain-of-command edge set `E_H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyGraph {
    edges: BTreeSet<(AgentId, AgentId)>,
}

impl HierarchyGraph {
    pub fn build(roster: &Roster) -> Self {
        let mut edges = BTreeSet::new();
        let mut link = |a: &AgentId, b: &AgentId| {
            if a != b {
                edges.insert((a.clone(), b.clone()));
                edges.insert((b.clone(), a.clone()));
            }
        };

        let cmd = AgentId::from(CMD_HUB);
        let ops = AgentId::from(OPS_HUB);
        for top in [OPS_HUB, "SEO_01", "EARTH_01"] {
            let top = AgentId::from(top);
            if roster.contains(&cmd) && roster.contains(&top) {
                link(&cmd, &top);
            }
        }

        for group in roster.groups() {
            let members = roster.members_of(group);
            let Some(lead) = members.first() else { continue };
            if lead.kind != AgentKind::Human || lead.layer == Layer::StrategyGovernance {
                continue;
            }
            if roster.contains(&ops) {
                link(&ops, &lead.id);
            }
            for m in &members[1..] {
                link(&lead.id, &m.id);
            }
        }

        for rec in roster.ownership() {
            link(&rec.primary, &rec.asset);
            for b in &rec.backups {
                link(b, &rec.asset);
            }
        }
        HierarchyGraph { edges }
    }

    pub fn contains(&self, from: &AgentId, to: &AgentId) -> bool {
        self.edges.contains(&(from.clone(), to.clone()))
    }

    pub fn edges(&self) -> impl Iterator<Item = &(AgentId, AgentId)> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathKind {
    Direct,
    HubForwarded,
    /// Translator mediation hop; emitted by the protocols layer, never by `route`.
    TranslatorRelay,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hop {
    pub from: AgentId,
    pub to: AgentId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub hops: Vec<Hop>,
    pub kind: PathKind,
    pub hub: Option<AgentId>,
}

impl Path {
    fn direct(from: &AgentId, to: &AgentId) -> Self {
        Path {
            hops: vec![Hop { from: from.clone(), to: to.clone() }],
            kind: PathKind::Direct,
            hub: None,
        }
    }

    fn via(from: &AgentId, hub: AgentId, to: &AgentId) -> Self {
        Path {
            hops: vec![
                Hop { from: from.clone(), to: hub.clone() },
                Hop { from: hub.clone(), to: to.clone() },
            ],
            kind: PathKind::HubForwarded,
            hub: Some(hub),
        }
    }

    pub fn hop_count(&self) -> u64 {
        self.hops.len() as u64
    }
}

/// Everything `route` needs besides the endpoints.
#[derive(Debug, Clone, Copy)]
pub struct RouteContext<'a> {
    pub roster: &'a Roster,
    pub graph: &'a HierarchyGraph,
    pub whitelist: &'a Whitelist,
    pub policy: RoutingPolicy,
    /// Emergency phase: hub defaults to `CMD_01`.
    pub emergency: bool,
    /// When set, whitelist shortcuts are disabled during emergencies.
    pub gate_shortcuts_in_emergency: bool,
}

impl<'a> RouteContext<'a> {
    pub fn new(
        roster: &'a Roster,
        graph: &'a HierarchyGraph,
        whitelist: &'a Whitelist,
        policy: RoutingPolicy,
    ) -> Self {
        RouteContext {
            roster,
            graph,
            whitelist,
            policy,
            emergency: false,
            gate_shortcuts_in_emergency: false,
        }
    }

    fn shortcuts_active(&self) -> bool {
        self.policy == RoutingPolicy::CrossLayer
            && !(self.emergency && self.gate_shortcuts_in_emergency)
    }

    /// True when `(from, to)` is in `E_X(W)` and shortcuts are currently usable.
    pub fn is_shortcut(&self, from: &AgentId, to: &AgentId) -> bool {
        if !self.shortcuts_active() {
            return false;
        }
        match (self.roster.group_of(from), self.roster.group_of(to)) {
            (Some(g), Some(h)) => self.whitelist.allows(g, h),
            _ => false,
        }
    }

    fn hub_for(&self, sender: &AgentId, recipient: &AgentId) -> AgentId {
        let ops_endpoint = sender == OPS_HUB || recipient == OPS_HUB;
        let cmd_endpoint = sender == CMD_HUB || recipient == CMD_HUB;
        if (ops_endpoint || self.emergency) && !cmd_endpoint {
            AgentId::from(CMD_HUB)
        } else {
            AgentId::from(OPS_HUB)
        }
    }

    pub fn route(&self, sender: &AgentId, recipient: &AgentId) -> Result<Path, RoutingError> {
        if sender == recipient {
            return Err(RoutingError::IdentityRoute(sender.clone()));
        }
        for id in [sender, recipient] {
            if !self.roster.contains(id) {
                return Err(RoutingError::UnknownAgent(id.clone()));
            }
        }
        if self.graph.contains(sender, recipient) || self.is_shortcut(sender, recipient) {
            Ok(Path::direct(sender, recipient))
        } else {
            Ok(Path::via(sender, self.hub_for(sender, recipient), recipient))
        }
    }
}

/// Path function with the default hub rule.
pub fn route(
    roster: &Roster,
    graph: &HierarchyGraph,
    wl: &Whitelist,
    policy: RoutingPolicy,
    sender: &AgentId,
    recipient: &AgentId,
) -> Result<Path, RoutingError> {
    RouteContext::new(roster, graph, wl, policy).route(sender, recipient)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageEnvelope {
    pub seq: u64,
    pub tick: u32,
    pub sender: AgentId,
    pub recipient: AgentId,
    pub path: Path,
    pub payload: String,
    pub is_cross_layer: bool,
}

/// One line of the routing audit log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub seq: u64,
    pub tick: u32,
    pub sender: AgentId,
    pub recipient: AgentId,
    pub kind: PathKind,
    pub hub: Option<AgentId>,
    pub is_cross_layer: bool,
}

impl From<&MessageEnvelope> for AuditRecord {
    fn from(env: &MessageEnvelope) -> Self {
        AuditRecord {
            seq: env.seq,
            tick: env.tick,
            sender: env.sender.clone(),
            recipient: env.recipient.clone(),
            kind: env.path.kind,
            hub: env.path.hub.clone(),
            is_cross_layer: env.is_cross_layer,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrafficCounters {
    /// Delivered hops.
    pub n_msg: u64,
    /// Hops over whitelist shortcut edges.
    pub n_cross: u64,
    /// Delivered envelopes, regardless of hop count.
    pub n_envelopes: u64,
}

impl TrafficCounters {
    pub fn cross_layer_ratio(&self) -> f64 {
        cross_layer_ratio(self)
    }
}

pub fn deliver(mut counters: TrafficCounters, env: &MessageEnvelope) -> TrafficCounters {
    counters.n_msg += env.path.hop_count();
    counters.n_envelopes += 1;
    if env.is_cross_layer {
        counters.n_cross += 1;
    }
    counters
}

/// `n_cross / n_msg`, or 0 for an empty run.
pub fn cross_layer_ratio(counters: &TrafficCounters) -> f64 {
    if counters.n_msg == 0 {
        0.0
    } else {
        counters.n_cross as f64 / counters.n_msg as f64
    }
}

/// Per-run router: routes, counts and keeps the audit log.
#[derive(Debug)]
pub struct Router<'a> {
    ctx: RouteContext<'a>,
    counters: TrafficCounters,
    audit: Vec<MessageEnvelope>,
    next_seq: u64,
}

impl<'a> Router<'a> {
    pub fn new(ctx: RouteContext<'a>) -> Self {
        Router {
            ctx,
            counters: TrafficCounters::default(),
            audit: Vec::new(),
            next_seq: 0,
        }
    }

    pub fn context(&self) -> &RouteContext<'a> {
        &self.ctx
    }

    pub fn counters(&self) -> TrafficCounters {
        self.counters
    }

    pub fn audit_log(&self) -> &[MessageEnvelope] {
        &self.audit
    }

    fn push(&mut self, env: MessageEnvelope) -> MessageEnvelope {
        self.counters = deliver(self.counters, &env);
        self.next_seq += 1;
        self.audit.push(env.clone());
        env
    }

    /// Routes under the run policy and delivers.
    pub fn send(
        &mut self,
        sender: &AgentId,
        recipient: &AgentId,
        payload: impl Into<String>,
        tick: u32,
    ) -> Result<MessageEnvelope, RoutingError> {
        let path = self.ctx.route(sender, recipient)?;
        self.send_on(path, payload.into(), tick)
    }

    /// Routes over the hierarchy only, ignoring shortcuts. Used for consensus
    /// traffic, which is always leader-directed.
    pub fn send_hierarchical(
        &mut self,
        sender: &AgentId,
        recipient: &AgentId,
        payload: impl Into<String>,
        tick: u32,
    ) -> Result<MessageEnvelope, RoutingError> {
        let strict = RouteContext {
            policy: RoutingPolicy::Strict,
            ..self.ctx
        };
        let path = strict.route(sender, recipient)?;
        self.send_on(path, payload.into(), tick)
    }

    fn send_on(
        &mut self,
        path: Path,
        payload: String,
        tick: u32,
    ) -> Result<MessageEnvelope, RoutingError> {
        let first = &path.hops[0];
        let last = &path.hops[path.hops.len() - 1];
        let is_cross_layer =
            path.kind == PathKind::Direct && self.ctx.is_shortcut(&first.from, &first.to);
        let env = MessageEnvelope {
            seq: self.next_seq,
            tick,
            sender: first.from.clone(),
            recipient: last.to.clone(),
            path,
            payload,
            is_cross_layer,
        };
        Ok(self.push(env))
    }

    /// Records a translator mediation hop (one hop, never cross-layer).
    pub fn relay(
        &mut self,
        translator: &AgentId,
        recipient: &AgentId,
        payload: impl Into<String>,
        tick: u32,
    ) -> MessageEnvelope {
        let env = MessageEnvelope {
            seq: self.next_seq,
            tick,
            sender: translator.clone(),
            recipient: recipient.clone(),
            path: Path {
                hops: vec![Hop { from: translator.clone(), to: recipient.clone() }],
                kind: PathKind::TranslatorRelay,
                hub: None,
            },
            payload: payload.into(),
            is_cross_layer: false,
        };
        self.push(env)
    }

    /// Line-delimited JSON audit records.
    pub fn audit_jsonl(&self) -> String {
        let mut out = String::new();
        for env in &self.audit {
            out.push_str(&serde_json::to_string(&AuditRecord::from(env)).expect("audit record"));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roster::build_default_roster;

    fn id(s: &str) -> AgentId {
        AgentId::from(s)
    }

    #[test]
    fn hierarchy_edges() {
        let r = build_default_roster();
        let g = HierarchyGraph::build(&r);
        assert!(g.contains(&id("LSS_05"), &id("HAB_01")));
        assert!(g.contains(&id("HAB_01"), &id("LSS_05")));
        assert!(g.contains(&id("LSS_01"), &id("HAB_01")));
        assert!(g.contains(&id("CMD_01"), &id("OPS_01")));
        assert!(g.contains(&id("OPS_01"), &id("GEO_01")));
        assert!(g.contains(&id("GEO_01"), &id("GEO_03")));
        assert!(!g.contains(&id("GEO_01"), &id("AI_02")));
        assert!(!g.contains(&id("OPS_01"), &id("GEO_03")));
    }

    #[test]
    fn hierarchy_has_no_shortcut_edges() {
        let r = build_default_roster();
        let g = HierarchyGraph::build(&r);
        let wl = Whitelist::default_table();
        for (a, b) in g.edges() {
            let (ga, gb) = (r.group_of(a).unwrap(), r.group_of(b).unwrap());
            assert!(!wl.allows(ga, gb), "{a}->{b} is also a shortcut");
        }
    }

    #[test]
    fn route_examples() {
        let r = build_default_roster();
        let g = HierarchyGraph::build(&r);
        let wl = Whitelist::default_table();

        let p = route(&r, &g, &wl, RoutingPolicy::Strict, &id("GEO_01"), &id("AI_02")).unwrap();
        assert_eq!(p.kind, PathKind::HubForwarded);
        assert_eq!(p.hub, Some(id("OPS_01")));
        assert_eq!(p.hops[0].to, p.hops[1].from);

        let p = route(&r, &g, &wl, RoutingPolicy::CrossLayer, &id("GEO_01"), &id("AI_02")).unwrap();
        assert_eq!(p.kind, PathKind::Direct);

        let p = route(&r, &g, &wl, RoutingPolicy::Strict, &id("LSS_05"), &id("HAB_01")).unwrap();
        assert_eq!(p.kind, PathKind::Direct);

        // Shortcuts are directional: AI -> GEO is not whitelisted.
        let p = route(&r, &g, &wl, RoutingPolicy::CrossLayer, &id("AI_02"), &id("GEO_01")).unwrap();
        assert_eq!(p.kind, PathKind::HubForwarded);
        assert_eq!(p.hub, Some(id("OPS_01")));
    }

    #[test]
    fn hub_rules() {
        let r = build_default_roster();
        let g = HierarchyGraph::build(&r);
        let wl = Whitelist::default_table();
        let mut ctx = RouteContext::new(&r, &g, &wl, RoutingPolicy::Strict);
        // OPS_01 endpoint -> CMD_01 hub.
        let p = ctx.route(&id("OPS_01"), &id("GEO_03")).unwrap();
        assert_eq!(p.hub, Some(id("CMD_01")));
        // CMD_01 endpoint -> OPS_01 hub.
        let p = ctx.route(&id("CMD_01"), &id("GEO_03")).unwrap();
        assert_eq!(p.hub, Some(id("OPS_01")));
        ctx.emergency = true;
        let p = ctx.route(&id("GEO_03"), &id("MED_02")).unwrap();
        assert_eq!(p.hub, Some(id("CMD_01")));
        let p = ctx.route(&id("CMD_01"), &id("MED_02")).unwrap();
        assert_eq!(p.hub, Some(id("OPS_01")));
    }

    #[test]
    fn emergency_gate_disables_shortcuts() {
        let r = build_default_roster();
        let g = HierarchyGraph::build(&r);
        let wl = Whitelist::default_table();
        let mut ctx = RouteContext::new(&r, &g, &wl, RoutingPolicy::CrossLayer);
        ctx.emergency = true;
        assert_eq!(ctx.route(&id("GEO_01"), &id("AI_02")).unwrap().kind, PathKind::Direct);
        ctx.gate_shortcuts_in_emergency = true;
        assert_eq!(
            ctx.route(&id("GEO_01"), &id("AI_02")).unwrap().kind,
            PathKind::HubForwarded
        );
    }

    #[test]
    fn identity_and_unknown() {
        let r = build_default_roster();
        let g = HierarchyGraph::build(&r);
        let wl = Whitelist::default_table();
        assert_eq!(
            route(&r, &g, &wl, RoutingPolicy::Strict, &id("GEO_01"), &id("GEO_01")),
            Err(RoutingError::IdentityRoute(id("GEO_01")))
        );
        assert!(matches!(
            route(&r, &g, &wl, RoutingPolicy::Strict, &id("GEO_01"), &id("XX_01")),
            Err(RoutingError::UnknownAgent(_))
        ));
    }

    #[test]
    fn deliver_counts_hops() {
        let r = build_default_roster();
        let g = HierarchyGraph::build(&r);
        let wl = Whitelist::default_table();
        let mut router = Router::new(RouteContext::new(&r, &g, &wl, RoutingPolicy::CrossLayer));
        router.send(&id("GEO_01"), &id("AI_02"), "x", 0).unwrap();
        assert_eq!(router.counters(), TrafficCounters { n_msg: 1, n_cross: 1, n_envelopes: 1 });
        router.send(&id("AI_02"), &id("GEO_01"), "x", 0).unwrap();
        assert_eq!(router.counters(), TrafficCounters { n_msg: 3, n_cross: 1, n_envelopes: 2 });
        router.send(&id("LSS_05"), &id("HAB_01"), "x", 0).unwrap();
        assert_eq!(router.counters(), TrafficCounters { n_msg: 4, n_cross: 1, n_envelopes: 3 });
        router.send_hierarchical(&id("GEO_01"), &id("AI_02"), "x", 0).unwrap();
        assert_eq!(router.counters().n_cross, 1);
        router.relay(&id("COM_06"), &id("AI_02"), "x", 0);
        assert_eq!(router.counters().n_msg, 7);
        assert_eq!(router.audit_jsonl().lines().count(), 5);
    }

    #[test]
    fn ratio() {
        let c = TrafficCounters { n_msg: 5, n_cross: 1, n_envelopes: 5 };
        assert!((cross_layer_ratio(&c) - 0.2).abs() < 1e-12);
        assert_eq!(cross_layer_ratio(&TrafficCounters::default()), 0.0);
    }

    #[test]
    fn whitelist_parse() {
        let wl = Whitelist::parse("# shortcuts\nGEO -> AI\n\nBIO->AI  # note\n").unwrap();
        assert!(wl.allows("GEO", "AI"));
        assert!(wl.allows("BIO", "AI"));
        assert!(!wl.allows("AI", "GEO"));
        assert!(Whitelist::parse("GEO AI").is_err());
        assert!(Whitelist::parse("GEO -> GEO").is_err());
        let d = Whitelist::default_table();
        assert_eq!(d.len(), 11);
        assert_eq!(Whitelist::parse(&d.to_text()).unwrap(), d);
    }
}
