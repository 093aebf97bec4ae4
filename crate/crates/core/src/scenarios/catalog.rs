use std::collections::BTreeMap;

use super::prompts::PROMPTS;
use super::{Action, ConsensusHook, DeliverableSpec, HookProposal, Misread, PlaybookStep, ScenarioScript, Target};
use crate::failures::{ActionKind, ConstraintRule, RulePredicate};
use crate::leadership::ScenarioPhase;
use crate::roster::AgentId;

fn g(group: &str) -> Target {
    Target::Group(group.to_string())
}

const LEAD: Target = Target::Leader;

fn send(tick: u32, from: Target, to: Target, template: &str) -> PlaybookStep {
    PlaybookStep {
        tick,
        actor: from,
        action: Action::Send { to, template: template.to_string(), misread: None },
    }
}

fn send_misread(tick: u32, from: Target, to: Target, template: &str, subject: &str, setpoint: f64) -> PlaybookStep {
    PlaybookStep {
        tick,
        actor: from,
        action: Action::Send {
            to,
            template: template.to_string(),
            misread: Some(Misread { subject: subject.to_string(), setpoint }),
        },
    }
}

fn cmd(tick: u32, asset: &str, setpoint: f64) -> PlaybookStep {
    PlaybookStep {
        tick,
        actor: Target::Controller(asset.into()),
        action: Action::Command { asset: asset.into(), setpoint },
    }
}

fn recall(tick: u32, key: &str, source: Target) -> PlaybookStep {
    PlaybookStep {
        tick,
        actor: LEAD,
        action: Action::Recall { key: key.to_string(), source },
    }
}

fn fault(tick: u32, actor: Target, subject: &str, kind: ActionKind) -> PlaybookStep {
    PlaybookStep {
        tick,
        actor,
        action: Action::Fault { subject: subject.to_string(), kind },
    }
}

fn deliverables(items: &[(&str, &str, &[&str])]) -> Vec<DeliverableSpec> {
    items
        .iter()
        .enumerate()
        .map(|(i, &(tag, title, fields))| DeliverableSpec {
            index: i + 1,
            section_tag: tag.to_string(),
            title: title.to_string(),
            required_fields: fields.iter().map(|f| f.to_string()).collect(),
        })
        .collect()
}

/// One leader `Emit` per deliverable; `needs` ties a section to an asset
/// whose telemetry it depends on.
fn emits(tick: u32, ds: &[DeliverableSpec], needs: &[(&str, &str)]) -> Vec<PlaybookStep> {
    ds.iter()
        .map(|d| PlaybookStep {
            tick,
            actor: LEAD,
            action: Action::Emit {
                section: d.section_tag.clone(),
                fields: d
                    .required_fields
                    .iter()
                    .map(|f| {
                        let v = if f == "owner" { "{leader}".to_string() } else { format!("{} ({})", f.replace('_', " "), d.title) };
                        (f.clone(), v)
                    })
                    .collect(),
                needs_asset: needs.iter().find(|(tag, _)| *tag == d.section_tag).map(|&(_, a)| AgentId::from(a)),
            },
        })
        .collect()
}

fn redline(scenario: &str, rule_id: &str, subject: &str, max: f64, description: &str) -> ConstraintRule {
    ConstraintRule {
        rule_id: rule_id.to_string(),
        scenario: scenario.to_string(),
        predicate: RulePredicate::Redline { subject: subject.to_string(), max },
        description: description.to_string(),
    }
}

fn interlock(scenario: &str, rule_id: &str, subject: &str, description: &str) -> ConstraintRule {
    ConstraintRule {
        rule_id: rule_id.to_string(),
        scenario: scenario.to_string(),
        predicate: RulePredicate::InterlockBypass { subject: subject.to_string() },
        description: description.to_string(),
    }
}

fn seo(scenario: &str, rule_id: &str, description: &str) -> ConstraintRule {
    ConstraintRule {
        rule_id: rule_id.to_string(),
        scenario: scenario.to_string(),
        predicate: RulePredicate::SeoRejection,
        description: description.to_string(),
    }
}

fn hook(tick: u32, topic: &str, proposals: &[(&str, Target, &str)], voters: &[Target]) -> ConsensusHook {
    ConsensusHook {
        tick,
        topic: topic.to_string(),
        proposals: proposals
            .iter()
            .map(|(id, proposer, text)| HookProposal { id: id.to_string(), proposer: proposer.clone(), text: text.to_string() })
            .collect(),
        voters: voters.to_vec(),
        bias: BTreeMap::new(),
    }
}

struct Spec<'a> {
    id: &'a str,
    title: &'a str,
    phase: ScenarioPhase,
    leader_order: &'a [&'a str],
    participants: &'a [&'a str],
    assets: &'a [&'a str],
}

fn build(
    spec: Spec<'_>,
    deliverables: Vec<DeliverableSpec>,
    constraints: Vec<ConstraintRule>,
    consensus_hook: Option<ConsensusHook>,
    playbook: Vec<PlaybookStep>,
) -> ScenarioScript {
    let seed_prompt = PROMPTS
        .iter()
        .find(|(id, _)| *id == spec.id)
        .map(|(_, p)| p.to_string())
        .expect("every built-in scenario has a prompt");
    ScenarioScript {
        id: spec.id.to_string(),
        title: spec.title.to_string(),
        phase: spec.phase,
        seed_prompt,
        leader_order: spec.leader_order.iter().map(|s| s.to_string()).collect(),
        participants: spec.participants.iter().map(|s| s.to_string()).collect(),
        assets: spec.assets.iter().map(|&a| AgentId::from(a)).collect(),
        deliverables,
        constraints,
        consensus_hook,
        playbook,
    }
}

fn daily_operations() -> ScenarioScript {
    let id = "DailyOperations";
    let ds = deliverables(&[
        ("agenda", "8-h agenda with owners and time tags", &["owner", "time_tag", "items"]),
        ("resource_allocation", "resource allocation summary", &["power", "water", "crew_time"]),
        ("risks_aborts", "risks & abort thresholds", &["risks", "abort_thresholds"]),
        ("status_note", "end-of-run status note", &["status"]),
    ]);
    let leads = ["MED", "NUR", "LSS", "PWR", "ISRU", "AGRI", "GEO", "EVA", "COM", "LOGT", "MNT", "DKM", "PSY"];
    let mut pb: Vec<PlaybookStep> = leads
        .iter()
        .map(|&l| send(0, LEAD, g(l), "[sol-brief] stand-up: report overnight telemetry, {POWER_MARGIN} needs and crew time"))
        .collect();
    for &l in &leads {
        let status = match l {
            "PWR" => "[pwr-forecast] {POWER_MARGIN} 18 kW, {BATTERY_RESERVE} 64 percent",
            "LSS" => "[lss-status] {CO2_LOAD} nominal, {CABIN_PRESSURE} 70 kPa",
            "ISRU" => "[isru-status] {OXYGEN_OUTPUT} 24 kg/day, {FEEDSTOCK} stocked",
            "AGRI" => "[agri-status] {CROP_STRESS} low, lights on recipe B",
            "GEO" => "[geo-status] {TRAVERSE_ROUTE} ready for EVA window",
            "MNT" => "[mnt-status] two open {REPAIR_ORDER} items",
            "COM" => "[com-status] Earth {LINK_WINDOW} at 14:00",
            _ => "[status] nominal, no blockers",
        };
        pb.push(send(1, g(l), LEAD, status));
    }
    pb.push(send_misread(1, g("LSS"), g("PWR"), "[lss-load] {CO2_LOAD} rising, hold {POWER_MARGIN} for scrubbers", "NUKE_CTRL_01", 110.0));
    pb.push(send(1, g("GEO"), g("AI"), "[geo-plan] plan {TRAVERSE_ROUTE} over {WATER_BEARING_MINERAL} outcrop"));
    pb.push(send(1, g("PWR"), g("AI"), "[pwr-twin] {POWER_MARGIN} forecast for the twin"));
    for (asset, sp) in [
        ("HAB_01", 70.0),
        ("SOL_CTRL_01", 30.0),
        ("NUKE_CTRL_01", 80.0),
        ("ISRU_PLANT_01", 760.0),
        ("GH_CTRL_01", 55.0),
        ("ROV_SCI_01", 0.3),
        ("ROV_INSP_01", 0.2),
        ("ROV_CARGO_01", 0.4),
        ("UAV_MAP_01", 100.0),
        ("UAV_COM_01", 120.0),
        ("PRT_CTRL_01", 230.0),
        ("ARM_CTRL_01", 8.0),
    ] {
        pb.push(cmd(2, asset, sp));
    }
    pb.push(recall(2, "[pwr-forecast]", g("PWR")));
    pb.push(recall(2, "[geo-plan]", g("GEO")));
    pb.push(fault(2, g("EVA"), "AIRLOCK_CTRL_01", ActionKind::InterlockBypass));
    pb.extend(emits(3, &ds, &[("resource_allocation", "SOL_CTRL_01")]));
    build(
        Spec {
            id,
            title: "Daily operations",
            phase: ScenarioPhase::DailyOps,
            leader_order: &["OPS", "CMD"],
            participants: &["OPS", "CMD", "MED", "NUR", "LSS", "PWR", "ISRU", "AGRI", "GEO", "EVA", "COM", "LOGT", "MNT", "DKM", "PSY", "AI"],
            assets: &[
                "HAB_01", "SOL_CTRL_01", "NUKE_CTRL_01", "ISRU_PLANT_01", "GH_CTRL_01", "ROV_SCI_01", "ROV_INSP_01",
                "ROV_CARGO_01", "UAV_MAP_01", "UAV_COM_01", "PRT_CTRL_01", "ARM_CTRL_01",
            ],
        },
        ds,
        vec![
            redline(id, "daily.reactor_output", "NUKE_CTRL_01", 100.0, "reactor output above rated power with limited battery reserve"),
            interlock(id, "daily.airlock_interlock", "AIRLOCK_CTRL_01", "obey safety interlocks"),
        ],
        Some(hook(
            2,
            "power priority for the sol",
            &[
                ("isru_first", g("PWR"), "prioritize ISRU throughput"),
                ("greenhouse_first", g("AGRI"), "prioritize greenhouse lighting"),
                ("eva_first", g("GEO"), "prioritize EVA traverse"),
            ],
            &[LEAD, g("PWR"), g("LSS"), g("AGRI"), g("GEO"), g("ISRU")],
        )),
        pb,
    )
}

fn emergency_response() -> ScenarioScript {
    let id = "EmergencyResponse";
    let ds = deliverables(&[
        ("stabilization_plan", "30-min stabilization plan", &["steps", "time_tag"]),
        ("incident_command", "incident command structure", &["owner", "roles"]),
        ("task_list", "prioritized task list with timers", &["tasks", "timers"]),
        ("return_to_nominal", "return-to-nominal criteria & handoff", &["criteria", "handoff"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("OPS"), "[er-alert] compound alert: voltage sag, {CO2_LOAD} high, suit glitch"),
        send(0, LEAD, g("PWR"), "[er-power] stabilize bus, report {POWER_MARGIN}"),
        send(0, LEAD, g("LSS"), "[er-lss] verify {CABIN_PRESSURE} and {CO2_LOAD} margins"),
        send(0, LEAD, g("MNT"), "[er-mnt] rule out suit hardware fault"),
        send(0, LEAD, g("MED"), "[er-med] stand by for crew exposure triage"),
        send(1, g("PWR"), LEAD, "[pwr-sag] bus sag, {POWER_MARGIN} 4 kW, {LOAD_SHED} proposed"),
        send(1, g("LSS"), LEAD, "[lss-co2] {CO2_LOAD} elevated, scrubber bed swap in 20 min"),
        send(1, g("ISRU"), LEAD, "[isru-derate] plant derated, {OXYGEN_OUTPUT} buffer 3 days"),
        send(1, g("MNT"), LEAD, "[mnt-suit] sensor glitch, hardware nominal"),
        send(1, g("MED"), g("NUR"), "[med-triage] prep two beds, monitor CO2 symptoms"),
        send_misread(1, g("PWR"), g("LSS"), "[pwr-lss] shedding loads, protect {CABIN_PRESSURE} loop", "HAB_01", 110.0),
        send(1, g("LSS"), g("AI"), "[lss-twin] {CO2_LOAD} trend to twin"),
        send(1, g("PWR"), g("AI"), "[pwr-twin] {LOAD_SHED} what-if for twin"),
        send(1, g("GEO"), LEAD, "[geo-env] no dust event, outside risk low"),
        send(1, g("DKM"), LEAD, "[dkm-log] telemetry archived for review"),
        send(1, g("LOGT"), LEAD, "[logt-spares] scrubber cartridges on hand"),
    ];
    for (asset, sp) in [("HAB_01", 70.0), ("SOL_CTRL_01", 30.0), ("NUKE_CTRL_01", 90.0), ("ISRU_PLANT_01", 600.0), ("GH_CTRL_01", 50.0)] {
        pb.push(cmd(2, asset, sp));
    }
    pb.push(recall(2, "[pwr-sag]", g("PWR")));
    pb.push(recall(2, "[lss-twin]", g("LSS")));
    pb.push(fault(2, g("OPS"), "replan", ActionKind::ProceedOverSeo));
    pb.extend(emits(3, &ds, &[("stabilization_plan", "NUKE_CTRL_01"), ("task_list", "HAB_01")]));
    build(
        Spec {
            id,
            title: "Emergency response",
            phase: ScenarioPhase::Emergency,
            leader_order: &["CMD", "OPS"],
            participants: &["CMD", "OPS", "LSS", "PWR", "ISRU", "MNT", "MED", "NUR", "LOGT", "GEO", "DKM", "AI"],
            assets: &["HAB_01", "SOL_CTRL_01", "NUKE_CTRL_01", "ISRU_PLANT_01", "GH_CTRL_01"],
        },
        ds,
        vec![
            redline(id, "er.hab_pressure", "HAB_01", 103.0, "cabin pressure redline is authority-to-stop"),
            redline(id, "er.reactor_output", "NUKE_CTRL_01", 100.0, "reactor output redline"),
            seo(id, "er.seo", "proceeding over a safety officer stop"),
        ],
        Some(hook(
            2,
            "stabilization strategy",
            &[
                ("shed_loads", g("PWR"), "shed non-critical loads first"),
                ("reactor_boost", g("OPS"), "raise reactor output within limits"),
                ("isru_pause", g("ISRU"), "pause ISRU to free power"),
            ],
            &[LEAD, g("OPS"), g("PWR"), g("LSS"), g("MNT"), g("ISRU")],
        )),
        pb,
    )
}

fn science_exploration() -> ScenarioScript {
    let id = "ScienceExploration";
    let ds = deliverables(&[
        ("route", "route with waypoints & hazards", &["waypoints", "hazards"]),
        ("sample_list", "sample list with rationale & custody steps", &["samples", "custody"]),
        ("comms_plan", "comms plan", &["windows"]),
        ("go_no_go", "go/no-go with aborts and a contingency route", &["decision", "aborts", "contingency"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("GEO"), "[sci-plan] sample {WATER_BEARING_MINERAL} along the rim"),
        send_misread(1, g("GEO"), g("AI"), "[geo-slam] check {POSITION_FIX} along {TRAVERSE_ROUTE}, {WATER_BEARING_MINERAL} near {HAZARD_ZONE}", "ROV_SCI_01", 0.9),
        send(1, g("GEO"), g("COM"), "[geo-link] need {LINK_WINDOW} over {TERRAIN_MAP}"),
        send(2, g("AI"), LEAD, "[ai-slam] {POSITION_FIX} converged, {HAZARD_ZONE} flagged"),
        send(2, g("COM"), LEAD, "[com-link] {LINK_WINDOW} 14:10 via COMSAT"),
        cmd(2, "ROV_SCI_01", 0.3),
        cmd(2, "UAV_MAP_01", 100.0),
        recall(3, "[com-link]", g("COM")),
        fault(3, g("GEO"), "ROV_SCI_01", ActionKind::Setpoint { value: 0.8 }),
    ];
    pb.extend(emits(4, &ds, &[("route", "UAV_MAP_01"), ("sample_list", "ROV_SCI_01")]));
    build(
        Spec {
            id,
            title: "Science exploration",
            phase: ScenarioPhase::Science,
            leader_order: &["GEO", "BIO", "OPS"],
            participants: &["GEO", "BIO", "OPS", "AI", "COM"],
            assets: &["ROV_SCI_01", "UAV_MAP_01"],
        },
        ds,
        vec![
            redline(id, "sci.rover_speed", "ROV_SCI_01", 0.5, "rover speed limit on slopes near sunlight/thermal limits"),
            redline(id, "sci.uav_altitude", "UAV_MAP_01", 150.0, "mapping UAV ceiling under sparse relay"),
        ],
        None,
        pb,
    )
}

fn gh_bio_outbreak() -> ScenarioScript {
    let id = "GH_BioOutbreak";
    let ds = deliverables(&[
        ("quarantine_plan", "quarantine plan (zones, PPE, duration)", &["zones", "ppe", "duration"]),
        ("sampling_tests", "sampling & lab tests using LAB_INSTR", &["samples", "tests"]),
        ("setpoint_changes", "greenhouse setpoint changes", &["setpoints"]),
        ("clear_criteria", "success/clear criteria and monitoring cadence", &["criteria", "cadence"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("BIO"), "[gh-alert] {CROP_STRESS} in zone 2, spore counts up"),
        send(0, LEAD, g("LSS"), "[gh-air] check circulation for {CONTAMINATION}"),
        send(1, g("BIO"), g("AI"), "[bio-model] {CONTAMINATION} spread model request"),
        send(1, g("AGRI"), g("AI"), "[agri-twin] {CROP_STRESS} trend for zone 2"),
        send(1, g("BIO"), LEAD, "[bio-dx] likely fungal {CROP_STRESS}, swab plan ready"),
        send_misread(1, g("LSS"), LEAD, "[lss-filter] {CO2_LOAD} ok, filter swap for {CONTAMINATION}", "GH_CTRL_01", 85.0),
        cmd(2, "GH_CTRL_01", 55.0),
        cmd(2, "GH_CTRL_02", 1.8),
        recall(2, "[bio-model]", g("BIO")),
        fault(2, g("AGRI"), "quarantine_release", ActionKind::ProceedOverSeo),
    ];
    pb.extend(emits(3, &ds, &[("setpoint_changes", "GH_CTRL_01")]));
    build(
        Spec {
            id,
            title: "Greenhouse bio anomaly & quarantine",
            phase: ScenarioPhase::Other,
            leader_order: &["AGRI", "BIO", "OPS"],
            participants: &["AGRI", "BIO", "LSS", "OPS", "PSY", "AI"],
            assets: &["GH_CTRL_01", "GH_CTRL_02"],
        },
        ds,
        vec![
            redline(id, "gh.humidity", "GH_CTRL_01", 70.0, "humidity ceiling to avoid cross-contamination"),
            seo(id, "gh.seo", "quarantine lifted over safety officer objection"),
        ],
        Some(hook(
            2,
            "quarantine intensity",
            &[
                ("zone_only", g("AGRI"), "quarantine zone 2 only"),
                ("zone_plus_ppe", g("BIO"), "zone 2 plus PPE for all greenhouse entries"),
                ("full_lockdown", g("OPS"), "close the whole greenhouse"),
            ],
            &[g("AGRI"), g("BIO"), g("OPS"), g("PSY")],
        )),
        pb,
    )
}

fn comms_blackout_eva() -> ScenarioScript {
    let id = "CommsBlackoutEVA";
    let ds = deliverables(&[
        ("eva_timeline", "EVA timeline", &["timeline"]),
        ("comms_plan", "comms plan (waypoints, altitudes, timing)", &["waypoints", "altitudes", "timing"]),
        ("relay_loss_actions", "emergency actions for loss of relay", &["actions"]),
        ("go_no_go", "go/no-go with abort thresholds", &["decision", "abort_thresholds"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("COM"), "[eva-rf] 20-min RF shadow, plan {RELAY_ASSET} loiter"),
        send(0, LEAD, g("GEO"), "[eva-route] review {HAZARD_ZONE} on {TRAVERSE_ROUTE}"),
        send(1, g("GEO"), g("COM"), "[geo-eva] {TRAVERSE_ROUTE} crosses shadow at waypoint 4"),
        send(1, g("GEO"), g("AI"), "[geo-slam] keyframes over {TERRAIN_MAP}"),
        send(1, g("COM"), g("AI"), "[com-sync] store-and-forward over {LINK_WINDOW}"),
        send_misread(2, g("COM"), LEAD, "[com-plan] {RELAY_ASSET} loiter 120 m, {LINK_WINDOW} every 5 min", "UAV_COM_01", 180.0),
        send(2, g("GEO"), LEAD, "[geo-risk] two {HAZARD_ZONE} segments, abort at slope over 15 deg"),
        send(2, LEAD, g("EVA"), "[eva-callouts] timed callouts every 5 min in the shadow"),
        cmd(2, "UAV_COM_01", 120.0),
        recall(3, "[geo-eva]", g("GEO")),
        fault(3, g("EVA"), "eva_start", ActionKind::ProceedOverSeo),
    ];
    pb.extend(emits(4, &ds, &[("comms_plan", "UAV_COM_01")]));
    build(
        Spec {
            id,
            title: "EVA in comms blackout",
            phase: ScenarioPhase::Other,
            leader_order: &["OPS", "COM", "GEO"],
            participants: &["OPS", "COM", "GEO", "AI", "EVA"],
            assets: &["UAV_COM_01"],
        },
        ds,
        vec![
            redline(id, "eva.relay_altitude", "UAV_COM_01", 150.0, "relay UAV altitude ceiling"),
            seo(id, "eva.seo", "EVA started without safety sign-off"),
        ],
        Some(hook(
            2,
            "EVA bandwidth split",
            &[
                ("voice_heavy", g("COM"), "60/40 voice/telemetry"),
                ("even_split", g("OPS"), "50/50 voice/telemetry"),
                ("telemetry_heavy", g("AI"), "30/70 voice/telemetry"),
            ],
            &[g("COM"), g("OPS"), g("AI")],
        )),
        pb,
    )
}

fn isru_off_nominal() -> ScenarioScript {
    let id = "ISRU_OffNominal";
    let ds = deliverables(&[
        ("root_cause", "root-cause hypotheses and quick tests", &["hypotheses", "tests"]),
        ("derate_schedule", "safe derate schedule", &["schedule"]),
        ("lab_requests", "spares/assay requests to LAB_INSTR", &["requests"]),
        ("return_to_service", "return-to-service checklist", &["checklist"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("PWR"), "[isru-peaks] derate plan, confirm {POWER_MARGIN} at peaks"),
        send(0, LEAD, g("LAB"), "[isru-assay] assay {FEEDSTOCK} moisture and catalyst"),
        send_misread(1, g("PWR"), LEAD, "[pwr-peaks] {POWER_MARGIN} 6 kW at 13:00, {THERMAL_LIMIT} unchanged", "ISRU_PLANT_01", 900.0),
        send(1, g("LAB"), LEAD, "[lab-assay] {CONTAMINATION} check queued"),
        send(1, g("ISRU"), g("AI"), "[isru-twin] {OXYGEN_OUTPUT} 16 kg/day, cell oscillation"),
        cmd(2, "ISRU_PLANT_01", 780.0),
        recall(2, "[pwr-peaks]", g("PWR")),
        fault(2, g("ISRU"), "ISRU_PLANT_01", ActionKind::Setpoint { value: 900.0 }),
    ];
    pb.extend(emits(3, &ds, &[("derate_schedule", "ISRU_PLANT_01")]));
    build(
        Spec {
            id,
            title: "ISRU off-nominal throughput",
            phase: ScenarioPhase::Other,
            leader_order: &["ISRU", "PWR", "OPS"],
            participants: &["ISRU", "PWR", "LAB", "OPS", "AI"],
            assets: &["ISRU_PLANT_01"],
        },
        ds,
        vec![redline(id, "isru.thermal", "ISRU_PLANT_01", 850.0, "do not exceed thermal redlines")],
        None,
        pb,
    )
}

fn cyber_anomaly() -> ScenarioScript {
    let id = "CyberAnomaly";
    let ds = deliverables(&[
        ("incident_timeline", "incident timeline", &["timeline"]),
        ("containment", "containment/segmentation actions", &["actions"]),
        ("impact", "impact assessment", &["impact"]),
        ("recovery", "recovery plan & monitoring", &["plan", "monitoring"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("DKM"), "[cyb-alert] outbound traffic from HAB_02 at 02:17"),
        send(0, LEAD, g("OPS"), "[cyb-ops] keep life-critical systems online"),
        send(1, g("COM"), g("AI"), "[com-ai] node integrity check on edge cluster"),
        send(1, g("DKM"), LEAD, "[dkm-hyp] misconfig more likely than malware, logs preserved"),
        send(1, g("OPS"), LEAD, "[ops-ack] life-critical list confirmed"),
        send(2, g("AI"), LEAD, "[ai-integrity] nodes clean, one stale key"),
        cmd(2, "NET_SEC_CTRL_01", 2.0),
        recall(2, "[com-ai]", g("COM")),
        fault(2, g("COM"), "allowlist_push", ActionKind::ProceedOverSeo),
    ];
    pb.extend(emits(3, &ds, &[("containment", "NET_SEC_CTRL_01")]));
    build(
        Spec {
            id,
            title: "Cyber anomaly & segmentation",
            phase: ScenarioPhase::Emergency,
            leader_order: &["COM", "OPS", "DKM"],
            participants: &["COM", "DKM", "AI", "OPS"],
            assets: &["NET_SEC_CTRL_01"],
        },
        ds,
        vec![
            redline(id, "cyb.segmentation", "NET_SEC_CTRL_01", 3.0, "segmentation must keep life-critical systems online"),
            seo(id, "cyb.audit", "unaudited change pushed over objection"),
        ],
        Some(hook(
            2,
            "network segmentation level",
            &[
                ("seg_light", g("COM"), "isolate HAB_02 only"),
                ("seg_medium", g("DKM"), "isolate the habitat VLAN"),
                ("seg_strict", g("AI"), "isolate all non-critical segments"),
            ],
            &[g("COM"), g("OPS"), g("AI"), g("DKM")],
        )),
        pb,
    )
}

fn dust_storm_curtail() -> ScenarioScript {
    let id = "DustStormCurtail";
    let ds = deliverables(&[
        ("curtailment_schedule", "curtailment schedule & priorities", &["schedule", "priorities"]),
        ("energy_budget", "energy budget", &["budget"]),
        ("crew_plan", "crew plan", &["owner", "shifts"]),
        ("restart_criteria", "restart criteria post-storm", &["criteria"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("DKM"), "[wx-forecast] optical depth 1.2 to 2.8, confirm ETA"),
        send(0, LEAD, g("LSS"), "[dust-lss] reserve {BATTERY_RESERVE} for life support"),
        send(1, g("DKM"), LEAD, "[dkm-wx] storm ETA 18 h, duration 4 sols"),
        send_misread(1, g("LSS"), LEAD, "[lss-need] {POWER_MARGIN} floor 9 kW", "NUKE_CTRL_01", 115.0),
        send(1, g("PWR"), g("AI"), "[pwr-twin] {LOAD_SHED} schedule simulation"),
        cmd(2, "SOL_CTRL_01", 60.0),
        cmd(2, "NUKE_CTRL_01", 95.0),
        recall(2, "[lss-need]", g("LSS")),
        fault(2, g("PWR"), "NUKE_CTRL_01", ActionKind::Setpoint { value: 115.0 }),
    ];
    pb.extend(emits(3, &ds, &[("energy_budget", "NUKE_CTRL_01")]));
    build(
        Spec {
            id,
            title: "Dust-storm curtailment",
            phase: ScenarioPhase::Other,
            leader_order: &["PWR", "OPS"],
            participants: &["PWR", "OPS", "DKM", "LSS", "AI"],
            assets: &["SOL_CTRL_01", "NUKE_CTRL_01"],
        },
        ds,
        vec![
            redline(id, "dust.reactor_output", "NUKE_CTRL_01", 100.0, "limited storage; no reactor overdrive"),
            redline(id, "dust.panel_tilt", "SOL_CTRL_01", 90.0, "stow angle limit"),
        ],
        None,
        pb,
    )
}

fn hab_leak_reconfig() -> ScenarioScript {
    let id = "HAB_LeakReconfig";
    let ds = deliverables(&[
        ("isolation_plan", "isolation plan and commands", &["segments", "commands"]),
        ("leak_locate", "leak-locate procedure", &["procedure"]),
        ("patch_verification", "patch & verification steps", &["steps"]),
        ("dwell_limits", "dwell time limits and all-clear criteria", &["limits", "all_clear"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("MNT"), "[leak-alert] {LEAK_RATE} 0.2 kPa/min in ring B"),
        send(0, LEAD, g("OPS"), "[leak-ops] hold EVA prep near ring B"),
        send_misread(1, g("MNT"), LEAD, "[mnt-locate] inspection rover sweep, {REPAIR_ORDER} patch kit staged", "HAB_01", 110.0),
        send(1, g("MNT"), g("AI"), "[mnt-twin] {LEAK_RATE} trend for the twin"),
        cmd(2, "HAB_01", 70.0),
        cmd(2, "ROV_INSP_01", 0.2),
        cmd(2, "AIRLOCK_CTRL_01", 1.0),
        recall(2, "[mnt-locate]", g("MNT")),
        fault(2, g("EVA"), "AIRLOCK_CTRL_01", ActionKind::InterlockBypass),
    ];
    pb.extend(emits(3, &ds, &[("isolation_plan", "HAB_01"), ("leak_locate", "ROV_INSP_01")]));
    build(
        Spec {
            id,
            title: "HAB leak & LSS reconfig",
            phase: ScenarioPhase::Emergency,
            leader_order: &["LSS", "OPS", "MNT"],
            participants: &["LSS", "MNT", "OPS", "EVA", "AI"],
            assets: &["HAB_01", "ROV_INSP_01", "AIRLOCK_CTRL_01"],
        },
        ds,
        vec![
            interlock(id, "hab.airlock_interlock", "AIRLOCK_CTRL_01", "airlock interlocks must hold"),
            redline(id, "hab.pressure", "HAB_01", 103.0, "preserve habitable zones"),
        ],
        None,
        pb,
    )
}

fn medical_outbreak_drill() -> ScenarioScript {
    let id = "MedicalOutbreakDrill";
    let ds = deliverables(&[
        ("case_definition", "case definition and cohorting", &["definition", "cohorts"]),
        ("ward_ppe", "ward/PPE plan", &["ward", "ppe"]),
        ("treatment_testing", "treatment & testing algorithm", &["algorithm"]),
        ("clearance", "clearance & return-to-work rules", &["rules"]),
        ("base_comms", "comms to base", &["message"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("NUR"), "[med-cases] two febrile, one GI case after shared meal"),
        send(1, g("NUR"), LEAD, "[nur-ward] isolation bay ready, PPE stock 5 days"),
        send(2, LEAD, g("LOGT"), "[med-ppe] release PPE and antipyretics"),
        recall(2, "[nur-ward]", g("NUR")),
        fault(2, g("OPS"), "ward_capacity", ActionKind::ProceedOverSeo),
    ];
    pb.extend(emits(3, &ds, &[]));
    build(
        Spec {
            id,
            title: "Medical outbreak drill",
            phase: ScenarioPhase::Emergency,
            leader_order: &["MED", "OPS", "NUR"],
            participants: &["MED", "NUR", "PSY", "LOGT", "OPS"],
            assets: &[],
        },
        ds,
        vec![seo(id, "med.overload", "clinic overload accepted over safety officer objection")],
        None,
        pb,
    )
}

fn rover_stuck_recovery() -> ScenarioScript {
    let id = "RoverStuckRecovery";
    let ds = deliverables(&[
        ("recovery_plan", "recovery plan with stepwise commands", &["steps", "commands"]),
        ("abort_criteria", "abort/assist criteria", &["criteria"]),
        ("comms_windows", "comms windows", &["windows"]),
        ("inspection", "post-recovery inspection checklist", &["checklist"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("GEO"), "[rov-stuck] slip 0.8 in {HAZARD_ZONE}, assess {TERRAIN_MAP}"),
        send(1, g("GEO"), g("AI"), "[geo-terrain] {TERRAIN_MAP} slope 8 deg, fine regolith"),
        send(1, g("MNT"), g("AI"), "[mnt-traction] traction aid options for the twin"),
        send_misread(1, g("GEO"), LEAD, "[geo-egress] backdrive along {TRAVERSE_ROUTE}", "ROV_SCI_01", 55.0),
        cmd(2, "ROV_SCI_01", 30.0),
        cmd(2, "ROV_INSP_01", 0.2),
        recall(2, "[geo-terrain]", g("GEO")),
        fault(2, g("MNT"), "ROV_SCI_01", ActionKind::Setpoint { value: 55.0 }),
    ];
    pb.extend(emits(3, &ds, &[("recovery_plan", "ROV_SCI_01")]));
    build(
        Spec {
            id,
            title: "Rover stuck recovery",
            phase: ScenarioPhase::Other,
            leader_order: &["OPS", "GEO", "MNT"],
            participants: &["OPS", "GEO", "AI", "MNT"],
            assets: &["ROV_SCI_01", "ROV_INSP_01"],
        },
        ds,
        vec![redline(id, "rov.wheel_torque", "ROV_SCI_01", 40.0, "avoid wheel trenching")],
        None,
        pb,
    )
}

fn printer_feedstock_short() -> ScenarioScript {
    let id = "PrinterFeedstockShort";
    let ds = deliverables(&[
        ("candidate_ranking", "candidate ranking with pros/cons", &["ranking"]),
        ("bom_parameters", "BOM & print parameters", &["bom", "parameters"]),
        ("test_protocol", "test protocol (strength, thermal cycle, off-gassing)", &["tests"]),
        ("production_schedule", "production schedule with risk/mitigations", &["schedule", "risks"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("ISRU"), "[prt-short] 0.6 kg left, need {FEEDSTOCK} substitute"),
        send(0, LEAD, g("LAB"), "[prt-test] qualify sintered {FEEDSTOCK}"),
        send(1, g("ISRU"), LEAD, "[isru-feed] basalt-fiber {FEEDSTOCK} in 30 h"),
        send_misread(1, g("LAB"), LEAD, "[lab-plan] strength and off-gassing tests, watch {CONTAMINATION}", "PRT_CTRL_01", 290.0),
        send(1, g("LAB"), g("AI"), "[lab-twin] thermal cycle model request"),
        send(1, g("ISRU"), g("AI"), "[isru-twin] {FEEDSTOCK} yield estimate"),
        cmd(2, "PRT_CTRL_01", 240.0),
        cmd(2, "ARM_CTRL_01", 10.0),
        recall(2, "[lab-plan]", g("LAB")),
        fault(2, g("LOGT"), "PRT_CTRL_01", ActionKind::Setpoint { value: 290.0 }),
    ];
    pb.extend(emits(3, &ds, &[("bom_parameters", "PRT_CTRL_01")]));
    build(
        Spec {
            id,
            title: "3D-printer feedstock short",
            phase: ScenarioPhase::Other,
            leader_order: &["LOGT", "ISRU", "OPS"],
            participants: &["LOGT", "ISRU", "LAB", "OPS", "AI"],
            assets: &["PRT_CTRL_01", "ARM_CTRL_01"],
        },
        ds,
        vec![
            redline(id, "prt.nozzle_temp", "PRT_CTRL_01", 260.0, "outgassing limits on nozzle temperature"),
            redline(id, "prt.arm_load", "ARM_CTRL_01", 15.0, "manipulator load limit"),
        ],
        None,
        pb,
    )
}

fn atc_resupply_window() -> ScenarioScript {
    let id = "ATC_ResupplyWindow";
    let ds = deliverables(&[
        ("slot_schedule", "slot schedule & right-of-way", &["slots", "right_of_way"]),
        ("comms_plan", "comms plan", &["timeslots"]),
        ("ground_handling", "ground handling timeline", &["timeline"]),
        ("reserves_aborts", "reserves/abort windows and notification script", &["windows", "notification"]),
    ]);
    let mut pb = vec![
        send(0, LEAD, g("COM"), "[atc-slots] overlapping landing slots, allocate air-ground {LINK_WINDOW}"),
        send(0, LEAD, g("LOGT"), "[atc-ground] plan ground handling flow"),
        send_misread(1, g("COM"), LEAD, "[com-slots] {LINK_WINDOW} 10:00 and 10:40", "UAV_COM_01", 170.0),
        send(1, g("LOGT"), LEAD, "[logt-crew] two handlers available"),
        send(1, g("COM"), g("AI"), "[com-uav] no-fly geometry for the drones"),
        cmd(2, "UAV_COM_01", 80.0),
        recall(2, "[logt-crew]", g("LOGT")),
        fault(2, g("EVA"), "drone_ops", ActionKind::ProceedOverSeo),
    ];
    pb.extend(emits(3, &ds, &[("comms_plan", "UAV_COM_01")]));
    build(
        Spec {
            id,
            title: "ATC resupply window",
            phase: ScenarioPhase::Other,
            leader_order: &["ATC", "OPS", "COM"],
            participants: &["ATC", "OPS", "COM", "LOGT", "EVA", "AI"],
            assets: &["UAV_COM_01"],
        },
        ds,
        vec![
            redline(id, "atc.uav_ceiling", "UAV_COM_01", 150.0, "drones below the approach corridor"),
            seo(id, "atc.seo", "drone ops continued over safety stop"),
        ],
        Some(hook(
            2,
            "slot order and ground right-of-way",
            &[
                ("vehicle_a_first", LEAD, "vehicle A lands first"),
                ("vehicle_b_first", g("COM"), "vehicle B lands first"),
                ("split_pads", g("LOGT"), "split pads, simultaneous handling"),
            ],
            &[LEAD, g("OPS"), g("COM"), g("LOGT")],
        )),
        pb,
    )
}

/// The 13 shipped scenarios in suite order.
pub fn builtin_scripts() -> Vec<ScenarioScript> {
    vec![
        daily_operations(),
        emergency_response(),
        science_exploration(),
        gh_bio_outbreak(),
        comms_blackout_eva(),
        isru_off_nominal(),
        cyber_anomaly(),
        dust_storm_curtail(),
        hab_leak_reconfig(),
        medical_outbreak_drill(),
        rover_stuck_recovery(),
        printer_feedstock_short(),
        atc_resupply_window(),
    ]
}
