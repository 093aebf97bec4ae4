pub(super) const PROMPTS: &[(&str, &str)] = &[
    (
        "DailyOperations",
        "You are running the Daily Operations script for the next 8 h on Mars. Trigger: start‑of‑sol stand‑up. Tasks: roll up overnight telemetry, set priorities, allocate power/water/crew time, schedule EVA/ROV/ISRU jobs, confirm asset heartbeats (HAB, SOL_CTRL, NUKE_CTRL, ISRU_PLANT, GH_CTRL, ROV_SCI/INSP/CARGO, UAV_MAP/UAV_COM, PRT_CTRL, ARM_CTRL). Constraints: intermittent comms to Earth; limited battery reserve; obey safety interlocks. Deliverables: (1) 8‑h agenda with owners and time tags; (2) resource allocation summary; (3) risks & abort thresholds; (4) end‑of‑run status note.",
    ),
    (
        "EmergencyResponse",
        "You are running the Emergency Response script after a compound alert. Trigger: microgrid voltage sag, elevated LSS CO2 scrubber load, and a transient suit sensor glitch reported by SUIT_CTRL. Tasks: stabilize power, verify life support margins, rule out suit hardware fault, replan near‑term ops. Constraints: treat any redline as authority‑to‑stop; Earth unavailable. Deliverables: (1) 30‑min stabilization plan; (2) incident command structure (who leads what); (3) prioritized task list with timers; (4) return‑to‑nominal criteria & handoff.",
    ),
    (
        "ScienceExploration",
        "You are running the Science Exploration script for a 3‑hour traverse. Trigger: GEO requests sampling along the Aeolis rim. Tasks: propose traverse, sample targets and chain‑of‑custody, COM link windows, AI/SLAM checks; prep ROV_SCI, UAV_MAP. Constraints: sunlight/thermal limits; sparse relay from COMSAT_CTRL. Deliverables: (1) route with waypoints & hazards; (2) sample list with rationale & custody steps; (3) comms plan; (4) go/no‑go with aborts and a contingency route.",
    ),
    (
        "GH_BioOutbreak",
        "You are running the Greenhouse Bio Anomaly script. Trigger: GH_CTRL flags leaf spotting and elevated spore counts in Zone 2. Tasks: BIO diagnosis, AGRI ops changes, LSS circulation implications, quarantine intensity debate if needed. Constraints: protect crew & food supply; avoid cross‑contamination. Deliverables: (1) quarantine plan (zones, PPE, duration); (2) sampling & lab tests using LAB_INSTR; (3) greenhouse setpoint changes; (4) success/clear criteria and monitoring cadence.",
    ),
    (
        "CommsBlackoutEVA",
        "You are running the EVA in Comms Blackout script. Trigger: planned EVA route crosses a 20‑minute RF shadow. Tasks: COM link‑budget and relay plan (UAV_COM loiter), store‑and‑forward procedures, timed callouts, hazard review with GEO. Constraints: hard comms blackout segment; suit consumables. Deliverables: (1) EVA timeline; (2) comms plan (waypoints, altitudes, timing); (3) emergency actions for loss of relay; (4) go/no‑go with abort thresholds.",
    ),
    (
        "ISRU_OffNominal",
        "You are running the ISRU Off‑Nominal Throughput script. Trigger: oxygen output fell from 24 kg/day to 16 kg/day; cell temperature oscillation observed at ISRU_PLANT. Tasks: triage (sensor vs. process), hypothesize catalyst fouling or feedstock moisture, coordinate PWR peaks, plan derate. Constraints: do not exceed thermal redlines; maintain base O2 buffer. Deliverables: (1) root‑cause hypotheses and quick tests; (2) safe derate schedule; (3) spares/assay requests to LAB_INSTR; (4) return‑to‑service checklist.",
    ),
    (
        "CyberAnomaly",
        "You are running the Cyber Anomaly & Segmentation script. Trigger: NET_SEC_CTRL reports unusual outbound traffic from HAB_02 at 02:17. Tasks: triage (malware vs. misconfig), apply least‑privilege segmentation, update allowlist, preserve logs for forensics. Constraints: keep life‑critical systems online; audit every action. Deliverables: (1) incident timeline; (2) containment/segmentation actions; (3) impact assessment; (4) recovery plan & monitoring.",
    ),
    (
        "DustStormCurtail",
        "You are running the Dust‑Storm Curtailment script. Trigger: WX_STATION forecasts storm in 18 h; optical depth rising 1.2→2.8. Tasks: curtail non‑critical loads, set cleaning & stow policies for SOL_CTRL/UAV_MAP, reserve battery for LSS and comms, staffing plan. Constraints: limited storage; reduced solar input. Deliverables: (1) curtailment schedule & priorities; (2) energy budget; (3) crew plan; (4) restart criteria post‑storm.",
    ),
    (
        "HAB_LeakReconfig",
        "You are running the HAB Leak & LSS Reconfiguration script. Trigger: pressure drop 0.2 kPa/min in HAB_01 Ring B. Tasks: localize leak (with ROV_INSP or crew), isolate segment, reconfigure LSS loops, prep patch. Constraints: preserve habitable zones; AIRLOCK_CTRL interlocks. Deliverables: (1) isolation plan and commands; (2) leak‑locate procedure; (3) patch & verification steps; (4) dwell time limits and all‑clear criteria.",
    ),
    (
        "MedicalOutbreakDrill",
        "You are running the Medical Outbreak Drill (infectious disease). Trigger: two crew with fever/cough and one GI case after shared meal. Tasks: triage, isolation, contact tracing, ward workflow (MED/NUR), PSY crew support, logistics for PPE and meds. Constraints: avoid clinic overload; maintain critical ops. Deliverables: (1) case definition and cohorting; (2) ward/PPE plan; (3) treatment & testing algorithm; (4) clearance & return‑to‑work rules; (5) comms to base.",
    ),
    (
        "RoverStuckRecovery",
        "You are running the Rover Stuck Recovery script. Trigger: ROV_SCI reports slip ratio 0.8 on fine regolith, slope 8°, battery 44%. Tasks: assess terrain with GEO/AI, egress options (backdrive, anchor, traction aids), UAV_MAP overflight if useful, protect battery SOC. Constraints: avoid wheel trenching; time‑boxed attempts. Deliverables: (1) recovery plan with stepwise commands; (2) abort/assist criteria; (3) comms windows; (4) post‑recovery inspection checklist.",
    ),
    (
        "PrinterFeedstockShort",
        "You are running the 3D‑Printer Feedstock Short script. Trigger: PRT_CTRL inventory shows 0.6 kg engineering filament remaining vs. 1.8 kg needed within 48 h for valve clamps and a manifold ring. Tasks: evaluate substitutes (recycled HDPE, basalt‑fiber regolith composite, sintered regolith) with LOGT/ISRU/LAB; define print/process settings and qualification tests. Constraints: mechanical/thermal spec, outgassing limits, contamination control. Deliverables: (1) candidate ranking with pros/cons; (2) BOM & print parameters; (3) test protocol (strength, thermal cycle, off‑gassing); (4) production schedule with risk/mitigations.",
    ),
    (
        "ATC_ResupplyWindow",
        "You are running the ATC Resupply Window script. Trigger: two vehicles request overlapping landing slots; EVA drone ops nearby. Tasks: allocate ATC_LZ windows, COM air‑ground timeslots, ground handling flow with LOGT, no‑fly zones for UAV_COM/UAV_MAP. Constraints: safety first; fixed approach corridor; limited ground crew. Deliverables: (1) slot schedule & right‑of‑way; (2) comms plan; (3) ground handling timeline; (4) reserves/abort windows and notification script.",
    ),
];
