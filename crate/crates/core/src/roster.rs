//! The base organisation: 71 human role agents, 22 asset controllers and the
//! asset ownership table (primary operator plus ordered backups).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RosterError {
    #[error("unknown asset `{0}`")]
    UnknownAsset(AgentId),
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("duplicate agent id `{0}`")]
    DuplicateAgent(AgentId),
    #[error("agent `{0}`: kind and layer disagree (assets live in the Assets layer and nowhere else)")]
    KindLayerMismatch(AgentId),
    #[error("asset `{0}` has no ownership record")]
    MissingOwnership(AgentId),
    #[error("ownership record for `{asset}` is invalid: {reason}")]
    InvalidOwnership { asset: AgentId, reason: String },
    #[error("failed to read roster file: {0}")]
    Io(String),
    #[error("failed to parse roster file: {0}")]
    Parse(String),
}

/// Short uppercase identifier such as `GEO_01` or `ROV_SCI_01`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(String);

impl AgentId {
    pub fn new(id: impl Into<String>) -> Self {
        AgentId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Trailing numeric suffix (`GEO_05` -> 5), used for lowest-numbered tie-breaking.
    pub fn ordinal(&self) -> Option<u32> {
        self.0.rsplit_once('_').and_then(|(_, n)| n.parse().ok())
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        AgentId(s.to_string())
    }
}

impl PartialEq<str> for AgentId {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for AgentId {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgentKind {
    Human,
    Asset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Layer {
    StrategyGovernance,
    MissionOperations,
    CivicsWellbeing,
    InfrastructureIsru,
    ScienceExploration,
    DataAiDigitalTwin,
    Assets,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub id: AgentId,
    pub kind: AgentKind,
    pub layer: Layer,
    pub group: String,
    pub title: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlarmLevel {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OwnershipRecord {
    pub asset: AgentId,
    pub primary: AgentId,
    pub backups: Vec<AgentId>,
    pub alarm: AlarmLevel,
    pub function: String,
}

/// Immutable organisation snapshot. Agents keep their transcription order,
/// which is the order used by the tick loop and availability sampling.
#[derive(Debug, Clone, Serialize)]
pub struct Roster {
    agents: Vec<AgentSpec>,
    #[serde(serialize_with = "ownership_as_list")]
    ownership: BTreeMap<AgentId, OwnershipRecord>,
    #[serde(skip)]
    index: HashMap<AgentId, usize>,
}

fn ownership_as_list<S: serde::Serializer>(
    map: &BTreeMap<AgentId, OwnershipRecord>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    ser.collect_seq(map.values())
}

#[derive(Deserialize)]
struct RosterFile {
    agents: Vec<AgentSpec>,
    ownership: Vec<OwnershipRecord>,
}

impl Roster {
    /// Validates and assembles a roster from raw parts.
    pub fn from_parts(
        agents: Vec<AgentSpec>,
        ownership: Vec<OwnershipRecord>,
    ) -> Result<Self, RosterError> {
        let mut index = HashMap::with_capacity(agents.len());
        for (i, a) in agents.iter().enumerate() {
            if a.id.as_str().is_empty() {
                return Err(RosterError::Parse("empty agent id".into()));
            }
            if (a.kind == AgentKind::Asset) != (a.layer == Layer::Assets) {
                return Err(RosterError::KindLayerMismatch(a.id.clone()));
            }
            if index.insert(a.id.clone(), i).is_some() {
                return Err(RosterError::DuplicateAgent(a.id.clone()));
            }
        }

        let kind_of = |id: &AgentId| index.get(id).map(|&i| agents[i].kind);
        let mut by_asset = BTreeMap::new();
        for rec in ownership {
            let bad = |reason: &str| RosterError::InvalidOwnership {
                asset: rec.asset.clone(),
                reason: reason.to_string(),
            };
            match kind_of(&rec.asset) {
                Some(AgentKind::Asset) => {}
                Some(AgentKind::Human) => return Err(bad("owned id is not an asset")),
                None => return Err(RosterError::UnknownAgent(rec.asset.clone())),
            }
            if kind_of(&rec.primary) != Some(AgentKind::Human) {
                return Err(bad("primary is not a known human agent"));
            }
            let mut seen = HashSet::new();
            for b in &rec.backups {
                if kind_of(b) != Some(AgentKind::Human) {
                    return Err(bad("backup is not a known human agent"));
                }
                if *b == rec.primary {
                    return Err(bad("primary also listed as backup"));
                }
                if !seen.insert(b) {
                    return Err(bad("duplicate backup"));
                }
            }
            if by_asset.contains_key(&rec.asset) {
                return Err(bad("duplicate ownership record"));
            }
            by_asset.insert(rec.asset.clone(), rec);
        }
        for a in agents.iter().filter(|a| a.kind == AgentKind::Asset) {
            if !by_asset.contains_key(&a.id) {
                return Err(RosterError::MissingOwnership(a.id.clone()));
            }
        }

        Ok(Roster {
            agents,
            ownership: by_asset,
            index,
        })
    }

    /// Parses a JSON override document `{ "agents": [...], "ownership": [...] }`.
    pub fn from_json_str(s: &str) -> Result<Self, RosterError> {
        let file: RosterFile =
            serde_json::from_str(s).map_err(|e| RosterError::Parse(e.to_string()))?;
        Roster::from_parts(file.agents, file.ownership)
    }

    pub fn load(path: &Path) -> Result<Self, RosterError> {
        let text = std::fs::read_to_string(path).map_err(|e| RosterError::Io(e.to_string()))?;
        Roster::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("roster serializes")
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn get(&self, id: &AgentId) -> Option<&AgentSpec> {
        self.index.get(id).map(|&i| &self.agents[i])
    }

    pub fn contains(&self, id: &AgentId) -> bool {
        self.index.contains_key(id)
    }

    /// Position of the agent in roster order.
    pub fn position(&self, id: &AgentId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn group_of(&self, id: &AgentId) -> Option<&str> {
        self.get(id).map(|a| a.group.as_str())
    }

    pub fn humans(&self) -> impl Iterator<Item = &AgentSpec> {
        self.agents.iter().filter(|a| a.kind == AgentKind::Human)
    }

    pub fn assets(&self) -> impl Iterator<Item = &AgentSpec> {
        self.agents.iter().filter(|a| a.kind == AgentKind::Asset)
    }

    pub fn ownership(&self) -> impl Iterator<Item = &OwnershipRecord> {
        self.ownership.values()
    }

    pub fn ownership_of(&self, asset: &AgentId) -> Result<&OwnershipRecord, RosterError> {
        self.ownership
            .get(asset)
            .ok_or_else(|| RosterError::UnknownAsset(asset.clone()))
    }

    /// Members of a group sorted by numeric suffix, then id.
    pub fn members_of(&self, group: &str) -> Vec<&AgentSpec> {
        let mut m: Vec<_> = self.agents.iter().filter(|a| a.group == group).collect();
        m.sort_by(|a, b| {
            (a.id.ordinal().unwrap_or(u32::MAX), &a.id)
                .cmp(&(b.id.ordinal().unwrap_or(u32::MAX), &b.id))
        });
        m
    }

    /// Lowest-numbered member of `group`, the deterministic group representative.
    pub fn lowest_member(&self, group: &str) -> Option<&AgentSpec> {
        self.members_of(group).into_iter().next()
    }

    /// Distinct groups in first-appearance order.
    pub fn groups(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.agents
            .iter()
            .filter(|a| seen.insert(a.group.as_str()))
            .map(|a| a.group.as_str())
            .collect()
    }

    /// Human controllers named in any ownership record, in roster order.
    pub fn controllers(&self) -> Vec<&AgentId> {
        let named: HashSet<&AgentId> = self
            .ownership
            .values()
            .flat_map(|r| std::iter::once(&r.primary).chain(r.backups.iter()))
            .collect();
        self.agents
            .iter()
            .filter(|a| named.contains(&a.id))
            .map(|a| &a.id)
            .collect()
    }
}

/// Free-function form of [`Roster::ownership_of`].
pub fn ownership_of<'r>(
    roster: &'r Roster,
    asset: &AgentId,
) -> Result<&'r OwnershipRecord, RosterError> {
    roster.ownership_of(asset)
}

const HUMANS: &[(&str, Layer, &str)] = &[
    ("CMD_01", Layer::StrategyGovernance, "Commander"),
    ("EARTH_01", Layer::StrategyGovernance, "Earth Liaison Officer (Advisory/Resource Interface)"),
    ("OPS_01", Layer::StrategyGovernance, "Operations Director"),
    ("SEO_01", Layer::StrategyGovernance, "Safety & Ethics Officer (Independent Audit Line)"),
    ("COM_04", Layer::MissionOperations, "Cybersecurity / Zero-Trust Engineer"),
    ("COM_03", Layer::MissionOperations, "Navigation / Visual Odometry Engineer"),
    ("COM_02", Layer::MissionOperations, "Network & Edge Computing Engineer"),
    ("COM_01", Layer::MissionOperations, "RF & Link Budget Engineer"),
    ("COM_05", Layer::MissionOperations, "Scheduling Interface Engineer (AI-Integrated)"),
    ("COM_06", Layer::MissionOperations, "Translator / Dialect Normalizer"),
    ("EVA_01", Layer::MissionOperations, "EVA Lead / Safety Officer"),
    ("EVA_04", Layer::MissionOperations, "Rapid Mechanical Repair Technician"),
    ("EVA_02", Layer::MissionOperations, "Spacesuit Systems Engineer"),
    ("EVA_03", Layer::MissionOperations, "UAV/UGV Operator"),
    ("EVA_05", Layer::MissionOperations, "Geological Sampling Lead"),
    ("LOGT_02", Layer::MissionOperations, "AM/3D Printing Technician (Spares)"),
    ("LOGT_05", Layer::MissionOperations, "Procurement & Resupply Planner"),
    ("LOGT_04", Layer::MissionOperations, "Transport & Handling Coordinator"),
    ("LOGT_01", Layer::MissionOperations, "Inventory & Rationing Lead"),
    ("LOGT_03", Layer::MissionOperations, "Waste & Recycling Engineer"),
    ("MED_01", Layer::CivicsWellbeing, "Emergency/Trauma Surgeon"),
    ("MED_02", Layer::CivicsWellbeing, "Internal Medicine & Infection Control Physician"),
    ("MED_05", Layer::CivicsWellbeing, "Pharmacology & Biobanking Physician"),
    ("MED_03", Layer::CivicsWellbeing, "Space Physiology & Rehabilitation Physician"),
    ("MED_04", Layer::CivicsWellbeing, "Telemedicine & Ultrasound Physician"),
    ("NUR_03", Layer::CivicsWellbeing, "EVA Field Nursing"),
    ("NUR_01", Layer::CivicsWellbeing, "ICU Nursing"),
    ("NUR_04", Layer::CivicsWellbeing, "Mental Health Nursing"),
    ("NUR_05", Layer::CivicsWellbeing, "Nutrition & Food Safety"),
    ("NUR_02", Layer::CivicsWellbeing, "Surgical Instruments / Sterile Processing"),
    ("PSY_01", Layer::CivicsWellbeing, "Psychology/Morale Officer (Conflict Mediation)"),
    ("AGRI_05", Layer::InfrastructureIsru, "Algae/Protein Bioreactor Specialist"),
    ("AGRI_01", Layer::InfrastructureIsru, "Greenhouse O&M (Light Recipes)"),
    ("AGRI_02", Layer::InfrastructureIsru, "Hydroponics & Aeroponics Specialist"),
    ("AGRI_04", Layer::InfrastructureIsru, "Nutrition & Formulation Specialist"),
    ("AGRI_03", Layer::InfrastructureIsru, "Plant Pathology / Microbiome Specialist"),
    ("ISRU_01", Layer::InfrastructureIsru, "Excavation & Conveyance Engineer"),
    ("ISRU_04", Layer::InfrastructureIsru, "Propellant (Methane/Oxygen) Synthesis Engineer"),
    ("ISRU_05", Layer::InfrastructureIsru, "Quality Inspection & Assay Engineer"),
    ("ISRU_02", Layer::InfrastructureIsru, "Sintering/Brick & Structural Materials Engineer"),
    ("ISRU_03", Layer::InfrastructureIsru, "Smelting / Oxygen Electrolysis Engineer"),
    ("LSS_01", Layer::InfrastructureIsru, "Atmosphere & Filtration Engineer"),
    ("LSS_04", Layer::InfrastructureIsru, "Bioregenerative / Algal Bioreactor Engineer"),
    ("LSS_05", Layer::InfrastructureIsru, "Monitoring & Automation (PLC/SCADA)"),
    ("LSS_03", Layer::InfrastructureIsru, "Thermal Control & Dust Mitigation Engineer"),
    ("LSS_02", Layer::InfrastructureIsru, "Water Recycling & Purification Engineer"),
    ("MNT_03", Layer::InfrastructureIsru, "Controls/Software Maintenance Technician"),
    ("MNT_02", Layer::InfrastructureIsru, "Electrical Maintenance Technician"),
    ("MNT_01", Layer::InfrastructureIsru, "Mechanical Maintenance Technician"),
    ("MNT_05", Layer::InfrastructureIsru, "Spares/Tooling Administrator"),
    ("MNT_04", Layer::InfrastructureIsru, "Structural/Sealing Maintenance Technician"),
    ("PWR_04", Layer::InfrastructureIsru, "Energy Storage Systems Engineer"),
    ("PWR_03", Layer::InfrastructureIsru, "Microgrid & Power Flow Dispatch Engineer"),
    ("PWR_05", Layer::InfrastructureIsru, "Power Electronics / Inverter Engineer"),
    ("PWR_02", Layer::InfrastructureIsru, "Reactor/RTG O&M Engineer"),
    ("PWR_01", Layer::InfrastructureIsru, "Solar Farm O&M Engineer"),
    ("BIO_02", Layer::ScienceExploration, "Ecosystem Modeling & Monitoring"),
    ("BIO_01", Layer::ScienceExploration, "Microbiologist / Contamination Control"),
    ("ENV_01", Layer::ScienceExploration, "Environmental Sensing / Air & Water Quality"),
    ("ENV_02", Layer::ScienceExploration, "Radiation Monitoring & Protection"),
    ("GEO_05", Layer::ScienceExploration, "Astrobiologist / Biosignatures"),
    ("GEO_03", Layer::ScienceExploration, "Geochemist (Volatiles/Hydrated Minerals)"),
    ("GEO_04", Layer::ScienceExploration, "Geophysicist (GPR/Magnetics/Seismics)"),
    ("GEO_02", Layer::ScienceExploration, "Mineralogist & Petrologist"),
    ("GEO_01", Layer::ScienceExploration, "Sedimentology & Stratigraphy Geologist"),
    ("LAB_01", Layer::ScienceExploration, "Laboratory Manager (Sample Chain)"),
    ("AI_03", Layer::DataAiDigitalTwin, "Digital Twin / Co-Simulation Engineer (Energy–Water–Thermal–Air)"),
    ("AI_02", Layer::DataAiDigitalTwin, "Robotic Autonomy / Multi-Agent Swarm Engineer"),
    ("AI_04", Layer::DataAiDigitalTwin, "Vision/Mapping/SLAM Engineer"),
    ("AI_05", Layer::DataAiDigitalTwin, "Visualization & Mission Replay Engineer"),
    ("DKM_01", Layer::DataAiDigitalTwin, "Data Platform / Governance Lead"),
];

// (id, title, group)
const ASSETS: &[(&str, &str, &str)] = &[
    ("AIRLOCK_CTRL_01", "Airlock Controller", "AIRLOCK"),
    ("ARM_CTRL_01", "Robotic Manipulator", "ARM_CTRL"),
    ("ATC_LZ_01", "Landing Zone Air/Traffic Control", "ATC"),
    ("COMSAT_CTRL_01", "Relay/Orbital Communications Controller", "COMSAT"),
    ("GH_CTRL_01", "Greenhouse Zone Controller (Lighting, Irrigation)", "GH_CTRL"),
    ("GH_CTRL_02", "Greenhouse Zone Controller (Nutrient Solution)", "GH_CTRL"),
    ("HAB_01", "Habitat Controller (Air/Water Circulation)", "HAB"),
    ("HAB_02", "Habitat Controller (Cabin Pressure)", "HAB"),
    ("HAB_03", "Habitat Controller (Alarms)", "HAB"),
    ("ISRU_PLANT_01", "ISRU Plant Controller", "ISRU_PLANT"),
    ("LAB_INSTR_01", "Laboratory Instrument Suite", "LAB_INSTR"),
    ("NET_SEC_CTRL_01", "Network Security Controller", "NETSEC"),
    ("NUKE_CTRL_01", "Reactor Controller", "NUKE_CTRL"),
    ("PRT_CTRL_01", "3D Printer Controller", "PRT_CTRL"),
    ("ROV_CARGO_01", "Cargo Rover", "ROV_CARGO"),
    ("ROV_INSP_01", "Inspection Rover", "ROV_INSP"),
    ("ROV_SCI_01", "Science Sampling Rover", "ROV_SCI"),
    ("SOL_CTRL_01", "Solar Farm Controller", "SOL_CTRL"),
    ("SUIT_CTRL_01", "Spacesuit Controller", "SUIT"),
    ("UAV_COM_01", "Communications Relay UAV", "UAV_COM"),
    ("UAV_MAP_01", "Mapping UAV", "UAV_MAP"),
    ("WX_STATION_01", "Weather Station", "WX"),
];

// (asset, primary, backup, alarm, function)
const OWNERSHIP: &[(&str, &str, &str, AlarmLevel, &str)] = &[
    ("HAB_01", "LSS_05", "LSS_01", AlarmLevel::A, "Air/water circulation; cabin pressure; alarms"),
    ("HAB_02", "LSS_05", "LSS_02", AlarmLevel::A, "Air/water circulation; cabin pressure; alarms"),
    ("HAB_03", "LSS_05", "LSS_03", AlarmLevel::A, "Air/water circulation; cabin pressure; alarms"),
    ("AIRLOCK_CTRL_01", "EVA_01", "MNT_04", AlarmLevel::A, "Interlocks; depress/repress; contamination control"),
    ("SUIT_CTRL_01", "EVA_02", "NUR_03", AlarmLevel::A, "PLSS telemetry; consumables/time remaining; leak alarms"),
    ("ROV_SCI_01", "GEO_05", "EVA_05", AlarmLevel::B, "Drilling; sampling cache; imaging"),
    ("ROV_CARGO_01", "LOGT_04", "MNT_01", AlarmLevel::B, "Payload transport; follow navigation"),
    ("ROV_INSP_01", "MNT_03", "MNT_02", AlarmLevel::B, "Structural inspection; IR imaging"),
    ("UAV_MAP_01", "COM_03", "AI_04", AlarmLevel::C, "Aerial mapping; photogrammetry"),
    ("UAV_COM_01", "COM_02", "COM_01", AlarmLevel::B, "Relay; ad-hoc network"),
    ("ISRU_PLANT_01", "ISRU_03", "ISRU_04", AlarmLevel::A, "Mining; electrolysis; methane synthesis"),
    ("SOL_CTRL_01", "PWR_01", "PWR_05", AlarmLevel::B, "Sun tracking; panel cleaning; inverter control"),
    ("NUKE_CTRL_01", "PWR_02", "PWR_03", AlarmLevel::A, "Power dispatch; safe shutdown (SCRAM)"),
    ("GH_CTRL_01", "AGRI_01", "AGRI_02", AlarmLevel::B, "Lighting; irrigation; nutrient dosing"),
    ("GH_CTRL_02", "AGRI_03", "AGRI_04", AlarmLevel::B, "Lighting; irrigation; nutrient dosing"),
    ("PRT_CTRL_01", "LOGT_02", "MNT_03", AlarmLevel::C, "Additive manufacturing queue; material/nozzle change"),
    ("ARM_CTRL_01", "MNT_01", "MNT_02", AlarmLevel::B, "Assembly; maintenance; material handling"),
    ("WX_STATION_01", "ENV_02", "COM_01", AlarmLevel::B, "Storm alerts; dust concentration; irradiance"),
    ("ATC_LZ_01", "OPS_01", "COM_05", AlarmLevel::B, "Landing-zone traffic control; windows; no-fly zones"),
    ("LAB_INSTR_01", "LAB_01", "MED_05", AlarmLevel::C, "GC/MS; XRF; cold-chain management"),
    ("NET_SEC_CTRL_01", "COM_04", "DKM_01", AlarmLevel::A, "Whitelisting; segmentation; key rotation"),
    ("COMSAT_CTRL_01", "COM_01", "COM_02", AlarmLevel::A, "Bandwidth allocation; link switching"),
];

fn human_group(id: &str) -> String {
    id.rsplit_once('_').map_or(id, |(g, _)| g).to_string()
}

/// The compiled-in default roster.
pub fn build_default_roster() -> Roster {
    let humans = HUMANS.iter().map(|&(id, layer, title)| AgentSpec {
        id: id.into(),
        kind: AgentKind::Human,
        layer,
        group: human_group(id),
        title: title.to_string(),
    });
    let assets = ASSETS.iter().map(|&(id, title, group)| AgentSpec {
        id: id.into(),
        kind: AgentKind::Asset,
        layer: Layer::Assets,
        group: group.to_string(),
        title: title.to_string(),
    });
    let ownership = OWNERSHIP
        .iter()
        .map(|&(asset, primary, backup, alarm, function)| OwnershipRecord {
            asset: asset.into(),
            primary: primary.into(),
            backups: vec![backup.into()],
            alarm,
            function: function.to_string(),
        })
        .collect();
    Roster::from_parts(humans.chain(assets).collect(), ownership)
        .expect("compiled-in roster is valid")
}
