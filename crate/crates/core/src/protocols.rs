//! Group dialects and the translator mapping between them.
//!
//! Every lexicon maps the same canonical concept set to group-specific
//! surface terms. Translation is longest-match, left-to-right, case
//! sensitive, on whole-word boundaries.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roster::AgentId;

pub const TRANSLATOR: &str = "COM_06";

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("source and target lexicons are both `{0}`")]
    SameGroup(String),
    #[error("lexicon `{group}`: surface term `{term}` used for more than one concept")]
    DuplicateSurface { group: String, term: String },
    #[error("lexicon `{group}`: surface term `{shorter}` is a word prefix of `{longer}`")]
    PrefixConflict { group: String, shorter: String, longer: String },
    #[error("lexicon `{group}`: concept set differs from the base ({detail})")]
    ConceptMismatch { group: String, detail: String },
    #[error("lexicon `{group}`: empty surface term for `{concept}`")]
    EmptyTerm { group: String, concept: String },
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("lexicon override: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolMode {
    #[default]
    Off,
    Hetero,
}

impl fmt::Display for ProtocolMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProtocolMode::Off => "off",
            ProtocolMode::Hetero => "hetero",
        })
    }
}

impl FromStr for ProtocolMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(ProtocolMode::Off),
            "hetero" => Ok(ProtocolMode::Hetero),
            other => Err(format!("unknown protocols mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub group: String,
    /// Canonical concept -> surface term.
    pub terms: BTreeMap<String, String>,
}

impl Lexicon {
    pub fn surface(&self, concept: &str) -> Option<&str> {
        self.terms.get(concept).map(String::as_str)
    }

    /// Checks surface uniqueness and word-level prefix freedom.
    pub fn validate(&self) -> Result<(), ProtocolError> {
        let mut seen = BTreeSet::new();
        for (concept, term) in &self.terms {
            if term.split_whitespace().next().is_none() {
                return Err(ProtocolError::EmptyTerm {
                    group: self.group.clone(),
                    concept: concept.clone(),
                });
            }
            if !seen.insert(term.as_str()) {
                return Err(ProtocolError::DuplicateSurface {
                    group: self.group.clone(),
                    term: term.clone(),
                });
            }
        }
        let split: Vec<Vec<&str>> = self
            .terms
            .values()
            .map(|t| t.split_whitespace().collect())
            .collect();
        for a in &split {
            for b in &split {
                if a.len() < b.len() && b.starts_with(a) {
                    return Err(ProtocolError::PrefixConflict {
                        group: self.group.clone(),
                        shorter: a.join(" "),
                        longer: b.join(" "),
                    });
                }
            }
        }
        Ok(())
    }

    /// Replaces `{CONCEPT}` placeholders with this lexicon's surface terms.
    /// Unknown placeholders are left as written.
    pub fn render(&self, template: &str) -> String {
        let mut out = String::with_capacity(template.len());
        let mut rest = template;
        while let Some(open) = rest.find('{') {
            out.push_str(&rest[..open]);
            let after = &rest[open + 1..];
            match after.find('}') {
                Some(close) => {
                    let key = &after[..close];
                    match self.surface(key) {
                        Some(term) => out.push_str(term),
                        None => {
                            out.push('{');
                            out.push_str(key);
                            out.push('}');
                        }
                    }
                    rest = &after[close + 1..];
                }
                None => {
                    out.push_str(&rest[open..]);
                    rest = "";
                }
            }
        }
        out.push_str(rest);
        out
    }
}

const BASE_TERMS: &[(&str, &str)] = &[
    ("WATER_BEARING_MINERAL", "hydrated mineral"),
    ("TRAVERSE_ROUTE", "traverse route"),
    ("HAZARD_ZONE", "hazard zone"),
    ("SAMPLE_CACHE", "sample cache"),
    ("LINK_WINDOW", "link window"),
    ("RELAY_ASSET", "relay asset"),
    ("POSITION_FIX", "position fix"),
    ("TERRAIN_MAP", "terrain map"),
    ("POWER_MARGIN", "power margin"),
    ("LOAD_SHED", "load shed"),
    ("BATTERY_RESERVE", "battery reserve"),
    ("CO2_LOAD", "CO2 load"),
    ("CABIN_PRESSURE", "cabin pressure"),
    ("LEAK_RATE", "leak rate"),
    ("THERMAL_LIMIT", "thermal limit"),
    ("OXYGEN_OUTPUT", "oxygen output"),
    ("FEEDSTOCK", "feedstock"),
    ("CONTAMINATION", "contamination"),
    ("CROP_STRESS", "crop stress"),
    ("REPAIR_ORDER", "repair order"),
];

const OVERRIDES: &[(&str, &[(&str, &str)])] = &[
    (
        "GEO",
        &[
            ("WATER_BEARING_MINERAL", "hydrated silicates"),
            ("TRAVERSE_ROUTE", "geologic transect"),
            ("HAZARD_ZONE", "unstable regolith"),
            ("SAMPLE_CACHE", "core depot"),
            ("TERRAIN_MAP", "geologic map"),
        ],
    ),
    (
        "AI",
        &[
            ("WATER_BEARING_MINERAL", "volatile signature"),
            ("TRAVERSE_ROUTE", "planned trajectory"),
            ("HAZARD_ZONE", "anomaly region"),
            ("POSITION_FIX", "state estimate"),
            ("TERRAIN_MAP", "elevation model"),
        ],
    ),
    (
        "COM",
        &[
            ("LINK_WINDOW", "contact pass"),
            ("RELAY_ASSET", "relay node"),
            ("POSITION_FIX", "ranging solution"),
            ("TERRAIN_MAP", "coverage map"),
        ],
    ),
    (
        "LAB",
        &[
            ("WATER_BEARING_MINERAL", "hydrous phase"),
            ("SAMPLE_CACHE", "sample queue"),
            ("CONTAMINATION", "assay contamination"),
        ],
    ),
    (
        "BIO",
        &[
            ("WATER_BEARING_MINERAL", "habitable brine"),
            ("SAMPLE_CACHE", "culture store"),
            ("CONTAMINATION", "biocontamination"),
            ("CROP_STRESS", "plant pathology"),
        ],
    ),
    (
        "LSS",
        &[
            ("CO2_LOAD", "scrubber load"),
            ("CABIN_PRESSURE", "total pressure"),
            ("LEAK_RATE", "pressure decay"),
            ("OXYGEN_OUTPUT", "OGA output"),
        ],
    ),
    (
        "PWR",
        &[
            ("POWER_MARGIN", "bus margin"),
            ("LOAD_SHED", "load curtailment"),
            ("BATTERY_RESERVE", "state of charge"),
            ("THERMAL_LIMIT", "reactor thermal ceiling"),
        ],
    ),
    (
        "ISRU",
        &[
            ("WATER_BEARING_MINERAL", "ice-bearing ore"),
            ("FEEDSTOCK", "regolith feed"),
            ("OXYGEN_OUTPUT", "O2 production rate"),
            ("THERMAL_LIMIT", "cell redline"),
        ],
    ),
    (
        "AGRI",
        &[
            ("CROP_STRESS", "canopy stress"),
            ("CO2_LOAD", "grow-bay CO2"),
            ("CONTAMINATION", "root-zone pathogen"),
        ],
    ),
    (
        "MNT",
        &[
            ("REPAIR_ORDER", "work order"),
            ("LEAK_RATE", "seal leakage"),
            ("FEEDSTOCK", "spares stock"),
        ],
    ),
];

/// The canonical concept identifiers, in declaration order.
pub fn concepts() -> impl Iterator<Item = &'static str> {
    BASE_TERMS.iter().map(|&(c, _)| c)
}

/// Lexicons keyed by group, plus a base vocabulary for groups without a
/// dialect of their own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconSet {
    base: BTreeMap<String, String>,
    lexicons: BTreeMap<String, Lexicon>,
}

impl LexiconSet {
    pub fn get(&self, group: &str) -> Option<&Lexicon> {
        self.lexicons.get(group)
    }

    /// The group's dialect, or the base vocabulary tagged with `group`.
    pub fn for_group(&self, group: &str) -> Cow<'_, Lexicon> {
        match self.lexicons.get(group) {
            Some(l) => Cow::Borrowed(l),
            None => Cow::Owned(Lexicon {
                group: group.to_string(),
                terms: self.base.clone(),
            }),
        }
    }

    pub fn groups(&self) -> impl Iterator<Item = &str> {
        self.lexicons.keys().map(String::as_str)
    }

    pub fn lexicons(&self) -> impl Iterator<Item = &Lexicon> {
        self.lexicons.values()
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        let base = Lexicon { group: "BASE".into(), terms: self.base.clone() };
        base.validate()?;
        for lex in self.lexicons.values() {
            let a: BTreeSet<_> = lex.terms.keys().collect();
            let b: BTreeSet<_> = self.base.keys().collect();
            if a != b {
                let missing: Vec<_> = b.difference(&a).map(|s| s.as_str()).collect();
                let extra: Vec<_> = a.difference(&b).map(|s| s.as_str()).collect();
                return Err(ProtocolError::ConceptMismatch {
                    group: lex.group.clone(),
                    detail: format!("missing {missing:?}, extra {extra:?}"),
                });
            }
            lex.validate()?;
        }
        Ok(())
    }

    /// Applies `(concept, group, surface)` rows; a group without a dialect
    /// gets one seeded from the base vocabulary.
    pub fn apply_overrides<R: std::io::Read>(&mut self, reader: R) -> Result<(), ProtocolError> {
        #[derive(Deserialize)]
        struct Row {
            concept: String,
            group: String,
            surface: String,
        }
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        for row in rdr.deserialize() {
            let row: Row = row?;
            if !self.base.contains_key(&row.concept) {
                return Err(ProtocolError::UnknownConcept(row.concept));
            }
            let base = self.base.clone();
            self.lexicons
                .entry(row.group.clone())
                .or_insert_with(|| Lexicon { group: row.group.clone(), terms: base })
                .terms
                .insert(row.concept, row.surface);
        }
        self.validate()
    }

    pub fn load_overrides(&mut self, path: &Path) -> Result<(), ProtocolError> {
        let file = std::fs::File::open(path).map_err(csv::Error::from)?;
        self.apply_overrides(file)
    }
}

/// Compiled dialects for every group in the default whitelist.
pub fn default_lexicons() -> LexiconSet {
    let base: BTreeMap<String, String> = BASE_TERMS
        .iter()
        .map(|&(c, t)| (c.to_string(), t.to_string()))
        .collect();
    let lexicons = OVERRIDES
        .iter()
        .map(|&(group, over)| {
            let mut terms = base.clone();
            for &(c, t) in over {
                terms.insert(c.to_string(), t.to_string());
            }
            (group.to_string(), Lexicon { group: group.to_string(), terms })
        })
        .collect();
    LexiconSet { base, lexicons }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationRecord {
    pub source_group: String,
    pub target_group: String,
    pub original: String,
    pub translated: String,
    pub mapped_terms: Vec<(String, String)>,
    pub unmapped: Vec<String>,
    pub translator: AgentId,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '\'')
}

/// Byte spans of maximal word-character runs.
fn word_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (is_word_char(c), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                spans.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

struct Matcher<'a> {
    /// (words, surface, concept), longest first.
    terms: Vec<(Vec<&'a str>, &'a str, &'a str)>,
}

impl<'a> Matcher<'a> {
    fn new(lex: &'a Lexicon) -> Self {
        let mut terms: Vec<_> = lex
            .terms
            .iter()
            .map(|(c, t)| (t.split_whitespace().collect::<Vec<_>>(), t.as_str(), c.as_str()))
            .collect();
        terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.1.cmp(b.1)));
        Matcher { terms }
    }

    /// Longest term starting at word `i`: (word count, surface, concept).
    fn at(&self, text: &str, spans: &[(usize, usize)], i: usize) -> Option<(usize, &'a str, &'a str)> {
        'term: for (words, surface, concept) in &self.terms {
            if i + words.len() > spans.len() {
                continue;
            }
            for (k, w) in words.iter().enumerate() {
                let (s, e) = spans[i + k];
                if &text[s..e] != *w {
                    continue 'term;
                }
                if k > 0 {
                    let gap = &text[spans[i + k - 1].1..s];
                    if !gap.chars().all(char::is_whitespace) {
                        continue 'term;
                    }
                }
            }
            return Some((words.len(), surface, concept));
        }
        None
    }
}

/// Rewrites `msg` from `src`'s dialect into `dst`'s.
pub fn translate(msg: &str, src: &Lexicon, dst: &Lexicon) -> Result<(String, TranslationRecord), ProtocolError> {
    if src.group == dst.group {
        return Err(ProtocolError::SameGroup(src.group.clone()));
    }
    let spans = word_spans(msg);
    let src_m = Matcher::new(src);
    let dst_m = Matcher::new(dst);
    let mut out = String::with_capacity(msg.len());
    let mut mapped = Vec::new();
    let mut unmapped = Vec::new();
    let mut cursor = 0;
    let mut i = 0;
    while i < spans.len() {
        if let Some((n, surface, concept)) = src_m.at(msg, &spans, i) {
            let to = dst.surface(concept).ok_or_else(|| ProtocolError::UnknownConcept(concept.to_string()))?;
            out.push_str(&msg[cursor..spans[i].0]);
            out.push_str(to);
            cursor = spans[i + n - 1].1;
            mapped.push((surface.to_string(), to.to_string()));
            i += n;
        } else if let Some((n, surface, _)) = dst_m.at(msg, &spans, i) {
            unmapped.push(surface.to_string());
            i += n;
        } else {
            i += 1;
        }
    }
    out.push_str(&msg[cursor..]);
    let record = TranslationRecord {
        source_group: src.group.clone(),
        target_group: dst.group.clone(),
        original: msg.to_string(),
        translated: out.clone(),
        mapped_terms: mapped,
        unmapped,
        translator: AgentId::from(TRANSLATOR),
    };
    Ok((out, record))
}
