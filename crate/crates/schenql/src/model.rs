//! The bibliographic data model: publications, persons, venues, institutions,
//! and the edges between them (authorship, citations, affiliations, keywords).
//!
//! A [`FixtureDataset`] is the in-memory form of a fixture directory. It keeps
//! records in insertion order and may temporarily hold invalid data (duplicate
//! keys, dangling edges); [`validate_dataset`] reports every broken invariant
//! so ingestion can reject a load atomically.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Publication kind. dblp distinguishes these five.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PubType {
    Article,
    Book,
    Chapter,
    Masterthesis,
    Phdthesis,
}

impl PubType {
    pub const ALL: [PubType; 5] = [
        PubType::Article,
        PubType::Book,
        PubType::Chapter,
        PubType::Masterthesis,
        PubType::Phdthesis,
    ];

    /// Lowercase name as stored in the `publication.type` column.
    pub fn as_str(self) -> &'static str {
        match self {
            PubType::Article => "article",
            PubType::Book => "book",
            PubType::Chapter => "chapter",
            PubType::Masterthesis => "masterthesis",
            PubType::Phdthesis => "phdthesis",
        }
    }
}

impl fmt::Display for PubType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Venues are either conferences or journals; the kind is fixed at creation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VenueKind {
    Conference,
    Journal,
}

/// Role a person plays on a publication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Author,
    Editor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Publication {
    pub key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dblp_key: Option<String>,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i64>,
    pub pub_type: PubType,
    /// Conference or journal the publication appeared in, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue_key: Option<String>,
    /// Journal volume; meaningful only for journal publications.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Person {
    pub key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dblp_key: Option<String>,
    pub primary_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orcid: Option<String>,
    /// All known names, including the primary one.
    #[serde(default)]
    pub names: BTreeSet<String>,
}

impl Person {
    /// Ensures the primary name is listed among the aliases.
    pub fn normalize(mut self) -> Self {
        self.names.insert(self.primary_name.clone());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Venue {
    pub key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dblp_key: Option<String>,
    pub kind: VenueKind,
    pub name: String,
    pub acronym: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Institution {
    pub key: String,
    pub name: String,
    pub city: String,
    /// Lowercase two-letter country code.
    pub country: String,
}

/// Authorship/editorship edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Authorship {
    pub person_key: String,
    pub publication_key: String,
    pub role: Role,
}

/// Citation edge: `citing_key` cites `cited_key`. The cited paper is among the
/// references of the citing paper; the citing paper is among the citations of
/// the cited paper.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReferenceEdge {
    pub citing_key: String,
    pub cited_key: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Affiliation {
    pub person_key: String,
    pub institution_key: String,
}

/// Keyword attached to a publication, conference, or journal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KeywordEntry {
    pub entity_key: String,
    pub keyword: String,
}

/// In-memory bibliographic graph. Immutable once built; validation and
/// counting are pure functions over it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixtureDataset {
    pub publications: Vec<Publication>,
    pub persons: Vec<Person>,
    pub venues: Vec<Venue>,
    pub institutions: Vec<Institution>,
    pub authorship: Vec<Authorship>,
    pub reference_edges: Vec<ReferenceEdge>,
    pub affiliations: Vec<Affiliation>,
    pub keywords: Vec<KeywordEntry>,
}

impl FixtureDataset {
    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
            && self.persons.is_empty()
            && self.venues.is_empty()
            && self.institutions.is_empty()
            && self.authorship.is_empty()
            && self.reference_edges.is_empty()
            && self.affiliations.is_empty()
            && self.keywords.is_empty()
    }

    /// A dataset sorted into a canonical order, for structural comparison
    /// after round-trips that do not preserve record order.
    pub fn canonicalized(&self) -> FixtureDataset {
        let mut d = self.clone();
        d.publications.sort_by(|a, b| a.key.cmp(&b.key));
        d.persons.sort_by(|a, b| a.key.cmp(&b.key));
        d.venues.sort_by(|a, b| a.key.cmp(&b.key));
        d.institutions.sort_by(|a, b| a.key.cmp(&b.key));
        d.authorship.sort();
        d.reference_edges.sort();
        d.affiliations.sort();
        d.keywords.sort();
        d
    }
}

/// Kind of invariant a dataset record breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    DuplicateKey,
    DanglingReference,
    SelfCitation,
    DuplicateEdge,
    InvalidYear,
    InvalidOrcid,
    InvalidCountry,
    MissingPrimaryAlias,
    MisplacedKeyword,
}

/// One broken invariant, with the offending entity keys named.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

/// Everything [`validate_dataset`] found wrong; empty iff the dataset is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "dataset valid");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

fn is_valid_orcid(s: &str) -> bool {
    // 16 characters in four hyphenated groups of four; last may be X.
    let bytes = s.as_bytes();
    if bytes.len() != 19 {
        return false;
    }
    for (i, &b) in bytes.iter().enumerate() {
        match i {
            4 | 9 | 14 => {
                if b != b'-' {
                    return false;
                }
            }
            18 => {
                if !(b.is_ascii_digit() || b == b'X') {
                    return false;
                }
            }
            _ => {
                if !b.is_ascii_digit() {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks every dataset invariant and returns one violation per break.
/// Violations are data, not failures: an invalid dataset still yields a
/// report, never an error.
pub fn validate_dataset(d: &FixtureDataset) -> ValidationReport {
    let mut violations = Vec::new();
    let mut v = |kind: ViolationKind, detail: String| {
        violations.push(Violation { kind, detail });
    };

    let mut pub_keys = HashSet::new();
    for p in &d.publications {
        if !pub_keys.insert(p.key.as_str()) {
            v(ViolationKind::DuplicateKey, format!("publication key '{}' appears more than once", p.key));
        }
        if let Some(y) = p.year {
            if y <= 0 {
                v(ViolationKind::InvalidYear, format!("publication '{}' has non-positive year {}", p.key, y));
            }
        }
    }
    let mut person_keys = HashSet::new();
    for pe in &d.persons {
        if !person_keys.insert(pe.key.as_str()) {
            v(ViolationKind::DuplicateKey, format!("person key '{}' appears more than once", pe.key));
        }
        if !pe.names.contains(&pe.primary_name) {
            v(
                ViolationKind::MissingPrimaryAlias,
                format!("person '{}' does not list primary name '{}' among its names", pe.key, pe.primary_name),
            );
        }
        if let Some(orcid) = &pe.orcid {
            if !is_valid_orcid(orcid) {
                v(ViolationKind::InvalidOrcid, format!("person '{}' has malformed orcid '{}'", pe.key, orcid));
            }
        }
    }
    let mut venue_keys = HashSet::new();
    for ve in &d.venues {
        if !venue_keys.insert(ve.key.as_str()) {
            v(ViolationKind::DuplicateKey, format!("venue key '{}' appears more than once", ve.key));
        }
    }
    let mut inst_keys = HashSet::new();
    for i in &d.institutions {
        if !inst_keys.insert(i.key.as_str()) {
            v(ViolationKind::DuplicateKey, format!("institution key '{}' appears more than once", i.key));
        }
        if i.country.len() != 2 || !i.country.bytes().all(|b| b.is_ascii_lowercase()) {
            v(
                ViolationKind::InvalidCountry,
                format!("institution '{}' has country '{}' (expected lowercase two-letter code)", i.key, i.country),
            );
        }
    }

    // Venue keyword targets may be conferences or journals, never institutions.
    let venue_by_key: HashMap<&str, &Venue> = d.venues.iter().map(|ve| (ve.key.as_str(), ve)).collect();

    for p in &d.publications {
        if let Some(vk) = &p.venue_key {
            if !venue_keys.contains(vk.as_str()) {
                v(
                    ViolationKind::DanglingReference,
                    format!("publication '{}' names unknown venue '{}'", p.key, vk),
                );
            }
        }
    }
    for a in &d.authorship {
        if !person_keys.contains(a.person_key.as_str()) {
            v(ViolationKind::DanglingReference, format!("authorship row names unknown person '{}'", a.person_key));
        }
        if !pub_keys.contains(a.publication_key.as_str()) {
            v(
                ViolationKind::DanglingReference,
                format!("authorship row names unknown publication '{}'", a.publication_key),
            );
        }
    }
    let mut seen_edges = HashSet::new();
    for e in &d.reference_edges {
        if e.citing_key == e.cited_key {
            v(ViolationKind::SelfCitation, format!("publication '{}' cites itself", e.citing_key));
        }
        if !pub_keys.contains(e.citing_key.as_str()) {
            v(ViolationKind::DanglingReference, format!("reference edge names unknown publication '{}'", e.citing_key));
        }
        if !pub_keys.contains(e.cited_key.as_str()) {
            v(ViolationKind::DanglingReference, format!("reference edge names unknown publication '{}'", e.cited_key));
        }
        if !seen_edges.insert((e.citing_key.as_str(), e.cited_key.as_str())) {
            v(
                ViolationKind::DuplicateEdge,
                format!("reference edge ('{}', '{}') appears more than once", e.citing_key, e.cited_key),
            );
        }
    }
    for a in &d.affiliations {
        if !person_keys.contains(a.person_key.as_str()) {
            v(ViolationKind::DanglingReference, format!("affiliation names unknown person '{}'", a.person_key));
        }
        if !inst_keys.contains(a.institution_key.as_str()) {
            v(
                ViolationKind::DanglingReference,
                format!("affiliation names unknown institution '{}'", a.institution_key),
            );
        }
    }
    for k in &d.keywords {
        let key = k.entity_key.as_str();
        if pub_keys.contains(key) || venue_by_key.contains_key(key) {
            continue;
        }
        if inst_keys.contains(key) || person_keys.contains(key) {
            v(
                ViolationKind::MisplacedKeyword,
                format!("keyword '{}' attached to '{}', which is not a publication or venue", k.keyword, key),
            );
        } else {
            v(ViolationKind::DanglingReference, format!("keyword '{}' attached to unknown entity '{}'", k.keyword, key));
        }
    }

    ValidationReport { violations }
}

/// Number of citations per publication: how many other papers cite it
/// (in-degree over the reference edges). Every publication gets an entry,
/// uncited ones with 0.
pub fn citation_counts(d: &FixtureDataset) -> BTreeMap<String, usize> {
    let mut counts: BTreeMap<String, usize> = d.publications.iter().map(|p| (p.key.clone(), 0)).collect();
    for e in &d.reference_edges {
        if let Some(c) = counts.get_mut(&e.cited_key) {
            *c += 1;
        }
    }
    counts
}
