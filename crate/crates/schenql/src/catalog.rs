//! The filter-signature catalog: which filter keyword applies to which
//! concept, what kind of argument it takes, and the lowering rule it maps to.
//! The analyzer validates against this table and the code generators key
//! their per-filter logic off the rule ids, so the table is the single
//! source of truth for the language's filter inventory.

use serde::Serialize;
use std::fmt;

/// The five base concepts a query can return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityType {
    Publication,
    Person,
    Conference,
    Journal,
    Institution,
}

impl EntityType {
    pub const ALL: [EntityType; 5] = [
        EntityType::Publication,
        EntityType::Person,
        EntityType::Conference,
        EntityType::Journal,
        EntityType::Institution,
    ];

    pub fn noun(self) -> &'static str {
        match self {
            EntityType::Publication => "publication",
            EntityType::Person => "person",
            EntityType::Conference => "conference",
            EntityType::Journal => "journal",
            EntityType::Institution => "institution",
        }
    }

    /// Plural keyword spelling, for error messages.
    pub fn keyword_plural(self) -> &'static str {
        match self {
            EntityType::Publication => "PUBLICATIONS",
            EntityType::Person => "PERSONS",
            EntityType::Conference => "CONFERENCES",
            EntityType::Journal => "JOURNALS",
            EntityType::Institution => "INSTITUTIONS",
        }
    }

    /// Attribute names queryable via `"attr" OF`, in canonical spelling.
    pub fn attributes(self) -> &'static [&'static str] {
        match self {
            EntityType::Publication => &["dblpKey", "title", "year", "type"],
            EntityType::Person => &["dblpKey", "primaryName", "orcid"],
            EntityType::Conference => &["dblpKey", "acronym", "name"],
            EntityType::Journal => &["dblpKey", "acronym", "name", "volume"],
            EntityType::Institution => &["name", "city", "country"],
        }
    }

    /// Column name of the standard return value.
    pub fn default_column(self) -> &'static str {
        match self {
            EntityType::Publication => "title",
            EntityType::Person => "primaryName",
            EntityType::Conference | EntityType::Journal => "acronym",
            EntityType::Institution => "institution",
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.noun())
    }
}

/// Every filter keyword of the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FilterKeyword {
    About,
    WrittenBy,
    EditedBy,
    PublishedBy,
    AppearedIn,
    Before,
    InYear,
    After,
    Titled,
    References,
    CitedBy,
    PublishedIn,
    PublishedWith,
    WorksFor,
    Named,
    Orcid,
    Authored,
    Acronym,
    Volume,
    City,
    Country,
    Members,
}

impl FilterKeyword {
    pub const ALL: [FilterKeyword; 22] = [
        FilterKeyword::About,
        FilterKeyword::WrittenBy,
        FilterKeyword::EditedBy,
        FilterKeyword::PublishedBy,
        FilterKeyword::AppearedIn,
        FilterKeyword::Before,
        FilterKeyword::InYear,
        FilterKeyword::After,
        FilterKeyword::Titled,
        FilterKeyword::References,
        FilterKeyword::CitedBy,
        FilterKeyword::PublishedIn,
        FilterKeyword::PublishedWith,
        FilterKeyword::WorksFor,
        FilterKeyword::Named,
        FilterKeyword::Orcid,
        FilterKeyword::Authored,
        FilterKeyword::Acronym,
        FilterKeyword::Volume,
        FilterKeyword::City,
        FilterKeyword::Country,
        FilterKeyword::Members,
    ];

    pub fn text(self) -> &'static str {
        match self {
            FilterKeyword::About => "ABOUT",
            FilterKeyword::WrittenBy => "WRITTEN BY",
            FilterKeyword::EditedBy => "EDITED BY",
            FilterKeyword::PublishedBy => "PUBLISHED BY",
            FilterKeyword::AppearedIn => "APPEARED IN",
            FilterKeyword::Before => "BEFORE",
            FilterKeyword::InYear => "IN YEAR",
            FilterKeyword::After => "AFTER",
            FilterKeyword::Titled => "TITLED",
            FilterKeyword::References => "REFERENCES",
            FilterKeyword::CitedBy => "CITED BY",
            FilterKeyword::PublishedIn => "PUBLISHED IN",
            FilterKeyword::PublishedWith => "PUBLISHED WITH",
            FilterKeyword::WorksFor => "WORKS FOR",
            FilterKeyword::Named => "NAMED",
            FilterKeyword::Orcid => "ORCID",
            FilterKeyword::Authored => "AUTHORED",
            FilterKeyword::Acronym => "ACRONYM",
            FilterKeyword::Volume => "VOLUME",
            FilterKeyword::City => "CITY",
            FilterKeyword::Country => "COUNTRY",
            FilterKeyword::Members => "MEMBERS",
        }
    }
}

impl fmt::Display for FilterKeyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

/// What kind of argument a filter accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Parenthesized subquery returning one of the listed concepts. A bare
    /// string is also accepted and expanded via the concept's literals.
    Subquery(&'static [EntityType]),
    Str,
    Number,
}

impl ParamKind {
    pub fn describe(self) -> String {
        match self {
            ParamKind::Subquery(types) => {
                let names: Vec<&str> = types.iter().map(|t| t.keyword_plural()).collect();
                format!("a subquery returning {}", names.join(" or "))
            }
            ParamKind::Str => "a quoted string".to_string(),
            ParamKind::Number => "a number".to_string(),
        }
    }
}

/// One (host concept, filter keyword) entry of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterSignature {
    pub host: EntityType,
    pub keyword: FilterKeyword,
    pub param: ParamKind,
    /// Identifier the code generators dispatch on.
    pub rule_id: &'static str,
}

use EntityType as E;
use FilterKeyword as K;
use ParamKind as P;

const PERSONS: &[EntityType] = &[E::Person];
const PUBLICATIONS: &[EntityType] = &[E::Publication];
const VENUES: &[EntityType] = &[E::Conference, E::Journal];
const INSTITUTIONS: &[EntityType] = &[E::Institution];

/// The complete filter inventory, one signature per valid (host, keyword)
/// pair. Order groups by host concept.
pub const CATALOG: &[FilterSignature] = &[
    FilterSignature { host: E::Publication, keyword: K::PublishedBy, param: P::Subquery(INSTITUTIONS), rule_id: "pub-published-by" },
    FilterSignature { host: E::Publication, keyword: K::About, param: P::Str, rule_id: "pub-about" },
    FilterSignature { host: E::Publication, keyword: K::WrittenBy, param: P::Subquery(PERSONS), rule_id: "pub-written-by" },
    FilterSignature { host: E::Publication, keyword: K::EditedBy, param: P::Subquery(PERSONS), rule_id: "pub-edited-by" },
    FilterSignature { host: E::Publication, keyword: K::AppearedIn, param: P::Subquery(VENUES), rule_id: "pub-appeared-in" },
    FilterSignature { host: E::Publication, keyword: K::Before, param: P::Number, rule_id: "pub-before" },
    FilterSignature { host: E::Publication, keyword: K::InYear, param: P::Number, rule_id: "pub-in-year" },
    FilterSignature { host: E::Publication, keyword: K::After, param: P::Number, rule_id: "pub-after" },
    FilterSignature { host: E::Publication, keyword: K::Titled, param: P::Str, rule_id: "pub-titled" },
    FilterSignature { host: E::Publication, keyword: K::References, param: P::Subquery(PUBLICATIONS), rule_id: "pub-references" },
    FilterSignature { host: E::Publication, keyword: K::CitedBy, param: P::Subquery(PUBLICATIONS), rule_id: "pub-cited-by" },
    FilterSignature { host: E::Person, keyword: K::PublishedIn, param: P::Subquery(VENUES), rule_id: "person-published-in" },
    FilterSignature { host: E::Person, keyword: K::PublishedWith, param: P::Subquery(INSTITUTIONS), rule_id: "person-published-with" },
    FilterSignature { host: E::Person, keyword: K::WorksFor, param: P::Subquery(INSTITUTIONS), rule_id: "person-works-for" },
    FilterSignature { host: E::Person, keyword: K::Named, param: P::Str, rule_id: "person-named" },
    FilterSignature { host: E::Person, keyword: K::Orcid, param: P::Str, rule_id: "person-orcid" },
    FilterSignature { host: E::Person, keyword: K::Authored, param: P::Subquery(PUBLICATIONS), rule_id: "person-authored" },
    FilterSignature { host: E::Person, keyword: K::References, param: P::Subquery(PUBLICATIONS), rule_id: "person-references" },
    FilterSignature { host: E::Person, keyword: K::CitedBy, param: P::Subquery(PUBLICATIONS), rule_id: "person-cited-by" },
    FilterSignature { host: E::Conference, keyword: K::Acronym, param: P::Str, rule_id: "conf-acronym" },
    FilterSignature { host: E::Conference, keyword: K::About, param: P::Str, rule_id: "conf-about" },
    FilterSignature { host: E::Conference, keyword: K::Before, param: P::Number, rule_id: "conf-before" },
    FilterSignature { host: E::Conference, keyword: K::InYear, param: P::Number, rule_id: "conf-in-year" },
    FilterSignature { host: E::Conference, keyword: K::After, param: P::Number, rule_id: "conf-after" },
    FilterSignature { host: E::Journal, keyword: K::Named, param: P::Str, rule_id: "journal-named" },
    FilterSignature { host: E::Journal, keyword: K::Acronym, param: P::Str, rule_id: "journal-acronym" },
    FilterSignature { host: E::Journal, keyword: K::About, param: P::Str, rule_id: "journal-about" },
    FilterSignature { host: E::Journal, keyword: K::Before, param: P::Number, rule_id: "journal-before" },
    FilterSignature { host: E::Journal, keyword: K::InYear, param: P::Number, rule_id: "journal-in-year" },
    FilterSignature { host: E::Journal, keyword: K::After, param: P::Number, rule_id: "journal-after" },
    FilterSignature { host: E::Journal, keyword: K::Volume, param: P::Str, rule_id: "journal-volume" },
    FilterSignature { host: E::Institution, keyword: K::Named, param: P::Str, rule_id: "inst-named" },
    FilterSignature { host: E::Institution, keyword: K::City, param: P::Str, rule_id: "inst-city" },
    FilterSignature { host: E::Institution, keyword: K::Country, param: P::Str, rule_id: "inst-country" },
    FilterSignature { host: E::Institution, keyword: K::Members, param: P::Subquery(PERSONS), rule_id: "inst-members" },
];

/// Looks up the signature for a (host, keyword) pair.
pub fn signature(host: EntityType, keyword: FilterKeyword) -> Option<&'static FilterSignature> {
    CATALOG.iter().find(|s| s.host == host && s.keyword == keyword)
}

/// All signatures whose host is `host`.
pub fn signatures_for(host: EntityType) -> impl Iterator<Item = &'static FilterSignature> {
    CATALOG.iter().filter(move |s| s.host == host)
}

/// The complement of the catalog: every (concept, keyword) combination that
/// is NOT a valid filter application. The negative typing tests enumerate
/// exactly these.
pub fn foreign_pairs() -> Vec<(EntityType, FilterKeyword)> {
    let mut out = Vec::new();
    for host in EntityType::ALL {
        for keyword in FilterKeyword::ALL {
            if signature(host, keyword).is_none() {
                out.push((host, keyword));
            }
        }
    }
    out
}

/// Machine-readable catalog row, for documentation tooling.
#[derive(Debug, Clone, Serialize)]
pub struct SignatureRecord {
    pub host: EntityType,
    pub keyword: &'static str,
    pub param: String,
    pub rule_id: &'static str,
}

/// The catalog as serializable records.
pub fn export() -> Vec<SignatureRecord> {
    CATALOG
        .iter()
        .map(|s| SignatureRecord {
            host: s.host,
            keyword: s.keyword.text(),
            param: match s.param {
                ParamKind::Subquery(types) => {
                    let names: Vec<&str> = types.iter().map(|t| t.noun()).collect();
                    format!("subquery({})", names.join("|"))
                }
                ParamKind::Str => "string".to_string(),
                ParamKind::Number => "number".to_string(),
            },
            rule_id: s.rule_id,
        })
        .collect()
}
