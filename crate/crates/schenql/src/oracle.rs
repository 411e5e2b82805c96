//! Reference evaluator: computes query results by brute-force set algebra
//! over an in-memory dataset, with no SQL anywhere. It shares only the
//! typed IR and the output column names with the SQL pipeline, so the two
//! routes can be compared differentially.
//!
//! Semantics mirrored here, independently of the generator:
//! - string comparisons are ASCII case-insensitive (SQLite's LOWER folds
//!   ASCII only, so Unicode-aware folding would diverge);
//! - a missing year never satisfies a year filter;
//! - a LIMIT truncates the key set after sorting it, byte-wise, matching
//!   the generator's ORDER BY on the key column;
//! - MOST CITED counts direct in-edges, drops zero-citation members, and
//!   orders by count descending with the key as tiebreaker.

use crate::analyze::{self, Attribute, EntityExpr, EntitySet, Predicate, TypedExpr, VenueSelector};
use crate::catalog::EntityType;
use crate::model::{FixtureDataset, Institution, Person, Publication, Role, Venue, VenueKind};
use crate::table::{ResultTable, Value};
use std::collections::{BTreeSet, HashMap, HashSet};

/// Evaluator over one dataset.
pub struct Oracle<'a> {
    data: &'a FixtureDataset,
    pubs_by_key: HashMap<&'a str, &'a Publication>,
}

fn eq_ic(a: &str, b: &str) -> bool {
    a.eq_ignore_ascii_case(b)
}

fn opt_eq_ic(a: Option<&String>, b: &str) -> bool {
    a.is_some_and(|a| eq_ic(a, b))
}

impl<'a> Oracle<'a> {
    pub fn new(data: &'a FixtureDataset) -> Oracle<'a> {
        let pubs_by_key = data.publications.iter().map(|p| (p.key.as_str(), p)).collect();
        Oracle { data, pubs_by_key }
    }

    /// Evaluates a typed query to the same table shape the SQL route
    /// produces.
    pub fn eval(&self, t: &TypedExpr) -> ResultTable {
        let columns: Vec<String> = analyze::output_columns(t).iter().map(|s| s.to_string()).collect();
        let rows = match t {
            TypedExpr::Entities(e) => {
                let display: BTreeSet<String> =
                    self.entity_keys(e).iter().map(|k| self.display(e.entity(), k)).collect();
                display.into_iter().map(|d| vec![Value::Text(d)]).collect()
            }
            TypedExpr::Count { arg, limit } => {
                let mut rows = vec![vec![Value::Int(self.entity_keys(arg).len() as i64)]];
                if let Some(n) = limit {
                    rows.truncate(usize::try_from(*n).unwrap_or(usize::MAX));
                }
                rows
            }
            TypedExpr::MostCited { arg, k } => {
                let mut ranked: Vec<(String, i64)> = self
                    .entity_keys(arg)
                    .into_iter()
                    .filter_map(|m| {
                        let n = self.data.reference_edges.iter().filter(|e| e.cited_key == m).count();
                        (n > 0).then_some((m, n as i64))
                    })
                    .collect();
                ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
                ranked.truncate(usize::try_from(*k).unwrap_or(usize::MAX));
                ranked
                    .into_iter()
                    .map(|(key, n)| vec![Value::Text(self.pubs_by_key[key.as_str()].title.clone()), Value::Int(n)])
                    .collect()
            }
            TypedExpr::KeywordsOf { arg, limit } => {
                let members: HashSet<String> = self.entity_keys(arg).into_iter().collect();
                let keywords: BTreeSet<&str> = self
                    .data
                    .keywords
                    .iter()
                    .filter(|e| members.contains(&e.entity_key))
                    .map(|e| e.keyword.as_str())
                    .collect();
                let mut rows: Vec<Vec<Value>> =
                    keywords.into_iter().map(|kw| vec![Value::Text(kw.to_string())]).collect();
                if let Some(n) = limit {
                    rows.truncate(usize::try_from(*n).unwrap_or(usize::MAX));
                }
                rows
            }
            TypedExpr::AttributeOf { attribute, source } => {
                let mut values: BTreeSet<Value> = BTreeSet::new();
                for key in self.entity_keys(source) {
                    values.extend(self.attribute_values(source.entity(), &key, *attribute));
                }
                values.into_iter().map(|v| vec![v]).collect()
            }
        };
        ResultTable::new(columns, rows)
    }

    /// Member keys of an entity expression, sorted byte-wise, truncated by
    /// any LIMIT the expression carries.
    pub fn entity_keys(&self, e: &EntityExpr) -> Vec<String> {
        match e {
            EntityExpr::Set(s) => self.set_keys(s),
            EntityExpr::VenuesOf { kind, source } => {
                let members: HashSet<String> = self.set_or_venue_keys(source);
                let venue_keys: BTreeSet<String> = self
                    .data
                    .publications
                    .iter()
                    .filter(|p| members.contains(&p.key))
                    .filter_map(|p| p.venue_key.clone())
                    .filter(|v| self.venue_kind(v) == Some(*kind))
                    .collect();
                venue_keys.into_iter().collect()
            }
        }
    }

    fn set_or_venue_keys(&self, e: &EntityExpr) -> HashSet<String> {
        self.entity_keys(e).into_iter().collect()
    }

    fn venue_kind(&self, key: &str) -> Option<VenueKind> {
        self.data.venues.iter().find(|v| v.key == key).map(|v| v.kind)
    }

    fn set_keys(&self, s: &EntitySet) -> Vec<String> {
        let resolved: Vec<Resolved> = s.predicates.iter().map(|p| self.resolve(p)).collect();
        let mut keys: Vec<String> = match s.entity {
            EntityType::Publication => self
                .data
                .publications
                .iter()
                .filter(|p| resolved.iter().all(|r| self.pub_matches(p, r)))
                .map(|p| p.key.clone())
                .collect(),
            EntityType::Person => self
                .data
                .persons
                .iter()
                .filter(|pe| resolved.iter().all(|r| self.person_matches(pe, r)))
                .map(|pe| pe.key.clone())
                .collect(),
            EntityType::Conference | EntityType::Journal => {
                let kind = if s.entity == EntityType::Conference { VenueKind::Conference } else { VenueKind::Journal };
                self.data
                    .venues
                    .iter()
                    .filter(|v| v.kind == kind)
                    .filter(|v| resolved.iter().all(|r| self.venue_matches(v, r)))
                    .map(|v| v.key.clone())
                    .collect()
            }
            EntityType::Institution => self
                .data
                .institutions
                .iter()
                .filter(|i| resolved.iter().all(|r| self.inst_matches(i, r)))
                .map(|i| i.key.clone())
                .collect(),
        };
        keys.sort();
        if let Some(n) = s.limit {
            keys.truncate(usize::try_from(n).unwrap_or(usize::MAX));
        }
        keys
    }

    /// Pre-evaluates a predicate's subquery (if any) so candidate filtering
    /// is a membership test instead of a re-evaluation per candidate.
    fn resolve(&self, p: &Predicate) -> Resolved {
        let keys = |e: &EntityExpr| -> HashSet<String> { self.entity_keys(e).into_iter().collect() };
        match p {
            Predicate::PubTypeIs(t) => Resolved::Plain(PlainPred::PubTypeIs(*t)),
            Predicate::PersonHasRole(r) => Resolved::Plain(PlainPred::PersonHasRole(*r)),
            Predicate::PubAbout(s) => Resolved::Plain(PlainPred::PubAbout(s.clone())),
            Predicate::PubBefore(n) => Resolved::Plain(PlainPred::PubBefore(*n)),
            Predicate::PubInYear(n) => Resolved::Plain(PlainPred::PubInYear(*n)),
            Predicate::PubAfter(n) => Resolved::Plain(PlainPred::PubAfter(*n)),
            Predicate::PubTitled(s) => Resolved::Plain(PlainPred::PubTitled(s.clone())),
            Predicate::PubLiteral(s) => Resolved::Plain(PlainPred::PubLiteral(s.clone())),
            Predicate::PersonNamed(s) => Resolved::Plain(PlainPred::PersonNamed(s.clone())),
            Predicate::PersonOrcid(s) => Resolved::Plain(PlainPred::PersonOrcid(s.clone())),
            Predicate::PersonLiteral(s) => Resolved::Plain(PlainPred::PersonLiteral(s.clone())),
            Predicate::VenueAcronym(s) => Resolved::Plain(PlainPred::VenueAcronym(s.clone())),
            Predicate::VenueAbout(s) => Resolved::Plain(PlainPred::VenueAbout(s.clone())),
            Predicate::VenueBefore(n) => Resolved::Plain(PlainPred::VenueBefore(*n)),
            Predicate::VenueInYear(n) => Resolved::Plain(PlainPred::VenueInYear(*n)),
            Predicate::VenueAfter(n) => Resolved::Plain(PlainPred::VenueAfter(*n)),
            Predicate::JournalNamed(s) => Resolved::Plain(PlainPred::JournalNamed(s.clone())),
            Predicate::JournalVolume(s) => Resolved::Plain(PlainPred::JournalVolume(s.clone())),
            Predicate::InstNamed(s) => Resolved::Plain(PlainPred::InstNamed(s.clone())),
            Predicate::InstCity(s) => Resolved::Plain(PlainPred::InstCity(s.clone())),
            Predicate::InstCountry(s) => Resolved::Plain(PlainPred::InstCountry(s.clone())),
            Predicate::PubPublishedBy(e) => Resolved::Members(MemberPred::PubPublishedBy, keys(e)),
            Predicate::PubWrittenBy(e) => Resolved::Members(MemberPred::PubWrittenBy, keys(e)),
            Predicate::PubEditedBy(e) => Resolved::Members(MemberPred::PubEditedBy, keys(e)),
            Predicate::PubReferences(e) => Resolved::Members(MemberPred::PubReferences, keys(e)),
            Predicate::PubCitedBy(e) => Resolved::Members(MemberPred::PubCitedBy, keys(e)),
            Predicate::PersonPublishedWith(e) => Resolved::Members(MemberPred::PersonPublishedWith, keys(e)),
            Predicate::PersonWorksFor(e) => Resolved::Members(MemberPred::PersonWorksFor, keys(e)),
            Predicate::PersonAuthored(e) => Resolved::Members(MemberPred::PersonAuthored, keys(e)),
            Predicate::PersonReferences(e) => Resolved::Members(MemberPred::PersonReferences, keys(e)),
            Predicate::PersonCitedBy(e) => Resolved::Members(MemberPred::PersonCitedBy, keys(e)),
            Predicate::InstMembers(e) => Resolved::Members(MemberPred::InstMembers, keys(e)),
            Predicate::PubAppearedIn(sel) => Resolved::Members(MemberPred::PubAppearedIn, self.venue_members(sel)),
            Predicate::PersonPublishedIn(sel) => {
                Resolved::Members(MemberPred::PersonPublishedIn, self.venue_members(sel))
            }
        }
    }

    /// Venue keys selected by a venue argument. A literal matches venues of
    /// either kind by dblp key or acronym.
    fn venue_members(&self, sel: &VenueSelector) -> HashSet<String> {
        match sel {
            VenueSelector::Venues(e) => self.entity_keys(e).into_iter().collect(),
            VenueSelector::Literal(s) => self
                .data
                .venues
                .iter()
                .filter(|v| opt_eq_ic(v.dblp_key.as_ref(), s) || eq_ic(&v.acronym, s))
                .map(|v| v.key.clone())
                .collect(),
        }
    }

    /// Some author of `pub_key` is affiliated with a member institution.
    fn published_by(&self, pub_key: &str, insts: &HashSet<String>) -> bool {
        self.data.authorship.iter().any(|a| {
            a.role == Role::Author
                && a.publication_key == pub_key
                && self
                    .data
                    .affiliations
                    .iter()
                    .any(|f| f.person_key == a.person_key && insts.contains(&f.institution_key))
        })
    }

    fn pub_matches(&self, p: &Publication, r: &Resolved) -> bool {
        match r {
            Resolved::Plain(pred) => match pred {
                PlainPred::PubTypeIs(t) => p.pub_type == *t,
                PlainPred::PubAbout(s) => {
                    self.data.keywords.iter().any(|k| k.entity_key == p.key && eq_ic(&k.keyword, s))
                }
                PlainPred::PubBefore(n) => p.year.is_some_and(|y| y < *n),
                PlainPred::PubInYear(n) => p.year.is_some_and(|y| y == *n),
                PlainPred::PubAfter(n) => p.year.is_some_and(|y| y > *n),
                PlainPred::PubTitled(s) => eq_ic(&p.title, s),
                PlainPred::PubLiteral(s) => opt_eq_ic(p.dblp_key.as_ref(), s) || eq_ic(&p.title, s),
                other => unreachable!("{other:?} on a publication"),
            },
            Resolved::Members(pred, members) => match pred {
                MemberPred::PubPublishedBy => self.published_by(&p.key, members),
                MemberPred::PubWrittenBy => self
                    .data
                    .authorship
                    .iter()
                    .any(|a| a.role == Role::Author && a.publication_key == p.key && members.contains(&a.person_key)),
                MemberPred::PubEditedBy => self
                    .data
                    .authorship
                    .iter()
                    .any(|a| a.role == Role::Editor && a.publication_key == p.key && members.contains(&a.person_key)),
                MemberPred::PubAppearedIn => p.venue_key.as_ref().is_some_and(|v| members.contains(v)),
                MemberPred::PubReferences => self
                    .data
                    .reference_edges
                    .iter()
                    .any(|e| e.citing_key == p.key && members.contains(&e.cited_key)),
                MemberPred::PubCitedBy => self
                    .data
                    .reference_edges
                    .iter()
                    .any(|e| e.cited_key == p.key && members.contains(&e.citing_key)),
                other => unreachable!("{other:?} on a publication"),
            },
        }
    }

    fn person_matches(&self, pe: &Person, r: &Resolved) -> bool {
        let authored = |f: &dyn Fn(&str) -> bool| {
            self.data
                .authorship
                .iter()
                .any(|a| a.role == Role::Author && a.person_key == pe.key && f(&a.publication_key))
        };
        match r {
            Resolved::Plain(pred) => match pred {
                PlainPred::PersonHasRole(role) => {
                    self.data.authorship.iter().any(|a| a.person_key == pe.key && a.role == *role)
                }
                PlainPred::PersonNamed(s) => pe.names.iter().any(|n| eq_ic(n, s)),
                PlainPred::PersonOrcid(s) => opt_eq_ic(pe.orcid.as_ref(), s),
                PlainPred::PersonLiteral(s) => {
                    opt_eq_ic(pe.dblp_key.as_ref(), s)
                        || opt_eq_ic(pe.orcid.as_ref(), s)
                        || pe.names.iter().any(|n| eq_ic(n, s))
                }
                other => unreachable!("{other:?} on a person"),
            },
            Resolved::Members(pred, members) => match pred {
                MemberPred::PersonPublishedIn => authored(&|pub_key| {
                    self.pubs_by_key
                        .get(pub_key)
                        .and_then(|p| p.venue_key.as_ref())
                        .is_some_and(|v| members.contains(v))
                }),
                MemberPred::PersonPublishedWith => authored(&|pub_key| self.published_by(pub_key, members)),
                MemberPred::PersonWorksFor => self
                    .data
                    .affiliations
                    .iter()
                    .any(|f| f.person_key == pe.key && members.contains(&f.institution_key)),
                MemberPred::PersonAuthored => authored(&|pub_key| members.contains(pub_key)),
                MemberPred::PersonReferences => authored(&|pub_key| {
                    self.data
                        .reference_edges
                        .iter()
                        .any(|e| e.citing_key == pub_key && members.contains(&e.cited_key))
                }),
                MemberPred::PersonCitedBy => authored(&|pub_key| {
                    self.data
                        .reference_edges
                        .iter()
                        .any(|e| e.cited_key == pub_key && members.contains(&e.citing_key))
                }),
                other => unreachable!("{other:?} on a person"),
            },
        }
    }

    fn venue_matches(&self, v: &Venue, r: &Resolved) -> bool {
        let hosted = |f: &dyn Fn(&Publication) -> bool| {
            self.data.publications.iter().any(|p| p.venue_key.as_deref() == Some(v.key.as_str()) && f(p))
        };
        match r {
            Resolved::Plain(pred) => match pred {
                PlainPred::VenueAcronym(s) => eq_ic(&v.acronym, s),
                PlainPred::VenueAbout(s) => {
                    self.data.keywords.iter().any(|k| k.entity_key == v.key && eq_ic(&k.keyword, s))
                }
                PlainPred::VenueBefore(n) => hosted(&|p| p.year.is_some_and(|y| y < *n)),
                PlainPred::VenueInYear(n) => hosted(&|p| p.year.is_some_and(|y| y == *n)),
                PlainPred::VenueAfter(n) => hosted(&|p| p.year.is_some_and(|y| y > *n)),
                PlainPred::JournalNamed(s) => eq_ic(&v.name, s),
                PlainPred::JournalVolume(s) => hosted(&|p| opt_eq_ic(p.volume.as_ref(), s)),
                other => unreachable!("{other:?} on a venue"),
            },
            Resolved::Members(pred, _) => unreachable!("{pred:?} on a venue"),
        }
    }

    fn inst_matches(&self, i: &Institution, r: &Resolved) -> bool {
        match r {
            Resolved::Plain(pred) => match pred {
                PlainPred::InstNamed(s) => eq_ic(&i.name, s),
                PlainPred::InstCity(s) => eq_ic(&i.city, s),
                PlainPred::InstCountry(s) => eq_ic(&i.country, s),
                other => unreachable!("{other:?} on an institution"),
            },
            Resolved::Members(pred, members) => match pred {
                MemberPred::InstMembers => self
                    .data
                    .affiliations
                    .iter()
                    .any(|f| f.institution_key == i.key && members.contains(&f.person_key)),
                other => unreachable!("{other:?} on an institution"),
            },
        }
    }

    fn display(&self, entity: EntityType, key: &str) -> String {
        match entity {
            EntityType::Publication => self.pubs_by_key[key].title.clone(),
            EntityType::Person => self
                .data
                .persons
                .iter()
                .find(|p| p.key == key)
                .map(|p| p.primary_name.clone())
                .unwrap_or_default(),
            EntityType::Conference | EntityType::Journal => self
                .data
                .venues
                .iter()
                .find(|v| v.key == key)
                .map(|v| v.acronym.clone())
                .unwrap_or_default(),
            EntityType::Institution => self
                .data
                .institutions
                .iter()
                .find(|i| i.key == key)
                .map(|i| format!("{} ({}, {})", i.name, i.city, i.country))
                .unwrap_or_default(),
        }
    }

    /// Attribute values of one entity; nearly always zero or one, except a
    /// journal's volumes, which come from its hosted publications.
    fn attribute_values(&self, entity: EntityType, key: &str, attr: Attribute) -> Vec<Value> {
        let text = |v: Option<String>| v.map(Value::Text).into_iter().collect::<Vec<_>>();
        match entity {
            EntityType::Publication => {
                let p = self.pubs_by_key[key];
                match attr {
                    Attribute::DblpKey => text(p.dblp_key.clone()),
                    Attribute::Title => vec![Value::Text(p.title.clone())],
                    Attribute::Year => p.year.map(Value::Int).into_iter().collect(),
                    Attribute::Type => vec![Value::Text(p.pub_type.as_str().to_string())],
                    other => unreachable!("{other:?} on a publication"),
                }
            }
            EntityType::Person => {
                let pe = self.data.persons.iter().find(|p| p.key == key).expect("person key");
                match attr {
                    Attribute::DblpKey => text(pe.dblp_key.clone()),
                    Attribute::PrimaryName => vec![Value::Text(pe.primary_name.clone())],
                    Attribute::Orcid => text(pe.orcid.clone()),
                    other => unreachable!("{other:?} on a person"),
                }
            }
            EntityType::Conference | EntityType::Journal => {
                let v = self.data.venues.iter().find(|v| v.key == key).expect("venue key");
                match attr {
                    Attribute::DblpKey => text(v.dblp_key.clone()),
                    Attribute::Acronym => vec![Value::Text(v.acronym.clone())],
                    Attribute::Name => vec![Value::Text(v.name.clone())],
                    Attribute::Volume => self
                        .data
                        .publications
                        .iter()
                        .filter(|p| p.venue_key.as_deref() == Some(key))
                        .filter_map(|p| p.volume.clone())
                        .map(Value::Text)
                        .collect(),
                    other => unreachable!("{other:?} on a venue"),
                }
            }
            EntityType::Institution => {
                let i = self.data.institutions.iter().find(|i| i.key == key).expect("institution key");
                match attr {
                    Attribute::Name => vec![Value::Text(i.name.clone())],
                    Attribute::City => vec![Value::Text(i.city.clone())],
                    Attribute::Country => vec![Value::Text(i.country.clone())],
                    other => unreachable!("{other:?} on an institution"),
                }
            }
        }
    }
}

/// Parses, type-checks, and evaluates a query over a dataset, with no SQL
/// involved. Parse and type errors are the same ones the main pipeline
/// reports.
pub fn eval_reference(query: &str, data: &FixtureDataset) -> crate::error::Result<ResultTable> {
    let typed = crate::analyze_text(query)?;
    Ok(Oracle::new(data).eval(&typed))
}

/// A predicate with any subquery replaced by its evaluated member set.
enum Resolved {
    Plain(PlainPred),
    Members(MemberPred, HashSet<String>),
}

#[derive(Debug)]
enum PlainPred {
    PubTypeIs(crate::model::PubType),
    PersonHasRole(Role),
    PubAbout(String),
    PubBefore(i64),
    PubInYear(i64),
    PubAfter(i64),
    PubTitled(String),
    PubLiteral(String),
    PersonNamed(String),
    PersonOrcid(String),
    PersonLiteral(String),
    VenueAcronym(String),
    VenueAbout(String),
    VenueBefore(i64),
    VenueInYear(i64),
    VenueAfter(i64),
    JournalNamed(String),
    JournalVolume(String),
    InstNamed(String),
    InstCity(String),
    InstCountry(String),
}

#[derive(Debug)]
enum MemberPred {
    PubPublishedBy,
    PubWrittenBy,
    PubEditedBy,
    PubAppearedIn,
    PubReferences,
    PubCitedBy,
    PersonPublishedIn,
    PersonPublishedWith,
    PersonWorksFor,
    PersonAuthored,
    PersonReferences,
    PersonCitedBy,
    InstMembers,
}
