//! SQL generation: lowers a typed query to a single parameterized SQLite
//! statement.
//!
//! Ground rules, which the tests pin down:
//! - every user-supplied value is bound through a `?` placeholder, never
//!   inlined into the statement text;
//! - entity queries select their display column with `SELECT DISTINCT`;
//! - string comparisons are case-insensitive via `LOWER(col) = LOWER(?)`;
//! - joins are explicit (`JOIN .. ON`, `IN (subquery)`, `EXISTS`), never
//!   `NATURAL JOIN`;
//! - no `LIMIT` is invented: one appears only where the query asked for it
//!   (or the MOST CITED default of 5), and every generated `LIMIT` is
//!   preceded by an `ORDER BY` on a key so truncation is deterministic;
//! - every subquery's key set becomes a named `WITH` entry (`s1`, `s2`, ..)
//!   referenced by `IN (SELECT .. FROM sN)`, so expression depth stays flat
//!   however deeply queries nest. SQLite's parser runs on a fixed-size
//!   stack, and inlining nested subqueries overflows it at modest depth.

use crate::analyze::{Attribute, EntityExpr, EntitySet, Predicate, TypedExpr, VenueSelector};
use crate::catalog::EntityType;
use crate::model::{Role, VenueKind};
use rusqlite::types::ToSqlOutput;
use rusqlite::ToSql;

/// A generated statement plus its bind values, in placeholder order.
#[derive(Debug, Clone, PartialEq)]
pub struct SqlQuery {
    pub text: String,
    pub params: Vec<Param>,
}

/// One bind value.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Text(String),
    Int(i64),
}

impl ToSql for Param {
    fn to_sql(&self) -> rusqlite::Result<ToSqlOutput<'_>> {
        match self {
            Param::Text(s) => s.to_sql(),
            Param::Int(n) => n.to_sql(),
        }
    }
}

/// Compiles a typed query to SQL.
pub fn compile(t: &TypedExpr) -> SqlQuery {
    let mut b = Builder::new();
    match t {
        TypedExpr::Entities(e) => {
            let entity = e.entity();
            let member = b.member_clause(e);
            let d = b.fresh(alias_prefix(entity));
            b.push(&format!(
                "SELECT DISTINCT {} FROM {} {d} WHERE {d}.{} {member}",
                display_expr(entity, &d),
                table(entity),
                key_col(entity)
            ));
        }
        TypedExpr::Count { arg, limit } => {
            let (name, _) = b.keyset(arg);
            b.push(&format!("SELECT COUNT(*) AS count FROM {name}"));
            if let Some(n) = limit {
                b.push(" LIMIT ");
                b.param_int(clamp(*n));
            }
        }
        TypedExpr::MostCited { arg, k } => {
            let member = b.member_clause(arg);
            let p = b.fresh("p");
            let r = b.fresh("r");
            b.push(&format!(
                "SELECT {p}.title AS title, COUNT(*) AS citationCount \
                 FROM publication {p} JOIN publication_references {r} ON {r}.pub2Key = {p}.publicationKey \
                 WHERE {p}.publicationKey {member} \
                 GROUP BY {p}.publicationKey ORDER BY COUNT(*) DESC, {p}.publicationKey LIMIT "
            ));
            b.param_int(clamp(*k));
        }
        TypedExpr::KeywordsOf { arg, limit } => {
            let member = b.member_clause(arg);
            let k = b.fresh("k");
            b.push(&format!(
                "SELECT DISTINCT {k}.keyword AS keyword FROM entity_keywords {k} WHERE {k}.entityKey {member}"
            ));
            if let Some(n) = limit {
                b.push(&format!(" ORDER BY {k}.keyword LIMIT "));
                b.param_int(clamp(*n));
            }
        }
        TypedExpr::AttributeOf { attribute, source } => {
            let entity = source.entity();
            let member = b.member_clause(source);
            if entity == EntityType::Journal && *attribute == Attribute::Volume {
                // A journal's volumes are the volumes of the publications it
                // hosts; the journal table itself has no volume column.
                let q = b.fresh("q");
                b.push(&format!(
                    "SELECT DISTINCT {q}.volume AS volume FROM publication {q} \
                     WHERE {q}.volume IS NOT NULL AND {q}.journalKey {member}"
                ));
            } else {
                let d = b.fresh(alias_prefix(entity));
                let col = attribute_col(entity, *attribute);
                b.push(&format!(
                    "SELECT DISTINCT {d}.{col} AS {} FROM {} {d} WHERE {d}.{col} IS NOT NULL AND {d}.{} {member}",
                    attribute.canonical(),
                    table(entity),
                    key_col(entity)
                ));
            }
        }
    }
    b.finish()
}

fn table(e: EntityType) -> &'static str {
    match e {
        EntityType::Publication => "publication",
        EntityType::Person => "person",
        EntityType::Conference => "conference",
        EntityType::Journal => "journal",
        EntityType::Institution => "institution",
    }
}

fn key_col(e: EntityType) -> &'static str {
    match e {
        EntityType::Publication => "publicationKey",
        EntityType::Person => "personKey",
        EntityType::Conference => "conferenceKey",
        EntityType::Journal => "journalKey",
        EntityType::Institution => "institutionKey",
    }
}

fn alias_prefix(e: EntityType) -> &'static str {
    match e {
        EntityType::Publication => "p",
        EntityType::Person => "pe",
        EntityType::Conference => "c",
        EntityType::Journal => "j",
        EntityType::Institution => "i",
    }
}

fn venue_col(kind: VenueKind) -> &'static str {
    match kind {
        VenueKind::Conference => "conferenceKey",
        VenueKind::Journal => "journalKey",
    }
}

/// Expression rendering one entity as its display column.
fn display_expr(e: EntityType, alias: &str) -> String {
    match e {
        EntityType::Publication => format!("{alias}.title AS title"),
        EntityType::Person => format!("{alias}.primaryName AS primaryName"),
        EntityType::Conference | EntityType::Journal => format!("{alias}.acronym AS acronym"),
        EntityType::Institution => {
            format!("{alias}.name || ' (' || {alias}.city || ', ' || {alias}.country || ')' AS institution")
        }
    }
}

/// Column backing an attribute. The person dblp identifier is the only one
/// whose storage name differs from its attribute name.
fn attribute_col(e: EntityType, a: Attribute) -> &'static str {
    match (e, a) {
        (EntityType::Person, Attribute::DblpKey) => "dblpPid",
        _ => a.canonical(),
    }
}

fn clamp(n: u64) -> i64 {
    n.min(i64::MAX as u64) as i64
}

/// Text and bind values accumulated for one CTE body or the final SELECT.
#[derive(Default)]
struct Buf {
    text: String,
    params: Vec<Param>,
}

/// One finished `WITH` entry; `key_col` names its single column.
struct Cte {
    name: String,
    key_col: &'static str,
    body: Buf,
}

struct Builder {
    ctes: Vec<Cte>,
    /// In-progress buffers; the bottom entry becomes the final SELECT.
    bufs: Vec<Buf>,
    next_alias: usize,
}

impl Builder {
    fn new() -> Builder {
        Builder { ctes: Vec::new(), bufs: vec![Buf::default()], next_alias: 0 }
    }

    /// Assembles `WITH ..` entries (definition order, which places every
    /// definition before its first use) followed by the final SELECT. Params
    /// concatenate in the same order, so they track the placeholders.
    fn finish(mut self) -> SqlQuery {
        let main = self.bufs.pop().expect("main buffer");
        debug_assert!(self.bufs.is_empty(), "unfinished keyset buffer");
        let mut text = String::new();
        let mut params = Vec::new();
        let n = self.ctes.len();
        for (i, cte) in self.ctes.into_iter().enumerate() {
            text.push_str(if i == 0 { "WITH " } else { ", " });
            text.push_str(&cte.name);
            text.push('(');
            text.push_str(cte.key_col);
            text.push_str(") AS (");
            text.push_str(&cte.body.text);
            text.push(')');
            if i + 1 == n {
                text.push(' ');
            }
            params.extend(cte.body.params);
        }
        text.push_str(&main.text);
        params.extend(main.params);
        SqlQuery { text, params }
    }

    fn buf(&mut self) -> &mut Buf {
        self.bufs.last_mut().expect("buffer stack never empty")
    }

    fn push(&mut self, s: &str) {
        self.buf().text.push_str(s);
    }

    fn param_text(&mut self, s: &str) {
        let param = Param::Text(s.to_string());
        let buf = self.buf();
        buf.text.push('?');
        buf.params.push(param);
    }

    fn param_int(&mut self, n: i64) {
        let buf = self.buf();
        buf.text.push('?');
        buf.params.push(Param::Int(n));
    }

    /// Globally unique table alias; the shared counter keeps correlated
    /// subqueries from shadowing an outer alias.
    fn fresh(&mut self, prefix: &str) -> String {
        let n = self.next_alias;
        self.next_alias += 1;
        format!("{prefix}{n}")
    }

    /// `LOWER(expr) = LOWER(?)`; NULL columns compare as no match.
    fn lower_eq(&mut self, expr: &str, value: &str) {
        self.push(&format!("LOWER({expr}) = LOWER("));
        self.param_text(value);
        self.push(")");
    }

    /// Lowers an entity expression to a named single-column CTE holding its
    /// key set (with deterministic truncation when the set carries a LIMIT)
    /// and returns the name plus the key column.
    fn keyset(&mut self, e: &EntityExpr) -> (String, &'static str) {
        self.bufs.push(Buf::default());
        let key = match e {
            EntityExpr::Set(s) => {
                self.set_keys(s);
                key_col(s.entity)
            }
            EntityExpr::VenuesOf { kind, source } => {
                let member = self.member_clause(source);
                let q = self.fresh("q");
                let col = venue_col(*kind);
                self.push(&format!(
                    "SELECT DISTINCT {q}.{col} FROM publication {q} \
                     WHERE {q}.{col} IS NOT NULL AND {q}.publicationKey {member}"
                ));
                col
            }
        };
        let body = self.bufs.pop().expect("keyset buffer");
        let name = self.fresh("s");
        self.ctes.push(Cte { name: name.clone(), key_col: key, body });
        (name, key)
    }

    /// Membership test `IN (SELECT <key> FROM <cte>)` against a key set.
    fn member_clause(&mut self, e: &EntityExpr) -> String {
        let (name, key) = self.keyset(e);
        format!("IN (SELECT {key} FROM {name})")
    }

    fn set_keys(&mut self, s: &EntitySet) {
        let a = self.fresh(alias_prefix(s.entity));
        let key = key_col(s.entity);
        self.push(&format!("SELECT {a}.{key} FROM {} {a}", table(s.entity)));
        for (idx, p) in s.predicates.iter().enumerate() {
            self.push(if idx == 0 { " WHERE " } else { " AND " });
            self.predicate(&a, s.entity, p);
        }
        if let Some(n) = s.limit {
            self.push(&format!(" ORDER BY {a}.{key} LIMIT "));
            self.param_int(clamp(n));
        }
    }

    fn predicate(&mut self, a: &str, host: EntityType, p: &Predicate) {
        match p {
            Predicate::PubTypeIs(t) => {
                self.push(&format!("{a}.type = "));
                self.param_text(t.as_str());
            }
            Predicate::PersonHasRole(role) => {
                let x = self.fresh("a");
                self.push(&format!(
                    "EXISTS (SELECT 1 FROM {} {x} WHERE {x}.personKey = {a}.personKey)",
                    role_table(*role)
                ));
            }
            Predicate::PubPublishedBy(inst) => {
                let key = format!("{a}.publicationKey");
                self.published_by(&key, inst);
            }
            Predicate::PubAbout(s) => {
                let key = format!("{a}.publicationKey");
                self.keyword_match(&key, s);
            }
            Predicate::PubWrittenBy(persons) => self.role_membership(a, Role::Author, persons),
            Predicate::PubEditedBy(persons) => self.role_membership(a, Role::Editor, persons),
            Predicate::PubAppearedIn(sel) => self.venue_membership(a, sel),
            Predicate::PubBefore(n) => {
                self.push(&format!("{a}.year < "));
                self.param_int(*n);
            }
            Predicate::PubInYear(n) => {
                self.push(&format!("{a}.year = "));
                self.param_int(*n);
            }
            Predicate::PubAfter(n) => {
                self.push(&format!("{a}.year > "));
                self.param_int(*n);
            }
            Predicate::PubTitled(s) => self.lower_eq(&format!("{a}.title"), s),
            // {a} is the citing side: it has an outgoing edge to a member.
            Predicate::PubReferences(pubs) => self.citation_edge(a, "pub1Key", "pub2Key", pubs),
            // {a} is the cited side: some member has an edge to it.
            Predicate::PubCitedBy(pubs) => self.citation_edge(a, "pub2Key", "pub1Key", pubs),
            Predicate::PubLiteral(s) => {
                self.push("(");
                self.lower_eq(&format!("{a}.dblpKey"), s);
                self.push(" OR ");
                self.lower_eq(&format!("{a}.title"), s);
                self.push(")");
            }
            Predicate::PersonPublishedIn(sel) => {
                let x = self.fresh("a");
                let q = self.fresh("q");
                self.push(&format!(
                    "EXISTS (SELECT 1 FROM person_authored_publication {x} \
                     JOIN publication {q} ON {q}.publicationKey = {x}.publicationKey \
                     WHERE {x}.personKey = {a}.personKey AND "
                ));
                self.venue_membership(&q, sel);
                self.push(")");
            }
            Predicate::PersonPublishedWith(inst) => {
                let x = self.fresh("a");
                self.push(&format!(
                    "EXISTS (SELECT 1 FROM person_authored_publication {x} WHERE {x}.personKey = {a}.personKey AND "
                ));
                let key = format!("{x}.publicationKey");
                self.published_by(&key, inst);
                self.push(")");
            }
            Predicate::PersonWorksFor(inst) => {
                let member = self.member_clause(inst);
                let w = self.fresh("w");
                self.push(&format!(
                    "EXISTS (SELECT 1 FROM person_works_for_institution {w} \
                     WHERE {w}.personKey = {a}.personKey AND {w}.institutionKey {member})"
                ));
            }
            Predicate::PersonNamed(s) => {
                let n = self.fresh("n");
                self.push(&format!(
                    "EXISTS (SELECT 1 FROM person_names {n} WHERE {n}.personKey = {a}.personKey AND "
                ));
                self.lower_eq(&format!("{n}.name"), s);
                self.push(")");
            }
            Predicate::PersonOrcid(s) => self.lower_eq(&format!("{a}.orcid"), s),
            Predicate::PersonAuthored(pubs) => {
                let member = self.member_clause(pubs);
                let x = self.fresh("a");
                self.push(&format!(
                    "EXISTS (SELECT 1 FROM person_authored_publication {x} \
                     WHERE {x}.personKey = {a}.personKey AND {x}.publicationKey {member})"
                ));
            }
            // Authored a publication on the citing side of an edge whose
            // cited side is a member.
            Predicate::PersonReferences(pubs) => self.person_citation(a, "pub1Key", "pub2Key", pubs),
            // Authored a publication on the cited side of an edge whose
            // citing side is a member.
            Predicate::PersonCitedBy(pubs) => self.person_citation(a, "pub2Key", "pub1Key", pubs),
            Predicate::PersonLiteral(s) => {
                let n = self.fresh("n");
                self.push("(");
                self.lower_eq(&format!("{a}.dblpPid"), s);
                self.push(" OR ");
                self.lower_eq(&format!("{a}.orcid"), s);
                self.push(&format!(
                    " OR EXISTS (SELECT 1 FROM person_names {n} WHERE {n}.personKey = {a}.personKey AND "
                ));
                self.lower_eq(&format!("{n}.name"), s);
                self.push("))");
            }
            Predicate::VenueAcronym(s) => self.lower_eq(&format!("{a}.acronym"), s),
            Predicate::VenueAbout(s) => {
                let key = format!("{a}.{}", key_col(host));
                self.keyword_match(&key, s);
            }
            Predicate::VenueBefore(n) => self.venue_year(a, host, "<", *n),
            Predicate::VenueInYear(n) => self.venue_year(a, host, "=", *n),
            Predicate::VenueAfter(n) => self.venue_year(a, host, ">", *n),
            Predicate::JournalNamed(s) => self.lower_eq(&format!("{a}.name"), s),
            Predicate::JournalVolume(s) => {
                let q = self.fresh("q");
                self.push(&format!(
                    "EXISTS (SELECT 1 FROM publication {q} WHERE {q}.journalKey = {a}.journalKey AND "
                ));
                self.lower_eq(&format!("{q}.volume"), s);
                self.push(")");
            }
            Predicate::InstNamed(s) => self.lower_eq(&format!("{a}.name"), s),
            Predicate::InstCity(s) => self.lower_eq(&format!("{a}.city"), s),
            Predicate::InstCountry(s) => self.lower_eq(&format!("{a}.country"), s),
            Predicate::InstMembers(persons) => {
                let member = self.member_clause(persons);
                let w = self.fresh("w");
                self.push(&format!(
                    "EXISTS (SELECT 1 FROM person_works_for_institution {w} \
                     WHERE {w}.institutionKey = {a}.institutionKey AND {w}.personKey {member})"
                ));
            }
        }
    }

    /// Publication `pub_key` has some author affiliated with a member
    /// institution.
    fn published_by(&mut self, pub_key: &str, inst: &EntityExpr) {
        let member = self.member_clause(inst);
        let x = self.fresh("a");
        let w = self.fresh("w");
        self.push(&format!(
            "EXISTS (SELECT 1 FROM person_authored_publication {x} \
             JOIN person_works_for_institution {w} ON {w}.personKey = {x}.personKey \
             WHERE {x}.publicationKey = {pub_key} AND {w}.institutionKey {member})"
        ));
    }

    /// Entity `key_expr` is tagged with the given keyword.
    fn keyword_match(&mut self, key_expr: &str, keyword: &str) {
        let k = self.fresh("k");
        self.push(&format!(
            "EXISTS (SELECT 1 FROM entity_keywords {k} WHERE {k}.entityKey = {key_expr} AND "
        ));
        self.lower_eq(&format!("{k}.keyword"), keyword);
        self.push(")");
    }

    /// Publication `{a}` has a person from the subquery in the given role.
    fn role_membership(&mut self, a: &str, role: Role, persons: &EntityExpr) {
        let member = self.member_clause(persons);
        let x = self.fresh("a");
        self.push(&format!(
            "EXISTS (SELECT 1 FROM {} {x} WHERE {x}.publicationKey = {a}.publicationKey AND {x}.personKey {member})",
            role_table(role)
        ));
    }

    /// Publication `{a}` sits on `own_side` of a reference edge whose
    /// `member_side` belongs to the subquery.
    fn citation_edge(&mut self, a: &str, own_side: &str, member_side: &str, pubs: &EntityExpr) {
        let member = self.member_clause(pubs);
        let r = self.fresh("r");
        self.push(&format!(
            "EXISTS (SELECT 1 FROM publication_references {r} \
             WHERE {r}.{own_side} = {a}.publicationKey AND {r}.{member_side} {member})"
        ));
    }

    /// Person `{a}` authored a publication on `own_side` of an edge whose
    /// `member_side` belongs to the subquery.
    fn person_citation(&mut self, a: &str, own_side: &str, member_side: &str, pubs: &EntityExpr) {
        let member = self.member_clause(pubs);
        let x = self.fresh("a");
        let r = self.fresh("r");
        self.push(&format!(
            "EXISTS (SELECT 1 FROM person_authored_publication {x} \
             JOIN publication_references {r} ON {r}.{own_side} = {x}.publicationKey \
             WHERE {x}.personKey = {a}.personKey AND {r}.{member_side} {member})"
        ));
    }

    /// Publication alias `pub_alias` appeared in a venue from the selector.
    fn venue_membership(&mut self, pub_alias: &str, sel: &VenueSelector) {
        match sel {
            VenueSelector::Venues(v) => {
                let col = match v.entity() {
                    EntityType::Conference => "conferenceKey",
                    EntityType::Journal => "journalKey",
                    other => unreachable!("venue selector over {other:?}"),
                };
                let member = self.member_clause(v);
                self.push(&format!("{pub_alias}.{col} {member}"));
            }
            VenueSelector::Literal(s) => {
                let c = self.fresh("c");
                let j = self.fresh("j");
                self.push(&format!(
                    "({pub_alias}.conferenceKey IN (SELECT {c}.conferenceKey FROM conference {c} WHERE "
                ));
                self.lower_eq(&format!("{c}.dblpKey"), s);
                self.push(" OR ");
                self.lower_eq(&format!("{c}.acronym"), s);
                self.push(&format!(
                    ") OR {pub_alias}.journalKey IN (SELECT {j}.journalKey FROM journal {j} WHERE "
                ));
                self.lower_eq(&format!("{j}.dblpKey"), s);
                self.push(" OR ");
                self.lower_eq(&format!("{j}.acronym"), s);
                self.push("))");
            }
        }
    }

    /// The venue hosts a publication whose year satisfies `op`. The venue
    /// key column has the same name on the publication table.
    fn venue_year(&mut self, a: &str, host: EntityType, op: &str, n: i64) {
        let q = self.fresh("q");
        let key = key_col(host);
        self.push(&format!(
            "EXISTS (SELECT 1 FROM publication {q} WHERE {q}.{key} = {a}.{key} AND {q}.year {op} "
        ));
        self.param_int(n);
        self.push(")");
    }
}

fn role_table(role: Role) -> &'static str {
    match role {
        Role::Author => "person_authored_publication",
        Role::Editor => "person_edited_publication",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze_text;

    fn sql(src: &str) -> SqlQuery {
        compile(&analyze_text(src).unwrap())
    }

    const SAMPLES: &[&str] = &[
        r#"PUBLICATIONS WRITTEN BY "Alice Marsh";"#,
        r#"AUTHORS PUBLISHED IN (CONFERENCE ACRONYM "CODAR");"#,
        r#"PUBLICATIONS CITED BY (PUBLICATIONS WRITTEN BY "Alice Marsh" IN YEAR 2014);"#,
        r#"MOST CITED (PUBLICATIONS WRITTEN BY "Alice Marsh");"#,
        r#"MOST CITED (ARTICLES APPEARED IN "CODAR") LIMIT 10;"#,
        r#"COUNT (PERSONS WORKS FOR (INSTITUTIONS CITY "Berlin"));"#,
        r#"KEYWORDS OF (JOURNAL OF (PUBLICATIONS TITLED "P"));"#,
        r#""year" OF PUBLICATIONS APPEARED IN "icadl" LIMIT 3;"#,
        r#"PERSONS PUBLISHED WITH (INSTITUTIONS NAMED "X") CITED BY (PUBLICATIONS AFTER 2000);"#,
        r#"JOURNALS VOLUME "37" ABOUT "ir";"#,
        r#"INSTITUTIONS MEMBERS (EDITORS NAMED "E") COUNTRY "de";"#,
        r#"PHDTHESES BEFORE 2005 LIMIT 7;"#,
        r#"CONFERENCES OF (PUBLICATIONS EDITED BY (PERSONS ORCID "0000-0001-2345-6789"));"#,
        r#"COUNT (PUBLICATIONS REFERENCES (PUBLICATIONS TITLED "P")) LIMIT 1;"#,
        r#"PERSONS AUTHORED (BOOKS PUBLISHED BY (INSTITUTIONS NAMED "X Institute of Technology"));"#,
    ];

    #[test]
    fn placeholders_match_params_and_nothing_is_inlined() {
        for src in SAMPLES {
            let q = sql(src);
            let holes = q.text.matches('?').count();
            assert_eq!(holes, q.params.len(), "placeholder/param mismatch for {src}: {}", q.text);
            assert!(!q.text.contains('"'), "double quote leaked into SQL for {src}: {}", q.text);
            for p in &q.params {
                if let Param::Text(s) = p {
                    let quoted = format!("'{s}'");
                    assert!(!q.text.contains(&quoted), "inlined value {quoted} in {}", q.text);
                }
            }
        }
    }

    #[test]
    fn entity_queries_select_distinct_display_column() {
        assert_eq!(
            sql("PUBLICATIONS;").text,
            "WITH s1(publicationKey) AS (SELECT p0.publicationKey FROM publication p0) \
             SELECT DISTINCT p2.title AS title FROM publication p2 \
             WHERE p2.publicationKey IN (SELECT publicationKey FROM s1)"
        );
        assert!(sql("EDITORS;").text.contains("SELECT DISTINCT pe3.primaryName AS primaryName"));
        assert!(sql("CONFERENCES;").text.contains("SELECT DISTINCT c2.acronym AS acronym"));
        let inst = sql("INSTITUTIONS;").text;
        assert!(inst.contains("|| ', ' ||"), "institution display should concatenate city and country: {inst}");
    }

    #[test]
    fn no_natural_joins_anywhere() {
        for src in SAMPLES {
            let q = sql(src);
            assert!(!q.text.to_uppercase().contains("NATURAL"), "{}", q.text);
        }
    }

    #[test]
    fn subqueries_become_named_key_sets() {
        let q = sql(r#"PUBLICATIONS WRITTEN BY (PERSONS NAMED "A");"#);
        assert!(q.text.starts_with("WITH s"), "{}", q.text);
        assert!(q.text.contains(".personKey IN (SELECT personKey FROM s"), "{}", q.text);
    }

    #[test]
    fn statement_depth_stays_flat_under_nesting() {
        // Inlined subqueries would overflow SQLite's fixed parser stack on
        // deep nesting; named key sets keep parenthesis depth constant.
        let deep = r#"PUBLICATIONS CITED BY (PUBLICATIONS WRITTEN BY (PERSONS AUTHORED
            (PUBLICATIONS APPEARED IN (CONFERENCES OF (PUBLICATIONS ABOUT "ir")))));"#;
        let q = sql(deep);
        let mut depth: i32 = 0;
        let mut max_depth = 0;
        for ch in q.text.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    max_depth = max_depth.max(depth);
                }
                ')' => depth -= 1,
                _ => {}
            }
        }
        assert_eq!(depth, 0, "unbalanced parentheses: {}", q.text);
        assert!(max_depth <= 10, "nesting depth {max_depth} too deep: {}", q.text);
    }

    #[test]
    fn most_cited_groups_and_orders() {
        let q = sql(r#"MOST CITED (PUBLICATIONS WRITTEN BY "A");"#);
        assert!(
            q.text.contains("GROUP BY p6.publicationKey ORDER BY COUNT(*) DESC, p6.publicationKey LIMIT ?"),
            "{}",
            q.text
        );
        assert_eq!(q.params.last(), Some(&Param::Int(5)));
        let q10 = sql(r#"MOST CITED (PUBLICATIONS) LIMIT 10;"#);
        assert_eq!(q10.params.last(), Some(&Param::Int(10)));
    }

    #[test]
    fn row_set_limits_ride_on_an_order_by() {
        // A LIMIT that truncates a row set must be deterministic; the only
        // exemption is a LIMIT applied to the one-row COUNT aggregate.
        for src in SAMPLES {
            let typed = analyze_text(src).unwrap();
            let q = compile(&typed);
            let mut text = q.text.clone();
            if matches!(typed, crate::analyze::TypedExpr::Count { .. }) && text.ends_with("LIMIT ?") {
                text.truncate(text.len() - "LIMIT ?".len());
            }
            for (i, _) in text.match_indices("LIMIT") {
                let before = &text[..i];
                let at = before.rfind("ORDER BY");
                assert!(at.is_some(), "LIMIT without ORDER BY in {text}");
                let between = before[at.unwrap()..].replace("COUNT(*)", "");
                assert!(!between.contains(')'), "LIMIT detached from its ORDER BY in {text}");
            }
        }
        let q = sql("PUBLICATIONS LIMIT 5;");
        assert!(q.text.contains("ORDER BY p0.publicationKey LIMIT ?"), "{}", q.text);
        let counted = sql("COUNT (PERSONS LIMIT 20);");
        assert!(counted.text.contains("ORDER BY pe0.personKey LIMIT ?"), "{}", counted.text);
    }

    #[test]
    fn year_filters_compare_strictly() {
        let q = sql("PUBLICATIONS BEFORE 2010 AFTER 2000 IN YEAR 2005;");
        assert!(q.text.contains(".year < ?"));
        assert!(q.text.contains(".year > ?"));
        assert!(q.text.contains(".year = ?"));
        assert_eq!(q.params, vec![Param::Int(2010), Param::Int(2000), Param::Int(2005)]);
    }

    #[test]
    fn venue_year_checks_hosted_publications() {
        let q = sql("CONFERENCES AFTER 2015;");
        assert!(
            q.text.contains("EXISTS (SELECT 1 FROM publication q1 WHERE q1.conferenceKey = c0.conferenceKey AND q1.year > ?"),
            "{}",
            q.text
        );
    }

    #[test]
    fn citation_directions_differ() {
        let cited = sql(r#"PUBLICATIONS CITED BY (PUBLICATIONS TITLED "P");"#).text;
        let refs = sql(r#"PUBLICATIONS REFERENCES (PUBLICATIONS TITLED "P");"#).text;
        assert!(cited.contains("r3.pub2Key = p0.publicationKey AND r3.pub1Key IN (SELECT publicationKey FROM s2)"), "{cited}");
        assert!(refs.contains("r3.pub1Key = p0.publicationKey AND r3.pub2Key IN (SELECT publicationKey FROM s2)"), "{refs}");
    }

    #[test]
    fn venue_literal_covers_both_kinds_and_both_fields() {
        let q = sql(r#"PUBLICATIONS APPEARED IN "icadl";"#);
        assert!(q.text.contains("conferenceKey IN (SELECT"));
        assert!(q.text.contains("journalKey IN (SELECT"));
        assert_eq!(q.params.len(), 4, "{}", q.text);
    }

    #[test]
    fn person_literal_covers_pid_orcid_and_names() {
        let q = sql(r#"PUBLICATIONS WRITTEN BY "Jane Roe";"#);
        assert!(q.text.contains("dblpPid"));
        assert!(q.text.contains("orcid"));
        assert!(q.text.contains("person_names"));
        assert_eq!(q.params.len(), 3);
    }

    #[test]
    fn strings_compare_case_insensitively() {
        let q = sql(r#"JOURNALS NAMED "Journal of X";"#);
        assert!(q.text.contains("LOWER(j0.name) = LOWER(?)"), "{}", q.text);
    }

    #[test]
    fn count_reads_a_named_keyset() {
        let q = sql("COUNT (INSTITUTIONS);");
        assert_eq!(
            q.text,
            "WITH s1(institutionKey) AS (SELECT i0.institutionKey FROM institution i0) \
             SELECT COUNT(*) AS count FROM s1"
        );
    }

    #[test]
    fn attribute_query_excludes_null() {
        let q = sql(r#""orcid" OF PERSONS;"#);
        assert!(q.text.contains("pe2.orcid IS NOT NULL"), "{}", q.text);
        let dblp = sql(r#""dblpKey" OF PERSONS;"#);
        assert!(dblp.text.contains("pe2.dblpPid AS dblpKey"), "{}", dblp.text);
    }

    #[test]
    fn journal_volume_attribute_reads_publications() {
        let q = sql(r#""volume" OF JOURNALS;"#);
        assert!(
            q.text.contains("SELECT DISTINCT q2.volume AS volume FROM publication q2 WHERE q2.volume IS NOT NULL"),
            "{}",
            q.text
        );
        // Conference and journal dblp keys come straight off the venue table.
        let c = sql(r#""dblpKey" OF CONFERENCES;"#);
        assert!(c.text.contains("c2.dblpKey AS dblpKey"), "{}", c.text);
    }

    #[test]
    fn navigation_projects_venue_keys_of_source() {
        let q = sql("JOURNALS OF (ARTICLES);");
        assert!(
            q.text.contains(
                "SELECT DISTINCT q2.journalKey FROM publication q2 \
                 WHERE q2.journalKey IS NOT NULL AND q2.publicationKey IN (SELECT publicationKey FROM s1)"
            ),
            "{}",
            q.text
        );
    }
}
