//! Embedded execution backend: opens the SQLite store, creates the schema,
//! loads datasets atomically, and runs generated statements.

use crate::codegen::SqlQuery;
use crate::error::{EngineError, Error, FixtureError, Result};
use crate::model::{
    Affiliation, Authorship, FixtureDataset, Institution, KeywordEntry, Person, PubType, Publication, ReferenceEdge,
    Role, Venue, VenueKind,
};
use crate::table::{ResultTable, Value};
use rusqlite::types::ValueRef;
use rusqlite::Connection;
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

/// Handle to one SQLite database with the SchenQL schema in place.
pub struct Db {
    conn: Connection,
}

/// Rows written by a load, per table, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadStats {
    pub per_table: Vec<(&'static str, usize)>,
}

impl LoadStats {
    pub fn total(&self) -> usize {
        self.per_table.iter().map(|(_, n)| n).sum()
    }
}

impl Db {
    /// Opens (creating if needed) the database at `location`, which is
    /// either a file path or `:memory:`, and ensures the schema exists.
    pub fn open(location: &str) -> Result<Db> {
        let conn = if location == ":memory:" {
            Connection::open_in_memory()
        } else {
            Connection::open(Path::new(location))
        }
        .map_err(|e| Error::Startup(format!("cannot open database at {location}: {e}")))?;
        for stmt in crate::schema::DDL {
            conn.execute(stmt, [])
                .map_err(|e| Error::Startup(format!("cannot initialize schema: {e}")))?;
        }
        Ok(Db { conn })
    }

    pub fn open_in_memory() -> Result<Db> {
        Db::open(":memory:")
    }

    /// Validates and loads a dataset, replacing any previous contents. The
    /// whole load runs in one transaction: on any failure the database is
    /// left exactly as it was.
    pub fn load_dataset(&mut self, data: &FixtureDataset) -> Result<LoadStats> {
        let report = crate::model::validate_dataset(data);
        if !report.is_valid() {
            return Err(FixtureError::ValidationFailed { report }.into());
        }
        let fail = |e: rusqlite::Error| Error::Startup(format!("load failed: {e}"));
        let tx = self.conn.transaction().map_err(fail)?;
        for table in crate::schema::TABLES {
            tx.execute(&format!("DELETE FROM {table}"), []).map_err(fail)?;
        }

        let venue_kinds: HashMap<&str, VenueKind> = data.venues.iter().map(|v| (v.key.as_str(), v.kind)).collect();
        let mut stats: Vec<(&'static str, usize)> = Vec::new();
        {
            let mut insert_pub = tx
                .prepare("INSERT INTO publication VALUES (?, ?, ?, ?, ?, ?, ?, ?)")
                .map_err(fail)?;
            for p in &data.publications {
                let (conference_key, journal_key) = match p.venue_key.as_deref() {
                    Some(v) => match venue_kinds.get(v) {
                        Some(VenueKind::Conference) => (Some(v), None),
                        Some(VenueKind::Journal) => (None, Some(v)),
                        None => (None, None),
                    },
                    None => (None, None),
                };
                insert_pub
                    .execute(rusqlite::params![
                        p.key,
                        p.dblp_key,
                        p.title,
                        p.year,
                        p.pub_type.as_str(),
                        conference_key,
                        journal_key,
                        p.volume,
                    ])
                    .map_err(fail)?;
            }
            stats.push(("publication", data.publications.len()));

            let mut insert_person = tx.prepare("INSERT INTO person VALUES (?, ?, ?, ?)").map_err(fail)?;
            let mut insert_name = tx.prepare("INSERT INTO person_names VALUES (?, ?)").map_err(fail)?;
            let mut name_rows = 0;
            for pe in &data.persons {
                insert_person
                    .execute(rusqlite::params![pe.key, pe.dblp_key, pe.primary_name, pe.orcid])
                    .map_err(fail)?;
                for name in &pe.names {
                    insert_name.execute(rusqlite::params![pe.key, name]).map_err(fail)?;
                    name_rows += 1;
                }
            }
            stats.push(("person", data.persons.len()));
            stats.push(("person_names", name_rows));

            let mut insert_authored = tx
                .prepare("INSERT INTO person_authored_publication VALUES (?, ?)")
                .map_err(fail)?;
            let mut insert_edited = tx
                .prepare("INSERT INTO person_edited_publication VALUES (?, ?)")
                .map_err(fail)?;
            let (mut authored, mut edited) = (0, 0);
            for a in &data.authorship {
                match a.role {
                    Role::Author => {
                        insert_authored
                            .execute(rusqlite::params![a.person_key, a.publication_key])
                            .map_err(fail)?;
                        authored += 1;
                    }
                    Role::Editor => {
                        insert_edited
                            .execute(rusqlite::params![a.person_key, a.publication_key])
                            .map_err(fail)?;
                        edited += 1;
                    }
                }
            }
            stats.push(("person_authored_publication", authored));
            stats.push(("person_edited_publication", edited));

            let mut insert_ref = tx.prepare("INSERT INTO publication_references VALUES (?, ?)").map_err(fail)?;
            for r in &data.reference_edges {
                insert_ref
                    .execute(rusqlite::params![r.citing_key, r.cited_key])
                    .map_err(fail)?;
            }
            stats.push(("publication_references", data.reference_edges.len()));

            let mut insert_conf = tx.prepare("INSERT INTO conference VALUES (?, ?, ?, ?)").map_err(fail)?;
            let mut insert_journal = tx.prepare("INSERT INTO journal VALUES (?, ?, ?, ?)").map_err(fail)?;
            let (mut conferences, mut journals) = (0, 0);
            for v in &data.venues {
                match v.kind {
                    VenueKind::Conference => {
                        insert_conf
                            .execute(rusqlite::params![v.key, v.dblp_key, v.acronym, v.name])
                            .map_err(fail)?;
                        conferences += 1;
                    }
                    VenueKind::Journal => {
                        insert_journal
                            .execute(rusqlite::params![v.key, v.dblp_key, v.acronym, v.name])
                            .map_err(fail)?;
                        journals += 1;
                    }
                }
            }
            stats.push(("conference", conferences));
            stats.push(("journal", journals));

            let mut insert_inst = tx.prepare("INSERT INTO institution VALUES (?, ?, ?, ?)").map_err(fail)?;
            for i in &data.institutions {
                insert_inst
                    .execute(rusqlite::params![i.key, i.name, i.city, i.country])
                    .map_err(fail)?;
            }
            stats.push(("institution", data.institutions.len()));

            let mut insert_aff = tx
                .prepare("INSERT INTO person_works_for_institution VALUES (?, ?)")
                .map_err(fail)?;
            for a in &data.affiliations {
                insert_aff
                    .execute(rusqlite::params![a.person_key, a.institution_key])
                    .map_err(fail)?;
            }
            stats.push(("person_works_for_institution", data.affiliations.len()));

            let mut insert_kw = tx.prepare("INSERT INTO entity_keywords VALUES (?, ?)").map_err(fail)?;
            for k in &data.keywords {
                insert_kw
                    .execute(rusqlite::params![k.entity_key, k.keyword])
                    .map_err(fail)?;
            }
            stats.push(("entity_keywords", data.keywords.len()));
        }
        tx.commit().map_err(fail)?;
        Ok(LoadStats { per_table: stats })
    }

    /// Runs one generated statement and materializes the rows.
    pub fn execute(&self, q: &SqlQuery) -> Result<ResultTable> {
        let wrap = |source: rusqlite::Error| EngineError { sql: q.text.clone(), source };
        let mut stmt = self.conn.prepare(&q.text).map_err(wrap)?;
        let column_names: Vec<String> = stmt.column_names().iter().map(|s| s.to_string()).collect();
        let mut rows = stmt.query(rusqlite::params_from_iter(q.params.iter())).map_err(wrap)?;
        let mut out = Vec::new();
        while let Some(row) = rows.next().map_err(wrap)? {
            let mut values = Vec::with_capacity(column_names.len());
            for i in 0..column_names.len() {
                values.push(match row.get_ref(i).map_err(wrap)? {
                    ValueRef::Null => Value::Null,
                    ValueRef::Integer(n) => Value::Int(n),
                    ValueRef::Real(f) => Value::Text(f.to_string()),
                    ValueRef::Text(t) => Value::Text(String::from_utf8_lossy(t).into_owned()),
                    ValueRef::Blob(_) => Value::Null,
                });
            }
            out.push(values);
        }
        Ok(ResultTable::new(column_names, out))
    }

    /// Full pipeline on one query string: lex, parse, analyze, compile, run.
    pub fn run_query(&self, src: &str) -> Result<ResultTable> {
        let typed = crate::analyze_text(src)?;
        self.execute(&crate::codegen::compile(&typed))
    }

    /// Reads the whole store back into a dataset, e.g. to hand the
    /// reference evaluator the same data the SQL pipeline sees.
    pub fn read_dataset(&self) -> Result<FixtureDataset> {
        let wrap = |sql: &str| {
            let sql = sql.to_string();
            move |source: rusqlite::Error| EngineError { sql: sql.clone(), source }
        };
        let mut data = FixtureDataset::default();

        let sql = "SELECT publicationKey, dblpKey, title, year, type, conferenceKey, journalKey, volume FROM publication";
        let mut stmt = self.conn.prepare(sql).map_err(wrap(sql))?;
        let rows = stmt
            .query_map([], |row| {
                let type_text: String = row.get(4)?;
                let conference: Option<String> = row.get(5)?;
                let journal: Option<String> = row.get(6)?;
                Ok(Publication {
                    key: row.get(0)?,
                    dblp_key: row.get(1)?,
                    title: row.get(2)?,
                    year: row.get(3)?,
                    pub_type: PubType::ALL
                        .iter()
                        .copied()
                        .find(|t| t.as_str() == type_text)
                        .unwrap_or(PubType::Article),
                    venue_key: conference.or(journal),
                    volume: row.get(7)?,
                })
            })
            .map_err(wrap(sql))?;
        for row in rows {
            data.publications.push(row.map_err(wrap(sql))?);
        }

        let sql = "SELECT personKey, dblpPid, primaryName, orcid FROM person";
        let mut stmt = self.conn.prepare(sql).map_err(wrap(sql))?;
        let rows = stmt
            .query_map([], |row| {
                Ok(Person {
                    key: row.get(0)?,
                    dblp_key: row.get(1)?,
                    primary_name: row.get(2)?,
                    orcid: row.get(3)?,
                    names: Default::default(),
                })
            })
            .map_err(wrap(sql))?;
        let mut persons: BTreeMap<String, Person> = BTreeMap::new();
        for row in rows {
            let p = row.map_err(wrap(sql))?;
            persons.insert(p.key.clone(), p);
        }
        let sql = "SELECT personKey, name FROM person_names";
        let mut stmt = self.conn.prepare(sql).map_err(wrap(sql))?;
        let rows = stmt
            .query_map([], |row| Ok((row.get::<_, String>(0)?, row.get::<_, String>(1)?)))
            .map_err(wrap(sql))?;
        for row in rows {
            let (key, name) = row.map_err(wrap(sql))?;
            if let Some(p) = persons.get_mut(&key) {
                p.names.insert(name);
            }
        }
        data.persons = persons.into_values().collect();

        for (table, kind) in [("conference", VenueKind::Conference), ("journal", VenueKind::Journal)] {
            let sql = format!("SELECT {table}Key, dblpKey, acronym, name FROM {table}");
            let mut stmt = self.conn.prepare(&sql).map_err(wrap(&sql))?;
            let rows = stmt
                .query_map([], |row| {
                    Ok(Venue {
                        key: row.get(0)?,
                        dblp_key: row.get(1)?,
                        kind,
                        acronym: row.get(2)?,
                        name: row.get(3)?,
                    })
                })
                .map_err(wrap(&sql))?;
            for row in rows {
                data.venues.push(row.map_err(wrap(&sql))?);
            }
        }

        let sql = "SELECT institutionKey, name, city, country FROM institution";
        let mut stmt = self.conn.prepare(sql).map_err(wrap(sql))?;
        let rows = stmt
            .query_map([], |row| {
                Ok(Institution { key: row.get(0)?, name: row.get(1)?, city: row.get(2)?, country: row.get(3)? })
            })
            .map_err(wrap(sql))?;
        for row in rows {
            data.institutions.push(row.map_err(wrap(sql))?);
        }

        for (table, role) in [
            ("person_authored_publication", Role::Author),
            ("person_edited_publication", Role::Editor),
        ] {
            let sql = format!("SELECT personKey, publicationKey FROM {table}");
            let mut stmt = self.conn.prepare(&sql).map_err(wrap(&sql))?;
            let rows = stmt
                .query_map([], |row| {
                    Ok(Authorship { person_key: row.get(0)?, publication_key: row.get(1)?, role })
                })
                .map_err(wrap(&sql))?;
            for row in rows {
                data.authorship.push(row.map_err(wrap(&sql))?);
            }
        }

        let sql = "SELECT pub1Key, pub2Key FROM publication_references";
        let mut stmt = self.conn.prepare(sql).map_err(wrap(sql))?;
        let rows = stmt
            .query_map([], |row| Ok(ReferenceEdge { citing_key: row.get(0)?, cited_key: row.get(1)? }))
            .map_err(wrap(sql))?;
        for row in rows {
            data.reference_edges.push(row.map_err(wrap(sql))?);
        }

        let sql = "SELECT personKey, institutionKey FROM person_works_for_institution";
        let mut stmt = self.conn.prepare(sql).map_err(wrap(sql))?;
        let rows = stmt
            .query_map([], |row| Ok(Affiliation { person_key: row.get(0)?, institution_key: row.get(1)? }))
            .map_err(wrap(sql))?;
        for row in rows {
            data.affiliations.push(row.map_err(wrap(sql))?);
        }

        let sql = "SELECT entityKey, keyword FROM entity_keywords";
        let mut stmt = self.conn.prepare(sql).map_err(wrap(sql))?;
        let rows = stmt
            .query_map([], |row| Ok(KeywordEntry { entity_key: row.get(0)?, keyword: row.get(1)? }))
            .map_err(wrap(sql))?;
        for row in rows {
            data.keywords.push(row.map_err(wrap(sql))?);
        }

        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn loaded() -> (Db, synth::SynthOutput) {
        let out = synth::generate(synth::SynthConfig::default(), 42);
        let mut db = Db::open_in_memory().unwrap();
        db.load_dataset(&out.dataset).unwrap();
        (db, out)
    }

    #[test]
    fn load_stats_match_dataset_shape() {
        let (_, out) = loaded();
        let mut db = Db::open_in_memory().unwrap();
        let stats = db.load_dataset(&out.dataset).unwrap();
        let expected = synth::table_stats(&out.dataset);
        for (table, n) in &stats.per_table {
            assert_eq!(expected[*table], *n, "row count for {table}");
        }
        assert_eq!(stats.per_table.len(), crate::schema::TABLES.len());
    }

    #[test]
    fn reload_replaces_contents() {
        let (mut db, out) = loaded();
        let first = db.load_dataset(&out.dataset).unwrap();
        let second = db.load_dataset(&out.dataset).unwrap();
        assert_eq!(first, second);
        let count = db.run_query("COUNT (PUBLICATIONS);").unwrap();
        assert_eq!(count.rows[0][0], Value::Int(out.dataset.publications.len() as i64));
    }

    #[test]
    fn failed_validation_leaves_database_untouched() {
        let (mut db, out) = loaded();
        let mut broken = out.dataset.clone();
        broken.reference_edges.push(crate::model::ReferenceEdge {
            citing_key: "no-such-pub".into(),
            cited_key: broken.publications[0].key.clone(),
        });
        let err = db.load_dataset(&broken).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let count = db.run_query("COUNT (PUBLICATIONS);").unwrap();
        assert_eq!(count.rows[0][0], Value::Int(out.dataset.publications.len() as i64));
    }

    #[test]
    fn query_by_anchor_title_returns_one_row() {
        let (db, out) = loaded();
        let title = &out.dataset.publications[0].title;
        let table = db
            .run_query(&format!("PUBLICATIONS TITLED {};", crate::ast::quote_string(title)))
            .unwrap();
        assert_eq!(table.column_names, vec!["title"]);
        assert_eq!(table.rows, vec![vec![Value::Text(title.clone())]]);
        assert_eq!(table.total_row_count, 1);
    }

    #[test]
    fn citation_demo_most_cited_order() {
        let mut db = Db::open_in_memory().unwrap();
        db.load_dataset(&synth::citation_demo()).unwrap();
        let t = db.run_query("MOST CITED (PUBLICATIONS);").unwrap();
        assert_eq!(t.column_names, vec!["title", "citationCount"]);
        // P is cited twice (by C1 and C2); R1 and R2 once each (by P);
        // C1 and C2 never, so the inner join drops them.
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[0], vec![Value::Text("P".into()), Value::Int(2)]);
        assert_eq!(t.rows[1][1], Value::Int(1));
        assert_eq!(t.rows[2][1], Value::Int(1));
    }

    #[test]
    fn citation_demo_directions() {
        let mut db = Db::open_in_memory().unwrap();
        db.load_dataset(&synth::citation_demo()).unwrap();
        let cited = db.run_query(r#"PUBLICATIONS CITED BY (PUBLICATIONS TITLED "P");"#).unwrap();
        let mut titles: Vec<String> = cited.rows.iter().map(|r| r[0].to_string()).collect();
        titles.sort();
        assert_eq!(titles, vec!["R1", "R2"]);
        let refs = db.run_query(r#"PUBLICATIONS REFERENCES (PUBLICATIONS TITLED "P");"#).unwrap();
        let mut titles: Vec<String> = refs.rows.iter().map(|r| r[0].to_string()).collect();
        titles.sort();
        assert_eq!(titles, vec!["C1", "C2"]);
    }

    #[test]
    fn engine_error_carries_sql() {
        let db = Db::open_in_memory().unwrap();
        let bad = crate::codegen::SqlQuery { text: "SELECT no_such_col FROM publication".into(), params: vec![] };
        let err = db.execute(&bad).unwrap_err();
        match err {
            Error::Engine(e) => assert!(e.sql.contains("no_such_col")),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(matches!(db.execute(&bad).unwrap_err().exit_code(), 1));
    }

    #[test]
    fn dataset_round_trips_through_store() {
        let (db, out) = loaded();
        let back = db.read_dataset().unwrap();
        assert_eq!(back.canonicalized(), out.dataset.canonicalized());
    }

    #[test]
    fn column_names_match_analyzer_output_columns() {
        let (db, out) = loaded();
        let samples = [
            "PUBLICATIONS;".to_string(),
            "COUNT (PERSONS);".to_string(),
            "MOST CITED (PUBLICATIONS);".to_string(),
            "KEYWORDS OF (CONFERENCES);".to_string(),
            r#""orcid" OF PERSONS;"#.to_string(),
            format!("INSTITUTIONS NAMED {};", crate::ast::quote_string(&out.dataset.institutions[0].name)),
        ];
        for src in &samples {
            let typed = crate::analyze_text(src).unwrap();
            let table = db.execute(&crate::codegen::compile(&typed)).unwrap();
            let expected: Vec<String> = crate::analyze::output_columns(&typed).iter().map(|s| s.to_string()).collect();
            assert_eq!(table.column_names, expected, "column names for {src}");
        }
    }

    #[test]
    fn institution_display_includes_city_and_country() {
        let (db, out) = loaded();
        let inst = &out.dataset.institutions[0];
        let table = db
            .run_query(&format!("INSTITUTIONS NAMED {};", crate::ast::quote_string(&inst.name)))
            .unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(
            table.rows[0][0],
            Value::Text(format!("{} ({}, {})", inst.name, inst.city, inst.country))
        );
    }
}
