//! Relational schema of the embedded store. Eleven tables: five entity
//! tables, five relationship tables, and one keyword table shared by
//! publications and venues.
//!
//! Naming notes that the SQL generator depends on:
//! - every entity table has a `<noun>Key` primary key (`publicationKey`,
//!   `personKey`, ...), and relationship tables reuse those column names so
//!   equi-joins line up;
//! - the person table stores its dblp identifier as `dblpPid`, not
//!   `dblpKey`, so that person and publication never share a non-key column
//!   (a `NATURAL JOIN` across `person`, `person_authored_publication`, and
//!   `publication` must join on keys alone);
//! - `publication_references.pub1Key` is the citing side, `pub2Key` the
//!   cited side;
//! - `entity_keywords.entityKey` holds publication or venue keys.

/// Data-definition statements, in creation order.
pub const DDL: &[&str] = &[
    "CREATE TABLE IF NOT EXISTS publication (
        publicationKey TEXT PRIMARY KEY,
        dblpKey TEXT,
        title TEXT NOT NULL,
        year INTEGER,
        type TEXT NOT NULL,
        conferenceKey TEXT,
        journalKey TEXT,
        volume TEXT
    )",
    "CREATE TABLE IF NOT EXISTS person (
        personKey TEXT PRIMARY KEY,
        dblpPid TEXT,
        primaryName TEXT NOT NULL,
        orcid TEXT
    )",
    "CREATE TABLE IF NOT EXISTS person_names (
        personKey TEXT NOT NULL,
        name TEXT NOT NULL,
        PRIMARY KEY (personKey, name)
    )",
    "CREATE TABLE IF NOT EXISTS person_authored_publication (
        personKey TEXT NOT NULL,
        publicationKey TEXT NOT NULL,
        PRIMARY KEY (personKey, publicationKey)
    )",
    "CREATE TABLE IF NOT EXISTS person_edited_publication (
        personKey TEXT NOT NULL,
        publicationKey TEXT NOT NULL,
        PRIMARY KEY (personKey, publicationKey)
    )",
    "CREATE TABLE IF NOT EXISTS publication_references (
        pub1Key TEXT NOT NULL,
        pub2Key TEXT NOT NULL,
        PRIMARY KEY (pub1Key, pub2Key)
    )",
    "CREATE TABLE IF NOT EXISTS conference (
        conferenceKey TEXT PRIMARY KEY,
        dblpKey TEXT,
        acronym TEXT NOT NULL,
        name TEXT NOT NULL
    )",
    "CREATE TABLE IF NOT EXISTS journal (
        journalKey TEXT PRIMARY KEY,
        dblpKey TEXT,
        acronym TEXT NOT NULL,
        name TEXT NOT NULL
    )",
    "CREATE TABLE IF NOT EXISTS institution (
        institutionKey TEXT PRIMARY KEY,
        name TEXT NOT NULL,
        city TEXT NOT NULL,
        country TEXT NOT NULL
    )",
    "CREATE TABLE IF NOT EXISTS person_works_for_institution (
        personKey TEXT NOT NULL,
        institutionKey TEXT NOT NULL,
        PRIMARY KEY (personKey, institutionKey)
    )",
    "CREATE TABLE IF NOT EXISTS entity_keywords (
        entityKey TEXT NOT NULL,
        keyword TEXT NOT NULL,
        PRIMARY KEY (entityKey, keyword)
    )",
    "CREATE INDEX IF NOT EXISTS idx_publication_year ON publication (year)",
    "CREATE INDEX IF NOT EXISTS idx_publication_conference ON publication (conferenceKey)",
    "CREATE INDEX IF NOT EXISTS idx_publication_journal ON publication (journalKey)",
    "CREATE INDEX IF NOT EXISTS idx_references_cited ON publication_references (pub2Key)",
    "CREATE INDEX IF NOT EXISTS idx_authored_publication ON person_authored_publication (publicationKey)",
    "CREATE INDEX IF NOT EXISTS idx_edited_publication ON person_edited_publication (publicationKey)",
    "CREATE INDEX IF NOT EXISTS idx_names_name ON person_names (name)",
    "CREATE INDEX IF NOT EXISTS idx_works_for_institution ON person_works_for_institution (institutionKey)",
    "CREATE INDEX IF NOT EXISTS idx_keywords_keyword ON entity_keywords (keyword)",
];

/// Table names, in the order rows are inserted during a load.
pub const TABLES: &[&str] = &[
    "publication",
    "person",
    "person_names",
    "person_authored_publication",
    "person_edited_publication",
    "publication_references",
    "conference",
    "journal",
    "institution",
    "person_works_for_institution",
    "entity_keywords",
];
