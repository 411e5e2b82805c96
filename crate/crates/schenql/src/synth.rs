//! Deterministic synthetic fixture generation for tests, benchmarks, and the
//! demo database. The generator plants an "anchor" author, conference, and
//! year whose surroundings are engineered (distinct citation counts, known
//! venue) so equivalence tests can query them without tripping over ties.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    Affiliation, Authorship, FixtureDataset, Institution, KeywordEntry, Person, PubType, Publication, ReferenceEdge,
    Role, Venue, VenueKind,
};

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    pub publications: usize,
    pub persons: usize,
    pub conferences: usize,
    pub journals: usize,
    pub institutions: usize,
    pub reference_edges: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { publications: 220, persons: 60, conferences: 6, journals: 6, institutions: 6, reference_edges: 650 }
    }
}

/// Entities the generator plants deliberately, for tests that need a known
/// author, venue, or year.
#[derive(Debug, Clone)]
pub struct Anchors {
    pub author_key: String,
    pub author_name: String,
    pub conference_key: String,
    pub conference_acronym: String,
    /// Year in which the anchor author has several publications.
    pub year: i64,
    /// The anchor author's publications, most-cited first; citation counts
    /// are strictly decreasing so top-k selections are tie-free.
    pub author_publications: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub dataset: FixtureDataset,
    pub anchors: Anchors,
    /// Row counts per database table, recorded while emitting.
    pub stats: BTreeMap<String, usize>,
}

const FIRST_NAMES: &[&str] = &[
    "Alice", "Benno", "Carla", "Daniel", "Elena", "Farid", "Greta", "Henrik", "Ines", "Jonas", "Katrin", "Lars",
    "Mira", "Nadia", "Oskar", "Priya", "Quentin", "Rosa", "Stefan", "Tomas", "Ulrike", "Viktor", "Wanda", "Yusuf",
];

const LAST_NAMES: &[&str] = &[
    "Achterberg", "Brandt", "Calvino", "Dressler", "Eckhart", "Falkner", "Grimm", "Hoffmann", "Ivanova", "Jacobi",
    "Kessler", "Lindqvist", "Moreau", "Novak", "Ostrowski", "Petrov", "Quandt", "Reinhardt", "Steiner", "Tanaka",
    "Ullmann", "Vogler", "Weidner", "Xylander", "Zimmermann",
];

const ADJECTIVES: &[&str] = &[
    "Scalable", "Robust", "Adaptive", "Efficient", "Declarative", "Incremental", "Distributed", "Probabilistic",
    "Layered", "Hybrid",
];

const NOUNS: &[&str] = &[
    "Framework", "Survey", "Approach", "Index", "Model", "Architecture", "Algorithm", "Benchmark", "Taxonomy",
    "Pipeline",
];

const TOPICS: &[&str] = &[
    "Query Processing", "Citation Analysis", "Metadata Curation", "Entity Resolution", "Digital Collections",
    "Schema Matching", "Data Provenance", "Text Mining", "Graph Exploration", "Relevance Ranking",
];

const KEYWORD_POOL: &[&str] = &[
    "information retrieval", "digital libraries", "databases", "query languages", "machine learning",
    "bibliometrics", "data mining", "semantic web", "knowledge graphs", "citation analysis",
];

const CITIES: &[(&str, &str)] = &[
    ("Trier", "de"), ("Mannheim", "de"), ("Lund", "se"), ("Porto", "pt"), ("Graz", "at"), ("Leiden", "nl"),
    ("Tampere", "fi"), ("Ghent", "be"), ("Brno", "cz"), ("Aarhus", "dk"),
];

const ACRONYM_HEADS: &[&str] = &["CO", "SI", "VE", "TRI", "PAR", "QUE", "MI", "LO", "DA", "NE"];
const ACRONYM_TAILS: &[&str] = &["DAR", "LMA", "LDT", "MB", "RCO", "RN", "RAD", "WAN", "TEX", "BRI"];

/// Number of publications the anchor author gets; their citation counts are
/// `ANCHOR_PUBS + 1` down to 2.
const ANCHOR_PUBS: usize = 8;

struct UniquePool {
    seen: HashSet<String>,
}

impl UniquePool {
    fn new() -> Self {
        UniquePool { seen: HashSet::new() }
    }

    /// Returns `candidate` if it is new (case-insensitively), otherwise the
    /// first numbered variant that is.
    fn claim(&mut self, candidate: String) -> String {
        if self.seen.insert(candidate.to_lowercase()) {
            return candidate;
        }
        for i in 2.. {
            let alt = format!("{candidate} {i}");
            if self.seen.insert(alt.to_lowercase()) {
                return alt;
            }
        }
        unreachable!()
    }

    fn contains(&self, candidate: &str) -> bool {
        self.seen.contains(&candidate.to_lowercase())
    }
}

pub fn generate(cfg: SynthConfig, seed: u64) -> SynthOutput {
    assert!(cfg.publications >= 30, "generator needs at least 30 publications");
    assert!(cfg.persons >= 5 && cfg.conferences >= 1 && cfg.journals >= 1 && cfg.institutions >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = FixtureDataset::default();

    for (i, &(city, country)) in CITIES.iter().cycle().take(cfg.institutions).enumerate() {
        let name = if i % 2 == 0 { format!("University of {city}") } else { format!("{city} Institute of Technology") };
        let name = if i >= CITIES.len() { format!("{name} {}", i / CITIES.len() + 1) } else { name };
        d.institutions.push(Institution { key: format!("inst-{i:02}"), name, city: city.into(), country: country.into() });
    }

    let mut acronyms = UniquePool::new();
    let mut venue_names = UniquePool::new();
    for i in 0..cfg.conferences + cfg.journals {
        let kind = if i < cfg.conferences { VenueKind::Conference } else { VenueKind::Journal };
        let acronym = loop {
            let head = ACRONYM_HEADS.choose(&mut rng).unwrap();
            let tail = ACRONYM_TAILS.choose(&mut rng).unwrap();
            let candidate = format!("{head}{tail}");
            if !acronyms.contains(&candidate) {
                break acronyms.claim(candidate);
            }
        };
        let topic = TOPICS[i % TOPICS.len()];
        let (key, name, dblp) = match kind {
            VenueKind::Conference => (
                format!("conf-{}", acronym.to_lowercase()),
                venue_names.claim(format!("International Conference on {topic}")),
                format!("conf/{}", acronym.to_lowercase()),
            ),
            VenueKind::Journal => (
                format!("journal-{}", acronym.to_lowercase()),
                venue_names.claim(format!("Journal of {topic}")),
                format!("journals/{}", acronym.to_lowercase()),
            ),
        };
        d.venues.push(Venue { key, dblp_key: Some(dblp), kind, name, acronym });
    }

    let mut person_names = UniquePool::new();
    let mut pids = UniquePool::new();
    let mut orcids = UniquePool::new();
    for i in 0..cfg.persons {
        let primary = loop {
            let first = FIRST_NAMES.choose(&mut rng).unwrap();
            let last = LAST_NAMES.choose(&mut rng).unwrap();
            let candidate = format!("{first} {last}");
            if !person_names.contains(&candidate) {
                break person_names.claim(candidate);
            }
        };
        let mut names = BTreeSet::from([primary.clone()]);
        // Some persons get an initialed alias, if no one else claimed it.
        if rng.gen_bool(0.4) {
            let mut parts = primary.split(' ');
            let first = parts.next().unwrap();
            let last = parts.next().unwrap();
            let alias = format!("{}. {last}", &first[..1]);
            if !person_names.contains(&alias) {
                names.insert(person_names.claim(alias));
            }
        }
        let dblp_key = rng.gen_bool(0.85).then(|| {
            let candidate = format!("{:02}/{:04}", rng.gen_range(10..100), rng.gen_range(1000..10000));
            pids.claim(candidate)
        });
        let orcid = rng.gen_bool(0.7).then(|| loop {
            let mut s = String::from("0000-");
            for group in 0..3 {
                for _ in 0..4 {
                    s.push(char::from(b'0' + rng.gen_range(0..10u8)));
                }
                if group < 2 {
                    s.push('-');
                }
            }
            if rng.gen_bool(0.05) {
                s.pop();
                s.push('X');
            }
            if !orcids.contains(&s) {
                break orcids.claim(s);
            }
        });
        d.persons.push(Person { key: format!("person-{i:02}"), dblp_key, primary_name: primary, orcid, names });
    }

    let anchor_year = 2014i64;
    let mut titles = UniquePool::new();
    for i in 0..cfg.publications {
        let title = {
            let adj = ADJECTIVES.choose(&mut rng).unwrap();
            let noun = NOUNS.choose(&mut rng).unwrap();
            let topic = TOPICS.choose(&mut rng).unwrap();
            let candidate = match rng.gen_range(0..4) {
                0 => format!("A {adj} {noun} for {topic}"),
                1 => format!("On the {noun} of {topic}"),
                2 => format!("{topic}: A {adj} {noun}"),
                _ => format!("Towards {adj} {topic}"),
            };
            titles.claim(candidate)
        };
        let is_anchor = i < ANCHOR_PUBS;
        let pub_type = if is_anchor {
            PubType::Article
        } else {
            match rng.gen_range(0..100) {
                0..=59 => PubType::Article,
                60..=74 => PubType::Chapter,
                75..=82 => PubType::Book,
                83..=92 => PubType::Phdthesis,
                _ => PubType::Masterthesis,
            }
        };
        let venue_key = match pub_type {
            PubType::Book | PubType::Masterthesis | PubType::Phdthesis => None,
            _ if is_anchor => Some(d.venues[i % d.venues.len()].key.clone()),
            _ => rng.gen_bool(0.9).then(|| d.venues.choose(&mut rng).unwrap().key.clone()),
        };
        let venue_kind = venue_key.as_ref().map(|k| d.venues.iter().find(|v| &v.key == k).unwrap().kind);
        let volume = (venue_kind == Some(VenueKind::Journal)).then(|| rng.gen_range(1..40).to_string());
        let year = if is_anchor {
            // Half the anchor publications land in the anchor year.
            Some(if i % 2 == 0 { anchor_year } else { anchor_year - 2 + i as i64 % 5 })
        } else {
            rng.gen_bool(0.95).then(|| rng.gen_range(1995..=2020))
        };
        let dblp_key = rng.gen_bool(0.9).then(|| match &venue_key {
            Some(v) => format!("{}/p{i:03}", v.replace('-', "/")),
            None => format!("books/p{i:03}"),
        });
        d.publications.push(Publication { key: format!("pub-{i:03}"), dblp_key, title, year, pub_type, venue_key, volume });
    }

    // Authorship. The anchor author (person 0) authors exactly the anchor
    // publications, so their citation profile stays engineered.
    for i in 0..cfg.publications {
        let is_anchor = i < ANCHOR_PUBS;
        let pub_key = d.publications[i].key.clone();
        if is_anchor {
            d.authorship.push(Authorship { person_key: d.persons[0].key.clone(), publication_key: pub_key.clone(), role: Role::Author });
        }
        let extra = if is_anchor { rng.gen_range(0..=2) } else { rng.gen_range(1..=3) };
        for idx in rand::seq::index::sample(&mut rng, cfg.persons - 1, extra).into_iter() {
            d.authorship.push(Authorship {
                person_key: d.persons[idx + 1].key.clone(),
                publication_key: pub_key.clone(),
                role: Role::Author,
            });
        }
        if rng.gen_bool(0.15) {
            let editor = rng.gen_range(1..cfg.persons);
            d.authorship.push(Authorship { person_key: d.persons[editor].key.clone(), publication_key: pub_key, role: Role::Editor });
        }
    }

    d.affiliations.push(Affiliation { person_key: d.persons[0].key.clone(), institution_key: d.institutions[0].key.clone() });
    for p in &d.persons[1..] {
        let n = match rng.gen_range(0..100) {
            0..=14 => 0,
            15..=84 => 1,
            _ => 2,
        };
        for idx in rand::seq::index::sample(&mut rng, cfg.institutions, n.min(cfg.institutions)).into_iter() {
            d.affiliations.push(Affiliation { person_key: p.key.clone(), institution_key: d.institutions[idx].key.clone() });
        }
    }

    for p in &d.publications {
        if rng.gen_bool(0.8) {
            let n = rng.gen_range(1..=3);
            for idx in rand::seq::index::sample(&mut rng, KEYWORD_POOL.len(), n).into_iter() {
                d.keywords.push(KeywordEntry { entity_key: p.key.clone(), keyword: KEYWORD_POOL[idx].into() });
            }
        }
    }
    for v in &d.venues {
        let n = rng.gen_range(1..=3);
        for idx in rand::seq::index::sample(&mut rng, KEYWORD_POOL.len(), n).into_iter() {
            d.keywords.push(KeywordEntry { entity_key: v.key.clone(), keyword: KEYWORD_POOL[idx].into() });
        }
    }

    // Reference edges, three phases. Phase one pins the anchor publications'
    // citation counts to ANCHOR_PUBS+1 .. 2; later phases never cite an
    // anchor publication, keeping those counts exact.
    let mut edge_set: HashSet<(usize, usize)> = HashSet::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let non_anchor = cfg.publications - ANCHOR_PUBS;
    for i in 0..ANCHOR_PUBS {
        let citations = ANCHOR_PUBS + 1 - i;
        for idx in rand::seq::index::sample(&mut rng, non_anchor, citations).into_iter() {
            let pair = (idx + ANCHOR_PUBS, i);
            if edge_set.insert(pair) {
                edges.push(pair);
            }
        }
    }
    for i in 0..ANCHOR_PUBS {
        let refs = rng.gen_range(3..=6);
        for idx in rand::seq::index::sample(&mut rng, non_anchor, refs).into_iter() {
            let pair = (i, idx + ANCHOR_PUBS);
            if edge_set.insert(pair) {
                edges.push(pair);
            }
        }
    }
    while edges.len() < cfg.reference_edges {
        let citing = rng.gen_range(ANCHOR_PUBS..cfg.publications);
        let cited = rng.gen_range(ANCHOR_PUBS..cfg.publications);
        if citing != cited && edge_set.insert((citing, cited)) {
            edges.push((citing, cited));
        }
    }
    for (citing, cited) in edges {
        d.reference_edges.push(ReferenceEdge {
            citing_key: d.publications[citing].key.clone(),
            cited_key: d.publications[cited].key.clone(),
        });
    }

    let stats = table_stats(&d);
    let anchors = Anchors {
        author_key: d.persons[0].key.clone(),
        author_name: d.persons[0].primary_name.clone(),
        conference_key: d.venues[0].key.clone(),
        conference_acronym: d.venues[0].acronym.clone(),
        year: anchor_year,
        author_publications: d.publications[..ANCHOR_PUBS].iter().map(|p| p.key.clone()).collect(),
    };
    SynthOutput { dataset: d, anchors, stats }
}

/// Row counts per database table for a dataset.
pub fn table_stats(d: &FixtureDataset) -> BTreeMap<String, usize> {
    let mut stats = BTreeMap::new();
    stats.insert("publication".into(), d.publications.len());
    stats.insert("person".into(), d.persons.len());
    stats.insert("person_names".into(), d.persons.iter().map(|p| p.names.len()).sum());
    stats.insert("conference".into(), d.venues.iter().filter(|v| v.kind == VenueKind::Conference).count());
    stats.insert("journal".into(), d.venues.iter().filter(|v| v.kind == VenueKind::Journal).count());
    stats.insert("institution".into(), d.institutions.len());
    stats.insert(
        "person_authored_publication".into(),
        d.authorship.iter().filter(|a| a.role == Role::Author).count(),
    );
    stats.insert(
        "person_edited_publication".into(),
        d.authorship.iter().filter(|a| a.role == Role::Editor).count(),
    );
    stats.insert("publication_references".into(), d.reference_edges.len());
    stats.insert("person_works_for_institution".into(), d.affiliations.len());
    stats.insert("entity_keywords".into(), d.keywords.len());
    stats
}

/// The five-publication citation demo: P cites R1 and R2, while C1 and C2
/// cite P. Citation counts: P has 2, R1 and R2 have 1, C1 and C2 have 0.
pub fn citation_demo() -> FixtureDataset {
    let mut d = FixtureDataset::default();
    for (key, title) in [("p", "P"), ("r1", "R1"), ("r2", "R2"), ("c1", "C1"), ("c2", "C2")] {
        d.publications.push(Publication {
            key: key.into(),
            dblp_key: None,
            title: title.into(),
            year: Some(2000),
            pub_type: PubType::Article,
            venue_key: None,
            volume: None,
        });
    }
    for (citing, cited) in [("p", "r1"), ("p", "r2"), ("c1", "p"), ("c2", "p")] {
        d.reference_edges.push(ReferenceEdge { citing_key: citing.into(), cited_key: cited.into() });
    }
    d
}
