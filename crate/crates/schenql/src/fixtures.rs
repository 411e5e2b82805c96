//! Fixture directories: a dataset serialized as one JSON-lines file per
//! record kind. A missing file means an empty section, blank lines are
//! skipped, and unknown fields are ignored, so fixtures stay hand-editable.

use crate::error::FixtureError;
use crate::model::FixtureDataset;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub const PUBLICATIONS_FILE: &str = "publications.jsonl";
pub const PERSONS_FILE: &str = "persons.jsonl";
pub const VENUES_FILE: &str = "venues.jsonl";
pub const INSTITUTIONS_FILE: &str = "institutions.jsonl";
pub const AUTHORSHIP_FILE: &str = "authorship.jsonl";
pub const REFERENCES_FILE: &str = "references.jsonl";
pub const AFFILIATIONS_FILE: &str = "affiliations.jsonl";
pub const KEYWORDS_FILE: &str = "keywords.jsonl";

/// All fixture file names, in load order.
pub const FILES: &[&str] = &[
    PUBLICATIONS_FILE,
    PERSONS_FILE,
    VENUES_FILE,
    INSTITUTIONS_FILE,
    AUTHORSHIP_FILE,
    REFERENCES_FILE,
    AFFILIATIONS_FILE,
    KEYWORDS_FILE,
];

/// Reads a fixture directory into a dataset. The result is not yet
/// validated; loading it into a database runs the full validation pass.
/// A missing file is an empty section, but a missing directory is an
/// error: silently loading nothing would mask a mistyped path.
pub fn read_dir(dir: &Path) -> Result<FixtureDataset, FixtureError> {
    if !dir.is_dir() {
        let source = std::io::Error::new(std::io::ErrorKind::NotFound, "no such directory");
        return Err(FixtureError::Io { path: dir.to_path_buf(), source });
    }
    let mut data = FixtureDataset {
        publications: read_file(dir, PUBLICATIONS_FILE)?,
        persons: read_file(dir, PERSONS_FILE)?,
        venues: read_file(dir, VENUES_FILE)?,
        institutions: read_file(dir, INSTITUTIONS_FILE)?,
        authorship: read_file(dir, AUTHORSHIP_FILE)?,
        reference_edges: read_file(dir, REFERENCES_FILE)?,
        affiliations: read_file(dir, AFFILIATIONS_FILE)?,
        keywords: read_file(dir, KEYWORDS_FILE)?,
    };
    // A record may list aliases without repeating the primary name.
    data.persons = data.persons.into_iter().map(|p| p.normalize()).collect();
    Ok(data)
}

/// Writes a dataset as a fixture directory, creating it if needed. All
/// eight files are written, empty sections included.
pub fn write_dir(dir: &Path, data: &FixtureDataset) -> Result<(), FixtureError> {
    fs::create_dir_all(dir).map_err(|source| FixtureError::Io { path: dir.to_path_buf(), source })?;
    write_file(dir, PUBLICATIONS_FILE, &data.publications)?;
    write_file(dir, PERSONS_FILE, &data.persons)?;
    write_file(dir, VENUES_FILE, &data.venues)?;
    write_file(dir, INSTITUTIONS_FILE, &data.institutions)?;
    write_file(dir, AUTHORSHIP_FILE, &data.authorship)?;
    write_file(dir, REFERENCES_FILE, &data.reference_edges)?;
    write_file(dir, AFFILIATIONS_FILE, &data.affiliations)?;
    write_file(dir, KEYWORDS_FILE, &data.keywords)?;
    Ok(())
}

fn read_file<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<Vec<T>, FixtureError> {
    let path = dir.join(name);
    if !path.exists() {
        return Ok(Vec::new());
    }
    let file = fs::File::open(&path).map_err(|source| FixtureError::Io { path: path.clone(), source })?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| FixtureError::Io { path: path.clone(), source })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let record = serde_json::from_str(trimmed).map_err(|e| FixtureError::MalformedRecord {
            path: path.clone(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

fn write_file<T: Serialize>(dir: &Path, name: &str, records: &[T]) -> Result<(), FixtureError> {
    let path = dir.join(name);
    let io = |source: std::io::Error| FixtureError::Io { path: path.clone(), source };
    let file = fs::File::create(&path).map_err(io)?;
    let mut w = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).expect("fixture records serialize infallibly");
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use std::fs;

    #[test]
    fn dataset_round_trips_through_directory() {
        let dir = tempfile::tempdir().unwrap();
        let out = synth::generate(synth::SynthConfig::default(), 7);
        write_dir(dir.path(), &out.dataset).unwrap();
        for name in FILES {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }
        let back = read_dir(dir.path()).unwrap();
        assert_eq!(back.canonicalized(), out.dataset.canonicalized());
    }

    #[test]
    fn missing_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = read_dir(&dir.path().join("nope")).unwrap_err();
        assert!(matches!(err, FixtureError::Io { .. }), "{err}");
        assert_eq!(crate::Error::from(err).exit_code(), 2);
    }

    #[test]
    fn missing_files_mean_empty_sections() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join(PERSONS_FILE),
            r#"{"key":"pe-1","primaryName":"Jo Doe"}"#,
        )
        .unwrap();
        let data = read_dir(dir.path()).unwrap();
        assert!(data.publications.is_empty());
        assert_eq!(data.persons.len(), 1);
        // normalize() folded the primary name into the alias set.
        assert!(data.persons[0].names.contains("Jo Doe"));
    }

    #[test]
    fn malformed_record_reports_file_and_line() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join(VENUES_FILE),
            "{\"key\":\"v1\",\"kind\":\"journal\",\"name\":\"J\",\"acronym\":\"J1\"}\n\nnot json\n",
        )
        .unwrap();
        let err = read_dir(dir.path()).unwrap_err();
        match err {
            FixtureError::MalformedRecord { path, line, .. } => {
                assert!(path.ends_with(VENUES_FILE));
                assert_eq!(line, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join(INSTITUTIONS_FILE),
            r#"{"key":"i1","name":"X","city":"Berlin","country":"de","note":"extra"}"#,
        )
        .unwrap();
        let data = read_dir(dir.path()).unwrap();
        assert_eq!(data.institutions.len(), 1);
    }

    #[test]
    fn blank_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join(KEYWORDS_FILE),
            "\n{\"entityKey\":\"p1\",\"keyword\":\"ir\"}\n   \n{\"entityKey\":\"p2\",\"keyword\":\"db\"}\n",
        )
        .unwrap();
        let data = read_dir(dir.path()).unwrap();
        assert_eq!(data.keywords.len(), 2);
    }
}
