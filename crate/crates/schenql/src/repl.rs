//! The interactive session: accumulates input until a semicolon completes a
//! query, runs it, renders the result with a row-count footer, and keeps the
//! loop alive through query errors.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::db::{Db, LoadStats};
use crate::error::{highlight_span, Error, Result};
use crate::fixtures;
use crate::model::FixtureDataset;
use crate::oracle;
use crate::table::{render, OutputFormat, ResultTable};

/// Session settings, fixed at startup except where an escape command
/// overrides them.
#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub database_location: String,
    pub fixture_directory: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub display_limit: usize,
    /// Route queries through the reference evaluator instead of SQL; a
    /// debugging aid for comparing the two.
    pub use_oracle: bool,
}

impl Default for SessionConfig {
    fn default() -> SessionConfig {
        SessionConfig {
            database_location: ":memory:".into(),
            fixture_directory: None,
            output_format: OutputFormat::Table,
            display_limit: 50,
            use_oracle: false,
        }
    }
}

/// One session over an open database, interactive or one-shot.
pub struct Session {
    db: Db,
    /// Dataset mirror for the reference evaluator, kept only in oracle mode.
    dataset: Option<FixtureDataset>,
    pub format: OutputFormat,
    pub display_limit: usize,
}

impl Session {
    /// Opens the database and performs the initial fixture load, if any.
    /// Everything that can fail here is a startup error (exit code 2).
    pub fn start(config: &SessionConfig) -> Result<Session> {
        let mut db = Db::open(&config.database_location)?;
        let mut dataset = None;
        if let Some(dir) = &config.fixture_directory {
            let d = fixtures::read_dir(dir)?;
            db.load_dataset(&d)?;
            if config.use_oracle {
                dataset = Some(d);
            }
        } else if config.use_oracle {
            dataset = Some(db.read_dataset()?);
        }
        Ok(Session { db, dataset, format: config.output_format, display_limit: config.display_limit })
    }

    /// Runs one query through the configured route.
    pub fn run(&self, src: &str) -> Result<ResultTable> {
        match &self.dataset {
            Some(d) => oracle::eval_reference(src, d),
            None => self.db.run_query(src),
        }
    }

    /// Replaces the database contents (and the oracle mirror, when one is
    /// kept) with the fixtures in `dir`.
    pub fn load(&mut self, dir: &Path) -> Result<LoadStats> {
        let d = fixtures::read_dir(dir)?;
        let stats = self.db.load_dataset(&d)?;
        if self.dataset.is_some() {
            self.dataset = Some(d);
        }
        Ok(stats)
    }

    /// Drives the read-eval-print loop until `\q` or end of input. Query
    /// errors print and the loop continues; only a broken input or output
    /// stream ends it early.
    pub fn serve(&mut self, input: &mut dyn BufRead, output: &mut dyn Write) -> std::io::Result<()> {
        writeln!(output, "schenql {} (\\help for commands)", env!("CARGO_PKG_VERSION"))?;
        let mut pending = String::new();
        loop {
            write!(output, "{}", if pending.is_empty() { "schenql> " } else { "     ... " })?;
            output.flush()?;
            let mut line = String::new();
            if input.read_line(&mut line)? == 0 {
                writeln!(output)?;
                return Ok(());
            }
            let trimmed = line.trim();
            if pending.is_empty() {
                if trimmed.is_empty() {
                    continue;
                }
                if let Some(cmd) = trimmed.strip_prefix('\\') {
                    if self.command(cmd, output)? {
                        return Ok(());
                    }
                    continue;
                }
            }
            pending.push_str(&line);
            if !trimmed.ends_with(';') {
                continue;
            }
            let src = std::mem::take(&mut pending);
            let src = src.trim();
            let started = Instant::now();
            match self.run(src) {
                Ok(table) => {
                    write!(output, "{}", render(&table, self.format, self.display_limit))?;
                    writeln!(
                        output,
                        "{} rows total ({:.3}s)",
                        table.total_row_count,
                        started.elapsed().as_secs_f64()
                    )?;
                }
                Err(e) => report_error(output, src, &e)?,
            }
        }
    }

    /// Handles one backslash command; returns true when the session should
    /// end.
    fn command(&mut self, cmd: &str, output: &mut dyn Write) -> std::io::Result<bool> {
        let (name, arg) = match cmd.split_once(char::is_whitespace) {
            Some((n, a)) => (n, a.trim()),
            None => (cmd, ""),
        };
        match name {
            "q" | "quit" => return Ok(true),
            "help" => {
                writeln!(output, "\\q             quit")?;
                writeln!(output, "\\help          show this message")?;
                writeln!(output, "\\load <dir>    replace the database contents with a fixture directory")?;
                writeln!(output, "\\format <fmt>  switch output format: table or json-lines")?;
                writeln!(output, "Queries end with ';' and may span lines:")?;
                writeln!(output, "  PUBLICATIONS WRITTEN BY \"Jane Roe\" AFTER 2010;")?;
            }
            "load" if arg.is_empty() => writeln!(output, "usage: \\load <fixtureDir>")?,
            "load" => match self.load(Path::new(arg)) {
                Ok(stats) => {
                    let detail: Vec<String> = stats
                        .per_table
                        .iter()
                        .filter(|(_, n)| *n > 0)
                        .map(|(t, n)| format!("{t} {n}"))
                        .collect();
                    writeln!(output, "loaded {} rows ({})", stats.total(), detail.join(", "))?;
                }
                Err(e) => writeln!(output, "error: {e}")?,
            },
            "format" => match OutputFormat::parse(arg) {
                Some(f) => {
                    self.format = f;
                    writeln!(output, "output format: {}", f.name())?;
                }
                None => writeln!(output, "usage: \\format table|json-lines")?,
            },
            other => writeln!(output, "unknown command \\{other}; \\help lists commands")?,
        }
        Ok(false)
    }
}

/// Prints a query failure, pointing at the offending span when there is one.
fn report_error(output: &mut dyn Write, src: &str, e: &Error) -> std::io::Result<()> {
    writeln!(output, "error: {e}")?;
    if let Some(span) = e.query_span() {
        writeln!(output, "{}", highlight_span(src, span))?;
    }
    Ok(())
}

/// Runs one query and prints the rows without the interactive footer; used
/// by `-e`. Output stream failures are ignored so a closed pipe does not
/// turn a successful query into an error.
pub fn one_shot(session: &Session, query: &str, output: &mut dyn Write) -> Result<()> {
    let table = session.run(query)?;
    let _ = write!(output, "{}", render(&table, session.format, session.display_limit));
    Ok(())
}

/// Full interactive session on stdin and stdout; the returned value is the
/// process exit status.
pub fn repl(config: &SessionConfig) -> i32 {
    let mut session = match Session::start(config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    match session.serve(&mut stdin.lock(), &mut stdout.lock()) {
        Ok(()) => 0,
        // The terminal went away; there is no one left to report to.
        Err(_) => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use std::io::Cursor;

    /// Session preloaded with the five-publication citation demo.
    fn demo_session() -> Session {
        let dir = tempfile::tempdir().unwrap();
        fixtures::write_dir(dir.path(), &synth::citation_demo()).unwrap();
        let config = SessionConfig { fixture_directory: Some(dir.path().to_path_buf()), ..SessionConfig::default() };
        Session::start(&config).unwrap()
    }

    fn drive(session: &mut Session, script: &str) -> String {
        let mut input = Cursor::new(script.as_bytes().to_vec());
        let mut output = Vec::new();
        session.serve(&mut input, &mut output).unwrap();
        String::from_utf8(output).unwrap()
    }

    #[test]
    fn runs_a_query_and_quits() {
        let mut session = demo_session();
        let out = drive(&mut session, "COUNT (PUBLICATIONS);\n\\q\n");
        assert!(out.contains("schenql> "), "{out}");
        assert!(out.contains("count"), "{out}");
        assert!(out.contains("1 rows total"), "{out}");
    }

    #[test]
    fn survives_query_errors() {
        let mut session = demo_session();
        let out = drive(&mut session, "PUBLICATIONS NAMED \"x\";\nCOUNT (PUBLICATIONS);\n\\q\n");
        assert!(out.contains("error: filter NAMED cannot be applied to PUBLICATIONS"), "{out}");
        assert!(out.contains('^'), "span marker missing: {out}");
        assert!(out.contains("1 rows total"), "the loop should keep serving: {out}");
    }

    #[test]
    fn accumulates_lines_until_semicolon() {
        let mut session = demo_session();
        let out = drive(&mut session, "PUBLICATIONS\nTITLED \"P\";\n\\q\n");
        assert!(out.contains("     ... "), "continuation prompt missing: {out}");
        assert!(out.contains("1 rows total"), "{out}");
    }

    #[test]
    fn format_command_switches_output() {
        let mut session = demo_session();
        let out = drive(&mut session, "\\format json-lines\nCOUNT (PUBLICATIONS);\n\\q\n");
        assert!(out.contains("output format: json-lines"), "{out}");
        assert!(out.contains("{\"count\":5}"), "{out}");
    }

    #[test]
    fn load_command_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        fixtures::write_dir(dir.path(), &synth::citation_demo()).unwrap();
        let mut session = Session::start(&SessionConfig::default()).unwrap();
        let before = drive(&mut session, "COUNT (PUBLICATIONS);\n\\q\n");
        assert!(before.contains('0'), "{before}");
        let script = format!("\\load {}\nCOUNT (PUBLICATIONS);\n\\q\n", dir.path().display());
        let out = drive(&mut session, &script);
        assert!(out.contains("loaded "), "{out}");
        assert!(out.contains('5'), "{out}");
    }

    #[test]
    fn end_of_input_exits_cleanly() {
        let mut session = demo_session();
        let out = drive(&mut session, "COUNT (PERSONS);\n");
        assert!(out.ends_with('\n'), "{out}");
    }

    #[test]
    fn unknown_command_is_reported() {
        let mut session = demo_session();
        let out = drive(&mut session, "\\nope\n\\q\n");
        assert!(out.contains("unknown command \\nope"), "{out}");
    }

    #[test]
    fn one_shot_prints_rows_without_footer() {
        let session = demo_session();
        let mut output = Vec::new();
        one_shot(&session, "COUNT (PUBLICATIONS);", &mut output).unwrap();
        let out = String::from_utf8(output).unwrap();
        assert!(out.contains('5'), "{out}");
        assert!(!out.contains("rows total"), "{out}");
        let err = one_shot(&session, "PUBLICATIONS!;", &mut Vec::new()).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn oracle_mode_reads_the_store_back() {
        let dir = tempfile::tempdir().unwrap();
        fixtures::write_dir(dir.path(), &synth::citation_demo()).unwrap();
        let config = SessionConfig {
            fixture_directory: Some(dir.path().to_path_buf()),
            use_oracle: true,
            ..SessionConfig::default()
        };
        let session = Session::start(&config).unwrap();
        let via_oracle = session.run("MOST CITED (PUBLICATIONS);").unwrap();
        assert_eq!(via_oracle.rows[0][0].to_string(), "P");

        // Without --load, the oracle mirror comes from the database itself.
        let db_path = dir.path().join("demo.db");
        let seed = SessionConfig {
            database_location: db_path.display().to_string(),
            fixture_directory: Some(dir.path().to_path_buf()),
            ..SessionConfig::default()
        };
        drop(Session::start(&seed).unwrap());
        let reopen = SessionConfig {
            database_location: db_path.display().to_string(),
            use_oracle: true,
            ..SessionConfig::default()
        };
        let session = Session::start(&reopen).unwrap();
        let t = session.run("COUNT (PUBLICATIONS);").unwrap();
        assert_eq!(t.rows[0][0].to_string(), "5");
    }

    #[test]
    fn display_limit_truncates_but_reports_total() {
        let dir = tempfile::tempdir().unwrap();
        fixtures::write_dir(dir.path(), &synth::citation_demo()).unwrap();
        let config = SessionConfig {
            fixture_directory: Some(dir.path().to_path_buf()),
            display_limit: 2,
            ..SessionConfig::default()
        };
        let mut session = Session::start(&config).unwrap();
        let out = drive(&mut session, "PUBLICATIONS;\n\\q\n");
        assert!(out.contains("(showing first 2 of 5 rows)"), "{out}");
        assert!(out.contains("5 rows total"), "{out}");
    }
}
