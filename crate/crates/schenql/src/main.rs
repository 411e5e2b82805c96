//! Command-line entry point for the SchenQL shell.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use schenql::error::highlight_span;
use schenql::repl::{one_shot, repl, Session, SessionConfig};
use schenql::table::OutputFormat;

/// A query shell for bibliographic metadata.
#[derive(Parser)]
#[command(name = "schenql", version, about)]
struct Cli {
    /// Database location: a file path or ":memory:". The SCHENQL_DB
    /// environment variable takes precedence when set.
    #[arg(long, value_name = "location", default_value = ":memory:")]
    db: String,

    /// Fixture directory whose contents replace the database at startup.
    #[arg(long, value_name = "fixtureDir")]
    load: Option<PathBuf>,

    /// Output format: table or json-lines.
    #[arg(long, value_name = "format", value_parser = parse_format, default_value = "table")]
    format: OutputFormat,

    /// Rows shown per result; the footer still reports the full count.
    #[arg(long, value_name = "N", default_value_t = 50,
          value_parser = clap::value_parser!(u32).range(1..))]
    display_limit: u32,

    /// Run one query, print its rows, and exit instead of serving a shell.
    #[arg(short = 'e', value_name = "query")]
    execute: Option<String>,

    /// Evaluate queries with the brute-force reference evaluator instead of
    /// compiled SQL; a debugging aid for comparing the two routes.
    #[arg(long)]
    oracle: bool,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    OutputFormat::parse(s).ok_or_else(|| format!("expected 'table' or 'json-lines', got '{s}'"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let database_location = std::env::var("SCHENQL_DB")
        .ok()
        .filter(|v| !v.is_empty())
        .unwrap_or(cli.db);
    let config = SessionConfig {
        database_location,
        fixture_directory: cli.load,
        output_format: cli.format,
        display_limit: cli.display_limit as usize,
        use_oracle: cli.oracle,
    };
    match cli.execute {
        Some(query) => one_shot_main(&config, &query),
        None => code(repl(&config)),
    }
}

fn one_shot_main(config: &SessionConfig, query: &str) -> ExitCode {
    let session = match Session::start(config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return code(e.exit_code());
        }
    };
    match one_shot(&session, query, &mut std::io::stdout()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(span) = e.query_span() {
                eprintln!("{}", highlight_span(query, span));
            }
            code(e.exit_code())
        }
    }
}

fn code(n: i32) -> ExitCode {
    ExitCode::from(n.clamp(0, 255) as u8)
}
