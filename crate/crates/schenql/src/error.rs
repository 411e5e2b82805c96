//! Error types for every pipeline stage, plus span highlighting for the REPL.

use std::path::PathBuf;

use crate::catalog::{EntityType, FilterKeyword};
use crate::model::ValidationReport;
use crate::token::Span;

/// Lexing failures. Each carries the byte span of the offending input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexError {
    #[error("unterminated string literal")]
    UnterminatedString { span: Span },
    #[error("illegal character '{ch}'")]
    IllegalCharacter { ch: char, span: Span },
    #[error("number literal is too large")]
    NumberTooLarge { span: Span },
}

impl LexError {
    pub fn span(&self) -> Span {
        match self {
            LexError::UnterminatedString { span }
            | LexError::IllegalCharacter { span, .. }
            | LexError::NumberTooLarge { span } => *span,
        }
    }
}

/// Parsing failures against the query grammar.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("missing ';' at the end of the query")]
    MissingSemicolon { span: Span },
    #[error("unbalanced parentheses: {detail}")]
    UnbalancedParentheses { detail: String, span: Span },
    #[error("expected {expected}, found {found}")]
    UnexpectedToken { expected: String, found: String, span: Span },
    #[error("filter {keyword} has no concept to apply to")]
    DanglingFilter { keyword: FilterKeyword, span: Span },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::MissingSemicolon { span }
            | ParseError::UnbalancedParentheses { span, .. }
            | ParseError::UnexpectedToken { span, .. }
            | ParseError::DanglingFilter { span, .. } => *span,
        }
    }
}

/// Type-checking failures over a parsed query.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyzeError {
    #[error("filter {filter} cannot be applied to {}", concept.keyword_plural())]
    UnknownFilterForConcept { filter: FilterKeyword, concept: EntityType, span: Span },
    #[error("{function} expects {expected}, found {found}")]
    FunctionArgTypeMismatch { function: String, expected: String, found: String, span: Span },
    #[error("unknown attribute \"{attribute}\" for {}; valid attributes: {valid}", concept.keyword_plural())]
    UnknownAttribute { attribute: String, concept: EntityType, valid: String, span: Span },
    #[error("{}s have no identifying literal; {filter} needs a parenthesized subquery", concept.noun())]
    LiteralNotSupported { filter: FilterKeyword, concept: EntityType, span: Span },
    #[error("filter {filter} expects {expected}, found {found}")]
    FilterArgMismatch { filter: FilterKeyword, expected: String, found: String, span: Span },
}

impl AnalyzeError {
    pub fn span(&self) -> Span {
        match self {
            AnalyzeError::UnknownFilterForConcept { span, .. }
            | AnalyzeError::FunctionArgTypeMismatch { span, .. }
            | AnalyzeError::UnknownAttribute { span, .. }
            | AnalyzeError::LiteralNotSupported { span, .. }
            | AnalyzeError::FilterArgMismatch { span, .. } => *span,
        }
    }
}

/// SQL execution failure, with the offending statement attached.
#[derive(Debug, thiserror::Error)]
#[error("engine error: {source}\n  while executing: {sql}")]
pub struct EngineError {
    pub sql: String,
    #[source]
    pub source: rusqlite::Error,
}

/// Fixture ingestion failures. A failed load leaves the database untouched.
#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    MalformedRecord { path: PathBuf, line: usize, message: String },
    #[error("fixture validation failed: {report}")]
    ValidationFailed { report: ValidationReport },
}

/// Umbrella error for the whole pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Lex(#[from] LexError),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Analyze(#[from] AnalyzeError),
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Fixture(#[from] FixtureError),
    #[error("{0}")]
    Startup(String),
}

impl Error {
    /// Span into the query text, for errors that point at one.
    pub fn query_span(&self) -> Option<Span> {
        match self {
            Error::Lex(e) => Some(e.span()),
            Error::Parse(e) => Some(e.span()),
            Error::Analyze(e) => Some(e.span()),
            Error::Engine(_) | Error::Fixture(_) | Error::Startup(_) => None,
        }
    }

    /// Process exit code: 1 for query errors, 2 for startup and load errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Lex(_) | Error::Parse(_) | Error::Analyze(_) | Error::Engine(_) => 1,
            Error::Fixture(_) | Error::Startup(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Renders the source line containing `span` with a caret marker underneath:
///
/// ```text
/// PUBLICATIONS WRITEN BY "A";
///              ^^^^^^
/// ```
pub fn highlight_span(source: &str, span: Span) -> String {
    let start = span.start.min(source.len());
    let end = span.end.clamp(start, source.len());
    let line_start = source[..start].rfind('\n').map_or(0, |i| i + 1);
    let line_end = source[start..].find('\n').map_or(source.len(), |i| start + i);
    let line = &source[line_start..line_end];

    let mut marker = String::new();
    for ch in source[line_start..start].chars() {
        marker.push(if ch == '\t' { '\t' } else { ' ' });
    }
    let width = source[start..end.min(line_end)].chars().count().max(1);
    for _ in 0..width {
        marker.push('^');
    }
    format!("{line}\n{marker}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn highlight_points_at_span() {
        let src = r#"PUBLICATIONS WRITEN BY "A";"#;
        let out = highlight_span(src, Span::new(13, 19));
        assert_eq!(out, format!("{src}\n             ^^^^^^"));
    }

    #[test]
    fn highlight_at_end_of_input() {
        let src = "PUBLICATIONS";
        let out = highlight_span(src, Span::new(12, 12));
        assert_eq!(out, "PUBLICATIONS\n            ^");
    }

    #[test]
    fn highlight_second_line() {
        let src = "PUBLICATIONS\nWRITEN BY \"A\";";
        let out = highlight_span(src, Span::new(13, 19));
        assert_eq!(out, "WRITEN BY \"A\";\n^^^^^^");
    }

    #[test]
    fn exit_codes_split_query_from_startup() {
        let q = Error::Lex(LexError::IllegalCharacter { ch: '%', span: Span::new(0, 1) });
        assert_eq!(q.exit_code(), 1);
        let s = Error::Startup("no database".into());
        assert_eq!(s.exit_code(), 2);
    }
}
