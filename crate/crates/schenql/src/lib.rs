//! SchenQL: a domain-specific query language for bibliographic metadata.
//!
//! Queries are written against five base concepts (publications, persons,
//! conferences, journals, institutions), filtered with keyword clauses,
//! composed through parenthesized subqueries, and compiled to SQL over an
//! embedded relational store:
//!
//! ```text
//! PUBLICATIONS WRITTEN BY "Alice Marsh" IN YEAR 2014;
//! MOST CITED (ARTICLES APPEARED IN "CODAR") LIMIT 10;
//! KEYWORDS OF (JOURNAL OF (PUBLICATIONS TITLED "On Query Languages"));
//! ```
//!
//! The pipeline is lexer → parser → semantic analyzer → SQL generator →
//! embedded database. An independent in-memory evaluator re-implements the
//! whole semantics by brute force and backs the differential test suite.

pub mod analyze;
pub mod ast;
pub mod catalog;
pub mod codegen;
pub mod corpus;
pub mod db;
pub mod error;
pub mod fixtures;
pub mod lexer;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod repl;
pub mod schema;
pub mod synth;
pub mod table;
pub mod token;

pub use error::{Error, Result};

/// Lexes and parses one query.
pub fn parse_text(query: &str) -> Result<ast::Expr> {
    let tokens = lexer::tokenize(query)?;
    Ok(parser::parse(&tokens)?)
}

/// Runs the whole front end on one query: lex, parse, type-check.
pub fn analyze_text(query: &str) -> Result<analyze::TypedExpr> {
    let expr = parse_text(query)?;
    Ok(analyze::analyze(&expr)?)
}
