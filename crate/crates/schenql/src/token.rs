//! Tokens and spans. The keyword tables here are shared by the lexer (to
//! classify words) and the parser (for expected-token messages).

use std::fmt;

use crate::ast::{Concept, FunctionName};
use crate::catalog::FilterKeyword;

/// Half-open byte range into the query text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    /// Smallest span covering both.
    pub fn merge(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// A reserved word (or word pair) of the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    /// Concept name; the flag records whether the plural spelling was used.
    Concept(Concept, bool),
    Filter(FilterKeyword),
    Function(FunctionName),
    Of,
    Limit,
}

impl Keyword {
    /// Canonical uppercase spelling.
    pub fn canonical(&self) -> &'static str {
        match self {
            Keyword::Concept(c, plural) => c.spelling(*plural),
            Keyword::Filter(f) => f.text(),
            Keyword::Function(f) => f.text(),
            Keyword::Of => "OF",
            Keyword::Limit => "LIMIT",
        }
    }
}

/// Resolves a single uppercase word to a keyword.
pub fn single_word_keyword(word: &str) -> Option<Keyword> {
    if let Some((concept, plural)) = Concept::from_spelling(word) {
        return Some(Keyword::Concept(concept, plural));
    }
    let kw = match word {
        "COUNT" => Keyword::Function(FunctionName::Count),
        "ABOUT" => Keyword::Filter(FilterKeyword::About),
        "BEFORE" => Keyword::Filter(FilterKeyword::Before),
        "AFTER" => Keyword::Filter(FilterKeyword::After),
        "TITLED" => Keyword::Filter(FilterKeyword::Titled),
        "REFERENCES" => Keyword::Filter(FilterKeyword::References),
        "NAMED" => Keyword::Filter(FilterKeyword::Named),
        "ORCID" => Keyword::Filter(FilterKeyword::Orcid),
        "AUTHORED" => Keyword::Filter(FilterKeyword::Authored),
        "ACRONYM" => Keyword::Filter(FilterKeyword::Acronym),
        "VOLUME" => Keyword::Filter(FilterKeyword::Volume),
        "CITY" => Keyword::Filter(FilterKeyword::City),
        "COUNTRY" => Keyword::Filter(FilterKeyword::Country),
        "MEMBERS" => Keyword::Filter(FilterKeyword::Members),
        "OF" => Keyword::Of,
        "LIMIT" => Keyword::Limit,
        _ => return None,
    };
    Some(kw)
}

/// Resolves an uppercase word pair to a multi-word keyword.
pub fn two_word_keyword(first: &str, second: &str) -> Option<Keyword> {
    let kw = match (first, second) {
        ("WRITTEN", "BY") => Keyword::Filter(FilterKeyword::WrittenBy),
        ("EDITED", "BY") => Keyword::Filter(FilterKeyword::EditedBy),
        ("CITED", "BY") => Keyword::Filter(FilterKeyword::CitedBy),
        ("PUBLISHED", "BY") => Keyword::Filter(FilterKeyword::PublishedBy),
        ("PUBLISHED", "IN") => Keyword::Filter(FilterKeyword::PublishedIn),
        ("PUBLISHED", "WITH") => Keyword::Filter(FilterKeyword::PublishedWith),
        ("APPEARED", "IN") => Keyword::Filter(FilterKeyword::AppearedIn),
        ("WORKS", "FOR") => Keyword::Filter(FilterKeyword::WorksFor),
        ("IN", "YEAR") => Keyword::Filter(FilterKeyword::InYear),
        ("MOST", "CITED") => Keyword::Function(FunctionName::MostCited),
        ("KEYWORDS", "OF") => Keyword::Function(FunctionName::KeywordsOf),
        _ => return None,
    };
    Some(kw)
}

/// True if `word` can start a two-word keyword, so the lexer knows to peek.
pub fn starts_two_word_keyword(word: &str) -> bool {
    matches!(
        word,
        "WRITTEN" | "EDITED" | "CITED" | "PUBLISHED" | "APPEARED" | "WORKS" | "IN" | "MOST" | "KEYWORDS"
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    /// A bare word that is not a keyword.
    Word,
    /// String literal; the value is the unescaped content.
    Str(String),
    Number(u64),
    LParen,
    RParen,
    Semicolon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text as written (for strings this includes the quotes).
    pub text: String,
    pub span: Span,
}

impl Token {
    /// Short description for error messages.
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Keyword(k) => k.canonical().to_string(),
            TokenKind::Word => format!("'{}'", self.text),
            TokenKind::Str(_) => format!("string {}", self.text),
            TokenKind::Number(n) => format!("number {n}"),
            TokenKind::LParen => "'('".to_string(),
            TokenKind::RParen => "')'".to_string(),
            TokenKind::Semicolon => "';'".to_string(),
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
