//! Abstract syntax of a query. `Display` renders canonical text (uppercase
//! keywords, normalized spacing) that re-parses to the same tree, which the
//! round-trip tests rely on.

use std::fmt;

use crate::catalog::FilterKeyword;
use crate::model::VenueKind;
use crate::token::Span;

/// Concept name as written, specializations included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Concept {
    Publication,
    Article,
    Book,
    Chapter,
    Masterthesis,
    Phdthesis,
    Person,
    Author,
    Editor,
    Conference,
    Journal,
    Institution,
}

impl Concept {
    pub const ALL: [Concept; 12] = [
        Concept::Publication,
        Concept::Article,
        Concept::Book,
        Concept::Chapter,
        Concept::Masterthesis,
        Concept::Phdthesis,
        Concept::Person,
        Concept::Author,
        Concept::Editor,
        Concept::Conference,
        Concept::Journal,
        Concept::Institution,
    ];

    pub fn spelling(self, plural: bool) -> &'static str {
        match (self, plural) {
            (Concept::Publication, false) => "PUBLICATION",
            (Concept::Publication, true) => "PUBLICATIONS",
            (Concept::Article, false) => "ARTICLE",
            (Concept::Article, true) => "ARTICLES",
            (Concept::Book, false) => "BOOK",
            (Concept::Book, true) => "BOOKS",
            (Concept::Chapter, false) => "CHAPTER",
            (Concept::Chapter, true) => "CHAPTERS",
            (Concept::Masterthesis, false) => "MASTERTHESIS",
            (Concept::Masterthesis, true) => "MASTERTHESES",
            (Concept::Phdthesis, false) => "PHDTHESIS",
            (Concept::Phdthesis, true) => "PHDTHESES",
            (Concept::Person, false) => "PERSON",
            (Concept::Person, true) => "PERSONS",
            (Concept::Author, false) => "AUTHOR",
            (Concept::Author, true) => "AUTHORS",
            (Concept::Editor, false) => "EDITOR",
            (Concept::Editor, true) => "EDITORS",
            (Concept::Conference, false) => "CONFERENCE",
            (Concept::Conference, true) => "CONFERENCES",
            (Concept::Journal, false) => "JOURNAL",
            (Concept::Journal, true) => "JOURNALS",
            (Concept::Institution, false) => "INSTITUTION",
            (Concept::Institution, true) => "INSTITUTIONS",
        }
    }

    /// Inverse of [`Concept::spelling`] over uppercase input.
    pub fn from_spelling(word: &str) -> Option<(Concept, bool)> {
        for c in Concept::ALL {
            if word == c.spelling(false) {
                return Some((c, false));
            }
            if word == c.spelling(true) {
                return Some((c, true));
            }
        }
        None
    }
}

/// The three built-in functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionName {
    Count,
    MostCited,
    KeywordsOf,
}

impl FunctionName {
    pub fn text(self) -> &'static str {
        match self {
            FunctionName::Count => "COUNT",
            FunctionName::MostCited => "MOST CITED",
            FunctionName::KeywordsOf => "KEYWORDS OF",
        }
    }
}

impl fmt::Display for FunctionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Concept(ConceptQuery),
    Function(FunctionCall),
    Attribute(AttributeQuery),
    Navigation(Navigation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptQuery {
    pub concept: Concept,
    pub plural: bool,
    pub concept_span: Span,
    pub filters: Vec<Filter>,
    pub limit: Option<Limit>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    pub keyword: FilterKeyword,
    pub keyword_span: Span,
    pub arg: FilterArg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterArg {
    /// Parenthesized subquery; the span covers the parentheses.
    Subquery(Box<Expr>, Span),
    Str(String, Span),
    Number(u64, Span),
}

impl FilterArg {
    pub fn span(&self) -> Span {
        match self {
            FilterArg::Subquery(_, s) | FilterArg::Str(_, s) | FilterArg::Number(_, s) => *s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionCall {
    pub function: FunctionName,
    pub name_span: Span,
    pub arg: Box<Expr>,
    /// Span of the parenthesized argument.
    pub arg_span: Span,
    pub limit: Option<Limit>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeQuery {
    /// Attribute name as written inside the quotes.
    pub attribute: String,
    pub attribute_span: Span,
    pub source: Box<Expr>,
}

/// `CONFERENCE OF (expr)` / `JOURNAL OF (expr)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Navigation {
    pub target: VenueKind,
    pub plural: bool,
    pub target_span: Span,
    pub source: Box<Expr>,
    pub source_span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limit {
    pub n: u64,
    pub span: Span,
}

impl Expr {
    /// Full extent of the expression in the source text.
    pub fn span(&self) -> Span {
        match self {
            Expr::Concept(c) => {
                let mut s = c.concept_span;
                for f in &c.filters {
                    s = s.merge(f.keyword_span).merge(f.arg.span());
                }
                if let Some(l) = &c.limit {
                    s = s.merge(l.span);
                }
                s
            }
            Expr::Function(f) => {
                let mut s = f.name_span.merge(f.arg_span);
                if let Some(l) = &f.limit {
                    s = s.merge(l.span);
                }
                s
            }
            Expr::Attribute(a) => a.attribute_span.merge(a.source.span()),
            Expr::Navigation(n) => n.target_span.merge(n.source_span),
        }
    }

    /// Copy with every span zeroed, for structural comparison.
    pub fn without_spans(&self) -> Expr {
        let z = Span::default();
        match self {
            Expr::Concept(c) => Expr::Concept(ConceptQuery {
                concept: c.concept,
                plural: c.plural,
                concept_span: z,
                filters: c
                    .filters
                    .iter()
                    .map(|f| Filter {
                        keyword: f.keyword,
                        keyword_span: z,
                        arg: match &f.arg {
                            FilterArg::Subquery(e, _) => FilterArg::Subquery(Box::new(e.without_spans()), z),
                            FilterArg::Str(s, _) => FilterArg::Str(s.clone(), z),
                            FilterArg::Number(n, _) => FilterArg::Number(*n, z),
                        },
                    })
                    .collect(),
                limit: c.limit.map(|l| Limit { n: l.n, span: z }),
            }),
            Expr::Function(f) => Expr::Function(FunctionCall {
                function: f.function,
                name_span: z,
                arg: Box::new(f.arg.without_spans()),
                arg_span: z,
                limit: f.limit.map(|l| Limit { n: l.n, span: z }),
            }),
            Expr::Attribute(a) => Expr::Attribute(AttributeQuery {
                attribute: a.attribute.clone(),
                attribute_span: z,
                source: Box::new(a.source.without_spans()),
            }),
            Expr::Navigation(n) => Expr::Navigation(Navigation {
                target: n.target,
                plural: n.plural,
                target_span: z,
                source: Box::new(n.source.without_spans()),
                source_span: z,
            }),
        }
    }

    /// Canonical query text, trailing semicolon included.
    pub fn to_query_text(&self) -> String {
        format!("{self};")
    }
}

/// Renders `s` as a double-quoted literal with backslash escapes.
pub fn quote_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Concept(c) => {
                f.write_str(c.concept.spelling(c.plural))?;
                for filter in &c.filters {
                    write!(f, " {filter}")?;
                }
                if let Some(l) = &c.limit {
                    write!(f, " LIMIT {}", l.n)?;
                }
                Ok(())
            }
            Expr::Function(call) => {
                write!(f, "{} ({})", call.function, call.arg)?;
                if let Some(l) = &call.limit {
                    write!(f, " LIMIT {}", l.n)?;
                }
                Ok(())
            }
            Expr::Attribute(a) => write!(f, "{} OF {}", quote_string(&a.attribute), a.source),
            Expr::Navigation(n) => {
                let word = match (n.target, n.plural) {
                    (VenueKind::Conference, false) => "CONFERENCE",
                    (VenueKind::Conference, true) => "CONFERENCES",
                    (VenueKind::Journal, false) => "JOURNAL",
                    (VenueKind::Journal, true) => "JOURNALS",
                };
                write!(f, "{word} OF ({})", n.source)
            }
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword.text())?;
        match &self.arg {
            FilterArg::Subquery(e, _) => write!(f, " ({e})"),
            FilterArg::Str(s, _) => write!(f, " {}", quote_string(s)),
            FilterArg::Number(n, _) => write!(f, " {n}"),
        }
    }
}
