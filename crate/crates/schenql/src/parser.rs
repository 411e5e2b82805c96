//! Recursive-descent parser over the token stream, one production per
//! grammar rule:
//!
//! ```text
//! query          := expr ";"
//! expr           := function | attributeQuery | navigation | conceptQuery
//! function       := ("COUNT" | "MOST CITED" | "KEYWORDS OF") "(" expr ")" [limit]
//! attributeQuery := STRING "OF" expr
//! navigation     := ("CONFERENCE"|"CONFERENCES"|"JOURNAL"|"JOURNALS") "OF" "(" expr ")"
//! conceptQuery   := concept {filter} [limit]
//! filter         := FILTER_KEYWORD ( "(" expr ")" | STRING | NUMBER )
//! limit          := "LIMIT" NUMBER
//! ```

use crate::ast::{AttributeQuery, Concept, ConceptQuery, Expr, Filter, FilterArg, FunctionCall, FunctionName, Limit, Navigation};
use crate::error::ParseError;
use crate::model::VenueKind;
use crate::token::{Keyword, Span, Token, TokenKind};

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

/// Parses one complete query (trailing semicolon required, nothing after it).
pub fn parse(tokens: &[Token]) -> Result<Expr, ParseError> {
    let mut p = Parser { tokens, pos: 0 };
    let expr = p.parse_expr()?;
    match p.peek() {
        None => return Err(ParseError::MissingSemicolon { span: p.eof_span() }),
        Some(t) if t.kind == TokenKind::Semicolon => {
            p.pos += 1;
        }
        Some(t) => {
            return Err(ParseError::UnexpectedToken { expected: "';'".into(), found: t.describe(), span: t.span })
        }
    }
    if let Some(t) = p.peek() {
        return Err(ParseError::UnexpectedToken {
            expected: "end of input".into(),
            found: t.describe(),
            span: t.span,
        });
    }
    Ok(expr)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek2(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos + 1)
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    /// Empty span just past the last token, for end-of-input errors.
    fn eof_span(&self) -> Span {
        let end = self.tokens.last().map_or(0, |t| t.span.end);
        Span::new(end, end)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::UnexpectedToken { expected: expected.into(), found: t.describe(), span: t.span },
            None => ParseError::UnexpectedToken {
                expected: expected.into(),
                found: "end of input".into(),
                span: self.eof_span(),
            },
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let Some(t) = self.peek() else {
            return Err(self.unexpected("a query"));
        };
        match &t.kind {
            TokenKind::Keyword(Keyword::Function(_)) => self.parse_function(),
            TokenKind::Keyword(Keyword::Concept(c, _))
                if matches!(c, Concept::Conference | Concept::Journal) && self.next_is_of() =>
            {
                self.parse_navigation()
            }
            TokenKind::Keyword(Keyword::Concept(_, _)) => self.parse_concept_query(),
            TokenKind::Str(_) => self.parse_attribute_query(),
            TokenKind::Keyword(Keyword::Filter(k)) => {
                Err(ParseError::DanglingFilter { keyword: *k, span: t.span })
            }
            TokenKind::RParen => Err(ParseError::UnbalancedParentheses {
                detail: "')' without a matching '('".into(),
                span: t.span,
            }),
            _ => Err(self.unexpected("a concept, function, or attribute")),
        }
    }

    fn next_is_of(&self) -> bool {
        matches!(self.peek2(), Some(t) if t.kind == TokenKind::Keyword(Keyword::Of))
    }

    /// Consumes `"(" expr ")"`, returning the expression and the span of the
    /// parenthesized group.
    fn parse_parenthesized(&mut self, context: &str) -> Result<(Expr, Span), ParseError> {
        let open = match self.peek() {
            Some(t) if t.kind == TokenKind::LParen => self.bump().span,
            _ => return Err(self.unexpected(context)),
        };
        let expr = self.parse_expr()?;
        match self.peek() {
            Some(t) if t.kind == TokenKind::RParen => {
                let close = self.bump().span;
                Ok((expr, open.merge(close)))
            }
            Some(t) if t.kind == TokenKind::Semicolon => {
                Err(ParseError::UnbalancedParentheses { detail: "unclosed '('".into(), span: open })
            }
            Some(_) => Err(self.unexpected("')'")),
            None => Err(ParseError::UnbalancedParentheses { detail: "unclosed '('".into(), span: open }),
        }
    }

    fn parse_function(&mut self) -> Result<Expr, ParseError> {
        let name_tok = self.bump();
        let TokenKind::Keyword(Keyword::Function(function)) = name_tok.kind else { unreachable!() };
        let context: &str = match function {
            FunctionName::Count => "'(' after COUNT",
            FunctionName::MostCited => "'(' after MOST CITED",
            FunctionName::KeywordsOf => "'(' after KEYWORDS OF",
        };
        let (arg, arg_span) = self.parse_parenthesized(context)?;
        let limit = self.parse_opt_limit()?;
        Ok(Expr::Function(FunctionCall {
            function,
            name_span: name_tok.span,
            arg: Box::new(arg),
            arg_span,
            limit,
        }))
    }

    fn parse_navigation(&mut self) -> Result<Expr, ParseError> {
        let concept_tok = self.bump();
        let TokenKind::Keyword(Keyword::Concept(concept, plural)) = concept_tok.kind else { unreachable!() };
        let target = match concept {
            Concept::Conference => VenueKind::Conference,
            Concept::Journal => VenueKind::Journal,
            _ => unreachable!(),
        };
        self.bump();
        let (source, source_span) = self.parse_parenthesized("'(' after OF")?;
        Ok(Expr::Navigation(Navigation {
            target,
            plural,
            target_span: concept_tok.span,
            source: Box::new(source),
            source_span,
        }))
    }

    fn parse_attribute_query(&mut self) -> Result<Expr, ParseError> {
        let str_tok = self.bump();
        let TokenKind::Str(attribute) = &str_tok.kind else { unreachable!() };
        match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword(Keyword::Of) => {
                self.bump();
            }
            _ => return Err(self.unexpected("OF after an attribute string")),
        }
        let source = self.parse_expr()?;
        Ok(Expr::Attribute(AttributeQuery {
            attribute: attribute.clone(),
            attribute_span: str_tok.span,
            source: Box::new(source),
        }))
    }

    fn parse_concept_query(&mut self) -> Result<Expr, ParseError> {
        let concept_tok = self.bump();
        let TokenKind::Keyword(Keyword::Concept(concept, plural)) = concept_tok.kind else { unreachable!() };
        let mut filters = Vec::new();
        while let Some(t) = self.peek() {
            let TokenKind::Keyword(Keyword::Filter(keyword)) = t.kind else { break };
            let keyword_span = self.bump().span;
            let arg = self.parse_filter_arg()?;
            filters.push(Filter { keyword, keyword_span, arg });
        }
        let limit = self.parse_opt_limit()?;
        Ok(Expr::Concept(ConceptQuery { concept, plural, concept_span: concept_tok.span, filters, limit }))
    }

    fn parse_filter_arg(&mut self) -> Result<FilterArg, ParseError> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::LParen) => {
                let (expr, span) = self.parse_parenthesized("a filter argument")?;
                Ok(FilterArg::Subquery(Box::new(expr), span))
            }
            Some(TokenKind::Str(s)) => {
                let value = s.clone();
                Ok(FilterArg::Str(value, self.bump().span))
            }
            Some(TokenKind::Number(n)) => {
                let value = *n;
                Ok(FilterArg::Number(value, self.bump().span))
            }
            _ => Err(self.unexpected("a filter argument (subquery, string, or number)")),
        }
    }

    fn parse_opt_limit(&mut self) -> Result<Option<Limit>, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword(Keyword::Limit) => {
                let kw_span = self.bump().span;
                match self.peek().map(|t| &t.kind) {
                    Some(TokenKind::Number(n)) => {
                        let n = *n;
                        let num_span = self.bump().span;
                        Ok(Some(Limit { n, span: kw_span.merge(num_span) }))
                    }
                    _ => Err(self.unexpected("a number after LIMIT")),
                }
            }
            _ => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::FilterKeyword;
    use crate::lexer::tokenize;

    fn parse_text(src: &str) -> Result<Expr, ParseError> {
        parse(&tokenize(src).unwrap())
    }

    fn parsed(src: &str) -> Expr {
        parse_text(src).unwrap()
    }

    #[test]
    fn most_cited_with_limit() {
        let expr = parsed(r#"MOST CITED (ARTICLES APPEARED IN "icadl") LIMIT 10;"#);
        let Expr::Function(f) = &expr else { panic!("expected function") };
        assert_eq!(f.function, FunctionName::MostCited);
        assert_eq!(f.limit.map(|l| l.n), Some(10));
        let Expr::Concept(c) = f.arg.as_ref() else { panic!("expected concept arg") };
        assert_eq!(c.concept, Concept::Article);
        assert!(c.plural);
        assert_eq!(c.filters.len(), 1);
        assert_eq!(c.filters[0].keyword, FilterKeyword::AppearedIn);
        assert!(matches!(&c.filters[0].arg, FilterArg::Str(s, _) if s == "icadl"));
        assert_eq!(c.limit, None);
    }

    #[test]
    fn singular_and_plural_differ_only_in_flag() {
        let Expr::Concept(singular) = parsed("CONFERENCE;") else { panic!() };
        let Expr::Concept(plural) = parsed("CONFERENCES;") else { panic!() };
        assert!(!singular.plural);
        assert!(plural.plural);
        assert_eq!(singular.concept, plural.concept);
        assert_eq!(singular.filters, plural.filters);
        assert_eq!(singular.limit, plural.limit);
    }

    #[test]
    fn attribute_query_over_filtered_journals() {
        let expr = parsed(r#""dblpKey" OF JOURNALS IN YEAR 2010;"#);
        let Expr::Attribute(a) = &expr else { panic!("expected attribute query") };
        assert_eq!(a.attribute, "dblpKey");
        let Expr::Concept(c) = a.source.as_ref() else { panic!() };
        assert_eq!(c.concept, Concept::Journal);
        assert_eq!(c.filters[0].keyword, FilterKeyword::InYear);
        assert!(matches!(c.filters[0].arg, FilterArg::Number(2010, _)));
    }

    #[test]
    fn missing_semicolon() {
        let err = parse_text(r#"PUBLICATIONS WRITTEN BY "A""#).unwrap_err();
        assert!(matches!(err, ParseError::MissingSemicolon { .. }), "{err:?}");
    }

    #[test]
    fn nested_subquery() {
        let expr = parsed(r#"AUTHORS PUBLISHED IN (CONFERENCE ACRONYM "C");"#);
        let Expr::Concept(c) = &expr else { panic!() };
        assert_eq!(c.concept, Concept::Author);
        let FilterArg::Subquery(inner, _) = &c.filters[0].arg else { panic!("expected subquery") };
        let Expr::Concept(inner) = inner.as_ref() else { panic!() };
        assert_eq!(inner.concept, Concept::Conference);
        assert_eq!(inner.filters[0].keyword, FilterKeyword::Acronym);
    }

    #[test]
    fn navigation_requires_parentheses() {
        let expr = parsed(r#"JOURNAL OF (PUBLICATIONS TITLED "P");"#);
        let Expr::Navigation(n) = &expr else { panic!("expected navigation") };
        assert_eq!(n.target, VenueKind::Journal);
        assert!(!n.plural);

        let err = parse_text("JOURNAL OF PUBLICATIONS;").unwrap_err();
        assert!(matches!(err, ParseError::UnexpectedToken { .. }), "{err:?}");
    }

    #[test]
    fn filters_kept_in_written_order() {
        let Expr::Concept(c) = parsed(r#"PUBLICATIONS IN YEAR 2010 TITLED "x" ABOUT "ir";"#) else { panic!() };
        let order: Vec<FilterKeyword> = c.filters.iter().map(|f| f.keyword).collect();
        assert_eq!(order, vec![FilterKeyword::InYear, FilterKeyword::Titled, FilterKeyword::About]);
    }

    #[test]
    fn limit_binds_to_nearest_query() {
        let Expr::Concept(c) = parsed(r#"PUBLICATIONS WRITTEN BY (PERSONS LIMIT 3) LIMIT 5;"#) else { panic!() };
        assert_eq!(c.limit.map(|l| l.n), Some(5));
        let FilterArg::Subquery(inner, _) = &c.filters[0].arg else { panic!() };
        let Expr::Concept(inner) = inner.as_ref() else { panic!() };
        assert_eq!(inner.limit.map(|l| l.n), Some(3));
    }

    #[test]
    fn dangling_filter() {
        let err = parse_text(r#"WRITTEN BY "A";"#).unwrap_err();
        match err {
            ParseError::DanglingFilter { keyword, .. } => assert_eq!(keyword, FilterKeyword::WrittenBy),
            other => panic!("unexpected error: {other:?}"),
        }
        let err = parse_text(r#"COUNT (TITLED "x");"#).unwrap_err();
        assert!(matches!(err, ParseError::DanglingFilter { .. }));
    }

    #[test]
    fn unbalanced_parentheses() {
        let err = parse_text("COUNT (PERSONS;").unwrap_err();
        match err {
            ParseError::UnbalancedParentheses { span, .. } => assert_eq!(span, Span::new(6, 7)),
            other => panic!("unexpected error: {other:?}"),
        }
        let err = parse_text(") PERSONS;").unwrap_err();
        assert!(matches!(err, ParseError::UnbalancedParentheses { .. }));
        let err = parse_text("COUNT (PERSONS").unwrap_err();
        assert!(matches!(err, ParseError::UnbalancedParentheses { .. }));
    }

    #[test]
    fn trailing_input_rejected() {
        let err = parse_text("PERSONS; PUBLICATIONS;").unwrap_err();
        match err {
            ParseError::UnexpectedToken { expected, .. } => assert_eq!(expected, "end of input"),
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn attribute_string_needs_of() {
        let err = parse_text(r#""title";"#).unwrap_err();
        match err {
            ParseError::UnexpectedToken { expected, .. } => assert!(expected.contains("OF")),
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn unknown_word_rejected() {
        let err = parse_text("WIDGETS;").unwrap_err();
        match err {
            ParseError::UnexpectedToken { found, .. } => assert_eq!(found, "'WIDGETS'"),
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        let err = parse_text("").unwrap_err();
        assert!(matches!(err, ParseError::UnexpectedToken { .. }));
        let err = parse_text(";").unwrap_err();
        assert!(matches!(err, ParseError::UnexpectedToken { .. }));
    }

    #[test]
    fn rendered_text_reparses_identically() {
        for src in [
            r#"PUBLICATIONS WRITTEN BY "A";"#,
            r#"MOST CITED (ARTICLES APPEARED IN "icadl") LIMIT 10;"#,
            r#""dblpKey" OF JOURNALS IN YEAR 2010;"#,
            r#"KEYWORDS OF (JOURNAL OF (PUBLICATIONS TITLED "P"));"#,
            r#"AUTHORS PUBLISHED IN (CONFERENCE ACRONYM "C");"#,
            r#"count(publications written by (persons named "a") in year 2000) limit 2;"#,
        ] {
            let first = parsed(src);
            let second = parsed(&first.to_query_text());
            assert_eq!(first.without_spans(), second.without_spans(), "round-trip failed for {src}");
        }
    }
}
