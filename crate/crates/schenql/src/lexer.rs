//! Hand-written lexer. Keywords are case-insensitive; multi-word keywords
//! (WRITTEN BY, MOST CITED, ...) are merged into single tokens; string
//! literals are double-quoted with backslash escapes for `"` and `\`.

use crate::error::LexError;
use crate::token::{single_word_keyword, starts_two_word_keyword, two_word_keyword, Span, Token, TokenKind};

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.peek()?;
        self.pos += ch.len_utf8();
        Some(ch)
    }

    fn skip_whitespace(&mut self) {
        while let Some(ch) = self.peek() {
            if ch.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// Scans a word starting at the current position. Words begin with a
    /// letter and continue over letters and digits.
    fn scan_word(&mut self) -> (String, Span) {
        let start = self.pos;
        while let Some(ch) = self.peek() {
            if ch.is_ascii_alphanumeric() {
                self.bump();
            } else {
                break;
            }
        }
        (self.src[start..self.pos].to_string(), Span::new(start, self.pos))
    }

    fn scan_string(&mut self) -> Result<Token, LexError> {
        let start = self.pos;
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(LexError::UnterminatedString { span: Span::new(start, self.src.len()) }),
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('"') => value.push('"'),
                    Some('\\') => value.push('\\'),
                    Some(other) => {
                        // Unknown escapes keep the backslash verbatim.
                        value.push('\\');
                        value.push(other);
                    }
                    None => return Err(LexError::UnterminatedString { span: Span::new(start, self.src.len()) }),
                },
                Some(ch) => value.push(ch),
            }
        }
        let span = Span::new(start, self.pos);
        Ok(Token { kind: TokenKind::Str(value), text: self.src[start..self.pos].to_string(), span })
    }

    fn scan_number(&mut self) -> Result<Token, LexError> {
        let start = self.pos;
        while let Some(ch) = self.peek() {
            if ch.is_ascii_digit() {
                self.bump();
            } else {
                break;
            }
        }
        let span = Span::new(start, self.pos);
        let text = &self.src[start..self.pos];
        let n: u64 = text.parse().map_err(|_| LexError::NumberTooLarge { span })?;
        Ok(Token { kind: TokenKind::Number(n), text: text.to_string(), span })
    }

    /// Scans a word and, when it can start a two-word keyword, tries to merge
    /// it with the following word. A failed merge leaves the second word for
    /// the next call.
    fn scan_word_token(&mut self) -> Token {
        let (word, span) = self.scan_word();
        let upper = word.to_ascii_uppercase();

        if starts_two_word_keyword(&upper) {
            let saved = self.pos;
            self.skip_whitespace();
            if self.peek().is_some_and(|ch| ch.is_ascii_alphabetic()) {
                let (second, second_span) = self.scan_word();
                if let Some(kw) = two_word_keyword(&upper, &second.to_ascii_uppercase()) {
                    let span = span.merge(second_span);
                    return Token { kind: TokenKind::Keyword(kw), text: self.src[span.start..span.end].to_string(), span };
                }
            }
            self.pos = saved;
        }

        let kind = match single_word_keyword(&upper) {
            Some(kw) => TokenKind::Keyword(kw),
            None => TokenKind::Word,
        };
        Token { kind, text: word, span }
    }
}

/// Tokenizes a query string. Whitespace is insignificant outside string
/// literals; an empty input yields an empty token list.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut lexer = Lexer { src, pos: 0 };
    let mut tokens = Vec::new();
    loop {
        lexer.skip_whitespace();
        let start = lexer.pos;
        let Some(ch) = lexer.peek() else { break };
        match ch {
            '"' => tokens.push(lexer.scan_string()?),
            '(' | ')' | ';' => {
                lexer.bump();
                let kind = match ch {
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    _ => TokenKind::Semicolon,
                };
                tokens.push(Token { kind, text: ch.to_string(), span: Span::new(start, lexer.pos) });
            }
            c if c.is_ascii_digit() => tokens.push(lexer.scan_number()?),
            c if c.is_ascii_alphabetic() => tokens.push(lexer.scan_word_token()),
            c => {
                return Err(LexError::IllegalCharacter { ch: c, span: Span::new(start, start + c.len_utf8()) });
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Concept, FunctionName};
    use crate::catalog::FilterKeyword;
    use crate::token::Keyword;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn tokenizes_written_by_query() {
        assert_eq!(
            kinds(r#"PUBLICATIONS WRITTEN BY "A";"#),
            vec![
                TokenKind::Keyword(Keyword::Concept(Concept::Publication, true)),
                TokenKind::Keyword(Keyword::Filter(FilterKeyword::WrittenBy)),
                TokenKind::Str("A".into()),
                TokenKind::Semicolon,
            ]
        );
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert_eq!(tokenize("").unwrap(), vec![]);
        assert_eq!(tokenize("   \t\n ").unwrap(), vec![]);
    }

    #[test]
    fn tokenizes_count_over_institutions() {
        assert_eq!(
            kinds("COUNT (INSTITUTIONS);"),
            vec![
                TokenKind::Keyword(Keyword::Function(FunctionName::Count)),
                TokenKind::LParen,
                TokenKind::Keyword(Keyword::Concept(Concept::Institution, true)),
                TokenKind::RParen,
                TokenKind::Semicolon,
            ]
        );
    }

    #[test]
    fn keywords_are_case_insensitive() {
        let lower = kinds(r#"publications written by "A";"#);
        let upper = kinds(r#"PUBLICATIONS WRITTEN BY "A";"#);
        let mixed = kinds(r#"Publications Written By "A";"#);
        assert_eq!(lower, upper);
        assert_eq!(mixed, upper);
    }

    #[test]
    fn multi_word_keywords_merge_across_whitespace() {
        let toks = tokenize("MOST   CITED (PUBLICATIONS);").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Keyword(Keyword::Function(FunctionName::MostCited)));
        assert_eq!(toks[0].text, "MOST   CITED");
        assert_eq!(toks[0].span, Span::new(0, 12));
    }

    #[test]
    fn unmergeable_first_word_stays_alone() {
        // IN only forms a keyword with YEAR; alone it is a plain word.
        let toks = tokenize("IN 2010").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Word);
        assert_eq!(toks[1].kind, TokenKind::Number(2010));

        let toks = tokenize("IN YEAR 2010").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Keyword(Keyword::Filter(FilterKeyword::InYear)));
    }

    #[test]
    fn string_escapes() {
        let toks = tokenize(r#""a \"quoted\" name" "back\\slash""#).unwrap();
        assert_eq!(toks[0].kind, TokenKind::Str(r#"a "quoted" name"#.into()));
        assert_eq!(toks[1].kind, TokenKind::Str(r"back\slash".into()));
    }

    #[test]
    fn string_span_includes_quotes() {
        let toks = tokenize(r#"  "abc"  "#).unwrap();
        assert_eq!(toks[0].span, Span::new(2, 7));
        assert_eq!(toks[0].text, "\"abc\"");
    }

    #[test]
    fn unterminated_string_reports_offset() {
        let err = tokenize(r#"PERSONS NAMED "Alice"#).unwrap_err();
        match err {
            LexError::UnterminatedString { span } => assert_eq!(span.start, 14),
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn illegal_character() {
        let err = tokenize("PERSONS %").unwrap_err();
        match err {
            LexError::IllegalCharacter { ch, span } => {
                assert_eq!(ch, '%');
                assert_eq!(span, Span::new(8, 9));
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn number_too_large() {
        let err = tokenize("PUBLICATIONS LIMIT 99999999999999999999;").unwrap_err();
        assert!(matches!(err, LexError::NumberTooLarge { .. }));
    }

    #[test]
    fn spans_map_back_into_source() {
        let src = r#"AUTHORS PUBLISHED IN (CONFERENCE ACRONYM "C");"#;
        for t in tokenize(src).unwrap() {
            assert_eq!(&src[t.span.start..t.span.end], t.text);
        }
    }

    #[test]
    fn unknown_words_are_word_tokens() {
        let toks = tokenize("FOO42 BAR").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Word);
        assert_eq!(toks[0].text, "FOO42");
        assert_eq!(toks[1].kind, TokenKind::Word);
    }
}
