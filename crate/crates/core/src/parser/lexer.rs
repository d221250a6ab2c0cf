//! Tokenizer shared by the term, type, formula and metalanguage grammars.

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Underscore,
    Backslash,
    Dot,
    Colon,
    Comma,
    Eq,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Arrow,
    Star,
    Amp,
    Bar,
    Tilde,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Underscore => "`_`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        let (sl, sc) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::CharIndices>| {
            let (_, ch) = chars.next().unwrap();
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&(_, ch)) = chars.peek() {
                if ch == '\n' {
                    break;
                }
                advance(&mut chars);
            }
            continue;
        }
        let tok = if is_ident_start(c) {
            let mut name = String::new();
            while let Some(&(_, ch)) = chars.peek() {
                if !is_ident_continue(ch) {
                    break;
                }
                name.push(ch);
                advance(&mut chars);
            }
            Tok::Ident(name)
        } else if c == '-' {
            advance(&mut chars);
            match chars.peek() {
                Some(&(_, '>')) => {
                    advance(&mut chars);
                    Tok::Arrow
                }
                _ => {
                    return Err(ParseError::new(
                        "stray `-`",
                        SourceSpan::new(start, start + 1, sl, sc),
                        vec!["`->`".into()],
                    ))
                }
            }
        } else {
            let t = match c {
                '_' => Tok::Underscore,
                '\\' => Tok::Backslash,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '<' => Tok::LAngle,
                '>' => Tok::RAngle,
                '*' => Tok::Star,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '~' => Tok::Tilde,
                other => {
                    return Err(ParseError::new(
                        format!("unexpected character `{other}`"),
                        SourceSpan::new(start, start + other.len_utf8(), sl, sc),
                        vec![],
                    ))
                }
            };
            advance(&mut chars);
            // `_` immediately followed by identifier characters is not a
            // token of this language
            if t == Tok::Underscore {
                if let Some(&(_, ch)) = chars.peek() {
                    if is_ident_continue(ch) {
                        return Err(ParseError::new(
                            "identifiers must start with a letter",
                            SourceSpan::new(start, start + 1, sl, sc),
                            vec![],
                        ));
                    }
                }
            }
            t
        };
        let end = chars.peek().map(|&(i, _)| i).unwrap_or(src.len());
        out.push(Token {
            tok,
            span: SourceSpan::new(start, end, sl, sc),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::new(src.len(), src.len(), line, col),
    });
    Ok(out)
}

/// Cursor over a token stream with expected-token bookkeeping for error
/// messages.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    expected: Vec<String>,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: tokenize(src)?,
            pos: 0,
            expected: Vec::new(),
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
            self.expected.clear();
        }
        t
    }

    pub fn note(&mut self, what: &str) {
        if !self.expected.iter().any(|e| e == what) {
            self.expected.push(what.to_string());
        }
    }

    pub fn at(&mut self, t: &Tok) -> bool {
        self.note(&t.describe());
        self.peek() == t
    }

    pub fn at_keyword(&mut self, kw: &str) -> bool {
        self.note(&format!("`{kw}`"));
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<SourceSpan, ParseError> {
        if self.at(t) {
            Ok(self.bump().span)
        } else {
            Err(self.error())
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<SourceSpan, ParseError> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.error())
        }
    }

    /// An identifier that is not one of `reserved`.
    pub fn expect_ident(&mut self, reserved: &[&str]) -> Result<(String, SourceSpan), ParseError> {
        self.note("identifier");
        match self.peek().clone() {
            Tok::Ident(s) if !reserved.contains(&s.as_str()) => {
                let sp = self.bump().span;
                Ok((s, sp))
            }
            _ => Err(self.error()),
        }
    }

    pub fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    pub fn error(&self) -> ParseError {
        let found = self.peek().describe();
        let mut expected = self.expected.clone();
        expected.sort();
        expected.dedup();
        ParseError::new(format!("unexpected {found}"), self.span(), expected)
    }
}
