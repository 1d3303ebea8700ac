//! Recursive-descent parser for the record language.
//!
//! ```text
//! program   := record
//! record    := '{' [ element { ',' element } [ ',' ] ] '}'
//! element   := IDENT '=' ( record | reference ) | reference
//! reference := 'this' '@' IDENT { '.' IDENT }
//!            | '^' NUMBER { '.' IDENT }
//!            | IDENT { '.' IDENT }
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use super::ast::{SurfaceElement, SurfaceProgram, SurfaceRecord, SurfaceRef};
use super::label::Label;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Equals,
    Dot,
    At,
    Caret,
    Ident(String),
    Number(usize),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Open => "`{`".into(),
            Tok::Close => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::At => "`@`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    let err = |line, column, message: String| ParseError { line, column, message };
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '{' => Tok::Open,
            '}' => Tok::Close,
            ',' => Tok::Comma,
            '=' => Tok::Equals,
            '.' => Tok::Dot,
            '@' => Tok::At,
            '^' => Tok::Caret,
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    text.extend(bump(&mut chars));
                }
                let n = text
                    .parse()
                    .map_err(|_| err(l, col, format!("scope index `{text}` is too large")))?;
                out.push(Spanned { tok: Tok::Number(n), line: l, column: col });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while chars.peek().is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_') {
                    text.extend(bump(&mut chars));
                }
                out.push(Spanned { tok: Tok::Ident(text), line: l, column: col });
                continue;
            }
            other => return Err(err(l, col, format!("unexpected character `{other}`"))),
        };
        bump(&mut chars);
        out.push(Spanned { tok, line: l, column: col });
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: String) -> ParseError {
        let at = &self.toks[self.pos];
        ParseError { line: at.line, column: at.column, message }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn ident(&mut self) -> Result<Label, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(Label::new(&s))
            }
            other => Err(self.error(format!("expected identifier, found {}", other.describe()))),
        }
    }

    fn record(&mut self) -> Result<SurfaceRecord, ParseError> {
        self.expect(Tok::Open)?;
        let mut elements = Vec::new();
        loop {
            if *self.peek() == Tok::Close {
                self.next();
                return Ok(SurfaceRecord { elements });
            }
            elements.push(self.element()?);
            match self.peek() {
                Tok::Comma => {
                    self.next();
                }
                Tok::Close => {}
                other => {
                    return Err(self.error(format!("expected `,` or `}}`, found {}", other.describe())))
                }
            }
        }
    }

    fn element(&mut self) -> Result<SurfaceElement, ParseError> {
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Equals {
            let label = self.ident()?;
            self.next();
            let body = if *self.peek() == Tok::Open {
                self.record()?
            } else {
                SurfaceRecord { elements: vec![SurfaceElement::Reference(self.reference()?)] }
            };
            return Ok(SurfaceElement::Definition(label, body));
        }
        Ok(SurfaceElement::Reference(self.reference()?))
    }

    fn downs(&mut self) -> Result<Vec<Label>, ParseError> {
        let mut downs = Vec::new();
        while *self.peek() == Tok::Dot {
            self.next();
            downs.push(self.ident()?);
        }
        Ok(downs)
    }

    fn reference(&mut self) -> Result<SurfaceRef, ParseError> {
        match self.peek().clone() {
            Tok::Caret => {
                self.next();
                let n = match self.next() {
                    Tok::Number(n) => n,
                    other => {
                        self.pos -= 1;
                        return Err(self.error(format!("expected scope index, found {}", other.describe())));
                    }
                };
                Ok(SurfaceRef::Indexed { n, downs: self.downs()? })
            }
            Tok::Ident(s) if s == "this" && *self.peek_at(1) == Tok::At => {
                self.next();
                self.next();
                let target = self.ident()?;
                Ok(SurfaceRef::Named { target, downs: self.downs()? })
            }
            Tok::Ident(_) => {
                let head = self.ident()?;
                Ok(SurfaceRef::Lexical { head, rest: self.downs()? })
            }
            other => Err(self.error(format!("expected a definition or reference, found {}", other.describe()))),
        }
    }
}

/// Parses one top-level record.
pub fn parse(src: &str) -> Result<SurfaceProgram, ParseError> {
    let mut parser = Parser { toks: lex(src)?, pos: 0 };
    let root = parser.record()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.error(format!("trailing input: {}", parser.peek().describe())));
    }
    Ok(SurfaceProgram { root })
}
