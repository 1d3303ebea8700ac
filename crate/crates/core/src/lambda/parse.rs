//! Parser for lambda terms.
//!
//! ```text
//! term  := 'let' IDENT '=' term 'in' term
//!        | ('\' | 'λ') IDENT+ '.' term
//!        | atom+ [ lambda-or-let ]
//! atom  := IDENT | '(' term ')'
//! ```
//!
//! Application is left associative and an abstraction body extends as far
//! right as possible.

use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LambdaParseError {
    #[error("at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("free variable `{0}`")]
    FreeVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    Open,
    Close,
    Equals,
    Let,
    In,
    Ident(String),
    Eof,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, LambdaParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(at, c)) = it.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                it.next();
                continue;
            }
            '\\' | 'λ' => Tok::Lambda,
            '.' => Tok::Dot,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '=' => Tok::Equals,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((
                    at,
                    match word.as_str() {
                        "let" => Tok::Let,
                        "in" => Tok::In,
                        _ => Tok::Ident(word),
                    },
                ));
                continue;
            }
            other => {
                return Err(LambdaParseError::Syntax { offset: at, message: format!("unexpected `{other}`") })
            }
        };
        it.next();
        out.push((at, tok));
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        self.pos = (self.pos + 1).min(self.toks.len() - 1);
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, LambdaParseError> {
        Err(LambdaParseError::Syntax { offset: self.toks[self.pos].0, message: message.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LambdaParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, LambdaParseError> {
        match self.bump() {
            Tok::Ident(x) => Ok(x),
            _ => {
                self.pos -= 1;
                self.fail("expected identifier")
            }
        }
    }

    fn term(&mut self) -> Result<Term, LambdaParseError> {
        match self.peek() {
            Tok::Let => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Equals, "`=`")?;
                let bound = self.term()?;
                self.expect(Tok::In, "`in`")?;
                let body = self.term()?;
                Ok(match bound {
                    Term::App(fun, arg) => Term::Let { name, fun, arg, body: Box::new(body) },
                    other => Term::app(Term::Abs(name, Box::new(body)), other),
                })
            }
            Tok::Lambda => {
                self.bump();
                let mut names = vec![self.ident()?];
                while let Tok::Ident(_) = self.peek() {
                    names.push(self.ident()?);
                }
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(names.into_iter().rev().fold(body, |acc, x| Term::Abs(x, Box::new(acc))))
            }
            _ => {
                let mut acc = self.atom()?;
                loop {
                    match self.peek() {
                        Tok::Ident(_) | Tok::Open => acc = Term::app(acc, self.atom()?),
                        Tok::Lambda | Tok::Let => return Ok(Term::app(acc, self.term()?)),
                        _ => return Ok(acc),
                    }
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Term, LambdaParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(Term::Var(x))
            }
            Tok::Open => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(t)
            }
            _ => self.fail("expected a term"),
        }
    }
}

/// Parses a term that may mention free variables.
pub fn parse_open(src: &str) -> Result<Term, LambdaParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.fail("trailing input");
    }
    Ok(t)
}

/// Parses a closed term.
pub fn parse_lambda(src: &str) -> Result<Term, LambdaParseError> {
    let t = parse_open(src)?;
    if let Some(x) = t.free_vars().into_iter().next() {
        return Err(LambdaParseError::FreeVariable(x));
    }
    Ok(t)
}
