//! Recursive-descent parsers for types, processes and judgments.

use crate::ast::{Branches, Context, Judgment, Name, Process, System, TypeExpr};

use super::lex::{lex, SourceSpan, Tok, Token};
use super::SyntaxError;

const KEYWORDS: &[&str] = &[
    "new", "send", "recv", "serv", "fwd", "close", "wait", "bot", "par",
];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    eof: SourceSpan,
}

impl Parser {
    fn new(input: &str) -> Result<Parser, SyntaxError> {
        let lexer = lex(input, "")?;
        Ok(Parser {
            tokens: lexer.tokens,
            pos: 0,
            eof: lexer.eof,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> SourceSpan {
        self.tokens
            .get(self.pos)
            .map(|t| t.span.clone())
            .unwrap_or_else(|| self.eof.clone())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(SyntaxError::new(self.span(), format!("expected {what}")))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(SyntaxError::new(self.span(), format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.tokens.len()
    }

    fn expect_end(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(SyntaxError::new(self.span(), "expected end of input"))
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<TypeExpr, SyntaxError> {
        let lhs = self.ty_par()?;
        if self.eat(&Tok::Lolli) {
            let rhs = self.ty()?;
            Ok(TypeExpr::lolli(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_par(&mut self) -> Result<TypeExpr, SyntaxError> {
        let lhs = self.ty_tensor()?;
        if self.keyword("par") {
            let rhs = self.ty_par()?;
            Ok(TypeExpr::par(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_tensor(&mut self) -> Result<TypeExpr, SyntaxError> {
        let lhs = self.ty_unary()?;
        if self.eat(&Tok::Star) {
            let rhs = self.ty_tensor()?;
            Ok(TypeExpr::tensor(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_unary(&mut self) -> Result<TypeExpr, SyntaxError> {
        let span = self.span();
        match self.bump() {
            Some(Tok::One) => Ok(TypeExpr::One),
            Some(Tok::Ident(s)) if s == "bot" => Ok(TypeExpr::Bot),
            Some(Tok::Bang) => Ok(TypeExpr::bang(self.ty_unary()?)),
            Some(Tok::Query) => Ok(TypeExpr::query(self.ty_unary()?)),
            Some(Tok::LParen) => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Plus) => {
                let arms = self.ty_arms()?;
                Ok(TypeExpr::Plus(arms))
            }
            Some(Tok::Amp) => {
                let arms = self.ty_arms()?;
                Ok(TypeExpr::With(arms))
            }
            _ => Err(SyntaxError::new(span, "expected a type")),
        }
    }

    fn ty_arms(&mut self) -> Result<Branches, SyntaxError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut arms: Vec<(String, TypeExpr)> = Vec::new();
        loop {
            let span = self.span();
            let label = self.ident("a branch label")?;
            if arms.iter().any(|(l, _)| l == &label) {
                return Err(SyntaxError::new(span, format!("duplicate label {label}")));
            }
            self.expect(Tok::Colon, "`:`")?;
            let t = self.ty()?;
            arms.push((label, t));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(Branches::new(arms))
    }

    // ---- processes ----

    fn proc(&mut self) -> Result<Process, SyntaxError> {
        let lhs = self.proc_prefix()?;
        if self.eat(&Tok::Bar) {
            let rhs = self.proc()?;
            Ok(Process::par(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn proc_prefix(&mut self) -> Result<Process, SyntaxError> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Zero) => {
                self.bump();
                Ok(Process::Inact)
            }
            Some(Tok::LParen) => {
                self.bump();
                let p = self.proc()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Some(Tok::Ident(kw)) => match kw.as_str() {
                "fwd" => {
                    self.bump();
                    let x = self.ident("a channel name")?;
                    let y = self.ident("a channel name")?;
                    Ok(Process::fwd(x, y))
                }
                "close" => {
                    self.bump();
                    let x = self.ident("a channel name")?;
                    Ok(Process::close(x))
                }
                "wait" => {
                    self.bump();
                    let x = self.ident("a channel name")?;
                    self.expect(Tok::Dot, "`.`")?;
                    let p = self.proc_prefix()?;
                    Ok(Process::wait(x, p))
                }
                "new" => {
                    self.bump();
                    let x = self.ident("a channel name")?;
                    let ann = if self.eat(&Tok::Colon) {
                        Some(self.ty()?)
                    } else {
                        None
                    };
                    self.expect(Tok::LParen, "`(`")?;
                    let body = self.proc()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Process::Restrict {
                        name: x,
                        annotation: ann,
                        body: Box::new(body),
                    })
                }
                "send" => {
                    self.bump();
                    let x = self.ident("a channel name")?;
                    self.expect(Tok::LParen, "`(`")?;
                    let y = self.ident("a payload name")?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.expect(Tok::Dot, "`.`")?;
                    let body = self.proc_prefix()?;
                    Ok(Process::Restrict {
                        name: y.clone(),
                        annotation: None,
                        body: Box::new(Process::Output {
                            channel: x,
                            payload: y,
                            body: Box::new(body),
                        }),
                    })
                }
                "recv" => {
                    self.bump();
                    let x = self.ident("a channel name")?;
                    self.expect(Tok::LParen, "`(`")?;
                    let y = self.ident("a binder name")?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.expect(Tok::Dot, "`.`")?;
                    let p = self.proc_prefix()?;
                    Ok(Process::input(x, y, p))
                }
                "serv" => {
                    self.bump();
                    let x = self.ident("a channel name")?;
                    self.expect(Tok::LParen, "`(`")?;
                    let y = self.ident("a binder name")?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.expect(Tok::Dot, "`.`")?;
                    let p = self.proc_prefix()?;
                    Ok(Process::server(x, y, p))
                }
                _ => {
                    // a channel name: select or branch
                    let x = self.ident("a process")?;
                    match self.peek() {
                        Some(Tok::SelArrow) => {
                            self.bump();
                            let l = self.ident("a label")?;
                            self.expect(Tok::Dot, "`.`")?;
                            let p = self.proc_prefix()?;
                            Ok(Process::select(x, l, p))
                        }
                        Some(Tok::BraArrow) => {
                            self.bump();
                            self.expect(Tok::LBrace, "`{`")?;
                            let mut arms: Vec<(String, Process)> = Vec::new();
                            loop {
                                let span = self.span();
                                let label = self.ident("a branch label")?;
                                if arms.iter().any(|(l, _)| l == &label) {
                                    return Err(SyntaxError::new(
                                        span,
                                        format!("duplicate branch label {label}"),
                                    ));
                                }
                                self.expect(Tok::Colon, "`:`")?;
                                let p = self.proc()?;
                                arms.push((label, p));
                                if !self.eat(&Tok::Comma) {
                                    break;
                                }
                            }
                            self.expect(Tok::RBrace, "`}`")?;
                            Ok(Process::Branch { channel: x, arms })
                        }
                        _ => Err(SyntaxError::new(
                            self.span(),
                            "expected `<<` or `>>` after channel name",
                        )),
                    }
                }
            },
            _ => Err(SyntaxError::new(span, "expected a process")),
        }
    }

    // ---- contexts & judgments ----

    fn context(&mut self) -> Result<Context, SyntaxError> {
        if self.eat(&Tok::Dot) {
            return Ok(Context::empty());
        }
        let mut pairs: Vec<(Name, TypeExpr)> = Vec::new();
        loop {
            let span = self.span();
            let n = self.ident("a channel name")?;
            if pairs.iter().any(|(m, _)| m == &n) {
                return Err(SyntaxError::new(span, format!("duplicate name {n}")));
            }
            self.expect(Tok::Colon, "`:`")?;
            let t = self.ty()?;
            pairs.push((n, t));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(Context::from_pairs(pairs))
    }

    fn judgment(&mut self, system: System) -> Result<Judgment, SyntaxError> {
        let start = self.span();
        let j = match system {
            System::Ull | System::Ullm => {
                let gamma = self.context()?;
                self.expect(Tok::Semi, "`;`")?;
                let delta = self.context()?;
                self.expect(Tok::Turnstile, "`|-`")?;
                let process = self.proc()?;
                self.expect(Tok::DoubleColon, "`::`")?;
                let lambda = self.context()?;
                Judgment::Ull {
                    gamma,
                    delta,
                    process,
                    lambda,
                }
            }
            System::Ill => {
                let gamma = self.context()?;
                self.expect(Tok::Semi, "`;`")?;
                let delta = self.context()?;
                self.expect(Tok::TurnstileI, "`|-i`")?;
                let process = self.proc()?;
                self.expect(Tok::DoubleColon, "`::`")?;
                let right = self.context()?;
                if right.len() != 1 {
                    return Err(SyntaxError::new(
                        start,
                        "the right region of an |-i judgment must be a single assignment",
                    ));
                }
                let (right_name, right_type) = right.iter().next().unwrap().clone();
                Judgment::Ill {
                    gamma,
                    delta,
                    process,
                    right_name,
                    right_type,
                }
            }
            System::Cll => {
                let process = self.proc()?;
                self.expect(Tok::TurnstileC, "`|-c`")?;
                let gamma = self.context()?;
                self.expect(Tok::Semi, "`;`")?;
                let delta = self.context()?;
                Judgment::Cll {
                    process,
                    gamma,
                    delta,
                }
            }
        };
        j.well_formed()
            .map_err(|m| SyntaxError::new(start, m))?;
        Ok(j)
    }
}

/// Parse a session type from its surface syntax.
pub fn parse_type(input: &str) -> Result<TypeExpr, SyntaxError> {
    let mut p = Parser::new(input)?;
    let t = p.ty()?;
    p.expect_end()?;
    Ok(t)
}

/// Parse a process term.
pub fn parse_process(input: &str) -> Result<Process, SyntaxError> {
    let mut p = Parser::new(input)?;
    let t = p.proc()?;
    p.expect_end()?;
    Ok(t)
}

/// Parse a judgment in the sequent shape of `system`.
pub fn parse_judgment(input: &str, system: System) -> Result<Judgment, SyntaxError> {
    let mut p = Parser::new(input)?;
    let j = p.judgment(system)?;
    p.expect_end()?;
    Ok(j)
}
