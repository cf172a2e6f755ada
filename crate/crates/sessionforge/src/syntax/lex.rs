//! Tokenizer shared by the type, process and judgment parsers.

use std::fmt;

use super::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourcePos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub start: SourcePos,
    pub end: SourcePos,
}

impl SourceSpan {
    pub fn point(file: &str, pos: SourcePos) -> SourceSpan {
        SourceSpan {
            file: file.to_string(),
            start: pos,
            end: pos,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            if self.file.is_empty() { "<input>" } else { &self.file },
            self.start.line,
            self.start.col
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    // punctuation
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    DoubleColon,
    Semi,
    Dot,
    Bar,
    Star,
    Bang,
    Query,
    Plus,
    Amp,
    Lolli,     // -o
    SelArrow,  // <<
    BraArrow,  // >>
    Turnstile, // |-
    TurnstileI,
    TurnstileC,
    Zero,
    One,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub struct Lexer {
    pub tokens: Vec<Token>,
    pub eof: SourceSpan,
}

pub fn lex(input: &str, file: &str) -> Result<Lexer, SyntaxError> {
    let mut tokens = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    let pos = |line, col| SourcePos { line, col };
    while i < chars.len() {
        let c = chars[i];
        let start = pos(line, col);
        let mut adv = |n: usize, i: &mut usize, col: &mut u32| {
            *i += n;
            *col += n as u32;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => adv(1, &mut i, &mut col),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                tokens.push(Token {
                    tok: Tok::LParen,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            ')' => {
                tokens.push(Token {
                    tok: Tok::RParen,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '{' => {
                tokens.push(Token {
                    tok: Tok::LBrace,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '}' => {
                tokens.push(Token {
                    tok: Tok::RBrace,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            ',' => {
                tokens.push(Token {
                    tok: Tok::Comma,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            ';' => {
                tokens.push(Token {
                    tok: Tok::Semi,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '.' => {
                tokens.push(Token {
                    tok: Tok::Dot,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '*' => {
                tokens.push(Token {
                    tok: Tok::Star,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '!' => {
                tokens.push(Token {
                    tok: Tok::Bang,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '?' => {
                tokens.push(Token {
                    tok: Tok::Query,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '+' => {
                tokens.push(Token {
                    tok: Tok::Plus,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '&' => {
                tokens.push(Token {
                    tok: Tok::Amp,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            ':' => {
                if chars.get(i + 1) == Some(&':') {
                    tokens.push(Token {
                        tok: Tok::DoubleColon,
                        span: SourceSpan::point(file, start),
                    });
                    adv(2, &mut i, &mut col);
                } else {
                    tokens.push(Token {
                        tok: Tok::Colon,
                        span: SourceSpan::point(file, start),
                    });
                    adv(1, &mut i, &mut col);
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'o') {
                    tokens.push(Token {
                        tok: Tok::Lolli,
                        span: SourceSpan::point(file, start),
                    });
                    adv(2, &mut i, &mut col);
                } else {
                    return Err(SyntaxError::new(
                        SourceSpan::point(file, start),
                        "expected `-o`",
                    ));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'<') {
                    tokens.push(Token {
                        tok: Tok::SelArrow,
                        span: SourceSpan::point(file, start),
                    });
                    adv(2, &mut i, &mut col);
                } else {
                    return Err(SyntaxError::new(
                        SourceSpan::point(file, start),
                        "expected `<<`",
                    ));
                }
            }
            '>' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push(Token {
                        tok: Tok::BraArrow,
                        span: SourceSpan::point(file, start),
                    });
                    adv(2, &mut i, &mut col);
                } else {
                    return Err(SyntaxError::new(
                        SourceSpan::point(file, start),
                        "expected `>>`",
                    ));
                }
            }
            '|' => {
                if chars.get(i + 1) == Some(&'-') {
                    match chars.get(i + 2) {
                        Some('i') if !is_ident_char(chars.get(i + 3)) => {
                            tokens.push(Token {
                                tok: Tok::TurnstileI,
                                span: SourceSpan::point(file, start),
                            });
                            adv(3, &mut i, &mut col);
                        }
                        Some('c') if !is_ident_char(chars.get(i + 3)) => {
                            tokens.push(Token {
                                tok: Tok::TurnstileC,
                                span: SourceSpan::point(file, start),
                            });
                            adv(3, &mut i, &mut col);
                        }
                        _ => {
                            tokens.push(Token {
                                tok: Tok::Turnstile,
                                span: SourceSpan::point(file, start),
                            });
                            adv(2, &mut i, &mut col);
                        }
                    }
                } else {
                    tokens.push(Token {
                        tok: Tok::Bar,
                        span: SourceSpan::point(file, start),
                    });
                    adv(1, &mut i, &mut col);
                }
            }
            '0' => {
                tokens.push(Token {
                    tok: Tok::Zero,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            '1' => {
                tokens.push(Token {
                    tok: Tok::One,
                    span: SourceSpan::point(file, start),
                });
                adv(1, &mut i, &mut col);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while i < chars.len() && is_ident_char(Some(&chars[i])) {
                    name.push(chars[i]);
                    adv(1, &mut i, &mut col);
                }
                tokens.push(Token {
                    tok: Tok::Ident(name),
                    span: SourceSpan {
                        file: file.to_string(),
                        start,
                        end: pos(line, col),
                    },
                });
            }
            other => {
                return Err(SyntaxError::new(
                    SourceSpan::point(file, start),
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    Ok(Lexer {
        tokens,
        eof: SourceSpan::point(file, pos(line, col)),
    })
}

fn is_ident_char(c: Option<&char>) -> bool {
    matches!(c, Some(c) if c.is_ascii_alphanumeric() || *c == '_' || *c == '\'')
}
