//! Tokenizer for all concrete syntaxes: programs, formulas, proof scripts.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    LPar,
    RPar,
    LBrack,
    RBrack,
    Colon,
    Dot,
    Comma,
    Equals,
    Backslash,
    Bang,
    Question,
    Arrow,
    FatArrow,
    AndSym,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Num(n) => write!(f, "{n}"),
            Tok::LPar => write!(f, "("),
            Tok::RPar => write!(f, ")"),
            Tok::LBrack => write!(f, "["),
            Tok::RBrack => write!(f, "]"),
            Tok::Colon => write!(f, ":"),
            Tok::Dot => write!(f, "."),
            Tok::Comma => write!(f, ","),
            Tok::Equals => write!(f, "="),
            Tok::Backslash => write!(f, "\\"),
            Tok::Bang => write!(f, "!"),
            Tok::Question => write!(f, "?"),
            Tok::Arrow => write!(f, "->"),
            Tok::FatArrow => write!(f, "=>"),
            Tok::AndSym => write!(f, "/\\"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

#[derive(Clone, Debug)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = input.chars().peekable();

    macro_rules! push {
        ($tok:expr, $width:expr) => {{
            out.push(Token {
                tok: $tok,
                line,
                col,
            });
            col += $width;
        }};
    }

    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' => {
                chars.next();
                push!(Tok::LPar, 1);
            }
            ')' => {
                chars.next();
                push!(Tok::RPar, 1);
            }
            '[' => {
                chars.next();
                push!(Tok::LBrack, 1);
            }
            ']' => {
                chars.next();
                push!(Tok::RBrack, 1);
            }
            ':' => {
                chars.next();
                push!(Tok::Colon, 1);
            }
            '.' => {
                chars.next();
                push!(Tok::Dot, 1);
            }
            ',' => {
                chars.next();
                push!(Tok::Comma, 1);
            }
            '\\' => {
                chars.next();
                push!(Tok::Backslash, 1);
            }
            '!' => {
                chars.next();
                push!(Tok::Bang, 1);
            }
            '?' => {
                chars.next();
                push!(Tok::Question, 1);
            }
            '=' => {
                chars.next();
                if chars.peek() == Some(&'>') {
                    chars.next();
                    push!(Tok::FatArrow, 2);
                } else {
                    push!(Tok::Equals, 1);
                }
            }
            '-' => {
                chars.next();
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        push!(Tok::Arrow, 2);
                    }
                    Some('-') => {
                        for c in chars.by_ref() {
                            if c == '\n' {
                                line += 1;
                                col = 1;
                                break;
                            }
                        }
                    }
                    _ => {
                        return Err(ParseError {
                            line,
                            col,
                            message: "expected -> or -- comment after '-'".into(),
                        })
                    }
                }
            }
            '/' => {
                chars.next();
                if chars.peek() == Some(&'\\') {
                    chars.next();
                    push!(Tok::AndSym, 2);
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        message: "expected /\\ after '/'".into(),
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let mut n: u64 = 0;
                let mut width = 0;
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n = n * 10 + (d as u64 - '0' as u64);
                        chars.next();
                        width += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Num(n), width);
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                let mut width = 0;
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '\'' {
                        s.push(d);
                        chars.next();
                        width += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Ident(s), width);
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}
