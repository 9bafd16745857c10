use crate::error::{Error, Result, MAX_DIM};
use crate::subset::SubsetMask;

/// Generator letter of a coefficient literal such as `x{1,2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LitKind {
    M,
    X,
    W,
    Y,
    S,
}

impl LitKind {
    pub fn letter(self) -> char {
        match self {
            LitKind::M => 'm',
            LitKind::X => 'x',
            LitKind::W => 'w',
            LitKind::Y => 'y',
            LitKind::S => 's',
        }
    }

    fn from_letter(c: &str) -> Option<LitKind> {
        Some(match c {
            "m" => LitKind::M,
            "x" => LitKind::X,
            "w" => LitKind::W,
            "y" => LitKind::Y,
            "s" => LitKind::S,
            _ => return None,
        })
    }

    pub fn is_operator(self) -> bool {
        matches!(self, LitKind::Y | LitKind::S)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Literal(LitKind, SubsetMask),
    Tilde,
    Plus,
    Dot,
    LParen,
    RParen,
    Zero,
    One,
    Or,
    And,
    Not,
    Implies,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub offset: usize,
}

fn lex_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Lex {
        offset,
        message: message.into(),
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b'~' => Some(Tok::Tilde),
            b'+' => Some(Tok::Plus),
            b'.' => Some(Tok::Dot),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'|' => Some(Tok::Or),
            b'&' => Some(Tok::And),
            b'!' => Some(Tok::Not),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, offset: start });
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'-' {
            if bytes.get(i + 1) != Some(&b'>') {
                return Err(lex_err(start, "expected '->'"));
            }
            out.push(Token {
                tok: Tok::Implies,
                offset: start,
            });
            i += 2;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let tok = match &src[start..i] {
                "0" => Tok::Zero,
                "1" => Tok::One,
                other => return Err(lex_err(start, format!("numeral {other:?}: only 0 and 1 are constants"))),
            };
            out.push(Token { tok, offset: start });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            match LitKind::from_letter(word) {
                Some(kind) if bytes.get(i) == Some(&b'{') => {
                    let close = src[i..]
                        .find('}')
                        .map(|k| i + k)
                        .ok_or_else(|| lex_err(i, "unclosed '{'"))?;
                    let mask = parse_index_set(&src[i + 1..close], i + 1)?;
                    out.push(Token {
                        tok: Tok::Literal(kind, mask),
                        offset: start,
                    });
                    i = close + 1;
                }
                _ => out.push(Token {
                    tok: Tok::Ident(word.to_string()),
                    offset: start,
                }),
            }
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(lex_err(start, format!("illegal character {ch:?}")));
        }
    }
    Ok(out)
}

fn parse_index_set(body: &str, offset: usize) -> Result<SubsetMask> {
    let mut mask = 0u32;
    if body.trim().is_empty() {
        return Ok(SubsetMask::EMPTY);
    }
    for part in body.split(',') {
        let p = part.trim();
        let i: usize = p
            .parse()
            .map_err(|_| lex_err(offset, format!("bad index {p:?} in literal")))?;
        if i == 0 || i > MAX_DIM {
            return Err(lex_err(offset, format!("index {i} outside 1..={MAX_DIM}")));
        }
        mask |= 1 << (i - 1);
    }
    Ok(SubsetMask(mask))
}
