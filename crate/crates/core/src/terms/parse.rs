//! Text grammar for words, contexts and polynomials.
//!
//! ```text
//! word    := "1" | factor ("*" factor)*
//! factor  := IDENT | "[" word "]"          ("@" is the hole of a context)
//! poly    := term (("+" | "-") term)*       (leading sign allowed)
//! term    := RATIONAL ["*" word] | word
//! ```
//! Whitespace is insignificant.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Alphabet, Context, Factor, Frame, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Star,
    Slash,
    Plus,
    Minus,
    Open,
    Close,
    Hole,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '[' => Tok::Open,
            ']' => Tok::Close,
            '@' => Tok::Hole,
            c if c.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Num(text[start..i].to_string()),
                    pos: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    pos: start,
                });
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push(Token { tok, pos: start });
        i += 1;
    }
    Ok(out)
}

/// A parsed word before identifiers are resolved.
#[derive(Clone, Debug)]
pub(crate) enum RawFactor {
    Ident(String),
    Bracket(Vec<RawFactor>),
    Hole(usize),
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn word(&mut self) -> Result<Vec<RawFactor>> {
        if let Some(Tok::Num(n)) = self.peek() {
            if n == "1" {
                self.at += 1;
                return Ok(Vec::new());
            }
            return self.err("expected `1`, an identifier or `[`");
        }
        let mut factors = vec![self.factor()?];
        while self.eat(&Tok::Star) {
            factors.push(self.factor()?);
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<RawFactor> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(RawFactor::Ident(name))
            }
            Some(Tok::Hole) => {
                self.at += 1;
                Ok(RawFactor::Hole(pos))
            }
            Some(Tok::Open) => {
                self.at += 1;
                let inner = self.word()?;
                if !self.eat(&Tok::Close) {
                    return self.err("expected `]`");
                }
                Ok(RawFactor::Bracket(inner))
            }
            _ => self.err("expected an identifier or `[`"),
        }
    }

    fn rational(&mut self) -> Result<Option<BigRational>> {
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Ok(None);
        };
        self.at += 1;
        let num: BigInt = n.parse().expect("lexer yields digits");
        let den: BigInt = if self.eat(&Tok::Slash) {
            match self.peek().cloned() {
                Some(Tok::Num(d)) => {
                    self.at += 1;
                    d.parse().expect("lexer yields digits")
                }
                _ => return self.err("expected a denominator"),
            }
        } else {
            BigInt::from(1)
        };
        if den == BigInt::from(0) {
            return self.err("zero denominator");
        }
        Ok(Some(BigRational::new(num, den)))
    }

    fn poly(&mut self) -> Result<Vec<(BigRational, Vec<RawFactor>)>> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = if self.eat(&Tok::Minus) {
                true
            } else if self.eat(&Tok::Plus) || first {
                false
            } else if self.at >= self.toks.len() {
                break;
            } else {
                return self.err("expected `+` or `-`");
            };
            first = false;
            let coeff = self.rational()?;
            let word = match coeff {
                Some(_) if self.eat(&Tok::Star) => self.word()?,
                Some(_) => Vec::new(),
                None => self.word()?,
            };
            let mut c = coeff.unwrap_or_else(|| BigRational::from_integer(1.into()));
            if negative {
                c = -c;
            }
            terms.push((c, word));
            if self.at >= self.toks.len() {
                break;
            }
        }
        Ok(terms)
    }
}

pub(crate) fn parse_raw_word(text: &str) -> Result<Vec<RawFactor>> {
    let mut p = Parser::new(text)?;
    let w = p.word()?;
    p.finish()?;
    Ok(w)
}

pub(crate) fn parse_raw_poly(text: &str) -> Result<Vec<(BigRational, Vec<RawFactor>)>> {
    let mut p = Parser::new(text)?;
    if p.toks.is_empty() {
        return p.err("empty polynomial");
    }
    let terms = p.poly()?;
    p.finish()?;
    Ok(terms)
}

pub(crate) fn resolve_word(raw: &[RawFactor], alphabet: &Alphabet) -> Result<Word> {
    let mut factors = Vec::with_capacity(raw.len());
    for f in raw {
        factors.push(match f {
            RawFactor::Ident(name) => Factor::Letter(
                alphabet
                    .letter(name)
                    .ok_or_else(|| Error::UnknownLetter(name.clone()))?,
            ),
            RawFactor::Bracket(inner) => Factor::Bracket(resolve_word(inner, alphabet)?),
            RawFactor::Hole(pos) => {
                return Err(Error::Syntax {
                    pos: *pos,
                    msg: "`@` is only allowed in a context".into(),
                })
            }
        });
    }
    Ok(Word::from_factors(factors))
}

fn count_holes(raw: &[RawFactor]) -> usize {
    raw.iter()
        .map(|f| match f {
            RawFactor::Hole(_) => 1,
            RawFactor::Bracket(inner) => count_holes(inner),
            RawFactor::Ident(..) => 0,
        })
        .sum()
}

fn resolve_context(raw: &[RawFactor], alphabet: &Alphabet, frames: &mut Vec<Frame>) -> Result<()> {
    let hole_at = raw
        .iter()
        .position(|f| match f {
            RawFactor::Hole(_) => true,
            RawFactor::Bracket(inner) => count_holes(inner) > 0,
            RawFactor::Ident(..) => false,
        })
        .expect("hole counted");
    let left = resolve_word(&raw[..hole_at], alphabet)?.into_factors();
    let right = resolve_word(&raw[hole_at + 1..], alphabet)?.into_factors();
    frames.push(Frame::new(left, right));
    if let RawFactor::Bracket(inner) = &raw[hole_at] {
        resolve_context(inner, alphabet, frames)?;
    }
    Ok(())
}

pub(crate) fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    resolve_word(&parse_raw_word(text)?, alphabet)
}

pub(crate) fn parse_context(text: &str, alphabet: &Alphabet) -> Result<Context> {
    let raw = parse_raw_word(text)?;
    match count_holes(&raw) {
        0 => Err(Error::MissingHole),
        1 => {
            let mut frames = Vec::new();
            resolve_context(&raw, alphabet, &mut frames)?;
            Ok(Context::from_frames(frames))
        }
        _ => Err(Error::MultipleHoles),
    }
}

/// Identifiers appearing anywhere in a word or polynomial text, in order of
/// first appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for t in lex(text)? {
        if let Tok::Ident(name) = t.tok {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_error_positions() {
        let a = Alphabet::new(["z"]).unwrap();
        match parse_word("z * ]", &a) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_word("z # z", &a) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn poly_terms() {
        let terms = parse_raw_poly("-2/5*[z] + 3 - z*z + 1").unwrap();
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[0].0, BigRational::new((-2).into(), 5.into()));
        assert_eq!(terms[1].1.len(), 0);
        assert_eq!(terms[2].0, BigRational::from_integer((-1).into()));
        assert!(parse_raw_poly("z z").is_err());
        assert!(parse_raw_poly("1/0").is_err());
        assert!(parse_raw_poly("").is_err());
    }

    #[test]
    fn identifier_scan() {
        assert_eq!(
            identifiers("z2*z1 - [z1*y]").unwrap(),
            vec!["z2", "z1", "y"]
        );
    }
}
