//! Generator words: sequences of `(name, exponent)` pairs with a small
//! grammar for transcribing relations literally.
//!
//! Grammar: whitespace-separated tokens `name` or `name^k` (`k` a signed
//! integer, negative = inverse), with `( ... )^k` grouping. Examples:
//! `"w16 S4 w16 S4 w16 S4"`, `"(w16 S4)^3"`, `"S8^-1 w256 S8"`.

use std::fmt;

use crate::{Error, Result};

const MAX_EXPANDED_LEN: usize = 100_000;

/// A word over named generators; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word(Vec<(String, i64)>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(name: &str) -> Self {
        Word(vec![(name.to_string(), 1)])
    }

    pub fn from_pairs(pairs: Vec<(&str, i64)>) -> Self {
        let mut w = Word::empty();
        for (name, e) in pairs {
            w.push(name, e);
        }
        w
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(n, e)| (n.as_str(), *e))
    }

    /// Appends `name^exp`, merging with a trailing factor of the same name.
    pub fn push(&mut self, name: &str, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == name {
                last.1 += exp;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((name.to_string(), exp));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for (name, e) in other.iter() {
            w.push(name, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::empty();
        for (name, e) in self.0.iter().rev() {
            w.push(name, -e);
        }
        w
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Parses the word grammar. `^0` factors vanish; unbalanced parens,
    /// bad exponents, and stray characters are reported as
    /// [`Error::WordParse`].
    pub fn parse(input: &str) -> Result<Word> {
        let chars: Vec<char> = input.chars().collect();
        let mut pos = 0usize;
        let word = parse_sequence(&chars, &mut pos, 0)?;
        skip_ws(&chars, &mut pos);
        if pos != chars.len() {
            return Err(Error::WordParse(format!(
                "unexpected character `{}` at offset {pos}",
                chars[pos]
            )));
        }
        Ok(word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, e) in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(D::Error::custom)
    }
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_sequence(chars: &[char], pos: &mut usize, depth: usize) -> Result<Word> {
    if depth > 32 {
        return Err(Error::WordParse("parentheses nested too deeply".into()));
    }
    let mut word = Word::empty();
    loop {
        skip_ws(chars, pos);
        match chars.get(*pos) {
            None => break,
            Some(')') => break,
            Some('(') => {
                *pos += 1;
                let inner = parse_sequence(chars, pos, depth + 1)?;
                skip_ws(chars, pos);
                if chars.get(*pos) != Some(&')') {
                    return Err(Error::WordParse("missing closing parenthesis".into()));
                }
                *pos += 1;
                let exp = parse_exponent(chars, pos)?;
                let expanded = inner.len().saturating_mul(exp.unsigned_abs() as usize);
                if word.len().saturating_add(expanded) > MAX_EXPANDED_LEN {
                    return Err(Error::WordParse("word too long".into()));
                }
                word = word.concat(&inner.pow(exp));
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = *pos;
                while *pos < chars.len()
                    && (chars[*pos].is_ascii_alphanumeric() || chars[*pos] == '_')
                {
                    *pos += 1;
                }
                let name: String = chars[start..*pos].iter().collect();
                let exp = parse_exponent(chars, pos)?;
                word.push(&name, exp);
                if word.len() > MAX_EXPANDED_LEN {
                    return Err(Error::WordParse("word too long".into()));
                }
            }
            Some(c) => {
                return Err(Error::WordParse(format!(
                    "unexpected character `{c}` at offset {pos}"
                )));
            }
        }
    }
    Ok(word)
}

fn parse_exponent(chars: &[char], pos: &mut usize) -> Result<i64> {
    if chars.get(*pos) != Some(&'^') {
        return Ok(1);
    }
    *pos += 1;
    let start = *pos;
    if chars.get(*pos) == Some(&'-') {
        *pos += 1;
    }
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let text: String = chars[start..*pos].iter().collect();
    text.parse::<i64>()
        .map_err(|_| Error::WordParse(format!("bad exponent `{text}`")))
}
