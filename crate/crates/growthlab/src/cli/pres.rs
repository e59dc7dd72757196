//! The `.pres` presentation format and its word grammar.
//!
//! ```text
//! # two generators, one commutator relation
//! p 2
//! gens x:2 y
//! rels [x,y]
//! rels x^-1y x
//! ```
//!
//! `p` gives the coefficient prime (exactly once), `gens` lines declare
//! generator names with optional `:weight` suffixes, and each `rels` line
//! carries one relator. Inside a word, juxtaposition multiplies, `^`
//! raises to a nonzero integer power, `[u,v]` is the commutator
//! u v u^-1 v^-1, parentheses group, whitespace is insignificant, and `#`
//! comments run to end of line. Directives may come in any order; the
//! canonical serialization is p, gens, rels.

use crate::error::{Error, Result};
use crate::fplin::is_prime;
use crate::freealg::{Alphabet, DegreeMap, Word};
use crate::gscert::Presentation;

/// Expanding a grouped word like `(x y)^e` repeats factors; cap the
/// repeat count. Single generators keep their exponent symbolically.
const MAX_GROUP_EXPONENT: i64 = 4096;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

fn ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn ident_cont(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn is_ident(s: &str) -> bool {
    let b = s.as_bytes();
    !b.is_empty() && ident_start(b[0]) && b.iter().all(|&c| ident_cont(c))
}

/// Byte scanner over one word, tracking its position in the source file.
struct Scan<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    /// 1-based column of `bytes[0]` within the original line.
    col0: usize,
}

impl<'a> Scan<'a> {
    fn col(&self) -> usize {
        self.col0 + self.pos
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col(), msg)
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }
}

/// Parse a complete word; trailing garbage is an error.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    parse_word_at(text, 1, 1, alphabet)
}

pub(crate) fn parse_word_at(
    text: &str,
    line: usize,
    col0: usize,
    alphabet: &Alphabet,
) -> Result<Word> {
    let mut s = Scan { bytes: text.as_bytes(), pos: 0, line, col0 };
    let w = word(&mut s, alphabet)?;
    s.skip_ws();
    if let Some(c) = s.peek() {
        return Err(s.err(format!("unexpected `{}` after the word", c as char)));
    }
    Ok(w)
}

fn word(s: &mut Scan, a: &Alphabet) -> Result<Word> {
    let mut acc: Option<Word> = None;
    loop {
        s.skip_ws();
        match s.peek() {
            Some(c) if ident_start(c) || c == b'(' || c == b'[' => {
                let t = term(s, a)?;
                acc = Some(match acc {
                    None => t,
                    Some(w) => w.mul(&t),
                });
            }
            _ => break,
        }
    }
    acc.ok_or_else(|| s.err("expected a word: a generator name, `(`, or `[`"))
}

fn term(s: &mut Scan, a: &Alphabet) -> Result<Word> {
    let mut t = atom(s, a)?;
    loop {
        s.skip_ws();
        if s.peek() == Some(b'^') {
            s.bump();
            let at = (s.line, s.col());
            let e = exponent(s)?;
            t = word_pow(&t, e).ok_or_else(|| perr(at.0, at.1, "exponent too large"))?;
        } else {
            break;
        }
    }
    Ok(t)
}

fn atom(s: &mut Scan, a: &Alphabet) -> Result<Word> {
    s.skip_ws();
    match s.peek() {
        Some(b'(') => {
            s.bump();
            let w = word(s, a)?;
            s.expect(b')')?;
            Ok(w)
        }
        Some(b'[') => {
            s.bump();
            let u = word(s, a)?;
            s.expect(b',')?;
            let v = word(s, a)?;
            s.expect(b']')?;
            Ok(Word::commutator(&u, &v))
        }
        Some(c) if ident_start(c) => {
            let start = s.col();
            let mut name = String::new();
            while matches!(s.peek(), Some(c) if ident_cont(c)) {
                name.push(s.peek().unwrap() as char);
                s.bump();
            }
            match a.index_of(&name) {
                Some(i) => Ok(Word::gen(i)),
                None => Err(perr(s.line, start, format!("unknown generator `{name}`"))),
            }
        }
        Some(c) => Err(s.err(format!("unexpected `{}`; expected a generator, `(`, or `[`", c as char))),
        None => Err(s.err("expected a generator, `(`, or `[`")),
    }
}

fn exponent(s: &mut Scan) -> Result<i64> {
    s.skip_ws();
    let neg = if s.peek() == Some(b'-') {
        s.bump();
        s.skip_ws();
        true
    } else {
        false
    };
    let start = s.col();
    let mut digits = String::new();
    while matches!(s.peek(), Some(c) if c.is_ascii_digit()) {
        digits.push(s.peek().unwrap() as char);
        s.bump();
    }
    if digits.is_empty() {
        return Err(s.err("expected digits after `^`"));
    }
    let mag: i64 = digits.parse().map_err(|_| perr(s.line, start, "exponent overflows"))?;
    if mag == 0 {
        return Err(perr(s.line, start, "exponent must be nonzero"));
    }
    Ok(if neg { -mag } else { mag })
}

/// None when a grouped expansion would exceed [`MAX_GROUP_EXPONENT`].
fn word_pow(w: &Word, e: i64) -> Option<Word> {
    if let [(g, e0)] = w.factors() {
        return Some(Word::from_factors(vec![(*g, e0.checked_mul(e)?)]));
    }
    if e.unsigned_abs() > MAX_GROUP_EXPONENT as u64 {
        return None;
    }
    let base = if e < 0 { w.inverse() } else { w.clone() };
    let mut acc = Word::empty();
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&base);
    }
    Some(acc)
}

fn tokens(s: &str) -> Vec<(usize, &str)> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        if b[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < b.len() && !b[i].is_ascii_whitespace() {
            i += 1;
        }
        out.push((start, &s[start..i]));
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut prime: Option<(u64, usize)> = None;
    let mut names: Vec<String> = Vec::new();
    let mut weights: Vec<u32> = Vec::new();
    let mut rel_sites: Vec<(usize, usize, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let toks = tokens(content);
        let Some(&(off0, directive)) = toks.first() else { continue };
        match directive {
            "p" => {
                if let Some((_, at)) = prime {
                    return Err(perr(line_no, off0 + 1, format!("p was already given on line {at}")));
                }
                let Some(&(off, tok)) = toks.get(1) else {
                    return Err(perr(line_no, off0 + 2, "expected a prime after `p`"));
                };
                let v: u64 = tok
                    .parse()
                    .map_err(|_| perr(line_no, off + 1, format!("`{tok}` is not a number")))?;
                if !is_prime(v) {
                    return Err(perr(line_no, off + 1, format!("{v} is not prime")));
                }
                if let Some(&(off, tok)) = toks.get(2) {
                    return Err(perr(line_no, off + 1, format!("unexpected `{tok}` after the prime")));
                }
                prime = Some((v, line_no));
            }
            "gens" => {
                if toks.len() == 1 {
                    return Err(perr(line_no, off0 + directive.len() + 1, "expected generator names after `gens`"));
                }
                for &(off, tok) in &toks[1..] {
                    let (name, weight) = match tok.split_once(':') {
                        Some((n, ws)) => {
                            let wcol = off + n.len() + 2;
                            let w: u32 = ws
                                .parse()
                                .map_err(|_| perr(line_no, wcol, format!("`{ws}` is not a weight")))?;
                            if w < 1 {
                                return Err(perr(line_no, wcol, "generator weight must be at least 1"));
                            }
                            (n, w)
                        }
                        None => (tok, 1),
                    };
                    if !is_ident(name) {
                        return Err(perr(line_no, off + 1, format!("`{name}` is not a valid generator name")));
                    }
                    if names.iter().any(|n| n == name) {
                        return Err(perr(line_no, off + 1, format!("duplicate generator `{name}`")));
                    }
                    names.push(name.to_string());
                    weights.push(weight);
                }
            }
            "rels" => {
                let tail_off = off0 + directive.len();
                let tail = &content[tail_off..];
                let lead = tail.len() - tail.trim_start().len();
                let word_text = tail.trim();
                if word_text.is_empty() {
                    return Err(perr(line_no, tail_off + 1, "expected a relator word after `rels`"));
                }
                rel_sites.push((line_no, tail_off + lead + 1, word_text.to_string()));
            }
            other => {
                return Err(perr(
                    line_no,
                    off0 + 1,
                    format!("unknown directive `{other}`; expected `p`, `gens`, or `rels`"),
                ));
            }
        }
    }

    let Some((p, _)) = prime else {
        return Err(perr(1, 1, "missing `p <prime>` line"));
    };
    if names.is_empty() {
        return Err(perr(1, 1, "no generators declared"));
    }
    let alphabet = Alphabet::new(names, p)?;
    let deg = DegreeMap::new(weights)?;
    let mut rels = Vec::with_capacity(rel_sites.len());
    for (line, col0, text) in &rel_sites {
        let w = parse_word_at(text, *line, *col0, &alphabet)?;
        if w.reduced().factors().is_empty() {
            return Err(perr(*line, *col0, "relator freely reduces to the identity"));
        }
        rels.push(w);
    }
    Presentation::new(alphabet, rels, deg)
}

pub fn word_string(w: &Word, a: &Alphabet) -> String {
    w.factors()
        .iter()
        .map(|&(g, e)| {
            let name = &a.names()[g];
            if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Canonical text form; `parse_presentation` of the result rebuilds the
/// same presentation (relators are stored freely reduced).
pub fn serialize_presentation(pres: &Presentation) -> String {
    let a = pres.alphabet();
    let mut out = format!("p {}\n", a.p());
    out.push_str("gens");
    for (name, &w) in a.names().iter().zip(pres.default_weights().weights()) {
        out.push(' ');
        out.push_str(name);
        if w != 1 {
            out.push_str(&format!(":{w}"));
        }
    }
    out.push('\n');
    for r in pres.relators() {
        out.push_str(&format!("rels {}\n", word_string(r, a)));
    }
    out
}
