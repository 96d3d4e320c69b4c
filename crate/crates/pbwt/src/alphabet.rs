//! Symbol classes, integer codes and the two match-preserving encodings.
//!
//! Parameterized symbols get codes `1..=sigma_p`, static symbols get
//! `sigma_p+1..=sigma`, and the terminator `$` is always `sigma`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::serial::{Reader, Serial, Writer};

/// Static tokens are stored as `code + STATIC_OFFSET` so that every static
/// token compares above every integer token.
pub const STATIC_OFFSET: i64 = 1 << 48;

/// The terminator symbol.
pub const TERMINATOR: char = '$';

#[inline]
pub fn is_static_token(t: i64) -> bool {
    t >= STATIC_OFFSET
}

#[inline]
pub fn static_token(code: u32) -> i64 {
    STATIC_OFFSET + code as i64
}

/// Whether `encode_text` appends a terminator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Texts to be indexed: `$` is appended when absent and may only occur last.
    Index,
    /// Patterns and scanned texts: taken as is.
    Query,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetSpec {
    sigma_s: u32,
    sigma_p: u32,
    /// `symbols[c - 1]` is the external symbol of code `c`.
    symbols: Vec<char>,
    lookup: BTreeMap<char, u32>,
    /// `comp[c]` for p-codes, 0 when unpaired. Index 0 unused.
    comp: Vec<u32>,
}

impl AlphabetSpec {
    /// Builds a spec from static symbols, parameterized symbols and complement pairs.
    /// `$` is added to the static class if missing.
    pub fn new(statics: &[char], params: &[char], pairs: &[(char, char)]) -> Result<Self> {
        let mut st: Vec<char> = statics.iter().copied().filter(|&c| c != TERMINATOR).collect();
        let mut pa: Vec<char> = params.to_vec();
        st.sort_unstable();
        pa.sort_unstable();
        if pa.contains(&TERMINATOR) {
            return Err(Error::InvalidAlphabet("`$` must be static".into()));
        }
        let mut symbols = pa.clone();
        symbols.extend(st.iter().copied());
        symbols.push(TERMINATOR);
        let mut lookup = BTreeMap::new();
        for (i, &c) in symbols.iter().enumerate() {
            if c.is_whitespace() {
                return Err(Error::InvalidAlphabet("whitespace cannot be a symbol".into()));
            }
            if lookup.insert(c, i as u32 + 1).is_some() {
                return Err(Error::InvalidAlphabet(format!("symbol {c:?} listed twice")));
            }
        }
        let sigma_p = pa.len() as u32;
        let sigma_s = st.len() as u32 + 1;
        if sigma_p + sigma_s < 2 {
            return Err(Error::InvalidAlphabet("need at least two symbols including `$`".into()));
        }
        let mut comp = vec![0u32; sigma_p as usize + 1];
        for &(a, b) in pairs {
            if a == b {
                return Err(Error::SelfComplement(a));
            }
            let ca = *lookup
                .get(&a)
                .filter(|&&c| c <= sigma_p)
                .ok_or_else(|| Error::InvalidAlphabet(format!("pair member {a:?} is not parameterized")))?;
            let cb = *lookup
                .get(&b)
                .filter(|&&c| c <= sigma_p)
                .ok_or_else(|| Error::InvalidAlphabet(format!("pair member {b:?} is not parameterized")))?;
            for (x, y) in [(ca, cb), (cb, ca)] {
                let slot = &mut comp[x as usize];
                if *slot != 0 && *slot != y {
                    return Err(Error::InvalidAlphabet(format!(
                        "symbol {:?} is in two pairs",
                        symbols[x as usize - 1]
                    )));
                }
                *slot = y;
            }
        }
        Ok(AlphabetSpec { sigma_s, sigma_p, symbols, lookup, comp })
    }

    /// Parses the `static:` / `param:` / `pairs:` file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut statics = None;
        let mut params = None;
        let mut pairs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::InvalidAlphabet(format!("line without key: {line:?}")))?;
            let items: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "static" => statics = Some(single_chars(&items)?),
                "param" => params = Some(single_chars(&items)?),
                "pairs" => {
                    for it in items {
                        let mut cs = it.chars();
                        match (cs.next(), cs.next(), cs.next(), cs.next()) {
                            (Some(a), Some('-'), Some(b), None) => pairs.push((a, b)),
                            _ => return Err(Error::InvalidAlphabet(format!("bad pair {it:?}"))),
                        }
                    }
                }
                k => return Err(Error::InvalidAlphabet(format!("unknown key {k:?}"))),
            }
        }
        let statics = statics.ok_or_else(|| Error::InvalidAlphabet("missing `static:` line".into()))?;
        let params = params.ok_or_else(|| Error::InvalidAlphabet("missing `param:` line".into()))?;
        Self::new(&statics, &params, &pairs)
    }

    /// Renders the spec back into the file format.
    pub fn to_file_string(&self) -> String {
        let join = |r: std::ops::RangeInclusive<u32>| {
            r.map(|c| self.symbols[c as usize - 1].to_string()).collect::<Vec<_>>().join(" ")
        };
        let mut out = format!("static: {}\nparam: {}\n", join(self.sigma_p + 1..=self.sigma() - 1), join(1..=self.sigma_p));
        let pairs: Vec<String> = (1..=self.sigma_p)
            .filter(|&c| self.comp[c as usize] > c)
            .map(|c| format!("{}-{}", self.symbols[c as usize - 1], self.symbols[self.comp[c as usize] as usize - 1]))
            .collect();
        if !pairs.is_empty() {
            let _ = writeln!(out, "pairs: {}", pairs.join(" "));
        }
        out
    }

    pub fn sigma(&self) -> u32 {
        self.sigma_s + self.sigma_p
    }
    pub fn sigma_s(&self) -> u32 {
        self.sigma_s
    }
    pub fn sigma_p(&self) -> u32 {
        self.sigma_p
    }
    pub fn terminator(&self) -> u32 {
        self.sigma()
    }
    pub fn is_param(&self, code: u32) -> bool {
        code >= 1 && code <= self.sigma_p
    }
    pub fn code(&self, sym: char) -> Option<u32> {
        self.lookup.get(&sym).copied()
    }
    pub fn symbol(&self, code: u32) -> Option<char> {
        self.symbols.get((code as usize).wrapping_sub(1)).copied()
    }
    /// The complement of a p-code, if it is paired.
    pub fn complement(&self, code: u32) -> Option<u32> {
        match self.comp.get(code as usize) {
            Some(&c) if c != 0 => Some(c),
            _ => None,
        }
    }
    pub fn has_pairs(&self) -> bool {
        self.comp.iter().any(|&c| c != 0)
    }
    /// Complement table indexed by code (0 = unpaired), length `sigma_p + 1`.
    pub fn complement_table(&self) -> &[u32] {
        &self.comp
    }

    /// Maps raw symbols to codes. Whitespace is skipped; positions in errors are
    /// 1-based over the non-whitespace symbols.
    pub fn encode_text(&self, raw: &str, mode: Mode) -> Result<Vec<u32>> {
        let term = self.terminator();
        let mut out = Vec::with_capacity(raw.len() + 1);
        for ch in raw.chars().filter(|c| !c.is_whitespace()) {
            let pos = out.len() + 1;
            let c = self.code(ch).ok_or(Error::UnknownSymbol(pos))?;
            out.push(c);
        }
        if mode == Mode::Index {
            if out.last() != Some(&term) {
                out.push(term);
            }
            if let Some(p) = out[..out.len() - 1].iter().position(|&c| c == term) {
                return Err(Error::TerminatorMisplaced(p + 1));
            }
        }
        Ok(out)
    }

    /// Renders an encoded string: small integers as digits, larger or negative
    /// ones in parentheses, static tokens as their symbols.
    pub fn render(&self, enc: &Encoded) -> String {
        let mut s = String::new();
        for &t in enc.tokens() {
            if is_static_token(t) {
                s.push(self.symbol((t - STATIC_OFFSET) as u32).unwrap_or('?'));
            } else if (0..10).contains(&t) {
                let _ = write!(s, "{t}");
            } else {
                let _ = write!(s, "({t})");
            }
        }
        s
    }
}

fn single_chars(items: &[&str]) -> Result<Vec<char>> {
    items
        .iter()
        .map(|it| {
            let mut cs = it.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(Error::InvalidAlphabet(format!("symbol {it:?} is not a single character"))),
            }
        })
        .collect()
}

/// A prev- or compl-encoded string. Ordering is lexicographic with a proper
/// prefix sorting first, which is exactly the token order used throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Encoded {
    toks: Vec<i64>,
}

pub type PrevString = Encoded;
pub type ComplString = Encoded;

impl Encoded {
    pub fn from_tokens(toks: Vec<i64>) -> Self {
        Encoded { toks }
    }
    pub fn tokens(&self) -> &[i64] {
        &self.toks
    }
    pub fn len(&self) -> usize {
        self.toks.len()
    }
    pub fn is_empty(&self) -> bool {
        self.toks.is_empty()
    }
    pub fn zeros(&self) -> usize {
        self.toks.iter().filter(|&&t| t == 0).count()
    }
}

/// prev encoding: a p-code becomes the distance to its previous occurrence
/// (0 for a first occurrence), a static code is kept.
pub fn prev_encode(s: &[u32], sigma_p: u32) -> PrevString {
    let mut last = vec![usize::MAX; sigma_p as usize + 1];
    let toks = s
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c > sigma_p {
                return static_token(c);
            }
            let j = std::mem::replace(&mut last[c as usize], i);
            if j == usize::MAX {
                0
            } else {
                (i - j) as i64
            }
        })
        .collect();
    Encoded { toks }
}

/// compl encoding: like prev, but the nearer of the previous occurrence of the
/// symbol itself (positive distance) or of its complement (negative distance) wins.
pub fn compl_encode(s: &[u32], spec: &AlphabetSpec) -> ComplString {
    let sp = spec.sigma_p();
    let mut last = vec![usize::MAX; sp as usize + 1];
    let toks = s
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c > sp {
                return static_token(c);
            }
            let own = std::mem::replace(&mut last[c as usize], i);
            let other = spec.complement(c).map_or(usize::MAX, |d| last[d as usize]);
            match (own, other) {
                (usize::MAX, usize::MAX) => 0,
                (j, usize::MAX) => (i - j) as i64,
                (usize::MAX, j) => -((i - j) as i64),
                (a, b) if a > b => (i - a) as i64,
                (_, b) => -((i - b) as i64),
            }
        })
        .collect();
    Encoded { toks }
}

/// Total order on encodings: integers ascending, then static codes ascending.
pub fn prev_compare(a: &Encoded, b: &Encoded) -> Ordering {
    a.cmp(b)
}

impl Serial for AlphabetSpec {
    fn write(&self, w: &mut Writer) {
        let s = self.to_file_string();
        w.usize(s.len());
        w.bytes(s.as_bytes());
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let len = r.usize()?;
        let raw = r.bytes(len)?;
        let s = std::str::from_utf8(raw).map_err(|_| Error::Format("alphabet is not UTF-8".into()))?;
        AlphabetSpec::parse(s)
    }
}
