//! Bracketed words: the elements of the free operated monoid over an alphabet.
//!
//! A [`Word`] is a finite sequence of factors, each either a letter or a
//! bracketed word. The empty sequence is the unit `1`; `[1]` is a legal
//! factor distinct from `1`. Equality is structural.

mod context;
mod enumerate;
mod mixed;
pub(crate) mod parse;
mod pattern;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use context::{Context, Frame};
pub use enumerate::{words_exact, words_within};
pub use mixed::{normalize_mixed_word, MixedFactor, MonoidOracle};
pub use parse::identifiers;
pub(crate) use pattern::walk as pattern_walk;
pub use pattern::{schema_occurrences, Assignment, PFactor, Pattern};

use crate::error::{Error, Result};

/// A letter of the alphabet. The wrapped number is the letter's rank in the
/// alphabet's base order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

/// An ordered alphabet. Declaration order is the base order on letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut out = Alphabet {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for name in names {
            let name = name.as_ref().trim();
            if !is_ident(name) {
                return Err(Error::InvalidAlphabet(format!(
                    "`{name}` is not an identifier"
                )));
            }
            if out.index.contains_key(name) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{name}`")));
            }
            out.index.insert(name.to_string(), out.names.len() as u32);
            out.names.push(name.to_string());
        }
        Ok(out)
    }

    /// Alphabet ordered by name, for letter sets without a declared order.
    pub fn by_name<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut names: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        names.dedup();
        Self::new(names)
    }

    /// Parses a comma-separated list such as `z1,z2`.
    pub fn parse_list(text: &str) -> Result<Self> {
        Self::new(text.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.index.get(name).map(|&i| Letter(i))
    }

    pub fn name(&self, letter: Letter) -> Option<&str> {
        self.names.get(letter.0 as usize).map(String::as_str)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len() as u32).map(Letter)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Reorders the alphabet so that `order` lists the letters from smallest
    /// to largest. Every letter must appear exactly once.
    pub fn reordered(&self, order: &[&str]) -> Result<Self> {
        let reordered = Self::new(order.iter().copied())?;
        if reordered.len() != self.len() || self.names.iter().any(|n| reordered.letter(n).is_none())
        {
            return Err(Error::InvalidAlphabet(
                "base order must list every letter of the alphabet exactly once".into(),
            ));
        }
        Ok(reordered)
    }

    /// Checks that every letter of `word` belongs to this alphabet.
    pub fn check_word(&self, word: &Word) -> Result<()> {
        let mut bad = None;
        word.visit_letters(&mut |l| {
            if l.0 as usize >= self.names.len() && bad.is_none() {
                bad = Some(l);
            }
        });
        match bad {
            Some(l) => Err(Error::AlphabetMismatch(format!(
                "letter #{} outside an alphabet of {} letters",
                l.0,
                self.len()
            ))),
            None => Ok(()),
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse::parse_word(text, self)
    }

    pub fn parse_context(&self, text: &str) -> Result<Context> {
        parse::parse_context(text, self)
    }

    pub fn show<'a, T: Render + ?Sized>(&'a self, value: &'a T) -> Shown<'a, T> {
        Shown {
            value,
            alphabet: self,
        }
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Values that render to text given an alphabet.
pub trait Render {
    fn render(&self, alphabet: &Alphabet, out: &mut String);

    fn to_text(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        self.render(alphabet, &mut s);
        s
    }
}

/// Display adapter pairing a value with its alphabet.
pub struct Shown<'a, T: ?Sized> {
    value: &'a T,
    alphabet: &'a Alphabet,
}

impl<T: Render + ?Sized> fmt::Display for Shown<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value.to_text(self.alphabet))
    }
}

pub(crate) fn render_letter(letter: Letter, alphabet: &Alphabet, out: &mut String) {
    match alphabet.name(letter) {
        Some(n) => out.push_str(n),
        None => {
            out.push('?');
            out.push_str(&letter.0.to_string());
        }
    }
}

/// One factor of a bracketed word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Letter(Letter),
    Bracket(Word),
}

impl Factor {
    pub fn z_degree(&self) -> u32 {
        match self {
            Factor::Letter(_) => 1,
            Factor::Bracket(w) => w.z_degree(),
        }
    }

    pub fn op_degree(&self) -> u32 {
        match self {
            Factor::Letter(_) => 0,
            Factor::Bracket(w) => w.op_degree() + 1,
        }
    }

    fn depth(&self) -> u32 {
        match self {
            Factor::Letter(_) => 0,
            Factor::Bracket(w) => w.depth() + 1,
        }
    }
}

/// Structural measures of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Measures {
    /// Number of top-level factors.
    pub breadth: u32,
    /// Letter occurrences at all depths.
    pub z_degree: u32,
    /// Bracket count at all depths.
    pub op_degree: u32,
    /// Maximal bracket nesting.
    pub depth: u32,
}

/// Upper bounds on `(z_degree, op_degree)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Bounds {
    pub z_degree: u32,
    pub op_degree: u32,
}

impl Bounds {
    pub const fn new(z_degree: u32, op_degree: u32) -> Self {
        Bounds {
            z_degree,
            op_degree,
        }
    }

    pub fn admits(&self, w: &Word) -> bool {
        w.z_degree() <= self.z_degree && w.op_degree() <= self.op_degree
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.z_degree, self.op_degree)
    }
}

/// An element of the free operated monoid. Measures and a structural
/// fingerprint are cached at construction; they are functions of `factors`,
/// so the derived ordering remains structural.
#[derive(Clone)]
pub struct Word {
    factors: Arc<[Factor]>,
    z_degree: u32,
    op_degree: u32,
    depth: u32,
    fingerprint: u64,
}

const FP_BASE: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn factor_fingerprint(f: &Factor) -> u64 {
    match f {
        Factor::Letter(l) => mix(l.0 as u64 + 1),
        Factor::Bracket(w) => mix(w.fingerprint ^ 0x5bd1_e995_0000_0001),
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
            && (Arc::ptr_eq(&self.factors, &other.factors) || self.factors == other.factors)
    }
}

impl Eq for Word {}

/// A fast total order for map keys: fingerprint first. Use
/// [`Word::structural_cmp`] where the order is shown to a reader.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if Arc::ptr_eq(&self.factors, &other.factors) {
            return std::cmp::Ordering::Equal;
        }
        self.fingerprint
            .cmp(&other.fingerprint)
            .then_with(|| self.structural_cmp(other))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.fingerprint);
    }
}

impl Default for Word {
    fn default() -> Self {
        Word::unit()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match factor {
                Factor::Letter(l) => write!(f, "#{}", l.0)?,
                Factor::Bracket(w) => write!(f, "[{w:?}]")?,
            }
        }
        Ok(())
    }
}

impl Word {
    pub fn unit() -> Self {
        Word {
            factors: Arc::from([]),
            z_degree: 0,
            op_degree: 0,
            depth: 0,
            fingerprint: 0,
        }
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        let z_degree = factors.iter().map(Factor::z_degree).sum();
        let op_degree = factors.iter().map(Factor::op_degree).sum();
        let depth = factors.iter().map(Factor::depth).max().unwrap_or(0);
        let fingerprint = factors.iter().fold(0u64, |h, f| {
            h.wrapping_mul(FP_BASE).wrapping_add(factor_fingerprint(f))
        });
        Word {
            factors: factors.into(),
            z_degree,
            op_degree,
            depth,
            fingerprint,
        }
    }

    pub fn letter(l: Letter) -> Self {
        Word::from_factors(vec![Factor::Letter(l)])
    }

    /// The word `[self]`.
    pub fn bracket(self) -> Self {
        Word::from_factors(vec![Factor::Bracket(self)])
    }

    pub fn mul(&self, other: &Word) -> Word {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        factors.extend_from_slice(&self.factors);
        factors.extend_from_slice(&other.factors);
        let shift = FP_BASE.wrapping_pow(other.factors.len() as u32);
        Word {
            factors: factors.into(),
            z_degree: self.z_degree + other.z_degree,
            op_degree: self.op_degree + other.op_degree,
            depth: self.depth.max(other.depth),
            fingerprint: self
                .fingerprint
                .wrapping_mul(shift)
                .wrapping_add(other.fingerprint),
        }
    }

    /// Lexicographic on factor sequences; a letter is below any bracket.
    pub fn structural_cmp(&self, other: &Word) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        for (x, y) in self.factors.iter().zip(other.factors.iter()) {
            let ord = match (x, y) {
                (Factor::Letter(l), Factor::Letter(m)) => l.cmp(m),
                (Factor::Letter(_), Factor::Bracket(_)) => Ordering::Less,
                (Factor::Bracket(_), Factor::Letter(_)) => Ordering::Greater,
                (Factor::Bracket(p), Factor::Bracket(q)) => p.structural_cmp(q),
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.factors.len().cmp(&other.factors.len())
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn into_factors(self) -> Vec<Factor> {
        self.factors.to_vec()
    }

    pub fn breadth(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn z_degree(&self) -> u32 {
        self.z_degree
    }

    pub fn op_degree(&self) -> u32 {
        self.op_degree
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn measures(&self) -> Measures {
        Measures {
            breadth: self.breadth(),
            z_degree: self.z_degree,
            op_degree: self.op_degree,
            depth: self.depth,
        }
    }

    /// True when the word contains no brackets.
    pub fn is_bracket_free(&self) -> bool {
        self.op_degree == 0
    }

    pub fn visit_letters(&self, f: &mut impl FnMut(Letter)) {
        for factor in self.factors.iter() {
            match factor {
                Factor::Letter(l) => f(*l),
                Factor::Bracket(w) => w.visit_letters(f),
            }
        }
    }

    /// The bracket-free word obtained by deleting every bracket.
    pub fn erase_brackets(&self) -> Word {
        let mut letters = Vec::new();
        self.visit_letters(&mut |l| letters.push(Factor::Letter(l)));
        Word::from_factors(letters)
    }

    /// Replaces every letter by a word. Letters missing from `image` stay fixed.
    pub fn substitute_letters(&self, image: &dyn Fn(Letter) -> Option<Word>) -> Word {
        let mut factors = Vec::with_capacity(self.factors.len());
        for factor in self.factors.iter() {
            match factor {
                Factor::Letter(l) => match image(*l) {
                    Some(w) => factors.extend_from_slice(&w.factors),
                    None => factors.push(Factor::Letter(*l)),
                },
                Factor::Bracket(w) => factors.push(Factor::Bracket(w.substitute_letters(image))),
            }
        }
        Word::from_factors(factors)
    }

    /// Every subword occurrence of `u`, as the contexts `q` with `q|_u = self`.
    ///
    /// Enumeration is leftmost-outermost: by start position in the rendered
    /// text, an occurrence at an outer level before any occurrence inside the
    /// bracket starting at the same position.
    pub fn occurrences(&self, u: &Word) -> Result<Vec<Context>> {
        if u.is_unit() {
            return Err(Error::UnitPattern);
        }
        let mut out = Vec::new();
        let mut frames = Vec::new();
        collect_occurrences(&self.factors, u.factors(), &mut frames, &mut out);
        Ok(out)
    }

    pub fn contains(&self, u: &Word) -> bool {
        if u.is_unit() {
            return true;
        }
        contains_run(&self.factors, u.factors())
    }
}

fn contains_run(hay: &[Factor], needle: &[Factor]) -> bool {
    if hay.len() >= needle.len() && hay.windows(needle.len()).any(|w| w == needle) {
        return true;
    }
    hay.iter().any(|f| match f {
        Factor::Bracket(inner) => contains_run(inner.factors(), needle),
        Factor::Letter(_) => false,
    })
}

fn collect_occurrences(
    level: &[Factor],
    needle: &[Factor],
    frames: &mut Vec<Frame>,
    out: &mut Vec<Context>,
) {
    let k = needle.len();
    for i in 0..level.len() {
        if i + k <= level.len() && &level[i..i + k] == needle {
            let mut fs = frames.clone();
            fs.push(Frame::new(level[..i].to_vec(), level[i + k..].to_vec()));
            out.push(Context::from_frames(fs));
        }
        if let Factor::Bracket(inner) = &level[i] {
            frames.push(Frame::new(level[..i].to_vec(), level[i + 1..].to_vec()));
            collect_occurrences(inner.factors(), needle, frames, out);
            frames.pop();
        }
    }
}

impl Render for Word {
    fn render(&self, alphabet: &Alphabet, out: &mut String) {
        render_factors(&self.factors, alphabet, out);
    }
}

pub(crate) fn render_factors(factors: &[Factor], alphabet: &Alphabet, out: &mut String) {
    if factors.is_empty() {
        out.push('1');
        return;
    }
    for (i, factor) in factors.iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        render_factor(factor, alphabet, out);
    }
}

pub(crate) fn render_factor(factor: &Factor, alphabet: &Alphabet, out: &mut String) {
    match factor {
        Factor::Letter(l) => render_letter(*l, alphabet, out),
        Factor::Bracket(w) => {
            out.push('[');
            w.render(alphabet, out);
            out.push(']');
        }
    }
}
