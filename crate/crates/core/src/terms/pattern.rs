//! Multilinear schemas: words over variables and letters, matched against
//! subwords with variables ranging over all words (the unit included).

use super::parse::{parse_raw_word, RawFactor};
use super::{render_letter, Alphabet, Context, Factor, Frame, Letter, Render, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PFactor {
    Var(u32),
    Letter(Letter),
    Bracket(Vec<PFactor>),
}

/// A multilinear schema. Variables are numbered `0..arity` and each occurs
/// exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    factors: Vec<PFactor>,
    arity: u32,
}

/// Values bound to the variables of a schema, indexed by variable number.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(pub Vec<Word>);

impl Assignment {
    pub fn get(&self, var: u32) -> Option<&Word> {
        self.0.get(var as usize)
    }

    pub fn render(&self, vars: &Alphabet, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let name = vars.name(Letter(i as u32)).unwrap_or("?");
                format!("{name}={}", w.to_text(alphabet))
            })
            .collect();
        parts.join(", ")
    }
}

impl Pattern {
    /// Builds a schema and checks multilinearity.
    pub fn new(factors: Vec<PFactor>) -> Result<Self> {
        let mut seen = Vec::new();
        collect_vars(&factors, &mut seen);
        let mut sorted = seen.clone();
        sorted.sort_unstable();
        let arity = sorted.len() as u32;
        if sorted.iter().enumerate().any(|(i, &v)| v != i as u32) {
            return Err(Error::NonMultilinear(
                "each schema variable must occur exactly once, numbered from 0".into(),
            ));
        }
        Ok(Pattern { factors, arity })
    }

    /// The schema of a word over a variable alphabet: every letter becomes
    /// the variable of the same index.
    pub fn from_variable_word(word: &Word) -> Result<Self> {
        Self::new(to_pfactors(word))
    }

    /// Parses a schema. Identifiers found in `vars` are variables (numbered by
    /// their position there); other identifiers must be letters of `alphabet`.
    pub fn parse(text: &str, vars: &Alphabet, alphabet: &Alphabet) -> Result<Self> {
        let raw = parse_raw_word(text)?;
        Self::new(resolve(&raw, vars, alphabet)?)
    }

    pub fn factors(&self) -> &[PFactor] {
        &self.factors
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// The word obtained by substituting each variable.
    pub fn instantiate(&self, sigma: &Assignment) -> Word {
        Word::from_factors(instantiate_factors(&self.factors, sigma))
    }

    /// A necessary condition for `match_run` to succeed, read off the top
    /// level only.
    pub fn may_match_run(&self, run: &[Factor]) -> bool {
        let fixed = self
            .factors
            .iter()
            .filter(|f| !matches!(f, PFactor::Var(_)))
            .count();
        if fixed == self.factors.len() {
            run.len() == fixed
                && self.factors.iter().zip(run).all(|(p, f)| match (p, f) {
                    (PFactor::Letter(l), Factor::Letter(m)) => l == m,
                    (PFactor::Bracket(_), Factor::Bracket(_)) => true,
                    _ => false,
                })
        } else {
            run.len() >= fixed
        }
    }

    /// All assignments under which this schema equals the factor run `run`
    /// exactly. Shorter bindings for earlier variables come first.
    pub fn match_run(&self, run: &[Factor]) -> Vec<Assignment> {
        let mut out = Vec::new();
        let mut binding = vec![None; self.arity as usize];
        match_seq(&self.factors, run, &mut binding, &mut |b| {
            out.push(Assignment(
                b.iter().map(|w| w.clone().expect("all bound")).collect(),
            ));
        });
        out
    }

    pub fn render_with(&self, vars: &Alphabet, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        render_pfactors(&self.factors, vars, alphabet, &mut out);
        out
    }
}

fn to_pfactors(word: &Word) -> Vec<PFactor> {
    word.factors()
        .iter()
        .map(|f| match f {
            Factor::Letter(l) => PFactor::Var(l.0),
            Factor::Bracket(inner) => PFactor::Bracket(to_pfactors(inner)),
        })
        .collect()
}

fn collect_vars(factors: &[PFactor], out: &mut Vec<u32>) {
    for f in factors {
        match f {
            PFactor::Var(v) => out.push(*v),
            PFactor::Bracket(p) => collect_vars(p, out),
            PFactor::Letter(_) => {}
        }
    }
}

fn resolve(raw: &[RawFactor], vars: &Alphabet, alphabet: &Alphabet) -> Result<Vec<PFactor>> {
    raw.iter()
        .map(|f| match f {
            RawFactor::Ident(name) => {
                if let Some(v) = vars.letter(name) {
                    Ok(PFactor::Var(v.0))
                } else {
                    alphabet
                        .letter(name)
                        .map(PFactor::Letter)
                        .ok_or_else(|| Error::UnknownLetter(name.clone()))
                }
            }
            RawFactor::Bracket(inner) => Ok(PFactor::Bracket(resolve(inner, vars, alphabet)?)),
            RawFactor::Hole(pos) => Err(Error::Syntax {
                pos: *pos,
                msg: "`@` is not allowed in a schema".into(),
            }),
        })
        .collect()
}

fn instantiate_factors(factors: &[PFactor], sigma: &Assignment) -> Vec<Factor> {
    let mut out = Vec::new();
    for f in factors {
        match f {
            PFactor::Var(v) => out.extend_from_slice(sigma.0[*v as usize].factors()),
            PFactor::Letter(l) => out.push(Factor::Letter(*l)),
            PFactor::Bracket(p) => out.push(Factor::Bracket(Word::from_factors(
                instantiate_factors(p, sigma),
            ))),
        }
    }
    out
}

fn match_seq(
    pat: &[PFactor],
    run: &[Factor],
    binding: &mut Vec<Option<Word>>,
    emit: &mut dyn FnMut(&[Option<Word>]),
) {
    let Some((head, rest)) = pat.split_first() else {
        if run.is_empty() {
            emit(binding);
        }
        return;
    };
    match head {
        PFactor::Var(v) => {
            // Remaining pattern factors that are not variables each consume one factor.
            let needed = rest
                .iter()
                .filter(|f| !matches!(f, PFactor::Var(_)))
                .count();
            if run.len() < needed {
                return;
            }
            for k in 0..=run.len() - needed {
                binding[*v as usize] = Some(Word::from_factors(run[..k].to_vec()));
                match_seq(rest, &run[k..], binding, emit);
            }
            binding[*v as usize] = None;
        }
        PFactor::Letter(l) => {
            if let Some((Factor::Letter(m), tail)) = run.split_first() {
                if m == l {
                    match_seq(rest, tail, binding, emit);
                }
            }
        }
        PFactor::Bracket(inner) => {
            if let Some((Factor::Bracket(w), tail)) = run.split_first() {
                let mut inner_matches = Vec::new();
                match_seq(inner, w.factors(), binding, &mut |b| {
                    inner_matches.push(b.to_vec())
                });
                let saved = binding.clone();
                for b in inner_matches {
                    *binding = b;
                    match_seq(rest, tail, binding, emit);
                }
                *binding = saved;
            }
        }
    }
}

/// Every pair `(q, sigma)` with `q|_{schema sigma} = w`, leftmost-outermost.
///
/// Matches whose instance is the unit word are not enumerated: the unit
/// occurs everywhere.
pub fn schema_occurrences(w: &Word, schema: &Pattern) -> Vec<(Context, Assignment)> {
    let mut out = Vec::new();
    let mut frames = Vec::new();
    walk(w.factors(), &mut frames, &mut |frames, level, i, j| {
        for sigma in schema.match_run(&level[i..j]) {
            let mut fs = frames.to_vec();
            fs.push(Frame::new(level[..i].to_vec(), level[j..].to_vec()));
            out.push((Context::from_frames(fs), sigma));
        }
        false
    });
    out
}

/// Visits every non-empty factor run `level[i..j]` of every level of a word in
/// leftmost-outermost order: by start position, then by length, then the
/// interior of the bracket at that position. Stops early when `visit`
/// returns true, and reports whether it did.
pub(crate) fn walk(
    level: &[Factor],
    frames: &mut Vec<Frame>,
    visit: &mut dyn FnMut(&[Frame], &[Factor], usize, usize) -> bool,
) -> bool {
    for i in 0..level.len() {
        for j in i + 1..=level.len() {
            if visit(frames, level, i, j) {
                return true;
            }
        }
        if let Factor::Bracket(inner) = &level[i] {
            frames.push(Frame::new(level[..i].to_vec(), level[i + 1..].to_vec()));
            let stop = walk(inner.factors(), frames, visit);
            frames.pop();
            if stop {
                return true;
            }
        }
    }
    false
}

fn render_pfactors(factors: &[PFactor], vars: &Alphabet, alphabet: &Alphabet, out: &mut String) {
    if factors.is_empty() {
        out.push('1');
        return;
    }
    for (i, f) in factors.iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        match f {
            PFactor::Var(v) => render_letter(Letter(*v), vars, out),
            PFactor::Letter(l) => render_letter(*l, alphabet, out),
            PFactor::Bracket(p) => {
                out.push('[');
                render_pfactors(p, vars, alphabet, out);
                out.push(']');
            }
        }
    }
}
