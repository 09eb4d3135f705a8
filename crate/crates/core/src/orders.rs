//! Monomial orders on bracketed words.
//!
//! Every preset compares by letter count, then bracket count, then (for
//! `db` and `dt`) top-level breadth, then lexicographically on the factor
//! sequences. In the lexicographic step a letter is below any bracket,
//! letters compare by alphabet rank, and two brackets compare their contents
//! recursively under the same preset. On bracket-free words all three
//! presets are the degree-lexicographic order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::terms::{words_within, Alphabet, Bounds, Context, Factor, Frame, Letter, Render, Word};

/// A total order on words.
pub trait MonomialOrder: Sync {
    fn compare(&self, u: &Word, v: &Word) -> Ordering;

    fn name(&self) -> String;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Degree-lexicographic: no breadth key.
    Deglex,
    /// Smaller breadth is smaller; makes `[x]*[y]` beat `[B(x,y)]`.
    Db,
    /// Larger breadth is smaller; makes `[x*y]` beat `x*[y]`.
    Dt,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Deglex => "deglex",
            Preset::Db => "db",
            Preset::Dt => "dt",
        })
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "deglex" | "dlex" => Ok(Preset::Deglex),
            "db" => Ok(Preset::Db),
            "dt" => Ok(Preset::Dt),
            other => Err(Error::Shape(format!(
                "unknown order preset `{other}` (expected deglex, db or dt)"
            ))),
        }
    }
}

/// A monomial-order preset. The base order on letters is the rank order of
/// the alphabet the words were built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrderSpec {
    pub preset: Preset,
}

impl OrderSpec {
    pub const fn new(preset: Preset) -> Self {
        OrderSpec { preset }
    }

    fn cmp_words(&self, u: &Word, v: &Word) -> Ordering {
        u.z_degree()
            .cmp(&v.z_degree())
            .then_with(|| u.op_degree().cmp(&v.op_degree()))
            .then_with(|| match self.preset {
                Preset::Deglex => Ordering::Equal,
                Preset::Db => u.breadth().cmp(&v.breadth()),
                Preset::Dt => v.breadth().cmp(&u.breadth()),
            })
            .then_with(|| self.cmp_lex(u.factors(), v.factors()))
    }

    fn cmp_lex(&self, a: &[Factor], b: &[Factor]) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            let ord = match (x, y) {
                (Factor::Letter(l), Factor::Letter(m)) => l.cmp(m),
                (Factor::Letter(_), Factor::Bracket(_)) => Ordering::Less,
                (Factor::Bracket(_), Factor::Letter(_)) => Ordering::Greater,
                (Factor::Bracket(p), Factor::Bracket(q)) => self.cmp_words(p, q),
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        a.len().cmp(&b.len())
    }
}

impl MonomialOrder for OrderSpec {
    fn compare(&self, u: &Word, v: &Word) -> Ordering {
        self.cmp_words(u, v)
    }

    fn name(&self) -> String {
        self.preset.to_string()
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.preset)
    }
}

/// Every context `q` with `q|_1 = w`: the hole inserted at each gap of each level.
pub fn insertion_contexts(w: &Word) -> Vec<Context> {
    let mut out = Vec::new();
    let mut frames = Vec::new();
    insert_at(w.factors(), &mut frames, &mut out);
    out
}

fn insert_at(level: &[Factor], frames: &mut Vec<Frame>, out: &mut Vec<Context>) {
    for i in 0..=level.len() {
        let mut fs = frames.clone();
        fs.push(Frame::new(level[..i].to_vec(), level[i..].to_vec()));
        out.push(Context::from_frames(fs));
        if let Some(Factor::Bracket(inner)) = level.get(i) {
            frames.push(Frame::new(level[..i].to_vec(), level[i + 1..].to_vec()));
            insert_at(inner.factors(), frames, out);
            frames.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderViolation {
    /// `antisymmetry`, `equality`, `transitivity`, `compatibility` or `descent`.
    pub kind: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderReport {
    pub order: String,
    pub bounds: Bounds,
    pub trials: usize,
    pub violations: Vec<OrderViolation>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_WITNESSES: usize = 16;

/// Randomized check of totality, antisymmetry, transitivity, compatibility
/// with contexts (`u < v` implies `q|_u < q|_v`), and the descent condition
/// `u <= q|_u` that any context-compatible well-order must satisfy.
pub fn check_order_axioms(
    order: &dyn MonomialOrder,
    alphabet: &Alphabet,
    bounds: Bounds,
    trials: usize,
    seed: u64,
) -> OrderReport {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let words = words_within(&letters, bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let show = |w: &Word| w.to_text(alphabet);
    let push = |v: OrderViolation, violations: &mut Vec<OrderViolation>| {
        if violations.len() < MAX_WITNESSES && !violations.contains(&v) {
            violations.push(v);
        }
    };
    for _ in 0..trials {
        let u = words.choose(&mut rng).expect("nonempty").clone();
        let v = words.choose(&mut rng).expect("nonempty").clone();
        let w = words.choose(&mut rng).expect("nonempty").clone();
        let host = words.choose(&mut rng).expect("nonempty");
        let holes = insertion_contexts(host);
        let q = &holes[rng.gen_range(0..holes.len())];

        let uv = order.compare(&u, &v);
        if uv != order.compare(&v, &u).reverse() {
            push(
                OrderViolation {
                    kind: "antisymmetry".into(),
                    witness: vec![show(&u), show(&v)],
                },
                &mut violations,
            );
        }
        if (uv == Ordering::Equal) != (u == v) {
            push(
                OrderViolation {
                    kind: "equality".into(),
                    witness: vec![show(&u), show(&v)],
                },
                &mut violations,
            );
        }
        let vw = order.compare(&v, &w);
        if uv.is_le() && vw.is_le() && order.compare(&u, &w).is_gt() {
            push(
                OrderViolation {
                    kind: "transitivity".into(),
                    witness: vec![show(&u), show(&v), show(&w)],
                },
                &mut violations,
            );
        }
        let (lo, hi) = if uv.is_lt() { (&u, &v) } else { (&v, &u) };
        if uv != Ordering::Equal && !order.compare(&q.plug(lo), &q.plug(hi)).is_lt() {
            push(
                OrderViolation {
                    kind: "compatibility".into(),
                    witness: vec![show(lo), show(hi), q.to_text(alphabet)],
                },
                &mut violations,
            );
        }
        let qu = q.plug(&u);
        if order.compare(&qu, &u).is_lt() {
            let q2 = q.plug(&qu);
            push(
                OrderViolation {
                    kind: "descent".into(),
                    witness: vec![show(&u), show(&qu), show(&q2)],
                },
                &mut violations,
            );
        }
    }
    OrderReport {
        order: order.name(),
        bounds,
        trials,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::words_exact;

    fn alpha() -> Alphabet {
        Alphabet::new(["z1", "z2"]).unwrap()
    }

    fn cmp(o: Preset, a: &str, b: &str) -> Ordering {
        let al = alpha();
        OrderSpec::new(o).compare(&al.parse_word(a).unwrap(), &al.parse_word(b).unwrap())
    }

    #[test]
    fn compare_examples() {
        assert_eq!(cmp(Preset::Deglex, "z1*z2", "z2*z1"), Ordering::Less);
        assert_eq!(cmp(Preset::Deglex, "1", "z1"), Ordering::Less);
        assert_eq!(cmp(Preset::Db, "[z1]*[z2]", "[z1*[z2]]"), Ordering::Greater);
        assert_eq!(cmp(Preset::Dt, "[z1*z2]", "z1*[z2]"), Ordering::Greater);
        assert_eq!(cmp(Preset::Dt, "[z1]", "z1"), Ordering::Greater);
        assert_eq!(cmp(Preset::Db, "[z1]", "z1"), Ordering::Greater);
    }

    /// Broken order: breadth descending with no degree guard.
    struct BreadthFirst;

    impl MonomialOrder for BreadthFirst {
        fn compare(&self, u: &Word, v: &Word) -> Ordering {
            v.breadth().cmp(&u.breadth()).then_with(|| u.cmp(v))
        }
        fn name(&self) -> String {
            "breadth-descending".into()
        }
    }

    #[test]
    fn axioms_hold_for_presets() {
        for preset in [Preset::Deglex, Preset::Db, Preset::Dt] {
            let r = check_order_axioms(
                &OrderSpec::new(preset),
                &alpha(),
                Bounds::new(3, 2),
                3000,
                7,
            );
            assert!(r.passed(), "{preset}: {:?}", r.violations);
        }
    }

    #[test]
    fn broken_order_is_caught() {
        let a = Alphabet::new(["z"]).unwrap();
        let r = check_order_axioms(&BreadthFirst, &a, Bounds::new(2, 2), 2000, 1);
        assert!(r.violations.iter().any(|v| v.kind == "descent"));
        // The canonical descending chain z > z*[1] > z*[1]*[1].
        let w = |s: &str| a.parse_word(s).unwrap();
        assert!(BreadthFirst.compare(&w("z*[1]"), &w("z")).is_lt());
        assert!(BreadthFirst.compare(&w("z*[1]*[1]"), &w("z*[1]")).is_lt());
    }

    #[test]
    fn exhaustive_total_order_on_small_sample() {
        let a = alpha();
        let letters: Vec<Letter> = a.letters().collect();
        let words = words_within(&letters, Bounds::new(2, 1));
        let sample: Vec<&Word> = words.iter().take(200).collect();
        for preset in [Preset::Db, Preset::Dt] {
            let o = OrderSpec::new(preset);
            let mut sorted = sample.clone();
            sorted.sort_by(|x, y| o.compare(x, y));
            for i in 0..sorted.len() {
                for j in 0..sorted.len() {
                    assert_eq!(o.compare(sorted[i], sorted[j]), i.cmp(&j));
                }
            }
        }
    }

    #[test]
    fn restriction_to_bracket_free_is_deglex() {
        let a = alpha();
        let letters: Vec<Letter> = a.letters().collect();
        let mut free = Vec::new();
        for d in 0..=4 {
            free.extend(words_exact(&letters, d, 0));
        }
        // Independent deg-lex: degree, then the first differing letter.
        let deglex = |u: &Word, v: &Word| {
            u.z_degree().cmp(&v.z_degree()).then_with(|| {
                let lu: Vec<Letter> = u
                    .factors()
                    .iter()
                    .map(|f| match f {
                        Factor::Letter(l) => *l,
                        Factor::Bracket(_) => unreachable!(),
                    })
                    .collect();
                let lv: Vec<Letter> = v
                    .factors()
                    .iter()
                    .map(|f| match f {
                        Factor::Letter(l) => *l,
                        Factor::Bracket(_) => unreachable!(),
                    })
                    .collect();
                lu.cmp(&lv)
            })
        };
        for preset in [Preset::Db, Preset::Dt, Preset::Deglex] {
            let o = OrderSpec::new(preset);
            for u in &free {
                for v in &free {
                    assert_eq!(o.compare(u, v), deglex(u, v));
                }
            }
        }
    }

    #[test]
    fn finitely_many_words_per_degree_pair() {
        let letters = [Letter(0), Letter(1)];
        let counts: Vec<usize> = (0..3)
            .flat_map(|z| (0..3).map(move |p| (z, p)))
            .map(|(z, p)| words_exact(&letters, z, p).len())
            .collect();
        assert!(counts.iter().all(|&c| c > 0));
        assert_eq!(counts[0], 1);
    }

    #[test]
    fn insertion_contexts_plug_back() {
        let a = alpha();
        let w = a.parse_word("z1*[z2*[1]]").unwrap();
        let qs = insertion_contexts(&w);
        assert_eq!(qs.len(), 3 + 2 + 2);
        for q in qs {
            assert_eq!(q.plug(&Word::unit()), w);
        }
    }
}
