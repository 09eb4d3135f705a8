//! Checkers for identities of Rota-Baxter type, `[x]*[y] - [B(x, y)]`, and
//! of differential type, `[x*y] - N(x, y)`.

use num_traits::{One, Zero};
use serde::Serialize;

use rayon::prelude::*;

use super::{normal_form, Reducer, RuleSet};
use crate::error::{Error, Result};
use crate::opi::Opi;
use crate::orders::OrderSpec;
use crate::poly::OPoly;
use crate::terms::{words_within, Alphabet, Assignment, Bounds, Factor, Letter, Render, Word};

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeReport {
    pub kind: String,
    pub candidate: String,
    pub bounds: Bounds,
    pub conditions: Vec<Condition>,
    pub notes: Vec<String>,
}

impl TypeReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{} check for {} at bounds {}\n",
            self.kind, self.candidate, self.bounds
        );
        for c in &self.conditions {
            out.push_str(&format!(
                "  ({}) {}: {}\n",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.detail
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(if self.passed() {
            "result: PASS\n"
        } else {
            "result: FAIL\n"
        });
        out
    }
}

fn xy_of(opi: &Opi) -> Result<(Word, Word)> {
    if opi.arity() != 2 {
        return Err(Error::Shape(format!(
            "`{}` must have exactly two variables",
            opi.name()
        )));
    }
    Ok((Word::letter(Letter(0)), Word::letter(Letter(1))))
}

/// Splits `[x]*[y] - [B(x, y)]` into `B`.
pub fn rb_candidate(opi: &Opi) -> Result<OPoly> {
    let (x, y) = xy_of(opi)?;
    let head = x.bracket().mul(&y.bracket());
    if !opi.body().coeff(&head).is_one() {
        return Err(Error::Shape(format!(
            "`{}` is not of the form [x]*[y] - [B(x, y)]",
            opi.name()
        )));
    }
    let mut b = OPoly::zero();
    for (w, c) in opi.body().terms() {
        if *w == head {
            continue;
        }
        match w.factors() {
            [Factor::Bracket(inner)] => b.add_term(-c.clone(), inner.clone()),
            _ => {
                return Err(Error::Shape(format!(
                    "`{}`: monomial {} is not bracketed",
                    opi.name(),
                    w.to_text(opi.vars())
                )))
            }
        }
    }
    Ok(b)
}

/// Splits `[x*y] - N(x, y)` into `N`.
pub fn diff_candidate(opi: &Opi) -> Result<OPoly> {
    let (x, y) = xy_of(opi)?;
    let head = x.mul(&y).bracket();
    if !opi.body().coeff(&head).is_one() {
        return Err(Error::Shape(format!(
            "`{}` is not of the form [x*y] - N(x, y)",
            opi.name()
        )));
    }
    Ok(OPoly::word(head) - opi.body().clone())
}

fn linearity(vars: &Alphabet, p: &OPoly, label: &str) -> (Condition, Option<Opi>) {
    if p.is_zero() {
        return (
            Condition {
                name: "a".into(),
                passed: true,
                detail: format!("{label} = 0"),
            },
            None,
        );
    }
    match Opi::new(label, vars.clone(), p.clone()) {
        Ok(o) => (
            Condition {
                name: "a".into(),
                passed: true,
                detail: format!("{label} is linear in each variable"),
            },
            Some(o),
        ),
        Err(e) => (
            Condition {
                name: "a".into(),
                passed: false,
                detail: e.to_string(),
            },
            None,
        ),
    }
}

/// First bracketed factor in `w`, at any depth, satisfying `bad`.
fn find_factor_run(w: &Word, bad: &dyn Fn(&[Factor]) -> bool) -> bool {
    if bad(w.factors()) {
        return true;
    }
    w.factors().iter().any(|f| match f {
        Factor::Bracket(inner) => find_factor_run(inner, bad),
        Factor::Letter(_) => false,
    })
}

fn is_nonunit_bracket(f: &Factor) -> bool {
    matches!(f, Factor::Bracket(w) if !w.is_unit())
}

fn nonempty_words(alphabet: &Alphabet, bounds: Bounds) -> Vec<Word> {
    let letters: Vec<Letter> = alphabet.letters().collect();
    words_within(&letters, bounds)
        .into_iter()
        .filter(|w| !w.is_unit())
        .collect()
}

/// Reduces `expr(u, v, w)` for every triple of `words`, in parallel over `u`
/// with one reducer per worker. Returns the number of triples checked and at
/// most eight failures, in enumeration order.
fn triple_check(
    words: &[Word],
    alphabet: &Alphabet,
    order: &OrderSpec,
    rules: &RuleSet,
    fuel: usize,
    expr: impl Fn(usize, usize, usize) -> Result<OPoly> + Sync,
) -> Result<(usize, Vec<String>)> {
    const MAX_FAILURES: usize = 8;
    let n = words.len();
    let per_u: Vec<Result<(usize, Vec<String>)>> = (0..n)
        .into_par_iter()
        .map_init(
            || Reducer::new(rules, 0),
            |reducer, iu| {
                reducer.refuel(fuel.saturating_mul((n * n).max(1)));
                let mut checked = 0;
                let mut failures = Vec::new();
                for iv in 0..n {
                    for iw in 0..n {
                        checked += 1;
                        match reducer.nf(&expr(iu, iv, iw)?) {
                            Err(e) => {
                                failures.push(e.to_string());
                                return Ok((checked, failures));
                            }
                            Ok(nf) if !nf.is_zero() => {
                                failures.push(format!(
                                    "u={}, v={}, w={}: residue {}",
                                    words[iu].to_text(alphabet),
                                    words[iv].to_text(alphabet),
                                    words[iw].to_text(alphabet),
                                    nf.to_text_ordered(order, alphabet)
                                ));
                                if failures.len() >= MAX_FAILURES {
                                    return Ok((checked, failures));
                                }
                            }
                            Ok(_) => {}
                        }
                    }
                }
                Ok((checked, failures))
            },
        )
        .collect();
    let mut checked = 0;
    let mut failures = Vec::new();
    for r in per_u {
        let (c, f) = r?;
        checked += c;
        failures.extend(f);
    }
    failures.truncate(MAX_FAILURES);
    Ok((checked, failures))
}

/// Conditions (a) to (d) for `phi = [x]*[y] - [B(x, y)]`.
///
/// `b` is a polynomial over `vars`, which must have two letters. Termination
/// is tested by reducing every word within `bounds` with `fuel` steps each,
/// and associativity for all `u, v, w != 1` within `bounds`; a pass means
/// "verified at these bounds".
pub fn check_rb_type(
    vars: &Alphabet,
    b: &OPoly,
    alphabet: &Alphabet,
    order: OrderSpec,
    bounds: Bounds,
    fuel: usize,
) -> Result<TypeReport> {
    if vars.len() != 2 {
        return Err(Error::Shape(
            "a Rota-Baxter candidate has exactly two variables".into(),
        ));
    }
    let (x, y) = (Word::letter(Letter(0)), Word::letter(Letter(1)));
    let phi_body = OPoly::word(x.bracket().mul(&y.bracket())) - b.apply_bracket();
    let phi = Opi::new("phi", vars.clone(), phi_body.clone())?;
    let candidate = format!("B = {}", b.to_text_ordered(&order, vars));
    let mut conditions = Vec::new();
    let mut notes = Vec::new();

    let (a, b_opi) = linearity(vars, b, "B");
    conditions.push(a);

    let offending: Vec<String> = b
        .support()
        .filter(|w| {
            find_factor_run(w, &|fs| {
                fs.windows(2)
                    .any(|p| is_nonunit_bracket(&p[0]) && is_nonunit_bracket(&p[1]))
            })
        })
        .map(|w| w.to_text(vars))
        .collect();
    conditions.push(Condition {
        name: "b".into(),
        passed: offending.is_empty(),
        detail: if offending.is_empty() {
            "no monomial of B contains [u]*[v] with u, v != 1".into()
        } else {
            format!(
                "monomials of B containing [u]*[v]: {}",
                offending.join(", ")
            )
        },
    });

    let rules = RuleSet::new(alphabet.clone(), order).with_opis([phi.clone()]);
    let letters: Vec<Letter> = alphabet.letters().collect();
    let all = words_within(&letters, bounds);
    let mut stuck = Vec::new();
    for w in &all {
        let r = normal_form(&OPoly::word(w.clone()), &rules, fuel);
        if r.exhausted {
            stuck.push(w.to_text(alphabet));
        }
    }
    conditions.push(Condition {
        name: "c".into(),
        passed: stuck.is_empty(),
        detail: if stuck.is_empty() {
            format!(
                "{} words reduced to normal form within fuel {fuel} (verified at bounds)",
                all.len()
            )
        } else {
            format!("fuel {fuel} exhausted on {}", stuck.join(", "))
        },
    });
    let stable = crate::opi::check_lm_stability(&phi, &order, alphabet, bounds);
    if stable.passed() {
        notes.push(format!(
            "every instance within bounds leads with [u]*[v] under {}, so the rules are exactly [u]*[v] -> [B(u,v)]",
            order
        ));
    } else {
        notes.push(format!(
            "{} instances within bounds do not lead with [u]*[v] under {}; rules follow the actual leading monomials",
            stable.violations.len(),
            order
        ));
    }

    let words = nonempty_words(alphabet, bounds);
    let failures: Vec<String>;
    let checked: usize;
    if let Some(bo) = &b_opi {
        let pair = |p: &Word, q: &Word| {
            bo.instantiate_polys(&[OPoly::word(p.clone()), OPoly::word(q.clone())])
        };
        let products = words
            .iter()
            .map(|p| words.iter().map(|q| pair(p, q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        (checked, failures) =
            triple_check(&words, alphabet, &order, &rules, fuel, |iu, iv, iw| {
                let lhs = bo.instantiate_polys(&[
                    products[iu][iv].clone(),
                    OPoly::word(words[iw].clone()),
                ])?;
                let rhs = bo.instantiate_polys(&[
                    OPoly::word(words[iu].clone()),
                    products[iv][iw].clone(),
                ])?;
                Ok(lhs - rhs)
            })?;
    } else {
        checked = words.len().pow(3);
        failures = Vec::new();
    }
    conditions.push(Condition {
        name: "d".into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("B(B(u,v),w) - B(u,B(v,w)) reduces to 0 for {checked} triples")
        } else {
            failures.join("; ")
        },
    });

    Ok(TypeReport {
        kind: "Rota-Baxter type".into(),
        candidate,
        bounds,
        conditions,
        notes,
    })
}

/// Conditions (a) to (c) for `phi = [x*y] - N(x, y)`.
///
/// Rules are read from the instances of `phi` by their actual leading
/// monomials under `order`.
pub fn check_diff_type(
    vars: &Alphabet,
    n: &OPoly,
    alphabet: &Alphabet,
    order: OrderSpec,
    bounds: Bounds,
    fuel: usize,
) -> Result<TypeReport> {
    if vars.len() != 2 {
        return Err(Error::Shape(
            "a differential candidate has exactly two variables".into(),
        ));
    }
    let (x, y) = (Word::letter(Letter(0)), Word::letter(Letter(1)));
    let phi_body = OPoly::word(x.mul(&y).bracket()) - n.clone();
    let candidate = format!("N = {}", n.to_text_ordered(&order, vars));
    let mut conditions = Vec::new();
    let mut notes = Vec::new();

    let (a, n_opi) = linearity(vars, n, "N");
    conditions.push(a);

    let offending: Vec<String> = n
        .support()
        .filter(|w| {
            find_factor_run(w, &|fs| {
                fs.iter()
                    .any(|f| matches!(f, Factor::Bracket(inner) if inner.breadth() >= 2))
            })
        })
        .map(|w| w.to_text(vars))
        .collect();
    conditions.push(Condition {
        name: "b".into(),
        passed: offending.is_empty(),
        detail: if offending.is_empty() {
            "no monomial of N contains [u*v] with u, v != 1".into()
        } else {
            format!("monomials of N containing [u*v]: {}", offending.join(", "))
        },
    });

    let mut rules = RuleSet::new(alphabet.clone(), order);
    if !phi_body.is_zero() {
        rules.add_opi(Opi::new("phi", vars.clone(), phi_body)?);
    }
    if let Some(no) = &n_opi {
        let letters: Vec<Letter> = alphabet.letters().collect();
        let not_simple = words_within(&letters, bounds)
            .into_iter()
            .filter(|v| {
                let image = no.instantiate_unchecked(&Assignment(vec![Word::unit(), v.clone()]));
                !image.coeff(&v.clone().bracket()).is_zero()
            })
            .count();
        if not_simple > 0 {
            notes.push(format!(
                "for {not_simple} words v within bounds the literal rule [1*v] -> N(1, v) is not simple; \
                 rules follow the actual leading monomials of the instances"
            ));
        }
    }

    let words = nonempty_words(alphabet, bounds);
    let failures: Vec<String>;
    let checked: usize;
    if let Some(no) = &n_opi {
        (checked, failures) =
            triple_check(&words, alphabet, &order, &rules, fuel, |iu, iv, iw| {
                let (u, v, w) = (&words[iu], &words[iv], &words[iw]);
                let lhs = no.instantiate_polys(&[OPoly::word(u.mul(v)), OPoly::word(w.clone())])?;
                let rhs = no.instantiate_polys(&[OPoly::word(u.clone()), OPoly::word(v.mul(w))])?;
                Ok(lhs - rhs)
            })?;
    } else {
        checked = words.len().pow(3);
        failures = Vec::new();
    }
    conditions.push(Condition {
        name: "c".into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("N(uv,w) - N(u,vw) reduces to 0 for {checked} triples")
        } else {
            failures.join("; ")
        },
    });

    Ok(TypeReport {
        kind: "differential type".into(),
        candidate,
        bounds,
        conditions,
        notes,
    })
}
