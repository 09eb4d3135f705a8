//! Operated polynomial identities: multilinear polynomials over a variable
//! alphabet, their instances over an alphabet `Z`, and the hypothesis
//! checkers used by the GS machinery.

pub mod catalog;

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orders::{MonomialOrder, Preset};
use crate::poly::{Coeff, OPoly};
use crate::terms::{
    words_within, Alphabet, Assignment, Bounds, Factor, Letter, Pattern, Render, Word,
};

/// A multilinear operated polynomial identity `phi(x1, ..., xn)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opi {
    name: String,
    vars: Alphabet,
    body: OPoly,
    terms: Vec<(Coeff, Pattern)>,
    shapes: Vec<Shape>,
}

/// Measures of a monomial that do not depend on the assignment: letter and
/// bracket counts outside the variables, and the top-level factors that are
/// not variables together with the top-level variables.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Shape {
    z: u32,
    op: u32,
    top_fixed: u32,
    top_vars: Vec<usize>,
}

impl Opi {
    /// Every monomial of `body` must contain each variable exactly once.
    pub fn new(name: impl Into<String>, vars: Alphabet, body: OPoly) -> Result<Self> {
        let name = name.into();
        if body.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut terms = Vec::with_capacity(body.len());
        for (w, c) in body.terms() {
            vars.check_word(w)?;
            let mut seen = vec![0u32; vars.len()];
            w.visit_letters(&mut |l| seen[l.0 as usize] += 1);
            if let Some(i) = seen.iter().position(|&n| n != 1) {
                return Err(Error::NonMultilinear(format!(
                    "monomial {} of `{name}` contains `{}` {} times",
                    w.to_text(&vars),
                    vars.names()[i],
                    seen[i]
                )));
            }
            terms.push((c.clone(), Pattern::from_variable_word(w)?));
        }
        let shapes = body
            .support()
            .map(|w| {
                let top_vars: Vec<usize> = w
                    .factors()
                    .iter()
                    .filter_map(|f| match f {
                        Factor::Letter(l) => Some(l.0 as usize),
                        Factor::Bracket(_) => None,
                    })
                    .collect();
                Shape {
                    z: w.z_degree() - vars.len() as u32,
                    op: w.op_degree(),
                    top_fixed: w.breadth() - top_vars.len() as u32,
                    top_vars,
                }
            })
            .collect();
        Ok(Opi {
            name,
            vars,
            body,
            terms,
            shapes,
        })
    }

    /// Parses `text` with the comma-separated variable list `vars`.
    pub fn parse(name: impl Into<String>, vars: &str, text: &str) -> Result<Self> {
        let vars = Alphabet::parse_list(vars)?;
        let body = OPoly::parse(text, &vars)?;
        Self::new(name, vars, body)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &Alphabet {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn body(&self) -> &OPoly {
        &self.body
    }

    /// True when monomial `i` under `sigma` cannot lead `phi(sigma)` under
    /// `preset`: some other monomial is larger in (letters, brackets,
    /// breadth) and no third monomial can cancel it, since it is alone with
    /// its measures. Decided from the measures of `sigma` alone.
    /// `surely_dominated` for every assignment, when no monomial has a
    /// variable at top level.
    pub(crate) fn always_dominated(&self, i: usize, preset: Preset) -> bool {
        self.shapes.iter().all(|s| s.top_vars.is_empty())
            && self.surely_dominated(i, &Assignment(Vec::new()), preset)
    }

    pub(crate) fn surely_dominated(&self, i: usize, sigma: &Assignment, preset: Preset) -> bool {
        let key = |s: &Shape| {
            let b = s.top_fixed as i64
                + s.top_vars
                    .iter()
                    .map(|&v| sigma.0[v].breadth() as i64)
                    .sum::<i64>();
            let b = match preset {
                Preset::Deglex => 0,
                Preset::Db => b,
                Preset::Dt => -b,
            };
            (s.z, s.op, b)
        };
        let ki = key(&self.shapes[i]);
        self.shapes.iter().enumerate().any(|(j, sj)| {
            let kj = key(sj);
            kj > ki
                && self
                    .shapes
                    .iter()
                    .enumerate()
                    .all(|(k, sk)| k == j || key(sk) != kj)
        })
    }

    /// The body's monomials as schemas, with their coefficients.
    pub fn patterns(&self) -> &[(Coeff, Pattern)] {
        &self.terms
    }

    /// The leading monomial of the body, as a word over the variables.
    pub fn leading_word(&self, order: &dyn MonomialOrder) -> Word {
        self.body.leading_word(order)
    }

    pub fn leading_pattern(&self, order: &dyn MonomialOrder) -> Pattern {
        Pattern::from_variable_word(&self.leading_word(order))
            .expect("body monomials are multilinear")
    }

    /// `phi(u1, ..., un)`.
    pub fn instantiate(&self, sigma: &Assignment) -> Result<OPoly> {
        if sigma.0.len() < self.arity() {
            return Err(Error::MissingVariable(
                self.vars.names()[sigma.0.len()].clone(),
            ));
        }
        if sigma.0.len() > self.arity() {
            return Err(Error::Shape(format!(
                "`{}` has {} variables, got {} values",
                self.name,
                self.arity(),
                sigma.0.len()
            )));
        }
        Ok(self.instantiate_unchecked(sigma))
    }

    pub(crate) fn instantiate_unchecked(&self, sigma: &Assignment) -> OPoly {
        let mut out = OPoly::zero();
        for (c, p) in &self.terms {
            out.add_term(c.clone(), p.instantiate(sigma));
        }
        out
    }

    /// The multilinear extension `phi(p1, ..., pn)` to polynomial arguments.
    pub fn instantiate_polys(&self, args: &[OPoly]) -> Result<OPoly> {
        if args.len() != self.arity() {
            return Err(Error::Shape(format!(
                "`{}` has {} variables, got {} arguments",
                self.name,
                self.arity(),
                args.len()
            )));
        }
        let args: Vec<Vec<(&Word, &Coeff)>> = args.iter().map(|p| p.terms().collect()).collect();
        let mut out = OPoly::zero();
        let mut words = Vec::with_capacity(args.len());
        for (c, pattern) in &self.terms {
            expand(pattern, c, &args, &mut words, &mut out);
        }
        Ok(out)
    }

    /// Instantiates from `name -> word` pairs.
    pub fn instantiate_named(&self, values: &[(&str, Word)]) -> Result<OPoly> {
        let mut sigma = Vec::with_capacity(self.arity());
        for name in self.vars.names() {
            match values.iter().find(|(n, _)| n == name) {
                Some((_, w)) => sigma.push(w.clone()),
                None => return Err(Error::MissingVariable(name.clone())),
            }
        }
        self.instantiate(&Assignment(sigma))
    }

    pub fn render(&self, order: &dyn MonomialOrder) -> String {
        self.body.to_text_ordered(order, &self.vars)
    }
}

fn expand(
    pattern: &Pattern,
    c: &Coeff,
    args: &[Vec<(&Word, &Coeff)>],
    words: &mut Vec<Word>,
    out: &mut OPoly,
) {
    if words.len() == args.len() {
        out.add_term(c.clone(), pattern.instantiate(&Assignment(words.clone())));
        return;
    }
    for (w, d) in &args[words.len()] {
        words.push((*w).clone());
        expand(pattern, &crate::poly::coeff_mul(c, d), args, words, out);
        words.pop();
    }
}

/// All assignments of `arity` words from `letters` whose measures sum to
/// within `bounds`. Enumerated lexicographically in the structural order of
/// `words_within`.
pub fn assignments_within(arity: usize, letters: &[Letter], bounds: Bounds) -> Vec<Assignment> {
    let words = words_within(letters, bounds);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(arity);
    extend_assignments(&words, arity, bounds, &mut current, &mut out);
    out
}

fn extend_assignments(
    words: &[Word],
    arity: usize,
    room: Bounds,
    current: &mut Vec<Word>,
    out: &mut Vec<Assignment>,
) {
    if current.len() == arity {
        out.push(Assignment(current.clone()));
        return;
    }
    for w in words {
        if room.admits(w) {
            current.push(w.clone());
            let rest = Bounds::new(room.z_degree - w.z_degree(), room.op_degree - w.op_degree());
            extend_assignments(words, arity, rest, current, out);
            current.pop();
        }
    }
}

/// One element of `S_Phi(Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    /// Index of the identity in the input list.
    pub opi: usize,
    pub sigma: Assignment,
    pub poly: OPoly,
    pub lead: Word,
}

/// Every nonzero instance `phi(u1, ..., un)` whose leading monomial lies
/// within `bounds`, each once up to a scalar, in a deterministic order.
pub fn s_phi_enumerate(
    opis: &[Opi],
    alphabet: &Alphabet,
    order: &dyn MonomialOrder,
    bounds: Bounds,
) -> Vec<Instance> {
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, opi) in opis.iter().enumerate() {
        for sigma in assignments_within(opi.arity(), &letters, bounds) {
            let poly = opi.instantiate_unchecked(&sigma);
            if poly.is_zero() {
                continue;
            }
            let lead = poly.leading_word(order);
            if !bounds.admits(&lead) {
                continue;
            }
            let monic = poly.monicize(order).expect("nonzero");
            if seen.insert(monic) {
                out.push(Instance {
                    opi: i,
                    sigma,
                    poly,
                    lead,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoSubwordReport {
    pub opi: String,
    pub leading: String,
    pub holds: bool,
    /// The offending product of variables and the context around it.
    pub witness: Option<String>,
}

/// Whether the leading monomial contains, at any depth, a product of two or
/// more variables.
pub fn check_lm_no_subword(opi: &Opi, order: &dyn MonomialOrder) -> NoSubwordReport {
    let lead = opi.leading_word(order);
    let mut witness = None;
    find_adjacent_letters(&lead, &mut Vec::new(), &mut witness, opi.vars());
    NoSubwordReport {
        opi: opi.name().to_string(),
        leading: lead.to_text(opi.vars()),
        holds: witness.is_none(),
        witness,
    }
}

fn find_adjacent_letters(
    w: &Word,
    path: &mut Vec<String>,
    out: &mut Option<String>,
    vars: &Alphabet,
) {
    if out.is_some() {
        return;
    }
    let fs = w.factors();
    for i in 0..fs.len() {
        if let (Factor::Letter(_), Some(Factor::Letter(_))) = (&fs[i], fs.get(i + 1)) {
            let mut j = i + 1;
            while matches!(fs.get(j + 1), Some(Factor::Letter(_))) {
                j += 1;
            }
            let sub = Word::from_factors(fs[i..=j].to_vec());
            let place = if path.is_empty() {
                "top level".to_string()
            } else {
                format!("inside {}", path.last().expect("nonempty"))
            };
            *out = Some(format!("{} {}", sub.to_text(vars), place));
            return;
        }
    }
    for f in fs {
        if let Factor::Bracket(inner) = f {
            path.push(format!("[{}]", inner.to_text(vars)));
            find_adjacent_letters(inner, path, out, vars);
            path.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityViolation {
    pub assignment: String,
    /// `phi-bar` with the assignment substituted.
    pub expected: String,
    /// The actual leading monomial of the instance.
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub opi: String,
    pub order: String,
    pub bounds: Bounds,
    pub checked: usize,
    pub zero_instances: usize,
    pub violations: Vec<StabilityViolation>,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every assignment within `bounds` (measures summed over the values):
/// the instance is zero or its leading monomial is `phi-bar` substituted.
pub fn check_lm_stability(
    opi: &Opi,
    order: &dyn MonomialOrder,
    alphabet: &Alphabet,
    bounds: Bounds,
) -> StabilityReport {
    let lead = opi.leading_pattern(order);
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut report = StabilityReport {
        opi: opi.name().to_string(),
        order: order.name(),
        bounds,
        checked: 0,
        zero_instances: 0,
        violations: Vec::new(),
    };
    for sigma in assignments_within(opi.arity(), &letters, bounds) {
        report.checked += 1;
        let poly = opi.instantiate_unchecked(&sigma);
        if poly.is_zero() {
            report.zero_instances += 1;
            continue;
        }
        let expected = lead.instantiate(&sigma);
        let actual = poly.leading_word(order);
        if actual != expected {
            report.violations.push(StabilityViolation {
                assignment: sigma.render(opi.vars(), alphabet),
                expected: expected.to_text(alphabet),
                actual: actual.to_text(alphabet),
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::{OrderSpec, Preset};

    fn z12() -> Alphabet {
        Alphabet::new(["z1", "z2"]).unwrap()
    }

    fn w(a: &Alphabet, s: &str) -> Word {
        a.parse_word(s).unwrap()
    }

    #[test]
    fn rejects_non_multilinear() {
        assert!(matches!(
            Opi::parse("bad", "x,y", "[x]*[x] - y"),
            Err(Error::NonMultilinear(_))
        ));
        assert!(matches!(
            Opi::parse("bad", "x,y", "[x]*[y] - x"),
            Err(Error::NonMultilinear(_))
        ));
        assert!(Opi::parse("ok", "x,y", "[x]*[y] - [x*y]").is_ok());
    }

    #[test]
    fn instantiate_examples() {
        let a = z12();
        let nij = catalog::parse("nijenhuis").unwrap().opis.remove(0);
        let got = nij
            .instantiate_named(&[("x", w(&a, "z1")), ("y", w(&a, "z2"))])
            .unwrap();
        let want = OPoly::parse("[z1]*[z2] - [[z1]*z2] - [z1*[z2]] + [[z1*z2]]", &a).unwrap();
        assert_eq!(got, want);

        let d = catalog::parse("diff:1?a=1,b=0,c=0").unwrap().opis.remove(0);
        let got = d
            .instantiate_named(&[("x", w(&a, "z1")), ("y", w(&a, "z2"))])
            .unwrap();
        assert_eq!(
            got,
            OPoly::parse("[z1*z2] - z1*[z2] - [z1]*z2", &a).unwrap()
        );

        let rb = catalog::parse("rb:6?lambda=3").unwrap().opis.remove(0);
        let got = rb
            .instantiate_named(&[("x", w(&a, "z1")), ("y", Word::unit())])
            .unwrap();
        assert_eq!(
            got,
            OPoly::parse("[z1]*[1] - [z1*[1]] - [[z1]] - 3*[z1]", &a).unwrap()
        );

        assert!(matches!(
            rb.instantiate_named(&[("x", w(&a, "z1"))]),
            Err(Error::MissingVariable(v)) if v == "y"
        ));
    }

    #[test]
    fn identity_instantiation_returns_body() {
        for id in ["rb:10?lambda=2", "diff:5?a=3", "averaging", "reynolds?n=3"] {
            for opi in catalog::parse(id).unwrap().opis {
                let sigma = Assignment(opi.vars().letters().map(Word::letter).collect());
                assert_eq!(&opi.instantiate(&sigma).unwrap(), opi.body());
            }
        }
    }

    #[test]
    fn all_units_erase_letters() {
        for id in ["rb:12?lambda=1", "nijenhuis", "reynolds?n=3"] {
            for opi in catalog::parse(id).unwrap().opis {
                let sigma = Assignment(vec![Word::unit(); opi.arity()]);
                let want = opi
                    .body()
                    .map_words(|m| m.substitute_letters(&|_| Some(Word::unit())));
                assert_eq!(opi.instantiate(&sigma).unwrap(), want);
            }
        }
    }

    #[test]
    fn s_phi_examples() {
        let z = Alphabet::new(["z"]).unwrap();
        let dt = OrderSpec::new(Preset::Dt);
        let e = catalog::parse("diffprime?c=1").unwrap();
        let got: Vec<OPoly> = s_phi_enumerate(&e.opis, &z, &dt, Bounds::new(1, 1))
            .into_iter()
            .map(|i| i.poly)
            .collect();
        assert!(got.contains(&OPoly::parse("[z] - z", &z).unwrap()));
        assert!(got.contains(&OPoly::parse("[1] - 1", &z).unwrap()));
        assert!(s_phi_enumerate(&[], &z, &dt, Bounds::new(3, 3)).is_empty());
    }

    #[test]
    fn s_phi_is_duplicate_free() {
        let a = z12();
        let e = catalog::parse("averaging").unwrap();
        let order = OrderSpec::new(e.order);
        let bounds = Bounds::new(2, 2);
        let inst = s_phi_enumerate(&e.opis, &a, &order, bounds);
        let mut monic: Vec<OPoly> = inst
            .iter()
            .map(|i| i.poly.monicize(&order).unwrap())
            .collect();
        let n = monic.len();
        monic.sort_by_key(|p| format!("{p:?}"));
        monic.dedup();
        assert_eq!(monic.len(), n);
        // The first two identities agree at x1 = x2 = 1, so the raw count is larger.
        let letters: Vec<Letter> = a.letters().collect();
        let raw = e
            .opis
            .iter()
            .flat_map(|o| {
                assignments_within(2, &letters, bounds)
                    .into_iter()
                    .map(move |s| o.instantiate(&s).unwrap())
            })
            .filter(|p| !p.is_zero() && bounds.admits(&p.leading_word(&order)))
            .count();
        assert!(n < raw);
    }

    #[test]
    fn averaging_leading_shapes() {
        let a = z12();
        let e = catalog::parse("averaging").unwrap();
        let order = OrderSpec::new(e.order);
        let shapes = [
            Pattern::parse("[[u]*v]", &Alphabet::parse_list("u,v").unwrap(), &a).unwrap(),
            Pattern::parse("[u*[v]]", &Alphabet::parse_list("u,v").unwrap(), &a).unwrap(),
            Pattern::parse("[[u]]*[v]", &Alphabet::parse_list("u,v").unwrap(), &a).unwrap(),
        ];
        let inst = s_phi_enumerate(&e.opis, &a, &order, Bounds::new(2, 3));
        assert!(!inst.is_empty());
        for i in inst {
            assert!(
                shapes
                    .iter()
                    .any(|s| !s.match_run(i.lead.factors()).is_empty()),
                "{}",
                i.lead.to_text(&a)
            );
        }
    }

    #[test]
    fn no_subword_examples() {
        let db = OrderSpec::new(Preset::Db);
        let dt = OrderSpec::new(Preset::Dt);
        let rb = catalog::parse("rb:6?lambda=1").unwrap().opis.remove(0);
        let r = check_lm_no_subword(&rb, &db);
        assert!(r.holds);
        assert_eq!(r.leading, "[x]*[y]");
        let d = catalog::parse("diff:1?a=1,b=0,c=0").unwrap().opis.remove(0);
        let r = check_lm_no_subword(&d, &dt);
        assert!(!r.holds);
        assert_eq!(r.witness.as_deref(), Some("x*y inside [x*y]"));
        let p = catalog::parse("diffprime?c=1").unwrap().opis.remove(0);
        assert!(check_lm_no_subword(&p, &dt).holds);
    }

    #[test]
    fn stability_examples() {
        let a = z12();
        let b = Bounds::new(2, 1);
        let rb = catalog::parse("rb:6?lambda=1").unwrap();
        for opi in &rb.opis {
            assert!(check_lm_stability(opi, &OrderSpec::new(rb.order), &a, b).passed());
        }
        let av = catalog::parse("averaging").unwrap();
        for opi in &av.opis {
            assert!(check_lm_stability(opi, &OrderSpec::new(av.order), &a, b).passed());
        }
        // Under deglex, the leading monomial of x*y - y*x flips with the assignment.
        let bad = Opi::parse("commutator", "x,y", "x*y - y*x").unwrap();
        let r = check_lm_stability(&bad, &OrderSpec::new(Preset::Deglex), &a, b);
        assert!(!r.passed());
        assert!(r
            .violations
            .iter()
            .any(|v| v.assignment == "x=z2, y=z1" && v.expected == "z1*z2" && v.actual == "z2*z1"));
    }
}
