//! Rewriting operated polynomials.
//!
//! A rule set holds concrete rules, from monic polynomials `g` read as
//! `g-bar -> g-bar - g`, and schema rules, from identities `phi`. A word `t`
//! is a schema redex when `t = m(sigma)` for a monomial `m` of `phi` and the
//! instance `phi(sigma)` is nonzero with leading monomial exactly `t`; the
//! rule then replaces `t` by `t - phi(sigma) / c`. Every rewrite therefore
//! replaces a word by strictly smaller ones.

mod types;

use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::opi::Opi;
use crate::orders::{MonomialOrder, OrderSpec};
use crate::poly::{Coeff, OPoly};
use crate::terms::pattern_walk;
use crate::terms::{Alphabet, Assignment, Context, Factor, Frame, Pattern, Render, Word};

pub use types::{
    check_diff_type, check_rb_type, diff_candidate, rb_candidate, Condition, TypeReport,
};

/// Where a rule comes from.
#[derive(Clone, Debug)]
pub enum RuleKind {
    /// A monic polynomial and its leading monomial.
    Concrete {
        poly: OPoly,
        lead: Word,
    },
    Schema(Opi),
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub label: String,
    pub kind: RuleKind,
}

/// Rules in declared order, with the order used to read leading monomials.
#[derive(Clone, Debug)]
pub struct RuleSet {
    alphabet: Alphabet,
    order: OrderSpec,
    rules: Vec<Rule>,
    /// Rules with an instance of leading monomial 1, which match every word.
    constants: Vec<(usize, Option<Assignment>, OPoly)>,
}

/// Memo entries kept by a `Reducer` before it starts afresh.
const MEMO_LIMIT: usize = 400_000;

type RunMatch = Option<(Option<Assignment>, OPoly)>;

/// One place where a rule applies to a word `t`: `t = q|_{s-bar}` with `s`
/// monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub context: Context,
    pub rule: usize,
    pub sigma: Option<Assignment>,
    pub instance: OPoly,
}

impl RuleSet {
    pub fn new(alphabet: Alphabet, order: OrderSpec) -> Self {
        RuleSet {
            alphabet,
            order,
            rules: Vec::new(),
            constants: Vec::new(),
        }
    }

    fn push(&mut self, rule: Rule) {
        self.rules.push(rule);
        let i = self.rules.len() - 1;
        let mut found = Vec::new();
        self.run_matches(i, &[], &mut found, false);
        self.constants
            .extend(found.into_iter().map(|(s, p)| (i, s, p)));
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Adds `g` as the rule `g-bar -> g-bar - g`, after making it monic.
    pub fn add_concrete(&mut self, label: impl Into<String>, g: &OPoly) -> Result<()> {
        let mut bad = None;
        for w in g.support() {
            if let Err(e) = self.alphabet.check_word(w) {
                bad = Some(e);
            }
        }
        if let Some(e) = bad {
            return Err(e);
        }
        let poly = g.monicize(&self.order)?;
        let lead = poly.leading_word(&self.order);
        self.push(Rule {
            label: label.into(),
            kind: RuleKind::Concrete { poly, lead },
        });
        Ok(())
    }

    pub fn add_opi(&mut self, opi: Opi) {
        self.push(Rule {
            label: opi.name().to_string(),
            kind: RuleKind::Schema(opi),
        });
    }

    pub fn with_concrete(mut self, label: impl Into<String>, g: &OPoly) -> Result<Self> {
        self.add_concrete(label, g)?;
        Ok(self)
    }

    pub fn with_opis(mut self, opis: impl IntoIterator<Item = Opi>) -> Self {
        for o in opis {
            self.add_opi(o);
        }
        self
    }

    /// Ways `rule` applies to the run `run` as a whole.
    fn run_matches(
        &self,
        rule: usize,
        run: &[Factor],
        out: &mut Vec<(Option<Assignment>, OPoly)>,
        first: bool,
    ) {
        match &self.rules[rule].kind {
            RuleKind::Concrete { poly, lead } => {
                if lead.factors() == run {
                    out.push((None, poly.clone()));
                }
            }
            RuleKind::Schema(opi) => {
                for (i, (_, pattern)) in opi.patterns().iter().enumerate() {
                    if !pattern.may_match_run(run) || opi.always_dominated(i, self.order.preset) {
                        continue;
                    }
                    for sigma in pattern.match_run(run) {
                        if opi.surely_dominated(i, &sigma, self.order.preset) {
                            continue;
                        }
                        let inst = opi.instantiate_unchecked(&sigma);
                        if inst.is_zero() {
                            continue;
                        }
                        let (lead, c) = inst.leading(&self.order);
                        if lead.factors() != run {
                            continue;
                        }
                        let inst = inst.scale(&c.recip());
                        if out.iter().any(|(_, p)| *p == inst) {
                            continue;
                        }
                        out.push((Some(sigma), inst));
                        if first {
                            return;
                        }
                    }
                }
            }
        }
    }

    /// Redexes whose instance has leading monomial 1: they match any word.
    fn constant_redexes(&self, t: &Word, out: &mut Vec<Redex>, first: bool) {
        for (rule, sigma, instance) in &self.constants {
            out.push(Redex {
                context: Context::sandwich(&Word::unit(), t),
                rule: *rule,
                sigma: sigma.clone(),
                instance: instance.clone(),
            });
            if first {
                return;
            }
        }
    }

    /// Redexes of `t` in leftmost-outermost order, rules in declared order at
    /// each position. With `first`, stops at the first one.
    pub fn redexes(&self, t: &Word, first: bool) -> Vec<Redex> {
        let mut out = Vec::new();
        self.constant_redexes(t, &mut out, first);
        if first && !out.is_empty() {
            return out;
        }
        let mut frames = Vec::new();
        pattern_walk(
            t.factors(),
            &mut frames,
            &mut |frames: &[Frame], level: &[Factor], i, j| {
                for rule in 0..self.rules.len() {
                    let mut found = Vec::new();
                    self.run_matches(rule, &level[i..j], &mut found, first);
                    for (sigma, instance) in found {
                        let mut fs = frames.to_vec();
                        fs.push(Frame::new(level[..i].to_vec(), level[j..].to_vec()));
                        out.push(Redex {
                            context: Context::from_frames(fs),
                            rule,
                            sigma,
                            instance,
                        });
                        if first {
                            return true;
                        }
                    }
                }
                false
            },
        );
        out
    }

    pub fn first_redex(&self, t: &Word) -> Option<Redex> {
        self.redexes(t, true).pop()
    }

    pub fn is_reducible(&self, t: &Word) -> bool {
        self.first_redex(t).is_some()
    }

    pub fn render_sigma(&self, rule: usize, sigma: &Option<Assignment>) -> String {
        match (&self.rules[rule].kind, sigma) {
            (RuleKind::Schema(opi), Some(s)) => {
                format!("{{{}}}", s.render(opi.vars(), &self.alphabet))
            }
            _ => "{}".to_string(),
        }
    }
}

/// One rewrite `f -> f - coeff * q|_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub monomial: Word,
    pub coeff: Coeff,
    pub redex: Redex,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `sum_i c_i q_i|_{s_i}`, which equals `f - nf(f)`.
    pub fn reconstruct(&self) -> OPoly {
        let mut out = OPoly::zero();
        for s in &self.steps {
            out.add_scaled(&s.coeff, &s.redex.context.plug_poly(&s.redex.instance));
        }
        out
    }

    /// Line-oriented rendering, one `step k: rule <id>, context <text>, σ <bindings>` per step.
    pub fn render(&self, rules: &RuleSet) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {}: rule {}, context {}, σ {}\n",
                k + 1,
                rules.rules[s.redex.rule].label,
                s.redex.context.to_text(&rules.alphabet),
                rules.render_sigma(s.redex.rule, &s.redex.sigma)
            ));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub result: OPoly,
    pub trace: Trace,
    /// True when fuel ran out before a normal form was reached.
    pub exhausted: bool,
}

/// How the next rewrite is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Greatest reducible monomial, leftmost-outermost redex, first rule.
    Deterministic,
    /// A uniformly random reducible monomial and a random redex of it.
    Random(u64),
}

fn apply(f: &OPoly, t: &Word, redex: Redex, order: &dyn MonomialOrder) -> (OPoly, TraceStep) {
    let coeff = f.coeff(t);
    let replaced = redex.context.plug_poly(&redex.instance);
    let mut g = f.clone();
    g.add_scaled(&-coeff.clone(), &replaced);
    for w in replaced.support() {
        assert!(
            w == t || order.compare(w, t).is_lt(),
            "rewrite introduced a monomial not below the redex"
        );
    }
    debug_assert!(g.coeff(t).is_zero());
    (
        g,
        TraceStep {
            monomial: t.clone(),
            coeff,
            redex,
        },
    )
}

/// Rewrites the greatest reducible monomial of `f` at its leftmost-outermost
/// redex with the first applicable rule. `None` when `f` is irreducible.
pub fn one_step(f: &OPoly, rules: &RuleSet) -> Option<(OPoly, TraceStep)> {
    for (t, _) in f.terms_desc(&rules.order) {
        if let Some(r) = rules.first_redex(t) {
            return Some(apply(f, t, r, &rules.order));
        }
    }
    None
}

fn random_step(f: &OPoly, rules: &RuleSet, rng: &mut ChaCha8Rng) -> Option<(OPoly, TraceStep)> {
    let mut candidates: Vec<(&Word, Vec<Redex>)> = f
        .support()
        .map(|t| (t, rules.redexes(t, false)))
        .filter(|(_, r)| !r.is_empty())
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let k = rng.gen_range(0..candidates.len());
    let (t, mut rs) = candidates.swap_remove(k);
    rs.shuffle(rng);
    let r = rs.swap_remove(0);
    Some(apply(f, t, r, &rules.order))
}

/// Rewrites until irreducible or until `fuel` steps have been taken.
pub fn normal_form(f: &OPoly, rules: &RuleSet, fuel: usize) -> Reduction {
    normal_form_with(f, rules, fuel, Strategy::Deterministic)
}

pub fn normal_form_with(f: &OPoly, rules: &RuleSet, fuel: usize, strategy: Strategy) -> Reduction {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::Deterministic => None,
    };
    let mut current = f.clone();
    let mut trace = Trace::default();
    loop {
        let step = match rng.as_mut() {
            None => one_step(&current, rules),
            Some(r) => random_step(&current, rules, r),
        };
        let Some((next, s)) = step else {
            return Reduction {
                result: current,
                trace,
                exhausted: false,
            };
        };
        if trace.steps.len() == fuel {
            return Reduction {
                result: current,
                trace,
                exhausted: true,
            };
        }
        trace.steps.push(s);
        current = next;
    }
}

/// Whether `f` and `g` reach the same normal form within `fuel` steps each.
pub fn joinable(f: &OPoly, g: &OPoly, rules: &RuleSet, fuel: usize) -> bool {
    let a = normal_form(f, rules, fuel);
    let b = normal_form(g, rules, fuel);
    !a.exhausted && !b.exhausted && a.result == b.result
}

/// Normal forms computed word by word with memoization.
///
/// Each word is rewritten at its first redex, as in [`normal_form`], so the
/// results coincide with the deterministic strategy.
pub struct Reducer<'a> {
    rules: &'a RuleSet,
    cache: FxHashMap<Word, Arc<OPoly>>,
    first: FxHashMap<Word, Option<Redex>>,
    runs: FxHashMap<(usize, Word), RunMatch>,
    budget: usize,
    steps: usize,
}

impl<'a> Reducer<'a> {
    /// `budget` bounds the total number of rewrites performed.
    pub fn new(rules: &'a RuleSet, budget: usize) -> Self {
        Reducer {
            rules,
            cache: FxHashMap::default(),
            first: FxHashMap::default(),
            runs: FxHashMap::default(),
            budget,
            steps: 0,
        }
    }

    pub fn rules(&self) -> &RuleSet {
        self.rules
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Allows `fuel` more rewrites from now on.
    pub fn refuel(&mut self, fuel: usize) {
        self.budget = self.steps.saturating_add(fuel);
    }

    pub fn nf_word(&mut self, t: &Word) -> Result<OPoly> {
        Ok(self.nf_shared(t)?.as_ref().clone())
    }

    fn nf_shared(&mut self, t: &Word) -> Result<Arc<OPoly>> {
        if let Some(p) = self.cache.get(t) {
            return Ok(p.clone());
        }
        let out = match self.search(t) {
            None => OPoly::word(t.clone()),
            Some(r) => {
                if self.steps >= self.budget {
                    return Err(Error::FuelExhausted(self.steps));
                }
                self.steps += 1;
                // The instance is monic with leading word `t`.
                let mut acc = OPoly::zero();
                for (w, c) in r.instance.terms() {
                    let placed = r.context.plug(w);
                    if placed == *t {
                        continue;
                    }
                    debug_assert!(self.rules.order.compare(&placed, t).is_lt());
                    let sub = self.nf_shared(&placed)?;
                    acc.add_scaled(&-c, &sub);
                }
                acc
            }
        };
        let out = Arc::new(out);
        self.cache.insert(t.clone(), out.clone());
        Ok(out)
    }

    /// Same as `RuleSet::first_redex`, with bracket interiors and schema
    /// runs remembered.
    pub fn first_redex(&mut self, t: &Word) -> Option<Redex> {
        if let Some(r) = self.first.get(t) {
            return r.clone();
        }
        let r = self.search(t);
        self.first.insert(t.clone(), r.clone());
        r
    }

    fn search(&mut self, t: &Word) -> Option<Redex> {
        let mut constant = Vec::new();
        self.rules.constant_redexes(t, &mut constant, true);
        if let Some(r) = constant.pop() {
            return Some(r);
        }
        let fs = t.factors();
        for i in 0..fs.len() {
            for j in i + 1..=fs.len() {
                for rule in 0..self.rules.len() {
                    if let Some((sigma, instance)) = self.run_match(rule, &fs[i..j]) {
                        return Some(Redex {
                            context: Context::from_frames(vec![Frame::new(
                                fs[..i].to_vec(),
                                fs[j..].to_vec(),
                            )]),
                            rule,
                            sigma,
                            instance,
                        });
                    }
                }
            }
            if let Factor::Bracket(w) = &fs[i] {
                if let Some(r) = self.first_redex(w) {
                    let outer = Context::from_frames(vec![Frame::new(
                        fs[..i].to_vec(),
                        fs[i + 1..].to_vec(),
                    )]);
                    return Some(Redex {
                        context: outer.compose(&r.context.bracketed()),
                        ..r
                    });
                }
            }
        }
        None
    }

    fn run_match(&mut self, rule: usize, run: &[Factor]) -> RunMatch {
        let rules = self.rules;
        let mut found = Vec::new();
        match &rules.rules[rule].kind {
            RuleKind::Concrete { .. } => rules.run_matches(rule, run, &mut found, true),
            RuleKind::Schema(opi) => {
                let preset = rules.order.preset;
                let live = |(i, (_, p)): (usize, &(Coeff, Pattern))| {
                    p.may_match_run(run) && !opi.always_dominated(i, preset)
                };
                if !opi.patterns().iter().enumerate().any(live) {
                    return None;
                }
                let key = (rule, Word::from_factors(run.to_vec()));
                if let Some(hit) = self.runs.get(&key) {
                    return hit.clone();
                }
                rules.run_matches(rule, run, &mut found, true);
                self.runs.insert(key, found.first().cloned());
            }
        }
        found.into_iter().next()
    }

    pub fn nf(&mut self, f: &OPoly) -> Result<OPoly> {
        if self.cache.len() + self.first.len() + self.runs.len() > MEMO_LIMIT {
            self.cache.clear();
            self.first.clear();
            self.runs.clear();
        }
        let mut acc = OPoly::zero();
        for (w, c) in f.terms() {
            let sub = self.nf_shared(w)?;
            acc.add_scaled(c, &sub);
        }
        Ok(acc)
    }
}
