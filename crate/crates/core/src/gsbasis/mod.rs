//! Compositions, triviality and bounded Groebner-Shirshov verification.
//!
//! A generator set joins concrete monic polynomials `G` with identities
//! `Phi`; the identities contribute every instance `phi(u1, ..., un)`. All
//! checks run over instances whose leading monomials lie within a pair of
//! bounds, and every verdict is tagged with those bounds.

mod irr;
mod quotient;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::opi::{
    check_lm_no_subword, check_lm_stability, s_phi_enumerate, NoSubwordReport, Opi, StabilityReport,
};
use crate::orders::{MonomialOrder, OrderSpec};
use crate::poly::OPoly;
use crate::rewrite::{normal_form, Reducer, RuleSet, Trace};
use crate::terms::pattern_walk;
use crate::terms::{Alphabet, Bounds, Context, Factor, Frame, Render, Word};

pub use irr::{enumerate_irr, is_irreducible};
pub use quotient::{evaluate_morphism, QuotientAlgebra};

/// The input of the main theorem: a monic algebra basis `G` and identities
/// `Phi` instantiated over the alphabet.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    alphabet: Alphabet,
    order: OrderSpec,
    concrete: Vec<(String, OPoly)>,
    opis: Vec<Opi>,
    rules: RuleSet,
}

impl GeneratorSet {
    /// Concrete generators are made monic; a zero generator is an error.
    pub fn new(
        alphabet: Alphabet,
        order: OrderSpec,
        opis: Vec<Opi>,
        concrete: Vec<(String, OPoly)>,
    ) -> Result<Self> {
        let mut rules = RuleSet::new(alphabet.clone(), order);
        let mut monic = Vec::with_capacity(concrete.len());
        for (label, g) in concrete {
            rules.add_concrete(label.clone(), &g)?;
            monic.push((label, g.monicize(&order)?));
        }
        for o in &opis {
            rules.add_opi(o.clone());
        }
        Ok(GeneratorSet {
            alphabet,
            order,
            concrete: monic,
            opis,
            rules,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn concrete(&self) -> &[(String, OPoly)] {
        &self.concrete
    }

    pub fn opis(&self) -> &[Opi] {
        &self.opis
    }

    /// Concrete rules first, then the identities.
    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    fn concrete_rules(&self) -> RuleSet {
        let mut r = RuleSet::new(self.alphabet.clone(), self.order);
        for (label, g) in &self.concrete {
            r.add_concrete(label.clone(), g)
                .expect("checked at construction");
        }
        r
    }

    fn schema_rules(&self) -> RuleSet {
        RuleSet::new(self.alphabet.clone(), self.order).with_opis(self.opis.iter().cloned())
    }

    /// The concrete generators followed by every instance of the identities
    /// with leading monomial within `bounds`, all monic.
    pub fn elements(&self, bounds: Bounds) -> Vec<Arc<Element>> {
        let mut out: Vec<Arc<Element>> = self
            .concrete
            .iter()
            .map(|(label, g)| {
                Arc::new(Element {
                    label: label.clone(),
                    lead: g.leading_word(&self.order),
                    poly: g.clone(),
                    schema: false,
                })
            })
            .collect();
        for inst in s_phi_enumerate(&self.opis, &self.alphabet, &self.order, bounds) {
            let opi = &self.opis[inst.opi];
            out.push(Arc::new(Element {
                label: format!(
                    "{}({})",
                    opi.name(),
                    inst.sigma.render(opi.vars(), &self.alphabet)
                ),
                poly: inst
                    .poly
                    .monicize(&self.order)
                    .expect("instances are nonzero"),
                lead: inst.lead,
                schema: true,
            }));
        }
        out
    }
}

/// A monic polynomial taking part in compositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub label: String,
    pub poly: OPoly,
    pub lead: Word,
    /// True for an instance of an identity.
    pub schema: bool,
}

impl Element {
    pub fn new(
        label: impl Into<String>,
        poly: OPoly,
        order: &dyn MonomialOrder,
        schema: bool,
    ) -> Result<Self> {
        if poly.is_zero() || !poly.is_monic(order) {
            return Err(Error::NonMonic);
        }
        Ok(Element {
            label: label.into(),
            lead: poly.leading_word(order),
            poly,
            schema,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositionKind {
    Intersection,
    Inclusion,
}

impl fmt::Display for CompositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompositionKind::Intersection => "intersection",
            CompositionKind::Inclusion => "inclusion",
        })
    }
}

/// Which kinds of generators a composition joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairClass {
    ConcreteConcrete,
    SchemaSchema,
    SchemaConcrete,
}

impl PairClass {
    fn of(f: &Element, g: &Element) -> Self {
        match (f.schema, g.schema) {
            (false, false) => PairClass::ConcreteConcrete,
            (true, true) => PairClass::SchemaSchema,
            _ => PairClass::SchemaConcrete,
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairClass::ConcreteConcrete => "concrete x concrete",
            PairClass::SchemaSchema => "schema x schema",
            PairClass::SchemaConcrete => "schema x concrete",
        })
    }
}

/// How the ambiguity `w` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `w = f-bar * u = v * g-bar`.
    Overlap { u: Word, v: Word },
    /// `w = f-bar = q|_{g-bar}`.
    Embedding(Context),
}

impl Witness {
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        match self {
            Witness::Overlap { u, v } => {
                format!("u = {}, v = {}", u.to_text(alphabet), v.to_text(alphabet))
            }
            Witness::Embedding(q) => format!("q = {}", q.to_text(alphabet)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompositionRecord {
    pub kind: CompositionKind,
    pub pair: PairClass,
    pub f: Arc<Element>,
    pub g: Arc<Element>,
    pub w: Word,
    pub witness: Witness,
    pub value: OPoly,
    pub verdict: Option<Triviality>,
}

impl CompositionRecord {
    fn intersection(f: &Arc<Element>, g: &Arc<Element>, k: usize) -> Self {
        let (ff, gf) = (f.lead.factors(), g.lead.factors());
        let v = Word::from_factors(ff[..ff.len() - k].to_vec());
        let u = Word::from_factors(gf[k..].to_vec());
        let w = f.lead.mul(&u);
        let value = &f.poly * &OPoly::word(u.clone()) - &OPoly::word(v.clone()) * &g.poly;
        CompositionRecord {
            kind: CompositionKind::Intersection,
            pair: PairClass::of(f, g),
            f: f.clone(),
            g: g.clone(),
            w,
            witness: Witness::Overlap { u, v },
            value,
            verdict: None,
        }
    }

    fn inclusion(f: &Arc<Element>, g: &Arc<Element>, q: Context) -> Self {
        let value = &f.poly - &q.plug_poly(&g.poly);
        CompositionRecord {
            kind: CompositionKind::Inclusion,
            pair: PairClass::of(f, g),
            f: f.clone(),
            g: g.clone(),
            w: f.lead.clone(),
            witness: Witness::Embedding(q),
            value,
            verdict: None,
        }
    }

    pub fn render(&self, alphabet: &Alphabet, order: &dyn MonomialOrder) -> String {
        let mut out = format!(
            "{} ({}) of {} and {} at w = {}, {}: {}",
            self.kind,
            self.pair,
            self.f.label,
            self.g.label,
            self.w.to_text(alphabet),
            self.witness.to_text(alphabet),
            self.value.to_text_ordered(order, alphabet)
        );
        if let Some(v) = &self.verdict {
            out.push_str(&format!("; {}", v.describe(alphabet, order)));
        }
        out
    }
}

/// Every composition of `f` with `g` whose ambiguity lies within `bounds`.
///
/// Intersections overlap a proper suffix of `f-bar` with a proper prefix of
/// `g-bar` at the top level, so `max(|f-bar|, |g-bar|) < |w| < |f-bar| +
/// |g-bar|` in breadth. Inclusions place `g-bar` anywhere inside `f-bar`;
/// the trivial self-inclusion of a generator is left out.
pub fn compositions(
    f: &Element,
    g: &Element,
    order: &dyn MonomialOrder,
    bounds: Bounds,
) -> Result<Vec<CompositionRecord>> {
    for e in [f, g] {
        if !e.poly.is_monic(order) || e.poly.leading_word(order) != e.lead {
            return Err(Error::NonMonic);
        }
    }
    let (f, g) = (Arc::new(f.clone()), Arc::new(g.clone()));
    let same = f.poly == g.poly;
    let mut out = Vec::new();
    let (m, n) = (f.lead.breadth() as usize, g.lead.breadth() as usize);
    let (ff, gf) = (f.lead.factors(), g.lead.factors());
    for k in 1..m.min(n) {
        if ff[m - k..] == gf[..k] {
            out.push(CompositionRecord::intersection(&f, &g, k));
        }
    }
    if !g.lead.is_unit() {
        for q in f.lead.occurrences(&g.lead)? {
            if same && q.is_hole() {
                continue;
            }
            out.push(CompositionRecord::inclusion(&f, &g, q));
        }
    }
    out.retain(|r| bounds.admits(&r.w));
    Ok(out)
}

/// The outcome of reducing a composition.
#[derive(Clone, Debug)]
pub struct Triviality {
    /// The composition reduced to zero.
    pub trivial: bool,
    pub residue: OPoly,
    /// Fuel ran out before a normal form was reached.
    pub exhausted: bool,
    pub steps: usize,
    pub fuel: usize,
    /// Only filled in by [`is_trivial`].
    pub trace: Option<Trace>,
}

impl Triviality {
    /// Reduction to zero proves triviality, and a nonzero normal form is
    /// irreducible, which proves the converse. Running out of fuel proves
    /// nothing.
    pub fn conclusive(&self) -> bool {
        self.trivial || !self.exhausted
    }

    pub fn describe(&self, alphabet: &Alphabet, order: &dyn MonomialOrder) -> String {
        if self.trivial {
            format!("trivial (reduced to 0 in {} steps)", self.steps)
        } else if self.exhausted {
            format!(
                "not reduced to zero at fuel {}; residue {}",
                self.fuel,
                self.residue.to_text_ordered(order, alphabet)
            )
        } else {
            format!(
                "NOT trivial: irreducible residue {}",
                self.residue.to_text_ordered(order, alphabet)
            )
        }
    }
}

/// Reduces `h` by the full rule set; `h` is trivial modulo the generators
/// below `w` when the result is zero.
pub fn is_trivial(
    h: &OPoly,
    generators: &GeneratorSet,
    w: &Word,
    fuel: usize,
) -> Result<Triviality> {
    let order = generators.order();
    for m in h.support() {
        if order.compare(m, w).is_ge() {
            return Err(Error::NotBelow {
                monomial: m.to_text(generators.alphabet()),
                ambiguity: w.to_text(generators.alphabet()),
            });
        }
    }
    let r = normal_form(h, generators.rules(), fuel);
    Ok(Triviality {
        trivial: r.result.is_zero(),
        residue: r.result,
        exhausted: r.exhausted,
        steps: r.trace.len(),
        fuel,
        trace: Some(r.trace),
    })
}

fn reduce_with(reducer: &mut Reducer<'_>, h: &OPoly, fuel: usize) -> Triviality {
    reducer.refuel(fuel);
    let before = reducer.steps();
    match reducer.nf(h) {
        Ok(residue) => Triviality {
            trivial: residue.is_zero(),
            residue,
            exhausted: false,
            steps: reducer.steps() - before,
            fuel,
            trace: None,
        },
        Err(_) => {
            let r = normal_form(h, reducer.rules(), fuel);
            Triviality {
                trivial: r.result.is_zero(),
                residue: r.result,
                exhausted: r.exhausted,
                steps: r.trace.len(),
                fuel,
                trace: None,
            }
        }
    }
}

/// All compositions among `elems` with ambiguity within `bounds`, ordered
/// by first element, then second element, intersections before inclusions.
fn all_compositions(elems: &[Arc<Element>], bounds: Bounds) -> Vec<CompositionRecord> {
    let mut by_lead: HashMap<&Word, Vec<usize>> = HashMap::new();
    let mut by_prefix: HashMap<Word, Vec<(usize, usize)>> = HashMap::new();
    for (j, e) in elems.iter().enumerate() {
        if !e.lead.is_unit() {
            by_lead.entry(&e.lead).or_default().push(j);
        }
        let fs = e.lead.factors();
        for k in 1..fs.len() {
            by_prefix
                .entry(Word::from_factors(fs[..k].to_vec()))
                .or_default()
                .push((j, k));
        }
    }
    let per_f: Vec<Vec<CompositionRecord>> = elems
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let mut found: Vec<(usize, CompositionRecord)> = Vec::new();
            let fs = f.lead.factors();
            for k in 1..fs.len() {
                let suffix = Word::from_factors(fs[fs.len() - k..].to_vec());
                for &(j, kk) in by_prefix.get(&suffix).into_iter().flatten() {
                    debug_assert_eq!(k, kk);
                    let r = CompositionRecord::intersection(f, &elems[j], k);
                    if bounds.admits(&r.w) {
                        found.push((j, r));
                    }
                }
            }
            let mut frames = Vec::new();
            pattern_walk(
                fs,
                &mut frames,
                &mut |frames: &[Frame], level: &[Factor], a, b| {
                    let sub = Word::from_factors(level[a..b].to_vec());
                    if let Some(js) = by_lead.get(&sub) {
                        let mut q = frames.to_vec();
                        q.push(Frame::new(level[..a].to_vec(), level[b..].to_vec()));
                        let q = Context::from_frames(q);
                        for &j in js {
                            if j == i && q.is_hole() {
                                continue;
                            }
                            found.push((j, CompositionRecord::inclusion(f, &elems[j], q.clone())));
                        }
                    }
                    false
                },
            );
            found.sort_by_key(|(j, r)| (*j, r.kind == CompositionKind::Inclusion));
            found.into_iter().map(|(_, r)| r).collect()
        })
        .collect();
    per_f.into_iter().flatten().collect()
}

/// Every composition among the generators and the instances within
/// `bounds`, in a deterministic order.
pub fn compositions_within(generators: &GeneratorSet, bounds: Bounds) -> Vec<CompositionRecord> {
    all_compositions(&generators.elements(bounds), bounds)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Counts {
    pub elements: usize,
    pub records: usize,
    pub intersection: usize,
    pub inclusion: usize,
    pub concrete_concrete: usize,
    pub schema_schema: usize,
    pub schema_concrete: usize,
    pub trivial: usize,
    pub nontrivial: usize,
    /// Not reduced to zero because fuel ran out.
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypotheses {
    /// Concrete compositions reduce to zero by `G` alone.
    pub g_is_gs: bool,
    /// Instance compositions reduce to zero by the identities alone.
    pub phi_is_gs: bool,
    pub no_subword: Vec<NoSubwordReport>,
    pub stability: Vec<StabilityReport>,
}

impl Hypotheses {
    pub fn all_hold(&self) -> bool {
        self.g_is_gs
            && self.phi_is_gs
            && self.no_subword.iter().all(|r| r.holds)
            && self.stability.iter().all(|r| r.passed())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub kind: CompositionKind,
    pub pair: PairClass,
    pub f: String,
    pub g: String,
    pub w: String,
    pub witness: String,
    pub value: String,
    pub residue: String,
    /// `irreducible residue` or `fuel exhausted`.
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GsReport {
    pub identities: Vec<String>,
    pub concrete: Vec<String>,
    pub alphabet: Vec<String>,
    pub order: String,
    pub bounds: Bounds,
    pub fuel: usize,
    pub passed: bool,
    pub tag: String,
    pub route: String,
    pub counts: Counts,
    pub hypotheses: Hypotheses,
    pub failures: Vec<Failure>,
    /// The failing records themselves, in enumeration order.
    #[serde(skip)]
    pub failing: Vec<CompositionRecord>,
}

impl GsReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "check-gs: identities [{}], G [{}]\n",
            self.identities.join(", "),
            self.concrete.join(", ")
        ));
        out.push_str(&format!(
            "alphabet {{{}}}, order {}, bounds {}, fuel {}\n",
            self.alphabet.join(", "),
            self.order,
            self.bounds,
            self.fuel
        ));
        let c = &self.counts;
        out.push_str(&format!(
            "elements {}, compositions {} (intersection {}, inclusion {}; concrete x concrete {}, schema x schema {}, schema x concrete {})\n",
            c.elements, c.records, c.intersection, c.inclusion, c.concrete_concrete, c.schema_schema, c.schema_concrete
        ));
        out.push_str(&format!(
            "trivial {}, non-trivial {}, inconclusive {}\n",
            c.trivial, c.nontrivial, c.inconclusive
        ));
        let h = &self.hypotheses;
        out.push_str("hypotheses:\n");
        out.push_str(&format!("  G is GS on its own: {}\n", yes_no(h.g_is_gs)));
        out.push_str(&format!(
            "  identities are GS on their own: {}\n",
            yes_no(h.phi_is_gs)
        ));
        for r in &h.no_subword {
            out.push_str(&format!(
                "  leading monomial of {} ({}) has no product of variables: {}{}\n",
                r.opi,
                r.leading,
                yes_no(r.holds),
                r.witness
                    .as_ref()
                    .map(|w| format!(" ({w})"))
                    .unwrap_or_default()
            ));
        }
        for r in &h.stability {
            out.push_str(&format!(
                "  leading monomial of {} stable over {} assignments: {}",
                r.opi,
                r.checked,
                yes_no(r.passed())
            ));
            if let Some(v) = r.violations.first() {
                out.push_str(&format!(
                    " ({} violations, first {}: expected {}, got {})",
                    r.violations.len(),
                    v.assignment,
                    v.expected,
                    v.actual
                ));
            }
            out.push('\n');
        }
        for (k, f) in self.failures.iter().enumerate() {
            out.push_str(&format!(
                "failure {}: {} ({}) of {} and {} at w = {}, {}\n  value {}\n  residue {} ({})\n",
                k + 1,
                f.kind,
                f.pair,
                f.f,
                f.g,
                f.w,
                f.witness,
                f.value,
                f.residue,
                f.reason
            ));
        }
        out.push_str(&format!("route: {}\n", self.route));
        out.push_str(&format!("result: {}\n", self.tag));
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Enumerates every composition among the concrete generators and the
/// instances within `bounds` and reduces each with at most `fuel` steps.
///
/// The hypotheses of the main theorem are evaluated alongside: `G` and the
/// identities are each GS on their own (their compositions reduce to zero
/// by their own rules), no leading monomial of an identity contains a
/// product of variables, and leading monomials are stable at `bounds`.
pub fn check_gs(generators: &GeneratorSet, bounds: Bounds, fuel: usize) -> GsReport {
    let order = generators.order;
    let alphabet = &generators.alphabet;
    let elems = generators.elements(bounds);
    let mut records = all_compositions(&elems, bounds);

    let full = generators.rules();
    let g_only = generators.concrete_rules();
    let s_only = generators.schema_rules();
    let has_g = !generators.concrete.is_empty();
    let has_s = !generators.opis.is_empty();

    // Per record: the verdict under all rules, and whether it already
    // reduces to zero by its own side's rules.
    let outcomes: Vec<(Triviality, bool)> = records
        .par_iter()
        .map_init(
            || {
                (
                    Reducer::new(full, fuel),
                    Reducer::new(&g_only, fuel),
                    Reducer::new(&s_only, fuel),
                )
            },
            |(rf, rg, rs), r| {
                let own = match r.pair {
                    PairClass::ConcreteConcrete if has_s => Some(reduce_with(rg, &r.value, fuel)),
                    PairClass::SchemaSchema if has_g => Some(reduce_with(rs, &r.value, fuel)),
                    _ => None,
                };
                match own {
                    Some(t) if t.trivial => (t, true),
                    Some(_) => (reduce_with(rf, &r.value, fuel), false),
                    None => {
                        let t = reduce_with(rf, &r.value, fuel);
                        let ok = t.trivial;
                        (t, ok)
                    }
                }
            },
        )
        .collect();

    let mut counts = Counts {
        elements: elems.len(),
        records: records.len(),
        ..Counts::default()
    };
    let (mut g_is_gs, mut phi_is_gs) = (true, true);
    let mut failures = Vec::new();
    let mut failing = Vec::new();
    for (r, (t, own_ok)) in records.iter_mut().zip(outcomes) {
        match r.kind {
            CompositionKind::Intersection => counts.intersection += 1,
            CompositionKind::Inclusion => counts.inclusion += 1,
        }
        match r.pair {
            PairClass::ConcreteConcrete => {
                counts.concrete_concrete += 1;
                g_is_gs &= own_ok;
            }
            PairClass::SchemaSchema => {
                counts.schema_schema += 1;
                phi_is_gs &= own_ok;
            }
            PairClass::SchemaConcrete => counts.schema_concrete += 1,
        }
        if t.trivial {
            counts.trivial += 1;
        } else {
            if t.exhausted {
                counts.inconclusive += 1;
            } else {
                counts.nontrivial += 1;
            }
            failures.push(Failure {
                kind: r.kind,
                pair: r.pair,
                f: r.f.label.clone(),
                g: r.g.label.clone(),
                w: r.w.to_text(alphabet),
                witness: r.witness.to_text(alphabet),
                value: r.value.to_text_ordered(&order, alphabet),
                residue: t.residue.to_text_ordered(&order, alphabet),
                reason: if t.exhausted {
                    format!("not reduced to zero at fuel {fuel}")
                } else {
                    "irreducible residue".into()
                },
            });
            r.verdict = Some(t);
            failing.push(r.clone());
        }
    }

    let hypotheses = Hypotheses {
        g_is_gs,
        phi_is_gs,
        no_subword: generators
            .opis
            .iter()
            .map(|o| check_lm_no_subword(o, &order))
            .collect(),
        stability: generators
            .opis
            .iter()
            .map(|o| check_lm_stability(o, &order, alphabet, bounds))
            .collect(),
    };
    let passed = failures.is_empty();
    let route = match (passed, hypotheses.all_hold()) {
        (true, true) => "composition check; the main-theorem hypotheses also hold",
        (true, false) => "composition check alone; the main-theorem hypotheses do not all hold",
        (false, true) => {
            "none: compositions fail although the main-theorem hypotheses hold at these bounds"
        }
        (false, false) => "none: compositions fail and the main-theorem hypotheses do not all hold",
    };
    let tag = if passed {
        format!("GS-verified at {bounds}")
    } else {
        format!(
            "NOT GS at {bounds}: {} compositions not reduced to zero",
            failures.len()
        )
    };
    GsReport {
        identities: generators.opis.iter().map(|o| o.render(&order)).collect(),
        concrete: generators
            .concrete
            .iter()
            .map(|(l, g)| format!("{l}: {}", g.to_text_ordered(&order, alphabet)))
            .collect(),
        alphabet: alphabet.names().to_vec(),
        order: order.to_string(),
        bounds,
        fuel,
        passed,
        tag,
        route: route.into(),
        counts,
        hypotheses,
        failures,
        failing,
    }
}
