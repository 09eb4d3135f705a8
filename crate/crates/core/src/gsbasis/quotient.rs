use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::OPoly;
use crate::rewrite::normal_form;
use crate::terms::{Alphabet, Bounds, Factor, Letter, Render, Word};

use super::{check_gs, GeneratorSet};

/// The free operated algebra modulo the ideal of a generator set, with
/// elements kept as normal forms.
///
/// Built only from generator sets that pass [`check_gs`] at the working
/// bounds; every operation refuses to leave those bounds.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    generators: GeneratorSet,
    bounds: Bounds,
    fuel: usize,
}

impl QuotientAlgebra {
    pub fn new(generators: GeneratorSet, bounds: Bounds, fuel: usize) -> Result<Self> {
        let report = check_gs(&generators, bounds, fuel);
        if !report.passed {
            return Err(Error::NotGs(report.tag));
        }
        Ok(QuotientAlgebra {
            generators,
            bounds,
            fuel,
        })
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.generators.alphabet()
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    fn within(&self, f: &OPoly, what: &str) -> Result<()> {
        match f.support().find(|w| !self.bounds.admits(w)) {
            Some(w) => Err(Error::BoundsExceeded(format!(
                "{what} has monomial {} outside {}",
                w.to_text(self.alphabet()),
                self.bounds
            ))),
            None => Ok(()),
        }
    }

    /// The normal form of `f`, supported on irreducible words.
    pub fn nf(&self, f: &OPoly) -> Result<OPoly> {
        self.within(f, "input")?;
        let r = normal_form(f, self.generators.rules(), self.fuel);
        if r.exhausted {
            return Err(Error::FuelExhausted(r.trace.len()));
        }
        self.within(&r.result, "normal form")?;
        Ok(r.result)
    }

    pub fn nf_multiply(&self, a: &OPoly, b: &OPoly) -> Result<OPoly> {
        self.nf(&(a * b))
    }

    pub fn nf_operator(&self, a: &OPoly) -> Result<OPoly> {
        self.nf(&a.apply_bracket())
    }
}

/// The operated-algebra morphism sending each letter `z` of `source` to
/// `theta[z]`, applied to `f` and reduced in `target`.
pub fn evaluate_morphism(
    f: &OPoly,
    source: &Alphabet,
    theta: &HashMap<Letter, OPoly>,
    target: &QuotientAlgebra,
) -> Result<OPoly> {
    let mut memo = HashMap::new();
    let mut out = OPoly::zero();
    for (w, c) in f.terms() {
        source.check_word(w)?;
        let image = eval_word(w, source, theta, target, &mut memo)?;
        out.add_scaled(c, &image);
    }
    Ok(out)
}

fn eval_word(
    w: &Word,
    source: &Alphabet,
    theta: &HashMap<Letter, OPoly>,
    target: &QuotientAlgebra,
    memo: &mut HashMap<Word, OPoly>,
) -> Result<OPoly> {
    if let Some(p) = memo.get(w) {
        return Ok(p.clone());
    }
    let mut acc = target.nf(&OPoly::one())?;
    for f in w.factors() {
        let image = match f {
            Factor::Letter(l) => theta.get(l).cloned().ok_or_else(|| {
                Error::AlphabetMismatch(format!(
                    "no image for `{}`",
                    source.name(*l).unwrap_or("?")
                ))
            })?,
            Factor::Bracket(inner) => {
                let x = eval_word(inner, source, theta, target, memo)?;
                target.nf_operator(&x)?
            }
        };
        acc = target.nf_multiply(&acc, &image)?;
    }
    memo.insert(w.clone(), acc.clone());
    Ok(acc)
}
