//! Operated polynomials: finitely supported maps from words to rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::orders::MonomialOrder;
use crate::terms::parse::{parse_raw_poly, resolve_word};
use crate::terms::{Alphabet, Render, Word};

pub type Coeff = BigRational;

pub fn rational(n: i64) -> Coeff {
    BigRational::from_integer(n.into())
}

/// `a + b`, skipping the gcd when both are integers.
pub(crate) fn coeff_add(a: &Coeff, b: &Coeff) -> Coeff {
    if a.denom().is_one() && b.denom().is_one() {
        BigRational::from_integer(a.numer() + b.numer())
    } else {
        a + b
    }
}

/// `a * b`, skipping the gcd when both are integers.
pub(crate) fn coeff_mul(a: &Coeff, b: &Coeff) -> Coeff {
    if a.denom().is_one() && b.denom().is_one() {
        BigRational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

/// An element of the free operated algebra. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct OPoly {
    terms: BTreeMap<Word, Coeff>,
}

impl fmt::Debug for OPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c}*{w:?}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl OPoly {
    pub fn zero() -> Self {
        OPoly::default()
    }

    pub fn one() -> Self {
        OPoly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        OPoly::term(c, Word::unit())
    }

    pub fn term(c: Coeff, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        OPoly { terms }
    }

    pub fn word(w: Word) -> Self {
        OPoly::term(Coeff::one(), w)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Coeff, Word)>) -> Self {
        let mut p = OPoly::zero();
        for (c, w) in terms {
            p.add_term(c, w);
        }
        p
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut p = OPoly::zero();
        for (c, raw) in parse_raw_poly(text)? {
            p.add_term(c, resolve_word(&raw, alphabet)?);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, c: Coeff, w: Word) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() = coeff_add(e.get(), &c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Coeff, other: &OPoly) {
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            for (w, d) in &other.terms {
                self.add_term(d.clone(), w.clone());
            }
        } else if (-c).is_one() {
            for (w, d) in &other.terms {
                self.add_term(-d, w.clone());
            }
        } else {
            for (w, d) in &other.terms {
                self.add_term(coeff_mul(c, d), w.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for elements of the coefficient field, zero included.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Word::is_unit)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in structural order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> OPoly {
        if c.is_zero() {
            return OPoly::zero();
        }
        OPoly {
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect(),
        }
    }

    /// Linear extension of a map on words.
    pub fn map_words(&self, mut f: impl FnMut(&Word) -> Word) -> OPoly {
        let mut out = OPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(c.clone(), f(w));
        }
        out
    }

    /// Linear extension of `u -> [u]`.
    pub fn apply_bracket(&self) -> OPoly {
        self.map_words(|w| w.clone().bracket())
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn terms_desc(&self, order: &dyn MonomialOrder) -> Vec<(&Word, &Coeff)> {
        let mut v: Vec<(&Word, &Coeff)> = self.terms.iter().collect();
        v.sort_by(|a, b| order.compare(b.0, a.0));
        v
    }

    /// Leading monomial and coefficient. Constants (zero included) lead with
    /// the unit word and the constant itself.
    pub fn leading(&self, order: &dyn MonomialOrder) -> (Word, Coeff) {
        let mut best: Option<(&Word, &Coeff)> = None;
        for (w, c) in &self.terms {
            match best {
                Some((b, _)) if order.compare(w, b).is_le() => {}
                _ => best = Some((w, c)),
            }
        }
        match best {
            Some((w, c)) => (w.clone(), c.clone()),
            None => (Word::unit(), Coeff::zero()),
        }
    }

    pub fn leading_word(&self, order: &dyn MonomialOrder) -> Word {
        self.leading(order).0
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monicize(&self, order: &dyn MonomialOrder) -> Result<OPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (_, c) = self.leading(order);
        Ok(self.scale(&c.recip()))
    }

    pub fn is_monic(&self, order: &dyn MonomialOrder) -> bool {
        !self.is_zero() && self.leading(order).1.is_one()
    }

    /// Renders with the leading term first.
    pub fn to_text_ordered(&self, order: &dyn MonomialOrder, alphabet: &Alphabet) -> String {
        render_terms(self.terms_desc(order).into_iter(), alphabet)
    }
}

fn render_terms<'a>(
    terms: impl Iterator<Item = (&'a Word, &'a Coeff)>,
    alphabet: &Alphabet,
) -> String {
    let mut out = String::new();
    for (i, (w, c)) in terms.enumerate() {
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let abs = c.abs();
        if w.is_unit() {
            out.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            w.render(alphabet, &mut out);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Render for OPoly {
    /// Largest structural term first.
    fn render(&self, alphabet: &Alphabet, out: &mut String) {
        let mut terms: Vec<(&Word, &Coeff)> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.structural_cmp(a.0));
        out.push_str(&render_terms(terms.into_iter(), alphabet));
    }
}

impl From<Word> for OPoly {
    fn from(w: Word) -> Self {
        OPoly::word(w)
    }
}

impl Add for &OPoly {
    type Output = OPoly;
    fn add(self, rhs: &OPoly) -> OPoly {
        let mut out = self.clone();
        out.add_scaled(&Coeff::one(), rhs);
        out
    }
}

impl Sub for &OPoly {
    type Output = OPoly;
    fn sub(self, rhs: &OPoly) -> OPoly {
        let mut out = self.clone();
        out.add_scaled(&-Coeff::one(), rhs);
        out
    }
}

impl Neg for &OPoly {
    type Output = OPoly;
    fn neg(self) -> OPoly {
        self.scale(&-Coeff::one())
    }
}

/// Bilinear concatenation of words.
impl Mul for &OPoly {
    type Output = OPoly;
    fn mul(self, rhs: &OPoly) -> OPoly {
        let mut out = OPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(a * b, u.mul(v));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for OPoly {
            type Output = OPoly;
            fn $m(self, rhs: OPoly) -> OPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for OPoly {
    type Output = OPoly;
    fn neg(self) -> OPoly {
        -&self
    }
}
