use crate::orders::MonomialOrder;
use crate::terms::{words_within, Bounds, Letter, Word};

use super::GeneratorSet;

/// True when no concrete leading monomial and no identity redex occurs in
/// `u`.
pub fn is_irreducible(u: &Word, generators: &GeneratorSet) -> bool {
    !generators.rules().is_reducible(u)
}

/// The irreducible words within `bounds`, ascending in the generator order.
pub fn enumerate_irr(generators: &GeneratorSet, bounds: Bounds) -> Vec<Word> {
    let letters: Vec<Letter> = generators.alphabet().letters().collect();
    let mut out: Vec<Word> = words_within(&letters, bounds)
        .into_iter()
        .filter(|u| is_irreducible(u, generators))
        .collect();
    let order = generators.order();
    out.sort_by(|a, b| order.compare(a, b));
    out
}
