//! Computation in free operated algebras.
//!
//! Bracketed words ([`terms`]), operated polynomials with exact rational
//! coefficients ([`poly`]), monomial orders ([`orders`]), operated polynomial
//! identities and their catalogs ([`opi`]), a rewriting engine ([`rewrite`])
//! and Groebner-Shirshov basis verification with quotient arithmetic
//! ([`gsbasis`]).

pub mod error;
pub mod gsbasis;
pub mod opi;
pub mod orders;
pub mod poly;
pub mod rewrite;
pub mod terms;

pub use error::{Error, Result};
pub use gsbasis::{
    check_gs, compositions, compositions_within, enumerate_irr, is_irreducible, is_trivial,
    CompositionKind, CompositionRecord, Element, GeneratorSet, GsReport, PairClass,
    QuotientAlgebra, Triviality,
};
pub use opi::{catalog, Opi};
pub use orders::{MonomialOrder, OrderSpec, Preset};
pub use poly::{Coeff, OPoly};
pub use rewrite::{normal_form, one_step, RuleSet, Strategy, Trace};
pub use terms::{Alphabet, Assignment, Bounds, Context, Factor, Letter, Pattern, Render, Word};
