use std::sync::OnceLock;

use opalg::poly::rational;
use opalg::terms::words_within;
use opalg::{
    catalog, check_gs, is_irreducible, normal_form, Alphabet, Bounds, GeneratorSet, Letter, OPoly,
    OrderSpec, Preset, QuotientAlgebra, Word,
};
use proptest::prelude::*;

fn rb(lambda: i64) -> GeneratorSet {
    let a = Alphabet::new(["z1", "z2"]).unwrap();
    let e = catalog::parse(&format!("rb:6?lambda={lambda}")).unwrap();
    let comm = OPoly::parse("z2*z1 - z1*z2", &a).unwrap();
    GeneratorSet::new(
        a,
        OrderSpec::new(Preset::Db),
        e.opis,
        vec![("comm".into(), comm)],
    )
    .unwrap()
}

fn rb1() -> &'static GeneratorSet {
    static G: OnceLock<GeneratorSet> = OnceLock::new();
    G.get_or_init(|| rb(1))
}

fn quotient(lambda: i64) -> &'static QuotientAlgebra {
    static Q: [OnceLock<QuotientAlgebra>; 2] = [OnceLock::new(), OnceLock::new()];
    Q[lambda as usize]
        .get_or_init(|| QuotientAlgebra::new(rb(lambda), Bounds::new(4, 3), 10_000).unwrap())
}

fn pool(bounds: Bounds) -> Vec<Word> {
    words_within(&[Letter(0), Letter(1)], bounds)
}

fn poly(bounds: Bounds) -> impl Strategy<Value = OPoly> {
    prop::collection::vec((prop::sample::select(pool(bounds)), -3i64..=3), 1..5)
        .prop_map(|ts| OPoly::from_terms(ts.into_iter().map(|(w, c)| (rational(c), w))))
}

#[test]
fn weight_one_rota_baxter_passes() {
    let r = check_gs(rb1(), Bounds::new(3, 2), 10_000);
    assert!(r.passed, "{}", r.render());
    assert!(r.hypotheses.all_hold());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_forms_live_on_irreducible_words(f in poly(Bounds::new(3, 2))) {
        let r = normal_form(&f, rb1().rules(), 10_000);
        prop_assert!(!r.exhausted);
        for w in r.result.support() {
            prop_assert!(is_irreducible(w, rb1()));
        }
        // f - nf(f) is the sum of the rewrites taken.
        prop_assert_eq!(f.clone() - r.result.clone(), r.trace.reconstruct());
        let again = normal_form(&r.result, rb1().rules(), 10_000);
        prop_assert!(again.trace.is_empty());
        prop_assert_eq!(again.result, r.result);
    }

    #[test]
    fn normal_form_is_linear(f in poly(Bounds::new(3, 2)), g in poly(Bounds::new(3, 2)), c in -3i64..=3) {
        let nf = |p: &OPoly| normal_form(p, rb1().rules(), 10_000).result;
        let lhs = nf(&(f.clone() + g.scale(&rational(c))));
        let rhs = nf(&f) + nf(&g).scale(&rational(c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_satisfies_the_identity(
        lambda in 0i64..=1,
        u in prop::sample::select(pool(Bounds::new(2, 1))),
        v in prop::sample::select(pool(Bounds::new(2, 0))),
    ) {
        // [u][v] = [u[v]] + [[u]v] + lambda [uv]
        let q = quotient(lambda);
        let (u, v) = (OPoly::word(u), OPoly::word(v));
        let lhs = q.nf_multiply(&q.nf_operator(&u).unwrap(), &q.nf_operator(&v).unwrap()).unwrap();
        let b = &u * &v.apply_bracket() + &u.apply_bracket() * &v + (&u * &v).scale(&rational(lambda));
        let rhs = q.nf_operator(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn letters_commute_in_the_quotient(
        u in prop::sample::select(pool(Bounds::new(2, 0))),
        v in prop::sample::select(pool(Bounds::new(2, 0))),
    ) {
        let q = quotient(1);
        let (u, v) = (OPoly::word(u), OPoly::word(v));
        prop_assert_eq!(q.nf_multiply(&u, &v).unwrap(), q.nf_multiply(&v, &u).unwrap());
    }
}
