use std::sync::OnceLock;

use opalg::poly::rational;
use opalg::terms::words_within;
use opalg::{
    compositions, Alphabet, Bounds, CompositionKind, Element, Factor, Letter, MonomialOrder, OPoly,
    OrderSpec, Preset, Word,
};
use proptest::prelude::*;

fn pool() -> Vec<Word> {
    let letters = [Letter(0), Letter(1)];
    words_within(&letters, Bounds::new(3, 2))
        .into_iter()
        .filter(|w| !w.is_unit())
        .collect()
}

fn all_words() -> &'static [Word] {
    static WORDS: OnceLock<Vec<Word>> = OnceLock::new();
    WORDS.get_or_init(|| words_within(&[Letter(0), Letter(1)], Bounds::new(5, 3)))
}

/// A monic polynomial led by `lead`, with lower terms drawn from `tail`.
fn element(order: &OrderSpec, lead: &Word, tail: &[(Word, i64)]) -> Element {
    let mut f = OPoly::word(lead.clone());
    for (w, c) in tail {
        if order.compare(w, lead).is_lt() && *c != 0 {
            f.add_term(rational(*c), w.clone());
        }
    }
    Element::new("f", f, order, false).unwrap()
}

/// Every way of seeing `small` inside `big`: top-level runs and, recursively,
/// runs inside brackets. Returned as the number of places.
fn count_occurrences(big: &Word, small: &Word) -> usize {
    let (bf, sf) = (big.factors(), small.factors());
    let mut n = 0;
    if sf.len() <= bf.len() {
        n += (0..=bf.len() - sf.len())
            .filter(|&i| bf[i..i + sf.len()] == *sf)
            .count();
    }
    for f in bf {
        if let Factor::Bracket(inner) = f {
            n += count_occurrences(inner, small);
        }
    }
    n
}

fn orders() -> impl Strategy<Value = OrderSpec> {
    prop::sample::select(vec![Preset::Deglex, Preset::Db, Preset::Dt]).prop_map(OrderSpec::new)
}

fn tail() -> impl Strategy<Value = Vec<(Word, i64)>> {
    prop::collection::vec((prop::sample::select(pool()), -2i64..=2), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn intersections_match_brute_force(
        order in orders(),
        a in prop::sample::select(pool()),
        b in prop::sample::select(pool()),
        ta in tail(),
        tb in tail(),
    ) {
        let bounds = Bounds::new(5, 3);
        let f = element(&order, &a, &ta);
        let g = element(&order, &b, &tb);
        let recs = compositions(&f, &g, &order, bounds).unwrap();

        // w = a*u = v*b with breadth strictly between max and sum.
        let (m, n) = (a.breadth(), b.breadth());
        let mut expected: Vec<Word> = all_words()
            .iter()
            .filter(|w| {
                let wf = w.factors();
                let k = wf.len();
                k as u32 > m.max(n)
                    && (k as u32) < m + n
                    && wf[..m as usize] == *a.factors()
                    && wf[k - n as usize..] == *b.factors()
            })
            .cloned()
            .collect();
        expected.sort();
        let mut got: Vec<Word> = recs
            .iter()
            .filter(|r| r.kind == CompositionKind::Intersection)
            .map(|r| r.w.clone())
            .collect();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn inclusions_match_brute_force(
        order in orders(),
        a in prop::sample::select(pool()),
        b in prop::sample::select(pool()),
        ta in tail(),
        tb in tail(),
    ) {
        let f = element(&order, &a, &ta);
        let g = element(&order, &b, &tb);
        let recs = compositions(&f, &g, &order, Bounds::new(5, 3)).unwrap();
        let incl: Vec<_> = recs.iter().filter(|r| r.kind == CompositionKind::Inclusion).collect();
        let mut expected = count_occurrences(&a, &b);
        if f.poly == g.poly {
            expected -= 1;
        }
        prop_assert_eq!(incl.len(), expected);
        for r in incl {
            prop_assert_eq!(&r.w, &a);
        }
    }

    #[test]
    fn composition_values_cancel_the_ambiguity(
        order in orders(),
        a in prop::sample::select(pool()),
        b in prop::sample::select(pool()),
        ta in tail(),
        tb in tail(),
    ) {
        let f = element(&order, &a, &ta);
        let g = element(&order, &b, &tb);
        for r in compositions(&f, &g, &order, Bounds::new(5, 3)).unwrap() {
            for m in r.value.support() {
                prop_assert!(order.compare(m, &r.w).is_lt());
            }
        }
    }
}

#[test]
fn overlap_of_a_word_with_itself() {
    let a = Alphabet::new(["z1", "z2"]).unwrap();
    let db = OrderSpec::new(Preset::Db);
    let lead = a.parse_word("z1*z1*z1").unwrap();
    let f = element(&db, &lead, &[]);
    let recs = compositions(&f, &f, &db, Bounds::new(5, 0)).unwrap();
    let mut ws: Vec<String> = recs.iter().map(|r| a.show(&r.w).to_string()).collect();
    ws.sort();
    // overlaps of one and two letters; the whole word is not an inclusion of itself
    assert_eq!(ws, ["z1*z1*z1*z1", "z1*z1*z1*z1*z1"]);
}

#[test]
fn compositions_outside_bounds_are_dropped() {
    let a = Alphabet::new(["z1", "z2"]).unwrap();
    let db = OrderSpec::new(Preset::Db);
    let lead = a.parse_word("z1*z1").unwrap();
    let f = element(&db, &lead, &[]);
    assert_eq!(
        compositions(&f, &f, &db, Bounds::new(3, 0)).unwrap().len(),
        1
    );
    assert!(compositions(&f, &f, &db, Bounds::new(2, 0))
        .unwrap()
        .is_empty());
}
