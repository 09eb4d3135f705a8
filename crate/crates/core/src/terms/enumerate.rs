use std::collections::HashMap;

use super::{Bounds, Factor, Letter, Word};

/// All words over `letters` with exactly the given degrees, in structural order.
pub fn words_exact(letters: &[Letter], z_degree: u32, op_degree: u32) -> Vec<Word> {
    let mut memo = HashMap::new();
    let mut out = exact(letters, z_degree, op_degree, &mut memo);
    out.sort_by(Word::structural_cmp);
    out
}

/// All words over `letters` within `bounds`, in structural order.
pub fn words_within(letters: &[Letter], bounds: Bounds) -> Vec<Word> {
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    for z in 0..=bounds.z_degree {
        for p in 0..=bounds.op_degree {
            out.extend(exact(letters, z, p, &mut memo));
        }
    }
    out.sort_by(Word::structural_cmp);
    out
}

fn exact(
    letters: &[Letter],
    z: u32,
    p: u32,
    memo: &mut HashMap<(u32, u32), Vec<Word>>,
) -> Vec<Word> {
    if let Some(v) = memo.get(&(z, p)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if z == 0 && p == 0 {
        out.push(Word::unit());
    } else {
        // First factor a letter.
        if z >= 1 {
            for rest in exact(letters, z - 1, p, memo) {
                for &l in letters {
                    let mut f = vec![Factor::Letter(l)];
                    f.extend_from_slice(rest.factors());
                    out.push(Word::from_factors(f));
                }
            }
        }
        // First factor a bracket holding (zi, pi - 1).
        for zi in 0..=z {
            for pi in 1..=p {
                let inner = exact(letters, zi, pi - 1, memo);
                let rest = exact(letters, z - zi, p - pi, memo);
                for w in &inner {
                    for r in &rest {
                        let mut f = vec![Factor::Bracket(w.clone())];
                        f.extend_from_slice(r.factors());
                        out.push(Word::from_factors(f));
                    }
                }
            }
        }
    }
    memo.insert((z, p), out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Alphabet;
    use std::collections::BTreeSet;

    /// Independent oracle: close the set of all words under letter
    /// multiplication and bracketing, pruning by the bounds.
    fn closure(letters: &[Letter], bounds: Bounds) -> BTreeSet<Word> {
        let mut set: BTreeSet<Word> = BTreeSet::new();
        set.insert(Word::unit());
        loop {
            let mut next = set.clone();
            for u in &set {
                let b = u.clone().bracket();
                if bounds.admits(&b) {
                    next.insert(b);
                }
                for v in &set {
                    let uv = u.mul(v);
                    if bounds.admits(&uv) {
                        next.insert(uv);
                    }
                }
                for &l in letters {
                    let ul = u.mul(&Word::letter(l));
                    if bounds.admits(&ul) {
                        next.insert(ul);
                    }
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn enumeration_matches_closure() {
        let a = Alphabet::new(["z1", "z2"]).unwrap();
        let letters: Vec<Letter> = a.letters().collect();
        for (d, p) in [(0, 0), (1, 1), (2, 1), (2, 2), (3, 1), (1, 3)] {
            let b = Bounds::new(d, p);
            let got = words_within(&letters, b);
            let set: BTreeSet<Word> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "duplicates at {b}");
            assert_eq!(set, closure(&letters, b), "bounds {b}");
        }
    }

    #[test]
    fn small_counts() {
        let z = [Letter(0)];
        // 1, [1], z, [z], z*[1], [1]*z, [z]... at (1,1): 1, z, [1], [z], z*[1], [1]*z
        assert_eq!(words_within(&z, Bounds::new(1, 1)).len(), 6);
        assert_eq!(words_exact(&z, 0, 2).len(), 2); // [[1]], [1]*[1]
    }
}
