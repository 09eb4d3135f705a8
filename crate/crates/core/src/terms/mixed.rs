//! Words mixing elements of a finite monoid with free letters, reduced to the
//! unique expression `a0 t1 a1 ... tn an` where adjacent monoid elements are
//! multiplied out and the monoid unit is dropped.

use crate::error::{Error, Result};

use super::Letter;

/// A finite monoid given by its multiplication table.
#[derive(Clone, Debug)]
pub struct MonoidOracle {
    names: Vec<String>,
    unit: usize,
    table: Vec<Vec<usize>>,
}

impl MonoidOracle {
    /// Validates associativity on all triples and the two-sided unit law.
    pub fn new(names: Vec<String>, unit: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidOracle("empty element set".into()));
        }
        if unit >= n {
            return Err(Error::InvalidOracle("unit is not an element".into()));
        }
        if table.len() != n
            || table
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&c| c >= n))
        {
            return Err(Error::InvalidOracle(
                "table must be a total n x n map into the elements".into(),
            ));
        }
        for a in 0..n {
            if table[unit][a] != a || table[a][unit] != a {
                return Err(Error::InvalidOracle(format!(
                    "`{}` is not a two-sided unit for `{}`",
                    names[unit], names[a]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidOracle(format!(
                            "not associative on ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(MonoidOracle { names, unit, table })
    }

    /// The cyclic group of order `n`, elements `e, g, g2, ...`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        MonoidOracle::new(names, 0, table).expect("cyclic group is a monoid")
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MixedFactor {
    Elem(usize),
    Letter(Letter),
    Bracket(Vec<MixedFactor>),
}

/// Merges adjacent monoid factors and drops units, at every nesting level.
pub fn normalize_mixed_word(
    factors: &[MixedFactor],
    oracle: &MonoidOracle,
) -> Result<Vec<MixedFactor>> {
    let mut out: Vec<MixedFactor> = Vec::with_capacity(factors.len());
    for f in factors {
        match f {
            MixedFactor::Elem(t) => {
                if *t >= oracle.len() {
                    return Err(Error::InvalidOracle(format!(
                        "element #{t} is not in the monoid"
                    )));
                }
                if let Some(MixedFactor::Elem(prev)) = out.last_mut() {
                    *prev = oracle.mul(*prev, *t);
                } else {
                    out.push(MixedFactor::Elem(*t));
                }
                if matches!(out.last(), Some(MixedFactor::Elem(e)) if *e == oracle.unit()) {
                    out.pop();
                }
            }
            MixedFactor::Letter(l) => out.push(MixedFactor::Letter(*l)),
            MixedFactor::Bracket(inner) => {
                out.push(MixedFactor::Bracket(normalize_mixed_word(inner, oracle)?))
            }
        }
    }
    Ok(out)
}
