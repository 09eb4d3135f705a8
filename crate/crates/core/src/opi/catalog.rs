//! Built-in families of identities, addressed by ids such as `rb:6?lambda=1`,
//! `diff:1?a=1,b=0,c=0`, `diffprime?c=1`, `nijenhuis`, `averaging` and
//! `reynolds?n=4`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::Opi;
use crate::error::{Error, Result};
use crate::orders::Preset;
use crate::poly::{rational, Coeff, OPoly};
use crate::terms::Alphabet;

/// A resolved catalog id.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// Canonical id: family and every parameter value.
    pub id: String,
    pub opis: Vec<Opi>,
    /// The order the family is meant to be used with.
    pub order: Preset,
    /// `None` when the declared order gives the intended leading monomial;
    /// otherwise the reason it does not.
    pub unsupported: Option<String>,
}

impl CatalogEntry {
    pub fn is_supported(&self) -> bool {
        self.unsupported.is_none()
    }
}

struct Params {
    values: BTreeMap<String, Coeff>,
}

impl Params {
    fn parse(query: &str, allowed: &dyn Fn(&str) -> bool, family: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for part in query.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                Error::Catalog(format!("parameter `{part}` is not of the form key=value"))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !allowed(k) {
                return Err(Error::Catalog(format!(
                    "`{family}` takes no parameter `{k}`"
                )));
            }
            let c = Coeff::from_str(v)
                .map_err(|_| Error::Catalog(format!("`{v}` is not a rational number")))?;
            if values.insert(k.to_string(), c).is_some() {
                return Err(Error::Catalog(format!("parameter `{k}` given twice")));
            }
        }
        Ok(Params { values })
    }

    fn get(&mut self, key: &str, default: i64) -> Coeff {
        self.values
            .entry(key.to_string())
            .or_insert_with(|| rational(default))
            .clone()
    }

    fn canonical(&self, family: &str) -> String {
        if self.values.is_empty() {
            return family.to_string();
        }
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{family}?{}", parts.join(","))
    }
}

/// Builds a polynomial over `vars` from `(coefficient, monomial)` pairs.
fn poly(vars: &Alphabet, terms: &[(Coeff, &str)]) -> OPoly {
    OPoly::from_terms(
        terms
            .iter()
            .map(|(c, m)| (c.clone(), vars.parse_word(m).expect("catalog monomial"))),
    )
}

fn one() -> Coeff {
    Coeff::one()
}

fn neg(c: &Coeff) -> Coeff {
    -c.clone()
}

fn xy() -> Alphabet {
    Alphabet::new(["x", "y"]).expect("valid")
}

/// `B(x, y)` for items 1 to 14 of the Rota-Baxter list.
fn rb_b(item: u32, lambda: &Coeff, c: &Coeff) -> Result<Vec<(Coeff, &'static str)>> {
    let l = lambda.clone();
    let m1 = neg(&one());
    Ok(match item {
        1 => vec![(one(), "x*[y]")],
        2 => vec![(one(), "[x]*y")],
        3 => vec![(one(), "x*[y]"), (one(), "y*[x]")],
        4 => vec![(one(), "[x]*y"), (one(), "[y]*x")],
        5 => vec![(one(), "x*[y]"), (one(), "[x]*y"), (m1, "[x*y]")],
        6 => vec![(one(), "x*[y]"), (one(), "[x]*y"), (l, "x*y")],
        7 => vec![(one(), "x*[y]"), (m1, "x*[1]*y"), (l, "x*y")],
        8 => vec![(one(), "[x]*y"), (m1, "x*[1]*y"), (l, "x*y")],
        9 => vec![
            (one(), "x*[y]"),
            (one(), "[x]*y"),
            (m1, "x*[1]*y"),
            (l, "x*y"),
        ],
        10 => vec![
            (one(), "x*[y]"),
            (one(), "[x]*y"),
            (m1.clone(), "x*y*[1]"),
            (m1, "x*[1]*y"),
            (l, "x*y"),
        ],
        11 => vec![
            (one(), "x*[y]"),
            (one(), "[x]*y"),
            (m1.clone(), "x*[1]*y"),
            (m1, "[x*y]"),
            (l, "x*y"),
        ],
        12 => vec![
            (one(), "x*[y]"),
            (one(), "[x]*y"),
            (m1.clone(), "x*[1]*y"),
            (m1, "[1]*x*y"),
            (l, "x*y"),
        ],
        13 => vec![(c.clone(), "x*[1]*y"), (l, "x*y")],
        14 => vec![(c.clone(), "y*[1]*x"), (l, "y*x")],
        _ => {
            return Err(Error::Catalog(format!(
                "the Rota-Baxter list has items 1 to 14, not {item}"
            )))
        }
    })
}

/// `[x]*[y] - [B(x, y)]`.
fn rb_opi(name: &str, b: &[(Coeff, &str)]) -> Result<Opi> {
    let vars = xy();
    let mut body = poly(&vars, &[(one(), "[x]*[y]")]);
    body = body - poly(&vars, b).apply_bracket();
    Opi::new(name, vars, body)
}

/// `[x*y] - N(x, y)`.
fn diff_opi(name: &str, n: &[(Coeff, &str)]) -> Result<Opi> {
    let vars = xy();
    let body = poly(&vars, &[(one(), "[x*y]")]) - poly(&vars, n);
    Opi::new(name, vars, body)
}

fn bracket_one_power(k: u32) -> String {
    vec!["[1]"; k as usize].join("*")
}

/// Resolves a catalog id.
pub fn parse(id: &str) -> Result<CatalogEntry> {
    let id = id.trim();
    let (head, query) = id.split_once('?').unwrap_or((id, ""));
    let (family, item) = match head.split_once(':') {
        Some((f, n)) => {
            let n: u32 = n
                .trim()
                .parse()
                .map_err(|_| Error::Catalog(format!("`{n}` is not an item number")))?;
            (f.trim(), Some(n))
        }
        None => (head.trim(), None),
    };
    let need_item = |family: &str| {
        item.ok_or_else(|| {
            Error::Catalog(format!(
                "`{family}` needs an item number, e.g. `{family}:1`"
            ))
        })
    };
    let no_item = |family: &str| match item {
        Some(_) => Err(Error::Catalog(format!("`{family}` takes no item number"))),
        None => Ok(()),
    };
    match family {
        "rb" => {
            let n = need_item("rb")?;
            let allowed = |k: &str| match n {
                13 | 14 => k == "lambda" || k == "c",
                6..=12 => k == "lambda",
                _ => false,
            };
            let mut p = Params::parse(query, &allowed, "rb")?;
            let lambda = if (6..=14).contains(&n) { p.get("lambda", 0) } else { Coeff::zero() };
            let c = if n >= 13 { p.get("c", 1) } else { Coeff::zero() };
            let canon = p.canonical(&format!("rb:{n}"));
            let opi = rb_opi(&canon, &rb_b(n, &lambda, &c)?)?;
            Ok(CatalogEntry {
                id: canon,
                opis: vec![opi],
                order: Preset::Db,
                unsupported: None,
            })
        }
        "nijenhuis" => {
            no_item("nijenhuis")?;
            Params::parse(query, &|_| false, "nijenhuis")?;
            let vars = xy();
            let body = poly(
                &vars,
                &[
                    (one(), "[x]*[y]"),
                    (neg(&one()), "[[x]*y]"),
                    (neg(&one()), "[x*[y]]"),
                    (one(), "[[x*y]]"),
                ],
            );
            Ok(CatalogEntry {
                id: "nijenhuis".into(),
                opis: vec![Opi::new("nijenhuis", vars, body)?],
                order: Preset::Db,
                unsupported: None,
            })
        }
        "diff" => diff_entry(need_item("diff")?, query),
        "diffprime" => {
            no_item("diffprime")?;
            let mut p = Params::parse(query, &|k| k == "c", "diffprime")?;
            let c = p.get("c", 1);
            let canon = p.canonical("diffprime");
            let vars = Alphabet::new(["z"]).expect("valid");
            let body = poly(&vars, &[(one(), "[z]"), (neg(&c), "z")]);
            Ok(CatalogEntry {
                id: canon.clone(),
                opis: vec![Opi::new(canon, vars, body)?],
                order: Preset::Dt,
                unsupported: None,
            })
        }
        "averaging" => {
            no_item("averaging")?;
            Params::parse(query, &|_| false, "averaging")?;
            let vars = Alphabet::new(["x1", "x2"]).expect("valid");
            let m1 = neg(&one());
            let opis = vec![
                Opi::new("averaging.1", vars.clone(), poly(&vars, &[(one(), "[[x1]*x2]"), (m1.clone(), "[x1]*[x2]")]))?,
                Opi::new("averaging.2", vars.clone(), poly(&vars, &[(one(), "[x1*[x2]]"), (m1.clone(), "[x1]*[x2]")]))?,
                Opi::new("averaging.3", vars.clone(), poly(&vars, &[(one(), "[[x1]]*[x2]"), (m1, "[x1]*[[x2]]")]))?,
            ];
            Ok(CatalogEntry {
                id: "averaging".into(),
                opis,
                order: Preset::Dt,
                unsupported: None,
            })
        }
        "reynolds" => {
            no_item("reynolds")?;
            let mut p = Params::parse(query, &|k| k == "n", "reynolds")?;
            let n = p.get("n", 2);
            if !n.is_integer() || n < rational(2) || n > rational(8) {
                return Err(Error::Catalog("reynolds truncation `n` must be an integer from 2 to 8".into()));
            }
            let n = n.to_integer().to_string().parse::<usize>().expect("small integer");
            let canon = p.canonical("reynolds");
            let opis = (2..=n).map(reynolds_opi).collect::<Result<Vec<_>>>()?;
            Ok(CatalogEntry {
                id: canon,
                opis,
                order: Preset::Dt,
                unsupported: None,
            })
        }
        other => Err(Error::Catalog(format!(
            "unknown family `{other}` (expected rb, nijenhuis, diff, diffprime, averaging or reynolds)"
        ))),
    }
}

/// `[[x1]...[xk]] - sum_i [[x1]..x_i..[xk]] + [x1]...[xk]`.
fn reynolds_opi(k: usize) -> Result<Opi> {
    let names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let vars = Alphabet::new(&names)?;
    let bracketed: Vec<String> = names.iter().map(|x| format!("[{x}]")).collect();
    let product = bracketed.join("*");
    let mut terms: Vec<(Coeff, String)> =
        vec![(one(), format!("[{product}]")), (one(), product.clone())];
    for i in 0..k {
        let mut fs = bracketed.clone();
        fs[i] = names[i].clone();
        terms.push((neg(&one()), format!("[{}]", fs.join("*"))));
    }
    let refs: Vec<(Coeff, &str)> = terms.iter().map(|(c, s)| (c.clone(), s.as_str())).collect();
    Opi::new(format!("reynolds.{k}"), vars.clone(), poly(&vars, &refs))
}

fn diff_entry(item: u32, query: &str) -> Result<CatalogEntry> {
    match item {
        1 => {
            let mut p = Params::parse(query, &|k| matches!(k, "a" | "b" | "c"), "diff")?;
            let (a, b, c) = (p.get("a", 1), p.get("b", 0), p.get("c", 0));
            if &a * &a != &a + &b * &c {
                return Err(Error::Catalog(format!(
                    "diff:1 needs a^2 = a + bc, got a={a}, b={b}, c={c}"
                )));
            }
            let canon = p.canonical("diff:1");
            let n = [
                (a.clone(), "x*[y]"),
                (a, "[x]*y"),
                (b.clone(), "[x]*[y]"),
                (c, "x*y"),
            ];
            let unsupported =
                (!b.is_zero()).then(|| "b != 0 puts [x]*[y] above [x*y] under dt".to_string());
            Ok(CatalogEntry {
                opis: vec![diff_opi(&canon, &n)?],
                id: canon,
                order: Preset::Dt,
                unsupported,
            })
        }
        2 => {
            let mut p = Params::parse(query, &|k| matches!(k, "a" | "b"), "diff")?;
            let (a, b) = (p.get("a", 0), p.get("b", 1));
            let canon = p.canonical("diff:2");
            let ab = &a * &b;
            let n = [
                (&ab * &b, "y*x"),
                (b.clone(), "x*y"),
                (a.clone(), "[y]*[x]"),
                (neg(&ab), "y*[x]"),
                (neg(&ab), "[y]*x"),
            ];
            let unsupported =
                (!a.is_zero()).then(|| "a != 0 puts [y]*[x] above [x*y] under dt".to_string());
            Ok(CatalogEntry {
                opis: vec![diff_opi(&canon, &n)?],
                id: canon,
                order: Preset::Dt,
                unsupported,
            })
        }
        3 => {
            let is_weight = |k: &str| {
                k.len() == 3 && k.starts_with('l') && k[1..].chars().all(|ch| ch.is_ascii_digit())
            };
            let mut p = Params::parse(query, &is_weight, "diff")?;
            if p.values.is_empty() {
                p.get("l00", 1);
            }
            let canon = p.canonical("diff:3");
            let mut monomials = Vec::new();
            let mut heavy = false;
            for (k, c) in &p.values {
                let i = k[1..2].parse::<u32>().expect("digit");
                let j = k[2..3].parse::<u32>().expect("digit");
                if !c.is_zero() && i + j >= 2 {
                    heavy = true;
                }
                let mut parts = Vec::new();
                if i > 0 {
                    parts.push(bracket_one_power(i));
                }
                parts.push("x*y".to_string());
                if j > 0 {
                    parts.push(bracket_one_power(j));
                }
                monomials.push((c.clone(), parts.join("*")));
            }
            let n: Vec<(Coeff, &str)> = monomials
                .iter()
                .map(|(c, s)| (c.clone(), s.as_str()))
                .collect();
            let unsupported =
                heavy.then(|| "a weight with i + j >= 2 puts a monomial above [x*y]".to_string());
            Ok(CatalogEntry {
                opis: vec![diff_opi(&canon, &n)?],
                id: canon,
                order: Preset::Dt,
                unsupported,
            })
        }
        4 => {
            let mut p = Params::parse(query, &|k| matches!(k, "a" | "b"), "diff")?;
            let (a, b) = (p.get("a", 0), p.get("b", 0));
            let canon = p.canonical("diff:4");
            let n = [
                (one(), "x*[y]"),
                (one(), "[x]*y"),
                (a, "x*[1]*y"),
                (b, "x*y"),
            ];
            Ok(CatalogEntry {
                opis: vec![diff_opi(&canon, &n)?],
                id: canon,
                order: Preset::Dt,
                unsupported: None,
            })
        }
        5 | 6 => {
            let mut p = Params::parse(query, &|k| k == "a", "diff")?;
            let a = p.get("a", 0);
            let canon = p.canonical(&format!("diff:{item}"));
            let n = if item == 5 {
                vec![
                    (one(), "[x]*y"),
                    (a.clone(), "x*[1]*y"),
                    (neg(&a), "x*y*[1]"),
                ]
            } else {
                vec![
                    (one(), "x*[y]"),
                    (a.clone(), "x*[1]*y"),
                    (neg(&a), "[1]*x*y"),
                ]
            };
            Ok(CatalogEntry {
                opis: vec![diff_opi(&canon, &n)?],
                id: canon,
                order: Preset::Dt,
                unsupported: None,
            })
        }
        _ => Err(Error::Catalog(format!(
            "the differential list has items 1 to 6, not {item}"
        ))),
    }
}

/// Resolves several ids and concatenates their identities. The declared
/// order is that of the first entry.
pub fn parse_many(ids: &[String]) -> Result<(Vec<Opi>, Option<Preset>)> {
    let mut opis = Vec::new();
    let mut order = None;
    for id in ids {
        let e = parse(id)?;
        order.get_or_insert(e.order);
        opis.extend(e.opis);
    }
    Ok((opis, order))
}

/// The 14 Rota-Baxter items at each weight in `lambdas`, with `c = 1`.
/// Items without a weight parameter appear once.
pub fn rb_list(lambdas: &[i64]) -> Vec<String> {
    let mut out = Vec::new();
    for n in 1..=14 {
        match n {
            1..=5 => out.push(format!("rb:{n}")),
            6..=12 => out.extend(lambdas.iter().map(|l| format!("rb:{n}?lambda={l}"))),
            _ => out.extend(lambdas.iter().map(|l| format!("rb:{n}?c=1,lambda={l}"))),
        }
    }
    out
}

/// One representative of every family with the declared order applicable.
pub fn standard_ids() -> Vec<String> {
    let mut ids = rb_list(&[0, 1]);
    ids.extend(
        [
            "nijenhuis",
            "diff:1?a=1,b=0,c=0",
            "diff:1?a=0,b=0,c=1",
            "diff:2?a=0,b=1",
            "diff:3?l00=1,l01=3,l10=2",
            "diff:4?a=0,b=0",
            "diff:5?a=1",
            "diff:6?a=1",
            "diffprime?c=1",
            "averaging",
            "reynolds?n=4",
        ]
        .map(String::from),
    );
    ids
}
