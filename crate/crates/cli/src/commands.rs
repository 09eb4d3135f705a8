use std::fmt::Write as _;

use opalg::catalog;
use opalg::gsbasis::{Element, QuotientAlgebra};
use opalg::rewrite::{
    check_diff_type, check_rb_type, diff_candidate, normal_form_with, rb_candidate, TypeReport,
};
use opalg::{
    check_gs, compositions, compositions_within, enumerate_irr, is_trivial, Alphabet, Bounds,
    Error, GeneratorSet, MonomialOrder, OPoly, OrderSpec, Preset, Render, Result, Strategy, Word,
};
use serde_json::json;

use crate::config::{Common, RunConfig};
use crate::{Command, Demo};

pub struct Output {
    pub text: String,
    pub json: Option<String>,
    /// False on a verified failure: exit code 1.
    pub ok: bool,
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

pub fn run(command: &Command, common: &Common) -> Result<Output> {
    match command {
        Command::Nf { poly, random } => {
            let cfg = RunConfig::resolve(common, &[poly])?;
            nf(&cfg, poly, *random)
        }
        Command::Compare { u, v } => {
            let cfg = RunConfig::resolve(common, &[u, v])?;
            let (a, b) = (cfg.alphabet.parse_word(u)?, cfg.alphabet.parse_word(v)?);
            let rel = match cfg.order.compare(&a, &b) {
                std::cmp::Ordering::Less => "LT",
                std::cmp::Ordering::Equal => "EQ",
                std::cmp::Ordering::Greater => "GT",
            };
            Ok(Output {
                text: format!("{rel}\n"),
                json: Some(pretty(
                    &json!({"order": cfg.order.to_string(), "u": u, "v": v, "result": rel}),
                )),
                ok: true,
            })
        }
        Command::Instantiate { bindings } => {
            let values: Vec<&str> = bindings
                .iter()
                .map(|b| b.split_once('=').map(|(_, v)| v).unwrap_or(""))
                .collect();
            let cfg = RunConfig::resolve(common, &values)?;
            instantiate(&cfg, bindings)
        }
        Command::Compositions { f, g, check } => {
            let texts: Vec<&str> = f.iter().chain(g.iter()).map(String::as_str).collect();
            let cfg = RunConfig::resolve(common, &texts)?;
            composition_list(&cfg, f.as_deref(), g.as_deref(), *check)
        }
        Command::CheckGs => {
            let cfg = RunConfig::resolve(common, &[])?;
            let report = check_gs(&cfg.generators()?, cfg.bounds, cfg.fuel);
            Ok(Output {
                text: report.render(),
                json: Some(pretty(&report)),
                ok: report.passed,
            })
        }
        Command::CheckType => {
            let cfg = RunConfig::resolve(common, &[])?;
            check_type(&cfg)
        }
        Command::Basis => {
            let cfg = RunConfig::resolve(common, &[])?;
            let words = enumerate_irr(&cfg.generators()?, cfg.bounds);
            let shown: Vec<String> = words.iter().map(|w| w.to_text(&cfg.alphabet)).collect();
            let mut text = format!("{} irreducible words within {}\n", shown.len(), cfg.bounds);
            for w in &shown {
                let _ = writeln!(text, "{w}");
            }
            Ok(Output {
                text,
                json: Some(pretty(
                    &json!({"bounds": cfg.bounds, "order": cfg.order.to_string(), "words": shown}),
                )),
                ok: true,
            })
        }
        Command::QuotientEval { poly } => {
            let cfg = RunConfig::resolve(common, &[poly])?;
            let f = cfg.parse(poly)?;
            match QuotientAlgebra::new(cfg.generators()?, cfg.bounds, cfg.fuel) {
                Err(Error::NotGs(tag)) => Ok(Output {
                    text: format!("refused: {tag}\n"),
                    json: Some(pretty(&json!({"refused": tag}))),
                    ok: false,
                }),
                Err(e) => Err(e),
                Ok(q) => {
                    let n = q.nf(&f)?;
                    let shown = n.to_text_ordered(&cfg.order, &cfg.alphabet);
                    Ok(Output {
                        text: format!("{shown}\n"),
                        json: Some(pretty(
                            &json!({"input": poly, "normal_form": shown, "bounds": cfg.bounds}),
                        )),
                        ok: true,
                    })
                }
            }
        }
        Command::Demo { name } => demo(*name, common.fuel),
    }
}

fn nf(cfg: &RunConfig, text: &str, random: bool) -> Result<Output> {
    let f = cfg.parse(text)?;
    let gens = cfg.generators()?;
    let strategy = if random {
        Strategy::Random(cfg.seed)
    } else {
        Strategy::Deterministic
    };
    let r = normal_form_with(&f, gens.rules(), cfg.fuel, strategy);
    let shown = r.result.to_text_ordered(&cfg.order, &cfg.alphabet);
    let mut text = String::new();
    if cfg.trace {
        text.push_str(&r.trace.render(gens.rules()));
    }
    if r.exhausted {
        let _ = writeln!(
            text,
            "fuel exhausted after {} steps; partial result:",
            r.trace.len()
        );
    }
    let _ = writeln!(text, "{shown}");
    Ok(Output {
        text,
        json: Some(pretty(&json!({
            "input": text_of(&f, cfg),
            "normal_form": shown,
            "steps": r.trace.len(),
            "exhausted": r.exhausted,
            "order": cfg.order.to_string(),
        }))),
        ok: !r.exhausted,
    })
}

fn text_of(f: &OPoly, cfg: &RunConfig) -> String {
    f.to_text_ordered(&cfg.order, &cfg.alphabet)
}

fn instantiate(cfg: &RunConfig, bindings: &[String]) -> Result<Output> {
    if cfg.opis.is_empty() {
        return Err(Error::Catalog(
            "instantiate needs at least one --catalog".into(),
        ));
    }
    let mut values: Vec<(&str, Word)> = Vec::new();
    for b in bindings {
        let (name, w) = b
            .split_once('=')
            .ok_or_else(|| Error::Shape(format!("binding `{b}` must look like `x=word`")))?;
        values.push((name.trim(), cfg.alphabet.parse_word(w)?));
    }
    let mut text = String::new();
    let mut rows = Vec::new();
    for opi in &cfg.opis {
        let p = opi.instantiate_named(&values)?;
        let shown = p.to_text_ordered(&cfg.order, &cfg.alphabet);
        let lead = if p.is_zero() {
            "none (zero)".to_string()
        } else {
            p.leading_word(&cfg.order).to_text(&cfg.alphabet)
        };
        let _ = writeln!(text, "{}: {shown}\n  leading monomial {lead}", opi.name());
        rows.push(json!({"identity": opi.name(), "instance": shown, "leading": lead}));
    }
    Ok(Output {
        text,
        json: Some(pretty(&rows)),
        ok: true,
    })
}

fn composition_list(
    cfg: &RunConfig,
    f: Option<&str>,
    g: Option<&str>,
    check: bool,
) -> Result<Output> {
    let gens = cfg.generators()?;
    let records = match (f, g) {
        (Some(f), Some(g)) => {
            let f = Element::new("f", cfg.parse(f)?, &cfg.order, false)?;
            let g = Element::new("g", cfg.parse(g)?, &cfg.order, false)?;
            compositions(&f, &g, &cfg.order, cfg.bounds)?
        }
        (None, None) => compositions_within(&gens, cfg.bounds),
        _ => return Err(Error::Shape("give both f and g, or neither".into())),
    };
    let mut text = format!("{} compositions within {}\n", records.len(), cfg.bounds);
    let mut rows = Vec::new();
    let mut all_trivial = true;
    for mut r in records {
        if check {
            let t = is_trivial(&r.value, &gens, &r.w, cfg.fuel)?;
            all_trivial &= t.trivial;
            r.verdict = Some(t);
        }
        let line = r.render(&cfg.alphabet, &cfg.order);
        let _ = writeln!(text, "{line}");
        rows.push(json!({
            "kind": r.kind,
            "pair": r.pair,
            "f": r.f.label,
            "g": r.g.label,
            "w": r.w.to_text(&cfg.alphabet),
            "witness": r.witness.to_text(&cfg.alphabet),
            "value": r.value.to_text_ordered(&cfg.order, &cfg.alphabet),
            "trivial": r.verdict.as_ref().map(|t| t.trivial),
            "residue": r.verdict.as_ref().map(|t| t.residue.to_text_ordered(&cfg.order, &cfg.alphabet)),
        }));
    }
    Ok(Output {
        text,
        json: Some(pretty(&rows)),
        ok: all_trivial,
    })
}

fn check_type(cfg: &RunConfig) -> Result<Output> {
    if cfg.entries.is_empty() {
        return Err(Error::Catalog(
            "check-type needs at least one --catalog".into(),
        ));
    }
    let mut reports: Vec<TypeReport> = Vec::new();
    let mut text = String::new();
    for e in &cfg.entries {
        if let Some(why) = &e.unsupported {
            let _ = writeln!(
                text,
                "{}: unsupported under the declared order ({why})",
                e.id
            );
        }
        for opi in &e.opis {
            let report = if let Ok(b) = rb_candidate(opi) {
                check_rb_type(
                    opi.vars(),
                    &b,
                    &cfg.alphabet,
                    cfg.order,
                    cfg.bounds,
                    cfg.fuel,
                )?
            } else {
                let n = diff_candidate(opi)?;
                check_diff_type(
                    opi.vars(),
                    &n,
                    &cfg.alphabet,
                    cfg.order,
                    cfg.bounds,
                    cfg.fuel,
                )?
            };
            let _ = write!(text, "{}: {}", e.id, report.render());
            reports.push(report);
        }
    }
    Ok(Output {
        ok: reports.iter().all(TypeReport::passed),
        json: Some(pretty(&reports)),
        text,
    })
}

fn demo(name: Demo, fuel: usize) -> Result<Output> {
    let z12 = Alphabet::new(["z1", "z2"])?;
    match name {
        Demo::RemarkDiff => {
            let dt = OrderSpec::new(Preset::Dt);
            let entry = catalog::parse("diff:1?a=1,b=0,c=0")?;
            let g = OPoly::parse("z1*z2 - 1", &z12)?;
            let gens = GeneratorSet::new(
                z12.clone(),
                dt,
                entry.opis.clone(),
                vec![("g".into(), g.clone())],
            )?;
            let phi = &entry.opis[0];
            let f = phi
                .instantiate_named(&[("x", z12.parse_word("z1")?), ("y", z12.parse_word("z2")?)])?;
            let f = Element::new("phi(z1, z2)", f, &dt, true)?;
            let g = Element::new("g", g, &dt, false)?;
            let bounds = Bounds::new(2, 1);
            let mut text = String::new();
            let _ = writeln!(text, "identity: {}", phi.render(&dt));
            let _ = writeln!(
                text,
                "G = {{ {} }} over {{z1, z2}}, order dt",
                g.poly.to_text_ordered(&dt, &z12)
            );
            let mut rows = Vec::new();
            let mut ok = true;
            for r in compositions(&f, &g, &dt, bounds)? {
                let t = is_trivial(&r.value, &gens, &r.w, fuel)?;
                let residue = t.residue.to_text_ordered(&dt, &z12);
                let _ = writeln!(
                    text,
                    "{} composition at w = {}, {}\n  value   {}\n  reduced {}",
                    r.kind,
                    r.w.to_text(&z12),
                    r.witness.to_text(&z12),
                    r.value.to_text_ordered(&dt, &z12),
                    residue
                );
                let verdict = if t.trivial {
                    "TRIVIAL"
                } else if t.conclusive() {
                    "NOT TRIVIAL (irreducible residue)"
                } else {
                    "not reduced to zero within fuel"
                };
                let _ = writeln!(text, "verdict: {verdict}");
                ok &= t.trivial;
                rows.push(json!({
                    "w": r.w.to_text(&z12),
                    "witness": r.witness.to_text(&z12),
                    "value": r.value.to_text_ordered(&dt, &z12),
                    "residue": residue,
                    "verdict": verdict,
                }));
            }
            Ok(Output {
                text,
                json: Some(pretty(&rows)),
                ok,
            })
        }
        Demo::ThmRb => {
            let db = OrderSpec::new(Preset::Db);
            let comm = OPoly::parse("z2*z1 - z1*z2", &z12)?;
            let mut text = String::new();
            let mut reports = Vec::new();
            for lambda in [0, 1] {
                let e = catalog::parse(&format!("rb:6?lambda={lambda}"))?;
                let gens = GeneratorSet::new(
                    z12.clone(),
                    db,
                    e.opis,
                    vec![("comm".into(), comm.clone())],
                )?;
                let r = check_gs(&gens, Bounds::new(3, 2), fuel);
                text.push_str(&r.render());
                reports.push(r);
            }
            Ok(Output {
                ok: reports.iter().all(|r| r.passed),
                json: Some(pretty(&reports)),
                text,
            })
        }
        Demo::Averaging | Demo::Reynolds => {
            let id = if matches!(name, Demo::Averaging) {
                "averaging"
            } else {
                "reynolds?n=4"
            };
            let e = catalog::parse(id)?;
            let gens = GeneratorSet::new(z12, OrderSpec::new(e.order), e.opis, vec![])?;
            let bounds = Bounds::new(2, 2);
            let r = check_gs(&gens, bounds, fuel);
            let mut text = r.render();
            let irr = enumerate_irr(&gens, bounds);
            let _ = writeln!(text, "{} irreducible words within {bounds}", irr.len());
            Ok(Output {
                ok: r.passed,
                json: Some(pretty(&json!({"report": r, "irreducible": irr.len()}))),
                text,
            })
        }
    }
}
