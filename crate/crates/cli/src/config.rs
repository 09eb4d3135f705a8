//! Flags, the optional `key = value` config file, and the resolved run
//! configuration.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use opalg::catalog::{self, CatalogEntry};
use opalg::terms::identifiers;
use opalg::{Alphabet, Bounds, Error, GeneratorSet, OPoly, Opi, OrderSpec, Preset, Result};

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Comma-separated letters, ranked in the given order.
    #[arg(long, global = true)]
    pub alphabet: Option<String>,
    /// Comma-separated permutation of the alphabet fixing the letter order.
    #[arg(long, global = true)]
    pub base_order: Option<String>,
    /// Catalog id such as `rb:6?lambda=1`; repeatable.
    #[arg(long, global = true)]
    pub catalog: Vec<String>,
    /// Concrete generators separated by `;`; repeatable.
    #[arg(long, global = true)]
    pub gens: Vec<String>,
    /// File with one concrete generator per line (`#` starts a comment).
    #[arg(long, global = true)]
    pub gens_file: Option<PathBuf>,
    /// Monomial order: deglex, db or dt. Defaults to the catalog's order.
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Bounds `D,P` on z-degree and operator degree.
    #[arg(long, global = true)]
    pub bounds: Option<String>,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub fuel: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print rewriting traces.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write a JSON report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Read defaults from a `key = value` file; flags given on the command
    /// line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Appends the settings of `--config FILE` that the command line does not
/// already set.
pub fn merge_config_file(mut argv: Vec<String>) -> std::result::Result<Vec<String>, String> {
    let path = argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = path else {
        return Ok(argv);
    };
    let text =
        fs::read_to_string(&path).map_err(|e| format!("cannot read config `{path}`: {e}"))?;
    let given = |key: &str| {
        argv.iter()
            .any(|a| a == &format!("--{key}") || a.starts_with(&format!("--{key}=")))
    };
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected `key = value`", n + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(format!(
                "{path}:{}: config files cannot include other config files",
                n + 1
            ));
        }
        if given(&key) {
            continue;
        }
        if key == "trace" {
            match value {
                "true" | "yes" | "1" => extra.push("--trace".to_string()),
                "false" | "no" | "0" => {}
                _ => return Err(format!("{path}:{}: `trace` takes true or false", n + 1)),
            }
        } else {
            extra.push(format!("--{key}={value}"));
        }
    }
    argv.extend(extra);
    Ok(argv)
}

/// Everything a command needs, resolved from the flags.
pub struct RunConfig {
    pub alphabet: Alphabet,
    pub order: OrderSpec,
    pub opis: Vec<Opi>,
    pub entries: Vec<CatalogEntry>,
    pub gens: Vec<(String, OPoly)>,
    pub bounds: Bounds,
    pub fuel: usize,
    pub seed: u64,
    pub trace: bool,
}

impl RunConfig {
    /// `inputs` are polynomial texts read by the command; their letters join
    /// the default alphabet when none is given.
    pub fn resolve(c: &Common, inputs: &[&str]) -> Result<Self> {
        let entries = c
            .catalog
            .iter()
            .map(|id| catalog::parse(id))
            .collect::<Result<Vec<_>>>()?;
        let opis: Vec<Opi> = entries.iter().flat_map(|e| e.opis.clone()).collect();
        let gen_texts = gen_texts(c)?;
        let alphabet = match &c.alphabet {
            Some(list) => Alphabet::parse_list(list)?,
            None => {
                let mut names = vec!["z1".to_string(), "z2".to_string()];
                for t in gen_texts
                    .iter()
                    .map(String::as_str)
                    .chain(inputs.iter().copied())
                {
                    for n in identifiers(t)? {
                        if !names.contains(&n) {
                            names.push(n);
                        }
                    }
                }
                names.sort_by_key(|a| natural_key(a));
                Alphabet::new(&names)?
            }
        };
        let alphabet = match &c.base_order {
            Some(list) => {
                let names: Vec<&str> = list.split(',').map(str::trim).collect();
                alphabet.reordered(&names)?
            }
            None => alphabet,
        };
        let preset = match &c.order {
            Some(s) => s.parse::<Preset>()?,
            None => entries.first().map(|e| e.order).unwrap_or(Preset::Deglex),
        };
        let order = OrderSpec::new(preset);
        let gens = gen_texts
            .iter()
            .enumerate()
            .map(|(i, t)| Ok((format!("g{}", i + 1), OPoly::parse(t, &alphabet)?)))
            .collect::<Result<Vec<_>>>()?;
        let bounds = match &c.bounds {
            Some(s) => parse_bounds(s)?,
            None => Bounds::new(2, 1),
        };
        if c.fuel == 0 {
            return Err(Error::Shape("fuel must be positive".into()));
        }
        Ok(RunConfig {
            alphabet,
            order,
            opis,
            entries,
            gens,
            bounds,
            fuel: c.fuel,
            seed: c.seed,
            trace: c.trace,
        })
    }

    pub fn generators(&self) -> Result<GeneratorSet> {
        GeneratorSet::new(
            self.alphabet.clone(),
            self.order,
            self.opis.clone(),
            self.gens.clone(),
        )
    }

    pub fn parse(&self, text: &str) -> Result<OPoly> {
        OPoly::parse(text, &self.alphabet)
    }
}

fn gen_texts(c: &Common) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for g in &c.gens {
        out.extend(
            g.split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from),
        );
    }
    if let Some(path) = &c.gens_file {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Shape(format!("cannot read `{}`: {e}", path.display())))?;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                out.push(line.to_string());
            }
        }
    }
    Ok(out)
}

/// `z2 < z10`: letters with numeric suffixes sort by number.
fn natural_key(name: &str) -> (String, u64, String) {
    let stem = name.trim_end_matches(|ch: char| ch.is_ascii_digit());
    let digits = &name[stem.len()..];
    (
        stem.to_string(),
        digits.parse().unwrap_or(0),
        name.to_string(),
    )
}

pub fn parse_bounds(s: &str) -> Result<Bounds> {
    let bad = || {
        Error::Shape(format!(
            "bounds must look like `D,P` with positive integers, got `{s}`"
        ))
    };
    let (d, p) = s.split_once(',').ok_or_else(bad)?;
    let d: u32 = d.trim().parse().map_err(|_| bad())?;
    let p: u32 = p.trim().parse().map_err(|_| bad())?;
    if d == 0 && p == 0 {
        return Err(bad());
    }
    Ok(Bounds::new(d, p))
}
