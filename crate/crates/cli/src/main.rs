mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::Common;

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

/// Computation in free operated algebras: normal forms, Groebner-Shirshov
/// checks, irreducible bases and quotient arithmetic.
#[derive(Parser, Debug)]
#[command(name = "opalg", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of a polynomial modulo the identities and generators.
    Nf {
        poly: String,
        /// Pick rewrites at random, seeded by --seed.
        #[arg(long)]
        random: bool,
    },
    /// Compare two words under the order.
    Compare { u: String, v: String },
    /// Instantiate each catalog identity at `var=word` bindings.
    Instantiate {
        #[arg(required = true)]
        bindings: Vec<String>,
    },
    /// Compositions of two monic polynomials, or of all generators and
    /// instances within bounds when none are given.
    Compositions {
        f: Option<String>,
        g: Option<String>,
        /// Also reduce each composition.
        #[arg(long)]
        check: bool,
    },
    /// Bounded Groebner-Shirshov verification.
    CheckGs,
    /// Rota-Baxter-type or differential-type conditions for each catalog
    /// identity.
    CheckType,
    /// Irreducible words within bounds.
    Basis,
    /// Normal form in the quotient algebra, refused unless check-gs passes.
    QuotientEval { poly: String },
    /// Worked examples.
    Demo { name: Demo },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Demo {
    /// Differential identity with `z1*z2 = 1`: a non-trivial composition.
    RemarkDiff,
    /// Rota-Baxter weight 1 over a commutative algebra.
    ThmRb,
    Averaging,
    Reynolds,
}

fn main() -> ExitCode {
    let argv = match config::merge_config_file(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.common.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    match commands::run(&cli.command, &cli.common) {
        Ok(out) => {
            print!("{}", out.text);
            if let (Some(path), Some(json)) = (&cli.common.report, &out.json) {
                if let Err(e) = std::fs::write(path, format!("{json}\n")) {
                    eprintln!("error: cannot write report `{}`: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
