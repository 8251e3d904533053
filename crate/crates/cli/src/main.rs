//! `eulersum`: evaluate, reduce and verify Euler sums from the command line.

use std::io::{BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eulersum_core::harness::{self, Execution, VerificationReport};
use eulersum_core::identities::Family;
use eulersum_core::parse::parse_expr;
use eulersum_core::solver::reduce;
use eulersum_core::table::KnownReductionTable;
use eulersum_core::{Error, PrecisionContext};

#[derive(Parser, Debug)]
#[command(name = "eulersum", version, about = "High-precision evaluation and exact reduction of Euler sums")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Opts {
    /// Target decimal digits.
    #[arg(long, global = true, default_value_t = 30)]
    digits: u32,
    /// Cap on explicitly summed terms.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_terms: u64,
    /// Extra working digits.
    #[arg(long, global = true, default_value_t = 10)]
    guard: u32,
    /// Emit one JSON record per check instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run checks on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Evaluate an expression, e.g. "S(2,2;3)" or "z3^2 - 2*S(1;2)".
    Eval { expr: String },
    /// Rewrite an expression over zeta values and the basis sums S(2;6), S(2;8).
    Reduce { expr: String },
    /// Check identities "LHS == RHS"; reads lines from stdin when none are given.
    Verify {
        identities: Vec<String>,
        /// Residual tolerance; defaults to 10^-(digits - 5).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare the 17 published quadratic sums against both printed columns.
    Table1,
    /// Check every printed closed form and combination.
    Examples,
    /// Residuals of the identity families over a (p, m) grid.
    Grid {
        /// Comma-separated family names; all when omitted.
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        #[arg(long, default_value_t = 2)]
        p_min: u32,
        #[arg(long, default_value_t = 5)]
        p_max: u32,
        #[arg(long, default_value_t = 0)]
        m_min: u32,
        #[arg(long, default_value_t = 2)]
        m_max: u32,
    },
    /// List identity families, or print the instances of one family.
    ListIdentities {
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
}

enum Failure {
    /// A check ran and failed.
    Check,
    Input(Error, Option<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e, None)
    }
}

fn with_source(text: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::Input(e, Some(text.to_string()))
}

fn emit(report: &VerificationReport, json: bool) -> Result<(), Failure> {
    let out = if json { report.to_json_lines() } else { report.to_text() };
    print!("{out}");
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn families(names: &[String]) -> Result<Vec<Family>, Failure> {
    if names.is_empty() {
        return Ok(Family::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| {
            Family::from_name(n.trim()).ok_or_else(|| {
                let known: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::Domain(format!("unknown family `{n}`; known: {}", known.join(", "))).into()
            })
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let o = &cli.opts;
    let ctx = PrecisionContext::new(o.digits, o.guard, o.max_terms)?;
    let exec = if o.sequential { Execution::Sequential } else { Execution::default() };
    match &cli.verb {
        Verb::Eval { expr } => {
            let e = parse_expr(expr).map_err(with_source(expr))?;
            let v = e.canonical().eval(&ctx)?;
            let shown = v.display(ctx.target_digits);
            println!("{shown}");
            println!("certified digits: {} (error bound {:.3e})", v.certified_digits().min(ctx.target_digits), v.abs_error_bound);
            Ok(())
        }
        Verb::Reduce { expr } => {
            let e = parse_expr(expr).map_err(with_source(expr))?;
            let table = KnownReductionTable::bundled()?;
            let r = reduce(&e, table)?;
            println!("{}", r.expr);
            if !r.remaining.is_empty() {
                let names: Vec<String> = r.remaining.iter().map(|s| s.to_string()).collect();
                println!("unresolved: {}", names.join(", "));
            }
            Ok(())
        }
        Verb::Verify { identities, tol } => {
            let lines: Vec<String> = if identities.is_empty() {
                std::io::stdin()
                    .lock()
                    .lines()
                    .collect::<std::io::Result<Vec<_>>>()
                    .map_err(Error::from)?
                    .into_iter()
                    .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                    .collect()
            } else {
                identities.clone()
            };
            let tol = tol.unwrap_or_else(|| 10f64.powi(5 - ctx.target_digits as i32));
            let report = harness::verify_identity_texts(&lines, &ctx, tol, exec)?;
            emit(&report, o.json)
        }
        Verb::Table1 => emit(&harness::verify_table1_with(&ctx, exec)?, o.json),
        Verb::Examples => emit(&harness::verify_examples_with(&ctx, exec)?, o.json),
        Verb::Grid { families: names, p_min, p_max, m_min, m_max } => {
            let fams = families(names)?;
            emit(&harness::verify_identity_grid_with(&fams, *p_min..=*p_max, *m_min..=*m_max, &ctx, exec), o.json)
        }
        Verb::ListIdentities { family, p, m } => {
            match family {
                None => {
                    for f in Family::ALL {
                        println!("{:<22} {}", f.name(), f.grid_mapping());
                    }
                }
                Some(name) => {
                    for f in families(std::slice::from_ref(name))? {
                        for id in f.fixed().into_iter().chain(f.instantiate(*p, *m)?) {
                            println!("{id}");
                        }
                    }
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(e, source)) => {
            eprintln!("error: {e}");
            if let (Error::Parse { pos, .. }, Some(text)) = (&e, source) {
                eprintln!("  {text}");
                eprintln!("  {}^", " ".repeat(*pos));
            }
            ExitCode::from(2)
        }
    };
    let _ = std::io::stdout().flush();
    status
}
