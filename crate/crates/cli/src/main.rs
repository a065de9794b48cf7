use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use t8p_core::oracle::{build_cayley_graph, ConnectionSet, SweepOptions, DEFAULT_ORACLE_CAP};
use t8p_core::polya::{cycle_index_bruteforce, cycle_index_closed_form, evaluate};
use t8p_core::report::{render_table, CSV_HEADER};
use t8p_core::{closed_form_cycle_type, verify, ActionTable, CountReport, Domain, Level, OddPrime};

#[derive(Parser)]
#[command(name = "t8p", version, about = "Count Cayley graphs over T_8p up to isomorphism")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// N, Nc, N', |Aut| and |D| for one prime, with Burnside alongside.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// One row of formula counts per prime.
    Table {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,11,13")]
        p_list: Vec<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cross-check every route; exits nonzero only on an internal inconsistency.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
        /// Largest p for the exhaustive sweep. p = 7 takes minutes and 2^28 masks.
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        max_oracle_p: u64,
        /// Worker threads for the sweep; results do not depend on it.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The closed-form cycle index, or its value at (m, ..., m).
    CycleIndex {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        eval: Option<u64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decomposed cycle type of every automorphism on the pair domain.
    CycleTypes {
        #[arg(long)]
        p: u64,
    },
    /// Graphviz rendering of Cay(T_8p, S) for a hexadecimal class mask.
    Dot {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        mask: String,
    },
}

fn prime(p: u64) -> Result<OddPrime> {
    Ok(OddPrime::new(p)?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        // `t8p cycle-types --p 13 | head` is fine
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Count { p, format } => {
            let report = CountReport::compute(prime(p)?)?;
            match format {
                Format::Text => print!("{report}"),
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => println!("{CSV_HEADER}\n{}", report.csv_row()),
            }
        }
        Command::Table { p_list, format } => {
            let reports = p_list
                .iter()
                .map(|&p| CountReport::formulas(prime(p)?).with_context(|| format!("row p = {p}")))
                .collect::<Result<Vec<_>>>()?;
            match format {
                Format::Text => print!("{}", render_table(&reports)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
                Format::Csv => {
                    println!("{CSV_HEADER}");
                    for r in &reports {
                        println!("{}", r.csv_row());
                    }
                }
            }
        }
        Command::Verify { p, level, max_oracle_p, workers, format } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let report = verify(prime(p)?, level, &SweepOptions { cap: max_oracle_p, workers })?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{report}"),
                Format::Csv => bail!("verify has no CSV form"),
            }
            if report.has_failures() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::CycleIndex { p, eval, format } => {
            let p = prime(p)?;
            let closed = cycle_index_closed_form(p);
            if let Some(m) = eval {
                if m == 0 {
                    bail!("--eval must be positive");
                }
                println!("{}", evaluate(&closed, m)?);
                return Ok(ExitCode::SUCCESS);
            }
            let matches = closed == cycle_index_bruteforce(p)?;
            match format {
                Format::Json => {
                    let out = serde_json::json!({
                        "p": p.get(),
                        "matches_bruteforce": matches,
                        "terms": closed.records(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                }
                Format::Text => {
                    println!("{closed}");
                    if matches {
                        println!("matches the brute-force cycle index");
                    } else {
                        println!("DIFFERS from the brute-force cycle index:");
                        println!("{}", cycle_index_bruteforce(p)?);
                    }
                }
                Format::Csv => bail!("cycle-index has no CSV form"),
            }
        }
        Command::CycleTypes { p } => {
            let table = ActionTable::cached(prime(p)?)?;
            let mut out = io::stdout().lock();
            for (f, perm) in table.iter() {
                let brute = perm.cycle_type();
                let closed = closed_form_cycle_type(f);
                if brute == closed {
                    writeln!(out, "{f}: {brute}")?;
                } else {
                    writeln!(out, "{f}: {brute} (closed form: {closed})")?;
                }
            }
        }
        Command::Dot { p, mask } => {
            let p = prime(p)?;
            let domain = Domain::build(p);
            let set = ConnectionSet::from_hex(p, &mask)?;
            io::stdout().lock().write_all(build_cayley_graph(&set, &domain).to_dot().as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
