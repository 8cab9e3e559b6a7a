mod commands;
mod report;
mod suites;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cusplab_core::hecke::TERM_BUDGET;
use cusplab_core::Error;

/// Exact verification of simple cuspidal representations of Sp(2N).
#[derive(Parser)]
#[command(name = "cusplab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over a grid of (q, N).
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteName::All)]
        suite: SuiteName,
        /// Largest residue field size; must be an odd prime at most 23.
        #[arg(long, default_value_t = 7)]
        qmax: u32,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Maximum number of terms in any exhaustive sum.
        #[arg(long, default_value_t = TERM_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Print the Jordan set and epsilon data of a simple cuspidal representation.
    Jordan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        /// Value of the central character at -1: +1 or -1.
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate one Hecke coefficient sum by brute force.
    Hecke {
        #[arg(long = "case", value_enum)]
        case: HeckeCase,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Delta::Quadratic)]
        delta: Delta,
        #[arg(long, allow_hyphen_values = true, default_value = "+1")]
        chi: String,
        /// Additive character twist a in k^x.
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = TERM_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// List one affine generic character per torus orbit.
    Classify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = TERM_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Gauss sum, its squared modulus and the sign xi.
    Gauss {
        #[arg(long)]
        q: u32,
        /// Coefficients c0,c1,...,1 of a monic irreducible modulus over F_q.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Gauss,
    Lattice,
    Beta,
    Decomp,
    Hecke,
    Classify,
    Jordan,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum HeckeCase {
    #[value(name = "gl1-b0")]
    Gl1B0,
    #[value(name = "gl1-b1")]
    Gl1B1,
    #[value(name = "gl2n-b0")]
    Gl2nB0,
    #[value(name = "gl2n-b1")]
    Gl2nB1,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Delta {
    Quadratic,
    Trivial,
}

/// Why the process is stopping early.
pub enum Failure {
    Usage(String),
    Budget(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::NotOddPrime(_) | Error::NotAField(_) | Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

const OK: u8 = 0;
const IDENTITY_FAILED: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("CUSPLAB_THREADS") else { return Ok(()) };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure::Usage(format!("CUSPLAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    init_threads()?;
    match cli.command {
        Command::Verify { suite, qmax, nmax, seed, budget, json } => {
            if !(3..=23).contains(&qmax) || !cusplab_core::is_prime(qmax as u64) {
                return Err(Failure::Usage(format!("--qmax must be an odd prime at most 23, got {qmax}")));
            }
            if !(1..=4).contains(&nmax) {
                return Err(Failure::Usage(format!("--nmax must lie in 1..=4, got {nmax}")));
            }
            let grid = suites::Grid { qmax, nmax, seed, budget };
            let names: Vec<String> = match suite {
                SuiteName::All => suites::SUITES.iter().map(|s| s.to_string()).collect(),
                one => vec![one.to_possible_value().expect("no skipped variants").get_name().to_string()],
            };
            let mut reports = Vec::new();
            for name in names {
                reports.push(suites::run(&name, &grid)?);
            }
            let passed = reports.iter().all(|r| r.passed());
            if json {
                let out = serde_json::json!({ "passed": passed, "seed": seed, "qmax": qmax, "nmax": nmax, "suites": reports });
                println!("{}", serde_json::to_string_pretty(&out).expect("reports serialize"));
            } else {
                for r in &reports {
                    print!("{r}");
                }
            }
            Ok(passed)
        }
        Command::Jordan { n, q, chi, json } => commands::jordan(n, q, &chi, json),
        Command::Hecke { case, q, n, delta, chi, a, budget, json } => commands::hecke(commands::HeckeArgs { case, q, n, delta, chi: &chi, a, budget }, json),
        Command::Classify { q, n, budget, json } => commands::classify(q, n, budget, json),
        Command::Gauss { q, modulus, json } => commands::gauss(q, modulus.as_deref(), json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(OK),
        Ok(false) => ExitCode::from(IDENTITY_FAILED),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}; raise --budget to override");
            ExitCode::from(BUDGET)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(IDENTITY_FAILED)
        }
    }
}
