//! `rorg`: virtual cohomological dimension of relative outer automorphism
//! groups of right-angled Artin groups.
//!
//! Exit codes: 0 success, 2 invalid input, 3 internal invariant violation.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rorg::acceptance::run_all;
use rorg::decompose::{build_tree, DecomposeOptions, DecompositionTree};
use rorg::io::{parse_input, tree_dot, tree_record, witness_document, InputDocument, ResultDocument};
use rorg::rorg::{Rorg, DEFAULT_VERTEX_CAP};
use rorg::vcd::aut_vcd;
use rorg::Error;

#[derive(Parser)]
#[command(name = "rorg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON input document; reads stdin when omitted or `-`.
    input: Option<PathBuf>,
    /// Picks among eligible Case-1 subgroups; 0 takes the canonical one.
    #[arg(long, default_value_t = 0)]
    choice_seed: u64,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    max_vertices: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Print the vcd, leaves, tree and diagnostics as JSON.
    Vcd {
        #[command(flatten)]
        common: Common,
        /// Also report the vcd of Aut(A_Γ); requires empty collections.
        #[arg(long)]
        aut: bool,
    },
    /// Print the decomposition tree.
    Tree {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build and verify free abelian witnesses for Fouxe-Rabinovitch leaves.
    Witness {
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance suite.
    Selftest,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn load(common: &Common) -> Result<Rorg, Failure> {
    let mut bytes = Vec::new();
    match &common.input {
        Some(p) if p.as_os_str() != "-" => {
            bytes = std::fs::read(p).map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))?;
        }
        _ => {
            io::stdin()
                .read_to_end(&mut bytes)
                .map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
        }
    }
    let doc: InputDocument = parse_input(&bytes).map_err(|e| {
        let listing = serde_json::to_string(&e).unwrap_or_default();
        Failure::Input(format!("invalid input: {e}\n{listing}"))
    })?;
    Ok(doc.to_rorg(common.max_vertices)?)
}

fn decompose(rorg: &Rorg, common: &Common) -> Result<DecompositionTree, Failure> {
    let opts = DecomposeOptions {
        choice_seed: common.choice_seed,
        vertex_cap: common.max_vertices,
    };
    Ok(build_tree(rorg, &opts)?)
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Vcd { common, aut } => {
            let rorg = load(&common)?;
            let aut = if aut {
                let opts = DecomposeOptions {
                    choice_seed: common.choice_seed,
                    vertex_cap: common.max_vertices,
                };
                Some(aut_vcd(&rorg, &opts)?)
            } else {
                None
            };
            let tree = decompose(&rorg, &common)?;
            Ok(pretty(&ResultDocument::new(&tree, aut, common.choice_seed)))
        }
        Command::Tree { common, format } => {
            let tree = decompose(&load(&common)?, &common)?;
            Ok(match format {
                Format::Json => pretty(&tree_record(&tree)),
                Format::Dot => tree_dot(&tree),
            })
        }
        Command::Witness { common } => {
            let tree = decompose(&load(&common)?, &common)?;
            let doc = witness_document(&tree)?;
            let out = pretty(&doc);
            if doc.all_passed {
                Ok(out)
            } else {
                Err(Failure::Internal(format!("witness verification failed\n{out}")))
            }
        }
        Command::Selftest => {
            let suite = run_all();
            let lines: String = suite.criteria.iter().map(|c| format!("{c}\n")).collect();
            if suite.passed() {
                Ok(lines)
            } else {
                Err(Failure::Internal(format!("{lines}acceptance suite failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
