//! Argument parsing and dispatch for the `speccheck` binary.

use std::io;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use speccheck_core::accuracy::DEFAULT_WITNESS_CAP;
use speccheck_core::eval::Budget;
use speccheck_core::session::{run_batch, BatchOptions, ExitStatus, Session, Settings};

use crate::repl::Repl;
use crate::server::{serve, BusyPolicy, ServerConfig};

#[derive(Debug, Parser)]
#[command(name = "speccheck", version, about = "Check pre/postconditions against labeled behaviors")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Statements and expression nodes allowed per evaluation.
    #[arg(long, global = true, default_value_t = Budget::default().max_steps)]
    pub step_budget: u64,
    /// Maximum call depth.
    #[arg(long, global = true, default_value_t = Budget::default().max_depth)]
    pub depth_budget: u32,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

impl GlobalArgs {
    pub fn budget(&self) -> Budget {
        Budget {
            max_steps: self.step_budget,
            max_depth: self.depth_budget,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Step through a program interactively, reading commands from stdin.
    Run { file: PathBuf },
    /// Check every behavior non-interactively, optionally with an accuracy domain.
    Check {
        file: PathBuf,
        /// Domain JSON to enumerate for an accuracy check.
        #[arg(long)]
        domain: Option<PathBuf>,
        /// Stop at the first flagged verdict or witness.
        #[arg(long)]
        fail_fast: bool,
        /// Witnesses listed per category.
        #[arg(long, default_value_t = DEFAULT_WITNESS_CAP)]
        witness_cap: usize,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Drop sessions unused for this long.
        #[arg(long, default_value_t = 24 * 60 * 60)]
        idle_expiry_secs: u64,
        /// What a request does when its session is in use.
        #[arg(long, value_enum, default_value_t = BusyPolicy::Reject)]
        busy: BusyPolicy,
    },
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(dispatch(cli))
}

pub fn dispatch(cli: Cli) -> u8 {
    let budget = cli.global.budget();
    match cli.command {
        Command::Run { file } => {
            let source = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return ExitStatus::InvalidInput.code();
                }
            };
            let session = match Session::create(&source, Settings { budget, domain: None }) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    if let speccheck_core::session::SessionError::Invalid(ds) = &e {
                        for d in ds {
                            eprintln!("{d}");
                        }
                    }
                    return ExitStatus::InvalidInput.code();
                }
            };
            let stdout = io::stdout();
            let mut repl = Repl::new(session, stdout.lock(), cli.global.json);
            match repl.run(io::stdin().lock()) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Command::Check {
            file,
            domain,
            fail_fast,
            witness_cap,
        } => {
            let report = run_batch(
                &file,
                &BatchOptions {
                    domain,
                    fail_fast,
                    budget,
                    witness_cap,
                },
            );
            if cli.global.json {
                println!("{}", serde_json::to_string(&report).expect("reports serialize"));
            } else {
                print!("{report}");
            }
            report.exit_code
        }
        Command::Serve {
            port,
            host,
            idle_expiry_secs,
            busy,
        } => {
            let config = ServerConfig {
                budget,
                idle_expiry: Duration::from_secs(idle_expiry_secs),
                busy,
            };
            let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
            match runtime.block_on(serve(SocketAddr::new(host, port), config)) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
    }
}
