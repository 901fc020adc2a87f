use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use superloc::localder::RefuteOptions;
use superloc::Exec;
use superloc_cli::commands::{self, degree_filter, Source};
use superloc_cli::report::{Report, EXIT_INPUT};

#[derive(Parser)]
#[command(
    name = "superloc",
    version,
    about = "Exact super-derivations and local super-derivations of Lie superalgebras"
)]
struct Cli {
    /// Run every computation on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Add wall-clock time to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check grading, graded skew-symmetry and the graded Jacobi identity.
    Validate {
        /// `catalog:<name>` or a path to an algebra file.
        input: String,
    },
    /// Compute Der = Der_0 + Der_1 and the inner derivations.
    Derivations {
        input: String,
        /// 0, 1 or all.
        #[arg(long, default_value = "all")]
        degree: String,
        /// json or text.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Certify that every local super-derivation is a super-derivation.
    LocalCheck {
        input: String,
        /// `builtin` or a probe file.
        #[arg(long, default_value = "builtin")]
        probes: String,
        /// Random trials per gap vector when the result is inconclusive.
        #[arg(long, default_value_t = 100)]
        refute_trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replay the stage-by-stage argument for the super Schrödinger algebra.
    Replay {
        input: String,
        /// `builtin` or a lemma facts file (see `probes export --lemmas`).
        #[arg(long, default_value = "builtin")]
        facts: String,
    },
    /// List the built-in algebras.
    Catalog,
    /// Print built-in data files.
    Probes {
        #[command(subcommand)]
        action: ProbesAction,
    },
}

#[derive(Subcommand)]
enum ProbesAction {
    /// Print the builtin probe file, or the lemma facts with --lemmas.
    Export {
        #[arg(long)]
        lemmas: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let started = Instant::now();
    let mut text = false;
    let mut report: Report = match &cli.command {
        Command::Validate { input } => commands::validate(input, exec),
        Command::Derivations {
            input,
            degree,
            format,
        } => {
            let Some(filter) = degree_filter(degree) else {
                eprintln!("error: --degree must be 0, 1 or all");
                return ExitCode::from(EXIT_INPUT as u8);
            };
            match format.as_str() {
                "json" => {}
                "text" => text = true,
                _ => {
                    eprintln!("error: --format must be json or text");
                    return ExitCode::from(EXIT_INPUT as u8);
                }
            }
            commands::derivations(input, filter, exec)
        }
        Command::LocalCheck {
            input,
            probes,
            refute_trials,
            seed,
        } => commands::local_check(
            input,
            &Source::parse(probes),
            RefuteOptions {
                trials: *refute_trials,
                seed: *seed,
            },
            exec,
        ),
        Command::Replay { input, facts } => commands::replay(input, &Source::parse(facts)),
        Command::Catalog => commands::catalog_list(),
        Command::Probes {
            action: ProbesAction::Export { lemmas },
        } => {
            emit(&format!("{}\n", commands::probes_export(*lemmas)));
            return ExitCode::SUCCESS;
        }
    };
    if cli.timing {
        report.timing_ms = Some(started.elapsed().as_millis());
    }
    if report.exit_code == EXIT_INPUT {
        if let Some(msg) = report.result.get("error").and_then(|v| v.as_str()) {
            eprintln!("error: {msg}");
        }
    }
    if text {
        emit(&report.to_text());
    } else {
        emit(&format!("{}\n", report.to_json()));
    }
    ExitCode::from(report.exit_code as u8)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(s: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}
