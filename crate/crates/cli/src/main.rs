use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tiltbase::commands;
use tiltbase::corpus::Bounds;
use tiltbase::report::{Exit, Outcome};
use tiltbase_core::par::Exec;

/// Exact checks of classical tilting and its behaviour under base change.
#[derive(Parser, Debug)]
#[command(name = "tiltbase", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Tilting degree; omitted means search 0..=n-max.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    /// Highest Ext degree compared by the lemma checks.
    #[arg(long, default_value_t = 4)]
    i_max: usize,
    /// Coresolution length bound (default n + 2).
    #[arg(long)]
    max_len: Option<usize>,
    /// Copies of T allowed per coresolution stage (default 4 * generators of T).
    #[arg(long)]
    max_width: Option<usize>,
    /// Worker threads; 1 runs sequentially, 0 lets the pool decide.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Print the JSON report instead of text.
    #[arg(long)]
    machine: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a document: algebra identities, modules, central elements, certificates.
    Check {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether a module of a document is classical n-tilting.
    Tilting {
        path: PathBuf,
        module: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compare tilting across localization and reduction at a central element.
    Basechange {
        path: PathBuf,
        module: String,
        central: String,
        #[command(flatten)]
        common: Common,
    },
    /// List or run the built-in corpus.
    Corpus {
        #[arg(long, conflicts_with = "run")]
        list: bool,
        /// An entry name, or `all`.
        #[arg(long)]
        run: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn bounds(c: &Common) -> Bounds {
    let exec = if c.jobs == 1 || cfg!(not(feature = "parallel")) { Exec::Sequential } else { Exec::Parallel };
    #[cfg(feature = "parallel")]
    if c.jobs > 1 {
        // only the first configuration wins; a second call is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(c.jobs).build_global();
    }
    Bounds { n: c.n, n_max: c.n_max, i_max: c.i_max, max_len: c.max_len, max_width: c.max_width, exec }
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::error(Exit::Input, format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli) -> (Outcome, Common) {
    match cli.command {
        Command::Check { path, common } => (read(&path).map_or_else(|o| o, |s| commands::check(&s)), common),
        Command::Tilting { path, module, common } => {
            let b = bounds(&common);
            (read(&path).map_or_else(|o| o, |s| commands::tilting(&s, &module, &b)), common)
        }
        Command::Basechange { path, module, central, common } => {
            let b = bounds(&common);
            (read(&path).map_or_else(|o| o, |s| commands::basechange(&s, &module, &central, &b)), common)
        }
        Command::Corpus { list, run, common } => {
            let b = bounds(&common);
            let o = match (list, run) {
                (_, Some(name)) => commands::corpus_run(&name, &b),
                (true, None) => commands::corpus_list(),
                (false, None) => Outcome::error(Exit::Input, "corpus needs --list or --run NAME"),
            };
            (o, common)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // help and version are successful invocations
            let code = if e.use_stderr() { Exit::Input } else { Exit::Pass };
            return ExitCode::from(code.code() as u8);
        }
    };
    let (outcome, common) = run(cli);
    for d in &outcome.diagnostics {
        eprintln!("tiltbase: {d}");
    }
    if let Some(report) = &outcome.report {
        if common.machine {
            print!("{}", report.machine());
        } else {
            print!("{}", outcome.human);
        }
        if let Some(path) = &common.out {
            if let Err(e) = std::fs::write(path, report.machine()) {
                eprintln!("tiltbase: cannot write {}: {e}", path.display());
                return ExitCode::from(Exit::Input.code() as u8);
            }
        }
    }
    ExitCode::from(outcome.exit.code() as u8)
}
