//! Command-line front end shared by the `digiwave` binary and the tests.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 for
//! usage or validation errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::catalog::{catalog, CatalogName};
use crate::experiments::{
    resolve_target, run_experiment, solve, topology_check, OutputOptions, Override, PresetName,
    TopologyCheck,
};
use crate::topology::{self, VerdictKind};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable holding the default output directory.
pub const OUT_ENV: &str = "DIGIWAVE_OUT";

#[derive(Debug, Parser)]
#[command(name = "digiwave", version, about = "Wave equations on digital spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a preset experiment (exp_4_1 .. exp_4_5).
    Experiment {
        name: String,
        /// Override a preset value, e.g. steps=200, f0.3=1, bc.0=0, weight=0.05.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long, env = OUT_ENV, default_value = "out")]
        out: PathBuf,
        /// Also write a gnuplot-friendly .dat table.
        #[arg(long)]
        gnuplot: bool,
        /// Also write autocorrelation tables for the observed points.
        #[arg(long)]
        acf: bool,
    },
    /// Solve the problem described by a JSON config.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        gnuplot: bool,
    },
    /// Topology queries.
    Topology {
        #[command(subcommand)]
        command: TopologyCommand,
    },
    /// Built-in spaces.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Debug, Subcommand)]
enum TopologyCommand {
    /// Check a graph file or catalog name.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct CheckArgs {
    target: String,
    #[arg(long, value_name = "N")]
    sphere: Option<usize>,
    #[arg(long, value_name = "N")]
    manifold: Option<usize>,
    #[arg(long)]
    contractible: bool,
    #[arg(long)]
    orientable: bool,
    #[arg(long)]
    euler: bool,
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// List catalog entries with their invariants.
    List,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

type BoxError = Box<dyn std::error::Error>;

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, BoxError> {
    match command {
        Command::Experiment {
            name,
            set,
            out: dir,
            gnuplot,
            acf,
        } => {
            let preset: PresetName = name.parse()?;
            let overrides = set
                .iter()
                .map(|s| s.parse::<Override>())
                .collect::<Result<Vec<_>, _>>()?;
            let outcome = run_experiment(preset, &overrides, &dir, OutputOptions { gnuplot, acf })?;
            for c in &outcome.checks {
                writeln!(out, "{c}")?;
            }
            for f in &outcome.files {
                writeln!(out, "wrote {}", f.display())?;
            }
            Ok(if outcome.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            })
        }
        Command::Solve {
            config,
            out: file,
            gnuplot,
        } => {
            let summary = solve(&config, &file, gnuplot)?;
            writeln!(out, "{summary}")?;
            writeln!(out, "wrote {}", file.display())?;
            Ok(EXIT_PASS)
        }
        Command::Topology {
            command: TopologyCommand::Check(args),
        } => topology_command(args, out),
        Command::Catalog {
            command: CatalogCommand::List,
        } => {
            for name in CatalogName::representatives() {
                let e = catalog(name)?;
                writeln!(
                    out,
                    "{:<16} points={:<3} edges={:<3} euler={:<2} {:?}",
                    name.to_string(),
                    e.expected.points,
                    e.expected.edges,
                    e.expected.euler,
                    e.expected.shape
                )?;
            }
            Ok(EXIT_PASS)
        }
    }
}

fn topology_command(args: CheckArgs, out: &mut dyn Write) -> Result<i32, BoxError> {
    let graph = resolve_target(&args.target)?;
    let mut checks = Vec::new();
    if let Some(n) = args.sphere {
        checks.push(TopologyCheck::Sphere(n));
    }
    if let Some(n) = args.manifold {
        checks.push(TopologyCheck::Manifold(n));
    }
    if args.contractible {
        checks.push(TopologyCheck::Contractible);
    }
    if args.orientable {
        checks.push(TopologyCheck::Orientable);
    }
    if args.euler {
        checks.push(TopologyCheck::Euler);
    }
    if checks.is_empty() {
        let verdict = topology::Recognizer::default().classify(&graph)?;
        let kind = match verdict.kind {
            VerdictKind::Contractible => "contractible".to_string(),
            VerdictKind::Sphere(n) => format!("sphere({n})"),
            VerdictKind::Manifold(n) => format!("manifold({n})"),
            VerdictKind::None => "none".to_string(),
        };
        writeln!(out, "points: {}", graph.n_points())?;
        writeln!(out, "class: {kind}")?;
        writeln!(out, "euler: {}", graph.euler_characteristic())?;
        return Ok(EXIT_PASS);
    }
    let lines = topology_check(&graph, &checks)?;
    let mut code = EXIT_PASS;
    for line in &lines {
        writeln!(out, "{}", line.text)?;
        if line.passed == Some(false) {
            code = EXIT_FAIL;
        }
    }
    Ok(code)
}
