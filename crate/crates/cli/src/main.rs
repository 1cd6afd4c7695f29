use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use perlab::workbench::{emit_report, parse_workbench, Family, Form, run_checks, run_command, Format, RunCmd, RunOptions, WorkbenchDoc};
use perlab::{Fuel, UniverseSpec};

/// Run PER workbench files and report the verdicts.
#[derive(Parser, Debug)]
#[command(name = "perlab", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Reduction steps per evaluation. Overrides the file's `(fuel ...)`.
    #[arg(long, global = true, env = "PERLAB_FUEL")]
    fuel: Option<u64>,
    /// `codes:N`, `terms:K` or `explicit:a,b,...`. Overrides the file's `(universe ...)`.
    #[arg(long, global = true)]
    universe: Option<UniverseSpec>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on Kleene iterations.
    #[arg(long, global = true, default_value_t = perlab::fixpoint::DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Record wall time per check. Reports are no longer byte-stable.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Execute every form of FILE in order.
    Check { file: PathBuf },
    /// Execute FILE, then the full suite over its declarations.
    CheckAll { file: PathBuf },
    /// Least fixpoint of a declared functor.
    Fixpoint {
        file: PathBuf,
        #[arg(long)]
        functor: String,
        /// Report every Kleene stage.
        #[arg(long)]
        trace: bool,
    },
    /// Approximate initial algebra over a family of algebras.
    InitialAlgebra {
        file: PathBuf,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        family: String,
        /// Also compare R0 with the dinatural intersection.
        #[arg(long)]
        din_experiment: bool,
    },
    /// Monotone replacement of a functor via the Yoneda construction.
    Monotonize {
        file: PathBuf,
        #[arg(long)]
        functor: String,
        #[arg(long)]
        family: String,
    },
}

fn load(path: &Path) -> anyhow::Result<WorkbenchDoc> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_workbench(&text).map_err(|e| anyhow::anyhow!("{}:{e}", path.display()))
}

fn need_functor(doc: &WorkbenchDoc, name: &str) -> anyhow::Result<()> {
    if doc.functor(name).is_none() {
        bail!("unknown functor `{name}`");
    }
    Ok(())
}

fn need_family(doc: &WorkbenchDoc, name: &str, algebras: bool) -> anyhow::Result<()> {
    match (doc.family(name), algebras) {
        (None, _) => bail!("unknown family `{name}`"),
        (Some(Family::Pers(_)), true) => bail!("family `{name}` lists PERs, expected algebras"),
        (Some(Family::Algebras(_)), false) => bail!("family `{name}` lists algebras, expected PERs"),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let g = cli.global;
    let mut opts = RunOptions {
        universe: g.universe,
        fuel: g.fuel.map(Fuel::new).transpose()?,
        max_iter: g.max_iter,
        seed: g.seed,
        timings: g.timings,
        ..RunOptions::default()
    };
    let report = match cli.command {
        Command::Check { file } => run_checks(&load(&file)?, &opts)?,
        Command::CheckAll { file } => {
            let mut doc = load(&file)?;
            doc.forms.push((
                Form::Run(RunCmd::CheckAll),
                Default::default(),
                "(run check-all)".into(),
            ));
            run_checks(&doc, &opts)?
        }
        Command::Fixpoint { file, functor, trace } => {
            let doc = load(&file)?;
            need_functor(&doc, &functor)?;
            opts.trace = trace;
            run_command(&doc, &RunCmd::Fixpoint(functor), &opts)?
        }
        Command::InitialAlgebra {
            file,
            functor,
            family,
            din_experiment,
        } => {
            let doc = load(&file)?;
            need_functor(&doc, &functor)?;
            need_family(&doc, &family, true)?;
            opts.din_experiment = din_experiment;
            run_command(&doc, &RunCmd::InitialAlgebra(functor, family), &opts)?
        }
        Command::Monotonize { file, functor, family } => {
            let doc = load(&file)?;
            need_functor(&doc, &functor)?;
            need_family(&doc, &family, false)?;
            run_command(&doc, &RunCmd::Monotonize(functor, family), &opts)?
        }
    };
    let format = match g.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let mut out = std::io::stdout().lock();
    out.write_all(&emit_report(&report, format))?;
    out.flush()?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("perlab: {e:#}");
            ExitCode::from(2)
        }
    }
}
