use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nobodies::curve::CurveFlag;
use nobodies_cli::job::{LinsysOp, VerifyJob, VerifyTarget, Window};
use nobodies_cli::svg::default_window;
use nobodies_cli::{parse_job, render_svg, run_job, CliError, JobFile, Payload, Result};

#[derive(Parser)]
#[command(name = "nobodies", version, about = "Exact linear systems on graphs and Newton-Okounkov bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal element, membership or Zariski shift of a linear system.
    Linsys {
        #[arg(value_enum)]
        op: LinsysArg,
        #[command(flatten)]
        common: Common,
    },
    /// Whether a divisor has non-negative rank.
    Rank {
        #[command(flatten)]
        common: Common,
    },
    /// Newton-Okounkov body of a curve for a tropical or Arakelovian flag.
    CurveBody {
        #[arg(value_enum)]
        flag: FlagArg,
        #[command(flatten)]
        common: Common,
    },
    /// Newton-Okounkov body of a toric model.
    ToricBody {
        #[command(flatten)]
        common: Common,
    },
    /// Run the independent oracles against the main algorithms.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LinsysArg {
    Min,
    Member,
    Shift,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlagArg {
    Tropical,
    Arakelov,
}

#[derive(Args)]
struct Common {
    /// Job file; standard input when absent.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Result file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Write a figure of the body.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Plot window `x0,x1,y0,y1` (rationals).
    #[arg(long, value_name = "x0,x1,y0,y1", allow_hyphen_values = true)]
    window: Option<String>,
    /// Seed for the sampling checks of `verify`.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Leave the timing block out, making the whole file reproducible.
    #[arg(long)]
    no_timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}

fn io_err(path: &std::path::Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(io_err(p)),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(io_err("-".as_ref()))?;
            Ok(s)
        }
    }
}

fn mismatch(expected: &str, job: &JobFile) -> CliError {
    CliError::schema("kind", format!("expected a {expected} job, found {}", job.payload.kind()))
}

/// Reconciles a parsed job with the subcommand (and `--seed`).
type Adjust = Box<dyn FnOnce(&mut JobFile, Option<u64>) -> Result<()>>;

fn execute(command: Command) -> Result<u8> {
    let (common, adjust): (Common, Adjust) = match command {
        Command::Linsys { op, common } => (
            common,
            Box::new(move |job, _| match &mut job.payload {
                Payload::Linsys(j) => {
                    j.operation = match op {
                        LinsysArg::Min => LinsysOp::Min,
                        LinsysArg::Member => LinsysOp::Member,
                        LinsysArg::Shift => LinsysOp::Shift,
                    };
                    if j.operation == LinsysOp::Member && j.phi.is_none() {
                        return Err(CliError::schema("payload.phi", "operation member needs phi"));
                    }
                    Ok(())
                }
                _ => Err(mismatch("linsys", job)),
            }),
        ),
        Command::Rank { common } => (
            common,
            Box::new(|job, _| match job.payload {
                Payload::Rank(_) => Ok(()),
                _ => Err(mismatch("rank", job)),
            }),
        ),
        Command::CurveBody { flag, common } => (
            common,
            Box::new(move |job, _| match (&job.payload, flag) {
                (Payload::CurveBody(j), FlagArg::Tropical) if matches!(j.flag, CurveFlag::Tropical(_)) => Ok(()),
                (Payload::CurveBody(j), FlagArg::Arakelov) if matches!(j.flag, CurveFlag::Arakelov(_)) => Ok(()),
                (Payload::CurveBody(_), _) => Err(CliError::schema("payload.flag.type", "does not match the subcommand")),
                _ => Err(mismatch("curve-body", job)),
            }),
        ),
        Command::ToricBody { common } => (
            common,
            Box::new(|job, _| match job.payload {
                Payload::ToricBody(_) => Ok(()),
                _ => Err(mismatch("toric-body", job)),
            }),
        ),
        Command::Verify { common } => (
            common,
            Box::new(|job, seed| {
                match &mut job.payload {
                    Payload::Verify(v) => {
                        if let Some(s) = seed {
                            v.seed = s;
                        }
                    }
                    other => {
                        let target = VerifyTarget::Job(Box::new(other.clone()));
                        *other = Payload::Verify(VerifyJob {
                            target,
                            seed: seed.unwrap_or(0),
                        });
                    }
                }
                Ok(())
            }),
        ),
    };

    let mut job = parse_job(&read_input(&common.input)?)?;
    adjust(&mut job, common.seed)?;
    let window = match &common.window {
        Some(w) => Some(Window::parse(w)?),
        None => job.options.window.clone(),
    };
    if let Some(w) = &window {
        if w.is_empty() {
            return Err(CliError::WindowEmpty(common.window.clone().unwrap_or_default()));
        }
    }

    let (mut file, outcome) = run_job(&job)?;
    if common.no_timing {
        file.elapsed_us = None;
    }
    let text = file.to_text();
    match common.output.clone().or_else(|| job.options.output.clone().map(PathBuf::from)) {
        Some(p) => fs::write(&p, text).map_err(io_err(&p))?,
        None => io::stdout().write_all(text.as_bytes()).map_err(io_err("-".as_ref()))?,
    }

    if let Some(path) = common.svg.clone().or_else(|| job.options.svg.clone().map(PathBuf::from)) {
        let figure = outcome
            .figure
            .as_ref()
            .ok_or_else(|| CliError::schema("kind", format!("a {} job has no planar figure", job.payload.kind())))?;
        let window = window.unwrap_or_else(|| default_window(figure));
        fs::write(&path, render_svg(figure, &window)?).map_err(io_err(&path))?;
    }
    Ok(outcome.status.exit_code())
}
