#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` also rejects NaN

mod cli;
mod config;
mod grid;
mod run;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use crate::cli::Cli;
use crate::config::{Format, RunConfig};
use crate::run::{execute, Failure, Output};

const JOBS_ENV: &str = "RDDI_JOBS";

fn resolve(cli: Cli) -> Result<(RunConfig, bool), Failure> {
    let echo = cli.echo_config;
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path).map_err(Failure::Usage)?,
        None => RunConfig::default(),
    };
    cfg.overlay(cli.overlay());
    if cfg.command.is_none() {
        return Err(Failure::Usage("no subcommand given on the command line or in the config file".into()));
    }
    Ok((cfg.with_defaults(), echo))
}

fn jobs(cfg: &RunConfig) -> Result<usize, Failure> {
    let n = match cfg.jobs {
        Some(n) => n,
        None => match std::env::var(JOBS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{JOBS_ENV}='{v}' is not a count")))?,
            Err(_) => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        },
    };
    if n == 0 {
        return Err(Failure::Usage("parallelism must be at least 1".into()));
    }
    Ok(n)
}

/// A closed downstream pipe ends output quietly.
fn write(cfg: &RunConfig, out: &Output) -> Result<(), Failure> {
    match write_inner(cfg, out) {
        Err(WriteError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        Err(WriteError::Io(e)) => Err(Failure::Numerical(format!("write failed: {e}"))),
        Err(WriteError::Other(f)) => Err(f),
        Ok(()) => Ok(()),
    }
}

enum WriteError {
    Io(io::Error),
    Other(Failure),
}

impl From<io::Error> for WriteError {
    fn from(e: io::Error) -> Self {
        WriteError::Io(e)
    }
}

impl From<csv::Error> for WriteError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => WriteError::Io(e),
            other => WriteError::Other(Failure::Numerical(format!("write failed: {other:?}"))),
        }
    }
}

impl From<serde_json::Error> for WriteError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            WriteError::Io(e.into())
        } else {
            WriteError::Other(Failure::Numerical(format!("write failed: {e}")))
        }
    }
}

fn write_inner(cfg: &RunConfig, out: &Output) -> Result<(), WriteError> {
    let sink: Box<dyn Write> = match &cfg.output {
        Some(path) if path != "-" => Box::new(
            File::create(path)
                .map_err(|e| WriteError::Other(Failure::Usage(format!("cannot write {path}: {e}"))))?,
        ),
        _ => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => out.table.write_csv(&mut sink)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &out.table.to_json())?;
            writeln!(sink)?;
        }
        Format::Table => sink.write_all(out.text.as_deref().unwrap_or_default().as_bytes())?,
    }
    Ok(sink.flush()?)
}

fn main_inner(cli: Cli) -> Result<(), Failure> {
    let (cfg, echo) = resolve(cli)?;
    if echo {
        println!("{}", cfg.to_json());
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(&cfg)?)
        .build()
        .map_err(|e| Failure::Numerical(format!("thread pool: {e}")))?;
    let out = pool.install(|| execute(&cfg))?;
    write(&cfg, &out)?;
    for note in &out.notes {
        eprintln!("# {note}");
    }
    match out.failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rddi: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
