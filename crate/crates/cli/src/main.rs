mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use commands::{CliError, CliResult};
use config::{Cli, Command, RunConfig};

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Construct { params, out } => {
            let mut cfg = RunConfig::new("construct");
            cfg.params = Some((&params).into());
            cfg.h_file = params.h_file.clone();
            cfg.out = out.clone();
            let result = commands::construct(&cfg)?;
            let doc = &result.document;
            commands::write_output(&result, out.as_deref())?;
            eprintln!("p = {}", doc.params.p);
            eprintln!("GES dimension: {}", doc.ges_dimension);
            eprintln!("maximal: {}", doc.maximal);
            Ok(true)
        }
        Command::Verify { source, opts, out } => {
            let mut cfg = RunConfig::new("verify").with_source(&source);
            cfg.options = Some(opts.options());
            cfg.out = out.clone();
            let report = commands::verify(&cfg)?;
            commands::write_output(&report, out.as_deref())?;
            for f in &report.failures {
                eprintln!("FAIL {f}");
            }
            eprintln!("certified: {}", report.passed);
            Ok(report.passed)
        }
        Command::Chebotarev { p, max_size, out } => {
            let mut cfg = RunConfig::new("chebotarev");
            cfg.chebotarev_p = Some(p);
            cfg.max_size = Some(max_size);
            cfg.out = out.clone();
            let report = commands::chebotarev(&cfg)?;
            commands::write_output(&report, out.as_deref())?;
            eprintln!(
                "{} minors checked, {} vanishing",
                report.scan.minors_checked,
                report.scan.witnesses.len()
            );
            Ok(report.passed)
        }
        Command::Basis { source, out } => {
            let mut cfg = RunConfig::new("basis").with_source(&source);
            cfg.out = out.clone();
            let report = commands::basis(&cfg)?;
            commands::write_output(&report, out.as_deref())?;
            eprintln!(
                "{} columns, residual {:e}",
                report.document.dimension, report.document.residual
            );
            Ok(report.passed)
        }
        Command::Report { input, rerun, out } => {
            let summary = commands::report(&input, rerun)?;
            commands::write_output(&summary, out.as_deref())?;
            Ok(summary.passed)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
