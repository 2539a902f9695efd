//! Command-line driver for the gapflow library. The binary is a thin
//! wrapper around [`run`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod report;

use std::ffi::OsString;

use clap::Parser;
use gapflow::GapError;

use args::{Cli, Command, Format, LimitsCommand, OracleCommand, OutputArgs};
use commands::{Outcome, ZmeasureArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_THRESHOLD: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DEGENERACY: i32 = 3;

pub fn exit_code(error: &GapError) -> i32 {
    match error {
        GapError::Degeneracy(_) | GapError::DegenerateDifference { .. } => EXIT_DEGENERACY,
        _ => EXIT_VALIDATION,
    }
}

/// Parses `argv`, runs the command, writes its output and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (outcome, output) = dispatch(&cli.command);
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    let text = match output.format {
        Format::Csv => outcome.report.to_csv(),
        Format::Json => outcome.report.to_json(),
    };
    if let Err(e) = report::write_output(&text, output.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return EXIT_VALIDATION;
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_THRESHOLD
    }
}

fn dispatch(command: &Command) -> (gapflow::Result<Outcome>, &OutputArgs) {
    match command {
        Command::Compute(a) => (commands::compute(a), &a.output),
        Command::Compare(a) => (commands::compare(a), &a.output),
        Command::Bench(a) => (commands::bench(a), &a.output),
        Command::Oracle(OracleCommand::Lis { eta, kmax, nmax, numeric, output }) => {
            (commands::oracle_lis(eta, *kmax, *nmax, numeric, output), output)
        }
        Command::Oracle(OracleCommand::Plancherel { eta, kmax, sizemax, numeric, output }) => {
            (commands::oracle_plancherel(eta, *kmax, *sizemax, numeric, output), output)
        }
        Command::Oracle(OracleCommand::Zmeasure { z, zp, xi, kmax, sizemax, numeric, output }) => {
            let args = ZmeasureArgs { z, zp, xi, k_max: *kmax, size_max: *sizemax };
            (commands::oracle_zmeasure(&args, numeric, output), output)
        }
        Command::Limits(LimitsCommand::DpvToDpii { eta, n, numeric, output }) => {
            (commands::limits_dpv(eta, n, numeric, output), output)
        }
        Command::Limits(LimitsCommand::DpiiToPii { eta, t, numeric, output }) => {
            (commands::limits_pii(eta, t, numeric, output), output)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gapflow::DegeneracyError;

    #[test]
    fn error_classes_map_to_exit_codes() {
        let guard =
            DegeneracyError { location: "dp5_step: c_s = z'".into(), value: "0".into(), parameters: String::new() };
        assert_eq!(exit_code(&GapError::Degeneracy(guard)), EXIT_DEGENERACY);
        assert_eq!(exit_code(&GapError::DegenerateDifference { k: 3 }), EXIT_DEGENERACY);
        assert_eq!(exit_code(&GapError::InvalidPrecision(8)), EXIT_VALIDATION);
        assert_eq!(exit_code(&GapError::ResourceBound("cap".into())), EXIT_VALIDATION);
    }
}
