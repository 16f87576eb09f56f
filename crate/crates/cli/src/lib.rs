//! Library half of the `most` binary: flag parsing plus report execution,
//! kept out of `main.rs` so tests can drive the same code paths directly.

pub mod args;

use std::io::Write;

use anyhow::Context;
use most_core::harness;

pub use args::{Cli, Invocation};

/// Runs the parsed invocation, writing reports to `out`. Returns whether
/// every seed of every run completed (aborted seeds are reported in-line and
/// turn the exit status nonzero, matching the report contract).
pub fn execute(invocation: Invocation, out: &mut dyn Write) -> anyhow::Result<bool> {
    match invocation {
        Invocation::Run(config) => {
            let report = harness::run(&config).context("run failed")?;
            write!(out, "{report}")?;
            Ok(!report.has_failures())
        }
        Invocation::Compare(configs) => {
            let report = harness::compare(&configs).context("compare failed")?;
            write!(out, "{report}")?;
            Ok(!report.has_failures())
        }
    }
}
