//! Library half of the `latsf` binary: argument types, set files and the
//! subcommand implementations, kept here so they can be tested directly.

pub mod commands;
pub mod setfile;

use std::fmt;

use latsf::ErrorKind;

pub const EXIT_OK: u8 = 0;
/// A check failed, a point is outside the hull, or a summand is outside its class.
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
/// An enumeration budget or size limit was exceeded.
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub exit: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { exit: EXIT_USAGE, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<latsf::Error> for CliError {
    fn from(e: latsf::Error) -> Self {
        let exit = match e.kind() {
            ErrorKind::Usage => EXIT_USAGE,
            ErrorKind::Domain => EXIT_FAIL,
            ErrorKind::Resource => EXIT_RESOURCE,
        };
        let message = match &e {
            latsf::Error::OutsideHull { .. } => {
                format!("{e}; the phase-1 linear program for a convex combination has positive optimum, so none exists")
            }
            _ => e.to_string(),
        };
        CliError { exit, message }
    }
}

/// Text to print and the exit code to return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub exit: u8,
}
