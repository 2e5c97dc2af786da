//! File formats, reports and the command line.

mod cli;
mod report;
mod text;

use std::fmt;

pub use cli::{run_cli, EXIT_DEFINITE, EXIT_ERROR, EXIT_UNKNOWN};
pub use report::{BoundsReport, Caps, ConfigReport, Inputs, Report, SegmentReport, WitnessReport};
pub use text::{format_gup, format_model, parse_configuration, parse_gup, parse_model, ModelFile};

/// A diagnostic, with the 1-based line it refers to when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn global(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}
