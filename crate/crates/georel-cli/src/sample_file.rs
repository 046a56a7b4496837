//! Sample-file parsing.
//!
//! Complete samples are whitespace/newline-separated integers with `#`
//! comments running to end of line:
//!
//! ```text
//! # bulb lifetimes, cycles
//! 17 19 23
//! 16
//! ```
//!
//! Censored samples add a header line `c=<int> n=<int>` (censoring cycle and
//! units on test), followed by the observed failures in the same format.
//! Parse errors report 1-based line and column.

use georel_core::estimators::{CensoredSample, CompleteSample};

use crate::error::{CliError, Result};

/// A parsed sample file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleFile {
    Complete(Vec<i64>),
    Censored { c: i64, n: u32, observed: Vec<i64> },
}

impl SampleFile {
    pub fn is_censored(&self) -> bool {
        matches!(self, SampleFile::Censored { .. })
    }

    /// Build the complete-sample type; fails on censored files.
    pub fn complete(&self) -> Result<CompleteSample> {
        match self {
            SampleFile::Complete(values) => {
                CompleteSample::new(values.clone()).map_err(CliError::from)
            }
            SampleFile::Censored { .. } => Err(CliError::domain(
                "this estimator needs a complete sample, but the file is censored",
            )),
        }
    }

    /// Build the censored-sample type, either from a censored file or by
    /// censoring a complete file at `c`.
    pub fn censored(&self, c_flag: Option<i64>) -> Result<CensoredSample> {
        match self {
            SampleFile::Censored { c, n, observed } => {
                if c_flag.is_some_and(|f| f != *c) {
                    return Err(CliError::input(format!(
                        "--c contradicts the file header (file says c={c})"
                    )));
                }
                CensoredSample::new(*c, observed.clone(), *n).map_err(CliError::from)
            }
            SampleFile::Complete(values) => {
                let c = c_flag.ok_or_else(|| {
                    CliError::domain(
                        "censored estimator on a complete sample needs --c <cycle>",
                    )
                })?;
                Ok(CompleteSample::new(values.clone())
                    .map_err(CliError::from)?
                    .censor_at(c))
            }
        }
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    for (li, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let mut col = 0;
        for piece in line.split_inclusive(char::is_whitespace) {
            let trimmed = piece.trim_end_matches(char::is_whitespace);
            if !trimmed.is_empty() {
                tokens.push(Token {
                    text: trimmed,
                    line: li + 1,
                    col: col + 1,
                });
            }
            col += piece.chars().count();
        }
    }
    tokens
}

fn parse_int(token: &Token<'_>, what: &str) -> Result<i64> {
    token.text.parse::<i64>().map_err(|_| {
        CliError::input(format!(
            "line {}, column {}: expected {what}, got `{}`",
            token.line, token.col, token.text
        ))
    })
}

/// Parse either sample-file format, detecting the censored header.
pub fn parse(text: &str) -> Result<SampleFile> {
    let tokens = tokenize(text);
    let Some(first) = tokens.first() else {
        return Err(CliError::input(
            "line 1, column 1: empty sample file (no values found)",
        ));
    };

    if let Some(c_text) = first.text.strip_prefix("c=") {
        let c = c_text.parse::<i64>().map_err(|_| {
            CliError::input(format!(
                "line {}, column {}: expected integer after `c=`, got `{c_text}`",
                first.line, first.col
            ))
        })?;
        let n_token = tokens.get(1).ok_or_else(|| {
            CliError::input(format!(
                "line {}, column {}: censored header needs `n=<units on test>` after `c=`",
                first.line, first.col
            ))
        })?;
        let n_text = n_token.text.strip_prefix("n=").ok_or_else(|| {
            CliError::input(format!(
                "line {}, column {}: expected `n=<int>`, got `{}`",
                n_token.line, n_token.col, n_token.text
            ))
        })?;
        let n = n_text.parse::<u32>().map_err(|_| {
            CliError::input(format!(
                "line {}, column {}: expected nonnegative integer after `n=`, got `{n_text}`",
                n_token.line, n_token.col
            ))
        })?;
        let observed = tokens[2..]
            .iter()
            .map(|t| parse_int(t, "an observed failure (integer)"))
            .collect::<Result<Vec<i64>>>()?;
        // surface invariant violations (values > c, p > n) with the core error
        CensoredSample::new(c, observed.clone(), n)?;
        Ok(SampleFile::Censored { c, n, observed })
    } else {
        let values = tokens
            .iter()
            .map(|t| parse_int(t, "a lifetime (integer)"))
            .collect::<Result<Vec<i64>>>()?;
        CompleteSample::new(values.clone())?;
        Ok(SampleFile::Complete(values))
    }
}
