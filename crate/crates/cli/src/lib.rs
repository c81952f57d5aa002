//! Library side of the `comove` binary: mining, benchmarking, evaluation
//! and dataset generation commands.

pub mod bench;
pub mod eval;
pub mod gen;
pub mod mine;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use comove::{Algorithm, DataError, MineError, Variant};
use thiserror::Error;

/// Failure of a command, split by the exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, parameters or configuration. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or invalid input, or a failed run. Exit code 2.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<MineError> for CliError {
    fn from(e: MineError) -> Self {
        match e {
            MineError::InvalidParams(_) | MineError::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// An algorithm plus TCS ablation flags, written `tcs`, `tcs+v1`,
/// `tcs+v2+v3`, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgoSpec {
    pub algorithm: Algorithm,
    pub variants: Vec<Variant>,
}

impl AlgoSpec {
    pub fn new(algorithm: Algorithm, variants: &[Variant]) -> Result<Self> {
        let mut variants = variants.to_vec();
        variants.sort();
        variants.dedup();
        if !variants.is_empty() && algorithm != Algorithm::Tcs {
            return Err(CliError::Usage(format!("variant flags apply to tcs only, not {algorithm}")));
        }
        Ok(Self { algorithm, variants })
    }
}

impl fmt::Display for AlgoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.algorithm.name())?;
        for v in &self.variants {
            write!(f, "+{}", v.name())?;
        }
        Ok(())
    }
}

impl FromStr for AlgoSpec {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('+');
        let algorithm: Algorithm = parts.next().unwrap_or_default().trim().parse()?;
        let variants = parts.map(|v| v.trim().parse()).collect::<std::result::Result<Vec<Variant>, _>>()?;
        AlgoSpec::new(algorithm, &variants)
    }
}

/// A buffered writer on `path`, or on stdout when no path is given.
pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}
