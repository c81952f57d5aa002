use std::path::PathBuf;
use std::time::Duration;

use comove::dataio::{read_dataset_file, write_patterns};
use comove::{mine, MineOptions, MineOutput, MiningParams};

use crate::{open_output, AlgoSpec, CliError, Result};

#[derive(Debug, Clone)]
pub struct MineArgs {
    pub input: PathBuf,
    pub algo: AlgoSpec,
    pub params: MiningParams,
    pub timeout: Option<Duration>,
    /// Single-threaded run.
    pub bench_strict: bool,
    /// Pattern file; stdout when absent.
    pub output: Option<PathBuf>,
}

/// Mines the dataset and writes the canonical pattern file.
pub fn cmd_mine(args: &MineArgs) -> Result<MineOutput> {
    let ds = read_dataset_file(&args.input).map_err(|e| CliError::Data(format!("{}: {e}", args.input.display())))?;
    let opts = MineOptions {
        variants: args.algo.variants.clone(),
        parallel: !args.bench_strict,
        timeout: args.timeout,
        oracle_limits: None,
    };
    let out = mine(ds.paths(), args.algo.algorithm, &args.params, &opts)?;
    write_patterns(&out.patterns, open_output(args.output.as_deref())?)?;
    Ok(out)
}
