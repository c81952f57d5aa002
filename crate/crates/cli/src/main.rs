use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use comove::dataio::{write_dataset, SyntheticConfig};
use comove::{MiningParams, Tick, Variant};
use comove_cli::bench::{cmd_bench, BenchOptions};
use comove_cli::eval::{cmd_eval, DEFAULT_IOU};
use comove_cli::gen::{gen_convert_dataset, gen_reduction_dataset, gen_synthetic_dataset, parse_edges, read_synthetic_config};
use comove_cli::mine::{cmd_mine, MineArgs};
use comove_cli::{open_output, AlgoSpec, CliError, Result};

/// Mine maximal co-movement patterns from camera-sequence trajectories.
#[derive(Parser)]
#[command(name = "comove", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mine a dataset CSV into a pattern file (JSON Lines).
    Mine(MineCmd),
    /// Run a benchmark grid from a TOML config and write CSV.
    Bench(BenchCmd),
    /// Score a mined pattern file against a groundtruth pattern file.
    Eval(EvalCmd),
    /// Generate a dataset CSV.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Args)]
struct MineCmd {
    /// Dataset CSV (object_id,camera_id,entrance,exit).
    input: PathBuf,
    #[arg(long)]
    epsilon: Tick,
    /// m: smallest group size.
    #[arg(long = "min-objects")]
    min_objects: usize,
    /// k: shortest camera path.
    #[arg(long = "min-cameras")]
    min_cameras: usize,
    /// tcs, cmc, apriori, fsm or oracle.
    #[arg(long, default_value = "tcs")]
    algo: String,
    /// TCS ablation: v1, v2 or v3. Repeatable.
    #[arg(long)]
    variant: Vec<String>,
    #[arg(long = "timeout-secs")]
    timeout_secs: Option<f64>,
    /// Disable parallel verification.
    #[arg(long = "bench-strict")]
    bench_strict: bool,
    /// Pattern file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Print run counters to stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct BenchCmd {
    /// Benchmark config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's per-run timeout.
    #[arg(long = "timeout-secs")]
    timeout_secs: Option<f64>,
    /// One row per repetition instead of per-cell medians.
    #[arg(long = "per-rep")]
    per_rep: bool,
    /// CSV output; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalCmd {
    /// Mined pattern file.
    #[arg(long)]
    mined: PathBuf,
    /// Groundtruth pattern file.
    #[arg(long)]
    truth: PathBuf,
    /// Spans must overlap with IoU above this.
    #[arg(long, default_value_t = DEFAULT_IOU)]
    iou: f64,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Random walks on a grid with injected convoys.
    Synthetic(SyntheticCmd),
    /// Clique-reduction instance of a small graph.
    Reduction(ReductionCmd),
    /// Camera visits from GPS tracks and camera disks.
    Convert(ConvertCmd),
}

#[derive(Args)]
struct SyntheticCmd {
    /// Generator config (TOML); flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    cameras: Option<usize>,
    #[arg(long)]
    objects: Option<usize>,
    #[arg(long = "avg-path-len")]
    avg_path_len: Option<usize>,
    #[arg(long = "group-rate")]
    group_rate: Option<f64>,
    #[arg(long = "max-group")]
    max_group: Option<usize>,
    #[arg(long = "eps-scale")]
    eps_scale: Option<Tick>,
    #[arg(long)]
    horizon: Option<Tick>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReductionCmd {
    #[arg(long)]
    vertices: usize,
    /// Edges over 1-based vertices, e.g. `1-2,2-3`.
    #[arg(long, default_value = "")]
    edges: String,
    #[arg(long)]
    epsilon: Tick,
    /// k; the path has max(vertices, k) cameras.
    #[arg(long = "min-cameras")]
    min_cameras: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertCmd {
    /// object_id,ts,x,y
    #[arg(long)]
    tracks: PathBuf,
    /// camera_id,x,y,radius[,group_id]
    #[arg(long)]
    cameras: PathBuf,
    /// Capture radius for every camera, replacing the file's radii.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn timeout(secs: Option<f64>) -> Result<Option<Duration>> {
    secs.map(|s| Duration::try_from_secs_f64(s).map_err(|_| CliError::Usage(format!("bad timeout {s}"))))
        .transpose()
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Mine(c) => {
            let variants = c.variant.iter().map(|v| v.parse()).collect::<std::result::Result<Vec<Variant>, _>>()?;
            let args = MineArgs {
                input: c.input,
                algo: AlgoSpec::new(c.algo.parse()?, &variants)?,
                params: MiningParams::new(c.epsilon, c.min_objects, c.min_cameras)?,
                timeout: timeout(c.timeout_secs)?,
                bench_strict: c.bench_strict,
                output: c.output,
            };
            let out = cmd_mine(&args)?;
            if c.stats {
                eprintln!("{} patterns, {:?}", out.patterns.len(), out.stats);
            }
        }
        Cmd::Bench(c) => {
            cmd_bench(&c.config, c.seed, c.timeout_secs, BenchOptions { per_rep: c.per_rep }, c.output.as_deref())?;
        }
        Cmd::Eval(c) => println!("{}", cmd_eval(&c.mined, &c.truth, c.iou)?),
        Cmd::Gen(g) => {
            let (ds, output) = match g {
                GenCmd::Synthetic(c) => {
                    let mut cfg = match &c.config {
                        Some(p) => read_synthetic_config(p)?,
                        None => SyntheticConfig::default(),
                    };
                    cfg.cameras = c.cameras.unwrap_or(cfg.cameras);
                    cfg.objects = c.objects.unwrap_or(cfg.objects);
                    cfg.avg_path_len = c.avg_path_len.unwrap_or(cfg.avg_path_len);
                    cfg.group_rate = c.group_rate.unwrap_or(cfg.group_rate);
                    cfg.max_group = c.max_group.unwrap_or(cfg.max_group);
                    cfg.eps_scale = c.eps_scale.unwrap_or(cfg.eps_scale);
                    cfg.horizon = c.horizon.unwrap_or(cfg.horizon);
                    (gen_synthetic_dataset(&cfg, c.seed)?, c.output)
                }
                GenCmd::Reduction(c) => {
                    let edges = parse_edges(&c.edges, c.vertices)?;
                    (gen_reduction_dataset(c.vertices, &edges, c.epsilon, c.min_cameras)?, c.output)
                }
                GenCmd::Convert(c) => (gen_convert_dataset(&c.tracks, &c.cameras, c.radius)?, c.output),
            };
            write_dataset(&ds, open_output(output.as_deref())?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
