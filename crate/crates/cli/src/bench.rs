//! Benchmark harness: runs every algorithm on every grid cell and reports
//! median wall time plus the miners' operation counters as CSV.
//!
//! Each cell gets `warmup` untimed runs, then `repetitions` timed ones.
//! Only the mining call is timed; generating or loading the dataset and
//! interning it happen once per dataset, outside the clock.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use comove::dataio::{read_dataset_file, Dataset, SyntheticConfig};
use comove::{mine_instance, Instance, MineError, MineOptions, MiningParams, Tick};
use serde::{Deserialize, Serialize};

use crate::gen::gen_synthetic_dataset;
use crate::{AlgoSpec, CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_reps")]
    pub repetitions: usize,
    #[serde(default = "default_warmup")]
    pub warmup: usize,
    /// Per run; a cell whose run exceeds it is recorded as timed out.
    #[serde(default)]
    pub timeout_secs: Option<f64>,
    /// Entries like `tcs`, `cmc`, `tcs+v1`.
    pub algorithms: Vec<String>,
    /// A dataset file replaces the synthetic generator.
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub synthetic: SyntheticConfig,
    #[serde(default)]
    pub grid: Grid,
}

fn default_seed() -> u64 {
    1
}
fn default_reps() -> usize {
    3
}
fn default_warmup() -> usize {
    1
}

/// Parameter grid. Dataset knob lists override the matching field of the
/// synthetic config; an empty list keeps it.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub epsilon: Vec<Tick>,
    pub m: Vec<usize>,
    pub k: Vec<usize>,
    pub cameras: Vec<usize>,
    pub objects: Vec<usize>,
    pub avg_path_len: Vec<usize>,
    pub group_rate: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            epsilon: vec![60],
            m: vec![3],
            k: vec![5],
            cameras: Vec::new(),
            objects: Vec::new(),
            avg_path_len: Vec::new(),
            group_rate: Vec::new(),
        }
    }
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bench config: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        // Relative dataset paths are relative to the config file.
        if let (Some(d), Some(dir)) = (&cfg.dataset, path.parent()) {
            if d.is_relative() {
                cfg.dataset = Some(dir.join(d));
            }
        }
        Ok(cfg)
    }

    fn algorithms(&self) -> Result<Vec<AlgoSpec>> {
        if self.algorithms.is_empty() {
            return Err(CliError::Usage("bench config lists no algorithms".into()));
        }
        self.algorithms.iter().map(|a| a.parse()).collect()
    }

    fn params(&self) -> Result<Vec<MiningParams>> {
        let g = &self.grid;
        if g.epsilon.is_empty() || g.m.is_empty() || g.k.is_empty() {
            return Err(CliError::Usage("grid needs at least one value of epsilon, m and k".into()));
        }
        let mut out = Vec::new();
        for &e in &g.epsilon {
            for &m in &g.m {
                for &k in &g.k {
                    out.push(MiningParams::new(e, m, k)?);
                }
            }
        }
        Ok(out)
    }

    /// Synthetic configs of the dataset-knob grid, in row order.
    fn synthetic_points(&self) -> Vec<SyntheticConfig> {
        let g = &self.grid;
        let or = |v: &Vec<usize>, d: usize| if v.is_empty() { vec![d] } else { v.clone() };
        let rates = if g.group_rate.is_empty() { vec![self.synthetic.group_rate] } else { g.group_rate.clone() };
        let mut out = Vec::new();
        for &cameras in &or(&g.cameras, self.synthetic.cameras) {
            for &objects in &or(&g.objects, self.synthetic.objects) {
                for &avg_path_len in &or(&g.avg_path_len, self.synthetic.avg_path_len) {
                    for &group_rate in &rates {
                        out.push(SyntheticConfig { cameras, objects, avg_path_len, group_rate, ..self.synthetic.clone() });
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        if self.repetitions < 3 {
            return Err(CliError::Usage(format!("repetitions must be at least 3, got {}", self.repetitions)));
        }
        if self.timeout_secs.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return Err(CliError::Usage("timeout_secs must be positive".into()));
        }
        let g = &self.grid;
        let knobs = !(g.cameras.is_empty() && g.objects.is_empty() && g.avg_path_len.is_empty() && g.group_rate.is_empty());
        if self.dataset.is_some() && knobs {
            return Err(CliError::Usage("dataset knob grids need the synthetic generator, not a dataset file".into()));
        }
        Ok(())
    }
}

/// One CSV row: the median over a cell's repetitions, or a single
/// repetition when per-repetition output is requested.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: String,
    pub dataset: String,
    pub cameras: usize,
    pub objects: usize,
    pub avg_path_len: f64,
    pub group_rate: Option<f64>,
    pub seed: Option<u64>,
    pub epsilon: Tick,
    pub m: usize,
    pub k: usize,
    /// Repetition index; empty on median rows.
    pub rep: Option<usize>,
    /// Timed repetitions behind the row.
    pub reps: usize,
    pub wall_secs: Option<f64>,
    pub wall_secs_min: Option<f64>,
    pub wall_secs_max: Option<f64>,
    pub patterns: Option<usize>,
    pub intersections: Option<u64>,
    pub peak_candidates: Option<u64>,
    pub candidates: Option<u64>,
    pub raw_patterns: Option<u64>,
    /// `ok`, `timeout` or `error`.
    pub status: String,
}

struct DatasetPoint {
    label: String,
    cameras: usize,
    objects: usize,
    avg_path_len: f64,
    group_rate: Option<f64>,
    seed: Option<u64>,
    inst: Instance,
}

impl DatasetPoint {
    fn new(ds: &Dataset, label: String, group_rate: Option<f64>, seed: Option<u64>) -> Result<Self> {
        let meta = ds.meta();
        Ok(Self {
            label,
            cameras: meta.num_cameras,
            objects: meta.num_objects,
            avg_path_len: meta.avg_path_len,
            group_rate,
            seed,
            inst: Instance::new(ds.paths())?,
        })
    }
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BenchOptions {
    /// One row per repetition instead of one median row per cell.
    pub per_rep: bool,
}

/// Runs the whole grid. `progress` sees every row as soon as it exists.
pub fn run_bench(cfg: &BenchConfig, opts: BenchOptions, progress: &mut dyn FnMut(&BenchRow)) -> Result<Vec<BenchRow>> {
    cfg.validate()?;
    let algos = cfg.algorithms()?;
    let params = cfg.params()?;
    let mut rows = Vec::new();
    let points: Vec<Box<dyn Fn() -> Result<DatasetPoint>>> = match &cfg.dataset {
        Some(path) => {
            let path = path.clone();
            vec![Box::new(move || {
                let ds = read_dataset_file(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                DatasetPoint::new(&ds, path.display().to_string(), None, None)
            })]
        }
        None => cfg
            .synthetic_points()
            .into_iter()
            .map(|sc| -> Box<dyn Fn() -> Result<DatasetPoint>> {
                let seed = cfg.seed;
                Box::new(move || {
                    let ds = gen_synthetic_dataset(&sc, seed)?;
                    let mut p = DatasetPoint::new(&ds, "synthetic".into(), Some(sc.group_rate), Some(seed))?;
                    // Report the requested knobs, not the sampled ones.
                    (p.cameras, p.objects, p.avg_path_len) = (sc.cameras, sc.objects, sc.avg_path_len as f64);
                    Ok(p)
                })
            })
            .collect(),
    };
    let timeout = cfg.timeout_secs.map(Duration::from_secs_f64);
    for make in points {
        let point = make()?;
        for p in &params {
            for algo in &algos {
                for row in run_cell(&point, algo, p, cfg, timeout, opts) {
                    progress(&row);
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

fn run_cell(
    point: &DatasetPoint,
    algo: &AlgoSpec,
    params: &MiningParams,
    cfg: &BenchConfig,
    timeout: Option<Duration>,
    opts: BenchOptions,
) -> Vec<BenchRow> {
    let mopts = MineOptions { variants: algo.variants.clone(), parallel: false, timeout, oracle_limits: None };
    let blank = BenchRow {
        algorithm: algo.to_string(),
        dataset: point.label.clone(),
        cameras: point.cameras,
        objects: point.objects,
        avg_path_len: point.avg_path_len,
        group_rate: point.group_rate,
        seed: point.seed,
        epsilon: params.epsilon,
        m: params.m,
        k: params.k,
        rep: None,
        reps: 0,
        wall_secs: None,
        wall_secs_min: None,
        wall_secs_max: None,
        patterns: None,
        intersections: None,
        peak_candidates: None,
        candidates: None,
        raw_patterns: None,
        status: "ok".into(),
    };
    let failed = |rep: Option<usize>, reps: usize, e: MineError| {
        let status = if e == MineError::Timeout { "timeout" } else { "error" };
        if status == "error" {
            eprintln!("{} eps={} m={} k={}: {e}", algo, params.epsilon, params.m, params.k);
        }
        BenchRow { rep, reps, status: status.into(), ..blank.clone() }
    };

    for _ in 0..cfg.warmup {
        if let Err(e) = mine_instance(&point.inst, algo.algorithm, params, &mopts) {
            return vec![failed(None, 0, e)];
        }
    }
    let mut rows = Vec::new();
    let mut times = Vec::new();
    let mut last = None;
    for rep in 0..cfg.repetitions {
        let t = Instant::now();
        let res = mine_instance(&point.inst, algo.algorithm, params, &mopts);
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(out) => {
                let row = BenchRow {
                    rep: Some(rep),
                    reps: 1,
                    wall_secs: Some(secs),
                    wall_secs_min: Some(secs),
                    wall_secs_max: Some(secs),
                    patterns: Some(out.patterns.len()),
                    intersections: Some(out.stats.intersections),
                    peak_candidates: Some(out.stats.peak_candidates),
                    candidates: Some(out.stats.candidates),
                    raw_patterns: Some(out.stats.raw_patterns),
                    ..blank.clone()
                };
                if opts.per_rep {
                    rows.push(row.clone());
                }
                times.push(secs);
                last = Some(row);
            }
            Err(e) => {
                rows.push(failed(opts.per_rep.then_some(rep), times.len(), e));
                return rows;
            }
        }
    }
    if !opts.per_rep {
        let last = last.expect("at least one repetition");
        rows.push(BenchRow {
            rep: None,
            reps: times.len(),
            wall_secs: Some(median(&times)),
            wall_secs_min: times.iter().copied().reduce(f64::min),
            wall_secs_max: times.iter().copied().reduce(f64::max),
            ..last
        });
    }
    rows
}

/// Reads the config, applies command-line overrides, runs the grid and
/// writes the CSV to `output` (stdout when absent).
pub fn cmd_bench(
    config: &Path,
    seed: Option<u64>,
    timeout_secs: Option<f64>,
    opts: BenchOptions,
    output: Option<&Path>,
) -> Result<Vec<BenchRow>> {
    let mut cfg = BenchConfig::read(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if timeout_secs.is_some() {
        cfg.timeout_secs = timeout_secs;
    }
    let rows = run_bench(&cfg, opts, &mut |r| {
        eprintln!(
            "{} eps={} m={} k={} objects={}: {} {}",
            r.algorithm,
            r.epsilon,
            r.m,
            r.k,
            r.objects,
            r.status,
            r.wall_secs.map(|t| format!("{t:.4}s")).unwrap_or_default()
        )
    })?;
    write_rows(&rows, crate::open_output(output)?)?;
    Ok(rows)
}

pub fn write_rows(rows: &[BenchRow], out: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
