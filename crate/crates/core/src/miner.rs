//! Algorithm selection, time budgets and run statistics.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::baselines::{mine_apriori, mine_cmc};
use crate::error::MineError;
use crate::instance::{sort_canonical, Instance, RawPattern};
use crate::model::{CoMovementPattern, MiningParams, TravelPath};
use crate::oracle::{mine_bruteforce, OracleLimits};
use crate::span::pattern_span;
use crate::tcs::{mine_tcs, Elimination, Encoding, TcsConfig};
use crate::verify::VerifyMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Tcs,
    Cmc,
    Apriori,
    Fsm,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Algorithm::Tcs, Algorithm::Cmc, Algorithm::Apriori, Algorithm::Fsm, Algorithm::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tcs => "tcs",
            Algorithm::Cmc => "cmc",
            Algorithm::Apriori => "apriori",
            Algorithm::Fsm => "fsm",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = MineError;
    fn from_str(s: &str) -> Result<Self, MineError> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| MineError::Unsupported(format!("unknown algorithm {s:?}")))
    }
}

/// Ablations of the TCS-tree miner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Naive dominance elimination.
    V1,
    /// Intersection-based verification.
    V2,
    /// Camera-id token sequences.
    V3,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::V1 => "v1",
            Variant::V2 => "v2",
            Variant::V3 => "v3",
        }
    }
}

impl FromStr for Variant {
    type Err = MineError;
    fn from_str(s: &str) -> Result<Self, MineError> {
        match s {
            "v1" => Ok(Variant::V1),
            "v2" => Ok(Variant::V2),
            "v3" => Ok(Variant::V3),
            _ => Err(MineError::Unsupported(format!("unknown variant {s:?}"))),
        }
    }
}

/// Cooperative deadline checked inside the miners' main loops.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self { deadline: None }
    }

    pub fn with_timeout(timeout: Option<Duration>) -> Self {
        Self { deadline: timeout.map(|t| Instant::now() + t) }
    }

    pub fn check(&self) -> Result<(), MineError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(MineError::Timeout),
            _ => Ok(()),
        }
    }
}

/// Counters reported by a mining run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MiningStats {
    pub temporal_clusters: u64,
    pub meta_clusters: u64,
    pub tree_nodes: u64,
    /// Frequent sequences handed to verification.
    pub candidates: u64,
    /// Explicit set-intersection operations.
    pub intersections: u64,
    /// Largest number of live partial patterns.
    pub peak_candidates: u64,
    /// Patterns before dominance elimination.
    pub raw_patterns: u64,
}

#[derive(Debug, Clone, Default)]
pub struct MineOptions {
    pub variants: Vec<Variant>,
    pub parallel: bool,
    pub timeout: Option<Duration>,
    pub oracle_limits: Option<OracleLimits>,
}

#[derive(Debug, Clone)]
pub struct MineOutput {
    /// Canonically sorted, spans filled in.
    pub patterns: Vec<CoMovementPattern>,
    pub stats: MiningStats,
}

/// TCS-tree configuration for a set of ablation flags.
pub fn tcs_config(variants: &[Variant], parallel: bool) -> TcsConfig {
    let mut cfg = TcsConfig { parallel, ..TcsConfig::TCS };
    for v in variants {
        match v {
            Variant::V1 => cfg.elimination = Elimination::Naive,
            Variant::V2 => cfg.verify = VerifyMode::Intersection,
            Variant::V3 => cfg.encoding = Encoding::Camera,
        }
    }
    cfg
}

/// Runs `algorithm` on an interned instance and returns index-level results.
pub fn mine_raw(
    inst: &Instance,
    algorithm: Algorithm,
    params: &MiningParams,
    opts: &MineOptions,
    stats: &mut MiningStats,
) -> Result<Vec<RawPattern>, MineError> {
    params.validate()?;
    if !opts.variants.is_empty() && algorithm != Algorithm::Tcs {
        return Err(MineError::Unsupported(format!("variant flags apply to tcs only, not {algorithm}")));
    }
    let budget = Budget::with_timeout(opts.timeout);
    match algorithm {
        Algorithm::Tcs => mine_tcs(inst, params, &tcs_config(&opts.variants, opts.parallel), &budget, stats),
        Algorithm::Fsm => {
            let cfg = TcsConfig { parallel: opts.parallel, ..TcsConfig::FSM };
            mine_tcs(inst, params, &cfg, &budget, stats)
        }
        Algorithm::Cmc => mine_cmc(inst, params, &budget, stats),
        Algorithm::Apriori => mine_apriori(inst, params, &budget, stats),
        Algorithm::Oracle => mine_bruteforce(inst, params, &opts.oracle_limits.unwrap_or_default()),
    }
}

/// Mines maximal patterns from travel paths.
pub fn mine(
    paths: &[TravelPath],
    algorithm: Algorithm,
    params: &MiningParams,
    opts: &MineOptions,
) -> Result<MineOutput, MineError> {
    let inst = Instance::new(paths)?;
    mine_instance(&inst, algorithm, params, opts)
}

pub fn mine_instance(
    inst: &Instance,
    algorithm: Algorithm,
    params: &MiningParams,
    opts: &MineOptions,
) -> Result<MineOutput, MineError> {
    let mut stats = MiningStats::default();
    let raw = mine_raw(inst, algorithm, params, opts, &mut stats)?;
    Ok(MineOutput { patterns: finish(inst, &raw, params), stats })
}

/// Maps results back to identifiers, computes spans and sorts canonically.
pub fn finish(inst: &Instance, raw: &[RawPattern], params: &MiningParams) -> Vec<CoMovementPattern> {
    let mut out: Vec<CoMovementPattern> = raw
        .iter()
        .map(|r| {
            let mut p = inst.to_patterns(std::slice::from_ref(r)).pop().expect("one pattern");
            p.span = pattern_span(inst, &r.objects, &r.path, params.epsilon);
            p
        })
        .collect();
    sort_canonical(&mut out);
    out
}
