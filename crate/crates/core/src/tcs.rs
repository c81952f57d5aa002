//! The TCS-tree miner and its ablation variants.

use rayon::prelude::*;

use crate::clustering::{encode_cameras, encode_objects, ClusterIndex, TokenSequence};
use crate::dominance::eliminate_dominated_naive;
use crate::error::MineError;
use crate::instance::{Instance, RawPattern};
use crate::miner::{Budget, MiningStats};
use crate::model::MiningParams;
use crate::store::PatternStore;
use crate::suffix_tree::{CandidateSequence, TcsTree};
use crate::verify::{verify_candidate, Block, VerifyMode, VerifyStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    /// One token per meta-cluster; occurrences outside every cluster split
    /// the sequence.
    MetaCluster,
    /// One token per camera; whole paths are single segments.
    Camera,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elimination {
    Hashed,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TcsConfig {
    pub encoding: Encoding,
    pub verify: VerifyMode,
    pub elimination: Elimination,
    /// Verify candidates on the rayon pool.
    pub parallel: bool,
}

impl TcsConfig {
    pub const TCS: TcsConfig = TcsConfig {
        encoding: Encoding::MetaCluster,
        verify: VerifyMode::SlidingWindow,
        elimination: Elimination::Hashed,
        parallel: false,
    };

    /// Camera-id sequences, intersection-based verification, naive
    /// elimination.
    pub const FSM: TcsConfig = TcsConfig {
        encoding: Encoding::Camera,
        verify: VerifyMode::Intersection,
        elimination: Elimination::Naive,
        parallel: false,
    };
}

/// Encodes an instance for the given scheme. Returns the sequences and the
/// token-space size.
pub fn encode(inst: &Instance, index: &ClusterIndex, encoding: Encoding, k: usize) -> (Vec<TokenSequence>, u32) {
    match encoding {
        Encoding::MetaCluster => (encode_objects(index, k), index.metas.len() as u32),
        Encoding::Camera => (encode_cameras(inst, k), inst.num_cameras() as u32),
    }
}

/// Camera-id sequences of every object (the FSM-variant encoding).
pub fn encode_fsm_variant(inst: &Instance) -> Vec<TokenSequence> {
    encode_cameras(inst, 1)
}

/// Verifier blocks for the tokens of a candidate.
pub fn blocks_for<'a>(index: &'a ClusterIndex, encoding: Encoding, cand: &CandidateSequence) -> Vec<Block<'a>> {
    cand.tokens
        .iter()
        .map(|&t| match encoding {
            Encoding::MetaCluster => Block { camera: index.metas[t as usize].camera, windows: index.meta_windows(t) },
            Encoding::Camera => Block { camera: t, windows: &index.windows[t as usize] },
        })
        .collect()
}

pub fn mine_tcs(
    inst: &Instance,
    params: &MiningParams,
    cfg: &TcsConfig,
    budget: &Budget,
    stats: &mut MiningStats,
) -> Result<Vec<RawPattern>, MineError> {
    let store = verify_all(inst, params, cfg, budget, stats)?;
    let mut out = match cfg.elimination {
        Elimination::Hashed => store.maximal(),
        Elimination::Naive => eliminate_dominated_naive(&store.to_raw()),
    };
    out.sort_unstable();
    Ok(out)
}

/// Every pattern the verifier emits, before dominance elimination.
/// Duplicate-free, in a deterministic order.
pub fn verified_patterns(
    inst: &Instance,
    params: &MiningParams,
    cfg: &TcsConfig,
    budget: &Budget,
    stats: &mut MiningStats,
) -> Result<Vec<RawPattern>, MineError> {
    Ok(verify_all(inst, params, cfg, budget, stats)?.to_raw())
}

fn verify_all(
    inst: &Instance,
    params: &MiningParams,
    cfg: &TcsConfig,
    budget: &Budget,
    stats: &mut MiningStats,
) -> Result<PatternStore, MineError> {
    params.validate()?;
    let index = ClusterIndex::build(inst, params.epsilon, params.m);
    stats.temporal_clusters = index.num_clusters() as u64;
    stats.meta_clusters = index.metas.len() as u64;
    budget.check()?;

    let (seqs, space) = encode(inst, &index, cfg.encoding, params.k);
    let tree = TcsTree::build(&seqs, space);
    drop(seqs);
    stats.tree_nodes = tree.node_count() as u64;
    let cands = tree.frequent_sequences(params.m, params.k);
    stats.candidates = cands.len() as u64;
    budget.check()?;

    let check = || budget.check();
    let mut store = PatternStore::default();
    let mut vstats = VerifyStats::default();
    if cfg.parallel {
        let run = |cand: &CandidateSequence| -> Result<(Vec<RawPattern>, VerifyStats), MineError> {
            let blocks = blocks_for(&index, cfg.encoding, cand);
            let mut out = Vec::new();
            let mut vs = VerifyStats::default();
            verify_candidate(inst, &blocks, params.m, params.k, cfg.verify, &mut vs, &check, &mut out)?;
            Ok((out, vs))
        };
        let results: Vec<_> = cands.par_iter().map(run).collect::<Result<_, _>>()?;
        for (out, vs) in results {
            vstats.merge(&vs);
            out.iter().for_each(|p| store.insert(p));
        }
    } else {
        for cand in &cands {
            let blocks = blocks_for(&index, cfg.encoding, cand);
            store.begin_candidate();
            verify_candidate(inst, &blocks, params.m, params.k, cfg.verify, &mut vstats, &check, &mut store)?;
        }
    }
    stats.intersections = vstats.intersections;
    stats.peak_candidates = vstats.peak_candidates;
    stats.raw_patterns = store.len() as u64;
    budget.check()?;
    Ok(store)
}
