//! Coherent-moving-cluster baseline: temporal clusters are scanned in start
//! order and intersected with per-camera buffers of partial patterns.

use rustc_hash::FxHashSet;

use crate::clustering::ClusterIndex;
use crate::dominance::eliminate_dominated_naive;
use crate::error::MineError;
use crate::instance::{distinct_objects, Instance, RawPattern};
use crate::miner::{Budget, MiningStats};
use crate::model::MiningParams;

struct Partial {
    path: Vec<u32>,
    /// Timeline positions at the last camera of `path`.
    records: Vec<u32>,
}

struct State<'a> {
    inst: &'a Instance,
    m: usize,
    k: usize,
    arena: Vec<Partial>,
    seen: FxHashSet<(Vec<u32>, Vec<u32>)>,
    buffers: Vec<Vec<u32>>,
    processed: Vec<Vec<(u32, u32)>>,
    work: Vec<(u32, u32)>,
    results: Vec<RawPattern>,
    intersections: u64,
    peak: u64,
}

impl State<'_> {
    fn add(&mut self, path: Vec<u32>, records: Vec<u32>) {
        if !self.seen.insert((path.clone(), records.clone())) {
            return;
        }
        let last = *path.last().expect("non-empty path");
        if path.len() >= self.k {
            self.results.push(RawPattern::from_records(self.inst.timeline(last), &records, path.clone()));
        }
        let id = self.arena.len() as u32;
        self.arena.push(Partial { path, records });
        for &c in self.inst.out_neighbors(last) {
            self.buffers[c as usize].push(id);
            self.work.push((id, c));
        }
        let buffered: usize = self.buffers.iter().map(Vec::len).sum();
        self.peak = self.peak.max(buffered as u64);
    }

    /// Records of cluster `(l, r)` at `camera` that continue partial `pid`.
    fn join(&mut self, pid: u32, camera: u32, (l, r): (u32, u32)) -> Option<(Vec<u32>, Vec<u32>)> {
        self.intersections += 1;
        let part = &self.arena[pid as usize];
        let prev = *part.path.last().expect("non-empty path");
        let tl = self.inst.timeline(camera);
        let records: Vec<u32> = (l..=r)
            .filter(|&p| {
                self.inst
                    .predecessor_at(&tl[p as usize], prev)
                    .is_some_and(|pp| part.records.binary_search(&pp).is_ok())
            })
            .collect();
        if records.is_empty() || distinct_objects(tl, records.iter().copied()) < self.m {
            return None;
        }
        let mut path = part.path.clone();
        path.push(camera);
        Some((path, records))
    }
}

/// Mines maximal patterns with the buffer-based baseline.
///
/// A partial pattern reaching a camera's buffer after some of that camera's
/// clusters were already scanned is also joined with those clusters, so the
/// result does not depend on the scan order.
pub fn mine_cmc(
    inst: &Instance,
    params: &MiningParams,
    budget: &Budget,
    stats: &mut MiningStats,
) -> Result<Vec<RawPattern>, MineError> {
    params.validate()?;
    let index = ClusterIndex::build(inst, params.epsilon, params.m);
    stats.temporal_clusters = index.num_clusters() as u64;

    let mut clusters: Vec<(u64, u32, u32, u32)> = Vec::with_capacity(index.num_clusters());
    for (c, ws) in index.windows.iter().enumerate() {
        let tl = inst.timeline(c as u32);
        for &(l, r) in ws {
            clusters.push((tl[l as usize].entrance, c as u32, l, r));
        }
    }
    clusters.sort_unstable();

    let mut st = State {
        inst,
        m: params.m,
        k: params.k,
        arena: Vec::new(),
        seen: FxHashSet::default(),
        buffers: vec![Vec::new(); inst.num_cameras()],
        processed: vec![Vec::new(); inst.num_cameras()],
        work: Vec::new(),
        results: Vec::new(),
        intersections: 0,
        peak: 0,
    };
    let mut steps = 0u64;
    for &(_, c, l, r) in &clusters {
        budget.check()?;
        st.processed[c as usize].push((l, r));
        let snapshot = st.buffers[c as usize].len();
        for i in 0..snapshot {
            let pid = st.buffers[c as usize][i];
            if let Some((path, records)) = st.join(pid, c, (l, r)) {
                st.add(path, records);
            }
        }
        st.add(vec![c], (l..=r).collect());
        while let Some((pid, c2)) = st.work.pop() {
            for j in 0..st.processed[c2 as usize].len() {
                steps += 1;
                if steps.is_multiple_of(4096) {
                    budget.check()?;
                }
                let w = st.processed[c2 as usize][j];
                if let Some((path, records)) = st.join(pid, c2, w) {
                    st.add(path, records);
                }
            }
        }
    }
    stats.intersections = st.intersections;
    stats.peak_candidates = st.peak;
    let mut raw = st.results;
    raw.sort_unstable();
    raw.dedup();
    stats.raw_patterns = raw.len() as u64;
    budget.check()?;
    Ok(eliminate_dominated_naive(&raw))
}
