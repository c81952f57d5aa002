//! Temporal clustering per camera, meta-cluster merging and the token
//! encoding fed to the suffix tree.

use rustc_hash::FxHashSet;

use crate::instance::{Instance, Record};
use crate::model::Tick;

/// A maximal-by-sweep window of records at one camera whose entrances span at
/// most ε and which holds at least `m` distinct objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalCluster {
    pub camera: u32,
    /// Inclusive index range into the camera timeline.
    pub lo: u32,
    pub hi: u32,
    /// `(object, visit)` pairs, in timeline order.
    pub members: Vec<(u32, u32)>,
    /// Entrance of the first member and entrance of the last.
    pub interval: (Tick, Tick),
}

/// Two-anchor sweep over a timeline sorted by entrance.
///
/// Returns inclusive `(l, r)` index ranges. Both ends strictly increase from
/// one window to the next, so the output is duplicate-free. `counts` is
/// scratch space indexed by object and must be zeroed and long enough; it is
/// left zeroed on return.
pub fn sweep_windows(records: &[Record], epsilon: Tick, m: usize, counts: &mut [u32]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let n = records.len();
    let (mut l, mut r) = (0usize, 0usize);
    let mut distinct = 0usize;
    while r < n {
        if records[r].entrance - records[l].entrance <= epsilon {
            let c = &mut counts[records[r].object as usize];
            if *c == 0 {
                distinct += 1;
            }
            *c += 1;
            r += 1;
        } else {
            if distinct >= m {
                out.push((l as u32, (r - 1) as u32));
            }
            while l < r && records[r].entrance - records[l].entrance > epsilon {
                let c = &mut counts[records[l].object as usize];
                *c -= 1;
                if *c == 0 {
                    distinct -= 1;
                }
                l += 1;
            }
        }
    }
    if r > l && distinct >= m {
        out.push((l as u32, (r - 1) as u32));
    }
    for rec in &records[l..r] {
        counts[rec.object as usize] = 0;
    }
    out
}

/// Temporal clusters of one camera timeline.
pub fn temporal_clusters(camera: u32, records: &[Record], epsilon: Tick, m: usize) -> Vec<TemporalCluster> {
    let max_obj = records.iter().map(|r| r.object as usize + 1).max().unwrap_or(0);
    let mut counts = vec![0u32; max_obj];
    sweep_windows(records, epsilon, m, &mut counts)
        .into_iter()
        .map(|(lo, hi)| TemporalCluster {
            camera,
            lo,
            hi,
            members: records[lo as usize..=hi as usize].iter().map(|r| (r.object, r.visit)).collect(),
            interval: (records[lo as usize].entrance, records[hi as usize].entrance),
        })
        .collect()
}

/// A union of temporal clusters at one camera connected by shared records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaCluster {
    pub id: u32,
    pub camera: u32,
    /// Inclusive timeline range covered by the member clusters.
    pub lo: u32,
    pub hi: u32,
    /// Indices of member clusters in the input order.
    pub clusters: Vec<usize>,
}

/// Merges clusters that share at least one `(object, visit)` record,
/// transitively. Works on arbitrary member sets; ids are assigned in order of
/// first member cluster, starting at `first_id`.
pub fn merge_meta_clusters(clusters: &[TemporalCluster], first_id: u32) -> Vec<MetaCluster> {
    let n = clusters.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut owner: rustc_hash::FxHashMap<(u32, u32, u32), usize> = Default::default();
    for (i, c) in clusters.iter().enumerate() {
        for &(o, v) in &c.members {
            if let Some(&j) = owner.get(&(c.camera, o, v)) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            } else {
                owner.insert((c.camera, o, v), i);
            }
        }
    }
    let mut out: Vec<MetaCluster> = Vec::new();
    let mut slot: rustc_hash::FxHashMap<usize, usize> = Default::default();
    for (i, cl) in clusters.iter().enumerate() {
        let root = find(&mut parent, i);
        let s = *slot.entry(root).or_insert_with(|| {
            out.push(MetaCluster {
                id: first_id + out.len() as u32,
                camera: cl.camera,
                lo: cl.lo,
                hi: cl.hi,
                clusters: Vec::new(),
            });
            out.len() - 1
        });
        let mc = &mut out[s];
        mc.lo = mc.lo.min(cl.lo);
        mc.hi = mc.hi.max(cl.hi);
        mc.clusters.push(i);
    }
    out
}

/// Clustering of every camera of an instance.
#[derive(Debug, Clone)]
pub struct ClusterIndex {
    /// Sweep windows per camera.
    pub windows: Vec<Vec<(u32, u32)>>,
    /// Meta-clusters in (camera, start) order; `id` equals the position.
    pub metas: Vec<MetaSpan>,
    /// Meta-cluster id of each `(object, visit)`, or `NO_TOKEN`.
    pub token: Vec<Vec<u32>>,
}

pub const NO_TOKEN: u32 = u32::MAX;

/// A meta-cluster as a contiguous slice of its camera's windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetaSpan {
    pub camera: u32,
    pub lo: u32,
    pub hi: u32,
    /// Range `win_lo..win_hi` into `windows[camera]`.
    pub win_lo: u32,
    pub win_hi: u32,
}

impl ClusterIndex {
    pub fn build(inst: &Instance, epsilon: Tick, m: usize) -> Self {
        let mut counts = vec![0u32; inst.num_objects()];
        let mut windows = Vec::with_capacity(inst.num_cameras());
        let mut metas: Vec<MetaSpan> = Vec::new();
        let mut token: Vec<Vec<u32>> = inst.paths().iter().map(|p| vec![NO_TOKEN; p.len()]).collect();
        for c in 0..inst.num_cameras() as u32 {
            let tl = inst.timeline(c);
            let ws = sweep_windows(tl, epsilon, m, &mut counts);
            // Windows are index ranges with increasing ends, so two windows
            // share a record exactly when their ranges overlap.
            let mut open: Option<MetaSpan> = None;
            for (wi, &(l, r)) in ws.iter().enumerate() {
                let wi = wi as u32;
                match &mut open {
                    Some(ms) if l <= ms.hi => {
                        ms.hi = r;
                        ms.win_hi = wi + 1;
                    }
                    _ => {
                        if let Some(ms) = open.take() {
                            metas.push(ms);
                        }
                        open = Some(MetaSpan { camera: c, lo: l, hi: r, win_lo: wi, win_hi: wi + 1 });
                    }
                }
            }
            if let Some(ms) = open {
                metas.push(ms);
            }
            windows.push(ws);
        }
        for (id, ms) in metas.iter().enumerate() {
            let tl = inst.timeline(ms.camera);
            for rec in &tl[ms.lo as usize..=ms.hi as usize] {
                token[rec.object as usize][rec.visit as usize] = id as u32;
            }
        }
        Self { windows, metas, token }
    }

    pub fn num_clusters(&self) -> usize {
        self.windows.iter().map(Vec::len).sum()
    }

    pub fn meta_windows(&self, id: u32) -> &[(u32, u32)] {
        let ms = &self.metas[id as usize];
        &self.windows[ms.camera as usize][ms.win_lo as usize..ms.win_hi as usize]
    }
}

/// An object's visits encoded as tokens, split wherever a visit belongs to no
/// cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub object: u32,
    pub segments: Vec<Vec<u32>>,
}

/// Meta-cluster encoding of every object. Segments shorter than `min_len` are
/// dropped since they cannot support a long enough path.
pub fn encode_objects(index: &ClusterIndex, min_len: usize) -> Vec<TokenSequence> {
    index
        .token
        .iter()
        .enumerate()
        .map(|(o, toks)| TokenSequence {
            object: o as u32,
            segments: toks
                .split(|&t| t == NO_TOKEN)
                .filter(|s| !s.is_empty() && s.len() >= min_len)
                .map(<[u32]>::to_vec)
                .collect(),
        })
        .collect()
}

/// Camera-id encoding: each full path is one segment.
pub fn encode_cameras(inst: &Instance, min_len: usize) -> Vec<TokenSequence> {
    inst.paths()
        .iter()
        .enumerate()
        .map(|(o, p)| TokenSequence {
            object: o as u32,
            segments: if p.len() >= min_len.max(1) {
                vec![p.iter().map(|v| v.camera).collect()]
            } else {
                Vec::new()
            },
        })
        .collect()
}

/// Sanity helper for tests: every pair of members of a cluster is within ε.
pub fn pairwise_reachable(records: &[Record], lo: u32, hi: u32, epsilon: Tick) -> bool {
    let s = &records[lo as usize..=hi as usize];
    s.iter().all(|a| s.iter().all(|b| a.entrance.abs_diff(b.entrance) <= epsilon))
}

/// Records of `records` covered by at least one window.
pub fn covered_records(windows: &[(u32, u32)]) -> FxHashSet<u32> {
    windows.iter().flat_map(|&(l, r)| l..=r).collect()
}
