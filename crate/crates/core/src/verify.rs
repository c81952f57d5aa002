//! Candidate verification: turns a candidate token sequence into concrete
//! object groups travelling the corresponding camera path.
//!
//! A candidate pattern (CP) is a set of timeline records at the camera of its
//! last block, together with the block range it spans. It is extended into
//! the next block by keeping the records whose preceding visit belongs to the
//! CP, restricted to one window of that block.

use std::hash::{Hash, Hasher};

use rustc_hash::FxHasher;

use crate::error::MineError;
use crate::instance::{distinct_objects, Instance, RawPattern};

/// The windows available at one position of a candidate sequence.
#[derive(Debug, Clone, Copy)]
pub struct Block<'a> {
    pub camera: u32,
    /// Inclusive timeline ranges, ordered with increasing ends.
    pub windows: &'a [(u32, u32)],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifyMode {
    /// Single pass over each block's windows with an inverted index from
    /// records to candidates. Performs no set intersections.
    SlidingWindow,
    /// Intersects every candidate with every window.
    Intersection,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyStats {
    pub intersections: u64,
    pub peak_candidates: u64,
}

impl VerifyStats {
    pub fn merge(&mut self, other: &VerifyStats) {
        self.intersections += other.intersections;
        self.peak_candidates = self.peak_candidates.max(other.peak_candidates);
    }
}

#[derive(Debug, Clone, Copy)]
struct Cp {
    start: u32,
    len: u32,
    /// Ascending timeline positions at the camera of block `start + len - 1`,
    /// stored in the round's arena.
    off: u32,
    count: u32,
    has_dup: bool,
}

/// The CPs alive after one block, with their records in a shared arena.
#[derive(Debug, Default)]
struct Round {
    cps: Vec<Cp>,
    arena: Vec<u32>,
}

impl Round {
    fn records(&self, cp: &Cp) -> &[u32] {
        &self.arena[cp.off as usize..(cp.off + cp.count) as usize]
    }

    fn push(&mut self, start: u32, len: u32, records: impl IntoIterator<Item = u32>, has_dup: bool) {
        let off = self.arena.len() as u32;
        self.arena.extend(records);
        let count = self.arena.len() as u32 - off;
        self.cps.push(Cp { start, len, off, count, has_dup });
    }

    fn clear(&mut self) {
        self.cps.clear();
        self.arena.clear();
    }

    /// Drops repeated CPs. All CPs of a round end at the same block, so
    /// equal start and records means equal CPs.
    fn dedup(&mut self) {
        if self.cps.len() < 2 {
            return;
        }
        let mut keys: Vec<(u32, u64, u32)> = self
            .cps
            .iter()
            .enumerate()
            .map(|(i, cp)| {
                let mut h = FxHasher::default();
                self.records(cp).hash(&mut h);
                (cp.start, h.finish(), i as u32)
            })
            .collect();
        keys.sort_unstable();
        let mut drop = vec![false; self.cps.len()];
        for group in keys.chunk_by(|a, b| (a.0, a.1) == (b.0, b.1)) {
            for (j, &(_, _, i)) in group.iter().enumerate() {
                let ri = self.records(&self.cps[i as usize]);
                if group[..j].iter().any(|&(_, _, e)| !drop[e as usize] && self.records(&self.cps[e as usize]) == ri) {
                    drop[i as usize] = true;
                }
            }
        }
        let mut i = 0;
        self.cps.retain(|_| {
            i += 1;
            !drop[i - 1]
        });
    }
}

/// Receives the groups found by [`verify_candidate`].
pub trait Emit {
    /// A group on the cameras of `blocks[start..start + len]`, given by
    /// timeline positions at the camera of the last of those blocks.
    fn emit(&mut self, inst: &Instance, blocks: &[Block<'_>], start: usize, len: usize, records: &[u32]);
}

impl Emit for Vec<RawPattern> {
    fn emit(&mut self, inst: &Instance, blocks: &[Block<'_>], start: usize, len: usize, records: &[u32]) {
        let bs = &blocks[start..start + len];
        let tl = inst.timeline(bs[len - 1].camera);
        self.push(RawPattern::from_records(tl, records, bs.iter().map(|b| b.camera).collect()));
    }
}

fn emit_all(inst: &Instance, blocks: &[Block<'_>], k: usize, round: &Round, out: &mut dyn Emit) {
    for cp in round.cps.iter().filter(|cp| cp.len as usize >= k) {
        out.emit(inst, blocks, cp.start as usize, cp.len as usize, round.records(cp));
    }
}

/// Verifies one candidate, appending every group found (length `>= k`,
/// at least `m` distinct objects) to `out`. Results may contain dominated
/// and repeated patterns.
#[allow(clippy::too_many_arguments)]
pub fn verify_candidate(
    inst: &Instance,
    blocks: &[Block<'_>],
    m: usize,
    k: usize,
    mode: VerifyMode,
    stats: &mut VerifyStats,
    check: &dyn Fn() -> Result<(), MineError>,
    out: &mut dyn Emit,
) -> Result<(), MineError> {
    let n = blocks.len();
    let mut scratch = Scratch::default();
    let mut cur = Round::default();
    let mut next = Round::default();
    for t in 0..n {
        check()?;
        emit_all(inst, blocks, k, &cur, out);
        let blk = blocks[t];
        next.clear();
        if t > 0 && !cur.cps.is_empty() {
            let prev = blocks[t - 1];
            match mode {
                VerifyMode::SlidingWindow => sliding_step(inst, prev, blk, &cur, m, &mut scratch, &mut next),
                VerifyMode::Intersection => intersect_step(inst, prev, blk, &cur, m, stats, &mut next),
            }
        }
        if n - t >= k {
            for &(l, r) in blk.windows {
                let has_dup = distinct_objects(inst.timeline(blk.camera), l..=r) < (r - l + 1) as usize;
                next.push(t as u32, 1, l..=r, has_dup);
            }
        }
        next.dedup();
        stats.peak_candidates = stats.peak_candidates.max(next.cps.len() as u64);
        std::mem::swap(&mut cur, &mut next);
    }
    emit_all(inst, blocks, k, &cur, out);
    Ok(())
}

/// Buffers of the sliding step, kept across the blocks of a candidate.
#[derive(Default)]
struct Scratch {
    head: Vec<u32>,
    entries: Vec<(u32, u32)>,
    /// Per parent CP: the records gathered so far, live from `fronts[ci]`.
    queues: Vec<Vec<u32>>,
    fronts: Vec<usize>,
    gained: Vec<bool>,
    gained_list: Vec<u32>,
}

const NIL: u32 = u32::MAX;

fn sliding_step(
    inst: &Instance,
    prev: Block<'_>,
    blk: Block<'_>,
    cur: &Round,
    m: usize,
    sc: &mut Scratch,
    out: &mut Round,
) {
    let n = cur.cps.len();
    let (Some(first), Some(last)) = (prev.windows.first(), prev.windows.last()) else {
        return;
    };
    let (lo, hi) = (first.0, prev.windows.iter().map(|w| w.1).max().unwrap_or(last.1));
    // Inverted index: previous-block record -> candidates holding it.
    sc.head.clear();
    sc.head.resize((hi - lo + 1) as usize, NIL);
    sc.entries.clear();
    for (ci, cp) in cur.cps.iter().enumerate() {
        for &r in cur.records(cp) {
            if r < lo || r > hi {
                continue;
            }
            let slot = &mut sc.head[(r - lo) as usize];
            sc.entries.push((ci as u32, *slot));
            *slot = sc.entries.len() as u32 - 1;
        }
    }
    if sc.queues.len() < n {
        sc.queues.resize_with(n, Vec::new);
    }
    for q in &mut sc.queues[..n] {
        q.clear();
    }
    sc.fronts.clear();
    sc.fronts.resize(n, 0);
    sc.gained.clear();
    sc.gained.resize(n, false);
    sc.gained_list.clear();

    let tl = inst.timeline(blk.camera);
    let head = &sc.head;
    let lookup = |p: u32| -> u32 {
        match inst.predecessor_at(&tl[p as usize], prev.camera) {
            Some(pp) if pp >= lo && pp <= hi => head[(pp - lo) as usize],
            _ => NIL,
        }
    };
    let (mut wl, mut wr) = (0u32, 0u32);
    for &(l, r) in blk.windows {
        while wl < l.min(wr) {
            let mut e = lookup(wl);
            while e != NIL {
                let (ci, nx) = sc.entries[e as usize];
                debug_assert_eq!(sc.queues[ci as usize].get(sc.fronts[ci as usize]), Some(&wl));
                sc.fronts[ci as usize] += 1;
                e = nx;
            }
            wl += 1;
        }
        wl = wl.max(l);
        for p in wl.max(wr)..=r {
            let mut e = lookup(p);
            while e != NIL {
                let (ci, nx) = sc.entries[e as usize];
                sc.queues[ci as usize].push(p);
                if !sc.gained[ci as usize] {
                    sc.gained[ci as usize] = true;
                    sc.gained_list.push(ci);
                }
                e = nx;
            }
        }
        wr = wr.max(r + 1);
        for ci in sc.gained_list.drain(..) {
            sc.gained[ci as usize] = false;
            let parent = &cur.cps[ci as usize];
            let q = &sc.queues[ci as usize][sc.fronts[ci as usize]..];
            let (distinct, has_dup) = if parent.has_dup {
                let d = distinct_objects(tl, q.iter().copied());
                (d, d < q.len())
            } else {
                (q.len(), false)
            };
            if distinct >= m {
                out.push(parent.start, parent.len + 1, q.iter().copied(), has_dup);
            }
        }
    }
}

fn intersect_step(
    inst: &Instance,
    prev: Block<'_>,
    blk: Block<'_>,
    cur: &Round,
    m: usize,
    stats: &mut VerifyStats,
    out: &mut Round,
) {
    let tl = inst.timeline(blk.camera);
    for cp in &cur.cps {
        let parent = cur.records(cp);
        for &(l, r) in blk.windows {
            stats.intersections += 1;
            let records: Vec<u32> = (l..=r)
                .filter(|&p| {
                    inst.predecessor_at(&tl[p as usize], prev.camera)
                        .is_some_and(|pp| parent.binary_search(&pp).is_ok())
                })
                .collect();
            if records.is_empty() {
                continue;
            }
            let distinct = distinct_objects(tl, records.iter().copied());
            if distinct >= m {
                let has_dup = distinct < records.len();
                out.push(cp.start, cp.len + 1, records, has_dup);
            }
        }
    }
}
