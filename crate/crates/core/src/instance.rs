//! Dense-index view of a set of travel paths.
//!
//! Objects and cameras are interned in lexicographic order, so every index
//! based result maps back to identifiers deterministically.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::DataError;
use crate::model::{CameraId, CoMovementPattern, ObjectId, Tick, TravelPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IVisit {
    pub camera: u32,
    pub entrance: Tick,
    pub exit: Tick,
}

/// One object occurrence at a camera: the `visit`-th visit of `object`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Record {
    pub entrance: Tick,
    pub object: u32,
    pub visit: u32,
    pub exit: Tick,
}

#[derive(Debug, Clone)]
pub struct Instance {
    objects: Vec<ObjectId>,
    cameras: Vec<CameraId>,
    paths: Vec<Vec<IVisit>>,
    timelines: Vec<Vec<Record>>,
    /// `pos[o][v]` is the index of visit `v` of object `o` inside the
    /// timeline of its camera.
    pos: Vec<Vec<u32>>,
    out: Vec<Vec<u32>>,
}

impl Instance {
    pub fn new(paths: &[TravelPath]) -> Result<Self, DataError> {
        let mut sorted: Vec<&TravelPath> = paths.iter().collect();
        sorted.sort_unstable_by(|a, b| a.object().cmp(b.object()));
        if let Some(w) = sorted.windows(2).find(|w| w[0].object() == w[1].object()) {
            return Err(DataError::DuplicateObject(w[0].object().to_string()));
        }
        let mut cams: Vec<&CameraId> =
            paths.iter().flat_map(|p| p.cameras()).collect::<FxHashSet<_>>().into_iter().collect();
        cams.sort_unstable();
        let cam_ids: FxHashMap<&CameraId, u32> = cams.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let cameras: Vec<CameraId> = cams.iter().map(|&c| c.clone()).collect();
        let objects: Vec<ObjectId> = sorted.iter().map(|p| p.object().clone()).collect();

        let cam_idx = |c: &CameraId| cam_ids[c];
        let ipaths: Vec<Vec<IVisit>> = sorted
            .iter()
            .map(|p| {
                p.visits()
                    .iter()
                    .map(|v| IVisit { camera: cam_idx(&v.camera), entrance: v.entrance, exit: v.exit })
                    .collect()
            })
            .collect();
        Ok(Self::from_parts(objects, cameras, ipaths))
    }

    fn from_parts(objects: Vec<ObjectId>, cameras: Vec<CameraId>, paths: Vec<Vec<IVisit>>) -> Self {
        let mut timelines: Vec<Vec<Record>> = vec![Vec::new(); cameras.len()];
        for (o, path) in paths.iter().enumerate() {
            for (v, iv) in path.iter().enumerate() {
                timelines[iv.camera as usize].push(Record {
                    entrance: iv.entrance,
                    object: o as u32,
                    visit: v as u32,
                    exit: iv.exit,
                });
            }
        }
        // Ties on entrance fall back to object then occurrence.
        for t in &mut timelines {
            t.sort_unstable();
        }
        let mut pos: Vec<Vec<u32>> = paths.iter().map(|p| vec![0; p.len()]).collect();
        for t in &timelines {
            for (i, r) in t.iter().enumerate() {
                pos[r.object as usize][r.visit as usize] = i as u32;
            }
        }
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); cameras.len()];
        for path in &paths {
            for w in path.windows(2) {
                out[w[0].camera as usize].push(w[1].camera);
            }
        }
        for o in &mut out {
            o.sort_unstable();
            o.dedup();
        }
        Self { objects, cameras, paths, timelines, pos, out }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_cameras(&self) -> usize {
        self.cameras.len()
    }

    pub fn total_visits(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }

    pub fn object_id(&self, o: u32) -> &ObjectId {
        &self.objects[o as usize]
    }

    pub fn camera_id(&self, c: u32) -> &CameraId {
        &self.cameras[c as usize]
    }

    pub fn object_index(&self, id: &ObjectId) -> Option<u32> {
        self.objects.binary_search(id).ok().map(|i| i as u32)
    }

    pub fn camera_index(&self, id: &CameraId) -> Option<u32> {
        self.cameras.binary_search(id).ok().map(|i| i as u32)
    }

    pub fn path(&self, o: u32) -> &[IVisit] {
        &self.paths[o as usize]
    }

    pub fn paths(&self) -> &[Vec<IVisit>] {
        &self.paths
    }

    pub fn timeline(&self, c: u32) -> &[Record] {
        &self.timelines[c as usize]
    }

    /// Position of visit `visit` of object `object` inside its camera timeline.
    pub fn position(&self, object: u32, visit: u32) -> u32 {
        self.pos[object as usize][visit as usize]
    }

    /// Timeline position of the visit preceding `rec`, provided it was made at
    /// camera `prev_camera`.
    #[inline]
    pub fn predecessor_at(&self, rec: &Record, prev_camera: u32) -> Option<u32> {
        if rec.visit == 0 {
            return None;
        }
        let path = &self.paths[rec.object as usize];
        let pv = rec.visit as usize - 1;
        if path[pv].camera != prev_camera {
            return None;
        }
        Some(self.pos[rec.object as usize][pv])
    }

    pub fn out_neighbors(&self, c: u32) -> &[u32] {
        &self.out[c as usize]
    }

    /// Converts index-level results into identifier-level patterns, sorted
    /// canonically (by path, then objects).
    pub fn to_patterns(&self, raw: &[RawPattern]) -> Vec<CoMovementPattern> {
        let mut out: Vec<CoMovementPattern> = raw
            .iter()
            .map(|r| CoMovementPattern {
                objects: {
                    let mut v: Vec<ObjectId> = r.objects.iter().map(|&o| self.object_id(o).clone()).collect();
                    v.sort();
                    v
                },
                path: r.path.iter().map(|&c| self.camera_id(c).clone()).collect(),
                span: None,
            })
            .collect();
        sort_canonical(&mut out);
        out
    }
}

/// Sorts patterns by path, then by object list.
pub fn sort_canonical(patterns: &mut [CoMovementPattern]) {
    patterns.sort_by(|a, b| a.path.cmp(&b.path).then_with(|| a.objects.cmp(&b.objects)));
}

/// Index-level pattern: sorted distinct object indices and a camera path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawPattern {
    pub objects: Vec<u32>,
    pub path: Vec<u32>,
}

impl RawPattern {
    /// Builds a pattern from timeline records, deduplicating objects.
    pub fn from_records(timeline: &[Record], positions: &[u32], path: Vec<u32>) -> Self {
        let mut objects: Vec<u32> = positions.iter().map(|&p| timeline[p as usize].object).collect();
        objects.sort_unstable();
        objects.dedup();
        Self { objects, path }
    }
}

/// Number of distinct objects among timeline positions.
pub(crate) fn distinct_objects(timeline: &[Record], positions: impl IntoIterator<Item = u32>) -> usize {
    let mut small = [0u32; 16];
    let mut n = 0;
    let mut it = positions.into_iter().map(|p| timeline[p as usize].object);
    for o in it.by_ref() {
        if !small[..n].contains(&o) {
            if n == small.len() {
                let mut objs: Vec<u32> = small.to_vec();
                objs.push(o);
                objs.extend(it);
                objs.sort_unstable();
                objs.dedup();
                return objs.len();
            }
            small[n] = o;
            n += 1;
        }
    }
    n
}
