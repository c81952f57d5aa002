//! Domain types shared by every miner, plus the sub-path, reachability and
//! dominance predicates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{DataError, MineError};

/// Integer time ticks (seconds in the shipped datasets).
pub type Tick = u64;

macro_rules! string_id {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Result<Self, DataError> {
                let id = id.into();
                if id.is_empty() {
                    return Err(DataError::EmptyId);
                }
                Ok(Self(id))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            /// Panics on an empty string; meant for literals and tests.
            fn from(s: &str) -> Self {
                Self::new(s).expect("non-empty identifier")
            }
        }
    };
}

string_id!(
    /// Opaque camera identifier.
    CameraId
);
string_id!(
    /// Opaque moving-object identifier.
    ObjectId
);

/// One sighting of an object by a camera.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Visit {
    pub camera: CameraId,
    pub entrance: Tick,
    pub exit: Tick,
}

impl Visit {
    pub fn new(camera: impl Into<CameraId>, entrance: Tick, exit: Tick) -> Self {
        Self { camera: camera.into(), entrance, exit }
    }
}

impl From<String> for CameraId {
    fn from(s: String) -> Self {
        CameraId::new(s).expect("non-empty identifier")
    }
}

/// Time-ordered camera visits of a single object.
///
/// Visits satisfy `entrance <= exit < next.entrance`. Zero-length dwell is
/// allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TravelPath {
    object: ObjectId,
    visits: Vec<Visit>,
}

impl TravelPath {
    /// Builds a path from raw visits; see [`validate_path`].
    pub fn new(object: ObjectId, visits: Vec<Visit>) -> Result<Self, DataError> {
        let visits = validate_path(visits)?;
        Ok(Self { object, visits })
    }

    pub fn object(&self) -> &ObjectId {
        &self.object
    }

    pub fn visits(&self) -> &[Visit] {
        &self.visits
    }

    pub fn len(&self) -> usize {
        self.visits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    pub fn cameras(&self) -> impl Iterator<Item = &CameraId> + '_ {
        self.visits.iter().map(|v| &v.camera)
    }

    pub fn interval(&self) -> (Tick, Tick) {
        (self.visits[0].entrance, self.visits[self.visits.len() - 1].exit)
    }
}

/// Sorts raw visits by entrance and checks the interval chain.
///
/// Errors name the offending visit index: the input index for an inverted
/// interval, the sorted index for an overlap with the previous visit.
pub fn validate_path(mut visits: Vec<Visit>) -> Result<Vec<Visit>, DataError> {
    if visits.is_empty() {
        return Err(DataError::EmptyPath);
    }
    for (index, v) in visits.iter().enumerate() {
        if v.exit < v.entrance {
            return Err(DataError::ExitBeforeEntrance { index, entrance: v.entrance, exit: v.exit });
        }
    }
    visits.sort_by_key(|v| v.entrance);
    for index in 1..visits.len() {
        let prev_exit = visits[index - 1].exit;
        let entrance = visits[index].entrance;
        if entrance <= prev_exit {
            return Err(DataError::Overlap { index, prev_exit, entrance });
        }
    }
    Ok(visits)
}

/// Query parameters: proximity threshold, minimum group size and minimum
/// path length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MiningParams {
    pub epsilon: Tick,
    pub m: usize,
    pub k: usize,
}

impl MiningParams {
    pub fn new(epsilon: Tick, m: usize, k: usize) -> Result<Self, MineError> {
        let p = Self { epsilon, m, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), MineError> {
        if self.m == 0 {
            return Err(MineError::InvalidParams("m must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(MineError::InvalidParams("k must be at least 1".into()));
        }
        Ok(())
    }
}

/// A group of objects travelling a common contiguous camera path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoMovementPattern {
    /// Sorted, duplicate-free.
    pub objects: Vec<ObjectId>,
    pub path: Vec<CameraId>,
    /// `[start, end]`; filled in by [`crate::span::pattern_span`].
    pub span: Option<(Tick, Tick)>,
}

impl CoMovementPattern {
    pub fn new(objects: impl IntoIterator<Item = ObjectId>, path: Vec<CameraId>) -> Self {
        let set: BTreeSet<ObjectId> = objects.into_iter().collect();
        Self { objects: set.into_iter().collect(), path, span: None }
    }

    /// Convenience constructor from string literals.
    pub fn of(objects: &[&str], path: &[&str]) -> Self {
        Self::new(
            objects.iter().map(|o| ObjectId::from(*o)),
            path.iter().map(|c| CameraId::from(*c)).collect(),
        )
    }

    /// The `(objects, path)` pair that identifies a pattern regardless of span.
    pub fn key(&self) -> (&[ObjectId], &[CameraId]) {
        (&self.objects, &self.path)
    }
}

impl fmt::Display for CoMovementPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let objs: Vec<&str> = self.objects.iter().map(|o| o.as_str()).collect();
        let path: Vec<&str> = self.path.iter().map(|c| c.as_str()).collect();
        write!(f, "<{{{}}}, {}>", objs.join(","), path.join("->"))
    }
}

/// Returns every start index at which `inner` occurs contiguously in
/// `outer`'s camera sequence.
pub fn is_subpath(inner: &[CameraId], outer: &TravelPath) -> Vec<usize> {
    let cams: Vec<&CameraId> = outer.cameras().collect();
    occurrences(inner, &cams)
}

/// Contiguous occurrence positions of `needle` in `hay`.
pub fn occurrences<A, B>(needle: &[A], hay: &[B]) -> Vec<usize>
where
    A: PartialEq<B>,
{
    if needle.is_empty() || needle.len() > hay.len() {
        return Vec::new();
    }
    (0..=hay.len() - needle.len())
        .filter(|&i| needle.iter().zip(&hay[i..]).all(|(a, b)| a == b))
        .collect()
}

/// True iff `inner` occurs contiguously inside `outer`.
pub fn is_contiguous_subsequence<T: PartialEq>(inner: &[T], outer: &[T]) -> bool {
    if inner.is_empty() {
        return true;
    }
    inner.len() <= outer.len() && outer.windows(inner.len()).any(|w| w == inner)
}

impl PartialEq<&CameraId> for CameraId {
    fn eq(&self, other: &&CameraId) -> bool {
        self == *other
    }
}

/// Two visits at the same camera are ε-reachable when their entrances differ
/// by at most `epsilon`.
pub fn eps_reachable(v1: &Visit, v2: &Visit, epsilon: Tick) -> Result<bool, MineError> {
    if v1.camera != v2.camera {
        return Err(MineError::InvalidParams(format!(
            "reachability compares visits at different cameras ({} vs {})",
            v1.camera, v2.camera
        )));
    }
    Ok(v1.entrance.abs_diff(v2.entrance) <= epsilon)
}

/// True iff `cp1` dominates `cp2`: `cp2`'s objects are a subset of `cp1`'s and
/// `cp2`'s path occurs contiguously in `cp1`'s.
pub fn dominates(cp1: &CoMovementPattern, cp2: &CoMovementPattern) -> bool {
    is_sorted_subset(&cp2.objects, &cp1.objects) && is_contiguous_subsequence(&cp2.path, &cp1.path)
}

/// Subset test on two ascending slices.
pub fn is_sorted_subset<T: Ord>(small: &[T], big: &[T]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for x in small {
        while j < big.len() && big[j] < *x {
            j += 1;
        }
        if j == big.len() || big[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Data-driven camera digraph: an edge per consecutive camera pair observed
/// in some travel path.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CameraNetwork {
    out_edges: BTreeMap<CameraId, BTreeSet<CameraId>>,
    in_edges: BTreeMap<CameraId, BTreeSet<CameraId>>,
}

impl CameraNetwork {
    pub fn vertices(&self) -> impl Iterator<Item = &CameraId> + '_ {
        self.out_edges.keys()
    }

    pub fn vertex_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.values().map(BTreeSet::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&CameraId, &CameraId)> + '_ {
        self.out_edges.iter().flat_map(|(a, outs)| outs.iter().map(move |b| (a, b)))
    }

    pub fn out_neighbors(&self, c: &CameraId) -> impl Iterator<Item = &CameraId> + '_ {
        self.out_edges.get(c).into_iter().flatten()
    }

    pub fn in_neighbors(&self, c: &CameraId) -> impl Iterator<Item = &CameraId> + '_ {
        self.in_edges.get(c).into_iter().flatten()
    }

    pub fn has_edge(&self, a: &CameraId, b: &CameraId) -> bool {
        self.out_edges.get(a).is_some_and(|s| s.contains(b))
    }
}

pub fn build_camera_network<'a>(paths: impl IntoIterator<Item = &'a TravelPath>) -> CameraNetwork {
    let mut net = CameraNetwork::default();
    for p in paths {
        for v in p.visits() {
            net.out_edges.entry(v.camera.clone()).or_default();
            net.in_edges.entry(v.camera.clone()).or_default();
        }
        for w in p.visits().windows(2) {
            net.out_edges.get_mut(&w[0].camera).unwrap().insert(w[1].camera.clone());
            net.in_edges.get_mut(&w[1].camera).unwrap().insert(w[0].camera.clone());
        }
    }
    net
}

/// A set of cameras with overlapping views, collapsed into one virtual camera.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapGroup {
    pub virtual_camera: CameraId,
    pub members: Vec<CameraId>,
}

/// Replaces each run of temporally overlapping visits to cameras of one group
/// with a single visit to the group's virtual camera spanning the run.
///
/// Input is raw (unvalidated) per-object sightings, since overlapping
/// captures cannot be expressed as a [`TravelPath`]. Visits to group members
/// that do not overlap stay separate but are renamed. Cameras outside every
/// group are untouched.
pub fn virtualize_overlapping_cameras(
    raw: &[(ObjectId, Vec<Visit>)],
    groups: &[OverlapGroup],
) -> Result<Vec<TravelPath>, DataError> {
    let known: BTreeSet<&CameraId> = raw.iter().flat_map(|(_, vs)| vs.iter().map(|v| &v.camera)).collect();
    let mut group_of: BTreeMap<&CameraId, &CameraId> = BTreeMap::new();
    for g in groups {
        for c in &g.members {
            if !known.contains(c) {
                return Err(DataError::UnknownCamera(c.to_string()));
            }
            if group_of.insert(c, &g.virtual_camera).is_some() {
                return Err(DataError::CameraInTwoGroups(c.to_string()));
            }
        }
    }

    raw.iter()
        .map(|(object, visits)| {
            let mut sorted = visits.clone();
            sorted.sort_by_key(|v| (v.entrance, v.exit));
            let mut out: Vec<Visit> = Vec::with_capacity(sorted.len());
            for v in sorted {
                match group_of.get(&v.camera) {
                    Some(&vc) => {
                        if let Some(last) = out.last_mut() {
                            if last.camera == vc && v.entrance <= last.exit {
                                last.exit = last.exit.max(v.exit);
                                continue;
                            }
                        }
                        out.push(Visit { camera: vc.clone(), entrance: v.entrance, exit: v.exit });
                    }
                    None => out.push(v),
                }
            }
            TravelPath::new(object.clone(), out)
                .map_err(|e| DataError::InObject { object: object.to_string(), source: Box::new(e) })
        })
        .collect()
}
