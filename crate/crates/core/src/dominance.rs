//! Removal of dominated patterns.

use std::hash::Hash;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::instance::RawPattern;
use crate::model::{is_contiguous_subsequence, is_sorted_subset, CameraId, CoMovementPattern, ObjectId};

/// Read access to a pattern's sorted object list and camera path.
pub trait PatternView {
    type Obj: Ord + Hash + Eq;
    type Cam: Hash + Eq;
    fn objs(&self) -> &[Self::Obj];
    fn cams(&self) -> &[Self::Cam];
}

impl PatternView for RawPattern {
    type Obj = u32;
    type Cam = u32;
    fn objs(&self) -> &[u32] {
        &self.objects
    }
    fn cams(&self) -> &[u32] {
        &self.path
    }
}

impl PatternView for CoMovementPattern {
    type Obj = ObjectId;
    type Cam = CameraId;
    fn objs(&self) -> &[ObjectId] {
        &self.objects
    }
    fn cams(&self) -> &[CameraId] {
        &self.path
    }
}

fn strictly_dominates<P: PatternView>(big: &P, small: &P) -> bool {
    (big.objs().len() > small.objs().len() || big.cams().len() > small.cams().len())
        && is_sorted_subset(small.objs(), big.objs())
        && is_contiguous_subsequence(small.cams(), big.cams())
}

/// The first occurrence of every distinct pattern.
fn dedup<P: PatternView>(patterns: &[P]) -> Vec<&P> {
    let mut seen = FxHashSet::default();
    seen.reserve(patterns.len());
    patterns.iter().filter(|p| seen.insert((p.objs(), p.cams()))).collect()
}

/// Dominance removal that compares a pattern only with patterns sharing its
/// exact path or its exact object set.
///
/// Exact when the input is closed in the following sense, which holds for
/// verifier output: whenever `<O, P>` is in the input, so is some `<O', Q>`
/// with `O' ⊇ O` for every contiguous sub-path `Q` of `P` that is at least
/// as long as the shortest input path. Then a pattern is dominated iff the
/// input holds a strict object superset on the same path, or the same
/// objects on the path extended by one camera at either end. The second test
/// is a hash lookup.
pub fn eliminate_dominated_hashed<P: PatternView + Clone>(patterns: &[P]) -> Vec<P> {
    let pats = dedup(patterns);
    let mut by_path: FxHashMap<&[P::Cam], Vec<usize>> = FxHashMap::default();
    type Key<'a, P> = (&'a [<P as PatternView>::Obj], &'a [<P as PatternView>::Cam]);
    let mut extended: FxHashSet<Key<'_, P>> = FxHashSet::default();
    extended.reserve(2 * pats.len());
    for (i, p) in pats.iter().enumerate() {
        by_path.entry(p.cams()).or_default().push(i);
        let c = p.cams();
        if !c.is_empty() {
            extended.insert((p.objs(), &c[1..]));
            extended.insert((p.objs(), &c[..c.len() - 1]));
        }
    }
    let keep: Vec<bool> = pats
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let wider = by_path[p.cams()]
                .iter()
                .any(|&j| j != i && p.objs().len() < pats[j].objs().len() && is_sorted_subset(p.objs(), pats[j].objs()));
            !(wider || extended.contains(&(p.objs(), p.cams())))
        })
        .collect();
    pats.into_iter().zip(keep).filter(|&(_p, k)| k).map(|(p, _k)| p.clone()).collect()
}

/// Dominance removal by pairwise checks, using an object-to-pattern inverted
/// index to limit the comparisons. Exact for any input.
pub fn eliminate_dominated_naive<P: PatternView + Clone>(patterns: &[P]) -> Vec<P> {
    let pats = dedup(patterns);
    let mut by_obj: FxHashMap<&P::Obj, Vec<usize>> = FxHashMap::default();
    for (i, p) in pats.iter().enumerate() {
        for o in p.objs() {
            by_obj.entry(o).or_default().push(i);
        }
    }
    let keep: Vec<bool> = pats
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let Some(list) = p.objs().iter().map(|o| &by_obj[o]).min_by_key(|l| l.len()) else {
                return !pats.iter().enumerate().any(|(j, q)| j != i && strictly_dominates(*q, *p));
            };
            !list.iter().any(|&j| j != i && strictly_dominates(pats[j], *p))
        })
        .collect();
    pats.into_iter().zip(keep).filter(|&(_p, k)| k).map(|(p, _k)| p.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(o: &[u32], p: &[u32]) -> RawPattern {
        RawPattern { objects: o.to_vec(), path: p.to_vec() }
    }

    #[test]
    fn naive_removes_subsets_and_subpaths() {
        let input = vec![rp(&[1, 2, 3], &[1, 2, 3]), rp(&[1, 2], &[2, 3]), rp(&[1, 4], &[2, 3]), rp(&[1, 2], &[1, 2, 3])];
        let mut out = eliminate_dominated_naive(&input);
        out.sort();
        assert_eq!(out, vec![rp(&[1, 2, 3], &[1, 2, 3]), rp(&[1, 4], &[2, 3])]);
    }

    #[test]
    fn duplicates_collapse() {
        let input = vec![rp(&[1, 2], &[5]), rp(&[1, 2], &[5])];
        assert_eq!(eliminate_dominated_naive(&input).len(), 1);
        assert_eq!(eliminate_dominated_hashed(&input).len(), 1);
    }

    #[test]
    fn non_contiguous_path_is_not_dominated() {
        let input = vec![rp(&[1, 2], &[1, 2, 3]), rp(&[1, 2], &[1, 3])];
        assert_eq!(eliminate_dominated_naive(&input).len(), 2);
    }
}
