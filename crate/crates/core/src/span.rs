//! Time span of a mined pattern.

use crate::instance::Instance;
use crate::model::Tick;

const STEP_LIMIT: usize = 200_000;

/// Span `[first entrance at the first path camera, last exit at the last path
/// camera]` over one consistent occurrence per member.
///
/// Members are visited in ascending index order and occurrences in path
/// order; the first assignment whose entrances are pairwise within `epsilon`
/// at every path camera wins. Falls back to each member's earliest
/// occurrence when no such assignment is found. Returns `None` if some member
/// never travels `path`.
pub fn pattern_span(inst: &Instance, objects: &[u32], path: &[u32], epsilon: Tick) -> Option<(Tick, Tick)> {
    if objects.is_empty() || path.is_empty() {
        return None;
    }
    let occ: Vec<Vec<usize>> = objects
        .iter()
        .map(|&o| {
            let p = inst.path(o);
            if p.len() < path.len() {
                return Vec::new();
            }
            (0..=p.len() - path.len())
                .filter(|&s| path.iter().enumerate().all(|(i, &c)| p[s + i].camera == c))
                .collect()
        })
        .collect();
    if occ.iter().any(Vec::is_empty) {
        return None;
    }
    let mut choice = vec![0usize; objects.len()];
    let mut steps = 0usize;
    let found = assign(inst, objects, path, epsilon, &occ, 0, &mut choice, &mut steps);
    if !found {
        choice = occ.iter().map(|o| o[0]).collect();
    }
    let last = path.len() - 1;
    let start = objects.iter().zip(&choice).map(|(&o, &s)| inst.path(o)[s].entrance).min()?;
    let end = objects.iter().zip(&choice).map(|(&o, &s)| inst.path(o)[s + last].exit).max()?;
    Some((start, end))
}

#[allow(clippy::too_many_arguments)]
fn assign(
    inst: &Instance,
    objects: &[u32],
    path: &[u32],
    eps: Tick,
    occ: &[Vec<usize>],
    i: usize,
    choice: &mut [usize],
    steps: &mut usize,
) -> bool {
    if i == objects.len() {
        return true;
    }
    for &s in &occ[i] {
        *steps += 1;
        if *steps > STEP_LIMIT {
            return false;
        }
        let pi = inst.path(objects[i]);
        let ok = (0..i).all(|j| {
            let pj = inst.path(objects[j]);
            (0..path.len()).all(|t| pi[s + t].entrance.abs_diff(pj[choice[j] + t].entrance) <= eps)
        });
        if ok {
            choice[i] = s;
            if assign(inst, objects, path, eps, occ, i + 1, choice, steps) {
                return true;
            }
        }
    }
    false
}
