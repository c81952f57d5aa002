//! Level-wise enumerator over the lattice of camera paths.
//!
//! Each level maps a path to its family of object groups. A group is stored
//! as the `(object, visit)` pairs at which its members start the path.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::clustering::ClusterIndex;
use crate::dominance::eliminate_dominated_naive;
use crate::error::MineError;
use crate::instance::{Instance, RawPattern};
use crate::miner::{Budget, MiningStats};
use crate::model::{is_sorted_subset, MiningParams};

type Group = Vec<(u32, u32)>;
type Level = BTreeMap<Vec<u32>, Vec<Group>>;

fn distinct(g: &Group) -> usize {
    let mut n = 0;
    let mut last = None;
    let mut objs: Vec<u32> = g.iter().map(|&(o, _)| o).collect();
    objs.sort_unstable();
    for o in objs {
        if last != Some(o) {
            n += 1;
            last = Some(o);
        }
    }
    n
}

/// Drops duplicates and groups strictly contained in a sibling.
fn prune(mut groups: Vec<Group>) -> Vec<Group> {
    groups.sort();
    groups.dedup();
    let keep: Vec<bool> = groups
        .iter()
        .enumerate()
        .map(|(i, g)| !groups.iter().enumerate().any(|(j, h)| j != i && h.len() > g.len() && is_sorted_subset(g, h)))
        .collect();
    groups.into_iter().zip(keep).filter_map(|(g, k)| k.then_some(g)).collect()
}

fn to_pattern(path: &[u32], g: &Group) -> RawPattern {
    let mut objects: Vec<u32> = g.iter().map(|&(o, _)| o).collect();
    objects.sort_unstable();
    objects.dedup();
    RawPattern { objects, path: path.to_vec() }
}

pub fn mine_apriori(
    inst: &Instance,
    params: &MiningParams,
    budget: &Budget,
    stats: &mut MiningStats,
) -> Result<Vec<RawPattern>, MineError> {
    params.validate()?;
    let index = ClusterIndex::build(inst, params.epsilon, params.m);
    stats.temporal_clusters = index.num_clusters() as u64;

    let mut level: Level = BTreeMap::new();
    for (c, ws) in index.windows.iter().enumerate() {
        if ws.is_empty() {
            continue;
        }
        let tl = inst.timeline(c as u32);
        let groups: Vec<Group> = ws
            .iter()
            .map(|&(l, r)| {
                let mut g: Group = tl[l as usize..=r as usize].iter().map(|x| (x.object, x.visit)).collect();
                g.sort_unstable();
                g
            })
            .collect();
        level.insert(vec![c as u32], prune(groups));
    }

    let mut results: Vec<RawPattern> = Vec::new();
    let mut len = 1usize;
    let mut peak = 0u64;
    let mut intersections = 0u64;
    loop {
        peak = peak.max(level.values().map(|v| v.len() as u64).sum());
        if len >= params.k {
            for (p, gs) in &level {
                results.extend(gs.iter().map(|g| to_pattern(p, g)));
            }
        }
        // Paths of this level indexed by all but their last camera.
        let mut by_prefix: FxHashMap<&[u32], Vec<&Vec<u32>>> = FxHashMap::default();
        for p in level.keys() {
            by_prefix.entry(&p[..p.len() - 1]).or_default().push(p);
        }
        let mut next: Level = BTreeMap::new();
        let mut steps = 0u64;
        for (p1, g1s) in &level {
            budget.check()?;
            let Some(p2s) = by_prefix.get(&p1[1..]) else { continue };
            let last = *p1.last().expect("non-empty");
            for p2 in p2s {
                let c = *p2.last().expect("non-empty");
                if len == 1 && inst.out_neighbors(last).binary_search(&c).is_err() {
                    continue;
                }
                let g2s = &level[*p2];
                let mut fresh: Vec<Group> = Vec::new();
                for g1 in g1s {
                    for g2 in g2s {
                        intersections += 1;
                        steps += 1;
                        if steps.is_multiple_of(4096) {
                            budget.check()?;
                        }
                        let g: Group =
                            g1.iter().copied().filter(|&(o, v)| g2.binary_search(&(o, v + 1)).is_ok()).collect();
                        if !g.is_empty() && distinct(&g) >= params.m {
                            fresh.push(g);
                        }
                    }
                }
                if !fresh.is_empty() {
                    let mut np = p1.clone();
                    np.push(c);
                    next.insert(np, prune(fresh));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
        len += 1;
    }
    stats.intersections = intersections;
    stats.peak_candidates = peak;
    results.sort_unstable();
    results.dedup();
    stats.raw_patterns = results.len() as u64;
    budget.check()?;
    Ok(eliminate_dominated_naive(&results))
}
