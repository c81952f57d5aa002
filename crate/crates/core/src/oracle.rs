//! Brute-force reference miner and maximal-clique enumeration.

use std::collections::{BTreeMap, BTreeSet};

use crate::dominance::eliminate_dominated_naive;
use crate::error::MineError;
use crate::instance::{Instance, RawPattern};
use crate::model::MiningParams;

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![vec![false; n]; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Self-loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a][b] = true;
            self.adj[b][a] = true;
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|a| (a + 1..n).filter(move |&b| self.adj[a][b]).map(move |b| (a, b))).collect()
    }
}

/// All maximal cliques (Bron–Kerbosch with Tomita pivoting). Each clique is
/// sorted, and the list is sorted.
pub fn max_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if g.is_empty() {
        return out;
    }
    let p: Vec<usize> = (0..g.len()).collect();
    bron_kerbosch(g, &mut Vec::new(), p, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(g: &Graph, r: &mut Vec<usize>, p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.adj[u][v]).count())
        .expect("non-empty");
    let mut p = p;
    let branch: Vec<usize> = p.iter().copied().filter(|&v| !g.adj[pivot][v]).collect();
    for v in branch {
        let np: Vec<usize> = p.iter().copied().filter(|&u| g.adj[v][u]).collect();
        let nx: Vec<usize> = x.iter().copied().filter(|&u| g.adj[v][u]).collect();
        r.push(v);
        bron_kerbosch(g, r, np, nx, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

/// Size guard for [`mine_bruteforce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_objects: usize,
    pub max_cameras: usize,
    pub max_path_len: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self { max_objects: 40, max_cameras: 40, max_path_len: 40 }
    }
}

/// Reference miner: for every contiguous sub-path of length `>= k`, the
/// maximal cliques of the graph on `(object, occurrence)` vertices whose
/// edges join distinct objects ε-reachable at every camera of the sub-path.
pub fn mine_bruteforce(
    inst: &Instance,
    params: &MiningParams,
    limits: &OracleLimits,
) -> Result<Vec<RawPattern>, MineError> {
    params.validate()?;
    let longest = inst.paths().iter().map(Vec::len).max().unwrap_or(0);
    if inst.num_objects() > limits.max_objects
        || inst.num_cameras() > limits.max_cameras
        || longest > limits.max_path_len
    {
        return Err(MineError::TooLarge(format!(
            "{} objects, {} cameras, longest path {} (limits {}, {}, {})",
            inst.num_objects(),
            inst.num_cameras(),
            longest,
            limits.max_objects,
            limits.max_cameras,
            limits.max_path_len
        )));
    }

    // Every distinct sub-path with its occurrences.
    let mut subpaths: BTreeMap<Vec<u32>, Vec<(u32, usize)>> = BTreeMap::new();
    for (o, p) in inst.paths().iter().enumerate() {
        let cams: Vec<u32> = p.iter().map(|v| v.camera).collect();
        for len in params.k..=cams.len() {
            for s in 0..=cams.len() - len {
                subpaths.entry(cams[s..s + len].to_vec()).or_default().push((o as u32, s));
            }
        }
    }

    let mut found: BTreeSet<RawPattern> = BTreeSet::new();
    for (path, verts) in &subpaths {
        let mut g = Graph::new(verts.len());
        for a in 0..verts.len() {
            for b in a + 1..verts.len() {
                let (oa, sa) = verts[a];
                let (ob, sb) = verts[b];
                if oa == ob {
                    continue;
                }
                let (pa, pb) = (inst.path(oa), inst.path(ob));
                let ok = (0..path.len()).all(|t| pa[sa + t].entrance.abs_diff(pb[sb + t].entrance) <= params.epsilon);
                if ok {
                    g.add_edge(a, b);
                }
            }
        }
        for clique in max_cliques(&g) {
            let mut objects: Vec<u32> = clique.iter().map(|&i| verts[i].0).collect();
            objects.sort_unstable();
            objects.dedup();
            if objects.len() >= params.m {
                found.insert(RawPattern { objects, path: path.clone() });
            }
        }
    }
    let all: Vec<RawPattern> = found.into_iter().collect();
    let mut out: Vec<RawPattern> = all
        .iter()
        .filter(|p| {
            !all.iter().any(|q| {
                q != *p
                    && crate::model::is_sorted_subset(&p.objects, &q.objects)
                    && crate::model::is_contiguous_subsequence(&p.path, &q.path)
            })
        })
        .cloned()
        .collect();
    out.sort();
    debug_assert_eq!(out.len(), eliminate_dominated_naive(&out).len());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(max_cliques(&g), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn path_and_isolated() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        assert_eq!(max_cliques(&g), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn random_graphs_match_subset_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = 8;
            let mut g = Graph::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.4) {
                        g.add_edge(a, b);
                    }
                }
            }
            let is_clique = |mask: u32| {
                (0..n).all(|a| (0..n).all(|b| a == b || mask & (1 << a) == 0 || mask & (1 << b) == 0 || g.has_edge(a, b)))
            };
            let mut expect: Vec<Vec<usize>> = (1u32..1 << n)
                .filter(|&mask| is_clique(mask) && (0..n).all(|v| mask & (1 << v) != 0 || !is_clique(mask | (1 << v))))
                .map(|mask| (0..n).filter(|&v| mask & (1 << v) != 0).collect())
                .collect();
            expect.sort();
            assert_eq!(max_cliques(&g), expect);
        }
    }
}
