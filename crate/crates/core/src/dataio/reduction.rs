//! Instances built from a graph so that maximal cliques become maximal
//! patterns.
//!
//! Object `i` enters camera `j` at `(2ε+1)j - ε` when `i != j` and `i`, `j`
//! are not adjacent, at `(2ε+1)j` when they are adjacent, and at
//! `(2ε+1)j + ε` when `i == j`. Two objects are then ε-reachable at every
//! camera exactly when they are adjacent. The correspondence holds for the
//! full path; mining with `k` below the vertex count also reports groups on
//! shorter sub-paths that avoid the witness cameras.

use crate::dataio::Dataset;
use crate::error::DataError;
use crate::model::{CameraId, ObjectId, Tick, TravelPath, Visit};
use crate::oracle::Graph;

#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub graph: Graph,
    pub epsilon: Tick,
    pub k: usize,
    /// Number of cameras, `max(|V|, k)`.
    pub eta: usize,
    pub dataset: Dataset,
}

/// Object id of vertex `i` (0-based): `o{i+1}`.
pub fn object_name(i: usize) -> String {
    format!("o{}", i + 1)
}

/// Camera id of camera `j` (1-based): `c{j}`.
pub fn camera_name(j: usize) -> String {
    format!("c{j}")
}

pub fn gen_clique_reduction(graph: &Graph, epsilon: Tick, k: usize) -> Result<ReductionInstance, DataError> {
    if epsilon == 0 {
        return Err(DataError::Config("epsilon must be at least 1".into()));
    }
    let n = graph.len();
    let eta = n.max(k);
    let step = 2 * epsilon + 1;
    let paths = (0..n)
        .map(|i| {
            let visits = (1..=eta)
                .map(|j| {
                    let base = step * j as Tick;
                    let t = if j == i + 1 {
                        base + epsilon
                    } else if j <= n && graph.has_edge(i, j - 1) {
                        base
                    } else {
                        base - epsilon
                    };
                    Visit { camera: CameraId::new(camera_name(j)).expect("non-empty"), entrance: t, exit: t }
                })
                .collect();
            TravelPath::new(ObjectId::new(object_name(i)).expect("non-empty"), visits)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ReductionInstance { graph: graph.clone(), epsilon, k, eta, dataset: Dataset::new(paths)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_entrances() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let r = gen_clique_reduction(&g, 2, 3).unwrap();
        assert_eq!(r.eta, 3);
        let first: Vec<Tick> = r.dataset.paths().iter().map(|p| p.visits()[0].entrance).collect();
        assert_eq!(first, vec![7, 5, 3]);
        assert_eq!(r.dataset.meta().num_visits, 9);
    }

    #[test]
    fn zero_epsilon_rejected() {
        assert!(gen_clique_reduction(&Graph::new(2), 0, 2).is_err());
    }
}
