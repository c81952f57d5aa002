//! Mining maximal co-movement patterns from camera-sequence trajectories.
//!
//! A travel path lists the cameras an object passed with entrance and exit
//! times. A co-movement pattern is a group of at least `m` objects that
//! traverse the same `k` or more consecutive cameras with entrance times
//! pairwise within `epsilon` at every camera. [`mine`] returns the patterns
//! not dominated by any other.

pub mod baselines;
pub mod clustering;
pub mod dataio;
pub mod dominance;
pub mod error;
pub mod instance;
pub mod miner;
pub mod model;
pub mod oracle;
pub mod span;
pub mod store;
pub mod suffix_tree;
pub mod tcs;
pub mod verify;

pub use error::{DataError, MineError};
pub use instance::{Instance, RawPattern};
pub use miner::{mine, mine_instance, Algorithm, Budget, MineOptions, MineOutput, MiningStats, Variant};
pub use model::{
    build_camera_network, dominates, eps_reachable, is_subpath, validate_path, virtualize_overlapping_cameras,
    CameraId, CameraNetwork, CoMovementPattern, MiningParams, ObjectId, OverlapGroup, Tick, TravelPath, Visit,
};
