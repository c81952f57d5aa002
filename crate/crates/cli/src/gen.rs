//! Dataset generation: synthetic convoys, clique-reduction instances and
//! GPS conversion.

use std::fs;
use std::path::Path;

use comove::dataio::{
    convert_gps, gen_clique_reduction, gen_synthetic, read_cameras, read_trajectories, Dataset, SyntheticConfig,
};
use comove::oracle::Graph;
use comove::Tick;

use crate::{CliError, Result};

/// Reads a synthetic-generator config from TOML. Missing keys keep their
/// defaults.
pub fn read_synthetic_config(path: &Path) -> Result<SyntheticConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn gen_synthetic_dataset(cfg: &SyntheticConfig, seed: u64) -> Result<Dataset> {
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(gen_synthetic(cfg, seed)?)
}

/// Parses an edge list such as `1-2,2-3` over 1-based vertices.
pub fn parse_edges(s: &str, vertices: usize) -> Result<Vec<(usize, usize)>> {
    let bad = |e: &str| CliError::Usage(format!("bad edge {e:?}: expected a-b with 1 <= a, b <= {vertices}"));
    s.split(',')
        .map(str::trim)
        .filter(|e| !e.is_empty())
        .map(|e| {
            let (a, b) = e.split_once('-').ok_or_else(|| bad(e))?;
            let a: usize = a.trim().parse().map_err(|_| bad(e))?;
            let b: usize = b.trim().parse().map_err(|_| bad(e))?;
            if a == 0 || b == 0 || a > vertices || b > vertices {
                return Err(bad(e));
            }
            Ok((a - 1, b - 1))
        })
        .collect()
}

/// Reduction instance of the graph on `vertices` vertices with the given
/// edges. Vertex `i` becomes object `o{i}`.
pub fn gen_reduction_dataset(vertices: usize, edges: &[(usize, usize)], epsilon: Tick, k: usize) -> Result<Dataset> {
    if vertices == 0 {
        return Err(CliError::Usage("the graph needs at least one vertex".into()));
    }
    let g = Graph::from_edges(vertices, edges);
    let red = gen_clique_reduction(&g, epsilon, k).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(red.dataset)
}

pub fn gen_convert_dataset(tracks: &Path, cameras: &Path, radius: Option<f64>) -> Result<Dataset> {
    let open = |p: &Path| fs::File::open(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())));
    let t = read_trajectories(open(tracks)?).map_err(|e| CliError::Data(format!("{}: {e}", tracks.display())))?;
    let c = read_cameras(open(cameras)?).map_err(|e| CliError::Data(format!("{}: {e}", cameras.display())))?;
    if radius.is_some_and(|r| !(r > 0.0 && r.is_finite())) {
        return Err(CliError::Usage("radius must be positive".into()));
    }
    Ok(convert_gps(&t, &c, radius)?)
}
