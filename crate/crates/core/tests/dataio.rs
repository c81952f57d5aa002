use std::collections::BTreeMap;

use comove::dataio::{
    convert_gps, gen_clique_reduction, gen_synthetic, read_cameras, read_dataset, read_trajectories, write_dataset,
    CameraSpec, GpsSample, SyntheticConfig,
};
use comove::oracle::Graph;
use comove::{mine, Algorithm, MineOptions, MiningParams, ObjectId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRACKS: &str = include_str!("../../../data/toy_tracks.csv");
const CAMERAS: &str = include_str!("../../../data/toy_cameras.csv");
const GOLDEN: &str = include_str!("../../../data/toy_golden.csv");

fn to_csv(ds: &comove::dataio::Dataset) -> String {
    let mut buf = Vec::new();
    write_dataset(ds, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn toy_gps_matches_golden() {
    let tracks = read_trajectories(TRACKS.as_bytes()).unwrap();
    let cams = read_cameras(CAMERAS.as_bytes()).unwrap();
    let ds = convert_gps(&tracks, &cams, None).unwrap();
    assert_eq!(to_csv(&ds), GOLDEN);
}

fn shifted(
    tracks: &BTreeMap<ObjectId, Vec<GpsSample>>,
    cams: &[CameraSpec],
    dx: f64,
    dy: f64,
) -> (BTreeMap<ObjectId, Vec<GpsSample>>, Vec<CameraSpec>) {
    let t = tracks
        .iter()
        .map(|(o, s)| (o.clone(), s.iter().map(|p| GpsSample { ts: p.ts, x: p.x + dx, y: p.y + dy }).collect()))
        .collect();
    let c = cams.iter().map(|c| CameraSpec { x: c.x + dx, y: c.y + dy, ..c.clone() }).collect();
    (t, c)
}

#[test]
fn conversion_is_translation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let cams: Vec<CameraSpec> = (0..6)
            .map(|i| CameraSpec {
                id: format!("k{i}").as_str().into(),
                x: rng.gen_range(0..40) as f64 * 10.0,
                y: rng.gen_range(0..40) as f64 * 10.0,
                radius: rng.gen_range(5..30) as f64,
                group: (i % 3 == 0).then(|| "g".into()),
            })
            .collect();
        let mut tracks = BTreeMap::new();
        for o in 0..5 {
            let mut ts = 0.0;
            let samples = (0..8)
                .map(|_| {
                    ts += rng.gen_range(1..40) as f64;
                    GpsSample { ts, x: rng.gen_range(0..400) as f64, y: rng.gen_range(0..400) as f64 }
                })
                .collect();
            tracks.insert(ObjectId::new(format!("o{o}")).unwrap(), samples);
        }
        let base = convert_gps(&tracks, &cams, None).unwrap();
        for (dx, dy) in [(1000.0, -250.0), (-3.5, 12.25), (1e5, 1e5)] {
            let (t, c) = shifted(&tracks, &cams, dx, dy);
            assert_eq!(convert_gps(&t, &c, None).unwrap(), base, "shift ({dx}, {dy})");
        }
    }
}

#[test]
fn radius_override_applies_to_all_cameras() {
    let tracks = read_trajectories(TRACKS.as_bytes()).unwrap();
    let cams = read_cameras(CAMERAS.as_bytes()).unwrap();
    assert!(convert_gps(&tracks, &cams, Some(0.5)).unwrap().meta().num_visits < 8);
}

#[test]
fn reduction_of_single_edge_has_nine_rows() {
    let g = Graph::from_edges(3, &[(0, 1)]);
    let red = gen_clique_reduction(&g, 2, 3).unwrap();
    assert_eq!(red.eta, 3);
    let text = to_csv(&red.dataset);
    assert_eq!(text.lines().count(), 1 + 9);
    assert!(text.contains("o1,c1,7,7\n") && text.contains("o2,c1,5,5\n") && text.contains("o3,c1,3,3\n"));
}

#[test]
fn reduction_extends_path_to_k() {
    let g = Graph::from_edges(2, &[(0, 1)]);
    let red = gen_clique_reduction(&g, 1, 5).unwrap();
    assert_eq!(red.eta, 5);
    assert!(red.dataset.paths().iter().all(|p| p.len() == 5));
}

#[test]
fn synthetic_is_deterministic() {
    let cfg = SyntheticConfig { cameras: 100, objects: 50, avg_path_len: 10, ..Default::default() };
    let a = to_csv(&gen_synthetic(&cfg, 7).unwrap());
    assert_eq!(a, to_csv(&gen_synthetic(&cfg, 7).unwrap()));
    assert_ne!(a, to_csv(&gen_synthetic(&cfg, 8).unwrap()));
    // Output is a valid dataset file.
    assert_eq!(to_csv(&read_dataset(a.as_bytes()).unwrap()), a);
}

#[test]
fn synthetic_without_groups_is_nearly_empty() {
    let cfg = SyntheticConfig {
        cameras: 9,
        objects: 12,
        avg_path_len: 6,
        group_rate: 0.0,
        eps_scale: 0,
        horizon: 5000,
        ..Default::default()
    };
    let params = MiningParams::new(0, 2, 2).unwrap();
    let mut total = 0;
    for seed in 0..20 {
        let ds = gen_synthetic(&cfg, seed).unwrap();
        let oracle = mine(ds.paths(), Algorithm::Oracle, &params, &MineOptions::default()).unwrap().patterns;
        let tcs = mine(ds.paths(), Algorithm::Tcs, &params, &MineOptions::default()).unwrap().patterns;
        assert_eq!(tcs, oracle);
        total += oracle.len();
    }
    assert!(total <= 2, "{total} patterns without injected groups");
}

#[test]
fn synthetic_with_groups_has_patterns() {
    let cfg = SyntheticConfig { cameras: 9, objects: 12, avg_path_len: 6, horizon: 5000, ..Default::default() };
    let params = MiningParams::new(cfg.eps_scale, 2, 2).unwrap();
    let found: usize = (0..10)
        .map(|seed| {
            let ds = gen_synthetic(&cfg, seed).unwrap();
            let oracle = mine(ds.paths(), Algorithm::Oracle, &params, &MineOptions::default()).unwrap().patterns;
            assert_eq!(mine(ds.paths(), Algorithm::Tcs, &params, &MineOptions::default()).unwrap().patterns, oracle);
            oracle.len()
        })
        .sum();
    assert!(found >= 10);
}
