//! Acceptance gate. Runs every criterion and prints one PASS/FAIL line per
//! criterion; exits non-zero if any fails.
//!
//! `cargo test -p comove-cli --test acceptance -- 6 7` runs a subset.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use comove::clustering::{pairwise_reachable, ClusterIndex};
use comove::dataio::{gen_clique_reduction, gen_small_random, gen_synthetic, read_dataset_file, write_patterns_file, SyntheticConfig};
use comove::dominance::{eliminate_dominated_hashed, eliminate_dominated_naive};
use comove::oracle::{max_cliques, Graph};
use comove::tcs::{verified_patterns, TcsConfig};
use comove::{mine, mine_instance, Algorithm, Budget, CoMovementPattern, Instance, MineOptions, MiningParams, ObjectId, Variant};
use comove_cli::bench::median;
use comove_cli::eval::cmd_eval;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

type Key = (Vec<String>, Vec<String>);

fn keys(ps: &[CoMovementPattern]) -> BTreeSet<Key> {
    ps.iter()
        .map(|p| (p.objects.iter().map(|o| o.to_string()).collect(), p.path.iter().map(|c| c.to_string()).collect()))
        .collect()
}

fn key(objs: &[&str], path: &[&str]) -> Key {
    (objs.iter().map(|s| s.to_string()).collect(), path.iter().map(|s| s.to_string()).collect())
}

const MINERS: [(Algorithm, &[Variant]); 8] = [
    (Algorithm::Tcs, &[]),
    (Algorithm::Tcs, &[Variant::V1]),
    (Algorithm::Tcs, &[Variant::V2]),
    (Algorithm::Tcs, &[Variant::V3]),
    (Algorithm::Fsm, &[]),
    (Algorithm::Cmc, &[]),
    (Algorithm::Apriori, &[]),
    (Algorithm::Oracle, &[]),
];

fn opts(variants: &[Variant]) -> MineOptions {
    MineOptions { variants: variants.to_vec(), ..Default::default() }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let paths = read_dataset_file(fixture("three_objects.csv")).map_err(|e| e.to_string())?.into_paths();
    let cases = [
        (12, BTreeSet::from([key(&["o1", "o2", "o3"], &["c2", "c4", "c5"]), key(&["o1", "o2"], &["c1", "c2", "c4", "c5"])])),
        (6, BTreeSet::from([key(&["o2", "o3"], &["c2", "c4", "c5"])])),
    ];
    for (eps, want) in &cases {
        let params = MiningParams::new(*eps, 2, 3).unwrap();
        for algo in [Algorithm::Tcs, Algorithm::Cmc, Algorithm::Apriori, Algorithm::Fsm, Algorithm::Oracle] {
            let got = keys(&mine(&paths, algo, &params, &opts(&[])).map_err(|e| e.to_string())?.patterns);
            ensure!(&got == want, "{algo} at eps={eps}: got {got:?}");
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {secs:.3}s");
    Ok(format!("5 miners x 2 settings exact, {secs:.3}s"))
}

fn random_params(rng: &mut ChaCha8Rng) -> MiningParams {
    MiningParams::new(rng.gen_range(0..=12), rng.gen_range(1..=4), rng.gen_range(1..=4)).unwrap()
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut nonempty, mut group) = (0, 0);
    let n = 300usize;
    for seed in 0..n as u64 {
        let ds = gen_small_random(seed, 12, 10, 8);
        let params = random_params(&mut rng);
        let inst = Instance::new(ds.paths()).map_err(|e| e.to_string())?;
        let want = keys(&mine_instance(&inst, Algorithm::Oracle, &params, &opts(&[])).map_err(|e| e.to_string())?.patterns);
        nonempty += usize::from(!want.is_empty());
        group += usize::from(want.iter().any(|(o, p)| o.len() >= 2 && p.len() >= 2));
        for (algo, vars) in MINERS {
            let got = keys(&mine_instance(&inst, algo, &params, &opts(vars)).map_err(|e| e.to_string())?.patterns);
            ensure!(got == want, "seed {seed} {algo}{vars:?} {params:?}: {} vs {} patterns", got.len(), want.len());
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 120.0, "took {secs:.1}s");
    ensure!(nonempty >= n / 3 && group >= n / 6, "instances too sparse ({nonempty} non-empty, {group} with groups)");
    Ok(format!("{n} instances, {nonempty} non-empty, {group} with multi-object multi-camera patterns, {secs:.1}s"))
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p = rng.gen_range(0.1..0.9);
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n_graphs = 120;
    let mut cliques_seen = 0;
    for g_i in 0..n_graphs {
        let n = rng.gen_range(2..=9);
        let g = random_graph(&mut rng, n);
        let eps = rng.gen_range(1..=6);
        let k = rng.gen_range(n..=n + 2);
        let m = rng.gen_range(2..=4);
        let red = gen_clique_reduction(&g, eps, k).map_err(|e| e.to_string())?;
        let full: Vec<String> = (1..=red.eta).map(|j| format!("c{j}")).collect();
        let want: BTreeSet<Vec<String>> = max_cliques(&g)
            .into_iter()
            .filter(|c| c.len() >= m)
            .map(|c| {
                let mut v: Vec<String> = c.iter().map(|&i| format!("o{}", i + 1)).collect();
                v.sort();
                v
            })
            .collect();
        cliques_seen += want.len();
        let params = MiningParams::new(eps, m, k).unwrap();
        for algo in [Algorithm::Oracle, Algorithm::Tcs] {
            let got = mine(red.dataset.paths(), algo, &params, &opts(&[])).map_err(|e| e.to_string())?.patterns;
            ensure!(got.iter().all(|p| keys(std::slice::from_ref(p)).into_iter().all(|(_, path)| path == full)),
                "graph {g_i} {algo}: a pattern misses the full camera path");
            let sets: BTreeSet<Vec<String>> = keys(&got).into_iter().map(|(o, _)| o).collect();
            ensure!(sets.len() == got.len() && sets == want, "graph {g_i} ({n} vertices, m={m}) {algo}: {sets:?} vs {want:?}");
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!("{n_graphs} graphs, {cliques_seen} maximal cliques matched by oracle and tcs, {secs:.1}s"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut pruned, mut total) = (0, 0);
    let n = 100;
    for i in 0..n {
        let (inst, params) = if i % 4 == 3 {
            let cfg = SyntheticConfig { cameras: 25, objects: 120, avg_path_len: 12, horizon: 3000, ..Default::default() };
            let ds = gen_synthetic(&cfg, i).map_err(|e| e.to_string())?;
            (Instance::new(ds.paths()).map_err(|e| e.to_string())?, MiningParams::new(rng.gen_range(20..=60), 2, rng.gen_range(1..=4)).unwrap())
        } else {
            let ds = gen_small_random(i + 5000, 12, 6, 8);
            (Instance::new(ds.paths()).map_err(|e| e.to_string())?, random_params(&mut rng))
        };
        let raw = verified_patterns(&inst, &params, &TcsConfig::TCS, &Budget::unlimited(), &mut Default::default())
            .map_err(|e| e.to_string())?;
        let mut a = eliminate_dominated_hashed(&raw);
        let mut b = eliminate_dominated_naive(&raw);
        a.sort();
        b.sort();
        ensure!(a == b, "result set {i}: hashed kept {}, naive kept {}", a.len(), b.len());
        total += raw.len();
        pruned += raw.len() - a.len();
    }
    ensure!(pruned > 0, "no set contained a dominated pattern");
    Ok(format!("{n} verifier result sets, {total} patterns, {pruned} dominated ones removed identically"))
}

fn cluster_secs(inst: &Instance, eps: u64, m: usize, reps: usize) -> f64 {
    let times: Vec<f64> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(ClusterIndex::build(inst, eps, m));
            t.elapsed().as_secs_f64()
        })
        .collect();
    median(&times)
}

fn criterion_5() -> Outcome {
    let (eps, m) = (60, 2);
    // Soundness, every pair of every cluster.
    let mut clusters = 0;
    for seed in 0..4 {
        let cfg = SyntheticConfig { cameras: 60, objects: 1500, avg_path_len: 20, horizon: 20_000, ..Default::default() };
        let inst = Instance::new(gen_synthetic(&cfg, seed).map_err(|e| e.to_string())?.paths()).map_err(|e| e.to_string())?;
        let index = ClusterIndex::build(&inst, eps, m);
        for (c, ws) in index.windows.iter().enumerate() {
            let tl = inst.timeline(c as u32);
            for &(l, r) in ws {
                ensure!(pairwise_reachable(tl, l, r, eps), "camera {c} cluster {l}..={r} is not pairwise reachable");
                clusters += 1;
            }
        }
    }
    ensure!(clusters > 0, "no clusters produced");

    // Scaling: same knobs, twice the objects.
    let base = SyntheticConfig { cameras: 500, objects: 20_000, avg_path_len: 20, horizon: 200_000, ..Default::default() };
    let small = Instance::new(gen_synthetic(&base, 3).map_err(|e| e.to_string())?.paths()).map_err(|e| e.to_string())?;
    let big_cfg = SyntheticConfig { objects: 2 * base.objects, ..base };
    let big = Instance::new(gen_synthetic(&big_cfg, 3).map_err(|e| e.to_string())?.paths()).map_err(|e| e.to_string())?;
    let visits = (small.total_visits(), big.total_visits());
    let vr = visits.1 as f64 / visits.0 as f64;
    ensure!((1.9..=2.1).contains(&vr), "visit counts {visits:?} are not doubled");
    cluster_secs(&small, eps, m, 1);
    cluster_secs(&big, eps, m, 1);
    let (mut ts, mut tb) = (Vec::new(), Vec::new());
    for _ in 0..5 {
        ts.push(cluster_secs(&small, eps, m, 1));
        tb.push(cluster_secs(&big, eps, m, 1));
    }
    let (s, b) = (median(&ts), median(&tb));
    let ratio = b / s;
    ensure!(ratio <= 2.5, "clustering time ratio {ratio:.2} ({s:.4}s -> {b:.4}s) for {visits:?} visits");
    Ok(format!(
        "{clusters} clusters pairwise reachable; {} -> {} visits: {s:.4}s -> {b:.4}s, ratio {ratio:.2}",
        visits.0, visits.1
    ))
}

/// The dataset shared by criteria 6 and 7.
fn perf_instance() -> Result<Instance, String> {
    let cfg = SyntheticConfig {
        cameras: 500,
        objects: 2000,
        avg_path_len: 50,
        horizon: 50_000,
        group_rate: 0.5,
        max_group: 5,
        ..Default::default()
    };
    let ds = gen_synthetic(&cfg, 1).map_err(|e| e.to_string())?;
    let meta = ds.meta();
    ensure!(meta.num_objects >= 2000 && meta.num_cameras >= 500 && meta.avg_path_len >= 40.0, "dataset too small: {meta:?}");
    Instance::new(ds.paths()).map_err(|e| e.to_string())
}

struct Timing {
    name: &'static str,
    secs: f64,
    patterns: usize,
    intersections: u64,
    candidates: u64,
}

fn perf_runs() -> Result<Vec<Timing>, String> {
    let inst = perf_instance()?;
    let params = MiningParams::new(60, 3, 5).unwrap();
    let runs: [(&str, Algorithm, &[Variant]); 7] = [
        ("tcs", Algorithm::Tcs, &[]),
        ("tcs+v1", Algorithm::Tcs, &[Variant::V1]),
        ("tcs+v2", Algorithm::Tcs, &[Variant::V2]),
        ("tcs+v3", Algorithm::Tcs, &[Variant::V3]),
        ("fsm", Algorithm::Fsm, &[]),
        ("cmc", Algorithm::Cmc, &[]),
        ("apriori", Algorithm::Apriori, &[]),
    ];
    let reps = 5;
    let mut times = vec![Vec::new(); runs.len()];
    let mut outs = Vec::new();
    // One warm-up pass, then repetitions interleaved across algorithms so
    // that drifting machine load hits all of them alike.
    for rep in 0..=reps {
        for (i, &(_, algo, vars)) in runs.iter().enumerate() {
            let t = Instant::now();
            let out = mine_instance(&inst, algo, &params, &opts(vars)).map_err(|e| e.to_string())?;
            let secs = t.elapsed().as_secs_f64();
            if rep == 0 {
                outs.push(out);
            } else {
                times[i].push(secs);
            }
        }
    }
    Ok(runs
        .iter()
        .zip(times)
        .zip(outs)
        .map(|((&(name, _, _), ts), out)| Timing {
            name,
            secs: median(&ts),
            patterns: out.patterns.len(),
            intersections: out.stats.intersections,
            candidates: out.stats.candidates,
        })
        .collect())
}

fn summary(ts: &[Timing]) -> String {
    ts.iter().map(|t| format!("{} {:.3}s", t.name, t.secs)).collect::<Vec<_>>().join(", ")
}

fn criterion_6(ts: &[Timing]) -> Outcome {
    let get = |n: &str| ts.iter().find(|t| t.name == n).expect("timed");
    let (tcs, cmc, apriori, fsm) = (get("tcs"), get("cmc"), get("apriori"), get("fsm"));
    ensure!(ts.iter().all(|t| t.patterns == tcs.patterns), "pattern counts differ: {:?}", ts.iter().map(|t| (t.name, t.patterns)).collect::<Vec<_>>());
    ensure!(tcs.patterns > 0, "no patterns mined");
    ensure!(tcs.intersections == 0, "tcs reported {} intersections", tcs.intersections);
    ensure!(cmc.intersections > 0 && apriori.intersections > 0, "baseline intersections cmc {} apriori {}", cmc.intersections, apriori.intersections);
    let (rc, ra) = (cmc.secs / tcs.secs, apriori.secs / tcs.secs);
    ensure!(rc >= 5.0 && ra >= 5.0 && fsm.secs > tcs.secs, "speedups cmc {rc:.1}x apriori {ra:.1}x fsm {:.1}x ({})", fsm.secs / tcs.secs, summary(ts));
    Ok(format!(
        "{} patterns; tcs {:.3}s, cmc {rc:.1}x, apriori {ra:.1}x, fsm {:.1}x slower; intersections tcs 0, cmc {}, apriori {}",
        tcs.patterns,
        tcs.secs,
        fsm.secs / tcs.secs,
        cmc.intersections,
        apriori.intersections
    ))
}

fn criterion_7(ts: &[Timing]) -> Outcome {
    let get = |n: &str| ts.iter().find(|t| t.name == n).expect("timed");
    let tcs = get("tcs");
    for v in ["tcs+v1", "tcs+v2", "tcs+v3"] {
        let t = get(v);
        ensure!(t.secs > tcs.secs, "{v} {:.3}s is not slower than tcs {:.3}s", t.secs, tcs.secs);
    }
    let (v3, c) = (get("tcs+v3").candidates, tcs.candidates);
    ensure!(v3 > c, "v3 has {v3} candidates, tcs {c}");
    Ok(format!(
        "v1 {:.1}x, v2 {:.1}x, v3 {:.1}x slower than tcs; candidates v3 {v3} vs tcs {c}",
        get("tcs+v1").secs / tcs.secs,
        get("tcs+v2").secs / tcs.secs,
        get("tcs+v3").secs / tcs.secs
    ))
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = SyntheticConfig { cameras: 60, objects: 400, avg_path_len: 12, horizon: 20_000, ..Default::default() };
    let ds = gen_synthetic(&cfg, 5).map_err(|e| e.to_string())?;
    let mined = mine(ds.paths(), Algorithm::Tcs, &MiningParams::new(40, 2, 3).unwrap(), &opts(&[]))
        .map_err(|e| e.to_string())?
        .patterns;
    ensure!(mined.len() >= 20, "only {} patterns to evaluate", mined.len());
    let mined_path = dir.path().join("mined.jsonl");
    write_patterns_file(&mined, &mined_path).map_err(|e| e.to_string())?;

    // Self comparison through the binary.
    let out = Command::new(env!("CARGO_BIN_EXE_comove"))
        .args(["eval", "--mined"])
        .arg(&mined_path)
        .arg("--truth")
        .arg(&mined_path)
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure!(out.status.success() && stdout.contains("f1 1.0000"), "self evaluation printed {stdout:?}");

    // Perturb one object id on 30% of the groundtruth lines.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = mined.len();
    let n_bad = (3 * n).div_ceil(10);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..n_bad {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    let mut truth = mined.clone();
    for (c, &i) in idx[..n_bad].iter().enumerate() {
        let p = &mut truth[i];
        p.objects[0] = ObjectId::from(format!("perturbed-{c}").as_str());
        p.objects.sort();
    }
    let truth_path = dir.path().join("truth.jsonl");
    write_patterns_file(&truth, &truth_path).map_err(|e| e.to_string())?;
    let r = cmd_eval(&mined_path, &truth_path, 0.8).map_err(|e| e.to_string())?;
    ensure!(r.f1 <= 0.70, "perturbed F1 {:.4}", r.f1);

    // IoU boundary.
    let span = |s: u64, e: u64| {
        let mut p = CoMovementPattern::of(&["a", "b"], &["c1", "c2"]);
        p.span = Some((s, e));
        vec![p]
    };
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    write_patterns_file(&span(0, 10), &a).map_err(|e| e.to_string())?;
    write_patterns_file(&span(5, 15), &b).map_err(|e| e.to_string())?;
    let boundary = cmd_eval(&a, &b, 0.8).map_err(|e| e.to_string())?;
    ensure!(boundary.matched == 0, "[0,10] vs [5,15] matched at 0.8");
    Ok(format!("self F1 1.0000 over {n} patterns; {n_bad} lines perturbed: F1 {:.4}; boundary IoU unmatched", r.f1))
}

fn run(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = t.elapsed().as_secs_f64();
    match res {
        Ok(detail) => {
            println!("criterion {n} ({name}): PASS [{secs:.1}s] {detail}");
            true
        }
        Err(why) => {
            println!("criterion {n} ({name}): FAIL [{secs:.1}s] {why}");
            false
        }
    }
}

fn main() -> ExitCode {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let on = |n: usize| wanted.is_empty() || wanted.contains(&n);
    let mut ok = true;
    if on(1) {
        ok &= run(1, "fixture exactness", criterion_1);
    }
    if on(2) {
        ok &= run(2, "oracle equivalence", criterion_2);
    }
    if on(3) {
        ok &= run(3, "clique reduction", criterion_3);
    }
    if on(4) {
        ok &= run(4, "eliminator equivalence", criterion_4);
    }
    if on(5) {
        ok &= run(5, "clustering soundness and linearity", criterion_5);
    }
    if on(6) || on(7) {
        let t = Instant::now();
        let timings = catch_unwind(perf_runs).unwrap_or_else(|_| Err("benchmark run panicked".into()));
        println!("performance runs took {:.1}s", t.elapsed().as_secs_f64());
        if on(6) {
            ok &= run(6, "performance ordering", || criterion_6(timings.as_ref()?));
        }
        if on(7) {
            ok &= run(7, "ablation direction", || criterion_7(timings.as_ref()?));
        }
    }
    if on(8) {
        ok &= run(8, "evaluation sanity", criterion_8);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
