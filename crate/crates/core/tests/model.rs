use comove::dataio::read_dataset;
use comove::{
    build_camera_network, dominates, eps_reachable, is_subpath, validate_path, virtualize_overlapping_cameras,
    CameraId, CoMovementPattern, DataError, ObjectId, OverlapGroup, TravelPath, Visit,
};

fn path(object: &str, visits: &[(&str, u64, u64)]) -> TravelPath {
    TravelPath::new(ObjectId::from(object), visits.iter().map(|&(c, s, e)| Visit::new(c, s, e)).collect()).unwrap()
}

fn cams(ids: &[&str]) -> Vec<CameraId> {
    ids.iter().map(|c| CameraId::from(*c)).collect()
}

fn fixture() -> Vec<TravelPath> {
    read_dataset(include_str!("fixtures/three_objects.csv").as_bytes()).unwrap().into_paths()
}

#[test]
fn validate_accepts_o3_prefix() {
    let v = validate_path(vec![Visit::new("c3", 7, 9), Visit::new("c2", 17, 19)]).unwrap();
    assert_eq!(v.len(), 2);
}

#[test]
fn validate_accepts_single_visit() {
    assert!(validate_path(vec![Visit::new("c1", 1, 3)]).is_ok());
}

#[test]
fn validate_sorts_by_entrance() {
    let v = validate_path(vec![Visit::new("c2", 17, 19), Visit::new("c3", 7, 9)]).unwrap();
    assert_eq!(v[0].camera.as_str(), "c3");
}

#[test]
fn validate_rejects_inverted_interval() {
    assert_eq!(
        validate_path(vec![Visit::new("c1", 5, 4)]),
        Err(DataError::ExitBeforeEntrance { index: 0, entrance: 5, exit: 4 })
    );
}

#[test]
fn validate_rejects_overlap_and_touching() {
    let err = validate_path(vec![Visit::new("c1", 1, 5), Visit::new("c2", 5, 8)]).unwrap_err();
    assert_eq!(err, DataError::Overlap { index: 1, prev_exit: 5, entrance: 5 });
    assert_eq!(validate_path(vec![]), Err(DataError::EmptyPath));
}

#[test]
fn zero_length_dwell_is_allowed() {
    assert!(validate_path(vec![Visit::new("c1", 4, 4), Visit::new("c2", 5, 5)]).is_ok());
}

#[test]
fn subpath_positions() {
    let o3 = path("o3", &[("c3", 7, 9), ("c2", 17, 19), ("c4", 32, 35), ("c5", 41, 47)]);
    assert_eq!(is_subpath(&cams(&["c2", "c4", "c5"]), &o3), vec![1]);
    assert_eq!(is_subpath(&cams(&["c3", "c2", "c4", "c5"]), &o3), vec![0]);
    let p = path("x", &[("c1", 0, 1), ("c2", 3, 4), ("c4", 6, 7)]);
    assert!(is_subpath(&cams(&["c1", "c4"]), &p).is_empty());
}

#[test]
fn subpath_reports_every_occurrence() {
    let p = path("x", &[("a", 0, 1), ("b", 2, 3), ("a", 4, 5), ("b", 6, 7)]);
    assert_eq!(is_subpath(&cams(&["a", "b"]), &p), vec![0, 2]);
}

#[test]
fn reachability_examples() {
    let a = Visit::new("c1", 1, 4);
    let b = Visit::new("c1", 8, 10);
    assert!(eps_reachable(&a, &b, 7).unwrap());
    assert!(!eps_reachable(&a, &b, 6).unwrap());
    assert!(eps_reachable(&a, &a, 0).unwrap());
    assert!(eps_reachable(&b, &a, 7).unwrap());
    assert!(eps_reachable(&a, &Visit::new("c2", 1, 1), 5).is_err());
}

#[test]
fn dominance_examples() {
    let big = CoMovementPattern::of(&["o1", "o2", "o3"], &["c2", "c4", "c5"]);
    let small = CoMovementPattern::of(&["o2", "o3"], &["c2", "c4", "c5"]);
    let long = CoMovementPattern::of(&["o1", "o2"], &["c1", "c2", "c4", "c5"]);
    assert!(dominates(&big, &small));
    assert!(!dominates(&small, &big));
    assert!(dominates(&big, &big));
    assert!(!dominates(&long, &big));
    assert!(!dominates(&big, &long));
    let gap = CoMovementPattern::of(&["o1"], &["c1", "c4"]);
    assert!(!dominates(&long, &gap));
}

#[test]
fn network_of_fixture() {
    let net = build_camera_network(&fixture());
    let edges: Vec<(String, String)> = net.edges().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let want = [("c1", "c2"), ("c2", "c4"), ("c3", "c2"), ("c4", "c5")];
    assert_eq!(edges, want.map(|(a, b)| (a.to_string(), b.to_string())));
    assert_eq!(net.vertex_count(), 5);
    let c2 = CameraId::from("c2");
    assert_eq!(net.in_neighbors(&c2).map(|c| c.as_str()).collect::<Vec<_>>(), ["c1", "c3"]);
}

#[test]
fn network_edge_cases() {
    let one = path("o", &[("c9", 0, 1)]);
    let net = build_camera_network([&one]);
    assert_eq!((net.vertex_count(), net.edge_count()), (1, 0));

    let a = path("a", &[("c1", 0, 1), ("c2", 5, 6)]);
    let b = path("b", &[("c1", 10, 11), ("c2", 15, 16)]);
    assert_eq!(build_camera_network([&a, &b]), build_camera_network([&a]));
}

#[test]
fn network_ignores_input_order() {
    let mut paths = fixture();
    let fwd = build_camera_network(&paths);
    paths.reverse();
    assert_eq!(build_camera_network(&paths), fwd);
}

fn group(v: &str, members: &[&str]) -> OverlapGroup {
    OverlapGroup { virtual_camera: CameraId::from(v), members: cams(members) }
}

#[test]
fn virtualize_overlapping_merges() {
    let raw = vec![(ObjectId::from("o"), vec![Visit::new("ca", 10, 20), Visit::new("cb", 15, 25)])];
    let out = virtualize_overlapping_cameras(&raw, &[group("V", &["ca", "cb"])]).unwrap();
    assert_eq!(out[0].visits(), &[Visit::new("V", 10, 25)]);
}

#[test]
fn virtualize_disjoint_stays_split() {
    let raw = vec![(ObjectId::from("o"), vec![Visit::new("ca", 10, 20), Visit::new("cb", 30, 40)])];
    let out = virtualize_overlapping_cameras(&raw, &[group("V", &["ca", "cb"])]).unwrap();
    assert_eq!(out[0].visits(), &[Visit::new("V", 10, 20), Visit::new("V", 30, 40)]);
}

#[test]
fn virtualize_without_groups_is_identity() {
    let raw = vec![(ObjectId::from("o"), vec![Visit::new("ca", 10, 20), Visit::new("cb", 30, 40)])];
    let out = virtualize_overlapping_cameras(&raw, &[]).unwrap();
    assert_eq!(out[0], path("o", &[("ca", 10, 20), ("cb", 30, 40)]));
}

#[test]
fn virtualize_rejects_unknown_camera() {
    let raw = vec![(ObjectId::from("o"), vec![Visit::new("ca", 10, 20)])];
    assert_eq!(
        virtualize_overlapping_cameras(&raw, &[group("V", &["ca", "zz"])]),
        Err(DataError::UnknownCamera("zz".into()))
    );
}
