//! Conversion of GPS tracks into camera travel paths.
//!
//! Tracks are interpolated linearly between samples. While the position lies
//! inside one or more capture disks it is attributed to the nearest camera
//! centre (ties broken by camera id), and cameras sharing a group id report
//! under the group id. Continuous attribution intervals become visits with
//! entrance `ceil(start)` and exit `floor(end)`.

use std::collections::BTreeMap;
use std::io::Read;

use serde::Deserialize;

use crate::dataio::Dataset;
use crate::error::DataError;
use crate::model::{CameraId, ObjectId, Tick, TravelPath, Visit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpsSample {
    pub ts: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CameraSpec {
    pub id: CameraId,
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    pub group: Option<CameraId>,
}

impl CameraSpec {
    fn label(&self) -> &CameraId {
        self.group.as_ref().unwrap_or(&self.id)
    }
}

#[derive(Debug, Deserialize)]
struct TrajRow {
    object_id: String,
    ts: f64,
    x: f64,
    y: f64,
}

#[derive(Debug, Deserialize)]
struct CamRow {
    camera_id: String,
    x: f64,
    y: f64,
    radius: f64,
    #[serde(default)]
    group_id: Option<String>,
}

fn rows<T: for<'de> Deserialize<'de>, R: Read>(reader: R) -> Result<Vec<(usize, T)>, DataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.deserialize::<T>() {
        match rec {
            Ok(r) => out.push((out.len() + 2, r)),
            Err(e) => {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                return Err(DataError::Parse { line, message: e.to_string() });
            }
        }
    }
    Ok(out)
}

/// Reads `object_id,ts,x,y` rows grouped per object, keeping sample order.
pub fn read_trajectories<R: Read>(reader: R) -> Result<BTreeMap<ObjectId, Vec<GpsSample>>, DataError> {
    let mut out: BTreeMap<ObjectId, Vec<GpsSample>> = BTreeMap::new();
    for (line, r) in rows::<TrajRow, _>(reader)? {
        let id = ObjectId::new(r.object_id).map_err(|_| DataError::Parse { line, message: "empty object_id".into() })?;
        if !(r.ts.is_finite() && r.x.is_finite() && r.y.is_finite()) {
            return Err(DataError::Parse { line, message: "non-finite value".into() });
        }
        out.entry(id).or_default().push(GpsSample { ts: r.ts, x: r.x, y: r.y });
    }
    Ok(out)
}

/// Reads `camera_id,x,y,radius[,group_id]` rows. An empty group id means no
/// group.
pub fn read_cameras<R: Read>(reader: R) -> Result<Vec<CameraSpec>, DataError> {
    rows::<CamRow, _>(reader)?
        .into_iter()
        .map(|(line, r)| {
            let id = CameraId::new(r.camera_id).map_err(|_| DataError::Parse { line, message: "empty camera_id".into() })?;
            if !(r.radius.is_finite() && r.radius >= 0.0) {
                return Err(DataError::Parse { line, message: format!("invalid radius {}", r.radius) });
            }
            let group = r.group_id.filter(|g| !g.is_empty()).map(CameraId::from);
            Ok(CameraSpec { id, x: r.x, y: r.y, radius: r.radius, group })
        })
        .collect()
}

/// Parameter interval `[s0, s1] ⊆ [0, 1]` during which `p + s·d` lies in the
/// disk, if any.
fn disk_interval(p: (f64, f64), d: (f64, f64), cam: &CameraSpec, r: f64) -> Option<(f64, f64)> {
    let (fx, fy) = (p.0 - cam.x, p.1 - cam.y);
    let a = d.0 * d.0 + d.1 * d.1;
    let c = fx * fx + fy * fy - r * r;
    if a == 0.0 {
        return (c <= 0.0).then_some((0.0, 1.0));
    }
    let b = 2.0 * (d.0 * fx + d.1 * fy);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let (s0, s1) = ((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a));
    let (s0, s1) = (s0.max(0.0), s1.min(1.0));
    (s0 <= s1).then_some((s0, s1))
}

fn dist2(x: f64, y: f64, cam: &CameraSpec) -> f64 {
    (x - cam.x).powi(2) + (y - cam.y).powi(2)
}

/// Label of the camera owning point `(x, y)` among `covering`.
fn owner<'a>(x: f64, y: f64, covering: &[&'a CameraSpec]) -> Option<&'a CameraSpec> {
    covering.iter().copied().min_by(|a, b| {
        dist2(x, y, a).partial_cmp(&dist2(x, y, b)).unwrap_or(std::cmp::Ordering::Equal).then_with(|| a.id.cmp(&b.id))
    })
}

/// Continuous-time attribution intervals `(label, start, end)` of one track.
fn attribute(samples: &[GpsSample], cameras: &[CameraSpec], radius: Option<f64>) -> Vec<(CameraId, f64, f64)> {
    let r_of = |c: &CameraSpec| radius.unwrap_or(c.radius);
    let mut out: Vec<(CameraId, f64, f64)> = Vec::new();
    let mut push = |label: &CameraId, a: f64, b: f64| {
        if let Some(last) = out.last_mut() {
            if last.0 == label && a - last.2 <= 1e-9 {
                last.2 = last.2.max(b);
                return;
            }
        }
        out.push((label.clone(), a, b));
    };
    if samples.len() == 1 {
        let s = samples[0];
        let covering: Vec<&CameraSpec> = cameras.iter().filter(|c| dist2(s.x, s.y, c) <= r_of(c) * r_of(c)).collect();
        if let Some(c) = owner(s.x, s.y, &covering) {
            push(c.label(), s.ts, s.ts);
        }
        return out;
    }
    for w in samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        let p = (a.x, a.y);
        let d = (b.x - a.x, b.y - a.y);
        let at = |s: f64| (a.x + s * d.0, a.y + s * d.1);
        let time = |s: f64| a.ts + s * (b.ts - a.ts);
        let hits: Vec<(&CameraSpec, (f64, f64))> =
            cameras.iter().filter_map(|c| disk_interval(p, d, c, r_of(c)).map(|iv| (c, iv))).collect();
        if hits.is_empty() {
            continue;
        }
        let mut cuts: Vec<f64> = vec![0.0, 1.0];
        for (_, (s0, s1)) in &hits {
            cuts.push(*s0);
            cuts.push(*s1);
        }
        // Where the nearest centre can change between two cameras.
        for (i, (c1, _)) in hits.iter().enumerate() {
            for (c2, _) in &hits[i + 1..] {
                let denom = 2.0 * (d.0 * (c2.x - c1.x) + d.1 * (c2.y - c1.y));
                if denom != 0.0 {
                    let s = -(dist2(p.0, p.1, c1) - dist2(p.0, p.1, c2)) / denom;
                    if (0.0..=1.0).contains(&s) {
                        cuts.push(s);
                    }
                }
            }
        }
        cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        cuts.dedup();
        for iv in cuts.windows(2) {
            let (s0, s1) = (iv[0], iv[1]);
            let mid = 0.5 * (s0 + s1);
            let (mx, my) = at(mid);
            let covering: Vec<&CameraSpec> =
                hits.iter().filter(|(_, (h0, h1))| *h0 <= mid && mid <= *h1).map(|(c, _)| *c).collect();
            if let Some(c) = owner(mx, my, &covering) {
                push(c.label(), time(s0), time(s1));
            }
        }
    }
    out
}

/// Rounds values within float noise of an integer onto it.
fn snap(v: f64) -> f64 {
    if (v - v.round()).abs() < 1e-6 {
        v.round()
    } else {
        v
    }
}

/// Converts GPS tracks into a dataset. `radius` overrides every camera's own
/// radius when given. Tracks whose timestamps decrease are rejected.
pub fn convert_gps(
    tracks: &BTreeMap<ObjectId, Vec<GpsSample>>,
    cameras: &[CameraSpec],
    radius: Option<f64>,
) -> Result<Dataset, DataError> {
    let mut paths = Vec::new();
    for (object, samples) in tracks {
        if let Some(i) = samples.windows(2).position(|w| w[1].ts < w[0].ts) {
            return Err(DataError::UnorderedSamples { object: object.to_string(), index: i + 1 });
        }
        let mut visits: Vec<Visit> = Vec::new();
        for (label, a, b) in attribute(samples, cameras, radius) {
            let (en, ex) = (snap(a).ceil(), snap(b).floor());
            if en > ex || en < 0.0 {
                continue;
            }
            let (en, ex) = (en as Tick, ex as Tick);
            let mut merged = false;
            // A boundary tick shared with the previous visit goes to the later one.
            while let Some(last) = visits.last_mut() {
                if en > last.exit {
                    break;
                }
                if last.camera == label {
                    last.exit = last.exit.max(ex);
                    merged = true;
                    break;
                }
                if en > last.entrance {
                    last.exit = en - 1;
                    break;
                }
                visits.pop();
            }
            if merged {
                continue;
            }
            visits.push(Visit { camera: label, entrance: en, exit: ex });
        }
        if visits.is_empty() {
            continue;
        }
        let path = TravelPath::new(object.clone(), visits)
            .map_err(|e| DataError::InObject { object: object.to_string(), source: Box::new(e) })?;
        paths.push(path);
    }
    Dataset::new(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cam(id: &str, x: f64, y: f64, r: f64, g: Option<&str>) -> CameraSpec {
        CameraSpec { id: id.into(), x, y, radius: r, group: g.map(CameraId::from) }
    }

    fn track(pts: &[(f64, f64, f64)]) -> BTreeMap<ObjectId, Vec<GpsSample>> {
        let mut m = BTreeMap::new();
        m.insert(ObjectId::from("o1"), pts.iter().map(|&(ts, x, y)| GpsSample { ts, x, y }).collect());
        m
    }

    #[test]
    fn straight_line_through_two_disks() {
        // Unit speed along x; disks of radius 5 centred at x=20 and x=60.
        let cams = [cam("ca", 20.0, 0.0, 5.0, None), cam("cb", 60.0, 3.0, 5.0, None)];
        let ds = convert_gps(&track(&[(0.0, 0.0, 0.0), (100.0, 100.0, 0.0)]), &cams, None).unwrap();
        let v = ds.paths()[0].visits();
        assert_eq!(v.len(), 2);
        assert_eq!((v[0].entrance, v[0].exit), (15, 25));
        // |x - 60| <= 4 since the chord half-length is sqrt(25 - 9).
        assert_eq!((v[1].entrance, v[1].exit), (56, 64));
    }

    #[test]
    fn never_inside_is_absent() {
        let cams = [cam("ca", 0.0, 50.0, 5.0, None)];
        let ds = convert_gps(&track(&[(0.0, 0.0, 0.0), (10.0, 10.0, 0.0)]), &cams, None).unwrap();
        assert!(ds.is_empty());
    }

    #[test]
    fn overlapping_group_members_merge() {
        let cams = [cam("ca", 20.0, 0.0, 6.0, Some("V")), cam("cb", 28.0, 0.0, 6.0, Some("V"))];
        let ds = convert_gps(&track(&[(0.0, 0.0, 0.0), (100.0, 100.0, 0.0)]), &cams, None).unwrap();
        let v = ds.paths()[0].visits();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].camera.as_str(), v[0].entrance, v[0].exit), ("V", 14, 34));
    }

    #[test]
    fn decreasing_timestamps_rejected() {
        let cams = [cam("ca", 0.0, 0.0, 5.0, None)];
        let err = convert_gps(&track(&[(5.0, 0.0, 0.0), (4.0, 1.0, 0.0)]), &cams, None).unwrap_err();
        assert!(matches!(err, DataError::UnorderedSamples { index: 1, .. }));
    }

    #[test]
    fn nearest_centre_splits_overlap() {
        let cams = [cam("ca", 20.0, 0.0, 6.0, None), cam("cb", 28.0, 0.0, 6.0, None)];
        let ds = convert_gps(&track(&[(0.0, 0.0, 0.0), (100.0, 100.0, 0.0)]), &cams, None).unwrap();
        let v = ds.paths()[0].visits();
        // Bisector at x=24: ca covers [14,24], cb (24,34].
        assert_eq!(v.len(), 2);
        assert_eq!((v[0].entrance, v[0].exit), (14, 23));
        assert_eq!((v[1].entrance, v[1].exit), (24, 34));
    }
}
