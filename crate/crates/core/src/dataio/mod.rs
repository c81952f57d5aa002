//! File formats and dataset generators.
//!
//! Dataset CSV: header `object_id,camera_id,entrance,exit`, one visit per
//! row, rows sorted by object then entrance. Pattern files are JSON Lines
//! `{"objects":[..],"path":[..],"span":[s,e]}` sorted by path then objects.

pub mod gps;
pub mod reduction;
pub mod synthetic;

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::DataError;
use crate::instance::sort_canonical;
use crate::model::{CameraId, CoMovementPattern, ObjectId, Tick, TravelPath, Visit};

pub use gps::{convert_gps, read_cameras, read_trajectories, CameraSpec, GpsSample};
pub use reduction::{gen_clique_reduction, ReductionInstance};
pub use synthetic::{gen_small_random, gen_synthetic, SyntheticConfig};

pub const DATASET_HEADER: [&str; 4] = ["object_id", "camera_id", "entrance", "exit"];

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DatasetMeta {
    pub num_objects: usize,
    pub num_cameras: usize,
    pub num_visits: usize,
    pub avg_path_len: f64,
}

/// Validated travel paths sorted by object id.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    paths: Vec<TravelPath>,
    meta: DatasetMeta,
}

impl Dataset {
    pub fn new(mut paths: Vec<TravelPath>) -> Result<Self, DataError> {
        paths.sort_by(|a, b| a.object().cmp(b.object()));
        for w in paths.windows(2) {
            if w[0].object() == w[1].object() {
                return Err(DataError::DuplicateObject(w[0].object().to_string()));
            }
        }
        let cams: BTreeSet<&CameraId> = paths.iter().flat_map(|p| p.cameras()).collect();
        let num_visits: usize = paths.iter().map(TravelPath::len).sum();
        let meta = DatasetMeta {
            num_objects: paths.len(),
            num_cameras: cams.len(),
            num_visits,
            avg_path_len: if paths.is_empty() { 0.0 } else { num_visits as f64 / paths.len() as f64 },
        };
        Ok(Self { paths, meta })
    }

    pub fn paths(&self) -> &[TravelPath] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<TravelPath> {
        self.paths
    }

    pub fn meta(&self) -> &DatasetMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    object_id: String,
    camera_id: String,
    entrance: Tick,
    exit: Tick,
}

fn csv_err(e: &csv::Error) -> DataError {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    DataError::Parse { line, message: e.to_string() }
}

/// Reads a dataset CSV. Rows may come in any order; each object's visits are
/// validated as a travel path.
pub fn read_dataset<R: Read>(reader: R) -> Result<Dataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_err(&e))?.clone();
    if headers.iter().collect::<Vec<_>>() != DATASET_HEADER {
        return Err(DataError::Parse {
            line: 1,
            message: format!("expected header {}, found {}", DATASET_HEADER.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut by_object: BTreeMap<ObjectId, Vec<Visit>> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(&e))?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let row: Row = rec.deserialize(Some(&headers)).map_err(|e| DataError::Parse { line, message: e.to_string() })?;
        let bad = |message: String| DataError::Parse { line, message };
        let object = ObjectId::new(row.object_id).map_err(|_| bad("empty object_id".into()))?;
        let camera = CameraId::new(row.camera_id).map_err(|_| bad("empty camera_id".into()))?;
        if row.exit < row.entrance {
            return Err(bad(format!("exit {} is before entrance {}", row.exit, row.entrance)));
        }
        by_object.entry(object).or_default().push(Visit { camera, entrance: row.entrance, exit: row.exit });
    }
    let paths = by_object
        .into_iter()
        .map(|(object, visits)| {
            TravelPath::new(object.clone(), visits)
                .map_err(|e| DataError::InObject { object: object.to_string(), source: Box::new(e) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Dataset::new(paths)
}

pub fn write_dataset<W: Write>(dataset: &Dataset, writer: W) -> Result<(), DataError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    let io = |e: csv::Error| DataError::Io(e.to_string());
    w.write_record(DATASET_HEADER).map_err(io)?;
    for p in dataset.paths() {
        for v in p.visits() {
            w.write_record([p.object().as_str(), v.camera.as_str(), &v.entrance.to_string(), &v.exit.to_string()])
                .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_dataset_file(path: impl AsRef<std::path::Path>) -> Result<Dataset, DataError> {
    read_dataset(std::fs::File::open(path)?)
}

pub fn write_dataset_file(dataset: &Dataset, path: impl AsRef<std::path::Path>) -> Result<(), DataError> {
    write_dataset(dataset, std::io::BufWriter::new(std::fs::File::create(path)?))
}

#[derive(Debug, Serialize, Deserialize)]
struct PatternLine {
    objects: Vec<ObjectId>,
    path: Vec<CameraId>,
    #[serde(default)]
    span: Option<[Tick; 2]>,
}

/// Writes patterns as canonical JSON Lines.
pub fn write_patterns<W: Write>(patterns: &[CoMovementPattern], mut writer: W) -> Result<(), DataError> {
    let mut sorted = patterns.to_vec();
    sort_canonical(&mut sorted);
    for p in sorted {
        let line = PatternLine { objects: p.objects, path: p.path, span: p.span.map(|(s, e)| [s, e]) };
        let s = serde_json::to_string(&line).map_err(|e| DataError::Io(e.to_string()))?;
        writer.write_all(s.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a JSON Lines pattern file. Blank lines are skipped.
pub fn read_patterns<R: BufRead>(reader: R) -> Result<Vec<CoMovementPattern>, DataError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let pl: PatternLine =
            serde_json::from_str(&line).map_err(|e| DataError::Parse { line: i + 1, message: e.to_string() })?;
        if let Some([s, e]) = pl.span {
            if e < s {
                return Err(DataError::Parse { line: i + 1, message: format!("span end {e} before start {s}") });
            }
        }
        let mut p = CoMovementPattern::new(pl.objects, pl.path);
        p.span = pl.span.map(|[s, e]| (s, e));
        out.push(p);
    }
    Ok(out)
}

pub fn read_patterns_file(path: impl AsRef<std::path::Path>) -> Result<Vec<CoMovementPattern>, DataError> {
    read_patterns(std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn write_patterns_file(patterns: &[CoMovementPattern], path: impl AsRef<std::path::Path>) -> Result<(), DataError> {
    write_patterns(patterns, std::io::BufWriter::new(std::fs::File::create(path)?))
}
