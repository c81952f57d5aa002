//! Random-walk trajectories on a grid of cameras, with injected convoys.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataio::Dataset;
use crate::error::DataError;
use crate::model::{CameraId, ObjectId, Tick, TravelPath, Visit};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub cameras: usize,
    pub objects: usize,
    /// Target mean number of visits per object; lengths are drawn uniformly
    /// from `[L/2, 3L/2]`.
    pub avg_path_len: usize,
    /// Fraction of objects that follow a convoy leader.
    pub group_rate: f64,
    /// Largest convoy, leader included.
    pub max_group: usize,
    /// Followers enter each shared camera at most this long after the leader.
    pub eps_scale: Tick,
    /// Start times are drawn from `[0, horizon]`.
    pub horizon: Tick,
    pub dwell_max: Tick,
    /// Travel time between consecutive cameras is drawn from
    /// `[hop_min, hop_max]`; `hop_min` must exceed `eps_scale + dwell_max`.
    pub hop_min: Tick,
    pub hop_max: Tick,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            cameras: 100,
            objects: 50,
            avg_path_len: 10,
            group_rate: 0.5,
            max_group: 5,
            eps_scale: 30,
            horizon: 50_000,
            dwell_max: 20,
            hop_min: 60,
            hop_max: 180,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<(), DataError> {
        let bad = |m: &str| Err(DataError::Config(m.into()));
        if self.cameras == 0 {
            return bad("cameras must be positive");
        }
        if self.objects == 0 {
            return bad("objects must be positive");
        }
        if self.avg_path_len == 0 {
            return bad("avg_path_len must be positive");
        }
        if !(0.0..=1.0).contains(&self.group_rate) {
            return bad("group_rate must lie in [0, 1]");
        }
        if self.max_group < 2 {
            return bad("max_group must be at least 2");
        }
        if self.hop_min <= self.eps_scale + self.dwell_max {
            return bad("hop_min must exceed eps_scale + dwell_max");
        }
        if self.hop_max < self.hop_min {
            return bad("hop_max must be at least hop_min");
        }
        Ok(())
    }
}

struct Grid {
    width: usize,
    n: usize,
}

impl Grid {
    fn neighbors(&self, c: usize) -> Vec<usize> {
        let (x, y) = (c % self.width, c / self.width);
        let mut out = Vec::with_capacity(4);
        if x > 0 {
            out.push(c - 1);
        }
        if x + 1 < self.width && c + 1 < self.n {
            out.push(c + 1);
        }
        if y > 0 {
            out.push(c - self.width);
        }
        if c + self.width < self.n {
            out.push(c + self.width);
        }
        out
    }

    /// Random walk of `len - 1` steps from `start`, avoiding immediate
    /// backtracking when another move exists. Excludes `start`.
    fn walk(&self, rng: &mut ChaCha8Rng, start: usize, avoid: Option<usize>, len: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(len);
        let (mut cur, mut prev) = (start, avoid);
        for _ in 0..len {
            let nb = self.neighbors(cur);
            let choices: Vec<usize> = nb.iter().copied().filter(|&c| Some(c) != prev).collect();
            let next = if !choices.is_empty() {
                choices[rng.gen_range(0..choices.len())]
            } else if !nb.is_empty() {
                nb[rng.gen_range(0..nb.len())]
            } else {
                cur
            };
            out.push(next);
            prev = Some(cur);
            cur = next;
        }
        out
    }
}

struct Gen<'a> {
    cfg: &'a SyntheticConfig,
    rng: ChaCha8Rng,
    grid: Grid,
}

type Raw = Vec<(usize, Tick, Tick)>;

impl Gen<'_> {
    fn length(&mut self) -> usize {
        let l = self.cfg.avg_path_len;
        self.rng.gen_range(l.div_ceil(2).max(1)..=(3 * l / 2).max(1))
    }

    fn dwell(&mut self) -> Tick {
        self.rng.gen_range(0..=self.cfg.dwell_max)
    }

    fn hop(&mut self) -> Tick {
        self.rng.gen_range(self.cfg.hop_min..=self.cfg.hop_max)
    }

    /// Appends `count` visits continuing a walk from the last visit of `raw`.
    fn extend_forward(&mut self, raw: &mut Raw, count: usize) {
        let &(last_cam, _, last_exit) = raw.last().expect("non-empty");
        let avoid = raw.len().checked_sub(2).map(|i| raw[i].0);
        let cams = self.grid.walk(&mut self.rng, last_cam, avoid, count);
        let mut t = last_exit;
        for c in cams {
            let en = t + self.hop();
            let ex = en + self.dwell();
            raw.push((c, en, ex));
            t = ex;
        }
    }

    fn solo(&mut self) -> Raw {
        let len = self.length();
        let start = self.rng.gen_range(0..self.grid.n);
        let en = self.rng.gen_range(0..=self.cfg.horizon);
        let ex = en + self.dwell();
        let mut raw = vec![(start, en, ex)];
        self.extend_forward(&mut raw, len - 1);
        raw
    }

    fn follower(&mut self, leader: &Raw) -> Raw {
        let target = self.length();
        let lo = (leader.len() * 3).div_ceil(5).max(1);
        let shared = self.rng.gen_range(lo..=leader.len()).min(target);
        let offset = self.rng.gen_range(0..=leader.len() - shared);
        let mut core: Raw = leader[offset..offset + shared]
            .iter()
            .map(|&(c, en, _)| {
                let e = en + self.rng.gen_range(0..=self.cfg.eps_scale);
                (c, e, e + self.dwell())
            })
            .collect();
        let extra = target - shared;
        let before = self.rng.gen_range(0..=extra);
        // Walk backwards from the shared range; grid moves are symmetric.
        let avoid = core.get(1).map(|v| v.0);
        let cams = self.grid.walk(&mut self.rng, core[0].0, avoid, before);
        let mut prefix: Raw = Vec::new();
        let mut next_en = core[0].1;
        for c in cams {
            let gap = self.hop();
            let d = self.dwell();
            let Some(ex) = next_en.checked_sub(gap) else { break };
            let Some(en) = ex.checked_sub(d) else { break };
            prefix.push((c, en, ex));
            next_en = en;
        }
        prefix.reverse();
        prefix.append(&mut core);
        let after = extra - before;
        self.extend_forward(&mut prefix, after);
        prefix
    }
}

/// Generates a dataset; identical `(config, seed)` pairs give identical
/// output.
pub fn gen_synthetic(cfg: &SyntheticConfig, seed: u64) -> Result<Dataset, DataError> {
    cfg.validate()?;
    let width = (cfg.cameras as f64).sqrt().ceil() as usize;
    let mut g = Gen { cfg, rng: ChaCha8Rng::seed_from_u64(seed), grid: Grid { width, n: cfg.cameras } };
    let mut followers_left = (cfg.group_rate * cfg.objects as f64).round() as usize;
    let mut raws: Vec<Raw> = Vec::with_capacity(cfg.objects);
    while raws.len() < cfg.objects {
        let room = cfg.objects - raws.len();
        let leader = g.solo();
        if followers_left > 0 && room >= 2 {
            let size = g.rng.gen_range(1..cfg.max_group).min(followers_left).min(room - 1);
            let members: Vec<Raw> = (0..size).map(|_| g.follower(&leader)).collect();
            followers_left -= size;
            raws.push(leader);
            raws.extend(members);
        } else {
            raws.push(leader);
        }
    }
    let cw = digits(cfg.cameras - 1);
    let ow = digits(cfg.objects - 1);
    let paths = raws
        .into_iter()
        .enumerate()
        .map(|(i, raw)| {
            let visits = raw
                .into_iter()
                .map(|(c, en, ex)| Visit {
                    camera: CameraId::new(format!("c{c:0cw$}")).expect("non-empty"),
                    entrance: en,
                    exit: ex,
                })
                .collect();
            TravelPath::new(ObjectId::new(format!("o{i:0ow$}")).expect("non-empty"), visits)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Dataset::new(paths)
}

/// Small dense instance for cross-checking miners against the brute-force
/// oracle: at most `max_objects` objects over at most `max_cameras` cameras,
/// paths of at most `max_len` visits. About half of the objects copy a
/// fragment of an earlier object's route with slightly shifted times, so
/// shared sub-paths, repeated cameras and near ties are common.
pub fn gen_small_random(seed: u64, max_objects: usize, max_cameras: usize, max_len: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_obj = rng.gen_range(1..=max_objects.max(1));
    let n_cam = rng.gen_range(1..=max_cameras.max(1));
    let max_len = max_len.max(1);
    let mut raws: Vec<Vec<(usize, Tick, Tick)>> = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        let copy = !raws.is_empty() && rng.gen_bool(0.5);
        let mut raw: Vec<(usize, Tick, Tick)> = Vec::new();
        if copy {
            let src = &raws[rng.gen_range(0..raws.len())];
            let a = rng.gen_range(0..src.len());
            let b = rng.gen_range(a..src.len());
            let shift = rng.gen_range(0..=6u64);
            let mut t = 0;
            for &(c, en, _) in &src[a..=b] {
                let e = (en + shift).max(t);
                let x = e + rng.gen_range(0..=2);
                raw.push((c, e, x));
                t = x + 1;
            }
        } else {
            let len = rng.gen_range(1..=max_len);
            let mut t = rng.gen_range(0..=20u64);
            for _ in 0..len {
                let e = t;
                let x = e + rng.gen_range(0..=2);
                raw.push((rng.gen_range(0..n_cam), e, x));
                t = x + rng.gen_range(1..=8);
            }
        }
        raws.push(raw);
    }
    let paths = raws
        .into_iter()
        .enumerate()
        .map(|(i, raw)| {
            let visits = raw
                .into_iter()
                .map(|(c, e, x)| Visit { camera: CameraId::new(format!("c{c}")).expect("non-empty"), entrance: e, exit: x })
                .collect();
            TravelPath::new(ObjectId::new(format!("o{i:02}")).expect("non-empty"), visits).expect("valid by construction")
        })
        .collect();
    Dataset::new(paths).expect("distinct ids")
}

fn digits(mut n: usize) -> usize {
    let mut d = 1;
    while n >= 10 {
        n /= 10;
        d += 1;
    }
    d
}
