//! Interned storage for verifier output.
//!
//! Object sets and camera paths get dense ids, so a pattern is a pair of
//! `u32`s. Paths live in a prefix trie whose nodes also carry suffix links,
//! which makes "the same path minus its first or last camera" a field read.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::instance::{Instance, RawPattern};
use crate::model::is_sorted_subset;
use crate::verify::{Block, Emit};

const ROOT: u32 = 0;

#[derive(Debug, Default)]
struct PathTrie {
    parent: Vec<u32>,
    last: Vec<u32>,
    /// The node of the path without its first camera.
    suffix: Vec<u32>,
    children: FxHashMap<(u32, u32), u32>,
}

impl PathTrie {
    fn new() -> Self {
        Self { parent: vec![ROOT], last: vec![u32::MAX], suffix: vec![ROOT], children: FxHashMap::default() }
    }

    fn child(&mut self, node: u32, camera: u32) -> u32 {
        if let Some(&c) = self.children.get(&(node, camera)) {
            return c;
        }
        let suffix = if node == ROOT { ROOT } else { self.child(self.suffix[node as usize], camera) };
        let id = self.parent.len() as u32;
        self.parent.push(node);
        self.last.push(camera);
        self.suffix.push(suffix);
        self.children.insert((node, camera), id);
        id
    }

    fn path(&self, mut node: u32) -> Vec<u32> {
        let mut out = Vec::new();
        while node != ROOT {
            out.push(self.last[node as usize]);
            node = self.parent[node as usize];
        }
        out.reverse();
        out
    }
}

/// Duplicate-free pattern collection keyed by interned ids.
#[derive(Debug)]
pub struct PatternStore {
    trie: PathTrie,
    sets: Vec<Box<[u32]>>,
    set_ids: FxHashMap<Box<[u32]>, u32>,
    seen: FxHashSet<(u32, u32)>,
    /// `(set, path)` in insertion order.
    found: Vec<(u32, u32)>,
    /// `memo[s][j]` is the path node of blocks `s..=s + j` of the current
    /// candidate.
    memo: Vec<Vec<u32>>,
    buf: Vec<u32>,
}

impl Default for PatternStore {
    fn default() -> Self {
        Self {
            trie: PathTrie::new(),
            sets: Vec::new(),
            set_ids: FxHashMap::default(),
            seen: FxHashSet::default(),
            found: Vec::new(),
            memo: Vec::new(),
            buf: Vec::new(),
        }
    }
}

impl PatternStore {
    pub fn len(&self) -> usize {
        self.found.len()
    }

    pub fn is_empty(&self) -> bool {
        self.found.is_empty()
    }

    /// Must be called before emitting the groups of a new candidate.
    pub fn begin_candidate(&mut self) {
        self.memo.iter_mut().for_each(Vec::clear);
    }

    fn set_id(&mut self) -> u32 {
        if let Some(&id) = self.set_ids.get(self.buf.as_slice()) {
            return id;
        }
        let id = self.sets.len() as u32;
        let key: Box<[u32]> = self.buf.as_slice().into();
        self.sets.push(key.clone());
        self.set_ids.insert(key, id);
        id
    }

    fn add(&mut self, set: u32, path: u32) {
        if self.seen.insert((set, path)) {
            self.found.push((set, path));
        }
    }

    pub fn insert(&mut self, p: &RawPattern) {
        self.buf.clear();
        self.buf.extend_from_slice(&p.objects);
        let set = self.set_id();
        let path = p.path.iter().fold(ROOT, |node, &c| self.trie.child(node, c));
        self.add(set, path);
    }

    fn materialize(&self, (set, path): (u32, u32)) -> RawPattern {
        RawPattern { objects: self.sets[set as usize].to_vec(), path: self.trie.path(path) }
    }

    pub fn to_raw(&self) -> Vec<RawPattern> {
        self.found.iter().map(|&f| self.materialize(f)).collect()
    }

    /// The non-dominated patterns. Exact under the same closure condition
    /// as [`crate::dominance::eliminate_dominated_hashed`]: a pattern is
    /// dominated iff a strict object superset shares its path, or its
    /// objects also occur on the path grown by one camera at either end.
    pub fn maximal(&self) -> Vec<RawPattern> {
        let mut extended: FxHashSet<(u32, u32)> = FxHashSet::default();
        extended.reserve(2 * self.found.len());
        for &(s, p) in &self.found {
            extended.insert((s, self.trie.parent[p as usize]));
            extended.insert((s, self.trie.suffix[p as usize]));
        }
        // Bucket by path node with a counting sort.
        let nodes = self.trie.parent.len();
        let mut first = vec![0u32; nodes + 1];
        for &(_, p) in &self.found {
            first[p as usize + 1] += 1;
        }
        for i in 0..nodes {
            first[i + 1] += first[i];
        }
        let mut fill = first.clone();
        let mut by_path = vec![0u32; self.found.len()];
        for &(s, p) in &self.found {
            by_path[fill[p as usize] as usize] = s;
            fill[p as usize] += 1;
        }
        let mut out = Vec::new();
        for p in 0..nodes {
            let bucket = &by_path[first[p] as usize..first[p + 1] as usize];
            for &s in bucket {
                let objs = &self.sets[s as usize];
                let wider = bucket.iter().any(|&t| {
                    let other = &self.sets[t as usize];
                    other.len() > objs.len() && is_sorted_subset(objs, other)
                });
                if !wider && !extended.contains(&(s, p as u32)) {
                    out.push(self.materialize((s, p as u32)));
                }
            }
        }
        out
    }
}

impl Emit for PatternStore {
    fn emit(&mut self, inst: &Instance, blocks: &[Block<'_>], start: usize, len: usize, records: &[u32]) {
        let tl = inst.timeline(blocks[start + len - 1].camera);
        self.buf.clear();
        self.buf.extend(records.iter().map(|&r| tl[r as usize].object));
        self.buf.sort_unstable();
        self.buf.dedup();
        let set = self.set_id();
        if self.memo.len() <= start {
            self.memo.resize_with(start + 1, Vec::new);
        }
        while self.memo[start].len() < len {
            let j = self.memo[start].len();
            let prev = if j == 0 { ROOT } else { self.memo[start][j - 1] };
            let node = self.trie.child(prev, blocks[start + j].camera);
            self.memo[start].push(node);
        }
        let path = self.memo[start][len - 1];
        self.add(set, path);
    }
}
