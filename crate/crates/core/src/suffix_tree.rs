//! Generalized suffix tree over token sequences (Ukkonen's construction),
//! annotated with the number of distinct objects below each node.
//!
//! Every segment is terminated by its own sentinel `token_space + segment`,
//! so no suffix is a proper prefix of another and every suffix ends at a leaf.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::clustering::TokenSequence;

const LEAF_END: u32 = u32::MAX;
const NONE: u32 = u32::MAX;
const ROOT: u32 = 0;

#[derive(Debug, Clone, Copy)]
struct Node {
    start: u32,
    end: u32,
    link: u32,
}

/// A frequent token sequence reported by [`TcsTree::frequent_sequences`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateSequence {
    pub tokens: Vec<u32>,
    /// Distinct objects whose encoding contains `tokens`.
    pub support: u32,
}

#[derive(Debug, Clone)]
pub struct TcsTree {
    text: Vec<u32>,
    token_space: u32,
    /// Start offset of each segment in `text`; its sentinel sits at
    /// `seg_end[i]`.
    seg_start: Vec<u32>,
    seg_end: Vec<u32>,
    seg_owner: Vec<u32>,
    nodes: Vec<Node>,
    child_off: Vec<u32>,
    child_list: Vec<u32>,
    /// Token depth of the node label, sentinels excluded.
    depth: Vec<u32>,
    support: Vec<u32>,
    /// For leaves, whether the edge starts with a real token.
    real_leaf: Vec<bool>,
}

impl TcsTree {
    /// Builds the tree. All tokens must be `< token_space`.
    pub fn build(sequences: &[TokenSequence], token_space: u32) -> Self {
        let mut text = Vec::new();
        let mut seg_start = Vec::new();
        let mut seg_end = Vec::new();
        let mut seg_owner = Vec::new();
        for seq in sequences {
            for seg in &seq.segments {
                debug_assert!(seg.iter().all(|&t| t < token_space));
                seg_start.push(text.len() as u32);
                text.extend_from_slice(seg);
                seg_end.push(text.len() as u32);
                text.push(token_space + seg_owner.len() as u32);
                seg_owner.push(seq.object);
            }
        }
        assert!(
            (token_space as u64) + (seg_owner.len() as u64) < u32::MAX as u64,
            "token space exhausted"
        );
        let (nodes, children) = ukkonen(&text);
        let mut t = TcsTree {
            text,
            token_space,
            seg_start,
            seg_end,
            seg_owner,
            nodes,
            child_off: Vec::new(),
            child_list: Vec::new(),
            depth: Vec::new(),
            support: Vec::new(),
            real_leaf: Vec::new(),
        };
        t.finish(children);
        t
    }

    fn finish(&mut self, children: FxHashMap<u64, u32>) {
        let n = self.nodes.len();
        // Children grouped by parent with a counting sort, then each group
        // ordered by first symbol.
        let mut off = vec![0u32; n + 1];
        for &key in children.keys() {
            off[(key >> 32) as usize + 1] += 1;
        }
        for i in 0..n {
            off[i + 1] += off[i];
        }
        let mut fill = off.clone();
        let mut list = vec![(0u32, 0u32); children.len()];
        for (key, c) in children {
            let p = (key >> 32) as usize;
            list[fill[p] as usize] = (key as u32, c);
            fill[p] += 1;
        }
        drop(fill);
        for v in 0..n {
            list[off[v] as usize..off[v + 1] as usize].sort_unstable();
        }
        self.child_list = list.into_iter().map(|(_, c)| c).collect();
        self.child_off = off;

        let text_len = self.text.len() as u32;
        for node in &mut self.nodes {
            if node.end == LEAF_END {
                node.end = text_len;
            }
        }
        // Sentinel position and owner of the segment around each position.
        let mut pos_info = vec![(0u32, 0u32); self.text.len()];
        for ((&s, &e), &obj) in self.seg_start.iter().zip(&self.seg_end).zip(&self.seg_owner) {
            pos_info[s as usize..=e as usize].fill((e, obj));
        }

        // Iterative DFS computing distinct object counts. Duplicates are
        // cancelled at the LCA of consecutive same-object leaves (Tarjan's
        // offline LCA). Nodes are visited in no useful memory order, so the
        // loop touches as few arrays as it can; depths are filled in after.
        let mut st: Vec<DfsState> = (0..n as u32)
            .zip(&self.nodes)
            .map(|(v, node)| DfsState { full_depth: 0, edge: node.end - node.start, leaf: v != ROOT && node.end == text_len, uf: v, ancestor: v, count: 0 })
            .collect();
        let objects = self.seg_owner.iter().max().map_or(0, |&o| o as usize + 1);
        let mut last_leaf: Vec<u32> = vec![NONE; objects];
        let mut stack: Vec<(u32, u32)> = vec![(ROOT, 0)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let lo = self.child_off[v as usize];
            let hi = self.child_off[v as usize + 1];
            if lo + *next < hi {
                let c = self.child_list[(lo + *next) as usize];
                *next += 1;
                let parent_depth = st[v as usize].full_depth;
                let cs = &mut st[c as usize];
                cs.full_depth = parent_depth + cs.edge;
                if cs.leaf {
                    let suffix = text_len - cs.full_depth;
                    let (sentinel, obj) = pos_info[suffix as usize];
                    if suffix < sentinel {
                        st[c as usize].count = 1;
                        st[v as usize].count += 1;
                        let prev = std::mem::replace(&mut last_leaf[obj as usize], c);
                        if prev != NONE {
                            let r = find(&mut st, prev);
                            let lca = st[r as usize].ancestor;
                            st[lca as usize].count -= 1;
                        }
                    }
                    // A leaf is finished at once; v is still open, so it is
                    // its own set representative and ancestor.
                    st[c as usize].uf = v;
                } else {
                    stack.push((c, 0));
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    st[v as usize].uf = p;
                    st[p as usize].count += st[v as usize].count;
                }
            }
        }
        self.depth = vec![0; n];
        self.real_leaf = vec![false; n];
        for (c, (node, s)) in self.nodes.iter().zip(&st).enumerate() {
            if s.leaf {
                let suffix = text_len - s.full_depth;
                let sentinel = pos_info[suffix as usize].0;
                self.depth[c] = sentinel - suffix;
                self.real_leaf[c] = node.start < sentinel;
            } else {
                self.depth[c] = s.full_depth;
            }
        }
        self.support = st.into_iter().map(|s| s.count.max(0) as u32).collect();
    }

    fn is_leaf(&self, v: u32) -> bool {
        self.child_off[v as usize] == self.child_off[v as usize + 1]
    }

    fn children(&self, v: u32) -> &[u32] {
        &self.child_list[self.child_off[v as usize] as usize..self.child_off[v as usize + 1] as usize]
    }

    fn first_symbol(&self, v: u32) -> u32 {
        self.text[self.nodes[v as usize].start as usize]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Leaves whose label holds at least one real token.
    pub fn leaf_count(&self) -> usize {
        (0..self.nodes.len() as u32).filter(|&v| v != ROOT && self.is_leaf(v) && self.depth[v as usize] > 0).count()
    }

    pub fn token_space(&self) -> u32 {
        self.token_space
    }

    /// Number of distinct objects whose encoding contains `pattern`; 0 when
    /// absent.
    pub fn support_of(&self, pattern: &[u32]) -> u32 {
        if pattern.is_empty() {
            return self.support[ROOT as usize];
        }
        let mut v = ROOT;
        let mut i = 0usize;
        while i < pattern.len() {
            let Some(&c) = self.children(v).iter().find(|&&c| self.first_symbol(c) == pattern[i]) else {
                return 0;
            };
            let node = self.nodes[c as usize];
            let mut j = node.start;
            while j < node.end && i < pattern.len() {
                if self.text[j as usize] != pattern[i] {
                    return 0;
                }
                i += 1;
                j += 1;
            }
            v = c;
        }
        self.support[v as usize]
    }

    pub fn contains(&self, pattern: &[u32]) -> bool {
        self.support_of(pattern) > 0 || pattern.is_empty()
    }

    /// Maximal token sequences with support at least `m` and length at least
    /// `k`, in lexicographic order. Every frequent sequence of length `>= k`
    /// occurs inside some returned sequence, and no returned sequence occurs
    /// inside another.
    pub fn frequent_sequences(&self, m: usize, k: usize) -> Vec<CandidateSequence> {
        let m = m as u32;
        let mut out = Vec::new();
        let mut stack = vec![ROOT];
        while let Some(v) = stack.pop() {
            if self.support[v as usize] < m {
                continue;
            }
            let mut extends = false;
            for &c in self.children(v).iter().rev() {
                if self.first_symbol(c) < self.token_space && self.support[c as usize] >= m {
                    extends = true;
                    stack.push(c);
                }
            }
            if extends || v == ROOT || (self.depth[v as usize] as usize) < k {
                continue;
            }
            if self.is_leaf(v) && !self.real_leaf[v as usize] {
                continue;
            }
            out.push(CandidateSequence { tokens: self.label(v), support: self.support[v as usize] });
        }
        // A right-maximal sequence that is not left-maximal is a proper
        // suffix of another candidate, whose verification already covers it.
        let covered: FxHashSet<&[u32]> = out.iter().flat_map(|c| (1..c.tokens.len()).map(|i| &c.tokens[i..])).collect();
        let mut out: Vec<CandidateSequence> =
            out.iter().filter(|c| !covered.contains(c.tokens.as_slice())).cloned().collect();
        out.sort_unstable();
        out
    }

    fn label(&self, v: u32) -> Vec<u32> {
        let node = self.nodes[v as usize];
        let d = self.depth[v as usize];
        if self.is_leaf(v) {
            // The label runs from the suffix start up to the sentinel.
            let seg_end = {
                let mut e = node.start;
                while self.text[e as usize] < self.token_space {
                    e += 1;
                }
                e
            };
            self.text[(seg_end - d) as usize..seg_end as usize].to_vec()
        } else {
            self.text[(node.end - d) as usize..node.end as usize].to_vec()
        }
    }
}

#[derive(Clone, Copy)]
struct DfsState {
    full_depth: u32,
    edge: u32,
    leaf: bool,
    uf: u32,
    ancestor: u32,
    count: i32,
}

fn find(st: &mut [DfsState], mut x: u32) -> u32 {
    let mut root = x;
    while st[root as usize].uf != root {
        root = st[root as usize].uf;
    }
    while st[x as usize].uf != root {
        let nx = st[x as usize].uf;
        st[x as usize].uf = root;
        x = nx;
    }
    root
}

#[inline]
fn key(node: u32, sym: u32) -> u64 {
    ((node as u64) << 32) | sym as u64
}

fn ukkonen(text: &[u32]) -> (Vec<Node>, FxHashMap<u64, u32>) {
    let mut nodes = vec![Node { start: 0, end: 0, link: NONE }];
    let mut children: FxHashMap<u64, u32> = FxHashMap::default();
    children.reserve(text.len());
    let (mut an, mut ae, mut al) = (ROOT, 0usize, 0u32);
    let mut remainder = 0u32;
    for pos in 0..text.len() {
        remainder += 1;
        let mut last_new = NONE;
        while remainder > 0 {
            if al == 0 {
                ae = pos;
            }
            let c = text[ae];
            match children.get(&key(an, c)).copied() {
                None => {
                    nodes.push(Node { start: pos as u32, end: LEAF_END, link: NONE });
                    children.insert(key(an, c), nodes.len() as u32 - 1);
                    if last_new != NONE {
                        nodes[last_new as usize].link = an;
                        last_new = NONE;
                    }
                }
                Some(next) => {
                    let nd = nodes[next as usize];
                    let end = if nd.end == LEAF_END { pos as u32 + 1 } else { nd.end };
                    let el = end - nd.start;
                    if al >= el {
                        ae += el as usize;
                        al -= el;
                        an = next;
                        continue;
                    }
                    if text[(nd.start + al) as usize] == text[pos] {
                        if last_new != NONE && an != ROOT {
                            nodes[last_new as usize].link = an;
                        }
                        al += 1;
                        break;
                    }
                    let split = nodes.len() as u32;
                    nodes.push(Node { start: nd.start, end: nd.start + al, link: NONE });
                    children.insert(key(an, c), split);
                    nodes.push(Node { start: pos as u32, end: LEAF_END, link: NONE });
                    children.insert(key(split, text[pos]), split + 1);
                    nodes[next as usize].start += al;
                    children.insert(key(split, text[(nd.start + al) as usize]), next);
                    if last_new != NONE {
                        nodes[last_new as usize].link = split;
                    }
                    last_new = split;
                }
            }
            remainder -= 1;
            if an == ROOT && al > 0 {
                al -= 1;
                ae = pos + 1 - remainder as usize;
            } else if an != ROOT {
                let l = nodes[an as usize].link;
                an = if l == NONE { ROOT } else { l };
            }
        }
    }
    (nodes, children)
}
