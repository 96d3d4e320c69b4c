//! Parameterized dictionary matching over a trie of prev-encoded patterns.
//!
//! Edge labels are rewritten so that every root path spells a concrete
//! string (fresh parameterized symbols numbered by first appearance). Each
//! edge also carries a value `Z`: its static code, or the number of distinct
//! parameterized symbols met walking back from its parent up to the previous
//! occurrence of its symbol. Children are stored in `Z` order, and the `Z`
//! values of all edges are concatenated in that order, grouped by parent,
//! with parents taken in order of their reversed encodings.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::alphabet::{prev_encode, AlphabetSpec, Encoded};
use crate::error::{Error, Result};
use crate::serial::{check, Reader, Serial, Writer};
use crate::succinct::{BitBuilder, IntVec, RankSelectBits, WaveletTree};
use crate::topology::{NavTree, Node};

/// A state of the automaton.
pub type State = Node;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDictIndex {
    spec: AlphabetSpec,
    trie: NavTree,
    /// Rewritten symbol on the edge into each state, by preorder.
    edge_labels: IntVec,
    /// Rank of each state's reversed encoding, by preorder.
    labels: IntVec,
    /// Over labels: 1 at leaves.
    leaf_labels: RankSelectBits,
    z: WaveletTree,
    /// `0 (1^c 0)*` with one group of `c` children per internal state.
    groups: RankSelectBits,
    failure: IntVec,
    report: IntVec,
    /// Over labels: 1 at final states.
    finals: RankSelectBits,
    /// Input pattern number (1-based) of each final state, by final rank.
    ids: IntVec,
    lengths: IntVec,
}

/// Raw trie built from the prev encodings.
struct BuildTrie {
    children: Vec<BTreeMap<i64, usize>>,
    parent: Vec<usize>,
    token: Vec<i64>,
    depth: Vec<usize>,
    pattern: Vec<usize>,
}

impl BuildTrie {
    fn new(enc: &[Encoded]) -> Result<Self> {
        let mut t = BuildTrie {
            children: vec![BTreeMap::new()],
            parent: vec![0],
            token: vec![0],
            depth: vec![0],
            pattern: vec![0],
        };
        for (i, e) in enc.iter().enumerate() {
            let mut u = 0;
            for &tok in e.tokens() {
                u = match t.children[u].get(&tok) {
                    Some(&v) => v,
                    None => {
                        let v = t.children.len();
                        t.children[u].insert(tok, v);
                        t.children.push(BTreeMap::new());
                        t.parent.push(u);
                        t.token.push(tok);
                        t.depth.push(t.depth[u] + 1);
                        t.pattern.push(0);
                        v
                    }
                };
            }
            if t.pattern[u] != 0 {
                return Err(Error::DuplicatePattern(t.pattern[u], i + 1));
            }
            t.pattern[u] = i + 1;
        }
        Ok(t)
    }

    fn len(&self) -> usize {
        self.children.len()
    }
}

fn is_static_tok(t: i64) -> bool {
    crate::alphabet::is_static_token(t)
}

impl PDictIndex {
    /// Builds the automaton; `patterns[i]` is reported as pattern `i + 1`.
    pub fn build(patterns: &[Vec<u32>], spec: &AlphabetSpec) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::EmptyDictionary);
        }
        let sp = spec.sigma_p();
        for (i, p) in patterns.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::EmptyPattern(i + 1));
            }
            if let Some(k) = p.iter().position(|&c| c == 0 || c > spec.sigma()) {
                return Err(Error::UnknownSymbol(k + 1));
            }
        }
        let enc: Vec<Encoded> = patterns.iter().map(|p| prev_encode(p, sp)).collect();
        let bt = BuildTrie::new(&enc)?;
        let m = bt.len();

        // breadth-first order lists parents before children
        let mut bfs = Vec::with_capacity(m);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            bfs.push(u);
            queue.extend(bt.children[u].values().copied());
        }

        // rewritten labels and the distinct-symbol counter at each state
        let mut label = vec![0u32; m];
        let mut counter = vec![1u32; m];
        for &v in &bfs[1..] {
            let u = bt.parent[v];
            let tok = bt.token[v];
            counter[v] = counter[u];
            label[v] = if is_static_tok(tok) {
                (tok - crate::alphabet::static_token(0)) as u32
            } else if tok == 0 {
                if counter[u] > sp {
                    return Err(Error::CounterOverflow);
                }
                counter[v] += 1;
                counter[u]
            } else {
                let mut a = v;
                for _ in 0..tok {
                    a = bt.parent[a];
                }
                label[a]
            };
        }

        // Z value of the edge into each state
        let mut zval = vec![0u32; m];
        for &v in &bfs[1..] {
            let a = label[v];
            if a > sp {
                zval[v] = a;
                continue;
            }
            let mut seen = vec![false; sp as usize + 1];
            let mut distinct = 0;
            let mut w = bt.parent[v];
            let mut found = false;
            while w != 0 {
                let b = label[w];
                if b <= sp && !seen[b as usize] {
                    seen[b as usize] = true;
                    distinct += 1;
                }
                if b == a {
                    found = true;
                    break;
                }
                w = bt.parent[w];
            }
            zval[v] = if found { distinct } else { counter[bt.parent[v]] };
        }

        // reversed encodings and their ranks
        let rev: Vec<Encoded> = (0..m)
            .map(|u| {
                let mut s = Vec::with_capacity(bt.depth[u]);
                let mut w = u;
                while w != 0 {
                    s.push(label[w]);
                    w = bt.parent[w];
                }
                prev_encode(&s, sp)
            })
            .collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| rev[a].cmp(&rev[b]));
        let mut rank = vec![0usize; m];
        for (r, &u) in order.iter().enumerate() {
            rank[u] = r + 1;
        }

        // children: parameterized edges by Z descending, then static by code
        let kids: Vec<Vec<usize>> = (0..m)
            .map(|u| {
                let mut c: Vec<usize> = bt.children[u].values().copied().collect();
                c.sort_by_key(|&v| if zval[v] > sp { (1, zval[v] as i64) } else { (0, -(zval[v] as i64)) });
                debug_assert!(c.windows(2).all(|w| zval[w[0]] != zval[w[1]]));
                c
            })
            .collect();
        let (trie, handle) = NavTree::from_children(&kids);
        let pre: Vec<usize> = handle.iter().map(|&h| trie.pre_index(h)).collect();

        // failure links over the raw trie
        let mut fail = vec![0usize; m];
        for &v in &bfs[1..] {
            let u = bt.parent[v];
            let tok = bt.token[v];
            if u == 0 {
                continue;
            }
            let mut f = fail[u];
            fail[v] = loop {
                // the token read in a window of depth(f) + 1
                let t = if !is_static_tok(tok) && tok > bt.depth[f] as i64 { 0 } else { tok };
                if let Some(&x) = bt.children[f].get(&t) {
                    break x;
                }
                if f == 0 {
                    break 0;
                }
                f = fail[f];
            };
        }
        let mut rep = vec![0usize; m];
        for &v in &bfs[1..] {
            let f = fail[v];
            rep[v] = if bt.pattern[f] != 0 { f } else { rep[f] };
        }

        let by_pre = |vals: &dyn Fn(usize) -> u64| {
            let mut out = vec![0u64; m];
            for u in 0..m {
                out[pre[u]] = vals(u);
            }
            IntVec::from_slice(&out)
        };
        let edge_labels = by_pre(&|u| label[u] as u64);
        let labels = by_pre(&|u| rank[u] as u64);
        let failure = by_pre(&|u| pre[fail[u]] as u64);
        let report = by_pre(&|u| pre[rep[u]] as u64);
        let lengths = by_pre(&|u| bt.depth[u] as u64);

        let mut leaf_labels = vec![false; m];
        let mut finals = vec![false; m];
        let mut ids = Vec::new();
        let mut zs = Vec::with_capacity(m - 1);
        let mut groups = BitBuilder::new();
        groups.push(false);
        for &u in &order {
            leaf_labels[rank[u] - 1] = kids[u].is_empty();
            if bt.pattern[u] != 0 {
                finals[rank[u] - 1] = true;
                ids.push(bt.pattern[u] as u64);
            }
            if !kids[u].is_empty() {
                for &c in &kids[u] {
                    zs.push(zval[c]);
                    groups.push(true);
                }
                groups.push(false);
            }
        }

        Ok(PDictIndex {
            spec: spec.clone(),
            trie,
            edge_labels,
            labels,
            leaf_labels: RankSelectBits::from_bools(&leaf_labels),
            z: WaveletTree::new(&zs, spec.sigma()),
            groups: groups.finish(),
            failure,
            report,
            finals: RankSelectBits::from_bools(&finals),
            ids: IntVec::from_slice(&ids),
            lengths,
        })
    }

    pub fn spec(&self) -> &AlphabetSpec {
        &self.spec
    }
    pub fn trie(&self) -> &NavTree {
        &self.trie
    }
    pub fn state_count(&self) -> usize {
        self.trie.node_count()
    }
    pub fn pattern_count(&self) -> usize {
        self.ids.len()
    }
    pub fn root(&self) -> State {
        self.trie.root()
    }

    /// Rank of the reversed encoding of `u`'s path; the root has label 1.
    pub fn label(&self, u: State) -> usize {
        self.labels.get(self.trie.pre_index(u)) as usize
    }

    /// Length of `u`'s path.
    pub fn depth(&self, u: State) -> usize {
        self.lengths.get(self.trie.pre_index(u)) as usize
    }

    /// Rewritten symbol on the edge into `u`; 0 for the root.
    pub fn edge_label(&self, u: State) -> u32 {
        self.edge_labels.get(self.trie.pre_index(u)) as u32
    }

    /// Rewritten path from the root to `u`.
    pub fn path(&self, u: State) -> Vec<u32> {
        let d = self.trie.depth(u);
        (1..=d).map(|k| self.edge_label(self.trie.level_ancestor(u, k).unwrap())).collect()
    }

    /// Leaf range in the `Z` array of the children of `u`, 1-based; `None`
    /// for a leaf.
    fn group(&self, u: State) -> Option<(usize, usize)> {
        let lab = self.label(u);
        if self.leaf_labels.get(lab - 1) {
            return None;
        }
        let k = lab - self.leaf_labels.rank1(lab);
        let sp = self.groups.rank1(self.groups.select0(k).unwrap()) + 1;
        let ep = self.groups.rank1(self.groups.select0(k + 1).unwrap());
        Some((sp, ep))
    }

    /// `Z` value of the edge into `u`; `None` for the root.
    pub fn z_value(&self, u: State) -> Option<u32> {
        let p = self.trie.parent(u)?;
        let (sp, _) = self.group(p).unwrap();
        let q = self.trie.children(p).position(|c| c == u).unwrap();
        Some(self.z.access_0(sp - 1 + q))
    }

    /// Child of `u` whose edge has the given `Z` value.
    pub fn next(&self, u: State, z: u32) -> Option<State> {
        if z == 0 || z > self.spec.sigma() {
            return None;
        }
        let (sp, ep) = self.group(u)?;
        let q = self.z.select(self.z.rank_0(sp - 1, z) + 1, z).ok()?;
        if q > ep {
            return None;
        }
        self.trie.child(u, q - sp + 1)
    }

    pub fn failure(&self, u: State) -> State {
        self.trie.node_at(self.failure.get(self.trie.pre_index(u)) as usize)
    }

    pub fn report(&self, u: State) -> State {
        self.trie.node_at(self.report.get(self.trie.pre_index(u)) as usize)
    }

    /// Pattern number ending at `u`, if `u` is final.
    pub fn pattern_of(&self, u: State) -> Option<usize> {
        let lab = self.label(u);
        self.finals.get(lab - 1).then(|| self.ids.get(self.finals.rank1(lab - 1)) as usize)
    }

    /// Every `(end, pattern)` pair with the pattern p-matching the text
    /// window ending at `end` (1-based), ordered by end then pattern.
    pub fn scan(&self, text: &[u32]) -> Result<Vec<(usize, usize)>> {
        let mut sc = Scanner::new(self);
        let mut out = Vec::new();
        for &c in text {
            sc.push(c, &mut out)?;
        }
        Ok(out)
    }

    /// Component sizes in bits.
    pub fn space(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("trie", self.trie.size_in_bits()),
            ("edge_labels", self.edge_labels.size_in_bits()),
            ("labels", self.labels.size_in_bits()),
            ("leaf_labels", self.leaf_labels.size_in_bits()),
            ("wt_z", self.z.size_in_bits()),
            ("groups", self.groups.size_in_bits()),
            ("failure", self.failure.size_in_bits()),
            ("report", self.report.size_in_bits()),
            ("finals", self.finals.size_in_bits() + self.ids.size_in_bits()),
            ("lengths", self.lengths.size_in_bits()),
        ]
    }
}

/// Streaming matcher; each scan owns its window state.
pub struct Scanner<'a> {
    dict: &'a PDictIndex,
    state: State,
    /// Text position of the first symbol of the matched window.
    start: usize,
    /// Symbols consumed so far.
    pos: usize,
    last: Vec<usize>,
    /// Last-occurrence positions of the parameterized symbols in the window.
    active: BTreeSet<usize>,
}

impl<'a> Scanner<'a> {
    pub fn new(dict: &'a PDictIndex) -> Self {
        Scanner {
            dict,
            state: dict.root(),
            start: 1,
            pos: 0,
            last: vec![0; dict.spec.sigma_p() as usize + 1],
            active: BTreeSet::new(),
        }
    }

    fn shrink(&mut self, start: usize) {
        while let Some(&p) = self.active.first() {
            if p >= start {
                break;
            }
            self.active.pop_first();
        }
        self.start = start;
    }

    /// Consumes one symbol and appends the matches ending at it.
    pub fn push(&mut self, c: u32, out: &mut Vec<(usize, usize)>) -> Result<()> {
        let d = self.dict;
        let sp = d.spec.sigma_p();
        self.pos += 1;
        let k = self.pos;
        if c == 0 || c > d.spec.sigma() {
            return Err(Error::UnknownSymbol(k));
        }
        loop {
            let z = if c > sp {
                c
            } else if self.last[c as usize] >= self.start {
                self.active.range(self.last[c as usize]..).count() as u32
            } else {
                self.active.len() as u32 + 1
            };
            if let Some(v) = d.next(self.state, z) {
                self.state = v;
                if c <= sp {
                    let old = self.last[c as usize];
                    if old >= self.start {
                        self.active.remove(&old);
                    }
                    self.last[c as usize] = k;
                    self.active.insert(k);
                }
                break;
            }
            if self.state == d.root() {
                self.shrink(k + 1);
                break;
            }
            let f = d.failure(self.state);
            let start = self.start + d.depth(self.state) - d.depth(f);
            self.shrink(start);
            self.state = f;
        }
        let first = out.len();
        let mut u = self.state;
        if d.pattern_of(u).is_none() {
            u = d.report(u);
        }
        while u != d.root() {
            out.push((k, d.pattern_of(u).unwrap()));
            u = d.report(u);
        }
        out[first..].sort_unstable();
        Ok(())
    }
}

impl Serial for PDictIndex {
    fn write(&self, w: &mut Writer) {
        self.spec.write(w);
        self.trie.write(w);
        self.edge_labels.write(w);
        self.labels.write(w);
        self.leaf_labels.write(w);
        self.z.write(w);
        self.groups.write(w);
        self.failure.write(w);
        self.report.write(w);
        self.finals.write(w);
        self.ids.write(w);
        self.lengths.write(w);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let d = PDictIndex {
            spec: AlphabetSpec::read(r)?,
            trie: NavTree::read(r)?,
            edge_labels: IntVec::read(r)?,
            labels: IntVec::read(r)?,
            leaf_labels: RankSelectBits::read(r)?,
            z: WaveletTree::read(r)?,
            groups: RankSelectBits::read(r)?,
            failure: IntVec::read(r)?,
            report: IntVec::read(r)?,
            finals: RankSelectBits::read(r)?,
            ids: IntVec::read(r)?,
            lengths: IntVec::read(r)?,
        };
        let m = d.trie.node_count();
        let in_range = |v: &IntVec, hi: u64| (0..v.len()).all(|i| v.get(i) < hi);
        check(
            [&d.edge_labels, &d.labels, &d.failure, &d.report, &d.lengths].iter().all(|v| v.len() == m)
                && in_range(&d.failure, m as u64)
                && in_range(&d.report, m as u64)
                && (0..m).all(|i| (1..=m as u64).contains(&d.labels.get(i)))
                && d.leaf_labels.len() == m
                && d.finals.len() == m
                && d.ids.len() == d.finals.count_ones()
                && d.z.len() == m - 1
                && d.groups.count_ones() == m - 1
                && d.groups.count_zeros() == m - d.leaf_labels.count_ones() + 1,
            "dictionary layout",
        )?;
        Ok(d)
    }
}
