//! Brute-force reference answers.
//!
//! Everything here is a direct transcription of a definition: materialize the
//! encodings, sort, scan. Inputs are capped at `MAX_N` symbols so quadratic
//! work cannot sneak into large tests. Nothing is shared with the `pbwt` crate.
//!
//! Conventions: codes `1..=sp` are parameterized, larger codes static; the
//! terminator is the largest code. Positions and ranks are 1-based.

use std::collections::HashMap;

pub const MAX_N: usize = 2048;

/// Static tokens are shifted above every integer token.
pub const STATIC: i64 = 1 << 40;

fn cap(n: usize) {
    assert!(n <= MAX_N, "oracle input of length {n} exceeds {MAX_N}");
}

/// Symbol classes and complement pairing. `comp[c]` is 0 for unpaired codes.
#[derive(Debug, Clone)]
pub struct Alpha {
    pub sp: u32,
    pub comp: Vec<u32>,
}

impl Alpha {
    pub fn plain(sp: u32) -> Self {
        Alpha { sp, comp: vec![0; sp as usize + 1] }
    }
    pub fn is_p(&self, c: u32) -> bool {
        c >= 1 && c <= self.sp
    }
    fn comp_of(&self, c: u32) -> u32 {
        self.comp.get(c as usize).copied().unwrap_or(0)
    }
}

pub fn prev(s: &[u32], a: &Alpha) -> Vec<i64> {
    (0..s.len())
        .map(|i| {
            if !a.is_p(s[i]) {
                return STATIC + s[i] as i64;
            }
            match (0..i).rev().find(|&j| s[j] == s[i]) {
                Some(j) => (i - j) as i64,
                None => 0,
            }
        })
        .collect()
}

pub fn compl(s: &[u32], a: &Alpha) -> Vec<i64> {
    (0..s.len())
        .map(|i| {
            let c = s[i];
            if !a.is_p(c) {
                return STATIC + c as i64;
            }
            let jp = (0..i).rev().find(|&j| s[j] == c);
            let cc = a.comp_of(c);
            let jm = (0..i).rev().find(|&j| cc != 0 && s[j] == cc);
            match (jp, jm) {
                (None, None) => 0,
                (Some(p), None) => (i - p) as i64,
                (None, Some(m)) => -((i - m) as i64),
                (Some(p), Some(m)) if p > m => (i - p) as i64,
                (_, Some(m)) => -((i - m) as i64),
            }
        })
        .collect()
}

/// Circular suffix starting at 1-based position `k`.
pub fn rotation(t: &[u32], k: usize) -> Vec<u32> {
    t[k - 1..].iter().chain(t[..k - 1].iter()).copied().collect()
}

/// Which encoding a suffix structure sorts by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enc {
    Prev,
    Compl,
}

pub fn encode(s: &[u32], a: &Alpha, e: Enc) -> Vec<i64> {
    match e {
        Enc::Prev => prev(s, a),
        Enc::Compl => compl(s, a),
    }
}

/// Rows of the sorted circular-suffix matrix: `sa[i-1]` is the start of row `i`.
pub fn naive_sa(t: &[u32], a: &Alpha, e: Enc) -> Vec<usize> {
    cap(t.len());
    let n = t.len();
    let mut rows: Vec<(Vec<i64>, usize)> = (1..=n).map(|k| (encode(&rotation(t, k), a, e), k)).collect();
    rows.sort();
    rows.into_iter().map(|(_, k)| k).collect()
}

pub fn naive_psa(t: &[u32], a: &Alpha) -> Vec<usize> {
    naive_sa(t, a, Enc::Prev)
}

pub fn inverse(sa: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sa.len()];
    for (i, &k) in sa.iter().enumerate() {
        inv[k - 1] = i + 1;
    }
    inv
}

/// `LF(i) = SA^{-1}[SA[i] - 1]`, with position 0 wrapping to `n`.
pub fn naive_lf(t: &[u32], a: &Alpha, e: Enc) -> Vec<usize> {
    let sa = naive_sa(t, a, e);
    let inv = inverse(&sa);
    let n = t.len();
    sa.iter().map(|&k| inv[if k == 1 { n } else { k - 1 } - 1]).collect()
}

pub fn naive_plf(t: &[u32], a: &Alpha) -> Vec<usize> {
    naive_lf(t, a, Enc::Prev)
}

pub fn naive_slf(t: &[u32], a: &Alpha) -> Vec<usize> {
    naive_lf(t, a, Enc::Compl)
}

/// Symbol preceding row `i`'s suffix.
pub fn last_column(t: &[u32], sa: &[usize]) -> Vec<u32> {
    let n = t.len();
    sa.iter().map(|&k| t[if k == 1 { n } else { k - 1 } - 1]).collect()
}

/// First 1-based position of `c` in `s`, or `s.len() + 1`.
pub fn first_occ(s: &[u32], c: u32) -> usize {
    s.iter().position(|&x| x == c).map_or(s.len() + 1, |p| p + 1)
}

/// pBWT: static symbols kept; a p-symbol becomes the number of distinct
/// p-symbols in the row up to its first reoccurrence.
pub fn naive_pbwt(t: &[u32], a: &Alpha) -> Vec<u32> {
    let sa = naive_psa(t, a);
    let l = last_column(t, &sa);
    sa.iter()
        .zip(&l)
        .map(|(&k, &c)| {
            if !a.is_p(c) {
                return c;
            }
            let row = rotation(t, k);
            let f = first_occ(&row, c);
            let mut seen: Vec<u32> = row[..f].iter().copied().filter(|&x| a.is_p(x)).collect();
            seen.sort();
            seen.dedup();
            seen.len() as u32
        })
        .collect()
}

/// First-occurrence offsets `f_i` of the preceding p-symbol (0 for static).
pub fn naive_first_occ(t: &[u32], a: &Alpha, e: Enc) -> Vec<usize> {
    let sa = naive_sa(t, a, e);
    let l = last_column(t, &sa);
    sa.iter()
        .zip(&l)
        .map(|(&k, &c)| if a.is_p(c) { first_occ(&rotation(t, k), c) } else { 0 })
        .collect()
}

/// sBWT: static symbols kept; a p-symbol becomes `+z` or `-z` depending on
/// whether the symbol itself or its complement reoccurs first, where `z` is
/// the number of 0-tokens in the compl encoding of the row up to that point.
pub fn naive_sbwt(t: &[u32], a: &Alpha) -> Vec<i64> {
    let sa = naive_sa(t, a, Enc::Compl);
    let l = last_column(t, &sa);
    sa.iter()
        .zip(&l)
        .map(|(&k, &c)| {
            if !a.is_p(c) {
                return c as i64;
            }
            let row = rotation(t, k);
            let fp = first_occ(&row, c);
            let cc = a.comp_of(c);
            let fm = if cc == 0 { row.len() + 1 } else { first_occ(&row, cc) };
            let f = fp.min(fm);
            let z = compl(&row, a)[..f].iter().filter(|&&x| x == 0).count() as i64;
            if fp < fm {
                z
            } else {
                -z
            }
        })
        .collect()
}

pub fn naive_pmatch(t: &[u32], p: &[u32], a: &Alpha) -> Vec<usize> {
    naive_match(t, p, a, Enc::Prev)
}

pub fn naive_smatch(t: &[u32], p: &[u32], a: &Alpha) -> Vec<usize> {
    naive_match(t, p, a, Enc::Compl)
}

fn naive_match(t: &[u32], p: &[u32], a: &Alpha, e: Enc) -> Vec<usize> {
    cap(t.len());
    if p.len() > t.len() {
        return Vec::new();
    }
    let target = encode(p, a, e);
    (0..=t.len() - p.len()).filter(|&j| encode(&t[j..j + p.len()], a, e) == target).map(|j| j + 1).collect()
}

/// All `(end position, pattern id)` pairs where pattern `id` (1-based)
/// p-matches the window ending at `end`.
pub fn naive_dict_scan(patterns: &[Vec<u32>], t: &[u32], a: &Alpha) -> Vec<(usize, usize)> {
    cap(t.len());
    let mut out = Vec::new();
    for j in 1..=t.len() {
        for (id, p) in patterns.iter().enumerate() {
            if !p.is_empty() && p.len() <= j && prev(&t[j - p.len()..j], a) == prev(p, a) {
                out.push((j, id + 1));
            }
        }
    }
    out
}

/// Exhaustive search for a bijection on p-symbols mapping `x` onto `y`
/// (static symbols fixed). With `respect_comp`, two symbols occurring in `x`
/// must be complements exactly when their images are.
pub fn bijection_exists(x: &[u32], y: &[u32], a: &Alpha, respect_comp: bool) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let sp = a.sp as usize;
    assert!(sp <= 6, "bijection search limited to six parameterized symbols");
    let mut used: Vec<u32> = x.iter().copied().filter(|&c| a.is_p(c)).collect();
    used.sort_unstable();
    used.dedup();
    let mut perm: Vec<u32> = (1..=a.sp).collect();
    loop {
        let img = |c: u32| perm[c as usize - 1];
        let ok_comp = !respect_comp
            || used.iter().all(|&c| used.iter().all(|&d| (a.comp_of(c) == d) == (a.comp_of(img(c)) == img(d))));
        if ok_comp && x.iter().zip(y).all(|(&u, &v)| if a.is_p(u) { img(u) == v } else { u == v }) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A node of the compacted trie over the sorted row encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrieNode {
    /// Leaf range, 1-based inclusive.
    pub lo: usize,
    pub hi: usize,
    /// Length of the path label.
    pub depth: usize,
    /// Number of 0-tokens on the path label.
    pub zeros: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Compacted trie over the full-length encodings of all circular suffixes.
/// Nodes are numbered in preorder; node 0 is the root.
pub struct OracleTree {
    pub rows: Vec<Vec<i64>>,
    pub nodes: Vec<TrieNode>,
}

impl OracleTree {
    pub fn new(t: &[u32], a: &Alpha, e: Enc) -> Self {
        let sa = naive_sa(t, a, e);
        let rows: Vec<Vec<i64>> = sa.iter().map(|&k| encode(&rotation(t, k), a, e)).collect();
        let mut tree = OracleTree { rows, nodes: Vec::new() };
        tree.add(1, t.len(), 0, None);
        tree
    }

    fn add(&mut self, lo: usize, hi: usize, depth: usize, parent: Option<usize>) -> usize {
        let id = self.nodes.len();
        let zeros = self.rows[lo - 1][..depth].iter().filter(|&&x| x == 0).count();
        self.nodes.push(TrieNode { lo, hi, depth, zeros, parent, children: Vec::new() });
        if lo == hi && (depth == self.rows[lo - 1].len() || parent.is_some()) {
            return id;
        }
        let mut s = lo;
        while s <= hi {
            let tok = self.rows[s - 1][depth];
            let mut e = s;
            while e < hi && self.rows[e][depth] == tok {
                e += 1;
            }
            let d = if s == e {
                self.rows[s - 1].len()
            } else {
                let (x, y) = (&self.rows[s - 1], &self.rows[e - 1]);
                (depth..x.len()).find(|&k| x[k] != y[k]).unwrap_or(x.len())
            };
            let c = self.add(s, e, d, Some(id));
            self.nodes[id].children.push(c);
            s = e + 1;
        }
        id
    }

    pub fn leaf(&self, i: usize) -> usize {
        (0..self.nodes.len()).find(|&v| self.nodes[v].children.is_empty() && self.nodes[v].lo == i).unwrap()
    }

    pub fn is_ancestor(&self, a: usize, mut d: usize) -> bool {
        loop {
            if a == d {
                return true;
            }
            match self.nodes[d].parent {
                Some(p) => d = p,
                None => return false,
            }
        }
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let mut x = u;
        while !self.is_ancestor(x, v) {
            x = self.nodes[x].parent.unwrap();
        }
        x
    }

    /// Highest ancestor of leaf `i` whose path has at least `z` zeros.
    pub fn zero_node(&self, i: usize, z: usize) -> usize {
        let mut path = vec![self.leaf(i)];
        while let Some(p) = self.nodes[*path.last().unwrap()].parent {
            path.push(p);
        }
        *path.iter().rev().find(|&&v| self.nodes[v].zeros >= z).expect("leaf has too few zeros")
    }

    /// Token on the edge leaving `v` towards row `i`.
    pub fn lead(&self, v: usize, i: usize) -> i64 {
        self.rows[i - 1][self.nodes[v].depth]
    }

    /// Node with the given leaf range and depth.
    pub fn find(&self, lo: usize, hi: usize, depth: usize) -> Option<usize> {
        self.nodes.iter().position(|x| x.lo == lo && x.hi == hi && x.depth == depth)
    }

    /// Per-node weights: every counted leaf contributes one unit. A leaf whose
    /// reoccurrence `f` lands on the edge just below `v = parent(z)` at its
    /// first token (`f = depth(v) + 1`) counts at the last child of `v` with an
    /// integer lead when `to_last_int_child`, otherwise at `v`; all others
    /// count at `z = zero_node`.
    pub fn weights(&self, leaves: &[(usize, usize, usize)], to_last_int_child: bool) -> Vec<usize> {
        let mut w = vec![0; self.nodes.len()];
        for &(i, zval, f) in leaves {
            let z = self.zero_node(i, zval);
            let v = self.nodes[z].parent.expect("zero node is never the root");
            if f == self.nodes[v].depth + 1 {
                if to_last_int_child {
                    let c = *self.nodes[v]
                        .children
                        .iter()
                        .filter(|&&c| self.lead(v, self.nodes[c].lo) < STATIC)
                        .last()
                        .unwrap();
                    w[c] += 1;
                } else if self.nodes[v].parent.is_some() {
                    w[v] += 1;
                }
            } else {
                w[z] += 1;
            }
        }
        w
    }

    /// Sum of weights over nodes before `x` in preorder that are not ancestors of `x`.
    pub fn sum_before(&self, w: &[usize], x: usize) -> usize {
        (0..x).filter(|&y| !self.is_ancestor(y, x)).map(|y| w[y]).sum()
    }

    /// Sum of weights over nodes whose leaves all come after `x`'s leaves.
    pub fn sum_after(&self, w: &[usize], x: usize) -> usize {
        (0..self.nodes.len()).filter(|&y| self.nodes[y].lo > self.nodes[x].hi).map(|y| w[y]).sum()
    }

    /// `sum_before` for every node at once: the preorder prefix minus the
    /// weights on the path from the root.
    pub fn all_sums_before(&self, w: &[usize]) -> Vec<usize> {
        let m = self.nodes.len();
        let mut prefix = 0;
        let mut on_path = vec![0; m];
        let mut out = vec![0; m];
        for x in 0..m {
            let up = self.nodes[x].parent.map_or(0, |p| on_path[p] + w[p]);
            on_path[x] = up;
            out[x] = prefix - up;
            prefix += w[x];
        }
        out
    }

    /// `sum_after` for every node: nodes after the subtree in preorder.
    pub fn all_sums_after(&self, w: &[usize]) -> Vec<usize> {
        let m = self.nodes.len();
        let mut suffix = vec![0; m + 1];
        for x in (0..m).rev() {
            suffix[x] = suffix[x + 1] + w[x];
        }
        // subtree end in preorder: first node past x whose range starts after hi
        (0..m)
            .map(|x| {
                let hi = self.nodes[x].hi;
                let mut end = x + 1;
                while end < m && self.nodes[end].lo <= hi {
                    end += 1;
                }
                suffix[end]
            })
            .collect()
    }
}

/// p-preceded rows as `(row, pbwt value, f)` for the prev tree.
pub fn p_rows(t: &[u32], a: &Alpha) -> Vec<(usize, usize, usize)> {
    let pb = naive_pbwt(t, a);
    let f = naive_first_occ(t, a, Enc::Prev);
    (0..t.len()).filter(|&i| pb[i] <= a.sp).map(|i| (i + 1, pb[i] as usize, f[i])).collect()
}

/// Rows of the compl tree with a positive (`sign > 0`) or negative sBWT value,
/// as `(row, |sbwt|, f)` with `f` the relevant reoccurrence offset.
pub fn s_rows(t: &[u32], a: &Alpha, sign: i64) -> Vec<(usize, usize, usize)> {
    let sb = naive_sbwt(t, a);
    let sa = naive_sa(t, a, Enc::Compl);
    let l = last_column(t, &sa);
    (0..t.len())
        .filter(|&i| a.is_p(l[i]) && sb[i].signum() == sign)
        .map(|i| {
            let row = rotation(t, sa[i]);
            let c = if sign > 0 { l[i] } else { a.comp_of(l[i]) };
            (i + 1, sb[i].unsigned_abs() as usize, first_occ(&row, c))
        })
        .collect()
}

/// `zeta(S, j)`: the encoding of the suffix starting at 1-based `j`, obtained
/// from an encoding `S` by zeroing back-references that leave the suffix.
pub fn zeta(s: &[i64], j: usize) -> Vec<i64> {
    s[j - 1..]
        .iter()
        .enumerate()
        .map(|(k, &x)| if x < STATIC && x > k as i64 { 0 } else { x })
        .collect()
}

/// A concrete string with the given prev encoding: fresh p-symbols are
/// numbered 1, 2, ... in order of first appearance.
pub fn decode_prev(s: &[i64]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(s.len());
    let mut fresh = 0;
    for (i, &x) in s.iter().enumerate() {
        if x >= STATIC {
            out.push((x - STATIC) as u32);
        } else if x == 0 {
            fresh += 1;
            out.push(fresh);
        } else {
            out.push(out[i - x as usize]);
        }
    }
    out
}

/// Encoding of the reversed string for a prev-encoded path.
pub fn reverse_prev(s: &[i64], a: &Alpha) -> Vec<i64> {
    let mut d = decode_prev(s);
    d.reverse();
    prev(&d, a)
}

/// Trie over prev-encoded patterns: states keyed by their encoded path.
pub struct OracleTrie {
    pub states: Vec<Vec<i64>>,
    pub index: HashMap<Vec<i64>, usize>,
}

impl OracleTrie {
    pub fn new(patterns: &[Vec<u32>], a: &Alpha) -> Self {
        let mut states = vec![Vec::new()];
        let mut index = HashMap::new();
        index.insert(Vec::new(), 0);
        for p in patterns {
            let e = prev(p, a);
            for k in 1..=e.len() {
                if !index.contains_key(&e[..k]) {
                    index.insert(e[..k].to_vec(), states.len());
                    states.push(e[..k].to_vec());
                }
            }
        }
        OracleTrie { states, index }
    }

    /// State reached by the longest proper shift of `u`'s path.
    pub fn failure(&self, u: usize) -> usize {
        let s = &self.states[u];
        (2..=s.len() + 1).find_map(|j| self.index.get(&zeta(s, j)).copied()).unwrap_or(0)
    }
}
pub mod cases;
