//! Sorted circular suffixes, their compacted trie, and the transformed last column.
//!
//! Rows are the circular suffixes of the text ordered by their prev (or compl)
//! encoding. Tokens are produced lazily from per-position back distances, so
//! sorting never materializes an encoded suffix. A leaf's path is the whole
//! encoded rotation, `n` tokens long.

use std::cmp::Ordering;

use crate::alphabet::{static_token, AlphabetSpec};
use crate::error::{Error, Result};
use crate::succinct::BitBuilder;
use crate::topology::{NavTree, Node};

/// Which encoding orders the rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Prev,
    Compl,
}

/// Cyclic token source for all rotations of a text.
pub struct Tokens<'a> {
    text: &'a [u32],
    sigma_p: u32,
    enc: Encoding,
    /// Cyclic distance back to the previous occurrence of the same symbol.
    back: Vec<u32>,
    /// Cyclic distance back to the previous occurrence of the complement.
    cback: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl<'a> Tokens<'a> {
    pub fn new(text: &'a [u32], spec: &AlphabetSpec, enc: Encoding) -> Self {
        let n = text.len();
        let sp = spec.sigma_p();
        let back = cyclic_distance(text, |c| (c <= sp).then_some(c), false);
        let cback = if enc == Encoding::Compl && spec.has_pairs() {
            let comp = spec.complement_table();
            // distance back from q to the nearest occurrence of comp(text[q])
            let mut last = vec![NONE; spec.sigma() as usize + 1];
            let mut out = vec![NONE; n];
            for q in 0..2 * n {
                let c = text[q % n];
                if c <= sp {
                    let cc = comp[c as usize];
                    if q >= n && cc != 0 && last[cc as usize] != NONE {
                        out[q - n] = (q - last[cc as usize] as usize) as u32;
                    }
                    last[c as usize] = q as u32;
                }
            }
            out
        } else {
            vec![NONE; n]
        };
        Tokens { text, sigma_p: sp, enc, back, cback }
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    /// Token `d` (0-based) of the rotation starting at 0-based `k`.
    #[inline]
    pub fn token(&self, k: usize, d: usize) -> i64 {
        let n = self.text.len();
        let mut q = k + d;
        if q >= n {
            q -= n;
        }
        let c = self.text[q];
        if c > self.sigma_p {
            return static_token(c);
        }
        let bp = self.back[q];
        match self.enc {
            Encoding::Prev => {
                if bp as usize <= d {
                    bp as i64
                } else {
                    0
                }
            }
            Encoding::Compl => {
                let bm = self.cback[q];
                if bp.min(bm) as usize > d {
                    0
                } else if bp < bm {
                    bp as i64
                } else {
                    -(bm as i64)
                }
            }
        }
    }

    /// Order of two rotations and the length of their common encoded prefix.
    pub fn compare(&self, a: usize, b: usize) -> (Ordering, usize) {
        for d in 0..self.text.len() {
            let (x, y) = (self.token(a, d), self.token(b, d));
            if x != y {
                return (x.cmp(&y), d);
            }
        }
        (Ordering::Equal, self.text.len())
    }
}

/// For each position, the cyclic distance to the previous (or next, when
/// `forward`) occurrence of the same class; `n` when the class occurs once and
/// `NONE` for positions outside any class.
fn cyclic_distance(text: &[u32], class: impl Fn(u32) -> Option<u32>, forward: bool) -> Vec<u32> {
    let n = text.len();
    let mut last: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    let mut out = vec![NONE; n];
    for step in 0..2 * n {
        let q = if forward { 2 * n - 1 - step } else { step };
        if let Some(c) = class(text[q % n]) {
            if q / n == usize::from(!forward) {
                if let Some(&p) = last.get(&c) {
                    out[q % n] = p.abs_diff(q) as u32;
                }
            }
            last.insert(c, q);
        }
    }
    out
}

/// Distinct non-zero class counts over circular windows `(start, len)`.
fn distinct_in_windows(classes: &[u32], queries: &[(usize, usize)]) -> Vec<u32> {
    let n = classes.len();
    let mut order: Vec<usize> = (0..queries.len()).filter(|&q| queries[q].1 > 0).collect();
    order.sort_unstable_by_key(|&q| queries[q].0 + queries[q].1 - 1);
    let mut bit = vec![0i32; 2 * n + 1];
    let add = |bit: &mut Vec<i32>, mut i: usize, v: i32| {
        i += 1;
        while i < bit.len() {
            bit[i] += v;
            i += i & i.wrapping_neg();
        }
    };
    let sum = |bit: &Vec<i32>, mut i: usize| {
        let mut s = 0;
        while i > 0 {
            s += bit[i];
            i &= i - 1;
        }
        s
    };
    let maxc = classes.iter().copied().max().unwrap_or(0) as usize;
    let mut last = vec![usize::MAX; maxc + 1];
    let mut out = vec![0u32; queries.len()];
    let mut pos = 0;
    for q in order {
        let (s, len) = queries[q];
        let e = s + len - 1;
        while pos <= e {
            let c = classes[pos % n] as usize;
            if c != 0 {
                if last[c] != usize::MAX {
                    add(&mut bit, last[c], -1);
                }
                add(&mut bit, pos, 1);
                last[c] = pos;
            }
            pos += 1;
        }
        out[q] = (sum(&bit, e + 1) - sum(&bit, s)) as u32;
    }
    out
}

/// Everything the indexes derive from the sorted rows.
///
/// Per-node arrays are indexed by 0-based preorder; per-row arrays by 0-based row.
pub struct SuffixData {
    pub encoding: Encoding,
    /// 1-based text position of each row.
    pub sa: Vec<u32>,
    pub tree: NavTree,
    pub path_len: Vec<u32>,
    pub zero_depth: Vec<u32>,
    /// Number of children whose edge starts with an integer token.
    pub pcount: Vec<u32>,
    /// Symbol preceding each row.
    pub last: Vec<u32>,
    /// Transformed last column: static code, or the signed distinct-class count.
    pub bwt: Vec<i64>,
    /// Offset of the governing reoccurrence (0 for static rows).
    pub first_occ: Vec<u32>,
    /// Preorder index of the zero node of each parameterized row.
    pub zero_node: Vec<u32>,
    /// Whether a parameterized row's reoccurrence is the first token below
    /// the zero node's parent.
    pub lead_zero: Vec<bool>,
}

impl SuffixData {
    pub fn build(text: &[u32], spec: &AlphabetSpec, enc: Encoding) -> Result<Self> {
        check_text(text, spec)?;
        let n = text.len();
        let sp = spec.sigma_p();
        let tokens = Tokens::new(text, spec, enc);

        let mut sa: Vec<u32> = (0..n as u32).collect();
        sa.sort_unstable_by(|&a, &b| tokens.compare(a as usize, b as usize).0);
        let lcp: Vec<usize> =
            (0..n).map(|i| if i == 0 { 0 } else { tokens.compare(sa[i - 1] as usize, sa[i] as usize).1 }).collect();

        let (tree, pre_depth, leaf_pre) = build_tree(n, &lcp);
        let m = tree.node_count();

        // representative row start for every node: its leftmost leaf
        let mut rep = vec![0usize; m];
        for (k, r) in rep.iter_mut().enumerate() {
            *r = sa[tree.lmost_leaf(tree.node_at(k)) - 1] as usize;
        }

        let comp = spec.complement_table();
        let class: Vec<u32> = text
            .iter()
            .map(|&c| match enc {
                _ if c > sp => 0,
                Encoding::Compl if comp[c as usize] != 0 => c.min(comp[c as usize]),
                _ => c,
            })
            .collect();
        let fwd = cyclic_distance(text, |c| (c <= sp).then_some(c), true);
        let cfwd = if enc == Encoding::Compl {
            cyclic_complement_forward(text, spec)
        } else {
            vec![NONE; n]
        };

        let last: Vec<u32> = sa.iter().map(|&s| text[(s as usize + n - 1) % n]).collect();
        let mut first_occ = vec![0u32; n];
        let mut positive = vec![true; n];
        for i in 0..n {
            if last[i] <= sp {
                let lpos = (sa[i] as usize + n - 1) % n;
                let fp = fwd[lpos];
                let fm = if cfwd[lpos] == NONE { n as u32 + 1 } else { cfwd[lpos] };
                first_occ[i] = fp.min(fm);
                positive[i] = fp < fm;
            }
        }

        let mut queries: Vec<(usize, usize)> = (0..m).map(|k| (rep[k], pre_depth[k] as usize)).collect();
        queries.extend((0..n).map(|i| (sa[i] as usize, first_occ[i] as usize)));
        let counts = distinct_in_windows(&class, &queries);
        let zero_depth = counts[..m].to_vec();
        let bwt: Vec<i64> = (0..n)
            .map(|i| match (last[i] <= sp, positive[i]) {
                (false, _) => last[i] as i64,
                (true, true) => counts[m + i] as i64,
                (true, false) => -(counts[m + i] as i64),
            })
            .collect();

        let mut pcount = vec![0u32; m];
        for (k, pc) in pcount.iter_mut().enumerate() {
            let u = tree.node_at(k);
            let d = pre_depth[k] as usize;
            *pc = tree
                .children(u)
                .take_while(|&c| tokens.token(rep[tree.pre_index(c)], d) < static_token(0))
                .count() as u32;
        }

        let mut zero_node = vec![NONE; n];
        let mut lead_zero = vec![false; n];
        for i in 0..n {
            if last[i] > sp {
                continue;
            }
            let leaf = tree.node_at(leaf_pre[i] as usize);
            let want = bwt[i].unsigned_abs() as u32;
            let (mut lo, mut hi) = (0, tree.depth(leaf));
            while lo < hi {
                let mid = (lo + hi) / 2;
                let a = tree.level_ancestor(leaf, mid).unwrap();
                if zero_depth[tree.pre_index(a)] >= want {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let z = tree.level_ancestor(leaf, lo).unwrap();
            let v = tree.parent(z).expect("zero node below the root");
            zero_node[i] = tree.pre_index(z) as u32;
            lead_zero[i] = first_occ[i] == pre_depth[tree.pre_index(v)] + 1;
        }

        Ok(SuffixData {
            encoding: enc,
            sa: sa.into_iter().map(|s| s + 1).collect(),
            tree,
            path_len: pre_depth,
            zero_depth,
            pcount,
            last,
            bwt,
            first_occ,
            zero_node,
            lead_zero,
        })
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    /// Inverse suffix array, 1-based values indexed by 0-based text position.
    pub fn inverse(&self) -> Vec<u32> {
        let mut inv = vec![0u32; self.sa.len()];
        for (i, &s) in self.sa.iter().enumerate() {
            inv[s as usize - 1] = i as u32 + 1;
        }
        inv
    }

    /// `LF(i)` for 1-based row `i`, straight from the suffix array.
    pub fn lf_table(&self) -> Vec<u32> {
        let inv = self.inverse();
        let n = self.sa.len();
        self.sa.iter().map(|&s| inv[if s == 1 { n - 1 } else { s as usize - 2 }]).collect()
    }

    pub fn zero_node_of(&self, i: usize) -> Option<Node> {
        let z = self.zero_node[i - 1];
        (z != NONE).then(|| self.tree.node_at(z as usize))
    }
}

fn cyclic_complement_forward(text: &[u32], spec: &AlphabetSpec) -> Vec<u32> {
    let n = text.len();
    let sp = spec.sigma_p();
    let comp = spec.complement_table();
    let mut next = vec![NONE; spec.sigma() as usize + 1];
    let mut out = vec![NONE; n];
    for q in (0..2 * n).rev() {
        let c = text[q % n];
        if c <= sp {
            let cc = comp[c as usize];
            if q < n && cc != 0 && next[cc as usize] != NONE {
                out[q] = (next[cc as usize] as usize - q) as u32;
            }
            next[c as usize] = q as u32;
        }
    }
    out
}

/// Validates an indexable text: codes in range, terminator last and unique.
pub fn check_text(text: &[u32], spec: &AlphabetSpec) -> Result<()> {
    let term = spec.terminator();
    match text.last() {
        Some(&c) if c == term => {}
        _ => return Err(Error::MissingTerminator),
    }
    for (i, &c) in text.iter().enumerate() {
        if c == 0 || c > spec.sigma() {
            return Err(Error::UnknownSymbol(i + 1));
        }
        if c == term && i + 1 != text.len() {
            return Err(Error::TerminatorMisplaced(i + 1));
        }
    }
    Ok(())
}

/// Compacted trie from the lcp array. Returns the tree, path lengths by
/// preorder, and the preorder index of each leaf by row.
fn build_tree(n: usize, lcp: &[usize]) -> (NavTree, Vec<u32>, Vec<u32>) {
    let mut depth: Vec<u32> = vec![0];
    let mut first: Vec<u32> = vec![NONE];
    let mut lastc: Vec<u32> = vec![NONE];
    let mut next: Vec<u32> = vec![NONE];
    let mut prev: Vec<u32> = vec![NONE];
    let mut leaf_of_row: Vec<u32> = Vec::with_capacity(n);
    let mut stack: Vec<u32> = vec![0];

    fn new_node(d: u32, v: &mut [&mut Vec<u32>; 5]) -> u32 {
        let id = v[0].len() as u32;
        v[0].push(d);
        for a in v.iter_mut().skip(1) {
            a.push(NONE);
        }
        id
    }

    for (i, &l) in lcp.iter().enumerate() {
        let l = l as u32;
        let mut popped = NONE;
        while depth[*stack.last().unwrap() as usize] > l {
            popped = stack.pop().unwrap();
        }
        let top = *stack.last().unwrap();
        if popped != NONE && depth[top as usize] < l {
            // split: a new node of depth l takes popped's place under top
            let w = new_node(l, &mut [&mut depth, &mut first, &mut lastc, &mut next, &mut prev]);
            let (p, q) = (prev[popped as usize], next[popped as usize]);
            prev[w as usize] = p;
            next[w as usize] = q;
            if p == NONE {
                first[top as usize] = w;
            } else {
                next[p as usize] = w;
            }
            debug_assert_eq!(q, NONE);
            lastc[top as usize] = w;
            first[w as usize] = popped;
            lastc[w as usize] = popped;
            prev[popped as usize] = NONE;
            next[popped as usize] = NONE;
            stack.push(w);
        }
        let parent = *stack.last().unwrap() as usize;
        let leaf = new_node(n as u32, &mut [&mut depth, &mut first, &mut lastc, &mut next, &mut prev]);
        if lastc[parent] == NONE {
            first[parent] = leaf;
        } else {
            next[lastc[parent] as usize] = leaf;
            prev[leaf as usize] = lastc[parent];
        }
        lastc[parent] = leaf;
        stack.push(leaf);
        leaf_of_row.push(leaf);
        let _ = i;
    }

    let total = depth.len();
    let mut bp = BitBuilder::new();
    let mut pre_of = vec![0u32; total];
    let mut pre_depth = Vec::with_capacity(total);
    let mut walk: Vec<(u32, bool)> = vec![(0, true)];
    while let Some((v, enter)) = walk.pop() {
        if enter {
            pre_of[v as usize] = pre_depth.len() as u32;
            pre_depth.push(depth[v as usize]);
            bp.push(true);
            walk.push((v, false));
            let mut kids = Vec::new();
            let mut c = first[v as usize];
            while c != NONE {
                kids.push(c);
                c = next[c as usize];
            }
            walk.extend(kids.into_iter().rev().map(|c| (c, true)));
        } else {
            bp.push(false);
        }
    }
    let tree = NavTree::from_parens(bp);
    let leaf_pre = leaf_of_row.iter().map(|&v| pre_of[v as usize]).collect();
    (tree, pre_depth, leaf_pre)
}
