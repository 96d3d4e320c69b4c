//! Constant-time prefix sums of node weights over non-ancestral predecessors.
//!
//! `sum(x)` adds the weight of every node that precedes `x` in preorder
//! without being its ancestor. Exact values are kept only at marked nodes
//! and at anchors; every other node is answered from an anchor plus a small
//! offset read from a table shared by all anchors whose local shape and
//! weights coincide.
//!
//! Anchors come in three kinds, decided by the lowest marked ancestor `w` of
//! the query node:
//! * `w` has no marked descendant: `w` itself, covering its whole subtree;
//! * the child `c` of `w` towards the query has a marked descendant: `c` is
//!   prime, covering its subtree minus that of its highest marked
//!   descendant `u*`;
//! * otherwise `c` is a free child, covering its whole subtree.

use std::collections::HashMap;

use crate::error::Result;
use crate::serial::{check, Reader, Serial, Writer};
use crate::succinct::{IntVec, RankSelectBits, UnaryCounts};
use crate::topology::{MarkingScheme, NavTree, Node};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FSum {
    marks: MarkingScheme,
    weights: UnaryCounts,
    marked_sum: IntVec,
    /// Total weight in the subtree of each marked node.
    phi: IntVec,
    anchors: RankSelectBits,
    anchor_sum: IntVec,
    anchor_table: IntVec,
    /// Start of each anchor's path weights in `path`; only prime anchors use it.
    path_start: IntVec,
    path: UnaryCounts,
    tables: Vec<IntVec>,
}

/// Exact sums for every node (0-based preorder), in one pass.
pub fn brute_sums(tree: &NavTree, w: &[usize]) -> Vec<usize> {
    let m = tree.node_count();
    let mut out = vec![0; m];
    let mut prefix = 0;
    // (close position, accumulated ancestor weight including this node)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for (k, u) in tree.preorder().enumerate() {
        while let Some(&(c, _)) = stack.last() {
            if c < u.0 {
                stack.pop();
            } else {
                break;
            }
        }
        let anc = stack.last().map_or(0, |&(_, a)| a);
        out[k] = prefix - anc;
        prefix += w[k];
        stack.push((tree.close(u), anc + w[k]));
    }
    out
}

fn has_marked_below(marks: &MarkingScheme, tree: &NavTree, u: Node) -> bool {
    let p = tree.pre_index(u);
    marks.marked_rank_pre(p + tree.subtree_size(u)) > marks.marked_rank_pre(p + 1)
}

impl FSum {
    /// `w` holds one weight per node in preorder; `g` is the grouping factor.
    pub fn new(tree: &NavTree, w: &[usize], g: usize) -> Self {
        let m = tree.node_count();
        assert_eq!(w.len(), m);
        let marks = MarkingScheme::new(tree, g);
        let exact = brute_sums(tree, w);
        // subtree totals via reverse preorder accumulation
        let mut sub = w.to_vec();
        for k in (1..m).rev() {
            let p = tree.pre_index(tree.parent(tree.node_at(k)).unwrap());
            sub[p] += sub[k];
        }

        let mut marked_sum = Vec::new();
        let mut phi = Vec::new();
        let mut is_anchor = vec![false; m];
        for k in 0..m {
            let u = tree.node_at(k);
            if marks.is_marked_pre(k) {
                marked_sum.push(exact[k] as u64);
                phi.push(sub[k] as u64);
                if !has_marked_below(&marks, tree, u) {
                    is_anchor[k] = true;
                } else {
                    for c in tree.children(u) {
                        if !marks.is_marked(tree, c) {
                            is_anchor[tree.pre_index(c)] = true;
                        }
                    }
                }
            }
        }

        let mut anchor_sum = Vec::new();
        let mut anchor_table = Vec::new();
        let mut path_start = Vec::new();
        let mut path_w: Vec<usize> = Vec::new();
        let mut memo: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut tables: Vec<IntVec> = Vec::new();
        for (k, _) in is_anchor.iter().enumerate().filter(|(_, &a)| a) {
            let a = tree.node_at(k);
            let size = tree.subtree_size(a);
            let ustar = if marks.is_marked_pre(k) { None } else { marks.highest_marked_descendant(tree, a) };
            path_start.push(path_w.len() as u64);
            let (key, vals) = match ustar {
                None => {
                    let mut key = vec![0u32];
                    let mut vals = Vec::with_capacity(size);
                    for j in k..k + size {
                        key.push((tree.depth(tree.node_at(j)) - tree.depth(a)) as u32);
                        key.push(if j == k { 0 } else { w[j] as u32 });
                        vals.push((exact[j] - exact[k]) as u64);
                    }
                    (key, vals)
                }
                Some(us) => {
                    let pu = tree.pre_index(us);
                    let su = tree.subtree_size(us);
                    let da = tree.depth(a);
                    let du = tree.depth(us);
                    for d in da + 1..du {
                        path_w.push(w[tree.pre_index(tree.level_ancestor(us, d).unwrap())]);
                    }
                    let gamma = |x: Node| -> usize {
                        let i = tree.depth(x) - da;
                        (i + 1..du - da).map(|d| w[tree.pre_index(tree.level_ancestor(us, da + d).unwrap())]).sum()
                    };
                    let mut key = vec![1u32, (pu - k) as u32];
                    let mut vals = Vec::with_capacity(size - su + 1);
                    for j in (k..pu + 1).chain(pu + su..k + size) {
                        let x = tree.node_at(j);
                        let on_path = tree.is_ancestor(x, us);
                        key.push((tree.depth(x) - da) as u32);
                        key.push(if on_path { 0 } else { w[j] as u32 });
                        let v = if j <= pu {
                            exact[j] - exact[k]
                        } else {
                            exact[j] - exact[k] - sub[pu] - gamma(tree.lca(x, us))
                        };
                        vals.push(v as u64);
                    }
                    (key, vals)
                }
            };
            let id = *memo.entry(key).or_insert_with(|| {
                tables.push(IntVec::from_slice(&vals));
                tables.len() - 1
            });
            debug_assert_eq!(tables[id].to_vec(), vals);
            anchor_sum.push(exact[k] as u64);
            anchor_table.push(id as u64);
        }

        FSum {
            marks,
            weights: UnaryCounts::new(w.iter().copied()),
            marked_sum: IntVec::from_slice(&marked_sum),
            phi: IntVec::from_slice(&phi),
            anchors: RankSelectBits::from_bools(&is_anchor),
            anchor_sum: IntVec::from_slice(&anchor_sum),
            anchor_table: IntVec::from_slice(&anchor_table),
            path_start: IntVec::from_slice(&path_start),
            path: UnaryCounts::new(path_w),
            tables,
        }
    }

    pub fn g(&self) -> usize {
        self.marks.g()
    }

    /// Weight of the node at preorder index `k`.
    pub fn weight(&self, k: usize) -> usize {
        self.weights.get(k + 1)
    }

    pub fn table_count(&self) -> usize {
        self.tables.len()
    }

    pub fn sum(&self, tree: &NavTree, x: Node) -> usize {
        let k = tree.pre_index(x);
        let marks = &self.marks;
        if marks.is_marked_pre(k) {
            return self.marked_sum.get(marks.marked_rank_pre(k)) as usize;
        }
        let w = marks.lowest_marked_ancestor(tree, x);
        let (a, ka) = if has_marked_below(marks, tree, w) {
            let c = tree.level_ancestor(x, tree.depth(w) + 1).unwrap();
            (c, tree.pre_index(c))
        } else {
            (w, tree.pre_index(w))
        };
        let r = self.anchors.rank1(ka);
        debug_assert!(self.anchors.get(ka));
        let base = self.anchor_sum.get(r) as usize;
        let table = &self.tables[self.anchor_table.get(r) as usize];
        if a == w || !has_marked_below(marks, tree, a) {
            return base + table.get(k - ka) as usize;
        }
        let us = marks.highest_marked_descendant(tree, a).unwrap();
        let pu = tree.pre_index(us);
        if k < pu {
            return base + table.get(k - ka) as usize;
        }
        let su = tree.subtree_size(us);
        let local = k - ka - su + 1;
        let l = tree.lca(x, us);
        let start = self.path_start.get(r) as usize;
        let plen = tree.depth(us) - tree.depth(a) - 1;
        let i = tree.depth(l) - tree.depth(a);
        let gamma = self.path.prefix_sum(start + plen) - self.path.prefix_sum(start + i);
        let phi = self.phi.get(marks.marked_rank_pre(pu)) as usize;
        base + phi + gamma + table.get(local) as usize
    }

    pub fn size_in_bits(&self) -> usize {
        self.marks.size_in_bits()
            + self.weights.size_in_bits()
            + self.marked_sum.size_in_bits()
            + self.phi.size_in_bits()
            + self.anchors.size_in_bits()
            + self.anchor_sum.size_in_bits()
            + self.anchor_table.size_in_bits()
            + self.path_start.size_in_bits()
            + self.path.size_in_bits()
            + self.tables.iter().map(|t| t.size_in_bits()).sum::<usize>()
    }
}

impl Serial for FSum {
    fn write(&self, w: &mut Writer) {
        self.marks.write(w);
        self.weights.write(w);
        self.marked_sum.write(w);
        self.phi.write(w);
        self.anchors.write(w);
        self.anchor_sum.write(w);
        self.anchor_table.write(w);
        self.path_start.write(w);
        self.path.write(w);
        w.usize(self.tables.len());
        for t in &self.tables {
            t.write(w);
        }
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let marks = MarkingScheme::read(r)?;
        let weights = UnaryCounts::read(r)?;
        let marked_sum = IntVec::read(r)?;
        let phi = IntVec::read(r)?;
        let anchors = RankSelectBits::read(r)?;
        let anchor_sum = IntVec::read(r)?;
        let anchor_table = IntVec::read(r)?;
        let path_start = IntVec::read(r)?;
        let path = UnaryCounts::read(r)?;
        let nt = r.usize()?;
        let mut tables = Vec::new();
        for _ in 0..nt {
            tables.push(IntVec::read(r)?);
        }
        check(
            weights.len() == anchors.len()
                && marked_sum.len() == marks.marked_count()
                && phi.len() == marks.marked_count()
                && anchor_sum.len() == anchors.count_ones()
                && anchor_table.len() == anchors.count_ones()
                && path_start.len() == anchors.count_ones()
                && (0..anchor_table.len()).all(|i| (anchor_table.get(i) as usize) < nt),
            "prefix-sum structure",
        )?;
        Ok(FSum { marks, weights, marked_sum, phi, anchors, anchor_sum, anchor_table, path_start, path, tables })
    }
}
