//! Locating the zero node of a leaf: its highest ancestor whose path holds at
//! least as many 0-tokens as the leaf's last-column value.
//!
//! Two independent searches are kept. The compact one runs a predecessor
//! query over the zero depths of all nodes. The succinct one stores zero
//! depths only at `g`-marked nodes, then descends from the lowest qualifying
//! marked ancestor comparing running maxima read off the last column, using
//! `g'`-marked checkpoints to binary-search long paths.

use crate::error::Result;
use crate::serial::{check, Reader, Serial, Writer};
use crate::succinct::{IntVec, UnaryCounts, WaveletTree};
use crate::topology::{MarkingScheme, NavTree, Node};

/// Read access to the magnitudes of a (possibly signed) last column.
pub(crate) struct Column<'a> {
    pub wt: &'a WaveletTree,
    /// Stored value of a positive magnitude `v` is `v + shift`; a negative
    /// entry `-v` is stored as `shift - v`.
    pub shift: u32,
    pub signed: bool,
}

impl Column<'_> {
    pub fn count_pos(&self, l: usize, r: usize, lo: u32, hi: u32) -> usize {
        if lo > hi {
            return 0;
        }
        self.wt.range_count(l, r, lo + self.shift, hi + self.shift)
    }
    pub fn count_neg(&self, l: usize, r: usize, lo: u32, hi: u32) -> usize {
        if !self.signed || lo > hi {
            return 0;
        }
        self.wt.range_count(l, r, self.shift - hi, self.shift - lo)
    }
    fn next_pos(&self, l: usize, r: usize, beta: u32, k: usize) -> u32 {
        self.wt.range_next_val(l, r, beta + self.shift, k).expect("positive value exists") - self.shift
    }
    fn next_neg(&self, l: usize, r: usize, beta: u32, k: usize) -> u32 {
        self.shift - self.wt.range_prev_val(l, r, self.shift - beta, k).expect("negative value exists")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroNodeIndex {
    /// `zeroDepth + 1` of every node in preorder.
    depths: WaveletTree,
    marks: MarkingScheme,
    fine: MarkingScheme,
    /// `zeroDepth + 1` of the `g`-marked nodes in preorder.
    marked_depths: WaveletTree,
    alpha_pos: UnaryCounts,
    alpha_neg: UnaryCounts,
    delta_pos: IntVec,
    delta_neg: IntVec,
}

/// Grouping factors `ceil(log2 sigma)` and `ceil(log2 log2 sigma)`, at least 2.
pub fn grouping_factors(sigma: u32) -> (usize, usize) {
    let lg = |x: f64| x.log2().ceil().max(0.0) as usize;
    let g = lg(sigma as f64).max(2);
    let g2 = lg((sigma as f64).log2().max(1.0)).max(2);
    (g, g2)
}

impl ZeroNodeIndex {
    pub(crate) fn new(tree: &NavTree, zero_depth: &[u32], col: &Column<'_>, max_depth: u32, sigma: u32) -> Self {
        let m = tree.node_count();
        let (g, g2) = grouping_factors(sigma);
        let depths = WaveletTree::new(&zero_depth.iter().map(|&z| z + 1).collect::<Vec<_>>(), max_depth + 1);
        let marks = MarkingScheme::new(tree, g);
        let fine = MarkingScheme::new(tree, g2);
        let md: Vec<u32> = (0..m).filter(|&k| marks.is_marked_pre(k)).map(|k| zero_depth[k] + 1).collect();
        let marked_depths = WaveletTree::new(&md, max_depth + 1);

        let mut apos = vec![0usize; m];
        let mut aneg = vec![0usize; m];
        let mut parent_zd = vec![0u32; m];
        for k in 1..m {
            let u = tree.node_at(k);
            let p = tree.pre_index(tree.parent(u).unwrap());
            parent_zd[k] = zero_depth[p];
            let (l, r) = tree.leaf_range(u);
            apos[k] = col.count_pos(l, r, zero_depth[p] + 1, zero_depth[k]);
            aneg[k] = col.count_neg(l, r, zero_depth[p] + 1, zero_depth[k]);
        }

        let mut dpos = Vec::new();
        let mut dneg = Vec::new();
        for k in 0..m {
            if !fine.is_marked_pre(k) {
                continue;
            }
            let x = tree.node_at(k);
            let (mut sp, mut sn) = (0usize, 0usize);
            let mut top = None;
            let mut y = x;
            // walk up to the child of the lowest g-marked proper ancestor
            while let Some(p) = tree.parent(y) {
                if marks.is_marked(tree, p) {
                    top = Some(y);
                    break;
                }
                let ky = tree.pre_index(y);
                sp += apos[ky];
                sn += aneg[ky];
                y = p;
            }
            let (dp, dn) = match top {
                Some(u2) if u2 != x => {
                    let z2 = zero_depth[tree.pre_index(u2)];
                    let (l, r) = tree.leaf_range(x);
                    (sp - col.count_pos(l, r, z2 + 1, zero_depth[k]), sn - col.count_neg(l, r, z2 + 1, zero_depth[k]))
                }
                _ => (0, 0),
            };
            dpos.push(dp as u64);
            dneg.push(dn as u64);
        }

        ZeroNodeIndex {
            depths,
            marks,
            fine,
            marked_depths,
            alpha_pos: UnaryCounts::new(apos),
            alpha_neg: UnaryCounts::new(aneg),
            delta_pos: IntVec::from_slice(&dpos),
            delta_neg: IntVec::from_slice(&dneg),
        }
    }

    /// Highest ancestor of `leaf` with zero depth at least `want`, from the
    /// predecessor query over all node depths.
    pub fn compact(&self, tree: &NavTree, leaf: Node, want: u32) -> Node {
        let p = tree.pre_order(leaf);
        let j = self.depths.predecessor(p, want + 1).expect("root precedes every leaf");
        let v = tree.node_at(j - 1);
        let u = tree.lca(leaf, v);
        tree.level_ancestor(leaf, tree.depth(u) + 1).unwrap()
    }

    /// Lowest `g`-marked ancestor of `leaf` with zero depth below `want`.
    pub fn lowest_marked_below(&self, tree: &NavTree, leaf: Node, want: u32) -> Node {
        let u = self.marks.lowest_marked_ancestor(tree, leaf);
        let j = self.marks.marked_rank_pre(tree.pre_index(u));
        if self.marked_depths.access_0(j) <= want {
            return u;
        }
        let jp = self.marked_depths.predecessor(j + 1, want + 1).expect("root is marked with depth 0");
        let v = tree.node_at(self.marks.marked_select(jp));
        tree.lca(u, v)
    }

    fn marked_zero_depth(&self, tree: &NavTree, u: Node) -> u32 {
        self.marked_depths.access_0(self.marks.marked_rank_pre(tree.pre_index(u))) - 1
    }

    /// Running maximum after stepping onto `x` from its parent.
    fn step(&self, tree: &NavTree, col: &Column<'_>, x: Node, beta: u32) -> u32 {
        let k = tree.pre_index(x) + 1;
        let (ap, an) = (self.alpha_pos.get(k), if col.signed { self.alpha_neg.get(k) } else { 0 });
        self.beta(tree, col, x, beta, ap, an)
    }

    fn beta(&self, tree: &NavTree, col: &Column<'_>, x: Node, beta: u32, kp: usize, kn: usize) -> u32 {
        let (l, r) = tree.leaf_range(x);
        let bp = if kp > 0 { col.next_pos(l, r, beta, kp) } else { beta };
        let bn = if kn > 0 { col.next_neg(l, r, beta, kn) } else { beta };
        bp.max(bn)
    }

    /// Same answer as [`compact`](Self::compact) from the marked-node structures.
    pub(crate) fn succinct(&self, tree: &NavTree, col: &Column<'_>, leaf: Node, want: u32) -> Node {
        let w = self.lowest_marked_below(tree, leaf, want);
        let dw = tree.depth(w);
        let dl = tree.depth(leaf);
        let u2 = tree.level_ancestor(leaf, dw + 1).unwrap();
        let beta1 = self.step(tree, col, u2, self.marked_zero_depth(tree, w));
        if want <= beta1 {
            return u2;
        }
        // checkpoints strictly between u2 and the first g-marked node below w
        let mut cps: Vec<(Node, usize, usize)> = Vec::new();
        let (mut sp, mut sn) = (0usize, 0usize);
        let mut bottom = dl;
        for d in dw + 2..=dl {
            let x = tree.level_ancestor(leaf, d).unwrap();
            let k = tree.pre_index(x);
            if self.marks.is_marked_pre(k) {
                bottom = d;
                break;
            }
            sp += self.alpha_pos.get(k + 1);
            if col.signed {
                sn += self.alpha_neg.get(k + 1);
            }
            if d < dl && self.fine.is_marked_pre(k) {
                let r = self.fine.marked_rank_pre(k);
                let gp = sp - self.delta_pos.get(r) as usize;
                let gn = if col.signed { sn - self.delta_neg.get(r) as usize } else { 0 };
                cps.push((x, gp, gn));
            }
        }
        // first checkpoint already at or below the zero node
        let (mut lo, mut hi) = (0usize, cps.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let (x, gp, gn) = cps[mid];
            if want <= self.beta(tree, col, x, beta1, gp, gn) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let (start, mut beta) = if lo == 0 {
            (u2, beta1)
        } else {
            let (x, gp, gn) = cps[lo - 1];
            (x, self.beta(tree, col, x, beta1, gp, gn))
        };
        for d in tree.depth(start) + 1..=bottom {
            let x = tree.level_ancestor(leaf, d).unwrap();
            beta = self.step(tree, col, x, beta);
            if want <= beta {
                return x;
            }
        }
        tree.level_ancestor(leaf, bottom).unwrap()
    }

    pub fn marks(&self) -> &MarkingScheme {
        &self.marks
    }

    pub fn fine_marks(&self) -> &MarkingScheme {
        &self.fine
    }

    /// Bits of the compact-only part.
    pub fn compact_bits(&self) -> usize {
        self.depths.size_in_bits()
    }

    /// Bits of the succinct search structures.
    pub fn succinct_bits(&self) -> usize {
        self.marks.size_in_bits()
            + self.fine.size_in_bits()
            + self.marked_depths.size_in_bits()
            + self.alpha_pos.size_in_bits()
            + self.alpha_neg.size_in_bits()
            + self.delta_pos.size_in_bits()
            + self.delta_neg.size_in_bits()
    }
}

impl Serial for ZeroNodeIndex {
    fn write(&self, w: &mut Writer) {
        self.depths.write(w);
        self.marks.write(w);
        self.fine.write(w);
        self.marked_depths.write(w);
        self.alpha_pos.write(w);
        self.alpha_neg.write(w);
        self.delta_pos.write(w);
        self.delta_neg.write(w);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let z = ZeroNodeIndex {
            depths: WaveletTree::read(r)?,
            marks: MarkingScheme::read(r)?,
            fine: MarkingScheme::read(r)?,
            marked_depths: WaveletTree::read(r)?,
            alpha_pos: UnaryCounts::read(r)?,
            alpha_neg: UnaryCounts::read(r)?,
            delta_pos: IntVec::read(r)?,
            delta_neg: IntVec::read(r)?,
        };
        let m = z.depths.len();
        check(
            z.marks.marked_bits().len() == m
                && z.fine.marked_bits().len() == m
                && z.marked_depths.len() == z.marks.marked_count()
                && z.alpha_pos.len() == m
                && z.alpha_neg.len() == m
                && z.delta_pos.len() == z.fine.marked_count()
                && z.delta_neg.len() == z.fine.marked_count(),
            "zero-node structure",
        )?;
        Ok(z)
    }
}
