//! Group-based marked and prime nodes.
//!
//! Leaves are cut into groups of `g` consecutive leaves (the last group may be
//! shorter). The lca of each group is marked, the root is marked, and the set
//! is closed under lca of preorder-consecutive marked nodes. A prime node is
//! the child of a marked node lying on the path to the nearest marked node
//! below it.
//!
//! Marked ancestors are found through the tree induced by the marked nodes,
//! whose parentheses are the marked subsequence of the full sequence.

use super::tree::{NavTree, Node};
use crate::error::Result;
use crate::serial::{check, Reader, Serial, Writer};
use crate::succinct::{BitBuilder, RankSelectBits};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkingScheme {
    g: usize,
    marked: RankSelectBits,
    primes: usize,
    /// Over the full parenthesis sequence: 1 at both parentheses of marked nodes.
    marked_parens: RankSelectBits,
    induced: NavTree,
}

impl MarkingScheme {
    pub fn new(tree: &NavTree, g: usize) -> Self {
        let g = g.max(2);
        let m = tree.node_count();
        let nl = tree.leaf_count();
        let mut mark = vec![false; m];
        mark[0] = true;
        let mut start = 1;
        while start <= nl {
            let end = (start + g - 1).min(nl);
            let u = tree.lca(tree.leaf_select(start), tree.leaf_select(end));
            mark[tree.pre_index(u)] = true;
            start = end + 1;
        }
        loop {
            let list: Vec<usize> = (0..m).filter(|&k| mark[k]).collect();
            let mut changed = false;
            for w in list.windows(2) {
                let x = tree.lca(tree.node_at(w[0]), tree.node_at(w[1]));
                let k = tree.pre_index(x);
                if !mark[k] {
                    mark[k] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let marked = RankSelectBits::from_bools(&mark);
        let parens = tree.parens();
        let mut marked_parens = BitBuilder::with_len(parens.len());
        let mut induced = BitBuilder::new();
        let mut open_stack: Vec<bool> = Vec::new();
        let mut k = 0;
        for i in 0..parens.len() {
            let on = if parens.get(i) {
                let on = mark[k];
                open_stack.push(on);
                k += 1;
                on
            } else {
                open_stack.pop().unwrap()
            };
            if on {
                marked_parens.set(i, true);
                induced.push(parens.get(i));
            }
        }
        let partial = MarkingScheme {
            g,
            marked,
            primes: 0,
            marked_parens: marked_parens.finish(),
            induced: NavTree::from_parens(induced),
        };
        let primes = (1..m).filter(|&k| partial.is_prime(tree, tree.node_at(k))).count();
        MarkingScheme { primes, ..partial }
    }

    /// Child of the lowest marked proper ancestor of `u` on the path to `u`.
    fn prime_of_marked(&self, tree: &NavTree, u: Node) -> Node {
        let par = tree.parent(u).expect("root has no prime");
        let up = self.lowest_marked_ancestor(tree, par);
        tree.level_ancestor(u, tree.depth(up) + 1).unwrap()
    }

    pub fn g(&self) -> usize {
        self.g
    }
    pub fn marked_count(&self) -> usize {
        self.marked.count_ones()
    }
    pub fn prime_count(&self) -> usize {
        self.primes
    }
    #[inline]
    pub fn is_marked(&self, tree: &NavTree, u: Node) -> bool {
        self.marked.get(tree.pre_index(u))
    }
    #[inline]
    pub fn is_marked_pre(&self, k: usize) -> bool {
        self.marked.get(k)
    }
    /// A child of a marked node with a marked node in its subtree.
    pub fn is_prime(&self, tree: &NavTree, u: Node) -> bool {
        let k = tree.pre_index(u);
        tree.parent(u).is_some_and(|p| self.is_marked(tree, p))
            && self.marked.rank1(k + tree.subtree_size(u)) > self.marked.rank1(k)
    }
    /// Number of marked nodes before preorder index `k`.
    #[inline]
    pub fn marked_rank_pre(&self, k: usize) -> usize {
        self.marked.rank1(k)
    }
    /// Preorder index of the `r`-th marked node (1-based).
    pub fn marked_select(&self, r: usize) -> usize {
        self.marked.select1(r).unwrap()
    }
    pub fn marked_bits(&self) -> &RankSelectBits {
        &self.marked
    }

    /// Deepest marked ancestor of `u`, `u` included.
    pub fn lowest_marked_ancestor(&self, tree: &NavTree, u: Node) -> Node {
        let k = tree.pre_index(u);
        if self.marked.get(k) {
            return u;
        }
        let p = self.marked_parens.rank1(u.0);
        let y = self.induced.enclose_pos(p).expect("root is marked");
        tree.node_at(self.marked_select(self.induced.pre_index(y) + 1))
    }

    /// Highest marked node in the subtree of `u` (`u` included), if any.
    pub fn highest_marked_descendant(&self, tree: &NavTree, u: Node) -> Option<Node> {
        if self.is_marked(tree, u) {
            return Some(u);
        }
        let (l, r) = tree.leaf_range(u);
        let nl = tree.leaf_count();
        let g = self.g;
        // first group starting at or after l, last group ending at or before r
        let first = (l - 1).div_ceil(g);
        let group_end = |k: usize| ((k + 1) * g).min(nl);
        let last_full = if r == nl { (nl - 1) / g } else { (r / g).checked_sub(1)? };
        if first > last_full || group_end(last_full) > r || first * g + 1 < l {
            return None;
        }
        Some(tree.lca(tree.leaf_select(first * g + 1), tree.leaf_select(group_end(last_full))))
    }

    /// Deepest prime ancestor of `u`, `u` included.
    pub fn lowest_prime_ancestor(&self, tree: &NavTree, u: Node) -> Option<Node> {
        if self.is_prime(tree, u) {
            return Some(u);
        }
        let w = self.lowest_marked_ancestor(tree, u);
        if w != u {
            let c = tree.level_ancestor(u, tree.depth(w) + 1).unwrap();
            if self.is_prime(tree, c) {
                return Some(c);
            }
        }
        if w == tree.root() {
            return None;
        }
        Some(self.prime_of_marked(tree, w))
    }

    pub fn size_in_bits(&self) -> usize {
        self.marked.size_in_bits()
            + self.marked_parens.size_in_bits()
            + self.induced.size_in_bits()
            + 64
    }
}

impl Serial for MarkingScheme {
    fn write(&self, w: &mut Writer) {
        w.usize(self.g);
        self.marked.write(w);
        w.usize(self.primes);
        self.marked_parens.write(w);
        self.induced.write(w);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let g = r.usize()?;
        let marked = RankSelectBits::read(r)?;
        let primes = r.usize()?;
        let marked_parens = RankSelectBits::read(r)?;
        let induced = NavTree::read(r)?;
        check(
            g >= 2
                && primes < marked.len()
                && !marked.is_empty()
                && marked.get(0)
                && marked_parens.len() == 2 * marked.len()
                && marked_parens.count_ones() == 2 * marked.count_ones()
                && induced.node_count() == marked.count_ones(),
            "marking",
        )?;
        Ok(MarkingScheme { g, marked, primes, marked_parens, induced })
    }
}
