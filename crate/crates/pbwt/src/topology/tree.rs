//! Ordered trees in balanced-parentheses form.
//!
//! A node is identified by the position of its opening parenthesis. Every
//! navigation step reduces to rank on the parentheses plus forward/backward
//! searches over the excess, answered by per-byte tables and a min-tree over
//! 256-bit blocks.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::serial::{check, Reader, Serial, Writer};
use crate::succinct::{BitBuilder, RankSelectBits};

const BLOCK: usize = 256;

/// Handle of a tree node: position of its opening parenthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node(pub usize);

struct ByteTables {
    delta: [i8; 256],
    /// min over prefixes of length 1..=8
    minpre: [i8; 256],
}

fn tables() -> &'static ByteTables {
    static T: OnceLock<ByteTables> = OnceLock::new();
    T.get_or_init(|| {
        let mut delta = [0i8; 256];
        let mut minpre = [0i8; 256];
        for b in 0..256usize {
            let mut cur = 0i8;
            let mut mn = i8::MAX;
            for k in 0..8 {
                cur += if b >> k & 1 == 1 { 1 } else { -1 };
                mn = mn.min(cur);
            }
            delta[b] = cur;
            minpre[b] = mn;
        }
        ByteTables { delta, minpre }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NavTree {
    bp: RankSelectBits,
    /// Over preorder: 1 when the node is a leaf.
    leaves: RankSelectBits,
    /// Min-tree over block minima of the excess, `size` leaves.
    mins: Vec<i32>,
    size: usize,
}

impl NavTree {
    /// Builds from a parenthesis sequence (`true` = open). The sequence must be
    /// balanced and describe a single tree.
    pub fn from_parens(bits: BitBuilder) -> Self {
        let bp = bits.finish();
        assert!(bp.len() >= 2 && bp.len() % 2 == 0, "parenthesis sequence must be non-empty and even");
        let mut leaves = BitBuilder::new();
        for i in 0..bp.len() {
            if bp.get(i) {
                leaves.push(!bp.get(i + 1));
            }
        }
        let nb = bp.len().div_ceil(BLOCK);
        let size = nb.next_power_of_two();
        let mut mins = vec![i32::MAX; 2 * size];
        let mut cur = 0i32;
        for b in 0..nb {
            let mut mn = i32::MAX;
            for i in b * BLOCK..((b + 1) * BLOCK).min(bp.len()) {
                cur += if bp.get(i) { 1 } else { -1 };
                mn = mn.min(cur);
            }
            mins[size + b] = mn;
        }
        for k in (1..size).rev() {
            mins[k] = mins[2 * k].min(mins[2 * k + 1]);
        }
        debug_assert_eq!(cur, 0);
        NavTree { bp, leaves: leaves.finish(), mins, size }
    }

    /// Builds from child lists; `children[v]` in order, node 0 is the root.
    /// Returns the tree and, for every input node, its handle.
    pub fn from_children(children: &[Vec<usize>]) -> (Self, Vec<Node>) {
        let mut bits = BitBuilder::new();
        let mut handle = vec![Node(0); children.len()];
        let mut stack = vec![(0usize, 0usize)];
        handle[0] = Node(0);
        bits.push(true);
        while let Some(top) = stack.last_mut() {
            let (v, k) = *top;
            if k < children[v].len() {
                top.1 += 1;
                let c = children[v][k];
                handle[c] = Node(bits.len());
                bits.push(true);
                stack.push((c, 0));
            } else {
                bits.push(false);
                stack.pop();
            }
        }
        (Self::from_parens(bits), handle)
    }

    pub fn node_count(&self) -> usize {
        self.bp.len() / 2
    }
    pub fn leaf_count(&self) -> usize {
        self.leaves.count_ones()
    }
    pub fn root(&self) -> Node {
        Node(0)
    }
    pub fn size_in_bits(&self) -> usize {
        self.bp.size_in_bits() + self.leaves.size_in_bits() + 32 * self.mins.len() + 64
    }

    #[inline]
    fn byte_at(&self, j: usize) -> usize {
        debug_assert!(j % 8 == 0);
        (self.bp.word(j / 64) >> (j % 64) & 0xff) as usize
    }
    #[inline]
    fn step(&self, j: usize) -> i32 {
        if self.bp.get(j) {
            1
        } else {
            -1
        }
    }
    /// Excess after position `i` (`i = -1` gives 0).
    #[inline]
    fn excess(&self, i: isize) -> i32 {
        if i < 0 {
            return 0;
        }
        let k = i as usize + 1;
        2 * self.bp.rank1(k) as i32 - k as i32
    }

    /// Smallest `j` in `[from, to)` with excess `<= e`, given `cur = E(from-1)`.
    fn scan_fwd(&self, mut j: usize, mut cur: i32, e: i32, to: usize) -> std::result::Result<usize, i32> {
        let t = tables();
        while j < to && j % 8 != 0 {
            cur += self.step(j);
            if cur <= e {
                return Ok(j);
            }
            j += 1;
        }
        while j + 8 <= to {
            let b = self.byte_at(j);
            if cur + t.minpre[b] as i32 <= e {
                break;
            }
            cur += t.delta[b] as i32;
            j += 8;
        }
        while j < to {
            cur += self.step(j);
            if cur <= e {
                return Ok(j);
            }
            j += 1;
        }
        Err(cur)
    }

    /// Largest `j` in `[stop, from]` with excess `<= e`, given `cur = E(from)`.
    fn scan_bwd(&self, mut j: isize, mut cur: i32, e: i32, stop: isize) -> std::result::Result<isize, i32> {
        let t = tables();
        while j >= stop && j % 8 != 7 {
            if cur <= e {
                return Ok(j);
            }
            cur -= self.step(j as usize);
            j -= 1;
        }
        while j - 7 >= stop {
            let b = self.byte_at((j - 7) as usize);
            let before = cur - t.delta[b] as i32;
            if before + t.minpre[b] as i32 <= e {
                break;
            }
            cur = before;
            j -= 8;
        }
        while j >= stop {
            if cur <= e {
                return Ok(j);
            }
            cur -= self.step(j as usize);
            j -= 1;
        }
        Err(cur)
    }

    fn first_block_leq(&self, from: usize, e: i32) -> Option<usize> {
        fn go(t: &NavTree, k: usize, lo: usize, hi: usize, from: usize, e: i32) -> Option<usize> {
            if hi <= from || t.mins[k] > e {
                return None;
            }
            if hi - lo == 1 {
                return Some(lo);
            }
            let mid = (lo + hi) / 2;
            go(t, 2 * k, lo, mid, from, e).or_else(|| go(t, 2 * k + 1, mid, hi, from, e))
        }
        go(self, 1, 0, self.size, from, e)
    }

    fn last_block_leq(&self, upto: usize, e: i32) -> Option<usize> {
        fn go(t: &NavTree, k: usize, lo: usize, hi: usize, upto: usize, e: i32) -> Option<usize> {
            if lo > upto || t.mins[k] > e {
                return None;
            }
            if hi - lo == 1 {
                return Some(lo);
            }
            let mid = (lo + hi) / 2;
            go(t, 2 * k + 1, mid, hi, upto, e).or_else(|| go(t, 2 * k, lo, mid, upto, e))
        }
        go(self, 1, 0, self.size, upto, e)
    }

    fn range_block_min(&self, lo: usize, hi: usize) -> i32 {
        let (mut l, mut r) = (lo + self.size, hi + self.size);
        let mut m = i32::MAX;
        while l < r {
            if l & 1 == 1 {
                m = m.min(self.mins[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                m = m.min(self.mins[r]);
            }
            l >>= 1;
            r >>= 1;
        }
        m
    }

    /// Smallest `j > i` with excess `<= e`.
    fn fwd_search(&self, i: usize, e: i32) -> Option<usize> {
        let len = self.bp.len();
        let cur = self.excess(i as isize);
        let end = ((i + 1) / BLOCK + 1) * BLOCK;
        if let Ok(j) = self.scan_fwd(i + 1, cur, e, end.min(len)) {
            return Some(j);
        }
        if end >= len {
            return None;
        }
        let b = self.first_block_leq(end / BLOCK, e)?;
        let start = b * BLOCK;
        let c0 = self.excess(start as isize - 1);
        self.scan_fwd(start, c0, e, ((b + 1) * BLOCK).min(len)).ok()
    }

    /// Largest `j < i` with excess `<= e`; `-1` stands for the virtual
    /// position before the sequence (excess 0).
    fn bwd_search(&self, i: usize, e: i32) -> Option<isize> {
        if i == 0 {
            return if e >= 0 { Some(-1) } else { None };
        }
        let j = i as isize - 1;
        let stop = (j as usize / BLOCK * BLOCK) as isize;
        if let Ok(p) = self.scan_bwd(j, self.excess(j), e, stop) {
            return Some(p);
        }
        if stop > 0 {
            if let Some(b) = self.last_block_leq(stop as usize / BLOCK - 1, e) {
                let last = ((b + 1) * BLOCK) as isize - 1;
                return self.scan_bwd(last, self.excess(last), e, (b * BLOCK) as isize).ok();
            }
        }
        if e >= 0 {
            Some(-1)
        } else {
            None
        }
    }

    /// Minimum excess over positions `[i, j]`.
    fn range_min(&self, i: usize, j: usize) -> i32 {
        let t = tables();
        let mut m = i32::MAX;
        let mut cur = self.excess(i as isize - 1);
        let mut p = i;
        let first_end = ((i / BLOCK + 1) * BLOCK).min(j + 1);
        let scan = |p: &mut usize, cur: &mut i32, m: &mut i32, to: usize| {
            while *p < to && *p % 8 != 0 {
                *cur += self.step(*p);
                *m = (*m).min(*cur);
                *p += 1;
            }
            while *p + 8 <= to {
                let b = self.byte_at(*p);
                *m = (*m).min(*cur + t.minpre[b] as i32);
                *cur += t.delta[b] as i32;
                *p += 8;
            }
            while *p < to {
                *cur += self.step(*p);
                *m = (*m).min(*cur);
                *p += 1;
            }
        };
        scan(&mut p, &mut cur, &mut m, first_end);
        if p > j {
            return m;
        }
        let bl = p / BLOCK;
        let br = (j + 1) / BLOCK;
        if br > bl {
            m = m.min(self.range_block_min(bl, br));
            p = br * BLOCK;
            cur = self.excess(p as isize - 1);
        }
        scan(&mut p, &mut cur, &mut m, j + 1);
        m
    }

    // ---- navigation ----

    #[inline]
    pub fn is_leaf(&self, u: Node) -> bool {
        !self.bp.get(u.0 + 1)
    }

    /// Depth of `u`; the root has depth 0.
    #[inline]
    pub fn depth(&self, u: Node) -> usize {
        (self.excess(u.0 as isize) - 1) as usize
    }

    /// Position of the closing parenthesis of `u`.
    #[inline]
    pub fn close(&self, u: Node) -> usize {
        if self.is_leaf(u) {
            return u.0 + 1;
        }
        self.fwd_search(u.0, self.excess(u.0 as isize) - 1).unwrap()
    }

    pub fn parent(&self, u: Node) -> Option<Node> {
        if u.0 == 0 {
            return None;
        }
        let j = self.bwd_search(u.0, self.excess(u.0 as isize) - 2)?;
        Some(Node((j + 1) as usize))
    }

    /// Innermost node whose parentheses enclose position `p`, i.e. the last
    /// unmatched open parenthesis before `p`.
    pub fn enclose_pos(&self, p: usize) -> Option<Node> {
        if p == 0 {
            return None;
        }
        let e = self.excess(p as isize - 1);
        if e <= 0 {
            return None;
        }
        let j = self.bwd_search(p, e - 1)?;
        Some(Node((j + 1) as usize))
    }

    pub fn parent_checked(&self, u: Node) -> Result<Node> {
        self.parent(u).ok_or(Error::RootHasNoParent)
    }

    /// Ancestor of `u` at depth `d <= depth(u)`.
    pub fn level_ancestor(&self, u: Node, d: usize) -> Option<Node> {
        if d > self.depth(u) {
            return None;
        }
        let j = self.bwd_search(u.0, d as i32)?;
        Some(Node((j + 1) as usize))
    }

    pub fn level_ancestor_checked(&self, u: Node, d: usize) -> Result<Node> {
        self.level_ancestor(u, d).ok_or(Error::DepthOutOfRange(d))
    }

    /// `a` is an ancestor of `d` (or equal).
    #[inline]
    pub fn is_ancestor(&self, a: Node, d: Node) -> bool {
        a.0 <= d.0 && d.0 <= self.close(a)
    }

    pub fn lca(&self, u: Node, v: Node) -> Node {
        let (u, v) = if u.0 <= v.0 { (u, v) } else { (v, u) };
        if self.is_ancestor(u, v) {
            return u;
        }
        let m = self.range_min(u.0, v.0);
        self.level_ancestor(u, (m - 1) as usize).unwrap()
    }

    pub fn first_child(&self, u: Node) -> Option<Node> {
        if self.is_leaf(u) {
            None
        } else {
            Some(Node(u.0 + 1))
        }
    }

    pub fn next_sibling(&self, u: Node) -> Option<Node> {
        let c = self.close(u) + 1;
        if c < self.bp.len() && self.bp.get(c) {
            Some(Node(c))
        } else {
            None
        }
    }

    /// `q`-th child, 1-based.
    pub fn child(&self, u: Node, q: usize) -> Option<Node> {
        if q == 0 {
            return None;
        }
        let mut c = self.first_child(u)?;
        for _ in 1..q {
            c = self.next_sibling(c)?;
        }
        Some(c)
    }

    pub fn child_checked(&self, u: Node, q: usize) -> Result<Node> {
        self.child(u, q).ok_or(Error::NoSuchChild(q))
    }

    pub fn children(&self, u: Node) -> impl Iterator<Item = Node> + '_ {
        std::iter::successors(self.first_child(u), move |&c| self.next_sibling(c))
    }

    pub fn num_children(&self, u: Node) -> usize {
        self.children(u).count()
    }

    /// 0-based preorder index.
    #[inline]
    pub fn pre_index(&self, u: Node) -> usize {
        self.bp.rank1(u.0)
    }

    /// 1-based preorder rank.
    pub fn pre_order(&self, u: Node) -> usize {
        self.pre_index(u) + 1
    }

    /// Node with 0-based preorder index `k`.
    #[inline]
    pub fn node_at(&self, k: usize) -> Node {
        Node(self.bp.select1(k + 1).expect("preorder index out of range"))
    }

    /// Number of nodes in the subtree of `u`, `u` included.
    pub fn subtree_size(&self, u: Node) -> usize {
        (self.close(u) - u.0 + 1) / 2
    }

    /// 1-based rank of the leftmost leaf below `u`.
    #[inline]
    pub fn lmost_leaf(&self, u: Node) -> usize {
        self.leaves.rank1(self.pre_index(u)) + 1
    }

    /// 1-based rank of the rightmost leaf below `u`.
    #[inline]
    pub fn rmost_leaf(&self, u: Node) -> usize {
        let p = self.pre_index(u);
        self.leaves.rank1(p + self.subtree_size(u))
    }

    /// Leaf range `[lmost, rmost]` of `u`.
    pub fn leaf_range(&self, u: Node) -> (usize, usize) {
        let p = self.pre_index(u);
        let l = self.leaves.rank1(p) + 1;
        let r = self.leaves.rank1(p + self.subtree_size(u));
        (l, r)
    }

    /// The `i`-th leaf, 1-based.
    #[inline]
    pub fn leaf_select(&self, i: usize) -> Node {
        self.node_at(self.leaves.select1(i).expect("leaf rank out of range"))
    }

    pub fn leaf_select_checked(&self, i: usize) -> Result<Node> {
        if i == 0 || i > self.leaf_count() {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(self.leaf_select(i))
    }

    /// 1-based rank of leaf `l`.
    pub fn leaf_rank(&self, l: Node) -> usize {
        self.leaves.rank1(self.pre_index(l)) + 1
    }

    /// Whether the node at preorder index `k` is a leaf.
    pub fn is_leaf_pre(&self, k: usize) -> bool {
        self.leaves.get(k)
    }

    /// Nodes in preorder.
    pub fn preorder(&self) -> impl Iterator<Item = Node> + '_ {
        (0..self.bp.len()).filter(move |&i| self.bp.get(i)).map(Node)
    }

    /// The parenthesis bits, `true` = open.
    pub fn parens(&self) -> &RankSelectBits {
        &self.bp
    }
}

impl Serial for NavTree {
    fn write(&self, w: &mut Writer) {
        self.bp.write(w);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let bp = RankSelectBits::read(r)?;
        check(bp.len() >= 2 && bp.len() % 2 == 0 && bp.count_ones() * 2 == bp.len(), "tree parentheses")?;
        let mut cur = 0i64;
        for (i, b) in bp.iter().enumerate() {
            cur += if b { 1 } else { -1 };
            check(cur > 0 || i + 1 == bp.len(), "tree parentheses")?;
        }
        let mut bits = BitBuilder::new();
        for b in bp.iter() {
            bits.push(b);
        }
        Ok(NavTree::from_parens(bits))
    }
}
