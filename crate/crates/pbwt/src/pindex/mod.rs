//! Parameterized FM-index: counting, locating and extracting under p-matching.

pub mod fsum;
pub mod sampling;
pub(crate) mod zeronode;

use std::collections::BTreeMap;

use crate::alphabet::{prev_encode, AlphabetSpec, PrevString};
use crate::error::{Error, Result};
use crate::pst::{Encoding, SuffixData};
use crate::serial::{check, Reader, Serial, Writer};
use crate::succinct::{RankSelectBits, UnaryCounts, WaveletTree};
use crate::topology::{NavTree, Node};

pub use fsum::FSum;
pub use sampling::{SampleRate, Samples};
pub use zeronode::{grouping_factors, ZeroNodeIndex};
use zeronode::Column;

/// Which zero-node search the LF mapping uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroMode {
    /// Predecessor over all node depths.
    #[default]
    Compact,
    /// Marked-node descent.
    Succinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildOptions {
    pub sample_rate: SampleRate,
    /// Grouping factor of the prefix-sum structure; defaults to
    /// `max(2, ceil(log2 n))`.
    pub fsum_group: Option<usize>,
}

pub(crate) fn default_fsum_group(n: usize) -> usize {
    ((n.max(2) as f64).log2().ceil() as usize).max(2)
}

/// Per-node weights for the prefix sums over rows selected by `keep`.
///
/// A row whose reoccurrence sits strictly inside the edge above its zero node
/// counts at the zero node. One whose reoccurrence is the first token of that
/// edge counts at the last integer-led child of the edge's upper end when
/// `lead_to_child`, otherwise at the upper end itself (never at the root).
pub(crate) fn row_weights(d: &SuffixData, keep: impl Fn(usize) -> bool, lead_to_child: bool) -> Vec<usize> {
    let tree = &d.tree;
    let mut w = vec![0usize; tree.node_count()];
    for i in 0..d.len() {
        if !keep(i) {
            continue;
        }
        let z = tree.node_at(d.zero_node[i] as usize);
        if !d.lead_zero[i] {
            w[tree.pre_index(z)] += 1;
            continue;
        }
        let v = tree.parent(z).unwrap();
        let kv = tree.pre_index(v);
        if lead_to_child {
            let u = tree.child(v, d.pcount[kv] as usize).unwrap();
            w[tree.pre_index(u)] += 1;
        } else if kv != 0 {
            w[kv] += 1;
        }
    }
    w
}

/// Right-to-left pattern scan over symbol classes. For each class it keeps
/// the leftmost position seen so far and the symbol found there.
pub(crate) struct PatternScan {
    first: BTreeMap<usize, u32>,
    pos_of: Vec<usize>,
    sym_of: Vec<u32>,
}

impl PatternScan {
    pub fn new(classes: usize) -> Self {
        PatternScan { first: BTreeMap::new(), pos_of: vec![usize::MAX; classes + 1], sym_of: vec![0; classes + 1] }
    }
    /// Distinct classes seen so far.
    pub fn distinct(&self) -> usize {
        self.first.len()
    }
    /// Rank of the leftmost occurrence of `class` among those of all seen
    /// classes, with the symbol found there.
    pub fn rank_of(&self, class: u32) -> Option<(usize, u32)> {
        let p = self.pos_of[class as usize];
        (p != usize::MAX).then(|| (self.first.range(..=p).count(), self.sym_of[class as usize]))
    }
    /// Class whose leftmost occurrence has rank `d` (1-based).
    pub fn class_at_rank(&self, d: usize) -> u32 {
        *self.first.values().nth(d - 1).unwrap()
    }
    pub fn push(&mut self, class: u32, sym: u32, pos: usize) {
        let k = class as usize;
        if self.pos_of[k] != usize::MAX {
            self.first.remove(&self.pos_of[k]);
        }
        self.first.insert(pos, class);
        self.pos_of[k] = pos;
        self.sym_of[k] = sym;
    }
}

/// Parameterized Burrows-Wheeler index of one text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PIndex {
    spec: AlphabetSpec,
    n: usize,
    bwt: WaveletTree,
    tree: NavTree,
    lead_zero: RankSelectBits,
    pcount: UnaryCounts,
    zeros: ZeroNodeIndex,
    fsum: FSum,
    samples: Samples,
    mode: ZeroMode,
}

impl PIndex {
    pub fn build(text: &[u32], spec: &AlphabetSpec, opts: &BuildOptions) -> Result<Self> {
        let d = SuffixData::build(text, spec, Encoding::Prev)?;
        Ok(Self::from_suffix_data(&d, spec, opts))
    }

    pub fn from_suffix_data(d: &SuffixData, spec: &AlphabetSpec, opts: &BuildOptions) -> Self {
        let n = d.len();
        let sp = spec.sigma_p();
        let vals: Vec<u32> = d.bwt.iter().map(|&v| v as u32).collect();
        let bwt = WaveletTree::new(&vals, spec.sigma());
        let col = Column { wt: &bwt, shift: 0, signed: false };
        let maxz = d.zero_depth.iter().copied().max().unwrap_or(0);
        let zeros = ZeroNodeIndex::new(&d.tree, &d.zero_depth, &col, maxz, spec.sigma());
        let w = row_weights(d, |i| d.last[i] <= sp, true);
        let g = opts.fsum_group.unwrap_or_else(|| default_fsum_group(n));
        let fsum = FSum::new(&d.tree, &w, g);
        let delta = opts.sample_rate.resolve(n, spec.sigma());
        PIndex {
            spec: spec.clone(),
            n,
            bwt,
            tree: d.tree.clone(),
            lead_zero: RankSelectBits::from_bools(&d.lead_zero),
            pcount: UnaryCounts::new(d.pcount.iter().map(|&c| c as usize)),
            zeros,
            fsum,
            samples: Samples::new(&d.sa, delta),
            mode: ZeroMode::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn spec(&self) -> &AlphabetSpec {
        &self.spec
    }
    pub fn tree(&self) -> &NavTree {
        &self.tree
    }
    pub fn delta(&self) -> usize {
        self.samples.delta()
    }
    pub fn zero_mode(&self) -> ZeroMode {
        self.mode
    }
    pub fn set_zero_mode(&mut self, mode: ZeroMode) {
        self.mode = mode;
    }
    pub fn fsum_group(&self) -> usize {
        self.fsum.g()
    }
    pub fn zero_index(&self) -> &ZeroNodeIndex {
        &self.zeros
    }

    fn column(&self) -> Column<'_> {
        Column { wt: &self.bwt, shift: 0, signed: false }
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(())
    }

    /// Last-column value of row `i`.
    pub fn pbwt(&self, i: usize) -> Result<u32> {
        self.bwt.access(i)
    }

    pub fn pbwt_column(&self) -> Vec<u32> {
        (0..self.n).map(|i| self.bwt.access_0(i)).collect()
    }

    fn p_row(&self, i: usize) -> Result<u32> {
        let c = self.pbwt(i)?;
        if c > self.spec.sigma_p() {
            return Err(Error::NotPPreceded(i));
        }
        Ok(c)
    }

    pub fn zero_node_compact(&self, i: usize) -> Result<Node> {
        let c = self.p_row(i)?;
        Ok(self.zeros.compact(&self.tree, self.tree.leaf_select(i), c))
    }

    pub fn zero_node_succinct(&self, i: usize) -> Result<Node> {
        let c = self.p_row(i)?;
        Ok(self.zeros.succinct(&self.tree, &self.column(), self.tree.leaf_select(i), c))
    }

    pub fn lowest_marked_zero_ancestor(&self, i: usize) -> Result<Node> {
        let c = self.p_row(i)?;
        Ok(self.zeros.lowest_marked_below(&self.tree, self.tree.leaf_select(i), c))
    }

    pub fn zero_node(&self, i: usize) -> Result<Node> {
        match self.mode {
            ZeroMode::Compact => self.zero_node_compact(i),
            ZeroMode::Succinct => self.zero_node_succinct(i),
        }
    }

    pub fn f_sum(&self, x: Node) -> usize {
        self.fsum.sum(&self.tree, x)
    }

    /// Weight the prefix sums assign to the node at preorder index `k`.
    pub fn f_weight(&self, k: usize) -> usize {
        self.fsum.weight(k)
    }

    pub fn leaf_lead_zero(&self, i: usize) -> bool {
        self.lead_zero.get(i - 1)
    }

    pub fn pcount(&self, x: Node) -> usize {
        self.pcount.get(self.tree.pre_index(x) + 1)
    }

    pub fn plf(&self, i: usize) -> Result<usize> {
        self.check_row(i)?;
        Ok(self.lf(i))
    }

    pub(crate) fn lf(&self, i: usize) -> usize {
        let n = self.n;
        let sp = self.spec.sigma_p();
        let c = self.bwt.access_0(i - 1);
        let rc = |a: usize, b: usize, x: u32, y: u32| self.bwt.range_count(a, b, x, y);
        if c > sp {
            return 1 + rc(1, n, 1, c - 1) + rc(1, i - 1, c, c);
        }
        let t = &self.tree;
        let z = self.zero_node(i).unwrap();
        let (lz, rz) = t.leaf_range(z);
        let mut r = self.f_sum(z) + rc(lz, rz, c + 1, sp) + rc(lz, i, c, c);
        if self.leaf_lead_zero(i) {
            let v = t.parent(z).unwrap();
            let u = t.child(v, self.pcount(v)).unwrap();
            r += rc(rz + 1, t.rmost_leaf(u), c, sp);
        }
        r
    }

    /// Suffix range of rows whose encoding starts with `prev(p)`; `None` if empty.
    pub fn backward_search(&self, p: &[u32]) -> Result<Option<(usize, usize)>> {
        self.check_pattern(p)?;
        let n = self.n;
        let sp_max = self.spec.sigma_p();
        let rc = |a: usize, b: usize, x: u32, y: u32| self.bwt.range_count(a, b, x, y);
        let (mut sp, mut ep) = (1usize, n);
        let mut scan = PatternScan::new(sp_max as usize);
        for j in (0..p.len()).rev() {
            let c = p[j];
            if c > sp_max {
                let before = rc(1, n, 1, c - 1);
                sp = 1 + before + rc(1, sp - 1, c, c);
                ep = before + rc(1, ep, c, c);
            } else {
                match scan.rank_of(c).map(|(d, _)| d) {
                    None => {
                        let d = scan.distinct() as u32;
                        let count = rc(sp, ep, d + 1, sp_max);
                        let u = self.tree.lca(self.tree.leaf_select(sp), self.tree.leaf_select(ep));
                        sp = 1 + self.f_sum(u);
                        ep = sp + count - 1;
                    }
                    Some(d) => {
                        let d = d as u32;
                        let count = rc(sp, ep, d, d);
                        if count == 0 {
                            return Ok(None);
                        }
                        let q = self.bwt.select(self.bwt.rank_0(sp - 1, d) + 1, d)?;
                        sp = self.lf(q);
                        ep = sp + count - 1;
                    }
                }
                scan.push(c, c, j);
            }
            if sp > ep {
                return Ok(None);
            }
        }
        Ok(Some((sp, ep)))
    }

    fn check_pattern(&self, p: &[u32]) -> Result<()> {
        for (i, &c) in p.iter().enumerate() {
            if c == 0 || c > self.spec.sigma() {
                return Err(Error::UnknownSymbol(i + 1));
            }
        }
        Ok(())
    }

    pub fn count(&self, p: &[u32]) -> Result<usize> {
        Ok(self.backward_search(p)?.map_or(0, |(s, e)| e - s + 1))
    }

    /// Sorted 1-based start positions of the p-matches of `p`.
    pub fn locate(&self, p: &[u32]) -> Result<Vec<usize>> {
        match self.backward_search(p)? {
            None => Ok(Vec::new()),
            Some(r) => self.locate_range(r),
        }
    }

    pub fn locate_range(&self, (sp, ep): (usize, usize)) -> Result<Vec<usize>> {
        let mut out = (sp..=ep).map(|i| self.psa(i)).collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    }

    pub fn psa(&self, i: usize) -> Result<usize> {
        self.samples.sa(i, |r| self.lf(r))
    }

    pub fn ipsa(&self, j: usize) -> Result<usize> {
        self.samples.isa(j, |r| self.lf(r))
    }

    /// `prev(T[x..=y])`, recovered from the last column alone.
    pub fn extract(&self, x: usize, y: usize) -> Result<PrevString> {
        if x == 0 || x > y || y > self.n {
            return Err(Error::RangeOutOfBounds(x, y));
        }
        let sp = self.spec.sigma_p();
        let mut row = self.ipsa(if y == self.n { 1 } else { y + 1 })?;
        let mut out = vec![0u32; y - x + 1];
        let mut seen = PatternScan::new(sp as usize);
        let mut fresh = 0u32;
        for k in (0..out.len()).rev() {
            let c = self.bwt.access_0(row - 1);
            out[k] = if c > sp {
                c
            } else {
                let d = c as usize;
                let ch = if d <= seen.distinct() {
                    seen.class_at_rank(d)
                } else {
                    fresh += 1;
                    fresh
                };
                seen.push(ch, ch, k);
                ch
            };
            row = self.lf(row);
        }
        Ok(prev_encode(&out, sp))
    }

    /// Named sizes of the components, in bits.
    pub fn space(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("wt_pbwt", self.bwt.size_in_bits()),
            ("tree", self.tree.size_in_bits()),
            ("leaf_lead", self.lead_zero.size_in_bits()),
            ("pcount", self.pcount.size_in_bits()),
            ("zero_node_succinct", self.zeros.succinct_bits()),
            ("zero_node_compact", self.zeros.compact_bits()),
            ("fsum", self.fsum.size_in_bits()),
            ("samples", self.samples.size_in_bits()),
        ]
    }

    /// Bits of the configuration that uses the succinct zero-node search.
    pub fn succinct_total_bits(&self) -> usize {
        self.space().iter().filter(|(k, _)| *k != "zero_node_compact").map(|(_, v)| v).sum()
    }
}

impl Serial for PIndex {
    fn write(&self, w: &mut Writer) {
        self.spec.write(w);
        w.usize(self.n);
        self.bwt.write(w);
        self.tree.write(w);
        self.lead_zero.write(w);
        self.pcount.write(w);
        self.zeros.write(w);
        self.fsum.write(w);
        self.samples.write(w);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let spec = AlphabetSpec::read(r)?;
        let n = r.usize()?;
        let bwt = WaveletTree::read(r)?;
        let tree = NavTree::read(r)?;
        let lead_zero = RankSelectBits::read(r)?;
        let pcount = UnaryCounts::read(r)?;
        let zeros = ZeroNodeIndex::read(r)?;
        let fsum = FSum::read(r)?;
        let samples = Samples::read(r)?;
        check(
            bwt.len() == n && tree.leaf_count() == n && lead_zero.len() == n && pcount.len() == tree.node_count(),
            "index layout",
        )?;
        Ok(PIndex { spec, n, bwt, tree, lead_zero, pcount, zeros, fsum, samples, mode: ZeroMode::default() })
    }
}
