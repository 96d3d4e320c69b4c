//! Structural-matching index over the complement-aware encoding.
//!
//! The last column keeps, for each row preceded by a parameterized symbol,
//! the number of distinct classes up to the nearest occurrence of the symbol
//! or its complement, negated when the complement comes first. Values are
//! stored shifted so a single wavelet tree answers signed range counts.

use crate::alphabet::{AlphabetSpec, Mode};
use crate::error::{Error, Result};
use crate::pindex::{default_fsum_group, row_weights, BuildOptions, FSum, PatternScan, Samples, ZeroMode, ZeroNodeIndex};
use crate::pindex::zeronode::Column;
use crate::pst::{Encoding, SuffixData};
use crate::serial::{check, Reader, Serial, Writer};
use crate::succinct::{BitBuilder, RankSelectBits, UnaryCounts, WaveletTree};
use crate::topology::{NavTree, Node};

/// The same tree with every child list reversed.
pub fn mirror(tree: &NavTree) -> NavTree {
    let bp = tree.parens();
    let mut b = BitBuilder::with_len(bp.len());
    for i in 0..bp.len() {
        b.set(bp.len() - 1 - i, !bp.get(i));
    }
    NavTree::from_parens(b)
}

/// Preorder index in the mirror of the node at preorder index `k`.
fn mirror_pre(tree: &NavTree, u: Node) -> usize {
    tree.depth(u) + tree.node_count() - tree.pre_index(u) - tree.subtree_size(u)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SIndex {
    spec: AlphabetSpec,
    n: usize,
    /// Class of each parameterized symbol: the smaller of it and its complement.
    class: Vec<u32>,
    bwt: WaveletTree,
    tree: NavTree,
    mirror: NavTree,
    lead_zero: RankSelectBits,
    pcount: UnaryCounts,
    zeros: ZeroNodeIndex,
    fs_plus: FSum,
    fs_minus: FSum,
    samples: Samples,
    mode: ZeroMode,
}

fn classes(spec: &AlphabetSpec) -> Vec<u32> {
    let comp = spec.complement_table();
    (0..=spec.sigma_p()).map(|c| if c > 0 && comp[c as usize] != 0 { c.min(comp[c as usize]) } else { c }).collect()
}

impl SIndex {
    pub fn build(text: &[u32], spec: &AlphabetSpec, opts: &BuildOptions) -> Result<Self> {
        let d = SuffixData::build(text, spec, Encoding::Compl)?;
        let n = d.len();
        let sp = spec.sigma_p();
        let shift = sp + 1;
        let vals: Vec<u32> = d.bwt.iter().map(|&v| (v + shift as i64) as u32).collect();
        let bwt = WaveletTree::new(&vals, spec.sigma() + shift);
        let col = Column { wt: &bwt, shift, signed: true };
        let maxz = d.zero_depth.iter().copied().max().unwrap_or(0);
        let zeros = ZeroNodeIndex::new(&d.tree, &d.zero_depth, &col, maxz, spec.sigma());
        let g = opts.fsum_group.unwrap_or_else(|| default_fsum_group(n));
        let is_p = |i: usize| d.last[i] <= sp;
        let wp = row_weights(&d, |i| is_p(i) && d.bwt[i] > 0, true);
        let wn = row_weights(&d, |i| is_p(i) && d.bwt[i] < 0, false);
        let mirror = mirror(&d.tree);
        let mut wm = vec![0usize; wn.len()];
        for (k, &w) in wn.iter().enumerate() {
            wm[mirror_pre(&d.tree, d.tree.node_at(k))] = w;
        }
        let fs_plus = FSum::new(&d.tree, &wp, g);
        let fs_minus = FSum::new(&mirror, &wm, g);
        let delta = opts.sample_rate.resolve(n, spec.sigma());
        Ok(SIndex {
            spec: spec.clone(),
            n,
            class: classes(spec),
            bwt,
            tree: d.tree.clone(),
            mirror,
            lead_zero: RankSelectBits::from_bools(&d.lead_zero),
            pcount: UnaryCounts::new(d.pcount.iter().map(|&c| c as usize)),
            zeros,
            fs_plus,
            fs_minus,
            samples: Samples::new(&d.sa, delta),
            mode: ZeroMode::default(),
        })
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
    pub fn zero_mode(&self) -> ZeroMode {
        self.mode
    }
    pub fn set_zero_mode(&mut self, mode: ZeroMode) {
        self.mode = mode;
    }
    pub fn delta(&self) -> usize {
        self.samples.delta()
    }

    fn shift(&self) -> i64 {
        self.spec.sigma_p() as i64 + 1
    }

    fn column(&self) -> Column<'_> {
        Column { wt: &self.bwt, shift: self.shift() as u32, signed: true }
    }

    /// Rows in `[a, b]` whose signed value lies in `[x, y]`.
    fn rc(&self, a: usize, b: usize, x: i64, y: i64) -> usize {
        if x > y {
            return 0;
        }
        let s = self.shift();
        self.bwt.range_count(a, b, (x + s).max(1) as u32, (y + s) as u32)
    }

    fn neg(&self, a: usize, b: usize) -> usize {
        self.rc(a, b, -(self.spec.sigma_p() as i64), -1)
    }

    /// Signed last-column value of row `i`; static symbols keep their code.
    pub fn sbwt(&self, i: usize) -> Result<i64> {
        Ok(self.bwt.access(i)? as i64 - self.shift())
    }

    pub fn sbwt_column(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.bwt.access_0(i) as i64 - self.shift()).collect()
    }

    fn p_row(&self, i: usize) -> Result<i64> {
        let c = self.sbwt(i)?;
        if c > self.spec.sigma_p() as i64 {
            return Err(Error::NotPPreceded(i));
        }
        Ok(c)
    }

    pub fn zero_node_compact(&self, i: usize) -> Result<Node> {
        let c = self.p_row(i)?;
        Ok(self.zeros.compact(&self.tree, self.tree.leaf_select(i), c.unsigned_abs() as u32))
    }

    pub fn zero_node_succinct(&self, i: usize) -> Result<Node> {
        let c = self.p_row(i)?;
        Ok(self.zeros.succinct(&self.tree, &self.column(), self.tree.leaf_select(i), c.unsigned_abs() as u32))
    }

    pub fn zero_node(&self, i: usize) -> Result<Node> {
        match self.mode {
            ZeroMode::Compact => self.zero_node_compact(i),
            ZeroMode::Succinct => self.zero_node_succinct(i),
        }
    }

    /// Positive rows counted before `x` without being below it.
    pub fn fs_plus(&self, x: Node) -> usize {
        self.fs_plus.sum(&self.tree, x)
    }

    /// Negative rows counted at nodes whose leaves all come after `x`'s.
    pub fn fs_minus_rev(&self, x: Node) -> usize {
        let k = mirror_pre(&self.tree, x);
        self.fs_minus.sum(&self.mirror, self.mirror.node_at(k))
    }

    fn pcount(&self, x: Node) -> usize {
        self.pcount.get(self.tree.pre_index(x) + 1)
    }

    pub fn slf(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(self.lf(i))
    }

    fn lf(&self, i: usize) -> usize {
        let n = self.n;
        let sp = self.spec.sigma_p() as i64;
        let c = self.bwt.access_0(i - 1) as i64 - self.shift();
        if c > sp {
            return 1 + self.rc(1, n, -sp, c - 1) + self.rc(1, i - 1, c, c);
        }
        let t = &self.tree;
        let z = self.zero_node(i).unwrap();
        let (lz, rz) = t.leaf_range(z);
        let lead = self.lead_zero.get(i - 1);
        // rows sorting below z's range
        let inside = if c > 0 {
            self.rc(lz, rz, c + 1, sp) + self.rc(lz, i, c, c) + self.neg(lz, rz)
        } else {
            self.rc(lz, rz, c + 1, -1) + self.rc(lz, i, c, c)
        };
        if !lead {
            let before = self.fs_plus(z) + self.neg(1, lz - 1);
            let after = self.neg(rz + 1, n) - self.fs_minus_rev(z);
            return before + after + inside;
        }
        let v = t.parent(z).unwrap();
        let (lv, rv) = t.leaf_range(v);
        let before = if c < 0 {
            self.fs_plus(v) + self.neg(1, lv - 1) + self.rc(lv, lz - 1, c + 1, -1)
        } else {
            self.fs_plus(z) + self.neg(1, lz - 1)
        };
        let mut after = self.neg(rv + 1, n) - self.fs_minus_rev(v);
        if c > 0 {
            let ru = t.rmost_leaf(t.child(v, self.pcount(v)).unwrap());
            after += self.rc(rz + 1, ru, c, sp) + self.neg(rz + 1, ru) + self.rc(ru + 1, rv, -(c - 1), -1);
        } else {
            after += self.rc(rz + 1, rv, c + 1, -1);
        }
        before + after + inside
    }

    fn check_pattern(&self, p: &[u32]) -> Result<()> {
        for (i, &c) in p.iter().enumerate() {
            if c == 0 || c > self.spec.sigma() {
                return Err(Error::UnknownSymbol(i + 1));
            }
        }
        Ok(())
    }

    /// Range of rows whose encoding starts with the encoding of `p`.
    pub fn s_backward_search(&self, p: &[u32]) -> Result<Option<(usize, usize)>> {
        self.check_pattern(p)?;
        let n = self.n;
        let sp_max = self.spec.sigma_p();
        let spi = sp_max as i64;
        let (mut sp, mut ep) = (1usize, n);
        let mut scan = PatternScan::new(sp_max as usize);
        for j in (0..p.len()).rev() {
            let c = p[j];
            if c > sp_max {
                let c = c as i64;
                let before = self.rc(1, n, -spi, c - 1);
                sp = 1 + before + self.rc(1, sp - 1, c, c);
                ep = before + self.rc(1, ep, c, c);
            } else {
                let cl = self.class[c as usize];
                match scan.rank_of(cl) {
                    None => {
                        let d = scan.distinct() as i64;
                        let count = self.rc(sp, ep, d + 1, spi) + self.rc(sp, ep, -spi, -d - 1);
                        let u = self.tree.lca(self.tree.leaf_select(sp), self.tree.leaf_select(ep));
                        let start = 1 + self.fs_plus(u) + self.rc(sp, ep, -d, -1) + self.neg(1, sp - 1)
                            + self.neg(ep + 1, n)
                            - self.fs_minus_rev(u);
                        sp = start;
                        ep = start + count - 1;
                    }
                    Some((d, first)) => {
                        let val = if first == c { d as i64 } else { -(d as i64) };
                        let count = self.rc(sp, ep, val, val);
                        if count == 0 {
                            return Ok(None);
                        }
                        let stored = (val + self.shift()) as u32;
                        let q = self.bwt.select(self.bwt.rank_0(sp - 1, stored) + 1, stored)?;
                        sp = self.lf(q);
                        ep = sp + count - 1;
                    }
                }
                scan.push(cl, c, j);
            }
            if sp > ep {
                return Ok(None);
            }
        }
        Ok(Some((sp, ep)))
    }

    pub fn s_count(&self, p: &[u32]) -> Result<usize> {
        Ok(self.s_backward_search(p)?.map_or(0, |(s, e)| e - s + 1))
    }

    /// Sorted 1-based start positions of the structural matches of `p`.
    pub fn s_locate(&self, p: &[u32]) -> Result<Vec<usize>> {
        match self.s_backward_search(p)? {
            None => Ok(Vec::new()),
            Some(r) => self.s_locate_range(r),
        }
    }

    pub fn s_locate_range(&self, (sp, ep): (usize, usize)) -> Result<Vec<usize>> {
        let mut out = (sp..=ep).map(|i| self.ssa(i)).collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    }

    /// Convenience wrapper over [`s_locate`](Self::s_locate) for raw pattern text.
    pub fn s_locate_str(&self, p: &str) -> Result<Vec<usize>> {
        self.s_locate(&self.spec.encode_text(p, Mode::Query)?)
    }

    pub fn ssa(&self, i: usize) -> Result<usize> {
        self.samples.sa(i, |r| self.lf(r))
    }

    pub fn issa(&self, j: usize) -> Result<usize> {
        self.samples.isa(j, |r| self.lf(r))
    }

    pub fn space(&self) -> Vec<(&'static str, usize)> {
        vec![
            ("wt_sbwt", self.bwt.size_in_bits()),
            ("tree", self.tree.size_in_bits()),
            ("mirror_tree", self.mirror.size_in_bits()),
            ("leaf_lead", self.lead_zero.size_in_bits()),
            ("pcount", self.pcount.size_in_bits()),
            ("zero_node_succinct", self.zeros.succinct_bits()),
            ("zero_node_compact", self.zeros.compact_bits()),
            ("fs_plus", self.fs_plus.size_in_bits()),
            ("fs_minus_rev", self.fs_minus.size_in_bits()),
            ("samples", self.samples.size_in_bits()),
        ]
    }

    /// Bits used when zero nodes are answered by the succinct scheme.
    pub fn succinct_total_bits(&self) -> usize {
        self.space().iter().filter(|(k, _)| *k != "zero_node_compact").map(|(_, v)| v).sum()
    }
}

impl Serial for SIndex {
    fn write(&self, w: &mut Writer) {
        self.spec.write(w);
        w.usize(self.n);
        self.bwt.write(w);
        self.tree.write(w);
        self.lead_zero.write(w);
        self.pcount.write(w);
        self.zeros.write(w);
        self.fs_plus.write(w);
        self.fs_minus.write(w);
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
        let fs_plus = FSum::read(r)?;
        let fs_minus = FSum::read(r)?;
        let samples = Samples::read(r)?;
        check(
            bwt.len() == n
                && bwt.alphabet() == spec.sigma() + spec.sigma_p() + 1
                && tree.leaf_count() == n
                && lead_zero.len() == n
                && pcount.len() == tree.node_count(),
            "structural index layout",
        )?;
        let mirror = mirror(&tree);
        Ok(SIndex {
            class: classes(&spec),
            spec,
            n,
            bwt,
            tree,
            mirror,
            lead_zero,
            pcount,
            zeros,
            fs_plus,
            fs_minus,
            samples,
            mode: ZeroMode::default(),
        })
    }
}
