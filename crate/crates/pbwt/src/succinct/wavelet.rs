//! Balanced wavelet tree over values `1..=A`, stored level by level.
//!
//! Public queries are 1-based as in the usual rank/select notation; the
//! `*_0` helpers work on 0-based half-open ranges and skip argument checks.

use super::bits::{BitBuilder, RankSelectBits};
use crate::error::{Error, Result};
use crate::serial::{check, Reader, Serial, Writer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletTree {
    n: usize,
    alpha: u32,
    nlev: u32,
    levels: Vec<RankSelectBits>,
}

impl WaveletTree {
    /// Builds over `vals`, each in `1..=alpha`.
    pub fn new(vals: &[u32], alpha: u32) -> Self {
        let alpha = alpha.max(1);
        let nlev = (32 - (alpha - 1).leading_zeros()).max(1);
        let mut cur: Vec<u32> = vals
            .iter()
            .map(|&v| {
                assert!(v >= 1 && v <= alpha, "wavelet value {v} outside 1..={alpha}");
                v - 1
            })
            .collect();
        let mut levels = Vec::with_capacity(nlev as usize);
        for lev in 0..nlev {
            let shift = nlev - 1 - lev;
            let mut b = BitBuilder::with_len(cur.len());
            for (i, &v) in cur.iter().enumerate() {
                if v >> shift & 1 == 1 {
                    b.set(i, true);
                }
            }
            levels.push(b.finish());
            // stable regroup by the prefix seen so far
            cur.sort_by_key(|&v| v >> shift);
        }
        WaveletTree { n: vals.len(), alpha, nlev, levels }
    }

    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn alphabet(&self) -> u32 {
        self.alpha
    }

    pub fn size_in_bits(&self) -> usize {
        self.levels.iter().map(|l| l.size_in_bits()).sum::<usize>() + 128
    }

    #[inline]
    fn bit_of(&self, v: u32, lev: u32) -> u32 {
        v >> (self.nlev - 1 - lev) & 1
    }

    /// `A[i]`, 1-based.
    pub fn access(&self, i: usize) -> Result<u32> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(self.access_0(i - 1))
    }

    pub fn access_0(&self, mut p: usize) -> u32 {
        let (mut s, mut e) = (0usize, self.n);
        let mut v = 0u32;
        for lev in 0..self.nlev as usize {
            let bv = &self.levels[lev];
            let z = bv.rank0(e) - bv.rank0(s);
            if bv.get(p) {
                v = v << 1 | 1;
                p = s + z + bv.rank1(p) - bv.rank1(s);
                s += z;
            } else {
                v <<= 1;
                p = s + bv.rank0(p) - bv.rank0(s);
                e = s + z;
            }
        }
        v + 1
    }

    /// Occurrences of `x` in `A[1..=i]`.
    pub fn rank(&self, i: usize, x: u32) -> Result<usize> {
        if i > self.n {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(self.rank_0(i, x))
    }

    /// Occurrences of `x` among the first `i` entries.
    pub fn rank_0(&self, i: usize, x: u32) -> usize {
        if x == 0 || x > self.alpha {
            return 0;
        }
        self.range_count_0(0, i, x, x)
    }

    /// Entries in `[l, r)` with value `< x` (any `x`).
    pub fn count_less_0(&self, mut l: usize, mut r: usize, x: u32) -> usize {
        if l >= r || x <= 1 {
            return 0;
        }
        if x > self.alpha {
            return r - l;
        }
        let t = x - 1;
        let (mut s, mut e) = (0usize, self.n);
        let mut acc = 0;
        for lev in 0..self.nlev {
            let bv = &self.levels[lev as usize];
            let (r0s, r0e, r0l, r0r) = (bv.rank0(s), bv.rank0(e), bv.rank0(l), bv.rank0(r));
            let z = r0e - r0s;
            if self.bit_of(t, lev) == 1 {
                acc += r0r - r0l;
                l = s + z + (l - s) - (r0l - r0s);
                r = s + z + (r - s) - (r0r - r0s);
                s += z;
            } else {
                l = s + r0l - r0s;
                r = s + r0r - r0s;
                e = s + z;
            }
            if l >= r {
                break;
            }
        }
        acc
    }

    /// Entries in `[l, r)` with `x <= value <= y`.
    #[inline]
    pub fn range_count_0(&self, l: usize, r: usize, x: u32, y: u32) -> usize {
        if x > y || l >= r {
            return 0;
        }
        self.count_less_0(l, r, y.saturating_add(1)) - self.count_less_0(l, r, x)
    }

    /// `|{k in [i, j] : x <= A[k] <= y}|`, 1-based, empty when `i > j`.
    pub fn range_count(&self, i: usize, j: usize, x: u32, y: u32) -> usize {
        let j = j.min(self.n);
        if i == 0 || i > j {
            return 0;
        }
        self.range_count_0(i - 1, j, x, y)
    }

    /// Position of the `k`-th occurrence of `x`.
    pub fn select(&self, k: usize, x: u32) -> Result<usize> {
        self.select_0(k, x).map(|p| p + 1).ok_or(Error::NotEnoughOccurrences(k))
    }

    /// 0-based position of the `k`-th occurrence of `x`.
    pub fn select_0(&self, k: usize, x: u32) -> Option<usize> {
        if k == 0 || x == 0 || x > self.alpha {
            return None;
        }
        let t = x - 1;
        let mut starts = [(0usize, 0usize); 33];
        let (mut s, mut e) = (0usize, self.n);
        for lev in 0..self.nlev {
            let bv = &self.levels[lev as usize];
            let z = bv.rank0(e) - bv.rank0(s);
            starts[lev as usize] = (s, z);
            if self.bit_of(t, lev) == 1 {
                s += z;
            } else {
                e = s + z;
            }
        }
        if e - s < k {
            return None;
        }
        let mut p = s + k - 1;
        for lev in (0..self.nlev).rev() {
            p = self.lift(lev, starts[lev as usize], self.bit_of(t, lev), p);
        }
        Some(p)
    }

    /// Maps position `p` in child `bit` of the node starting at `s` (with `z`
    /// zeros) on level `lev` back to the node's own coordinates.
    #[inline]
    fn lift(&self, lev: u32, (s, z): (usize, usize), bit: u32, p: usize) -> usize {
        let bv = &self.levels[lev as usize];
        if bit == 0 {
            bv.select0(bv.rank0(s) + (p - s) + 1).unwrap()
        } else {
            bv.select1(bv.rank1(s) + (p - s - z) + 1).unwrap()
        }
    }

    /// `max{j < i : A[j] < x}`, 1-based; `None` when no such `j`.
    pub fn predecessor(&self, i: usize, x: u32) -> Option<usize> {
        let i = i.min(self.n + 1);
        if i <= 1 {
            return None;
        }
        self.predecessor_0(i - 1, x).map(|p| p + 1)
    }

    /// Largest 0-based `j < r` with `A[j] < x`.
    pub fn predecessor_0(&self, r: usize, x: u32) -> Option<usize> {
        if r == 0 || x <= 1 {
            return None;
        }
        if x > self.alpha {
            return Some(r - 1);
        }
        let t = x - 1;
        let mut path = [(0usize, 0usize); 33];
        let mut best: Option<usize> = None;
        let (mut s, mut e, mut pr) = (0usize, self.n, r);
        for lev in 0..self.nlev {
            let bv = &self.levels[lev as usize];
            let (r0s, r0p) = (bv.rank0(s), bv.rank0(pr));
            let z = bv.rank0(e) - r0s;
            path[lev as usize] = (s, z);
            if self.bit_of(t, lev) == 1 {
                // whole left child is below the threshold
                let pl = s + r0p - r0s;
                if pl > s {
                    let mut p = pl - 1;
                    p = self.lift(lev, (s, z), 0, p);
                    for up in (0..lev).rev() {
                        p = self.lift(up, path[up as usize], self.bit_of(t, up), p);
                    }
                    best = best.max(Some(p));
                }
                pr = s + z + (pr - s) - (r0p - r0s);
                s += z;
            } else {
                pr = s + r0p - r0s;
                e = s + z;
            }
            if pr == s {
                break;
            }
        }
        best
    }

    /// `k`-th smallest (1-based) value in the 0-based range `[l, r)`.
    pub fn quantile_0(&self, mut l: usize, mut r: usize, mut k: usize) -> Option<u32> {
        if k == 0 || k > r.saturating_sub(l) {
            return None;
        }
        let (mut s, mut e) = (0usize, self.n);
        let mut v = 0u32;
        for lev in 0..self.nlev as usize {
            let bv = &self.levels[lev];
            let (r0s, r0l, r0r) = (bv.rank0(s), bv.rank0(l), bv.rank0(r));
            let z = bv.rank0(e) - r0s;
            let zeros = r0r - r0l;
            if k <= zeros {
                v <<= 1;
                l = s + r0l - r0s;
                r = s + r0r - r0s;
                e = s + z;
            } else {
                k -= zeros;
                v = v << 1 | 1;
                l = s + z + (l - s) - (r0l - r0s);
                r = s + z + (r - s) - (r0r - r0s);
                s += z;
            }
        }
        Some(v + 1)
    }

    /// `k`-th smallest value greater than `x` in the 0-based range `[l, r)`.
    pub fn range_next_val_0(&self, l: usize, r: usize, x: u32, k: usize) -> Option<u32> {
        let below = self.count_less_0(l, r, x.saturating_add(1));
        self.quantile_0(l, r, below + k)
    }

    /// `k`-th largest value smaller than `x` in the 0-based range `[l, r)`.
    pub fn range_prev_val_0(&self, l: usize, r: usize, x: u32, k: usize) -> Option<u32> {
        let below = self.count_less_0(l, r, x);
        if k == 0 || k > below {
            return None;
        }
        self.quantile_0(l, r, below - k + 1)
    }

    /// `k`-th smallest value in `A[i..=j]` that is greater than `x`.
    pub fn range_next_val(&self, i: usize, j: usize, x: u32, k: usize) -> Result<u32> {
        if i == 0 || j > self.n || i > j {
            return Err(Error::NotEnoughValues(k));
        }
        self.range_next_val_0(i - 1, j, x, k).ok_or(Error::NotEnoughValues(k))
    }

    /// `k`-th largest value in `A[i..=j]` that is smaller than `x`.
    pub fn range_prev_val(&self, i: usize, j: usize, x: u32, k: usize) -> Result<u32> {
        if i == 0 || j > self.n || i > j {
            return Err(Error::NotEnoughValues(k));
        }
        self.range_prev_val_0(i - 1, j, x, k).ok_or(Error::NotEnoughValues(k))
    }
}

impl Serial for WaveletTree {
    fn write(&self, w: &mut Writer) {
        w.usize(self.n);
        w.u32(self.alpha);
        w.u32(self.nlev);
        for l in &self.levels {
            l.write(w);
        }
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let n = r.usize()?;
        let alpha = r.u32()?;
        let nlev = r.u32()?;
        check(alpha >= 1 && nlev == (32 - (alpha - 1).leading_zeros()).max(1), "wavelet shape")?;
        let levels = (0..nlev).map(|_| RankSelectBits::read(r)).collect::<Result<Vec<_>>>()?;
        check(levels.iter().all(|l| l.len() == n), "wavelet level length")?;
        Ok(WaveletTree { n, alpha, nlev, levels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let w = WaveletTree::new(&[3, 1, 2], 3);
        assert_eq!(w.access(2), Ok(1));
        assert_eq!(w.access(4), Err(Error::IndexOutOfRange(4)));
        let w = WaveletTree::new(&[2, 2, 1, 2], 2);
        assert_eq!(w.rank(0, 2), Ok(0));
        assert_eq!(w.rank(3, 2), Ok(2));
        let w = WaveletTree::new(&[2, 1, 2], 2);
        assert_eq!(w.select(2, 2), Ok(3));
        let w = WaveletTree::new(&[2, 2], 3);
        assert_eq!(w.select(1, 1), Err(Error::NotEnoughOccurrences(1)));
        let w = WaveletTree::new(&[5, 1, 9], 9);
        assert_eq!(w.predecessor(3, 2), Some(2));
        assert_eq!(w.predecessor(1, 9), None);
        assert_eq!(w.range_count(2, 1, 1, 9), 0);
        let w = WaveletTree::new(&[4, 2, 7, 2], 7);
        assert_eq!(w.range_next_val(1, 4, 2, 1), Ok(4));
        assert_eq!(w.range_next_val(1, 4, 0, 1), Ok(2));
        let w = WaveletTree::new(&[4, 2, 7], 7);
        assert_eq!(w.range_prev_val(1, 3, 5, 1), Ok(4));
        assert_eq!(w.range_prev_val(1, 3, 8, 1), Ok(7));
    }

    #[test]
    fn golden_pbwt_counts() {
        let pbwt = [7, 3, 5, 2, 3, 6, 5, 8, 4, 4, 2, 3];
        let w = WaveletTree::new(&pbwt, 8);
        assert_eq!(w.range_count(1, 12, 1, 4), 7);
        for (i, &v) in pbwt.iter().enumerate() {
            assert_eq!(w.access(i + 1), Ok(v));
        }
    }
}
