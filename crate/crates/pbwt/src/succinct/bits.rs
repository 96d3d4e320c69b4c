//! Plain bit-vectors with constant-time rank and logarithmic select.
//!
//! Positions are 0-based. `rank1(i)` counts ones in `[0, i)`; `select1(k)`
//! returns the position of the `k`-th one (`k >= 1`).

use crate::error::Result;
use crate::serial::{check, Reader, Serial, Writer};

/// Growable bit-vector used while building.
#[derive(Debug, Clone, Default)]
pub struct BitBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitBuilder {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn with_len(len: usize) -> Self {
        BitBuilder { words: vec![0; len.div_ceil(64)], len }
    }
    pub fn push(&mut self, b: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if b {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }
    pub fn push_run(&mut self, b: bool, count: usize) {
        for _ in 0..count {
            self.push(b);
        }
    }
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn finish(self) -> RankSelectBits {
        RankSelectBits::new(self.words, self.len)
    }
}

impl FromIterator<bool> for BitBuilder {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitBuilder::new();
        for x in iter {
            b.push(x);
        }
        b
    }
}

/// Bit-vector with a two-level rank directory: one absolute count per
/// 512-bit superblock and seven packed 9-bit relative counts for its words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSelectBits {
    words: Vec<u64>,
    len: usize,
    counts: Vec<u64>,
    ones: usize,
}

impl RankSelectBits {
    pub fn new(mut words: Vec<u64>, len: usize) -> Self {
        words.truncate(len.div_ceil(64));
        words.resize(len.div_ceil(64), 0);
        if len % 64 != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let nsup = words.len() / 8 + 1;
        let mut counts = vec![0u64; 2 * nsup];
        let mut total = 0u64;
        for s in 0..nsup {
            counts[2 * s] = total;
            let mut rel = 0u64;
            let mut packed = 0u64;
            for k in 0..8 {
                let w = 8 * s + k;
                if k > 0 {
                    packed |= rel << (9 * (k - 1));
                }
                if w < words.len() {
                    rel += words[w].count_ones() as u64;
                }
            }
            counts[2 * s + 1] = packed;
            total += rel;
        }
        RankSelectBits { words, len, counts, ones: total as usize }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        bits.iter().copied().collect::<BitBuilder>().finish()
    }

    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn count_ones(&self) -> usize {
        self.ones
    }
    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Raw 64-bit word `w` (bit `j` is position `64w + j`).
    #[inline]
    pub fn word(&self, w: usize) -> u64 {
        self.words.get(w).copied().unwrap_or(0)
    }

    /// Ones in `[0, i)`, `i <= len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let w = i / 64;
        let s = w / 8;
        let k = w % 8;
        let mut r = self.counts[2 * s];
        if k > 0 {
            r += (self.counts[2 * s + 1] >> (9 * (k - 1))) & 511;
        }
        let b = i % 64;
        if b != 0 {
            r += (self.words[w] & ((1u64 << b) - 1)).count_ones() as u64;
        }
        r as usize
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Position of the `k`-th one, `1 <= k <= count_ones()`.
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        let k = k as u64;
        let nsup = self.counts.len() / 2;
        // last superblock with count < k
        let (mut lo, mut hi) = (0usize, nsup);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.counts[2 * mid] < k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = lo;
        let mut r = k - self.counts[2 * s];
        let packed = self.counts[2 * s + 1];
        let mut w = 8 * s;
        for j in (1..8).rev() {
            let rel = (packed >> (9 * (j - 1))) & 511;
            if rel < r {
                w = 8 * s + j;
                r -= rel;
                break;
            }
        }
        Some(64 * w + select_in_word(self.words[w], r as u32))
    }

    /// Position of the `k`-th zero, `1 <= k <= count_zeros()`.
    pub fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.count_zeros() {
            return None;
        }
        let k = k as u64;
        let nsup = self.counts.len() / 2;
        let zeros_before = |s: usize| 512 * s as u64 - self.counts[2 * s];
        let (mut lo, mut hi) = (0usize, nsup);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if zeros_before(mid) < k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = lo;
        let mut r = k - zeros_before(s);
        let packed = self.counts[2 * s + 1];
        let mut w = 8 * s;
        for j in (1..8).rev() {
            let rel = 64 * j as u64 - ((packed >> (9 * (j - 1))) & 511);
            if rel < r {
                w = 8 * s + j;
                r -= rel;
                break;
            }
        }
        Some(64 * w + select_in_word(!self.words[w], r as u32))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn size_in_bits(&self) -> usize {
        64 * (self.words.len() + self.counts.len()) + 128
    }
}

/// Position of the `r`-th set bit (1-based) of `x`.
#[inline]
fn select_in_word(mut x: u64, r: u32) -> usize {
    debug_assert!(r >= 1 && x.count_ones() >= r);
    for _ in 1..r {
        x &= x - 1;
    }
    x.trailing_zeros() as usize
}

impl Serial for RankSelectBits {
    fn write(&self, w: &mut Writer) {
        w.usize(self.len);
        w.words(&self.words);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let len = r.usize()?;
        let words = r.words()?;
        check(words.len() == len.div_ceil(64), "bit-vector length")?;
        Ok(RankSelectBits::new(words, len))
    }
}
