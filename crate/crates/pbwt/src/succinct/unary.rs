use super::bits::{BitBuilder, RankSelectBits};
use crate::error::Result;
use crate::serial::{Reader, Serial, Writer};

/// Count sequence `c_1..c_m` stored as `0 1^c_1 0 1^c_2 ... 0 1^c_m 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryCounts {
    bits: RankSelectBits,
    m: usize,
}

impl UnaryCounts {
    pub fn new<I: IntoIterator<Item = usize>>(counts: I) -> Self {
        let mut b = BitBuilder::new();
        let mut m = 0;
        for c in counts {
            b.push(false);
            b.push_run(true, c);
            m += 1;
        }
        b.push(false);
        UnaryCounts { bits: b.finish(), m }
    }

    pub fn len(&self) -> usize {
        self.m
    }
    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// `c_k` for `1 <= k <= m`.
    #[inline]
    pub fn get(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.m);
        let a = self.bits.select0(k).unwrap();
        let b = self.bits.select0(k + 1).unwrap();
        b - a - 1
    }

    /// `c_1 + ... + c_k` for `0 <= k <= m`.
    pub fn prefix_sum(&self, k: usize) -> usize {
        debug_assert!(k <= self.m);
        self.bits.rank1(self.bits.select0(k + 1).unwrap())
    }

    pub fn total(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn size_in_bits(&self) -> usize {
        self.bits.size_in_bits() + 64
    }
}

impl Serial for UnaryCounts {
    fn write(&self, w: &mut Writer) {
        self.bits.write(w);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let bits = RankSelectBits::read(r)?;
        crate::serial::check(bits.count_zeros() >= 1 && !bits.get(bits.len() - 1), "unary sequence")?;
        let m = bits.count_zeros() - 1;
        Ok(UnaryCounts { bits, m })
    }
}
