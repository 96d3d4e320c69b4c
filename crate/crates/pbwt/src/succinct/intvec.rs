use crate::error::Result;
use crate::serial::{check, Reader, Serial, Writer};

/// Fixed-width packed integer array.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntVec {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl IntVec {
    /// Packs `vals` using the smallest width that holds the maximum.
    pub fn from_slice(vals: &[u64]) -> Self {
        let max = vals.iter().copied().max().unwrap_or(0);
        let width = 64 - max.leading_zeros();
        Self::with_width(vals, width)
    }

    pub fn from_u32s(vals: &[u32]) -> Self {
        Self::from_slice(&vals.iter().map(|&v| v as u64).collect::<Vec<_>>())
    }

    pub fn from_usizes(vals: &[usize]) -> Self {
        Self::from_slice(&vals.iter().map(|&v| v as u64).collect::<Vec<_>>())
    }

    pub fn with_width(vals: &[u64], width: u32) -> Self {
        assert!(width <= 64);
        let total = vals.len() * width as usize;
        let mut words = vec![0u64; total.div_ceil(64)];
        if width > 0 {
            for (i, &v) in vals.iter().enumerate() {
                debug_assert!(width == 64 || v >> width == 0);
                let p = i * width as usize;
                let (w, b) = (p / 64, p % 64);
                words[w] |= v << b;
                if b + width as usize > 64 {
                    words[w + 1] |= v >> (64 - b);
                }
            }
        }
        IntVec { width, len: vals.len(), words }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        if self.width == 0 {
            return 0;
        }
        let p = i * self.width as usize;
        let (w, b) = (p / 64, p % 64);
        let mask = if self.width == 64 { u64::MAX } else { (1u64 << self.width) - 1 };
        let mut v = self.words[w] >> b;
        if b + self.width as usize > 64 {
            v |= self.words[w + 1] << (64 - b);
        }
        v & mask
    }

    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn width(&self) -> u32 {
        self.width
    }
    pub fn to_vec(&self) -> Vec<u64> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
    pub fn size_in_bits(&self) -> usize {
        64 * self.words.len() + 128
    }
}

impl Serial for IntVec {
    fn write(&self, w: &mut Writer) {
        w.u32(self.width);
        w.usize(self.len);
        w.words(&self.words);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let width = r.u32()?;
        let len = r.usize()?;
        let words = r.words()?;
        check(width <= 64, "integer width")?;
        check(len.checked_mul(width as usize).map(|b| b.div_ceil(64)) == Some(words.len()), "integer array length")?;
        Ok(IntVec { width, len, words })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_widths() {
        for width in [0u32, 1, 5, 13, 32, 63, 64] {
            let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            let vals: Vec<u64> = (0..200u64).map(|i| i.wrapping_mul(0x9e3779b97f4a7c15) & mask).collect();
            let iv = IntVec::with_width(&vals, width);
            assert_eq!(iv.to_vec(), vals);
        }
        assert_eq!(IntVec::from_slice(&[3, 0, 7]).width(), 3);
    }
}
