//! Sampled suffix array and inverse.
//!
//! Text positions `1, 1 + D, 1 + 2D, ...` and `n` are sampled. A row whose
//! position is sampled stores it; every sampled position stores its row.
//! Lookups walk the LF mapping at most `D` steps to reach a sample.

use crate::error::{Error, Result};
use crate::serial::{check, Reader, Serial, Writer};
use crate::succinct::{IntVec, RankSelectBits};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Samples {
    delta: usize,
    n: usize,
    rows: RankSelectBits,
    positions: IntVec,
    inverse: IntVec,
}

/// How the sampling distance is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleRate {
    /// `ceil(log2 n)`.
    #[default]
    LogN,
    /// `ceil(log_sigma n)`.
    LogSigmaN,
    Fixed(usize),
}

impl SampleRate {
    pub fn resolve(self, n: usize, sigma: u32) -> usize {
        let d = match self {
            SampleRate::LogN => (n as f64).log2().ceil() as usize,
            SampleRate::LogSigmaN => ((n as f64).ln() / (sigma.max(2) as f64).ln()).ceil() as usize,
            SampleRate::Fixed(d) => d,
        };
        d.max(1)
    }
}

fn is_sampled(p: usize, delta: usize, n: usize) -> bool {
    (p - 1) % delta == 0 || p == n
}

impl Samples {
    /// `sa` holds 1-based positions by row.
    pub fn new(sa: &[u32], delta: usize) -> Self {
        let n = sa.len();
        let bits: Vec<bool> = sa.iter().map(|&p| is_sampled(p as usize, delta, n)).collect();
        let positions: Vec<u64> = sa.iter().filter(|&&p| is_sampled(p as usize, delta, n)).map(|&p| p as u64).collect();
        let mut inv = vec![0u64; n.div_ceil(delta) + 1];
        let mut used = 0;
        for (row, &p) in sa.iter().enumerate() {
            let p = p as usize;
            if is_sampled(p, delta, n) {
                let slot = Self::slot(p, delta, n);
                inv[slot] = row as u64 + 1;
                used = used.max(slot + 1);
            }
        }
        inv.truncate(used);
        Samples {
            delta,
            n,
            rows: RankSelectBits::from_bools(&bits),
            positions: IntVec::from_slice(&positions),
            inverse: IntVec::from_slice(&inv),
        }
    }

    fn slot(p: usize, delta: usize, n: usize) -> usize {
        if (p - 1) % delta == 0 {
            (p - 1) / delta
        } else {
            debug_assert_eq!(p, n);
            (n - 1) / delta + 1
        }
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Text position of row `i`.
    pub fn sa(&self, i: usize, lf: impl Fn(usize) -> usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(i));
        }
        let mut r = i;
        let mut k = 0;
        while !self.rows.get(r - 1) {
            r = lf(r);
            k += 1;
        }
        Ok(self.positions.get(self.rows.rank1(r - 1)) as usize + k)
    }

    /// Row of text position `j`.
    pub fn isa(&self, j: usize, lf: impl Fn(usize) -> usize) -> Result<usize> {
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange(j));
        }
        let next = (j - 1).div_ceil(self.delta) * self.delta + 1;
        let target = if next <= self.n { next } else { self.n };
        let mut r = self.inverse.get(Self::slot(target, self.delta, self.n)) as usize;
        for _ in j..target {
            r = lf(r);
        }
        Ok(r)
    }

    pub fn size_in_bits(&self) -> usize {
        self.rows.size_in_bits() + self.positions.size_in_bits() + self.inverse.size_in_bits() + 128
    }
}

impl Serial for Samples {
    fn write(&self, w: &mut Writer) {
        w.usize(self.delta);
        w.usize(self.n);
        self.rows.write(w);
        self.positions.write(w);
        self.inverse.write(w);
    }
    fn read(r: &mut Reader<'_>) -> Result<Self> {
        let delta = r.usize()?;
        let n = r.usize()?;
        let rows = RankSelectBits::read(r)?;
        let positions = IntVec::read(r)?;
        let inverse = IntVec::read(r)?;
        check(
            delta >= 1 && rows.len() == n && positions.len() == rows.count_ones() && inverse.len() == rows.count_ones(),
            "samples",
        )?;
        Ok(Samples { delta, n, rows, positions, inverse })
    }
}
