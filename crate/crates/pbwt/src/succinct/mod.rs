//! Rank/select bit-vectors, packed integers, unary count sequences and wavelet trees.

pub mod bits;
pub mod intvec;
pub mod unary;
pub mod wavelet;

pub use bits::{BitBuilder, RankSelectBits};
pub use intvec::IntVec;
pub use unary::UnaryCounts;
pub use wavelet::WaveletTree;
