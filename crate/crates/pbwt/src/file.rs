//! On-disk index container.
//!
//! Layout: `PBWX`, version byte, then the payload and a CRC32 of the payload.
//! The payload starts with a fixed header (n, σs, σp, Δ, flags) followed by
//! the alphabet and the present sections in order: p-index, s-index,
//! dictionary. Integers are little-endian.

use crate::error::{Error, Result};
use crate::pdict::PDictIndex;
use crate::pindex::PIndex;
use crate::serial::{check, Reader, Serial, Writer};
use crate::sindex::SIndex;
use crate::AlphabetSpec;

pub const MAGIC: &[u8; 4] = b"PBWX";
pub const VERSION: u8 = 1;

const HAS_SINDEX: u8 = 1;
const HAS_PAIRING: u8 = 2;
const HAS_DICT: u8 = 4;
const HAS_PINDEX: u8 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFile {
    pub spec: AlphabetSpec,
    pub pindex: Option<PIndex>,
    pub sindex: Option<SIndex>,
    pub dict: Option<PDictIndex>,
}

impl IndexFile {
    pub fn new(spec: AlphabetSpec) -> Self {
        IndexFile { spec, pindex: None, sindex: None, dict: None }
    }

    /// Text length (number of patterns for a dictionary-only file).
    pub fn n(&self) -> usize {
        match (&self.pindex, &self.sindex, &self.dict) {
            (Some(p), _, _) => p.len(),
            (_, Some(s), _) => s.len(),
            (_, _, Some(d)) => d.pattern_count(),
            _ => 0,
        }
    }

    /// Sampling distance of the suffix-array samples, 0 without a text index.
    pub fn delta(&self) -> usize {
        self.pindex.as_ref().map(|p| p.delta()).or(self.sindex.as_ref().map(|s| s.delta())).unwrap_or(0)
    }

    fn flags(&self) -> u8 {
        let mut f = 0;
        if self.sindex.is_some() {
            f |= HAS_SINDEX;
        }
        if self.spec.has_pairs() {
            f |= HAS_PAIRING;
        }
        if self.dict.is_some() {
            f |= HAS_DICT;
        }
        if self.pindex.is_some() {
            f |= HAS_PINDEX;
        }
        f
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.usize(self.n());
        w.u32(self.spec.sigma_s());
        w.u32(self.spec.sigma_p());
        w.usize(self.delta());
        w.u8(self.flags());
        self.spec.write(&mut w);
        if let Some(p) = &self.pindex {
            p.write(&mut w);
        }
        if let Some(s) = &self.sindex {
            s.write(&mut w);
        }
        if let Some(d) = &self.dict {
            d.write(&mut w);
        }
        let payload = w.into_bytes();
        let mut out = Vec::with_capacity(payload.len() + 9);
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&payload);
        out.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        check(bytes.len() >= 9 && &bytes[..4] == MAGIC, "not an index file")?;
        check(bytes[4] == VERSION, "unsupported version")?;
        let payload = &bytes[5..bytes.len() - 4];
        let crc = u32::from_le_bytes(bytes[bytes.len() - 4..].try_into().unwrap());
        if crc32fast::hash(payload) != crc {
            return Err(Error::Checksum);
        }
        let mut r = Reader::new(payload);
        let n = r.usize()?;
        let sigma_s = r.u32()?;
        let sigma_p = r.u32()?;
        let delta = r.usize()?;
        let flags = r.u8()?;
        let spec = AlphabetSpec::read(&mut r)?;
        check(spec.sigma_s() == sigma_s && spec.sigma_p() == sigma_p, "alphabet disagrees with header")?;
        check(spec.has_pairs() == (flags & HAS_PAIRING != 0), "pairing flag disagrees with alphabet")?;
        let mut f = IndexFile::new(spec);
        if flags & HAS_PINDEX != 0 {
            f.pindex = Some(PIndex::read(&mut r)?);
        }
        if flags & HAS_SINDEX != 0 {
            f.sindex = Some(SIndex::read(&mut r)?);
        }
        if flags & HAS_DICT != 0 {
            f.dict = Some(PDictIndex::read(&mut r)?);
        }
        check(r.is_at_end(), "trailing data")?;
        check(f.n() == n && f.delta() == delta, "header disagrees with sections")?;
        for s in [f.pindex.as_ref().map(|p| p.spec()), f.sindex.as_ref().map(|s| s.spec()), f.dict.as_ref().map(|d| d.spec())]
            .into_iter()
            .flatten()
        {
            check(*s == f.spec, "section alphabet disagrees with header")?;
        }
        Ok(f)
    }

    /// `key=value` statistics: header fields, bits per structure, totals.
    pub fn stats(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| out.push((k.to_string(), v));
        let n = self.n();
        put("n", n.to_string());
        put("sigma", self.spec.sigma().to_string());
        put("sigma_s", self.spec.sigma_s().to_string());
        put("sigma_p", self.spec.sigma_p().to_string());
        put("delta", self.delta().to_string());
        let per = |bits: usize| if n == 0 { "0".to_string() } else { format!("{:.3}", bits as f64 / n as f64) };
        let mut total = 0;
        let mut sections: Vec<(&str, Vec<(&str, usize)>, Option<usize>)> = Vec::new();
        if let Some(p) = &self.pindex {
            sections.push(("pindex", p.space(), Some(p.succinct_total_bits())));
        }
        if let Some(s) = &self.sindex {
            sections.push(("sindex", s.space(), Some(s.succinct_total_bits())));
        }
        if let Some(d) = &self.dict {
            sections.push(("dict", d.space(), None));
        }
        for (name, space, succinct) in sections {
            let sum: usize = space.iter().map(|(_, b)| b).sum();
            for (k, b) in space {
                put(&format!("{name}.{k}_bits"), b.to_string());
            }
            put(&format!("{name}.total_bits"), sum.to_string());
            if let Some(b) = succinct {
                put(&format!("{name}.succinct_total_bits"), b.to_string());
                put(&format!("{name}.succinct_bits_per_symbol"), per(b));
            }
            total += sum;
        }
        put("total_bits", total.to_string());
        put("bits_per_symbol", per(total));
        out
    }
}
