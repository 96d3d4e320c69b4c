//! Parameterized Burrows-Wheeler index.
//!
//! * [`pindex::PIndex`] answers parameterized (p-)match queries: two strings
//!   match when one becomes the other under a bijective renaming of the
//!   parameterized symbols.
//! * [`sindex::SIndex`] answers structural matches, where the renaming must
//!   also respect a complement pairing on parameterized symbols.
//! * [`pdict::PDictIndex`] reports every occurrence of a dictionary of
//!   patterns in a streamed text under p-matching.

pub mod alphabet;
pub mod error;
pub mod file;
pub mod pdict;
pub mod pindex;
pub mod pst;
pub mod serial;
pub mod sindex;
pub mod succinct;
pub mod topology;

pub use alphabet::{AlphabetSpec, Encoded, Mode};
pub use error::{Error, Result};
