//! File formats for the `compverify` tool.
//!
//! Every file is a [`format::Header`] followed by a scheme-specific payload.
//! Named instances carry nothing but the key material, so payload sizes
//! equal the size formulas; toy instances prefix their parameters.

pub mod codec;
pub mod format;

pub use codec::{KeyMaterial, Signature};
pub use format::{FormatError, Header, Kind, Scheme};
