//! Compressed verification for hash-and-sign signatures.
//!
//! A verifier holding a large public key draws a secret compression key,
//! maps the public key through a secret homomorphism into a small
//! verification key, and from then on checks signatures against the image.
//! Valid signatures are always accepted; invalid ones slip through with a
//! probability governed by the size of the secret.

#![no_std]

extern crate alloc;

pub mod ecrt;
pub mod error;
pub mod hash;
pub mod modmath;
pub mod rw;
pub mod security;
pub mod squirrels;
pub mod tally;
pub mod wave;

pub use error::{Error, Result};
pub use modmath::count_primes_bounds;

/// Outcome of a well-formed verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }
}
