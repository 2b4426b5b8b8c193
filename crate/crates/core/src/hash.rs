//! Message hashing. Every scheme hashes `salt ∥ m` with SHAKE256 and maps
//! the output stream into its own target domain.

use alloc::vec::Vec;

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

/// Salt length in bytes, shared by all schemes.
pub const SALT_LEN: usize = 16;

pub type Salt = [u8; SALT_LEN];

/// SHAKE256 reader over `salt ∥ m`.
pub fn xof(salt: &[u8], m: &[u8]) -> impl XofReader {
    let mut h = Shake256::default();
    h.update(salt);
    h.update(m);
    h.finalize_xof()
}

/// `n` coordinates in `[0, q)`, `q` a power of two up to 2^16.
///
/// Each coordinate consumes two little-endian bytes of the stream.
pub fn hash_to_point(m: &[u8], salt: &[u8], q: u32, n: usize) -> Vec<u16> {
    assert!(q.is_power_of_two() && q <= 1 << 16, "q must be a power of two <= 2^16");
    let mask = (q - 1) as u16;
    let mut reader = xof(salt, m);
    let mut out = Vec::with_capacity(n);
    let mut buf = [0u8; 2];
    for _ in 0..n {
        reader.read(&mut buf);
        out.push(u16::from_le_bytes(buf) & mask);
    }
    out
}

/// `n` trits, drawn from 2-bit chunks of the stream with the value 3 rejected.
pub fn hash_to_trits(m: &[u8], salt: &[u8], n: usize) -> Vec<u8> {
    let mut reader = xof(salt, m);
    let mut out = Vec::with_capacity(n);
    let mut buf = [0u8; 64];
    while out.len() < n {
        reader.read(&mut buf);
        for byte in buf {
            for shift in [0, 2, 4, 6] {
                let v = (byte >> shift) & 3;
                if v != 3 && out.len() < n {
                    out.push(v);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_is_deterministic_and_in_range() {
        let a = hash_to_point(b"msg", &[1; SALT_LEN], 4096, 1034);
        let b = hash_to_point(b"msg", &[1; SALT_LEN], 4096, 1034);
        assert_eq!(a, b);
        assert!(a.iter().all(|&c| c < 4096));
        assert_ne!(a, hash_to_point(b"msg", &[2; SALT_LEN], 4096, 1034));
    }

    #[test]
    fn point_mean_is_centered() {
        let q = 4096u32;
        let n = 10_000;
        let pts = hash_to_point(b"mean", &[0; SALT_LEN], q, n);
        let mean = pts.iter().map(|&c| f64::from(c)).sum::<f64>() / n as f64;
        let expected = f64::from(q - 1) / 2.0;
        // Uniform on [0, q): variance (q^2 - 1) / 12.
        let sigma = libm::sqrt((f64::from(q) * f64::from(q) - 1.0) / 12.0 / n as f64);
        assert!((mean - expected).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn trits_are_balanced() {
        let n = 30_000;
        let t = hash_to_trits(b"trits", &[7; SALT_LEN], n);
        assert_eq!(t.len(), n);
        let mut counts = [0usize; 3];
        for &v in &t {
            counts[usize::from(v)] += 1;
        }
        let sigma = libm::sqrt(n as f64 * (1.0 / 3.0) * (2.0 / 3.0));
        for c in counts {
            assert!((c as f64 - n as f64 / 3.0).abs() < 3.0 * sigma, "{counts:?}");
        }
    }
}
