use alloc::vec::Vec;

use crate::ecrt::PrimeBasis;
use crate::error::{Error, Result};
use crate::modmath::{is_prime, PRIMES_31_COUNT};

/// The five named parameter sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquirrelsInstance {
    I,
    II,
    III,
    IV,
    V,
}

impl SquirrelsInstance {
    pub const ALL: [SquirrelsInstance; 5] = [Self::I, Self::II, Self::III, Self::IV, Self::V];

    pub fn name(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::V => "V",
        }
    }

    /// Wire tag, 1 through 5; 0 is reserved for toy instances.
    pub fn tag(self) -> u16 {
        self as u16 + 1
    }

    pub fn from_tag(tag: u16) -> Option<Self> {
        Self::ALL.get(usize::from(tag).checked_sub(1)?).copied()
    }

    pub fn parse(name: &str) -> Option<Self> {
        let name = name.strip_prefix("squirrels-").unwrap_or(name);
        Self::ALL.into_iter().find(|i| i.name().eq_ignore_ascii_case(name))
    }

    pub fn table(self) -> &'static NamedSquirrels {
        &SQUIRRELS_TABLE[self as usize]
    }
}

/// Published dimensions of a named instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NamedSquirrels {
    pub instance: SquirrelsInstance,
    pub lambda: u32,
    pub n: usize,
    pub q: u32,
    pub beta_sq: u64,
    pub s: usize,
    /// Bit length of the real instance's determinant; the stand-in basis
    /// used here has `31 s` bits instead.
    pub delta_bits: u32,
}

pub const SQUIRRELS_TABLE: [NamedSquirrels; 5] = [
    NamedSquirrels { instance: SquirrelsInstance::I, lambda: 128, n: 1034, q: 4096, beta_sq: 2_026_590, s: 165, delta_bits: 5048 },
    NamedSquirrels { instance: SquirrelsInstance::II, lambda: 128, n: 1164, q: 4096, beta_sq: 2_442_439, s: 188, delta_bits: 5738 },
    NamedSquirrels { instance: SquirrelsInstance::III, lambda: 192, n: 1556, q: 4096, beta_sq: 4_512_242, s: 262, delta_bits: 8017 },
    NamedSquirrels { instance: SquirrelsInstance::IV, lambda: 192, n: 1718, q: 4096, beta_sq: 3_659_372, s: 275, delta_bits: 8402 },
    NamedSquirrels { instance: SquirrelsInstance::V, lambda: 256, n: 2056, q: 4096, beta_sq: 5_370_115, s: 339, delta_bits: 10347 },
];

/// Public parameters of a Squirrels-shape scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquirrelsParams {
    pub n: usize,
    pub q: u32,
    pub beta_sq: u64,
    pub basis: PrimeBasis,
    /// `None` for toy instances.
    pub instance: Option<SquirrelsInstance>,
}

impl SquirrelsParams {
    pub fn new(n: usize, q: u32, beta_sq: u64, basis: PrimeBasis) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("dimension must be at least 2"));
        }
        if !q.is_power_of_two() || q > 1 << 16 {
            return Err(Error::InvalidParameter("q must be a power of two <= 2^16"));
        }
        if basis.iter().any(|p| p >> 31 != 0) {
            return Err(Error::InvalidParameter("public primes must be below 2^31"));
        }
        Ok(Self { n, q, beta_sq, basis, instance: None })
    }

    /// A named instance over a deterministic stand-in basis: the `s`
    /// largest primes below 2^31.
    pub fn named(instance: SquirrelsInstance) -> Self {
        let t = instance.table();
        let basis = PrimeBasis::new(&largest_31_bit_primes(t.s)).expect("distinct primes");
        Self { n: t.n, q: t.q, beta_sq: t.beta_sq, basis, instance: Some(instance) }
    }

    pub fn s(&self) -> usize {
        self.basis.len()
    }

    pub fn k_prime_bounds(&self) -> (i64, i64) {
        k_prime_bounds(self.n as u64, u64::from(self.q), self.beta_sq)
    }

    /// `k′max − k′min`, the largest shifted value an honest signature produces.
    pub fn k_prime_range(&self) -> u64 {
        let (lo, hi) = self.k_prime_bounds();
        (hi - lo) as u64
    }

    pub fn pk_bytes(&self) -> usize {
        pk_bytes(self.n, self.s())
    }

    pub fn instance_tag(&self) -> u16 {
        self.instance.map_or(0, SquirrelsInstance::tag)
    }
}

fn largest_31_bit_primes(count: usize) -> Vec<u64> {
    ((1u64 << 30)..(1u64 << 31)).rev().filter(|&p| is_prime(p)).take(count).collect()
}

/// `(k′min, k′max)` with `k′min = −⌊2√(nβ²)⌋ − 1` and
/// `k′max = 2(n−1)(q−1) + ⌊2√(nβ²)⌋ + 1`.
pub fn k_prime_bounds(n: u64, q: u64, beta_sq: u64) -> (i64, i64) {
    let root = isqrt(4 * u128::from(n) * u128::from(beta_sq)) as i64;
    let lo = -root - 1;
    let hi = 2 * (n.saturating_sub(1) as i64) * (q.saturating_sub(1) as i64) + root + 1;
    (lo, hi)
}

fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut r = libm::sqrt(x as f64) as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

pub fn pk_bytes(n: usize, s: usize) -> usize {
    4 * (n - 1) * s
}

pub fn vk_bytes(n: usize, t: usize) -> usize {
    4 * (n + 1) * t
}

pub fn ck_bytes(s: usize, t: usize) -> usize {
    4 * (s + 3) * t
}

/// `log2 C(P31, t)`: the security exponent of `t` secret 31-bit primes.
pub fn secret_primes_mu(t: usize) -> f64 {
    log2_binomial(PRIMES_31_COUNT as f64, t)
}

/// `log2 C(n, k)` for real `n ≥ k`.
pub fn log2_binomial(n: f64, k: usize) -> f64 {
    (0..k).map(|i| libm::log2(n - i as f64) - libm::log2(i as f64 + 1.0)).sum()
}

/// Number of secret primes whose exponent `log2 C(P31, t)` lies nearest to
/// `target_mu`, with the exponent achieved.
pub fn choose_t(target_mu: f64) -> (usize, f64) {
    let mut best = (1, secret_primes_mu(1));
    for t in 2..=64 {
        let mu = secret_primes_mu(t);
        if (mu - target_mu).abs() < (best.1 - target_mu).abs() {
            best = (t, mu);
        }
        if mu > target_mu {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_prime_bounds_examples() {
        assert_eq!(k_prime_bounds(1, 1, 0), (-1, 1));
        let t = SquirrelsInstance::I.table();
        assert_eq!(k_prime_bounds(t.n as u64, u64::from(t.q), t.beta_sq), (-91554, 8_551_824));
    }

    #[test]
    fn isqrt_exact() {
        for x in [0u128, 1, 2, 3, 4, 15, 16, 17, (1 << 62) - 1, 1 << 62, u128::from(u64::MAX)] {
            let r = isqrt(x);
            assert!(r * r <= x && (r + 1) * (r + 1) > x, "{x}");
        }
    }

    #[test]
    fn choose_t_matches_levels() {
        assert_eq!(choose_t(128.0).0, 5);
        assert_eq!(choose_t(192.0).0, 8);
        assert_eq!(choose_t(256.0).0, 11);
    }

    #[test]
    fn instance_names_and_tags() {
        for i in SquirrelsInstance::ALL {
            assert_eq!(SquirrelsInstance::from_tag(i.tag()), Some(i));
            assert_eq!(SquirrelsInstance::parse(i.name()), Some(i));
        }
        assert_eq!(SquirrelsInstance::from_tag(0), None);
        assert_eq!(SquirrelsInstance::parse("squirrels-iii"), Some(SquirrelsInstance::III));
        assert_eq!(SquirrelsInstance::parse("VI"), None);
    }

    #[test]
    fn stand_in_basis() {
        let p = SquirrelsParams::named(SquirrelsInstance::I);
        assert_eq!(p.s(), 165);
        assert_eq!(p.basis.get(0), (1 << 31) - 1);
        assert!(p.basis.iter().all(|q| q >> 30 == 1));
    }
}
