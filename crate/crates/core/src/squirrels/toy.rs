//! Desk-scale key generation and signing, used as a test oracle.
//!
//! Keys come from a random integer basis `G` whose determinant is odd,
//! squarefree and built from primes below 2^31. Signatures use Babai
//! round-off against `G`, which is far weaker than a trapdoor sampler but
//! produces lattice points close enough to pass a generous norm bound.

use alloc::vec::Vec;

use rand_core::RngCore;

use super::keys::SquirrelsPublicKey;
use super::params::SquirrelsParams;
use super::SquirrelsSignature;
use crate::ecrt::PrimeBasis;
use crate::error::{Error, Result};
use crate::hash::{hash_to_point, SALT_LEN};
use crate::modmath::{inv_mod, is_prime, OddWordModulus};

/// Largest determinant handled; keeps every product in a `u128`.
const MAX_DELTA_BITS: f64 = 62.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToyConfig {
    pub n: usize,
    pub entry_bound: i64,
    pub q: u32,
    pub max_attempts: u32,
}

impl Default for ToyConfig {
    fn default() -> Self {
        Self { n: 8, entry_bound: 4, q: 16, max_attempts: 1000 }
    }
}

/// Counters from a key generation run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ToyKeygenStats {
    pub attempts: u32,
    pub singular: u32,
    /// Determinant even, not squarefree, or with a factor of 31 bits or more.
    pub bad_determinant: u32,
    /// Last coordinate of the kernel vector vanished modulo some prime.
    pub not_normalizable: u32,
}

/// The secret basis and its floating-point inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct ToySecret {
    n: usize,
    g: Vec<i64>,
    g_inv: Vec<f64>,
    delta: u64,
}

impl ToySecret {
    /// Builds the secret from a basis, recomputing its determinant.
    pub fn from_basis(n: usize, g: Vec<i64>) -> Result<Self> {
        if g.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: g.len() });
        }
        let det = determinant(n, &g).ok_or(Error::InvalidParameter("basis too large"))?;
        if det == 0 {
            return Err(Error::InvalidParameter("singular basis"));
        }
        let g_inv = invert_f64(n, &g).ok_or(Error::InvalidParameter("singular basis"))?;
        Ok(Self { n, g, g_inv, delta: det.unsigned_abs() as u64 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row-major basis; rows generate the lattice.
    pub fn basis(&self) -> &[i64] {
        &self.g
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }
}

#[derive(Clone, Debug)]
pub struct ToySquirrels {
    pub params: SquirrelsParams,
    pub pk: SquirrelsPublicKey,
    pub secret: ToySecret,
    pub stats: ToyKeygenStats,
}

impl ToySquirrels {
    /// `v_i mod Δ` for `i < n − 1`, rebuilt from the public residues.
    pub fn v_mod_delta(&self) -> Vec<u64> {
        let basis = &self.params.basis;
        (0..self.params.n - 1)
            .map(|i| {
                let residues: Vec<u64> = (0..basis.len()).map(|j| u64::from(self.pk.get(i, j))).collect();
                crt_u64(&residues, basis)
            })
            .collect()
    }
}

fn crt_u64(residues: &[u64], basis: &PrimeBasis) -> u64 {
    let mut x: u128 = 0;
    let mut modulus: u128 = 1;
    for (&a, p) in residues.iter().zip(basis.moduli()) {
        // Solve x + modulus * k ≡ a (mod p).
        let m_mod_p = p.reduce((modulus % u128::from(p.get())) as u64);
        let x_mod_p = (x % u128::from(p.get())) as u64;
        let k = p.mul(p.sub(a, x_mod_p), inv_mod(m_mod_p, p).expect("coprime"));
        x += modulus * u128::from(k);
        modulus *= u128::from(p.get());
    }
    x as u64
}

/// Samples a basis until its determinant is usable and the public vector
/// can be normalized to end in `−1`.
pub fn toy_keygen<R: RngCore + ?Sized>(config: &ToyConfig, rng: &mut R) -> Result<ToySquirrels> {
    let n = config.n;
    let e = config.entry_bound;
    if !(2..=32).contains(&n) || e < 1 {
        return Err(Error::InvalidParameter("toy dimension must be 2..=32 with entry bound >= 1"));
    }
    // Hadamard: |det G| <= (sqrt(n) E)^n.
    let hadamard_bits = n as f64 * libm::log2(libm::sqrt(n as f64) * e as f64);
    if hadamard_bits >= MAX_DELTA_BITS {
        return Err(Error::InvalidParameter("determinant could exceed 62 bits; lower n or the entry bound"));
    }
    let beta_sq = (n * n) as u64 * (e * e) as u64;
    let width = (2 * e + 1) as u64;
    let mut stats = ToyKeygenStats::default();
    for _ in 0..config.max_attempts {
        stats.attempts += 1;
        let g: Vec<i64> = (0..n * n).map(|_| (rng.next_u64() % width) as i64 - e).collect();
        let det = determinant(n, &g).expect("within Hadamard bound");
        if det == 0 {
            stats.singular += 1;
            continue;
        }
        let delta = det.unsigned_abs() as u64;
        let Some(primes) = squarefree_odd_factors(delta) else {
            stats.bad_determinant += 1;
            continue;
        };
        if delta <= 2 * (u64::from(config.q) + beta_sq) {
            stats.bad_determinant += 1;
            continue;
        }
        let basis = PrimeBasis::new(&primes)?;
        let Some(v) = public_residues(n, &g, &basis) else {
            stats.not_normalizable += 1;
            continue;
        };
        let params = SquirrelsParams::new(n, config.q, beta_sq, basis)?;
        let pk = SquirrelsPublicKey::new(v, &params)?;
        let secret = ToySecret::from_basis(n, g)?;
        return Ok(ToySquirrels { params, pk, secret, stats });
    }
    Err(Error::ResampleLimit(config.max_attempts))
}

/// Babai round-off of `HashToPoint(salt ∥ m)`, retrying salts until the
/// norm bound holds.
pub fn toy_sign<R: RngCore + ?Sized>(
    secret: &ToySecret,
    m: &[u8],
    params: &SquirrelsParams,
    rng: &mut R,
) -> Result<SquirrelsSignature> {
    const MAX_SALTS: u32 = 1000;
    let n = secret.n;
    for _ in 0..MAX_SALTS {
        let mut salt = [0u8; SALT_LEN];
        rng.fill_bytes(&mut salt);
        let h = hash_to_point(m, &salt, params.q, n);
        let z: Vec<i64> = (0..n)
            .map(|j| {
                let u: f64 = (0..n).map(|i| f64::from(h[i]) * secret.g_inv[i * n + j]).sum();
                libm::round(u) as i64
            })
            .collect();
        let s: Vec<i64> = (0..n)
            .map(|j| (0..n).map(|i| z[i] * secret.g[i * n + j]).sum::<i64>() - i64::from(h[j]))
            .collect();
        let norm: i64 = s.iter().map(|x| x * x).sum();
        if norm as u64 <= params.beta_sq && s.iter().all(|&x| x.unsigned_abs() < 1 << 15) {
            return Ok(SquirrelsSignature { salt, s: s.into_iter().map(|x| x as i16).collect() });
        }
    }
    Err(Error::ResampleLimit(MAX_SALTS))
}

/// Determinant by fraction-free elimination. Intermediate values are minors
/// of `g`, so they stay within the Hadamard bound; `None` on overflow.
fn determinant(n: usize, g: &[i64]) -> Option<i128> {
    let mut a: Vec<i128> = g.iter().map(|&x| i128::from(x)).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                return Some(0);
            };
            for c in 0..n {
                a.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i * n + j].checked_mul(pivot)?.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?)?;
                a[i * n + j] = v / prev;
            }
        }
        prev = pivot;
    }
    Some(sign * a[n * n - 1])
}

fn invert_f64(n: usize, g: &[i64]) -> Option<Vec<f64>> {
    let w = 2 * n;
    let mut a = alloc::vec![0f64; n * w];
    for i in 0..n {
        for j in 0..n {
            a[i * w + j] = g[i * n + j] as f64;
        }
        a[i * w + n + i] = 1.0;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x * w + col].abs().total_cmp(&a[y * w + col].abs()))?;
        if a[pivot * w + col] == 0.0 {
            return None;
        }
        for c in 0..w {
            a.swap(col * w + c, pivot * w + c);
        }
        let d = a[col * w + col];
        for c in 0..w {
            a[col * w + c] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r * w + col];
                if f != 0.0 {
                    for c in 0..w {
                        a[r * w + c] -= f * a[col * w + c];
                    }
                }
            }
        }
    }
    Some((0..n).flat_map(|i| a[i * w + n..(i + 1) * w].to_vec()).collect())
}

/// Distinct prime factors of an odd squarefree `x` whose factors are all
/// below 2^31; `None` otherwise.
fn squarefree_odd_factors(x: u64) -> Option<Vec<u64>> {
    if x & 1 == 0 || x == 1 {
        return None;
    }
    let mut factors = Vec::new();
    factor_into(x, &mut factors);
    factors.sort_unstable();
    let distinct = factors.windows(2).all(|w| w[0] != w[1]);
    (distinct && factors.iter().all(|&p| p >> 31 == 0)).then_some(factors)
}

fn factor_into(mut x: u64, out: &mut Vec<u64>) {
    for p in (3..1000u64).step_by(2) {
        while x.is_multiple_of(p) {
            out.push(p);
            x /= p;
        }
    }
    let mut stack = alloc::vec![x];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
}

/// A nontrivial factor of an odd composite `m` with no factor below 1000.
fn pollard_rho(m: u64) -> u64 {
    let mulmod = |a: u64, b: u64| (u128::from(a) * u128::from(b) % u128::from(m)) as u64;
    for c in 1.. {
        let f = |x: u64| (mulmod(x, x) + c) % m;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), m);
        }
        if d != m {
            return d;
        }
    }
    unreachable!()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// For each prime `p | Δ`, the right kernel `w` of `G mod p` is a line;
/// scaling it so `w_n = −1` gives `v_i = w_i`. Returns residues in the
/// public-key layout, or `None` when some `w_n ≡ 0`.
fn public_residues(n: usize, g: &[i64], basis: &PrimeBasis) -> Option<Vec<u32>> {
    let mut v = Vec::with_capacity((n - 1) * basis.len());
    for p in basis.moduli() {
        let w = right_kernel(n, g, p)?;
        let wn = w[n - 1];
        // v_i = −w_i / w_n.
        let scale = p.neg(inv_mod(wn, p).ok()?);
        v.extend(w[..n - 1].iter().map(|&wi| p.mul(wi, scale) as u32));
    }
    Some(v)
}

/// A nonzero vector `w` with `G w ≡ 0 (mod p)`, assuming rank `n − 1`.
fn right_kernel(n: usize, g: &[i64], p: &OddWordModulus) -> Option<Vec<u64>> {
    let mut a: Vec<u64> = g.iter().map(|&x| p.reduce_signed(x)).collect();
    let mut pivots = Vec::with_capacity(n);
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| a[r * n + col] != 0) else {
            continue;
        };
        for c in 0..n {
            a.swap(row * n + c, pr * n + c);
        }
        let inv = inv_mod(a[row * n + col], p).ok()?;
        for c in 0..n {
            a[row * n + c] = p.mul(a[row * n + c], inv);
        }
        for r in 0..n {
            let f = a[r * n + col];
            if r != row && f != 0 {
                for c in 0..n {
                    a[r * n + c] = p.sub(a[r * n + c], p.mul(f, a[row * n + c]));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut w = alloc::vec![0u64; n];
    w[free] = 1;
    for (r, &c) in pivots.iter().enumerate() {
        w[c] = p.neg(a[r * n + free]);
    }
    (w[n - 1] != 0).then_some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squirrels::verify;
    use crate::Verdict;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(2, &[1, 2, 3, 4]), Some(-2));
        assert_eq!(determinant(3, &[0, 1, 0, 1, 0, 0, 0, 0, 5]), Some(-5));
        assert_eq!(determinant(2, &[1, 2, 2, 4]), Some(0));
    }

    #[test]
    fn factoring() {
        assert_eq!(squarefree_odd_factors(3 * 5 * 1_000_003), Some(alloc::vec![3, 5, 1_000_003]));
        assert_eq!(squarefree_odd_factors(9 * 7), None);
        assert_eq!(squarefree_odd_factors(2 * 7), None);
        assert_eq!(squarefree_odd_factors((1 << 31) + 11), None);
        let big = 1_000_003u64 * 999_983 * 1009;
        assert_eq!(squarefree_odd_factors(big), Some(alloc::vec![1009, 999_983, 1_000_003]));
    }

    #[test]
    fn crt_rebuilds() {
        let basis = PrimeBasis::new(&[3, 5, 7]).unwrap();
        assert_eq!(crt_u64(&[52 % 3, 52 % 5, 52 % 7], &basis), 52);
    }

    #[test]
    fn keygen_then_sign() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let toy = toy_keygen(&ToyConfig::default(), &mut rng).unwrap();
        assert_eq!(toy.secret.delta(), toy.params.basis.iter().product::<u64>());
        for i in 0..20u8 {
            let sig = toy_sign(&toy.secret, &[i], &toy.params, &mut rng).unwrap();
            assert!(sig.norm_sq() <= toy.params.beta_sq);
            assert_eq!(verify(&sig, &[i], &toy.pk, &toy.params), Ok(Verdict::Accept));
        }
    }

    #[test]
    fn rejects_oversized_config() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let cfg = ToyConfig { n: 32, entry_bound: 4, ..ToyConfig::default() };
        assert!(toy_keygen(&cfg, &mut rng).is_err());
    }
}
