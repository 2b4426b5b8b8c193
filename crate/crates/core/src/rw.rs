//! Rabin-Williams signatures with compressed verification modulo a secret
//! prime `ℓ`, and the forgery that works once `ℓ` is known.
//!
//! A signature is `(e, f, salt, s, t)` with `e f s² − t N = H(salt ∥ m)`.
//! Full verification checks the congruence modulo `N`; compressed
//! verification checks its image modulo `ℓ` using only `(ℓ, N mod ℓ)`.

use alloc::vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rand_core::RngCore;
use sha3::digest::XofReader;

use crate::error::{Error, Result};
use crate::hash::{xof, Salt, SALT_LEN};
use crate::modmath::{sample_prime, OddWordModulus, PrimeWidth, PRIMES_31_COUNT};
use crate::{count_primes_bounds, Verdict};

/// Smallest supported modulus size.
pub const MIN_MODULUS_BITS: u32 = 64;
/// Largest supported modulus size; toy scale only.
pub const MAX_MODULUS_BITS: u32 = 512;

const MR_ROUNDS: usize = 40;
const SMALL_PRIMES: [u32; 24] =
    [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// Secret key `(p, q)` with `p ≡ 3` and `q ≡ 7 (mod 8)`, and the public `N = pq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RwKeypair {
    p: BigUint,
    q: BigUint,
    n: BigUint,
}

impl RwKeypair {
    pub fn from_primes<R: RngCore + ?Sized>(p: BigUint, q: BigUint, rng: &mut R) -> Result<Self> {
        if residue_mod8(&p) != 3 {
            return Err(Error::InvalidParameter("p must be 3 mod 8"));
        }
        if residue_mod8(&q) != 7 {
            return Err(Error::InvalidParameter("q must be 7 mod 8"));
        }
        if !is_probable_prime(&p, rng) || !is_probable_prime(&q, rng) {
            return Err(Error::InvalidParameter("p and q must be prime"));
        }
        let n = &p * &q;
        Ok(Self { p, q, n })
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    /// The public modulus `N`.
    pub fn modulus(&self) -> &BigUint {
        &self.n
    }

    pub fn bits(&self) -> u32 {
        self.n.bits() as u32
    }
}

fn residue_mod8(x: &BigUint) -> u8 {
    x.to_bytes_le()[0] & 7
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RwSignature {
    pub e: i8,
    pub f: u8,
    pub salt: Salt,
    pub s: BigUint,
    pub t: BigInt,
}

/// The verifier-private key `(ℓ, N mod ℓ)`, plus the public size of `N`
/// that fixes the hash length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RwVerificationKey {
    pub ell: OddWordModulus,
    pub n_ell: u64,
    pub modulus_bits: u32,
}

/// Generates a keypair whose modulus has exactly `bits` bits.
pub fn rw_keygen<R: RngCore + ?Sized>(bits: u32, rng: &mut R) -> Result<RwKeypair> {
    if !(MIN_MODULUS_BITS..=MAX_MODULUS_BITS).contains(&bits) {
        return Err(Error::InvalidParameter("modulus size must be 64..=512 bits"));
    }
    let pb = bits / 2;
    let p = random_prime(pb, 3, rng);
    let q = loop {
        let q = random_prime(bits - pb, 7, rng);
        if q != p {
            break q;
        }
    };
    let n = &p * &q;
    debug_assert_eq!(n.bits(), u64::from(bits));
    Ok(RwKeypair { p, q, n })
}

/// A random prime with the top two bits set and the given residue mod 8.
fn random_prime<R: RngCore + ?Sized>(bits: u32, res8: u8, rng: &mut R) -> BigUint {
    loop {
        let mut c = random_bits(bits, rng);
        c.set_bit(u64::from(bits) - 1, true);
        c.set_bit(u64::from(bits) - 2, true);
        for b in 0..3 {
            c.set_bit(b, res8 >> b & 1 == 1);
        }
        if is_probable_prime(&c, rng) {
            return c;
        }
    }
}

fn random_bits<R: RngCore + ?Sized>(bits: u32, rng: &mut R) -> BigUint {
    let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
    rng.fill_bytes(&mut bytes);
    let extra = bytes.len() as u32 * 8 - bits;
    if let Some(top) = bytes.last_mut() {
        *top &= 0xff >> extra;
    }
    BigUint::from_bytes_le(&bytes)
}

/// Miller-Rabin with random bases; error probability below 4^-40.
pub fn is_probable_prime<R: RngCore + ?Sized>(n: &BigUint, rng: &mut R) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &sp in &SMALL_PRIMES {
        if n == &BigUint::from(sp) {
            return true;
        }
        if (n % sp).is_zero() {
            return false;
        }
    }
    if !n.bit(0) {
        return *n == BigUint::from(2u32);
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let r = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> r;
    let bits = n.bits() as u32;
    'round: for _ in 0..MR_ROUNDS {
        let a = loop {
            let a = random_bits(bits, rng);
            if a > one && a < n1 {
                break a;
            }
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

/// `H(salt ∥ m)` as an integer of `bits − 1` bits, hence already below
/// any `N` of `bits` bits and reducible modulo `ℓ` without knowing `N`.
pub fn hash_to_integer(salt: &[u8], m: &[u8], bits: u32) -> BigUint {
    random_bits(bits - 1, &mut XofRng(xof(salt, m)))
}

struct XofRng<X>(X);

impl<X: XofReader> RngCore for XofRng<X> {
    fn next_u32(&mut self) -> u32 {
        let mut b = [0u8; 4];
        self.0.read(&mut b);
        u32::from_le_bytes(b)
    }

    fn next_u64(&mut self) -> u64 {
        let mut b = [0u8; 8];
        self.0.read(&mut b);
        u64::from_le_bytes(b)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.read(dst);
    }
}

fn legendre_is_one(u: &BigUint, p: &BigUint) -> bool {
    u.modpow(&((p - 1u32) >> 1), p).is_one()
}

pub fn rw_sign<R: RngCore + ?Sized>(sk: &RwKeypair, m: &[u8], rng: &mut R) -> RwSignature {
    let n = &sk.n;
    // f = 2 enters through its inverse; (N + 1) / 2 is 2^-1 mod N.
    let half = (n + 1u32) >> 1;
    loop {
        let mut salt = [0u8; SALT_LEN];
        rng.fill_bytes(&mut salt);
        let h = hash_to_integer(&salt, m, sk.bits());
        if !num_integer::Integer::gcd(&h, n).is_one() {
            continue;
        }
        for (e, f) in [(1i8, 1u8), (-1, 1), (1, 2), (-1, 2)] {
            let mut u = if f == 2 { (&h * &half) % n } else { h.clone() };
            if e == -1 {
                u = n - u;
            }
            if !legendre_is_one(&u, &sk.p) || !legendre_is_one(&u, &sk.q) {
                continue;
            }
            let s = crt_sqrt(&u, sk);
            if s <= BigUint::one() {
                break;
            }
            let efs2 = BigInt::from(e) * BigInt::from(f) * BigInt::from(&s * &s);
            let t = (efs2 - BigInt::from(h.clone())) / BigInt::from(n.clone());
            return RwSignature { e, f, salt, s, t };
        }
    }
}

/// A square root of a quadratic residue `u` modulo `N`, via the roots
/// `u^((p+1)/4)` and `u^((q+1)/4)`.
fn crt_sqrt(u: &BigUint, sk: &RwKeypair) -> BigUint {
    let (p, q) = (&sk.p, &sk.q);
    let sp = u.modpow(&((p + 1u32) >> 2), p);
    let sq = u.modpow(&((q + 1u32) >> 2), q);
    let p_inv = (p % q).modpow(&(q - 2u32), q);
    let diff = (&sq + q - (&sp % q)) % q;
    sp + p * ((diff * p_inv) % q)
}

fn check_shape(sig: &RwSignature) -> Result<()> {
    if !matches!(sig.e, -1 | 1) || !matches!(sig.f, 1 | 2) || sig.s <= BigUint::one() {
        return Err(Error::MalformedSignature);
    }
    Ok(())
}

/// Full verification: `e f s² ≡ H(salt ∥ m) (mod N)` with `1 < s < N`.
pub fn rw_verify(sig: &RwSignature, m: &[u8], n: &BigUint) -> Result<Verdict> {
    check_shape(sig)?;
    if &sig.s >= n {
        return Err(Error::MalformedSignature);
    }
    let h = hash_to_integer(&sig.salt, m, n.bits() as u32) % n;
    let mut lhs = (&sig.s * &sig.s * u32::from(sig.f)) % n;
    if sig.e == -1 && !lhs.is_zero() {
        lhs = n - lhs;
    }
    Ok(Verdict::from(lhs == h))
}

/// Samples the secret prime `ℓ` of `mu` bits.
pub fn rw_ckeygen<R: RngCore + ?Sized>(mu: u32, rng: &mut R) -> Result<OddWordModulus> {
    sample_prime(PrimeWidth::new(mu)?, rng, &[])
}

pub fn rw_vkeygen(ell: OddWordModulus, n: &BigUint) -> RwVerificationKey {
    RwVerificationKey { ell, n_ell: reduce_big(n, &ell), modulus_bits: n.bits() as u32 }
}

fn reduce_big(x: &BigUint, ell: &OddWordModulus) -> u64 {
    x.iter_u64_digits()
        .rev()
        .fold(0u64, |acc, d| ((u128::from(acc) << 64 | u128::from(d)) % u128::from(ell.get())) as u64)
}

fn reduce_big_signed(x: &BigInt, ell: &OddWordModulus) -> u64 {
    let r = reduce_big(x.magnitude(), ell);
    if x.sign() == Sign::Minus {
        ell.neg(r)
    } else {
        r
    }
}

/// Compressed verification: `e f s² − t N ≡ H(salt ∥ m) (mod ℓ)`.
pub fn rw_cverify(sig: &RwSignature, m: &[u8], vk: &RwVerificationKey) -> Result<Verdict> {
    check_shape(sig)?;
    let ell = &vk.ell;
    let s = reduce_big(&sig.s, ell);
    let t = reduce_big_signed(&sig.t, ell);
    let h = reduce_big(&hash_to_integer(&sig.salt, m, vk.modulus_bits), ell);
    let ef = ell.reduce_signed(i64::from(sig.e) * i64::from(sig.f));
    let lhs = ell.sub(ell.mul(ef, ell.mul(s, s)), ell.mul(t, vk.n_ell));
    Ok(Verdict::from(lhs == h))
}

/// The residual `e f s² − t N − H(salt ∥ m)`; zero exactly for valid tuples.
pub fn rw_residual(sig: &RwSignature, m: &[u8], n: &BigUint) -> BigInt {
    let h = hash_to_integer(&sig.salt, m, n.bits() as u32);
    BigInt::from(sig.e) * BigInt::from(sig.f) * BigInt::from(&sig.s * &sig.s)
        - &sig.t * BigInt::from(n.clone())
        - BigInt::from(h)
}

/// Forges a tuple accepted by [`rw_cverify`] under `ℓ`: pick `t` so that
/// `H + tN` is a square modulo `ℓ`, and take `s` as its square root.
pub fn rw_forge_known_ell<R: RngCore + ?Sized>(
    ell: &OddWordModulus,
    m: &[u8],
    n: &BigUint,
    rng: &mut R,
) -> RwSignature {
    let n_ell = reduce_big(n, ell);
    loop {
        let mut salt = [0u8; SALT_LEN];
        rng.fill_bytes(&mut salt);
        let h = reduce_big(&hash_to_integer(&salt, m, n.bits() as u32), ell);
        for t in 0..64u64 {
            let x = ell.add(h, ell.mul(ell.reduce(t), n_ell));
            if let Some(root) = sqrt_mod(x, ell) {
                let s = if root > 1 { root } else { ell.get() - root };
                if s > 1 {
                    return RwSignature { e: 1, f: 1, salt, s: BigUint::from(s), t: BigInt::from(t) };
                }
            }
        }
    }
}

/// Tonelli-Shanks square root of a nonzero quadratic residue modulo a prime.
fn sqrt_mod(x: u64, ell: &OddWordModulus) -> Option<u64> {
    let p = ell.get();
    if x == 0 || ell.pow(x, (p - 1) / 2) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| ell.pow(z, (p - 1) / 2) == p - 1)?;
    let mut m = s;
    let mut c = ell.pow(z, q);
    let mut t = ell.pow(x, q);
    let mut r = ell.pow(x, q.div_ceil(2));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = ell.mul(tt, tt);
            i += 1;
        }
        let b = ell.pow(c, 1 << (m - i - 1));
        m = i;
        c = ell.mul(b, b);
        t = ell.mul(t, c);
        r = ell.mul(r, b);
    }
    Some(r)
}

/// Upper bound `2 κ Q / #Primes(μ)` on the success of `Q` forgery attempts
/// against a `mu`-bit secret prime, with `κ = ⌊log2 N / μ⌋`.
pub fn rw_forgery_bound(modulus_bits: u32, mu: u32, queries: f64) -> Result<f64> {
    let kappa = f64::from(modulus_bits / mu);
    let primes = if mu == 31 { PRIMES_31_COUNT as f64 } else { count_primes_bounds(mu)?.0 };
    Ok(2.0 * kappa * queries / primes)
}
