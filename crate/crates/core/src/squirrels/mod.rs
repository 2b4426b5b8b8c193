//! Squirrels-shape lattice signatures over co-cyclic lattices.
//!
//! The public key is a vector `v` with `v_n = −1` such that a short `s`
//! signs `m` iff `c = s + HashToPoint(salt ∥ m)` satisfies
//! `Σ c_i v_i ≡ 0 (mod Δ)`. Full verification checks this modulo each of
//! the `s` public primes dividing `Δ`; compressed verification recovers the
//! quotient `k′` modulo `t` secret primes and checks it is small and
//! consistent.

mod keys;
mod params;
pub mod toy;

pub use keys::{
    ckeygen, ckeygen_with_width, random_vk, vkeygen, SquirrelsCompressionKey, SquirrelsPublicKey,
    SquirrelsVerificationKey,
};
pub use params::{
    choose_t, ck_bytes, k_prime_bounds, log2_binomial, pk_bytes, secret_primes_mu, vk_bytes,
    NamedSquirrels, SquirrelsInstance, SquirrelsParams, SQUIRRELS_TABLE,
};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hash::{hash_to_point, Salt, SALT_LEN};
use crate::modmath::{ct_eq_mask, ct_le_mask};
use crate::tally::OpTally;
use crate::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquirrelsSignature {
    pub salt: Salt,
    pub s: Vec<i16>,
}

impl SquirrelsSignature {
    /// `salt ∥ s_1 ∥ … ∥ s_n`, coordinates as 16-bit little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(SALT_LEN + 2 * self.s.len());
        out.extend_from_slice(&self.salt);
        for &x in &self.s {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], n: usize) -> Result<Self> {
        if bytes.len() != SALT_LEN + 2 * n {
            return Err(Error::MalformedSignature);
        }
        let (salt, body) = bytes.split_at(SALT_LEN);
        let s: Vec<i16> = body.chunks_exact(2).map(|c| i16::from_le_bytes([c[0], c[1]])).collect();
        if s.contains(&i16::MIN) {
            return Err(Error::MalformedSignature);
        }
        Ok(Self { salt: salt.try_into().expect("salt length"), s })
    }

    pub fn norm_sq(&self) -> u64 {
        self.s.iter().map(|&x| (i64::from(x) * i64::from(x)) as u64).sum()
    }
}

/// `c = s + HashToPoint(salt ∥ m)`, after the shape and norm checks.
fn target(sig: &SquirrelsSignature, m: &[u8], params: &SquirrelsParams) -> Result<Option<Vec<i64>>> {
    if sig.s.len() != params.n || sig.s.contains(&i16::MIN) {
        return Err(Error::MalformedSignature);
    }
    if sig.norm_sq() > params.beta_sq {
        return Ok(None);
    }
    let h = hash_to_point(m, &sig.salt, params.q, params.n);
    Ok(Some(sig.s.iter().zip(&h).map(|(&s, &h)| i64::from(s) + i64::from(h)).collect()))
}

/// Full verification: `Σ_{i<n} c_i v_i ≡ c_n (mod p_j)` for every public prime.
pub fn verify(
    sig: &SquirrelsSignature,
    m: &[u8],
    pk: &SquirrelsPublicKey,
    params: &SquirrelsParams,
) -> Result<Verdict> {
    verify_tallied(sig, m, pk, params, &mut OpTally::default())
}

pub fn verify_tallied(
    sig: &SquirrelsSignature,
    m: &[u8],
    pk: &SquirrelsPublicKey,
    params: &SquirrelsParams,
    tally: &mut OpTally,
) -> Result<Verdict> {
    if pk.n() != params.n || pk.s() != params.s() {
        return Err(Error::DimensionMismatch { expected: params.n, got: pk.n() });
    }
    let Some(c) = target(sig, m, params)? else {
        return Ok(Verdict::Reject);
    };
    let n = params.n;
    let mut ok = true;
    for (j, p) in params.basis.moduli().iter().enumerate() {
        let col = pk.column(j);
        let mut acc = 0u64;
        for i in 0..n - 1 {
            acc = p.add(acc, p.mul(p.reduce_signed(c[i]), u64::from(col[i])));
        }
        tally.mul += (n - 1) as u64;
        tally.reduce += n as u64;
        ok &= acc == p.reduce_signed(c[n - 1]);
    }
    Ok(Verdict::from(ok))
}

/// Compressed verification: for each secret prime compute
/// `k′_j = ((Σ c_i v̄_i) I_j − k′min) mod r_j` and accept iff every `k′_j`
/// lies in `[0, k′max − k′min]` and all are equal.
///
/// The range and equality checks are evaluated with masks so that timing
/// does not depend on the secret residues.
pub fn cverify(
    sig: &SquirrelsSignature,
    m: &[u8],
    vk: &SquirrelsVerificationKey,
    params: &SquirrelsParams,
) -> Result<Verdict> {
    cverify_tallied(sig, m, vk, params, &mut OpTally::default())
}

pub fn cverify_tallied(
    sig: &SquirrelsSignature,
    m: &[u8],
    vk: &SquirrelsVerificationKey,
    params: &SquirrelsParams,
    tally: &mut OpTally,
) -> Result<Verdict> {
    if vk.n() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, got: vk.n() });
    }
    let Some(c) = target(sig, m, params)? else {
        return Ok(Verdict::Reject);
    };
    let (k_min, _) = params.k_prime_bounds();
    let range = params.k_prime_range();
    let shift = k_min.unsigned_abs();
    let mut mask = u64::MAX;
    let mut first = None;
    for (j, r) in vk.secret_basis().moduli().iter().enumerate() {
        let col = vk.column(j);
        let mut acc = 0u64;
        for (&ci, &vi) in c.iter().zip(col) {
            acc = r.add(acc, r.mul(r.reduce_signed(ci), vi));
        }
        let k = r.add(r.mul(acc, vk.inv_delta()[j]), r.reduce(shift));
        tally.mul += params.n as u64 + 1;
        tally.reduce += params.n as u64 + 1;
        mask &= ct_le_mask(k, range);
        mask &= ct_eq_mask(k, *first.get_or_insert(k));
    }
    Ok(Verdict::from(mask == u64::MAX))
}
