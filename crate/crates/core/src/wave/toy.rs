//! Desk-scale signing for tests: without a trapdoor, choose the last `k`
//! trits freely and solve for the first `n − k` through the identity block.

use rand_core::RngCore;

use super::{f3_matvec, TernaryMatrix, TritVec, WaveParams, WavePublicKey, WaveSignature};
use crate::error::{Error, Result};
use crate::hash::{hash_to_trits, SALT_LEN};

/// Largest code length the toy signer accepts.
pub const MAX_TOY_N: usize = 64;

/// Uniform random `R`.
pub fn wave_toy_keygen<R: RngCore + ?Sized>(params: &WaveParams, rng: &mut R) -> WavePublicKey {
    WavePublicKey::random(params, rng)
}

/// Signs with `s = (h − s_R R | s_R)`, resampling salt and `s_R` until the
/// weight is exactly `w`.
pub fn wave_toy_sign<R: RngCore + ?Sized>(
    pk: &WavePublicKey,
    m: &[u8],
    params: &WaveParams,
    max_attempts: u32,
    rng: &mut R,
) -> Result<WaveSignature> {
    if params.n > MAX_TOY_N {
        return Err(Error::InvalidParameter("toy signing is limited to n <= 64"));
    }
    for _ in 0..max_attempts {
        let mut salt = [0u8; SALT_LEN];
        rng.fill_bytes(&mut salt);
        let mut top = TritVec::from_trits(&hash_to_trits(m, &salt, params.m()))?;
        let s_r = TritVec::random(params.k, rng);
        top.sub_assign(&f3_matvec(&s_r, pk.matrix())?);
        let s = top.concat(&s_r);
        if s.weight() == params.w {
            return Ok(WaveSignature { salt, s });
        }
    }
    Err(Error::ResampleLimit(max_attempts))
}

/// Default toy shape: `n = 48`, `k = 24` and the typical weight `2n/3`.
pub fn default_toy_params() -> WaveParams {
    WaveParams::new(48, 24, 32).expect("valid toy shape")
}

/// The dense parity-check map `(I_{n−k} | R)ᵀ`.
pub fn parity_check(pk: &WavePublicKey) -> TernaryMatrix {
    TernaryMatrix::identity(pk.matrix().cols()).vstack(pk.matrix()).expect("same width")
}
