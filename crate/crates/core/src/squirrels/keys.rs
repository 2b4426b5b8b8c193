use alloc::vec::Vec;

use rand_core::RngCore;

use super::params::SquirrelsParams;
use crate::ecrt::{mod_ecrt, mod_ecrt_setup, q_coefficients, EcrtPrecomp, PrimeBasis, RnsResidues};
use crate::error::{Error, Result};
use crate::modmath::{inv_mod, sample_prime, PrimeWidth};

/// Residues `v_i mod p_j` of the public vector, `i < n − 1`; the last entry
/// `v_n = −1` is implicit. Stored per public prime: `v[j * (n − 1) + i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquirrelsPublicKey {
    n: usize,
    s: usize,
    v: Vec<u32>,
}

impl SquirrelsPublicKey {
    pub fn new(v: Vec<u32>, params: &SquirrelsParams) -> Result<Self> {
        let (n, s) = (params.n, params.s());
        if v.len() != (n - 1) * s {
            return Err(Error::DimensionMismatch { expected: (n - 1) * s, got: v.len() });
        }
        for (j, p) in params.basis.iter().enumerate() {
            if v[j * (n - 1)..(j + 1) * (n - 1)].iter().any(|&x| u64::from(x) >= p) {
                return Err(Error::MalformedKey("public residue not reduced"));
            }
        }
        Ok(Self { n, s, v })
    }

    /// A uniformly random key of the right shape, for sizing and operation
    /// counts at named parameters.
    pub fn random<R: RngCore + ?Sized>(params: &SquirrelsParams, rng: &mut R) -> Self {
        let n = params.n;
        let mut v = Vec::with_capacity((n - 1) * params.s());
        for p in params.basis.iter() {
            v.extend((0..n - 1).map(|_| (rng.next_u64() % p) as u32));
        }
        Self { n, s: params.s(), v }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Residues of all `v_i` modulo public prime `j`.
    pub fn column(&self, j: usize) -> &[u32] {
        &self.v[j * (self.n - 1)..(j + 1) * (self.n - 1)]
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.v[j * (self.n - 1) + i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.v
    }

    pub fn serialized_len(&self) -> usize {
        4 * self.v.len()
    }
}

/// The secret primes `r` with the explicit-CRT precomputation and
/// `I_j = (Δ mod r_j)^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquirrelsCompressionKey {
    precomp: EcrtPrecomp,
    inv_delta: Vec<u64>,
}

impl SquirrelsCompressionKey {
    pub fn from_parts(precomp: EcrtPrecomp, inv_delta: Vec<u64>) -> Result<Self> {
        let r = precomp.secret_basis();
        if inv_delta.len() != r.len() {
            return Err(Error::DimensionMismatch { expected: r.len(), got: inv_delta.len() });
        }
        for (k, m) in r.moduli().iter().enumerate() {
            if m.mul(m.reduce(inv_delta[k]), precomp.delta_residues()[k]) != 1 {
                return Err(Error::MalformedKey("I_j is not the inverse of Δ mod r_j"));
            }
        }
        Ok(Self { precomp, inv_delta })
    }

    pub fn precomp(&self) -> &EcrtPrecomp {
        &self.precomp
    }

    pub fn secret_basis(&self) -> &PrimeBasis {
        self.precomp.secret_basis()
    }

    pub fn inv_delta(&self) -> &[u64] {
        &self.inv_delta
    }

    pub fn t(&self) -> usize {
        self.inv_delta.len()
    }

    /// `4(s + 3)t`: per secret prime, `r_j`, `Δ mod r_j`, `I_j` and the `s`
    /// values `Δ_i mod r_j`.
    pub fn serialized_len(&self) -> usize {
        4 * (self.precomp.public_len() + 3) * self.t()
    }
}

/// Images `v̄_i` of the public vector modulo the secret primes, stored per
/// secret prime: `vbar[j * n + i]`. The last row is `r_j − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquirrelsVerificationKey {
    basis: PrimeBasis,
    inv_delta: Vec<u64>,
    n: usize,
    vbar: Vec<u64>,
}

impl SquirrelsVerificationKey {
    /// Builds a key from `r`, `I` and the `n − 1` stored rows per prime
    /// (`rows[j * (n − 1) + i]`).
    pub fn from_parts(basis: PrimeBasis, inv_delta: Vec<u64>, n: usize, rows: &[u64]) -> Result<Self> {
        let t = basis.len();
        if inv_delta.len() != t {
            return Err(Error::DimensionMismatch { expected: t, got: inv_delta.len() });
        }
        if n < 2 || rows.len() != t * (n - 1) {
            return Err(Error::DimensionMismatch { expected: t * n.saturating_sub(1), got: rows.len() });
        }
        let mut vbar = Vec::with_capacity(t * n);
        for (j, r) in basis.iter().enumerate() {
            let col = &rows[j * (n - 1)..(j + 1) * (n - 1)];
            if inv_delta[j] >= r || col.iter().any(|&x| x >= r) {
                return Err(Error::MalformedKey("residue not reduced"));
            }
            vbar.extend_from_slice(col);
            vbar.push(r - 1);
        }
        Ok(Self { basis, inv_delta, n, vbar })
    }

    pub fn secret_basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn inv_delta(&self) -> &[u64] {
        &self.inv_delta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.basis.len()
    }

    /// All `n` images modulo secret prime `j`, including the implicit last one.
    pub fn column(&self, j: usize) -> &[u64] {
        &self.vbar[j * self.n..(j + 1) * self.n]
    }

    /// The `n − 1` stored images modulo secret prime `j`.
    pub fn stored_column(&self, j: usize) -> &[u64] {
        &self.column(j)[..self.n - 1]
    }

    /// `4(n + 1)t`: per secret prime, `r_j`, `I_j` and `n − 1` images.
    pub fn serialized_len(&self) -> usize {
        4 * (self.n + 1) * self.t()
    }
}

/// Samples `t` secret 31-bit primes and precomputes what compression needs.
pub fn ckeygen<R: RngCore + ?Sized>(
    params: &SquirrelsParams,
    t: usize,
    rng: &mut R,
) -> Result<SquirrelsCompressionKey> {
    ckeygen_with_width(params, t, PrimeWidth::W31, rng)
}

/// As [`ckeygen`] with secret primes of another width. Every prime of the
/// width must exceed `k′max − k′min`.
pub fn ckeygen_with_width<R: RngCore + ?Sized>(
    params: &SquirrelsParams,
    t: usize,
    width: PrimeWidth,
    rng: &mut R,
) -> Result<SquirrelsCompressionKey> {
    if t == 0 {
        return Err(Error::InvalidParameter("at least one secret prime is required"));
    }
    if width.lower() <= params.k_prime_range() {
        return Err(Error::InvalidParameter("secret primes must exceed k'max - k'min"));
    }
    let mut exclude: Vec<u64> = params.basis.iter().collect();
    let mut secret = Vec::with_capacity(t);
    for _ in 0..t {
        let r = sample_prime(width, rng, &exclude)?;
        exclude.push(r.get());
        secret.push(r.get());
    }
    let r = PrimeBasis::new(&secret)?;
    let precomp = mod_ecrt_setup(&params.basis, &r)?;
    let inv_delta = r
        .moduli()
        .iter()
        .zip(precomp.delta_residues())
        .map(|(m, &d)| inv_mod(d, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(SquirrelsCompressionKey { precomp, inv_delta })
}

/// Maps every public residue vector through the explicit CRT.
///
/// `mod_ecrt` returns `v_i` or `v_i − Δ`; adding `Δ` gives `v_i + ε_i Δ`
/// with `ε_i ∈ {0, 1}`, the form the bound on `k′` assumes.
pub fn vkeygen(
    ck: &SquirrelsCompressionKey,
    pk: &SquirrelsPublicKey,
    params: &SquirrelsParams,
) -> Result<SquirrelsVerificationKey> {
    let (n, s) = (params.n, params.s());
    if pk.n != n || pk.s != s {
        return Err(Error::DimensionMismatch { expected: (n - 1) * s, got: pk.v.len() });
    }
    if ck.precomp.public_len() != s {
        return Err(Error::DimensionMismatch { expected: s, got: ck.precomp.public_len() });
    }
    let crt = q_coefficients(&params.basis);
    let r = ck.secret_basis();
    let t = r.len();
    let delta = ck.precomp.delta_residues();
    let mut rows = alloc::vec![0u64; t * (n - 1)];
    let mut x = alloc::vec![0u64; s];
    for i in 0..n - 1 {
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = u64::from(pk.get(i, j));
        }
        let z = mod_ecrt(&ck.precomp, &crt, &RnsResidues::new(x.clone(), &params.basis)?);
        for (k, m) in r.moduli().iter().enumerate() {
            rows[k * (n - 1) + i] = m.add(z.values()[k], delta[k]);
        }
    }
    SquirrelsVerificationKey::from_parts(r.clone(), ck.inv_delta.clone(), n, &rows)
}

/// A random verification key of the right shape, for operation counts.
pub fn random_vk<R: RngCore + ?Sized>(
    params: &SquirrelsParams,
    t: usize,
    rng: &mut R,
) -> Result<SquirrelsVerificationKey> {
    let n = params.n;
    let mut exclude: Vec<u64> = params.basis.iter().collect();
    let mut primes = Vec::with_capacity(t);
    for _ in 0..t {
        let r = sample_prime(PrimeWidth::W31, rng, &exclude)?.get();
        exclude.push(r);
        primes.push(r);
    }
    let basis = PrimeBasis::new(&primes)?;
    let inv: Vec<u64> = primes.iter().map(|&r| 1 + rng.next_u64() % (r - 1)).collect();
    let rows: Vec<u64> =
        primes.iter().flat_map(|&r| (0..n - 1).map(|_| rng.next_u64() % r).collect::<Vec<_>>()).collect();
    SquirrelsVerificationKey::from_parts(basis, inv, n, &rows)
}
