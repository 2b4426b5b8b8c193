//! Explicit modular CRT.
//!
//! Converts a value given by its residues modulo a public prime basis `p`
//! into residues modulo a second (secret) basis `r`, without ever forming
//! the integer or the product `Δ = p_1 ⋯ p_s`. The result is either `x` or
//! `x − Δ`; the ambiguity comes from approximating `⌊α⌋` in fixed point,
//! where `α = Σ x_i q_i / p_i` and `x = αΔ − ⌊α⌋Δ`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::modmath::{inv_mod, is_prime, OddWordModulus};

/// Maximum basis length for which the fixed-point accumulator is known not
/// to overflow 64 bits.
pub const MAX_BASIS_LEN: usize = 1 << 16;
/// Maximum fixed-point precision.
pub const MAX_PRECISION: u32 = 32;

/// An ordered list of pairwise distinct primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeBasis {
    primes: Vec<OddWordModulus>,
}

impl PrimeBasis {
    pub fn new(primes: &[u64]) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::InvalidParameter("prime basis must be non-empty"));
        }
        if primes.len() > MAX_BASIS_LEN {
            return Err(Error::InvalidParameter("prime basis too long"));
        }
        let mut out = Vec::with_capacity(primes.len());
        for (i, &p) in primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(Error::InvalidParameter("basis entry is not prime"));
            }
            if primes[..i].contains(&p) {
                return Err(Error::InvalidParameter("basis entries must be distinct"));
            }
            out.push(OddWordModulus::new(p)?);
        }
        Ok(Self { primes: out })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn moduli(&self) -> &[OddWordModulus] {
        &self.primes
    }

    pub fn get(&self, i: usize) -> u64 {
        self.primes[i].get()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().map(|m| m.get())
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.iter().any(|m| m.get() == p)
    }

    /// Residues of a machine integer over this basis.
    pub fn residues_of(&self, x: u64) -> RnsResidues {
        RnsResidues(self.primes.iter().map(|m| m.reduce(x)).collect())
    }
}

/// A value in residue form `⟦x⟧_m = (x mod m_1, …, x mod m_s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RnsResidues(Vec<u64>);

impl RnsResidues {
    /// Checks that every entry is reduced modulo the matching basis prime.
    pub fn new(values: Vec<u64>, basis: &PrimeBasis) -> Result<Self> {
        if values.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: values.len() });
        }
        if values.iter().zip(basis.iter()).any(|(&v, p)| v >= p) {
            return Err(Error::InvalidParameter("residue not reduced"));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u64> {
        self.0
    }
}

/// CRT coefficients `q_i = (Δ/p_i)^{-1} mod p_i`, with the basis they belong to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtCoefficients {
    basis: PrimeBasis,
    q: Vec<u64>,
}

impl CrtCoefficients {
    pub fn basis(&self) -> &PrimeBasis {
        &self.basis
    }

    pub fn values(&self) -> &[u64] {
        &self.q
    }
}

/// Computes the `q_i` with word arithmetic only: for each `i`, multiply the
/// other primes together modulo `p_i`, then invert.
pub fn q_coefficients(p: &PrimeBasis) -> CrtCoefficients {
    let moduli = p.moduli();
    let q = moduli
        .iter()
        .enumerate()
        .map(|(i, pi)| {
            let prod = moduli
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(pi.reduce(1), |acc, (_, pj)| pi.mul(acc, pi.reduce(pj.get())));
            // Distinct primes are coprime, so the product is a unit.
            inv_mod(prod, pi).expect("distinct primes are coprime")
        })
        .collect();
    CrtCoefficients { basis: p.clone(), q }
}

/// Default fixed-point precision `⌈log2 s⌉ + 2`.
pub fn default_precision(s: usize) -> u32 {
    ceil_log2(s) + 2
}

/// Minimum admissible precision `⌈log2 s⌉ + 1`.
pub fn min_precision(s: usize) -> u32 {
    ceil_log2(s) + 1
}

fn ceil_log2(s: usize) -> u32 {
    if s <= 1 {
        0
    } else {
        usize::BITS - (s - 1).leading_zeros()
    }
}

/// Precomputed residues of `Δ` and of every `Δ_i = Δ/p_i` over a secret basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcrtPrecomp {
    secret: PrimeBasis,
    public_len: usize,
    /// `Δ mod r_k`, one per secret prime.
    delta: Vec<u64>,
    /// `Δ_i mod r_k`, stored row `k` (secret prime) major: `[k * s + i]`.
    delta_i: Vec<u64>,
    precision: u32,
}

impl EcrtPrecomp {
    pub fn secret_basis(&self) -> &PrimeBasis {
        &self.secret
    }

    pub fn public_len(&self) -> usize {
        self.public_len
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `⟦Δ⟧_r`.
    pub fn delta_residues(&self) -> &[u64] {
        &self.delta
    }

    /// `Δ_i mod r_k`.
    pub fn delta_i(&self, i: usize, k: usize) -> u64 {
        self.delta_i[k * self.public_len + i]
    }

    /// `⟦Δ_i⟧_r` as a vector over the secret basis.
    pub fn delta_i_residues(&self, i: usize) -> Vec<u64> {
        (0..self.secret.len()).map(|k| self.delta_i(i, k)).collect()
    }

    /// Rebuilds a precomputation from stored parts (e.g. a deserialized key).
    pub fn from_parts(
        secret: PrimeBasis,
        public_len: usize,
        delta: Vec<u64>,
        delta_i: Vec<u64>,
        precision: u32,
    ) -> Result<Self> {
        let t = secret.len();
        if delta.len() != t {
            return Err(Error::DimensionMismatch { expected: t, got: delta.len() });
        }
        if delta_i.len() != t * public_len {
            return Err(Error::DimensionMismatch { expected: t * public_len, got: delta_i.len() });
        }
        check_precision(public_len, precision)?;
        for (k, r) in secret.iter().enumerate() {
            let row = &delta_i[k * public_len..(k + 1) * public_len];
            if delta[k] >= r || row.iter().any(|&v| v >= r) {
                return Err(Error::MalformedKey("residue not reduced"));
            }
        }
        Ok(Self { secret, public_len, delta, delta_i, precision })
    }
}

fn check_precision(s: usize, a: u32) -> Result<()> {
    if a < min_precision(s) {
        return Err(Error::InvalidParameter("precision below ceil(log2 s) + 1"));
    }
    if a > MAX_PRECISION || s > MAX_BASIS_LEN {
        return Err(Error::InvalidParameter("precision or basis length too large for the accumulator"));
    }
    Ok(())
}

/// Computes `⟦Δ⟧_r` and `(⟦Δ_i⟧_r)_i` by running products, at the default
/// precision.
pub fn mod_ecrt_setup(p: &PrimeBasis, r: &PrimeBasis) -> Result<EcrtPrecomp> {
    mod_ecrt_setup_with_precision(p, r, default_precision(p.len()))
}

pub fn mod_ecrt_setup_with_precision(
    p: &PrimeBasis,
    r: &PrimeBasis,
    precision: u32,
) -> Result<EcrtPrecomp> {
    let s = p.len();
    check_precision(s, precision)?;
    if let Some(shared) = r.iter().find(|&rk| p.contains(rk)) {
        return Err(Error::SharedFactor(shared));
    }
    let t = r.len();
    let mut delta = Vec::with_capacity(t);
    let mut delta_i = alloc::vec![0u64; t * s];
    for (k, rk) in r.moduli().iter().enumerate() {
        let u: Vec<u64> = p.iter().map(|pi| rk.reduce(pi)).collect();
        // Prefix products in place, then sweep a suffix product backwards.
        let row = &mut delta_i[k * s..(k + 1) * s];
        let mut acc = rk.reduce(1);
        for (c, &ui) in row.iter_mut().zip(&u) {
            *c = acc;
            acc = rk.mul(acc, ui);
        }
        delta.push(acc);
        let mut suffix = rk.reduce(1);
        for (c, &ui) in row.iter_mut().zip(&u).rev() {
            *c = rk.mul(*c, suffix);
            suffix = rk.mul(suffix, ui);
        }
    }
    debug_assert_eq!(delta.len(), t);
    Ok(EcrtPrecomp { secret: r.clone(), public_len: s, delta, delta_i, precision })
}

/// `⌊2^a · y / p⌋` by doubling `y mod p` `a` times and recording overflows;
/// the whole part `⌊y/p⌋` contributes `⌊y/p⌋ · 2^a`.
///
/// Requires `⌊y/p⌋ < 2^(64-a)`.
pub fn floor_accumulate(y: u64, p: &OddWordModulus, a: u32) -> u64 {
    let m = p.get();
    let whole = y / m;
    let mut rem = y - whole * m;
    let mut bits = 0u64;
    for _ in 0..a {
        // rem < m < 2^63, so the doubling cannot overflow.
        rem <<= 1;
        let over = u64::from(rem >= m);
        rem -= m * over;
        bits = (bits << 1) | over;
    }
    (whole << a) | bits
}

/// Residues of `x` or `x − Δ` over the secret basis, from `⟦x⟧_p`.
///
/// When `x < (1 − s/2^a)Δ` the result is exactly `⟦x⟧_r`.
pub fn mod_ecrt(pre: &EcrtPrecomp, q: &CrtCoefficients, x: &RnsResidues) -> RnsResidues {
    mod_ecrt_traced(pre, q, x).0
}

/// As [`mod_ecrt`], also returning the computed floor `f ∈ {⌊α⌋, ⌊α⌋+1}`
/// where `α = Σ (x_i q_i mod p_i) / p_i`.
pub fn mod_ecrt_traced(pre: &EcrtPrecomp, q: &CrtCoefficients, x: &RnsResidues) -> (RnsResidues, u64) {
    let p = q.basis().moduli();
    let s = p.len();
    assert_eq!(s, pre.public_len, "CRT coefficients and precomputation disagree on s");
    assert_eq!(x.values().len(), s, "residue vector length must equal s");
    let a = pre.precision;
    let r = pre.secret.moduli();
    let mut z = alloc::vec![0u64; r.len()];
    let mut f = s as u64;
    for (j, (pj, (&xj, &qj))) in p.iter().zip(x.values().iter().zip(q.values())).enumerate() {
        let y = pj.mul(xj, qj);
        f += floor_accumulate(y, pj, a);
        for (k, rk) in r.iter().enumerate() {
            let term = rk.mul(rk.reduce(y), pre.delta_i(j, k));
            z[k] = rk.add(z[k], term);
        }
    }
    let f = f >> a;
    for (k, rk) in r.iter().enumerate() {
        z[k] = rk.sub(z[k], rk.mul(rk.reduce(f), pre.delta[k]));
    }
    (RnsResidues(z), f)
}
