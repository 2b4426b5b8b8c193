//! Payload encodings.
//!
//! Squirrels residues are non-negative signed 32-bit fields. A toy
//! Squirrels payload starts with `n, q, β², s` and the `s` public primes;
//! a toy Wave payload starts with `n, k, w, c` (`c = 0` outside CK/VK).
//! Rabin-Williams files use the modulus size in bits as instance tag.

use compverify_core::ecrt::{default_precision, EcrtPrecomp, PrimeBasis};
use compverify_core::modmath::OddWordModulus;
use compverify_core::rw::{RwKeypair, RwSignature, RwVerificationKey};
use compverify_core::squirrels::toy::ToySecret;
use compverify_core::squirrels::{
    SquirrelsCompressionKey, SquirrelsInstance, SquirrelsParams, SquirrelsPublicKey, SquirrelsSignature,
    SquirrelsVerificationKey,
};
use compverify_core::wave::{
    TernaryMatrix, WaveCompressionKey, WaveInstance, WaveParams, WavePublicKey, WaveSignature, WaveVerificationKey,
};
use compverify_core::Error as CoreError;
use num_bigint::{BigInt, BigUint, Sign};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::format::{open, put_residue, seal, FormatError, Kind, Reader, Result, Scheme};

/// Any key file's content, with the parameters needed to use it.
#[derive(Clone, Debug)]
pub enum KeyMaterial {
    RwPublic { n: BigUint },
    RwSecret(RwKeypair),
    RwCompression(OddWordModulus),
    RwVerification(RwVerificationKey),
    SquirrelsPublic(SquirrelsParams, SquirrelsPublicKey),
    SquirrelsSecret(SquirrelsParams, ToySecret),
    SquirrelsCompression(SquirrelsParams, SquirrelsCompressionKey),
    SquirrelsVerification(SquirrelsParams, SquirrelsVerificationKey),
    WavePublic(WaveParams, WavePublicKey),
    /// The toy Wave signer needs only `R`.
    WaveSecret(WaveParams, WavePublicKey),
    WaveCompression(WaveParams, WaveCompressionKey),
    WaveVerification(WaveParams, WaveVerificationKey),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Signature {
    Rw(RwSignature),
    Squirrels(SquirrelsSignature),
    Wave(WaveSignature),
}

impl KeyMaterial {
    pub fn scheme(&self) -> Scheme {
        use KeyMaterial::*;
        match self {
            RwPublic { .. } | RwSecret(_) | RwCompression(_) | RwVerification(_) => Scheme::Rw,
            SquirrelsPublic(..) | SquirrelsSecret(..) | SquirrelsCompression(..) | SquirrelsVerification(..) => {
                Scheme::Squirrels
            }
            WavePublic(..) | WaveSecret(..) | WaveCompression(..) | WaveVerification(..) => Scheme::Wave,
        }
    }

    pub fn kind(&self) -> Kind {
        use KeyMaterial::*;
        match self {
            RwPublic { .. } | SquirrelsPublic(..) | WavePublic(..) => Kind::Pk,
            RwSecret(_) | SquirrelsSecret(..) | WaveSecret(..) => Kind::Sk,
            RwCompression(_) | SquirrelsCompression(..) | WaveCompression(..) => Kind::Ck,
            RwVerification(_) | SquirrelsVerification(..) | WaveVerification(..) => Kind::Vk,
        }
    }

    /// Instance tag written to the header.
    pub fn instance(&self) -> u16 {
        use KeyMaterial::*;
        match self {
            RwPublic { n } => n.bits() as u16,
            RwSecret(sk) => sk.bits() as u16,
            RwCompression(_) => 0,
            RwVerification(vk) => vk.modulus_bits as u16,
            SquirrelsPublic(p, _) | SquirrelsSecret(p, _) | SquirrelsCompression(p, _) | SquirrelsVerification(p, _) => {
                p.instance_tag()
            }
            WavePublic(p, _) | WaveSecret(p, _) | WaveCompression(p, _) | WaveVerification(p, _) => p.instance_tag(),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        use KeyMaterial::*;
        let mut out = Vec::new();
        match self {
            RwPublic { n } => out.extend(fixed_le(n, n.bits().div_ceil(8) as usize)),
            RwSecret(sk) => {
                put_big(&mut out, sk.p());
                put_big(&mut out, sk.q());
            }
            RwCompression(ell) => out.extend_from_slice(&ell.get().to_le_bytes()),
            RwVerification(vk) => {
                out.extend_from_slice(&vk.ell.get().to_le_bytes());
                out.extend_from_slice(&vk.n_ell.to_le_bytes());
            }
            SquirrelsPublic(params, pk) => {
                put_squirrels_prefix(&mut out, params);
                for &v in pk.as_slice() {
                    put_residue(&mut out, u64::from(v));
                }
            }
            SquirrelsSecret(params, sk) => {
                put_squirrels_prefix(&mut out, params);
                for &g in sk.basis() {
                    out.extend_from_slice(&g.to_le_bytes());
                }
            }
            SquirrelsCompression(params, ck) => {
                put_squirrels_prefix(&mut out, params);
                let pre = ck.precomp();
                for (k, r) in ck.secret_basis().iter().enumerate() {
                    put_residue(&mut out, r);
                    put_residue(&mut out, pre.delta_residues()[k]);
                    put_residue(&mut out, ck.inv_delta()[k]);
                    for i in 0..pre.public_len() {
                        put_residue(&mut out, pre.delta_i(i, k));
                    }
                }
            }
            SquirrelsVerification(params, vk) => {
                put_squirrels_prefix(&mut out, params);
                for (k, r) in vk.secret_basis().iter().enumerate() {
                    put_residue(&mut out, r);
                    put_residue(&mut out, vk.inv_delta()[k]);
                    for &v in vk.stored_column(k) {
                        put_residue(&mut out, v);
                    }
                }
            }
            WavePublic(params, pk) | WaveSecret(params, pk) => {
                put_wave_prefix(&mut out, params, 0);
                out.extend(pk.matrix().to_bytes());
            }
            WaveCompression(params, ck) => {
                if params.instance.is_some() {
                    out.extend_from_slice(&(ck.c() as u32).to_le_bytes());
                }
                put_wave_prefix(&mut out, params, ck.c());
                out.extend(ck.matrix().to_bytes());
            }
            WaveVerification(params, vk) => {
                put_wave_prefix(&mut out, params, vk.c());
                out.extend(vk.stored_rows().to_bytes());
            }
        }
        out
    }

    /// The complete file: header and payload.
    pub fn to_file(&self) -> Vec<u8> {
        seal(self.scheme(), self.kind(), self.instance(), &self.encode())
    }

    pub fn from_file(bytes: &[u8]) -> Result<Self> {
        let (header, payload) = open(bytes)?;
        if header.kind == Kind::Sig {
            return Err(FormatError::Unexpected { expected: "a key".into(), found: Kind::Sig.name().into() });
        }
        let mut r = Reader::new(payload);
        let key = match header.scheme {
            Scheme::Rw => decode_rw(header.kind, header.instance, &mut r)?,
            Scheme::Squirrels => decode_squirrels(header.kind, header.instance, &mut r)?,
            Scheme::Wave => decode_wave(header.kind, header.instance, &mut r)?,
        };
        r.finish()?;
        Ok(key)
    }

    /// Length `n` of signatures under this key, for lattice and code schemes.
    fn signature_len(&self) -> Option<usize> {
        use KeyMaterial::*;
        match self {
            SquirrelsPublic(p, _) | SquirrelsSecret(p, _) | SquirrelsCompression(p, _) | SquirrelsVerification(p, _) => {
                Some(p.n)
            }
            WavePublic(p, _) | WaveSecret(p, _) | WaveCompression(p, _) | WaveVerification(p, _) => Some(p.n),
            _ => None,
        }
    }
}

impl Signature {
    pub fn encode(&self) -> Vec<u8> {
        match self {
            Signature::Rw(sig) => {
                let mut out = vec![sig.e as u8, sig.f];
                out.extend_from_slice(&sig.salt);
                put_big(&mut out, &sig.s);
                out.push(u8::from(sig.t.sign() == Sign::Minus));
                put_big(&mut out, sig.t.magnitude());
                out
            }
            Signature::Squirrels(sig) => sig.to_bytes(),
            Signature::Wave(sig) => sig.to_bytes(),
        }
    }

    pub fn to_file(&self, key: &KeyMaterial) -> Vec<u8> {
        seal(key.scheme(), Kind::Sig, key.instance(), &self.encode())
    }

    /// Decodes a signature meant for `key`; scheme and instance must agree.
    pub fn from_file(bytes: &[u8], key: &KeyMaterial) -> Result<Self> {
        let (header, payload) = open(bytes)?;
        if header.kind != Kind::Sig {
            return Err(FormatError::Unexpected { expected: Kind::Sig.name().into(), found: header.kind.name().into() });
        }
        if header.scheme != key.scheme() || header.instance != key.instance() {
            return Err(FormatError::Unexpected {
                expected: format!("{} instance {}", key.scheme().name(), key.instance()),
                found: format!("{} instance {}", header.scheme.name(), header.instance),
            });
        }
        let n = key.signature_len();
        match header.scheme {
            Scheme::Rw => {
                let mut r = Reader::new(payload);
                let e = r.u8()? as i8;
                let f = r.u8()?;
                let salt = r.take(16)?.try_into().expect("16 bytes");
                let s = get_big(&mut r)?;
                let negative = match r.u8()? {
                    0 => false,
                    1 => true,
                    _ => return Err(FormatError::Payload("bad sign byte")),
                };
                let magnitude = get_big(&mut r)?;
                if negative && magnitude == BigUint::ZERO {
                    return Err(FormatError::Payload("negative zero"));
                }
                r.finish()?;
                let t = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, magnitude);
                Ok(Signature::Rw(RwSignature { e, f, salt, s, t }))
            }
            Scheme::Squirrels => Ok(Signature::Squirrels(SquirrelsSignature::from_bytes(payload, n.expect("n"))?)),
            Scheme::Wave => Ok(Signature::Wave(WaveSignature::from_bytes(payload, n.expect("n"))?)),
        }
    }
}

/// `x` as exactly `len` little-endian bytes.
fn fixed_le(x: &BigUint, len: usize) -> Vec<u8> {
    let mut b = x.to_bytes_le();
    b.resize(len, 0);
    b
}

/// Length-prefixed minimal little-endian encoding.
fn put_big(out: &mut Vec<u8>, x: &BigUint) {
    let b = x.to_bytes_le();
    out.extend_from_slice(&(b.len() as u32).to_le_bytes());
    out.extend(b);
}

fn get_big(r: &mut Reader) -> Result<BigUint> {
    let len = r.u32()? as usize;
    let b = r.take(len)?;
    let x = BigUint::from_bytes_le(b);
    if x.to_bytes_le() != b {
        return Err(FormatError::Payload("non-minimal integer encoding"));
    }
    Ok(x)
}

fn put_squirrels_prefix(out: &mut Vec<u8>, params: &SquirrelsParams) {
    if params.instance.is_some() {
        return;
    }
    out.extend_from_slice(&(params.n as u32).to_le_bytes());
    out.extend_from_slice(&params.q.to_le_bytes());
    out.extend_from_slice(&params.beta_sq.to_le_bytes());
    out.extend_from_slice(&(params.s() as u32).to_le_bytes());
    for p in params.basis.iter() {
        put_residue(out, p);
    }
}

fn squirrels_params(instance: u16, r: &mut Reader) -> Result<SquirrelsParams> {
    if instance != 0 {
        let inst = SquirrelsInstance::from_tag(instance).ok_or(FormatError::Payload("unknown Squirrels instance"))?;
        return Ok(SquirrelsParams::named(inst));
    }
    let n = r.u32()? as usize;
    let q = r.u32()?;
    let beta_sq = r.u64()?;
    let s = r.u32()? as usize;
    if s == 0 || s * 4 > r.remaining() {
        return Err(FormatError::Payload("bad public prime count"));
    }
    let primes = (0..s).map(|_| r.residue()).collect::<Result<Vec<_>>>()?;
    Ok(SquirrelsParams::new(n, q, beta_sq, PrimeBasis::new(&primes)?)?)
}

fn put_wave_prefix(out: &mut Vec<u8>, params: &WaveParams, c: usize) {
    if params.instance.is_some() {
        return;
    }
    for v in [params.n, params.k, params.w, c] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
}

/// Parameters and the compression dimension, `None` for a named file
/// (where it must come from elsewhere).
fn wave_params(instance: u16, r: &mut Reader) -> Result<(WaveParams, Option<usize>)> {
    if instance != 0 {
        let inst = WaveInstance::from_tag(instance).ok_or(FormatError::Payload("unknown Wave instance"))?;
        return Ok((WaveParams::named(inst), None));
    }
    let n = r.u32()? as usize;
    let k = r.u32()? as usize;
    let w = r.u32()? as usize;
    let c = r.u32()? as usize;
    Ok((WaveParams::new(n, k, w)?, Some(c)))
}

fn decode_rw(kind: Kind, instance: u16, r: &mut Reader) -> Result<KeyMaterial> {
    let bits = u32::from(instance);
    Ok(match kind {
        Kind::Pk => {
            let n = BigUint::from_bytes_le(r.take(bits.div_ceil(8) as usize)?);
            if n.bits() != u64::from(bits) {
                return Err(FormatError::Payload("modulus size disagrees with header"));
            }
            KeyMaterial::RwPublic { n }
        }
        Kind::Sk => {
            let p = get_big(r)?;
            let q = get_big(r)?;
            // Primality is re-checked with a fixed seed so decoding is deterministic.
            let sk = RwKeypair::from_primes(p, q, &mut ChaCha20Rng::seed_from_u64(0))?;
            if sk.bits() != bits {
                return Err(FormatError::Payload("modulus size disagrees with header"));
            }
            KeyMaterial::RwSecret(sk)
        }
        Kind::Ck => KeyMaterial::RwCompression(rw_prime(r.u64()?)?),
        Kind::Vk => {
            let ell = rw_prime(r.u64()?)?;
            let n_ell = r.u64()?;
            if n_ell >= ell.get() {
                return Err(FormatError::Payload("N mod ell not reduced"));
            }
            KeyMaterial::RwVerification(RwVerificationKey { ell, n_ell, modulus_bits: bits })
        }
        Kind::Sig => unreachable!("signatures are decoded separately"),
    })
}

fn rw_prime(ell: u64) -> Result<OddWordModulus> {
    if !compverify_core::modmath::is_prime(ell) {
        return Err(FormatError::Payload("secret modulus is not prime"));
    }
    Ok(OddWordModulus::new(ell)?)
}

fn decode_squirrels(kind: Kind, instance: u16, r: &mut Reader) -> Result<KeyMaterial> {
    let params = squirrels_params(instance, r)?;
    let (n, s) = (params.n, params.s());
    Ok(match kind {
        Kind::Pk => {
            let v = (0..(n - 1) * s).map(|_| r.residue().map(|x| x as u32)).collect::<Result<Vec<_>>>()?;
            let pk = SquirrelsPublicKey::new(v, &params)?;
            KeyMaterial::SquirrelsPublic(params, pk)
        }
        Kind::Sk => {
            let g = (0..n * n).map(|_| r.i64()).collect::<Result<Vec<_>>>()?;
            let sk = ToySecret::from_basis(n, g)?;
            if sk.delta() != params.basis.iter().product::<u64>() {
                return Err(FormatError::Payload("basis determinant disagrees with the public primes"));
            }
            KeyMaterial::SquirrelsSecret(params, sk)
        }
        Kind::Ck => {
            let t = per_prime_count(r.remaining(), 4 * (s + 3))?;
            let (mut primes, mut delta, mut inv, mut delta_i) = (vec![], vec![], vec![], vec![0u64; t * s]);
            for k in 0..t {
                primes.push(r.residue()?);
                delta.push(r.residue()?);
                inv.push(r.residue()?);
                for slot in &mut delta_i[k * s..(k + 1) * s] {
                    *slot = r.residue()?;
                }
            }
            if let Some(&p) = primes.iter().find(|&&p| params.basis.contains(p)) {
                return Err(CoreError::SharedFactor(p).into());
            }
            let pre = EcrtPrecomp::from_parts(PrimeBasis::new(&primes)?, s, delta, delta_i, default_precision(s))?;
            KeyMaterial::SquirrelsCompression(params, SquirrelsCompressionKey::from_parts(pre, inv)?)
        }
        Kind::Vk => {
            let t = per_prime_count(r.remaining(), 4 * (n + 1))?;
            let (mut primes, mut inv, mut rows) = (vec![], vec![], Vec::with_capacity(t * (n - 1)));
            for _ in 0..t {
                primes.push(r.residue()?);
                inv.push(r.residue()?);
                for _ in 0..n - 1 {
                    rows.push(r.residue()?);
                }
            }
            let vk = SquirrelsVerificationKey::from_parts(PrimeBasis::new(&primes)?, inv, n, &rows)?;
            KeyMaterial::SquirrelsVerification(params, vk)
        }
        Kind::Sig => unreachable!("signatures are decoded separately"),
    })
}

fn per_prime_count(remaining: usize, per_prime: usize) -> Result<usize> {
    if remaining == 0 || !remaining.is_multiple_of(per_prime) {
        return Err(FormatError::Payload("payload is not a whole number of per-prime blocks"));
    }
    Ok(remaining / per_prime)
}

fn decode_wave(kind: Kind, instance: u16, r: &mut Reader) -> Result<KeyMaterial> {
    // A named CK starts with its dimension, ahead of the (empty) prefix.
    let named_ck_c = if instance != 0 && kind == Kind::Ck { Some(r.u32()? as usize) } else { None };
    let (params, prefix_c) = wave_params(instance, r)?;
    let m = params.m();
    Ok(match kind {
        Kind::Pk | Kind::Sk => {
            if prefix_c.is_some_and(|c| c != 0) {
                return Err(FormatError::Payload("key carries a compression dimension"));
            }
            let pk = WavePublicKey::new(TernaryMatrix::from_bytes(r.rest(), params.k, m)?, &params)?;
            if kind == Kind::Pk {
                KeyMaterial::WavePublic(params, pk)
            } else {
                KeyMaterial::WaveSecret(params, pk)
            }
        }
        Kind::Ck => {
            let c = named_ck_c.or(prefix_c).expect("one of the two is present");
            if c == 0 || c > m {
                return Err(FormatError::Payload("compression dimension out of range"));
            }
            let ck = WaveCompressionKey::new(TernaryMatrix::from_bytes(r.rest(), m, c)?)?;
            KeyMaterial::WaveCompression(params, ck)
        }
        Kind::Vk => {
            let rest = r.rest();
            let c = match prefix_c {
                Some(c) => c,
                None => named_vk_dimension(params.n, m, rest.len())?,
            };
            if c == 0 || c > m {
                return Err(FormatError::Payload("compression dimension out of range"));
            }
            let vk = WaveVerificationKey::new(TernaryMatrix::from_bytes(rest, params.n - c, c)?)?;
            KeyMaterial::WaveVerification(params, vk)
        }
        Kind::Sig => unreachable!("signatures are decoded separately"),
    })
}

/// The unique `c ≤ m` with `(n − c)⌈c/4⌉ = len`.
fn named_vk_dimension(n: usize, m: usize, len: usize) -> Result<usize> {
    let mut found = (1..=m).filter(|&c| (n - c) * c.div_ceil(4) == len);
    match (found.next(), found.next()) {
        (Some(c), None) => Ok(c),
        (None, _) => Err(FormatError::Payload("no compression dimension fits the payload")),
        (Some(_), Some(_)) => Err(FormatError::Payload("ambiguous compression dimension")),
    }
}
