//! Wave-shape ternary code signatures.
//!
//! The public key is `R ∈ F₃^{k×(n−k)}`, giving the parity-check map
//! `M = (I_{n−k} | R)ᵀ`. A signature `s` of weight `w` is valid iff
//! `t = s − (H(salt ∥ m) | 0_k)` satisfies `t M = 0`. Compression applies a
//! secret full-rank `C ∈ F₃^{(n−k)×c}`: the verifier keeps `VK = M C` and
//! accepts iff `t VK = 0`.

mod trits;
pub mod toy;

pub use trits::{f3_matvec, TernaryMatrix, TritVec, TRITS_PER_WORD};

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::hash::{hash_to_trits, Salt, SALT_LEN};
use crate::tally::OpTally;
use crate::Verdict;

/// The three named parameter sets, tagged by signature size in bytes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WaveInstance {
    W822,
    W1249,
    W1644,
}

impl WaveInstance {
    pub const ALL: [WaveInstance; 3] = [Self::W822, Self::W1249, Self::W1644];

    pub fn tag(self) -> u16 {
        self.table().sig_bytes
    }

    pub fn from_tag(tag: u16) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.tag() == tag)
    }

    pub fn parse(name: &str) -> Option<Self> {
        let digits = name.trim_start_matches(|c: char| !c.is_ascii_digit());
        digits.parse().ok().and_then(Self::from_tag)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::W822 => "Wave822",
            Self::W1249 => "Wave1249",
            Self::W1644 => "Wave1644",
        }
    }

    pub fn table(self) -> &'static NamedWave {
        &WAVE_TABLE[self as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NamedWave {
    pub instance: WaveInstance,
    pub lambda: u32,
    pub sig_bytes: u16,
    pub n: usize,
    pub k: usize,
    pub w: usize,
}

pub const WAVE_TABLE: [NamedWave; 3] = [
    NamedWave { instance: WaveInstance::W822, lambda: 128, sig_bytes: 822, n: 8576, k: 4288, w: 7668 },
    NamedWave { instance: WaveInstance::W1249, lambda: 192, sig_bytes: 1249, n: 12544, k: 6272, w: 11226 },
    NamedWave { instance: WaveInstance::W1644, lambda: 256, sig_bytes: 1644, n: 16512, k: 8256, w: 14784 },
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WaveParams {
    pub n: usize,
    pub k: usize,
    pub w: usize,
    pub instance: Option<WaveInstance>,
}

impl WaveParams {
    pub fn new(n: usize, k: usize, w: usize) -> Result<Self> {
        if k == 0 || k >= n || w > n {
            return Err(Error::InvalidParameter("need 0 < k < n and w <= n"));
        }
        Ok(Self { n, k, w, instance: None })
    }

    pub fn named(instance: WaveInstance) -> Self {
        let t = instance.table();
        Self { n: t.n, k: t.k, w: t.w, instance: Some(instance) }
    }

    /// Redundancy `n − k`, the length of a syndrome.
    pub fn m(&self) -> usize {
        self.n - self.k
    }

    pub fn instance_tag(&self) -> u16 {
        self.instance.map_or(0, WaveInstance::tag)
    }

    /// Stored public key size, four trits per byte per row.
    pub fn pk_bytes(&self) -> usize {
        self.k * self.m().div_ceil(4)
    }
}

/// `log2(3) · c`, the security exponent of a codimension-`c` kernel.
pub fn wave_mu(c: usize) -> f64 {
    c as f64 * libm::log2(3.0)
}

/// The multiple of 8 whose exponent `c log2 3` is nearest `target_mu`.
pub fn wave_choose_c(target_mu: f64) -> (usize, f64) {
    let c = (1..=target_mu as usize)
        .map(|i| 8 * i)
        .min_by(|&a, &b| (wave_mu(a) - target_mu).abs().total_cmp(&(wave_mu(b) - target_mu).abs()))
        .unwrap_or(8);
    (c, wave_mu(c))
}

/// `c(n − c)/4` for `c` divisible by 4: the stored verification key size.
pub fn wave_vk_bytes(n: usize, c: usize) -> usize {
    (n - c) * c.div_ceil(4)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WavePublicKey {
    r: TernaryMatrix,
}

impl WavePublicKey {
    pub fn new(r: TernaryMatrix, params: &WaveParams) -> Result<Self> {
        if r.rows() != params.k || r.cols() != params.m() {
            return Err(Error::DimensionMismatch { expected: params.k * params.m(), got: r.rows() * r.cols() });
        }
        Ok(Self { r })
    }

    /// A uniformly random `R`.
    pub fn random<R: RngCore + ?Sized>(params: &WaveParams, rng: &mut R) -> Self {
        Self { r: TernaryMatrix::random(params.k, params.m(), rng) }
    }

    pub fn matrix(&self) -> &TernaryMatrix {
        &self.r
    }
}

/// A secret `C` in systematic form: the top `c × c` block is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveCompressionKey {
    c: TernaryMatrix,
}

impl WaveCompressionKey {
    pub fn new(c: TernaryMatrix) -> Result<Self> {
        let dim = c.cols();
        if dim == 0 || c.rows() < dim || c.row_range(0, dim) != TernaryMatrix::identity(dim) {
            return Err(Error::MalformedKey("compression matrix must start with an identity block"));
        }
        Ok(Self { c })
    }

    pub fn matrix(&self) -> &TernaryMatrix {
        &self.c
    }

    pub fn c(&self) -> usize {
        self.c.cols()
    }
}

/// The bottom `n − c` rows of `VK = (I | R)ᵀ C`; the top `c` rows are the
/// identity and are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveVerificationKey {
    bottom: TernaryMatrix,
}

impl WaveVerificationKey {
    pub fn new(bottom: TernaryMatrix) -> Result<Self> {
        if bottom.cols() == 0 {
            return Err(Error::MalformedKey("empty verification key"));
        }
        Ok(Self { bottom })
    }

    /// A random key of the right shape, for operation counts.
    pub fn random<R: RngCore + ?Sized>(params: &WaveParams, c: usize, rng: &mut R) -> Self {
        Self { bottom: TernaryMatrix::random(params.n - c, c, rng) }
    }

    pub fn c(&self) -> usize {
        self.bottom.cols()
    }

    /// Code length `n`.
    pub fn n(&self) -> usize {
        self.bottom.rows() + self.c()
    }

    pub fn stored_rows(&self) -> &TernaryMatrix {
        &self.bottom
    }

    /// The full `n × c` matrix, identity rows included.
    pub fn full(&self) -> TernaryMatrix {
        TernaryMatrix::identity(self.c()).vstack(&self.bottom).expect("same width")
    }

    pub fn serialized_len(&self) -> usize {
        self.bottom.serialized_len()
    }
}

/// Samples a systematic compression matrix of `c` columns.
pub fn wave_ckeygen<R: RngCore + ?Sized>(params: &WaveParams, c: usize, rng: &mut R) -> Result<WaveCompressionKey> {
    if c == 0 || c > params.m() {
        return Err(Error::InvalidParameter("compression dimension must be in 1..=n-k"));
    }
    let top = TernaryMatrix::identity(c);
    let rest = TernaryMatrix::random(params.m() - c, c, rng);
    WaveCompressionKey::new(top.vstack(&rest)?)
}

/// `VK = [C; R C]` with the leading identity rows dropped.
pub fn wave_vkeygen(pk: &WavePublicKey, ck: &WaveCompressionKey, params: &WaveParams) -> Result<WaveVerificationKey> {
    if pk.r.rows() != params.k || pk.r.cols() != params.m() {
        return Err(Error::DimensionMismatch { expected: params.m(), got: pk.r.cols() });
    }
    if ck.c.rows() != params.m() {
        return Err(Error::DimensionMismatch { expected: params.m(), got: ck.c.rows() });
    }
    let rc = pk.r.mul(&ck.c)?;
    let below = ck.c.row_range(ck.c(), params.m());
    WaveVerificationKey::new(below.vstack(&rc)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveSignature {
    pub salt: Salt,
    pub s: TritVec,
}

impl WaveSignature {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.salt.to_vec();
        out.extend(self.s.to_bytes());
        out
    }

    /// Decodes a full-length signature; anything else is malformed.
    pub fn from_bytes(bytes: &[u8], n: usize) -> Result<Self> {
        if bytes.len() != SALT_LEN + n.div_ceil(4) {
            return Err(Error::MalformedSignature);
        }
        let (salt, body) = bytes.split_at(SALT_LEN);
        let s = TritVec::from_bytes(body, n).map_err(|_| Error::MalformedSignature)?;
        Ok(Self { salt: salt.try_into().expect("salt length"), s })
    }
}

/// `t = s − (H(salt ∥ m) | 0_k)`, or `None` when the weight is wrong.
fn syndrome_input(sig: &WaveSignature, m: &[u8], params: &WaveParams) -> Result<Option<TritVec>> {
    if sig.s.len() != params.n {
        return Err(Error::MalformedSignature);
    }
    if sig.s.weight() != params.w {
        return Ok(None);
    }
    let h = TritVec::from_trits(&hash_to_trits(m, &sig.salt, params.m()))?;
    let mut t = sig.s.clone();
    t.sub_assign(&h.concat(&TritVec::zeros(params.k)));
    Ok(Some(t))
}

pub fn wave_verify(sig: &WaveSignature, m: &[u8], pk: &WavePublicKey, params: &WaveParams) -> Result<Verdict> {
    wave_verify_tallied(sig, m, pk, params, &mut OpTally::default())
}

pub fn wave_verify_tallied(
    sig: &WaveSignature,
    m: &[u8],
    pk: &WavePublicKey,
    params: &WaveParams,
    tally: &mut OpTally,
) -> Result<Verdict> {
    match syndrome_input(sig, m, params)? {
        Some(t) => Ok(Verdict::from(full_syndrome_is_zero(&t, pk, tally))),
        None => Ok(Verdict::Reject),
    }
}

/// `t (I | R)ᵀ = t_top + t_bottom R == 0`.
pub fn full_syndrome_is_zero(t: &TritVec, pk: &WavePublicKey, tally: &mut OpTally) -> bool {
    let m = pk.r.cols();
    let mut words = t.slice(0, m).words().to_vec();
    pk.r.accumulate_rows(&t.slice(m, t.len()), 0, &mut words);
    tally.mul += (t.len() * m) as u64;
    words.iter().all(|&w| w == 0)
}

/// `t VK == 0`, using the implicit identity rows.
pub fn compressed_syndrome_is_zero(t: &TritVec, vk: &WaveVerificationKey, tally: &mut OpTally) -> bool {
    let c = vk.c();
    let mut words = t.slice(0, c).words().to_vec();
    vk.bottom.accumulate_rows(&t.slice(c, t.len()), 0, &mut words);
    tally.mul += (t.len() * c) as u64;
    words.iter().all(|&w| w == 0)
}

pub fn wave_cverify(sig: &WaveSignature, m: &[u8], vk: &WaveVerificationKey, params: &WaveParams) -> Result<Verdict> {
    wave_cverify_tallied(sig, m, vk, params, &mut OpTally::default())
}

pub fn wave_cverify_tallied(
    sig: &WaveSignature,
    m: &[u8],
    vk: &WaveVerificationKey,
    params: &WaveParams,
    tally: &mut OpTally,
) -> Result<Verdict> {
    if vk.n() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, got: vk.n() });
    }
    match syndrome_input(sig, m, params)? {
        Some(t) => Ok(Verdict::from(compressed_syndrome_is_zero(&t, vk, tally))),
        None => Ok(Verdict::Reject),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn choose_c_levels() {
        assert_eq!(wave_choose_c(128.0).0, 80);
        assert_eq!(wave_choose_c(192.0).0, 120);
        assert_eq!(wave_choose_c(256.0).0, 160);
        assert!((wave_mu(80) - 126.797).abs() < 1e-3);
    }

    #[test]
    fn vk_size_formula() {
        assert_eq!(wave_vk_bytes(8576, 80), 80 * (8576 - 80) / 4);
        assert_eq!(wave_vk_bytes(8576, 80), 169_920);
    }

    #[test]
    fn instance_lookup() {
        assert_eq!(WaveInstance::parse("wave822"), Some(WaveInstance::W822));
        assert_eq!(WaveInstance::parse("1644"), Some(WaveInstance::W1644));
        assert_eq!(WaveInstance::parse("wave999"), None);
        // Published public key sizes at five trits per byte.
        for (i, pk) in WaveInstance::ALL.into_iter().zip([3_677_390.0, 7_867_598.0, 13_632_308.0]) {
            let t = i.table();
            assert!(((t.k * (t.n - t.k)) as f64 / 5.0 - pk).abs() < 2.0, "{}", i.name());
        }
    }

    #[test]
    fn ckeygen_is_systematic_full_rank() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let params = WaveParams::new(24, 12, 16).unwrap();
        let ck = wave_ckeygen(&params, 4, &mut rng).unwrap();
        assert_eq!(ck.matrix().rank(), 4);
        assert!(wave_ckeygen(&params, 0, &mut rng).is_err());
        assert!(wave_ckeygen(&params, 13, &mut rng).is_err());
        let other = wave_ckeygen(&params, 4, &mut rng).unwrap();
        assert_ne!(ck, other);
    }

    #[test]
    fn vkeygen_matches_schoolbook() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let params = WaveParams::new(20, 8, 12).unwrap();
        let pk = WavePublicKey::random(&params, &mut rng);
        let ck = wave_ckeygen(&params, 4, &mut rng).unwrap();
        let vk = wave_vkeygen(&pk, &ck, &params).unwrap();
        let h = TernaryMatrix::identity(params.m()).vstack(pk.matrix()).unwrap();
        assert_eq!(vk.full(), h.mul(ck.matrix()).unwrap());
        assert_eq!(vk.serialized_len(), wave_vk_bytes(20, 4));

        let zero = WavePublicKey::new(TernaryMatrix::zeros(8, 12), &params).unwrap();
        let vk0 = wave_vkeygen(&zero, &ck, &params).unwrap();
        assert_eq!(vk0.full(), ck.matrix().vstack(&TernaryMatrix::zeros(8, 4)).unwrap());
    }
}
