//! Word-sized modular arithmetic and random prime generation.
//!
//! Every modulus is odd and below 2^63, so Montgomery reduction with
//! R = 2^64 applies and all products fit in a `u128`. The multiplication,
//! reduction and inversion routines never branch on operand values and never
//! index memory with them; they are used on the verifier's secret primes.

use rand_core::RngCore;

use crate::error::{Error, Result};

/// Number of 31-bit primes, `#{2^30 < p < 2^31 : p prime}`.
pub const PRIMES_31_COUNT: u64 = 105_097_565 - 54_400_028;

/// The unique odd composite in (2^30, 2^31) that is a strong pseudoprime to
/// the bases 2, 3 and 5.
pub const SPSP_235_EXCEPTION: u64 = 1_157_839_381;

/// Miller-Rabin bases that are deterministic for every 64-bit input.
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// An odd modulus `2 < m < 2^63` with precomputed Montgomery constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OddWordModulus {
    m: u64,
    /// `-m^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod m`
    r2: u64,
}

impl OddWordModulus {
    pub fn new(m: u64) -> Result<Self> {
        if m & 1 == 0 || m <= 2 || m >> 63 != 0 {
            return Err(Error::InvalidParameter("modulus must be odd and in (2, 2^63)"));
        }
        // Newton iteration doubles the number of correct low bits each step.
        let mut inv = m;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r1 = ((1u128 << 64) % u128::from(m)) as u64;
        let r2 = ((u128::from(r1) * u128::from(r1)) % u128::from(m)) as u64;
        Ok(Self { m, neg_inv: inv.wrapping_neg(), r2 })
    }

    #[inline]
    pub const fn get(&self) -> u64 {
        self.m
    }

    /// Bit length of the modulus.
    pub const fn bits(&self) -> u32 {
        64 - self.m.leading_zeros()
    }

    /// Montgomery reduction: `t * 2^-64 mod m` for `t < m * 2^64`.
    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let q = (t as u64).wrapping_mul(self.neg_inv);
        // t + q*m < 2 * m * 2^64 <= 2^128 because m < 2^63.
        let s = t + u128::from(q) * u128::from(self.m);
        ct_reduce_once((s >> 64) as u64, self.m)
    }

    /// `x mod m` for any 64-bit `x`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let xr = self.redc(u128::from(x));
        self.redc(u128::from(xr) * u128::from(self.r2))
    }

    /// `x mod m` for a signed input, returned in `[0, m)`.
    #[inline]
    pub fn reduce_signed(&self, x: i64) -> u64 {
        let r = self.reduce(x.unsigned_abs());
        let neg = ct_mask(x < 0);
        let negated = self.neg(r);
        (r & !neg) | (negated & neg)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.m && b < self.m);
        let abr = self.redc(u128::from(a) * u128::from(b));
        self.redc(u128::from(abr) * u128::from(self.r2))
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        // a + b < 2^64 since both are below 2^63.
        ct_reduce_once(a + b, self.m)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (d, borrow) = a.overflowing_sub(b);
        d.wrapping_add(self.m & ct_mask(borrow))
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    /// Square-and-multiply exponentiation; the exponent is treated as public.
    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut result = self.reduce(1);
        let mut b = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }
}

/// All-ones when `cond` holds, zero otherwise.
#[inline]
pub(crate) fn ct_mask(cond: bool) -> u64 {
    0u64.wrapping_sub(u64::from(cond))
}

/// `x - m` if `x >= m`, else `x`; requires `x < 2m`.
#[inline]
fn ct_reduce_once(x: u64, m: u64) -> u64 {
    let (d, borrow) = x.overflowing_sub(m);
    d.wrapping_add(m & ct_mask(borrow))
}

/// All-ones iff `a == b`, without branching.
#[inline]
pub(crate) fn ct_eq_mask(a: u64, b: u64) -> u64 {
    let x = a ^ b;
    // (x | -x) has its top bit set iff x != 0.
    let nonzero = (x | x.wrapping_neg()) >> 63;
    nonzero.wrapping_sub(1)
}

/// All-ones iff `a <= b`, for `a, b < 2^63`.
#[inline]
pub(crate) fn ct_le_mask(a: u64, b: u64) -> u64 {
    // b - a wraps (top bit set) exactly when a > b.
    let gt = (b.wrapping_sub(a)) >> 63;
    gt.wrapping_sub(1)
}

/// `a * b mod m`.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: &OddWordModulus) -> u64 {
    m.mul(a, b)
}

/// `a^{-1} mod m` by a binary extended gcd with a fixed iteration count.
///
/// Maintains `a = x*u` and `b = x*v` (mod m); `b` stays odd. Each round
/// shrinks `len(a) + len(b)` by at least one bit, so 128 rounds reach
/// `a = 0, b = gcd(x, m)` for any 63-bit modulus.
pub fn inv_mod(x: u64, m: &OddWordModulus) -> Result<u64> {
    let modulus = m.get();
    if x >= modulus {
        return Err(Error::NotInvertible { value: x, modulus });
    }
    let mut a = x;
    let mut b = modulus;
    let mut u = 1u64;
    let mut v = 0u64;
    for _ in 0..128 {
        let a_odd = ct_mask(a & 1 == 1);
        let a_lt_b = 0u64.wrapping_sub((a.wrapping_sub(b) >> 63) & 1);
        let swap = a_odd & a_lt_b;
        let t = (a ^ b) & swap;
        a ^= t;
        b ^= t;
        let t = (u ^ v) & swap;
        u ^= t;
        v ^= t;
        a = a.wrapping_sub(b & a_odd);
        u = m.sub(u, v & a_odd);
        a >>= 1;
        let u_odd = ct_mask(u & 1 == 1);
        u = (u + (modulus & u_odd)) >> 1;
    }
    if b != 1 {
        return Err(Error::NotInvertible { value: x, modulus });
    }
    Ok(v)
}

/// Strong probable-prime test of odd `r = d*2^u + 1` to base `a`.
pub fn is_strong_pseudoprime(r: u64, a: u64) -> bool {
    let Ok(m) = OddWordModulus::new(r) else {
        return false;
    };
    let a = a % r;
    if a == 0 {
        return true;
    }
    let rm1 = r - 1;
    let u = rm1.trailing_zeros();
    let d = rm1 >> u;
    let one = 1 % r;
    let minus_one = rm1;
    let mut x = m.pow(a, d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..u {
        x = m.mul(x, x);
        if x == minus_one {
            return true;
        }
    }
    false
}

/// Strong probable-prime test for moduli at or above 2^63, using plain
/// 128-bit remainders. Only ever applied to public values.
fn is_strong_pseudoprime_wide(r: u64, a: u64) -> bool {
    let mulmod = |x: u64, y: u64| ((u128::from(x) * u128::from(y)) % u128::from(r)) as u64;
    let rm1 = r - 1;
    let u = rm1.trailing_zeros();
    let mut d = rm1 >> u;
    let mut x = 1u64;
    let mut base = a % r;
    while d > 0 {
        if d & 1 == 1 {
            x = mulmod(x, base);
        }
        base = mulmod(base, base);
        d >>= 1;
    }
    if x == 1 || x == rm1 {
        return true;
    }
    for _ in 1..u {
        x = mulmod(x, x);
        if x == rm1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for every 64-bit `n`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n >> 63 != 0 {
        return DETERMINISTIC_BASES.iter().all(|&a| is_strong_pseudoprime_wide(n, a));
    }
    DETERMINISTIC_BASES.iter().all(|&a| is_strong_pseudoprime(n, a))
}

/// Bit length `b` of sampled primes, `8 <= b <= 62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeWidth(u32);

impl PrimeWidth {
    pub const W31: PrimeWidth = PrimeWidth(31);

    pub fn new(bits: u32) -> Result<Self> {
        if !(8..=62).contains(&bits) {
            return Err(Error::InvalidParameter("prime width must be in [8, 62]"));
        }
        Ok(Self(bits))
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// Smallest value of the width, `2^(b-1)`.
    pub const fn lower(self) -> u64 {
        1 << (self.0 - 1)
    }

    /// Default number of candidate draws before giving up: `10 * 2^b / b`.
    pub fn default_budget(self) -> u64 {
        10u64.saturating_mul(1u64 << self.0) / u64::from(self.0)
    }
}

/// Whether an odd candidate of the given width is accepted as prime.
///
/// At 31 bits the three-base strong-pseudoprime test plus the single known
/// exception is exact; other widths use the 12-base deterministic set.
pub fn accepts_candidate(r: u64, width: PrimeWidth) -> bool {
    if r & 1 == 0 || r <= width.lower() || r >> width.bits() != 0 {
        return false;
    }
    if width.bits() == 31 {
        r != SPSP_235_EXCEPTION && [2, 3, 5].iter().all(|&a| is_strong_pseudoprime(r, a))
    } else {
        is_prime(r)
    }
}

/// Samples a uniformly random prime `2^(b-1) < r < 2^b` not in `exclude`.
pub fn sample_prime<R: RngCore + ?Sized>(
    width: PrimeWidth,
    rng: &mut R,
    exclude: &[u64],
) -> Result<OddWordModulus> {
    sample_prime_with_budget(width, rng, exclude, width.default_budget())
}

pub fn sample_prime_with_budget<R: RngCore + ?Sized>(
    width: PrimeWidth,
    rng: &mut R,
    exclude: &[u64],
    budget: u64,
) -> Result<OddWordModulus> {
    let b = width.bits();
    let mask = (1u64 << b) - 1;
    for _ in 0..budget {
        let candidate = (rng.next_u64() & mask) | width.lower() | 1;
        if accepts_candidate(candidate, width) && !exclude.contains(&candidate) {
            return OddWordModulus::new(candidate);
        }
    }
    Err(Error::Exhausted)
}

/// Bounds `(lower, upper)` on the number of `mu`-bit primes:
/// `0.975 * 2^(mu-1) / ((mu-1) ln 2) < #Primes(mu) < 2^(mu-1) / ((mu-1) ln 2)`.
pub fn count_primes_bounds(mu: u32) -> Result<(f64, f64)> {
    if mu < 8 {
        return Err(Error::InvalidParameter("prime count bounds need mu >= 8"));
    }
    let upper = libm::ldexp(1.0, mu as i32 - 1) / (f64::from(mu - 1) * core::f64::consts::LN_2);
    Ok((0.975 * upper, upper))
}
