//! Security budgets for compressed verification, and a simulator for the
//! underlying guessing game.
//!
//! Forging against a compressed verifier amounts to finding a nonzero
//! element of a hidden submodule `K` (drawn from a family `S`) using only a
//! membership oracle. If every query lies in at most `κ` members of `S`,
//! each rejected query eliminates at most `κ` candidates, so the next query
//! succeeds with probability at most `κ / (#S − κ Q)` after `Q` rejections.
//! All quantities are kept as base-2 logarithms.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::modmath::{is_prime, sample_prime, PrimeWidth};
use crate::squirrels::log2_binomial;
use crate::wave::{f3_matvec, TernaryMatrix, TritVec};

/// `log2 (2^x − 1)`, accurate for all `x > 0`.
fn log2_pow2_minus_one(x: f64) -> f64 {
    x + libm::log1p(-libm::exp2(-x)) / core::f64::consts::LN_2
}

/// `log2 [a, b]_3`, the number of `b`-dimensional subspaces of `F₃^a`.
pub fn three_binomial(a: usize, b: usize) -> f64 {
    assert!(b <= a, "three_binomial needs b <= a");
    let l3 = libm::log2(3.0);
    (0..b)
        .map(|i| log2_pow2_minus_one((a - i) as f64 * l3) - log2_pow2_minus_one((b - i) as f64 * l3))
        .sum()
}

/// `[a, b]_3` exactly, for small arguments.
pub fn three_binomial_exact(a: u32, b: u32) -> Option<u128> {
    if b > a {
        return Some(0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..b {
        num = num.checked_mul(3u128.checked_pow(a - i)? - 1)?;
        den = den.checked_mul(3u128.checked_pow(b - i)? - 1)?;
    }
    Some(num / den)
}

/// `κ / (#S − κ Q)`; fails once `Q` reaches `#S / κ`, at which point the
/// verification key must be replaced.
pub fn segp_success_bound(s_size: f64, kappa: f64, queries: f64) -> Result<f64> {
    let denom = s_size - kappa * queries;
    if denom <= 0.0 {
        return Err(Error::BudgetExceeded);
    }
    Ok((kappa / denom).min(1.0))
}

/// [`segp_success_bound`] in the log domain, returning `log2` of the bound.
pub fn segp_success_bound_log2(s_size_log2: f64, kappa_log2: f64, queries: f64) -> Result<f64> {
    let used = if queries > 0.0 { kappa_log2 + libm::log2(queries) - s_size_log2 } else { f64::NEG_INFINITY };
    if used >= 0.0 {
        return Err(Error::BudgetExceeded);
    }
    let denom_log2 = s_size_log2 + libm::log1p(-libm::exp2(used)) / core::f64::consts::LN_2;
    Ok((kappa_log2 - denom_log2).min(0.0))
}

/// How many candidate kernels a single Squirrels query may lie in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KappaModel {
    /// `κ` treated as a small constant; matches the published `μ` values.
    #[default]
    SmallConstant,
    /// `κ = C(s, t)`, the conservative heuristic.
    Binomial,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecurityBudget {
    pub mu: f64,
    pub q_limit: f64,
    pub s_size_log2: f64,
    pub kappa_log2: f64,
    pub quotient_size_log2: f64,
}

impl SecurityBudget {
    /// Fills in `μ` from `min(#S/κ, #(M/K)) ≥ 2^μ + Q`, taking equality.
    pub fn new(s_size_log2: f64, kappa_log2: f64, quotient_size_log2: f64, q_limit: f64) -> Result<Self> {
        let min = (s_size_log2 - kappa_log2).min(quotient_size_log2);
        let q_log2 = if q_limit > 0.0 { libm::log2(q_limit) } else { f64::NEG_INFINITY };
        if q_log2 >= min {
            return Err(Error::BudgetExceeded);
        }
        let mu = min + libm::log1p(-libm::exp2(q_log2 - min)) / core::f64::consts::LN_2;
        Ok(Self { mu, q_limit, s_size_log2, kappa_log2, quotient_size_log2 })
    }

    /// Whether `min(#S/κ, #(M/K)) ≥ 2^μ + Q` holds, up to rounding.
    pub fn satisfies_limit(&self) -> bool {
        let min = (self.s_size_log2 - self.kappa_log2).min(self.quotient_size_log2);
        let rhs = libm::log2(libm::exp2(self.mu - min) + self.q_limit * libm::exp2(-min)) + min;
        min >= rhs - 1e-9
    }

    /// Success bound for the next query after `queries` rejections.
    pub fn success_bound_log2(&self, queries: f64) -> Result<f64> {
        segp_success_bound_log2(self.s_size_log2, self.kappa_log2, queries)
    }
}

/// `t` secret 31-bit primes drawn from the `s`-prime public basis' complement.
pub fn squirrels_budget(s: usize, t: usize, q_limit: f64, model: KappaModel) -> Result<SecurityBudget> {
    if t == 0 || t > s {
        return Err(Error::InvalidParameter("need 0 < t <= s"));
    }
    let s_size = crate::squirrels::secret_primes_mu(t);
    let kappa = match model {
        KappaModel::SmallConstant => 0.0,
        KappaModel::Binomial => log2_binomial(s as f64, t),
    };
    SecurityBudget::new(s_size, kappa, 31.0 * t as f64, q_limit)
}

/// Codimension-`c` kernels in `F₃^{n−k}`.
pub fn wave_budget(n: usize, k: usize, c: usize, q_limit: f64) -> Result<SecurityBudget> {
    if k >= n || c == 0 || c >= n - k {
        return Err(Error::InvalidParameter("need k < n and 0 < c < n - k"));
    }
    let m = n - k;
    let s_size = three_binomial(m, m - c);
    let kappa = three_binomial(m - 1, m - c - 1);
    SecurityBudget::new(s_size, kappa, c as f64 * libm::log2(3.0), q_limit)
}

/// Desk-scale instances of the guessing game.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyGame {
    /// `K` a uniformly random codimension-`c` subspace of `F₃^m`.
    Wave { m: usize, c: usize },
    /// `K = rZ` for a random `bits`-bit prime `r`; queries lie in `[1, max_query]`.
    Squirrels { bits: u32, max_query: u64 },
}

impl ToyGame {
    /// `(#S, κ)` for this game.
    pub fn family_size(&self) -> Result<(f64, f64)> {
        match *self {
            ToyGame::Wave { m, c } => {
                if c == 0 || c >= m || m > 40 {
                    return Err(Error::InvalidParameter("toy Wave game needs 0 < c < m <= 40"));
                }
                let s = three_binomial_exact(m as u32, (m - c) as u32).ok_or(Error::InvalidParameter("too large"))?;
                let k = three_binomial_exact(m as u32 - 1, (m - c - 1) as u32)
                    .ok_or(Error::InvalidParameter("too large"))?;
                Ok((s as f64, k as f64))
            }
            ToyGame::Squirrels { bits, max_query } => {
                if !(8..=24).contains(&bits) || max_query < 2 {
                    return Err(Error::InvalidParameter("toy Squirrels game needs 8..=24 bit primes"));
                }
                let lo = 1u64 << (bits - 1);
                let count = (lo + 1..lo << 1).filter(|&p| is_prime(p)).count();
                // A query below 2^L has at most L / (bits − 1) prime factors above 2^(bits−1).
                let log_q = 64 - max_query.leading_zeros();
                let kappa = (log_q / (bits - 1)).max(1);
                Ok((count as f64, f64::from(kappa)))
            }
        }
    }
}

/// Query strategies. Each starts with one uniformly random query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adversary {
    /// Fresh uniform queries throughout.
    RandomQuery,
    /// Repeats the first query.
    ReplayRejected,
    /// Scales the first query by successive nonzero constants.
    ScalarMultiple,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    pub queries: u64,
    /// Trials in which some query hit `K`.
    pub wins: u64,
    /// Trials won by a query other than the first.
    pub late_wins: u64,
    /// `Σ_{i<Q} κ / (#S − κ i)`, bounding the chance of any win.
    pub bound: f64,
}

impl SimulationReport {
    pub fn rate(&self) -> f64 {
        self.wins as f64 / self.trials as f64
    }

    pub fn late_rate(&self) -> f64 {
        self.late_wins as f64 / self.trials as f64
    }

    /// Whether the observed rate is within three binomial standard
    /// deviations of being below the bound.
    pub fn within_bound(&self) -> bool {
        let p = self.bound.min(1.0);
        let sigma = libm::sqrt(p * (1.0 - p) / self.trials as f64);
        self.rate() <= p + 3.0 * sigma
    }
}

/// Cumulative bound over `queries` queries.
pub fn cumulative_bound(s_size: f64, kappa: f64, queries: u64) -> Result<f64> {
    (0..queries).try_fold(0.0, |acc, i| Ok(acc + segp_success_bound(s_size, kappa, i as f64)?))
}

/// Plays `trials` independent games of `queries` queries, each against a
/// freshly drawn `K`.
pub fn simulate_segp_game<R: RngCore + ?Sized>(
    game: ToyGame,
    adversary: Adversary,
    queries: u64,
    trials: u64,
    rng: &mut R,
) -> Result<SimulationReport> {
    if queries == 0 {
        return Err(Error::InvalidParameter("at least one query is required"));
    }
    let (s_size, kappa) = game.family_size()?;
    let bound = cumulative_bound(s_size, kappa, queries)?;
    let mut report = SimulationReport { trials, queries, wins: 0, late_wins: 0, bound };
    for _ in 0..trials {
        let won_at = match game {
            ToyGame::Wave { m, c } => play_wave(m, c, adversary, queries, rng),
            ToyGame::Squirrels { bits, max_query } => play_squirrels(bits, max_query, adversary, queries, rng)?,
        };
        if let Some(i) = won_at {
            report.wins += 1;
            if i > 0 {
                report.late_wins += 1;
            }
        }
    }
    Ok(report)
}

fn random_full_rank<R: RngCore + ?Sized>(m: usize, c: usize, rng: &mut R) -> TernaryMatrix {
    loop {
        let cm = TernaryMatrix::random(m, c, rng);
        if cm.rank() == c {
            return cm;
        }
    }
}

fn random_nonzero<R: RngCore + ?Sized>(m: usize, rng: &mut R) -> TritVec {
    loop {
        let t = TritVec::random(m, rng);
        if !t.is_zero() {
            return t;
        }
    }
}

/// Index of the first winning query, if any.
fn play_wave<R: RngCore + ?Sized>(m: usize, c: usize, adv: Adversary, queries: u64, rng: &mut R) -> Option<u64> {
    // The kernel of x ↦ xC is uniform over codimension-c subspaces when C
    // is a uniform full-rank matrix.
    let secret = random_full_rank(m, c, rng);
    let first = random_nonzero(m, rng);
    (0..queries).find(|&i| {
        let q = match (adv, i) {
            (_, 0) | (Adversary::ReplayRejected, _) => first.clone(),
            (Adversary::RandomQuery, _) => random_nonzero(m, rng),
            (Adversary::ScalarMultiple, i) if i % 2 == 1 => first.neg(),
            (Adversary::ScalarMultiple, _) => first.clone(),
        };
        f3_matvec(&q, &secret).expect("dimensions agree").is_zero()
    })
}

fn play_squirrels<R: RngCore + ?Sized>(
    bits: u32,
    max_query: u64,
    adv: Adversary,
    queries: u64,
    rng: &mut R,
) -> Result<Option<u64>> {
    let r = sample_prime(PrimeWidth::new(bits)?, rng, &[])?.get();
    let draw = |rng: &mut R| 1 + rng.next_u64() % max_query;
    let first = draw(rng);
    let mut won = None;
    for i in 0..queries {
        let q = match (adv, i) {
            (_, 0) | (Adversary::ReplayRejected, _) => u128::from(first),
            (Adversary::RandomQuery, _) => u128::from(draw(rng)),
            (Adversary::ScalarMultiple, i) => u128::from(first) * u128::from(i + 1),
        };
        if q % u128::from(r) == 0 {
            won = Some(i);
            break;
        }
    }
    Ok(won)
}

/// All codimension-`c` subspaces of `F₃^m` as sorted member lists, found
/// by brute force over every `m × c` matrix. Exponential; test use only.
pub fn enumerate_kernels(m: usize, c: usize) -> Vec<Vec<u32>> {
    let space = 3u32.pow(m as u32);
    let entries = m * c;
    let mut out: Vec<Vec<u32>> = Vec::new();
    for code in 0..3u64.pow(entries as u32) {
        let mut cm = TernaryMatrix::zeros(m, c);
        let mut x = code;
        for e in 0..entries {
            cm.set(e / c, e % c, (x % 3) as u8);
            x /= 3;
        }
        if cm.rank() != c {
            continue;
        }
        let members: Vec<u32> = (0..space).filter(|&v| f3_matvec(&index_to_vec(v, m), &cm).expect("dims").is_zero()).collect();
        if let Err(pos) = out.binary_search(&members) {
            out.insert(pos, members);
        }
    }
    out
}

fn index_to_vec(mut v: u32, m: usize) -> TritVec {
    let mut t = TritVec::zeros(m);
    for i in 0..m {
        t.set(i, (v % 3) as u8);
        v /= 3;
    }
    t
}
