//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so every line is printed whether or
//! not a criterion passes. Exits non-zero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(a <= b)` also fails on NaN
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use compverify_core::ecrt::{
    min_precision, mod_ecrt_setup_with_precision, mod_ecrt_traced, q_coefficients, PrimeBasis, RnsResidues,
    MAX_PRECISION,
};
use compverify_core::modmath::{
    accepts_candidate, is_strong_pseudoprime, sample_prime, PrimeWidth, SPSP_235_EXCEPTION,
};
use compverify_core::rw::{rw_ckeygen, rw_cverify, rw_forge_known_ell, rw_keygen, rw_sign, rw_verify, rw_vkeygen};
use compverify_core::security::{
    cumulative_bound, enumerate_kernels, simulate_segp_game, Adversary, ToyGame,
};
use compverify_core::squirrels::toy::{toy_keygen, toy_sign, ToyConfig};
use compverify_core::squirrels::{
    choose_t, ckeygen, ckeygen_with_width, cverify, cverify_tallied, random_vk, verify, verify_tallied, vkeygen,
    SquirrelsInstance, SquirrelsParams, SquirrelsPublicKey, SquirrelsSignature,
};
use compverify_core::tally::OpTally;
use compverify_core::wave::toy::{default_toy_params, wave_toy_keygen, wave_toy_sign};
use compverify_core::wave::{
    compressed_syndrome_is_zero, wave_choose_c, wave_ckeygen, wave_cverify, wave_cverify_tallied, wave_mu,
    wave_verify, wave_verify_tallied, wave_vkeygen, TritVec, WaveInstance, WaveParams, WavePublicKey,
    WaveSignature, WaveVerificationKey,
};
use compverify_core::Verdict;
use num_bigint::BigUint;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within_limit(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:.2?}, limit {limit:?}"));
    }
    Ok(took)
}

/// `|observed − expected| ≤ 3σ` for a sum of independent Bernoulli trials.
fn within_3_sigma(observed: u64, expected: f64, variance: f64) -> bool {
    (observed as f64 - expected).abs() <= 3.0 * variance.sqrt()
}

fn squirrels_sizes() -> Outcome {
    let start = Instant::now();
    // (instance, t, μ, |CK|, |VK|, |PK|, |PK|:|VK|)
    let rows = [
        (SquirrelsInstance::I, 5, 121.1, 3360, 20700, 681_780, 32.94),
        (SquirrelsInstance::II, 5, 121.1, 3820, 23300, 874_576, 37.54),
        (SquirrelsInstance::III, 8, 189.5, 8480, 49824, 1_629_640, 32.71),
        (SquirrelsInstance::IV, 8, 189.5, 8896, 55008, 1_888_700, 34.34),
        (SquirrelsInstance::V, 11, 256.3, 15048, 90508, 2_786_580, 30.79),
    ];
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    for (inst, t, mu, ck, vk, pk, ratio) in rows {
        let params = SquirrelsParams::named(inst);
        let (got_t, got_mu) = choose_t(f64::from(inst.table().lambda));
        ensure!(got_t == t, "{}: t = {got_t}, expected {t}", inst.name());
        ensure!((got_mu - mu).abs() <= 0.05, "{}: mu = {got_mu:.3}, expected {mu}", inst.name());
        let pk_len = SquirrelsPublicKey::random(&params, &mut rng).serialized_len();
        let ck_len = ckeygen(&params, t, &mut rng).map_err(|e| e.to_string())?.serialized_len();
        let vk_len = random_vk(&params, t, &mut rng).map_err(|e| e.to_string())?.serialized_len();
        ensure!(
            (pk_len, ck_len, vk_len) == (pk, ck, vk),
            "{}: (PK, CK, VK) = {:?}, expected {:?}",
            inst.name(),
            (pk_len, ck_len, vk_len),
            (pk, ck, vk)
        );
        let got_ratio = pk_len as f64 / vk_len as f64;
        ensure!((got_ratio - ratio).abs() < 0.005, "{}: ratio {got_ratio:.3}", inst.name());
    }
    let took = within_limit(start, Duration::from_secs(1))?;
    Ok(format!("5 instances, {took:.2?}"))
}

fn squirrels_k_bounds() -> Outcome {
    let start = Instant::now();
    let expected = [
        (SquirrelsInstance::I, -91554, 8_551_824),
        (SquirrelsInstance::II, -106_640, 9_631_610),
        (SquirrelsInstance::III, -144_446, 9_603_896),
        (SquirrelsInstance::IV, -15879, 14_220_809),
        (SquirrelsInstance::V, -210_152, 17_040_602),
    ];
    let mut mismatches = Vec::new();
    for (inst, lo, hi) in expected {
        let (got_lo, got_hi) = SquirrelsParams::named(inst).k_prime_bounds();
        if got_lo != lo {
            mismatches.push(format!("{} k'min {got_lo} vs expected {lo}", inst.name()));
        }
        if got_hi != hi {
            mismatches.push(format!("{} k'max {got_hi} vs expected {hi}", inst.name()));
        }
    }
    ensure!(mismatches.is_empty(), "{}", mismatches.join("; "));
    let took = within_limit(start, Duration::from_secs(1))?;
    Ok(format!("10 entries, {took:.2?}"))
}

fn wave_sizes() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(103);
    for (inst, c, mu) in [(WaveInstance::W822, 80, 126.8), (WaveInstance::W1249, 120, 190.2), (WaveInstance::W1644, 160, 253.6)] {
        let (got_c, got_mu) = wave_choose_c(f64::from(inst.table().lambda));
        ensure!(got_c == c, "{}: c = {got_c}", inst.name());
        ensure!((wave_mu(c) - mu).abs() <= 0.05 && got_mu == wave_mu(c), "{}: mu = {got_mu:.3}", inst.name());
        let params = WaveParams::named(inst);
        let vk = WaveVerificationKey::random(&params, c, &mut rng);
        ensure!(
            vk.serialized_len() == c * (params.n - c) / 4,
            "{}: VK {} bytes, c(n-c)/4 = {}",
            inst.name(),
            vk.serialized_len(),
            c * (params.n - c) / 4
        );
    }
    Ok("3 instances".into())
}

fn random_below(bound: &BigUint, rng: &mut ChaCha20Rng) -> BigUint {
    let mut bytes = vec![0u8; bound.to_bytes_le().len() + 8];
    rng.fill_bytes(&mut bytes);
    BigUint::from_bytes_le(&bytes) % bound
}

fn sample_distinct(count: usize, widths: (u32, u32), exclude: &mut Vec<u64>, rng: &mut ChaCha20Rng) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let bits = widths.0 + (rng.next_u32() % (widths.1 - widths.0 + 1));
        if let Ok(p) = sample_prime(PrimeWidth::new(bits).unwrap(), rng, exclude) {
            exclude.push(p.get());
            out.push(p.get());
        }
    }
    out
}

fn ecrt_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(104);
    let (mut exact_cases, mut shifted) = (0u64, 0u64);
    for case in 0..10_000 {
        let s = 1 + (rng.next_u32() % 200) as usize;
        let t = 1 + (rng.next_u32() % 4) as usize;
        let mut used = Vec::new();
        let p_list = sample_distinct(s, (12, 31), &mut used, &mut rng);
        let r_list = sample_distinct(t, (8, 62), &mut used, &mut rng);
        let p = PrimeBasis::new(&p_list).unwrap();
        let r = PrimeBasis::new(&r_list).unwrap();
        let a = min_precision(s) + rng.next_u32() % 8;
        let a = a.min(MAX_PRECISION);
        let pre = mod_ecrt_setup_with_precision(&p, &r, a).map_err(|e| format!("case {case}: {e}"))?;
        let delta: BigUint = p_list.iter().map(|&x| BigUint::from(x)).product();
        // A tenth of the cases land in the top sliver where the shift is allowed.
        let x = if case % 10 == 0 {
            let margin = (&delta * BigUint::from(s)) >> a;
            &delta - 1u32 - random_below(&(margin + 1u32), &mut rng).min(&delta - 1u32)
        } else {
            random_below(&delta, &mut rng)
        };
        let residues: Vec<u64> = p_list.iter().map(|&pi| (&x % pi).try_into().unwrap()).collect();
        let (z, _) = mod_ecrt_traced(&pre, &q_coefficients(&p), &RnsResidues::new(residues, &p).unwrap());
        let exact: Vec<u64> = r_list.iter().map(|&rk| (&x % rk).try_into().unwrap()).collect();
        let minus: Vec<u64> = r_list
            .iter()
            .zip(&exact)
            .map(|(&rk, &xr)| {
                let d: u64 = (&delta % rk).try_into().unwrap();
                ((u128::from(xr) + u128::from(rk) - u128::from(d)) % u128::from(rk)) as u64
            })
            .collect();
        let got = z.values();
        ensure!(got == exact.as_slice() || got == minus.as_slice(), "case {case}: s={s} t={t} a={a} result outside {{x, x-Δ}}");
        // x < (1 − s/2^a)Δ  ⇔  2^a x < (2^a − s)Δ
        let below = (&x << a) < (BigUint::from((1u64 << a) - s as u64) * &delta);
        if below {
            exact_cases += 1;
            ensure!(got == exact.as_slice(), "case {case}: s={s} a={a} shifted below the threshold");
        }
        if got != exact.as_slice() {
            shifted += 1;
        }
    }
    let took = within_limit(start, Duration::from_secs(30))?;
    Ok(format!("10^4 instances, {exact_cases} below threshold, {shifted} shifted, {took:.2?}"))
}

fn completeness() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(105);
    let toy = toy_keygen(&ToyConfig::default(), &mut rng).map_err(|e| e.to_string())?;
    let mut sq_checked = 0;
    for key in 0..10 {
        let t = 1 + key % 3;
        let ck = ckeygen(&toy.params, t, &mut rng).map_err(|e| e.to_string())?;
        let vk = vkeygen(&ck, &toy.pk, &toy.params).map_err(|e| e.to_string())?;
        for i in 0..100u32 {
            let m = [key.to_le_bytes().as_slice(), &i.to_le_bytes()].concat();
            let sig = toy_sign(&toy.secret, &m, &toy.params, &mut rng).map_err(|e| e.to_string())?;
            ensure!(verify(&sig, &m, &toy.pk, &toy.params) == Ok(Verdict::Accept), "squirrels toy signature rejected");
            ensure!(
                cverify(&sig, &m, &vk, &toy.params) == Ok(Verdict::Accept),
                "squirrels: verify accepted, cverify rejected (ck {key}, msg {i})"
            );
            sq_checked += 1;
        }
    }
    let params = default_toy_params();
    let pk = wave_toy_keygen(&params, &mut rng);
    let mut wave_checked = 0;
    for key in 0..10 {
        let c = 4 + 4 * (key % 3);
        let ck = wave_ckeygen(&params, c, &mut rng).map_err(|e| e.to_string())?;
        let vk = wave_vkeygen(&pk, &ck, &params).map_err(|e| e.to_string())?;
        for i in 0..100u32 {
            let m = [key.to_le_bytes().as_slice(), &i.to_le_bytes()].concat();
            let sig = wave_toy_sign(&pk, &m, &params, 100_000, &mut rng).map_err(|e| e.to_string())?;
            ensure!(wave_verify(&sig, &m, &pk, &params) == Ok(Verdict::Accept), "wave toy signature rejected");
            ensure!(
                wave_cverify(&sig, &m, &vk, &params) == Ok(Verdict::Accept),
                "wave: verify accepted, cverify rejected (ck {key}, msg {i})"
            );
            wave_checked += 1;
        }
    }
    Ok(format!("{sq_checked} Squirrels and {wave_checked} Wave signatures over 10 CKs each"))
}

fn wave_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(106);
    let params = default_toy_params();
    let pk = wave_toy_keygen(&params, &mut rng);
    let trials = 100_000u64;
    let mut accepted = 0u64;
    let mut vk = None;
    for i in 0..trials {
        // A fresh compression key every thousand trials.
        if i % 1000 == 0 {
            let ck = wave_ckeygen(&params, 4, &mut rng).map_err(|e| e.to_string())?;
            vk = Some(wave_vkeygen(&pk, &ck, &params).map_err(|e| e.to_string())?);
        }
        let t = loop {
            let t = TritVec::random(params.n, &mut rng);
            if !t.is_zero() {
                break t;
            }
        };
        if compressed_syndrome_is_zero(&t, vk.as_ref().unwrap(), &mut OpTally::default()) {
            accepted += 1;
        }
    }
    let p = 3f64.powi(-4);
    let expected = p * trials as f64;
    ensure!(
        within_3_sigma(accepted, expected, expected * (1.0 - p)),
        "{accepted} accepted, expected {expected:.0}"
    );
    let took = within_limit(start, Duration::from_secs(60))?;
    Ok(format!("{accepted}/{trials} accepted, expected {expected:.0}, {took:.2?}"))
}

fn squirrels_soundness() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(107);
    let config = ToyConfig::default();
    let keys: Vec<_> = (0..4).map(|_| toy_keygen(&config, &mut rng)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut signed: Vec<Vec<(Vec<u8>, SquirrelsSignature)>> = Vec::new();
    for (k, toy) in keys.iter().enumerate() {
        let mut sigs = Vec::new();
        for i in 0..100u32 {
            let m = [(k as u32).to_le_bytes(), i.to_le_bytes()].concat();
            sigs.push((m.clone(), toy_sign(&toy.secret, &m, &toy.params, &mut rng).map_err(|e| e.to_string())?));
        }
        signed.push(sigs);
    }
    let width = PrimeWidth::new(16).unwrap();
    let trials = 100_000u64;
    let (mut accepted, mut expected, mut variance) = (0u64, 0.0, 0.0);
    let mut done = 0u64;
    while done < trials {
        let k = (rng.next_u32() % keys.len() as u32) as usize;
        let toy = &keys[k];
        let (m, sig) = &signed[k][(rng.next_u32() % 100) as usize];
        let mut bad = sig.clone();
        let i = (rng.next_u32() as usize) % toy.params.n;
        let step = 1 + (rng.next_u32() % 3) as i16;
        bad.s[i] += if rng.next_u32() & 1 == 0 { step } else { -step };
        if bad.norm_sq() > toy.params.beta_sq {
            continue;
        }
        if verify(&bad, m, &toy.pk, &toy.params) != Ok(Verdict::Reject) {
            return Err("tampered signature passed full verification".into());
        }
        let ck = ckeygen_with_width(&toy.params, 1, width, &mut rng).map_err(|e| e.to_string())?;
        let vk = vkeygen(&ck, &toy.pk, &toy.params).map_err(|e| e.to_string())?;
        let r = ck.secret_basis().get(0) as f64;
        let p = (toy.params.k_prime_range() + 1) as f64 / r;
        expected += p;
        variance += p * (1.0 - p);
        if cverify(&bad, m, &vk, &toy.params) == Ok(Verdict::Accept) {
            accepted += 1;
        }
        done += 1;
    }
    ensure!(within_3_sigma(accepted, expected, variance), "{accepted} accepted, expected {expected:.1}");
    Ok(format!("{accepted}/{trials} accepted, expected {expected:.1} ± {:.1}", 3.0 * variance.sqrt()))
}

fn rw_distinguisher() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(108);
    let sk = rw_keygen(256, &mut rng).map_err(|e| e.to_string())?;
    let n = sk.modulus().clone();
    let ell = rw_ckeygen(31, &mut rng).map_err(|e| e.to_string())?;
    let vk = rw_vkeygen(ell, &n);
    for i in 0..100u32 {
        let m = i.to_le_bytes();
        let forged = rw_forge_known_ell(&ell, &m, &n, &mut rng);
        ensure!(rw_cverify(&forged, &m, &vk) == Ok(Verdict::Accept), "forgery {i} rejected by cverify");
        ensure!(rw_verify(&forged, &m, &n) == Ok(Verdict::Reject), "forgery {i} accepted by verify");
    }
    for i in 0..1000u32 {
        let m = [b"honest".as_slice(), &i.to_le_bytes()].concat();
        let sig = rw_sign(&sk, &m, &mut rng);
        ensure!(rw_verify(&sig, &m, &n) == Ok(Verdict::Accept), "honest {i} rejected by verify");
        ensure!(rw_cverify(&sig, &m, &vk) == Ok(Verdict::Accept), "honest {i} rejected by cverify");
    }
    Ok("100 forgeries split the verifiers, 1000 honest accepted by both".into())
}

fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_sampler() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(109);
    for i in 0..10_000 {
        let p = sample_prime(PrimeWidth::W31, &mut rng, &[]).map_err(|e| e.to_string())?.get();
        ensure!(p >> 30 == 1, "sample {i}: {p} is not 31 bits");
        ensure!(trial_division_is_prime(p), "sample {i}: {p} is composite");
    }
    let x = SPSP_235_EXCEPTION;
    ensure!(x == 1_157_839_381, "wrong exception constant");
    ensure!([2, 3, 5].iter().all(|&a| is_strong_pseudoprime(x, a)), "{x} is not a {{2,3,5}} pseudoprime");
    ensure!(!trial_division_is_prime(x), "{x} is prime");
    ensure!(!accepts_candidate(x, PrimeWidth::W31), "{x} accepted");
    Ok("10^4 samples prime by trial division, 1157839381 rejected".into())
}

fn segp_simulator() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(110);
    let trials = 20_000;
    let mut notes = Vec::new();
    for c in 1..=2 {
        let game = ToyGame::Wave { m: 4, c };
        let (s_size, kappa) = game.family_size().map_err(|e| e.to_string())?;
        let kernels = enumerate_kernels(4, c);
        let containing = kernels.iter().filter(|k| k.contains(&1)).count();
        ensure!(
            kernels.len() as f64 == s_size && containing as f64 == kappa,
            "c={c}: enumeration gives ({}, {containing}), formula ({s_size}, {kappa})",
            kernels.len()
        );
        for queries in [1, 2, 4] {
            let random = simulate_segp_game(game, Adversary::RandomQuery, queries, trials, &mut rng).map_err(|e| e.to_string())?;
            ensure!(random.within_bound(), "c={c} Q={queries}: random rate {:.4} > bound {:.4}", random.rate(), random.bound);
            let scaled = simulate_segp_game(game, Adversary::ScalarMultiple, queries, trials, &mut rng).map_err(|e| e.to_string())?;
            ensure!(scaled.within_bound(), "c={c} Q={queries}: scalar rate {:.4} > bound", scaled.rate());
            ensure!(scaled.late_wins == 0, "c={c} Q={queries}: scalar multiples won late");
            // No better than random querying: compare with the one-query bound plus noise.
            let single = cumulative_bound(s_size, kappa, 1).map_err(|e| e.to_string())?;
            let sigma = (single * (1.0 - single) / trials as f64).sqrt();
            ensure!(
                scaled.rate() <= single + 3.0 * sigma && scaled.rate() <= random.rate() + 3.0 * sigma,
                "c={c} Q={queries}: scalar rate {:.4} beats random {:.4}",
                scaled.rate(),
                random.rate()
            );
            let replay = simulate_segp_game(game, Adversary::ReplayRejected, queries, trials, &mut rng).map_err(|e| e.to_string())?;
            ensure!(replay.late_wins == 0, "replay won late");
            if queries == 4 {
                notes.push(format!("c={c}: random {:.4}, scalar {:.4}, bound {:.4}", random.rate(), scaled.rate(), random.bound));
            }
        }
    }
    Ok(notes.join("; "))
}

fn tally_speedup() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(111);
    let mut notes = Vec::new();
    for inst in SquirrelsInstance::ALL {
        let params = SquirrelsParams::named(inst);
        let (t, _) = choose_t(f64::from(inst.table().lambda));
        let pk = SquirrelsPublicKey::random(&params, &mut rng);
        let vk = random_vk(&params, t, &mut rng).map_err(|e| e.to_string())?;
        let sig = SquirrelsSignature { salt: [0; 16], s: vec![0; params.n] };
        let (mut full, mut comp) = (OpTally::default(), OpTally::default());
        verify_tallied(&sig, b"m", &pk, &params, &mut full).map_err(|e| e.to_string())?;
        cverify_tallied(&sig, b"m", &vk, &params, &mut comp).map_err(|e| e.to_string())?;
        let ratio = full.ratio_over(&comp);
        let need = params.s() as f64 / (t + 1) as f64;
        ensure!(ratio >= need, "{}: ratio {ratio:.2} < s/(t+1) = {need:.2}", inst.name());
        notes.push(format!("{} {ratio:.1}x", inst.name()));
    }
    for inst in WaveInstance::ALL {
        let params = WaveParams::named(inst);
        let (c, _) = wave_choose_c(f64::from(inst.table().lambda));
        let pk = WavePublicKey::random(&params, &mut rng);
        let vk = WaveVerificationKey::random(&params, c, &mut rng);
        let mut s = TritVec::zeros(params.n);
        for i in 0..params.w {
            s.set(i, 1 + (rng.next_u32() & 1) as u8);
        }
        let sig = WaveSignature { salt: [0; 16], s };
        let (mut full, mut comp) = (OpTally::default(), OpTally::default());
        wave_verify_tallied(&sig, b"m", &pk, &params, &mut full).map_err(|e| e.to_string())?;
        wave_cverify_tallied(&sig, b"m", &vk, &params, &mut comp).map_err(|e| e.to_string())?;
        let ratio = full.ratio_over(&comp);
        let need = params.m() as f64 / (2 * c) as f64;
        ensure!(comp.mul > 0 && ratio >= need, "{}: ratio {ratio:.2} < (n-k)/2c = {need:.2}", inst.name());
        notes.push(format!("{} {ratio:.1}x", inst.name()));
    }
    Ok(notes.join(", "))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("01 named Squirrels sizes and mu", squirrels_sizes),
        ("02 named Squirrels k' bounds", squirrels_k_bounds),
        ("03 named Wave mu and VK size", wave_sizes),
        ("04 explicit CRT oracle", ecrt_oracle),
        ("05 completeness", completeness),
        ("06 Wave soundness rate", wave_soundness),
        ("07 Squirrels soundness rate", squirrels_soundness),
        ("08 Rabin-Williams distinguisher", rw_distinguisher),
        ("09 prime sampler", prime_sampler),
        ("10 SEGP simulator", segp_simulator),
        ("11 operation-count speedup", tally_speedup),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
